#pragma once

#include <functional>
#include <iosfwd>
#include <string>

#include "comem/affiliation.hpp"
#include "comem/centrality.hpp"
#include "comem/community.hpp"
#include "comem/graph.hpp"
#include "comem/labelling.hpp"

namespace comem::io {

// Graph exports carry node attributes `name` and `members` plus the edge
// attribute `weight` at full precision. The JSON form additionally keeps
// descriptions so it round-trips the whole structure.
void write_graphml(std::ostream &out, const CoMembershipGraph &g);
void write_gexf(std::ostream &out, const CoMembershipGraph &g);
void write_graph_json(std::ostream &out, const CoMembershipGraph &g);
CoMembershipGraph read_graph_json(std::istream &in);

void write_cover_json(std::ostream &out, const Cover &cover);
Cover read_cover_json(std::istream &in);

/// TSV with columns rank, node_id, name, score (4 decimal places). top < 0
/// writes all nodes.
void write_centrality_tsv(std::ostream &out, const CentralityReport &report,
                          const CoMembershipGraph &g, int top = -1);

void write_stats_json(std::ostream &out, const GraphStats &stats);
void write_overlap_json(std::ostream &out, const OverlapStats &stats, const Cover &cover);

void write_labels_json(std::ostream &out, const LabelSet &labels);
void write_labels_tsv(std::ostream &out, const LabelSet &labels, const Cover &cover);

// Canonical dataset artifacts reuse the ingest JSON schemas.
void write_groups_json(std::ostream &out, const std::vector<GroupRecord> &groups);
void write_memberships_json(std::ostream &out, const std::vector<MembershipRecord> &memberships);

/// Writes through `path + ".partial"` and renames into place on success, so
/// failures never leave a well-named truncated artifact.
void atomic_write(const std::string &path, const std::function<void(std::ostream &)> &fn);

std::string xml_escape(const std::string &s);

} // namespace comem::io
