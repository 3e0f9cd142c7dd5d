#include "comem/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "comem/errors.hpp"

namespace comem::io {

namespace {

using nlohmann::json;

// Full-precision decimal form that parses back to the same double.
std::string number_repr(double value) {
    return json(value).dump();
}

json parse_json(std::istream &in, const std::string &what) {
    try {
        return json::parse(in);
    } catch (const json::parse_error &e) {
        throw DataError(what + ": invalid JSON: " + e.what());
    }
}

} // namespace

std::string xml_escape(const std::string &s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '"':
            out += "&quot;";
            break;
        case '\'':
            out += "&apos;";
            break;
        default:
            out += c;
            break;
        }
    }
    return out;
}

void write_graphml(std::ostream &out, const CoMembershipGraph &g) {
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<graphml xmlns=\"http://graphml.graphdrawing.org/xmlns\">\n"
        << "  <key id=\"d0\" for=\"node\" attr.name=\"name\" attr.type=\"string\"/>\n"
        << "  <key id=\"d1\" for=\"node\" attr.name=\"members\" attr.type=\"long\"/>\n"
        << "  <key id=\"d2\" for=\"edge\" attr.name=\"weight\" attr.type=\"double\"/>\n"
        << "  <graph id=\"G\" edgedefault=\"undirected\">\n";
    for (const auto &node : g.nodes()) {
        out << "    <node id=\"" << xml_escape(node.id) << "\">\n"
            << "      <data key=\"d0\">" << xml_escape(node.name) << "</data>\n"
            << "      <data key=\"d1\">" << node.memberCount << "</data>\n"
            << "    </node>\n";
    }
    std::int64_t edgeId = 0;
    g.forEachEdge([&](int i, int j, double w) {
        out << "    <edge id=\"e" << edgeId++ << "\" source=\"" << xml_escape(g.node(i).id)
            << "\" target=\"" << xml_escape(g.node(j).id) << "\">\n"
            << "      <data key=\"d2\">" << number_repr(w) << "</data>\n"
            << "    </edge>\n";
    });
    out << "  </graph>\n</graphml>\n";
}

void write_gexf(std::ostream &out, const CoMembershipGraph &g) {
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<gexf xmlns=\"http://www.gexf.net/1.3\" version=\"1.3\">\n"
        << "  <graph defaultedgetype=\"undirected\">\n"
        << "    <attributes class=\"node\">\n"
        << "      <attribute id=\"0\" title=\"name\" type=\"string\"/>\n"
        << "      <attribute id=\"1\" title=\"members\" type=\"long\"/>\n"
        << "    </attributes>\n"
        << "    <nodes>\n";
    for (const auto &node : g.nodes()) {
        out << "      <node id=\"" << xml_escape(node.id) << "\" label=\"" << xml_escape(node.name)
            << "\">\n"
            << "        <attvalues>\n"
            << "          <attvalue for=\"0\" value=\"" << xml_escape(node.name) << "\"/>\n"
            << "          <attvalue for=\"1\" value=\"" << node.memberCount << "\"/>\n"
            << "        </attvalues>\n"
            << "      </node>\n";
    }
    out << "    </nodes>\n    <edges>\n";
    std::int64_t edgeId = 0;
    g.forEachEdge([&](int i, int j, double w) {
        out << "      <edge id=\"" << edgeId++ << "\" source=\"" << xml_escape(g.node(i).id)
            << "\" target=\"" << xml_escape(g.node(j).id) << "\" weight=\"" << number_repr(w)
            << "\"/>\n";
    });
    out << "    </edges>\n  </graph>\n</gexf>\n";
}

void write_graph_json(std::ostream &out, const CoMembershipGraph &g) {
    json doc;
    doc["nodes"] = json::array();
    for (const auto &node : g.nodes()) {
        doc["nodes"].push_back({{"id", node.id},
                                {"name", node.name},
                                {"description", node.description},
                                {"members", node.memberCount}});
    }
    doc["edges"] = json::array();
    g.forEachEdge([&](int i, int j, double w) {
        doc["edges"].push_back({{"source", g.node(i).id}, {"target", g.node(j).id}, {"weight", w}});
    });
    out << doc.dump(2) << '\n';
}

CoMembershipGraph read_graph_json(std::istream &in) {
    const json doc = parse_json(in, "graph");
    if (!doc.is_object() || !doc.contains("nodes") || !doc.contains("edges")) {
        throw DataError("graph: expected an object with 'nodes' and 'edges'");
    }
    try {
        std::vector<NodeInfo> nodes;
        std::unordered_map<std::string, int> index;
        for (const auto &n : doc["nodes"]) {
            NodeInfo info;
            info.id = n.at("id").get<std::string>();
            info.name = n.value("name", std::string{});
            info.description = n.value("description", std::string{});
            info.memberCount = n.value("members", std::int64_t{0});
            index.emplace(info.id, static_cast<int>(nodes.size()));
            nodes.push_back(std::move(info));
        }
        std::vector<Edge> edges;
        for (const auto &e : doc["edges"]) {
            const std::string source = e.at("source").get<std::string>();
            const std::string target = e.at("target").get<std::string>();
            auto si = index.find(source);
            auto ti = index.find(target);
            if (si == index.end() || ti == index.end()) {
                throw DataError("graph: edge references unknown node \"" +
                                (si == index.end() ? source : target) + "\"");
            }
            edges.push_back({si->second, ti->second, e.at("weight").get<double>()});
        }
        return CoMembershipGraph(std::move(nodes), edges);
    } catch (const json::exception &e) {
        throw DataError(std::string("graph: malformed document: ") + e.what());
    }
}

void write_cover_json(std::ostream &out, const Cover &cover) {
    json doc;
    doc["params"] = {{"resolution", cover.params.resolution},
                     {"min_size", cover.params.minSize},
                     {"n_trials", cover.params.nTrials},
                     {"consensus_fraction", cover.params.consensusFraction},
                     {"dedup_jaccard", cover.params.dedupJaccard},
                     {"rng_seed", cover.params.rngSeed},
                     {"max_cleanup_iters", cover.params.maxCleanupIters}};
    doc["universe"] = cover.universe;
    doc["communities"] = json::array();
    for (const auto &community : cover.communities) {
        doc["communities"].push_back({{"id", community.id},
                                      {"size", community.nodes.size()},
                                      {"nodes", community.nodes},
                                      {"trial_support", community.trialSupport}});
    }
    out << doc.dump(2) << '\n';
}

Cover read_cover_json(std::istream &in) {
    const json doc = parse_json(in, "cover");
    if (!doc.is_object() || !doc.contains("communities")) {
        throw DataError("cover: expected an object with 'communities'");
    }
    try {
        Cover cover;
        if (doc.contains("params")) {
            const auto &p = doc["params"];
            cover.params.resolution = p.value("resolution", cover.params.resolution);
            cover.params.minSize = p.value("min_size", cover.params.minSize);
            cover.params.nTrials = p.value("n_trials", cover.params.nTrials);
            cover.params.consensusFraction =
                p.value("consensus_fraction", cover.params.consensusFraction);
            cover.params.dedupJaccard = p.value("dedup_jaccard", cover.params.dedupJaccard);
            cover.params.rngSeed = p.value("rng_seed", cover.params.rngSeed);
            cover.params.maxCleanupIters =
                p.value("max_cleanup_iters", cover.params.maxCleanupIters);
        }
        if (doc.contains("universe")) {
            cover.universe = doc["universe"].get<std::vector<std::string>>();
        }
        for (const auto &c : doc["communities"]) {
            Community community;
            community.id = c.at("id").get<int>();
            community.nodes = c.at("nodes").get<std::vector<std::string>>();
            community.trialSupport = c.value("trial_support", 0);
            cover.communities.push_back(std::move(community));
        }
        return cover;
    } catch (const json::exception &e) {
        throw DataError(std::string("cover: malformed document: ") + e.what());
    }
}

void write_centrality_tsv(std::ostream &out, const CentralityReport &report,
                          const CoMembershipGraph &g, int top) {
    out << "rank\tnode_id\tname\tscore\n";
    const std::size_t count =
        top < 0 ? report.ranking.size()
                : std::min(report.ranking.size(), static_cast<std::size_t>(top));
    char buffer[32];
    for (std::size_t r = 0; r < count; ++r) {
        const int idx = report.ranking[r];
        const auto &id = report.nodeIds[static_cast<std::size_t>(idx)];
        const int gi = g.indexOf(id);
        std::snprintf(buffer, sizeof(buffer), "%.4f", report.scores[static_cast<std::size_t>(idx)]);
        out << (r + 1) << '\t' << id << '\t' << (gi >= 0 ? g.node(gi).name : std::string{}) << '\t'
            << buffer << '\n';
    }
}

void write_stats_json(std::ostream &out, const GraphStats &stats) {
    json doc;
    doc["node_count"] = stats.nodeCount;
    doc["edge_count"] = stats.edgeCount;
    doc["density"] = stats.density;
    doc["component_count"] = stats.componentCount;
    doc["largest_component_size"] = stats.largestComponentSize;
    json quantiles = json::object();
    for (const auto &[threshold, fraction] : stats.weightQuantiles) {
        quantiles[number_repr(threshold)] = fraction;
    }
    doc["weight_quantiles"] = quantiles;
    out << doc.dump(2) << '\n';
}

void write_overlap_json(std::ostream &out, const OverlapStats &stats, const Cover &cover) {
    json doc;
    json histogram = json::object();
    for (const auto &[multiplicity, count] : stats.multiplicityHistogram) {
        histogram[std::to_string(multiplicity)] = count;
    }
    doc["multiplicity_histogram"] = histogram;
    doc["communities"] = json::array();
    for (std::size_t i = 0; i < stats.overlapPercent.size(); ++i) {
        const auto &[id, percent] = stats.overlapPercent[i];
        std::size_t size = 0;
        for (const auto &community : cover.communities) {
            if (community.id == id) {
                size = community.nodes.size();
                break;
            }
        }
        doc["communities"].push_back(
            {{"id", id}, {"size", size}, {"overlap_percent", percent}});
    }
    out << doc.dump(2) << '\n';
}

void write_labels_json(std::ostream &out, const LabelSet &labels) {
    json doc = json::object();
    for (const auto &[id, terms] : labels.nameLabels) {
        doc[std::to_string(id)]["name_label"] = terms;
    }
    for (const auto &[id, terms] : labels.descriptionLabels) {
        doc[std::to_string(id)]["description_label"] = terms;
    }
    out << doc.dump(2) << '\n';
}

namespace {

std::string join_terms(const std::vector<std::string> &terms) {
    std::string out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (i > 0) {
            out += ", ";
        }
        out += terms[i];
    }
    return out;
}

} // namespace

void write_labels_tsv(std::ostream &out, const LabelSet &labels, const Cover &cover) {
    out << "community_id\tsize\tname_label\tdescription_label\n";
    for (const auto &community : cover.communities) {
        const auto nameIt = labels.nameLabels.find(community.id);
        const auto descIt = labels.descriptionLabels.find(community.id);
        out << community.id << '\t' << community.nodes.size() << '\t'
            << (nameIt != labels.nameLabels.end() ? join_terms(nameIt->second) : std::string{})
            << '\t'
            << (descIt != labels.descriptionLabels.end() ? join_terms(descIt->second)
                                                         : std::string{})
            << '\n';
    }
}

void write_groups_json(std::ostream &out, const std::vector<GroupRecord> &groups) {
    json doc = json::array();
    for (const auto &g : groups) {
        json rec = {{"id", g.id},
                    {"name", g.name},
                    {"description", g.description},
                    {"city", g.city},
                    {"visibility", to_string(g.visibility)}};
        if (g.declaredMemberCount) {
            rec["members"] = *g.declaredMemberCount;
        }
        doc.push_back(std::move(rec));
    }
    out << doc.dump(2) << '\n';
}

void write_memberships_json(std::ostream &out, const std::vector<MembershipRecord> &memberships) {
    json doc = json::array();
    for (const auto &m : memberships) {
        doc.push_back({{"user_id", m.userId}, {"group_id", m.groupId}});
    }
    out << doc.dump(2) << '\n';
}

void atomic_write(const std::string &path, const std::function<void(std::ostream &)> &fn) {
    const std::string partial = path + ".partial";
    {
        std::ofstream out(partial, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw DataError("cannot open \"" + partial + "\" for writing");
        }
        fn(out);
        out.flush();
        if (!out) {
            throw DataError("failed writing \"" + partial + "\"");
        }
    }
    std::error_code ec;
    std::filesystem::rename(partial, path, ec);
    if (ec) {
        throw DataError("cannot move \"" + partial + "\" into place: " + ec.message());
    }
}

} // namespace comem::io
