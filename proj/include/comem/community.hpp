#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "comem/graph.hpp"

namespace comem {

struct DetectionParams {
    double resolution = 0.1;       // significance threshold in (0,1)
    int minSize = 5;               // communities below this are discarded
    int nTrials = 10;              // independent detection passes
    double consensusFraction = 0.5; // fraction of trials a community must appear in
    double dedupJaccard = 0.8;     // near-duplicate collapse threshold
    std::uint64_t rngSeed = 42;
    int maxCleanupIters = 50;
};

struct Community {
    int id = 0;
    std::vector<std::string> nodes; // sorted group ids
    int trialSupport = 0;           // trials in which a matching community appeared
};

/// Overlapping community assignment over a fixed node universe. Nodes may
/// belong to several communities or none.
struct Cover {
    DetectionParams params;
    std::vector<std::string> universe; // sorted node ids of the underlying graph
    std::vector<Community> communities;
};

/// Grows a community from the seed by repeatedly admitting the most
/// significant external neighbour under the order-statistic test, until no
/// candidate clears params.resolution. Returns sorted node indices; a seed
/// with no significant neighbour yields just itself.
std::vector<int> expand_seed(const CoMembershipGraph &g, int seed, const DetectionParams &params);

/// Alternates pruning insignificant members and re-running the admission
/// step until a fixed point or params.maxCleanupIters. May return an empty
/// set (community rejected).
std::vector<int> clean_community(const CoMembershipGraph &g, std::vector<int> members,
                                 const DetectionParams &params);

/// Full detection: nTrials seeded passes, cross-trial matching at node-set
/// Jaccard >= 0.5, consensus filtering, a final clean-up pass, min-size
/// filtering, and near-duplicate collapse. Deterministic given
/// params.rngSeed; trials run in parallel with derived seeds.
Cover detect_cover(const CoMembershipGraph &g, const DetectionParams &params);

struct OverlapStats {
    std::map<int, int> multiplicityHistogram; // communities-per-node -> node count (>= 1 only)
    std::vector<std::pair<int, double>> overlapPercent; // community id -> % of members shared
};

OverlapStats overlap_stats(const Cover &cover, const CoMembershipGraph &g);

/// Omega index: chance-corrected agreement of per-pair co-membership
/// multiplicities, clamped to [0,1]. Throws DataError when the covers have
/// different universes.
double compare_covers(const Cover &a, const Cover &b);

} // namespace comem
