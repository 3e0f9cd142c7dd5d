#include "comem/community.hpp"

#include <algorithm>
#include <limits>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <thread>
#include <unordered_map>

#include "comem/errors.hpp"
#include "comem/significance.hpp"

namespace comem {

namespace {

void validate_params(const DetectionParams &p) {
    if (!(p.resolution > 0.0) || !(p.resolution < 1.0)) {
        throw std::invalid_argument("detection: resolution must lie in (0,1)");
    }
    if (p.minSize < 1) {
        throw std::invalid_argument("detection: minSize must be >= 1");
    }
    if (p.nTrials < 1) {
        throw std::invalid_argument("detection: nTrials must be >= 1");
    }
    if (!(p.consensusFraction > 0.0) || p.consensusFraction > 1.0) {
        throw std::invalid_argument("detection: consensusFraction must lie in (0,1]");
    }
    if (!(p.dedupJaccard > 0.0) || p.dedupJaccard > 1.0) {
        throw std::invalid_argument("detection: dedupJaccard must lie in (0,1]");
    }
    if (p.maxCleanupIters < 1) {
        throw std::invalid_argument("detection: maxCleanupIters must be >= 1");
    }
}

// Incremental community bookkeeping: membership flags, each node's summed
// edge weight into the current set, and the set's total strength.
class CommunityState {
public:
    explicit CommunityState(const CoMembershipGraph &g)
        : g_(g), inSet_(static_cast<std::size_t>(g.nodeCount()), 0),
          weightInto_(static_cast<std::size_t>(g.nodeCount()), 0.0) {
        totalStrength_ = 2.0 * g.totalEdgeWeight();
        quantum_ = g.minPositiveWeight();
        if (!(quantum_ > 0.0)) {
            quantum_ = 1.0; // edgeless graph; every score degenerates to 1
        }
    }

    void add(int v) {
        inSet_[static_cast<std::size_t>(v)] = 1;
        members_.push_back(v);
        communityStrength_ += g_.strength(v);
        for (const auto &[u, w] : g_.neighbors(v)) {
            weightInto_[static_cast<std::size_t>(u)] += w;
        }
    }

    void remove(int v) {
        inSet_[static_cast<std::size_t>(v)] = 0;
        members_.erase(std::find(members_.begin(), members_.end(), v));
        communityStrength_ -= g_.strength(v);
        for (const auto &[u, w] : g_.neighbors(v)) {
            weightInto_[static_cast<std::size_t>(u)] -= w;
        }
    }

    bool contains(int v) const { return inSet_[static_cast<std::size_t>(v)] != 0; }
    const std::vector<int> &members() const { return members_; }
    std::size_t size() const { return members_.size(); }

    double candidateScore(int v) const {
        const SignificanceContext ctx{communityStrength_, totalStrength_, quantum_};
        return r_score(ctx, g_.strength(v), weightInto_[static_cast<std::size_t>(v)]);
    }

    // Member scored against the community without itself.
    double memberScore(int v) const {
        const SignificanceContext ctx{communityStrength_ - g_.strength(v), totalStrength_,
                                      quantum_};
        return r_score(ctx, g_.strength(v), weightInto_[static_cast<std::size_t>(v)]);
    }

    double weightInto(int v) const { return weightInto_[static_cast<std::size_t>(v)]; }

    std::vector<int> sortedMembers() const {
        std::vector<int> out = members_;
        std::sort(out.begin(), out.end());
        return out;
    }

private:
    const CoMembershipGraph &g_;
    std::vector<char> inSet_;
    std::vector<double> weightInto_;
    std::vector<int> members_;
    double communityStrength_ = 0.0;
    double totalStrength_ = 0.0;
    double quantum_ = 1.0;
};

// One admission round: score every external node with an edge into the set,
// apply the order-statistic test over the sorted scores, and return the
// candidate with the smallest acceptance probability if it clears the
// resolution, else -1.
int best_significant_candidate(const CommunityState &state, const CoMembershipGraph &g,
                               double resolution) {
    std::vector<std::pair<double, int>> candidates;
    for (int v = 0; v < g.nodeCount(); ++v) {
        if (!state.contains(v) && state.weightInto(v) > 0.0) {
            candidates.emplace_back(state.candidateScore(v), v);
        }
    }
    if (candidates.empty()) {
        return -1;
    }
    std::sort(candidates.begin(), candidates.end());
    const int m = static_cast<int>(candidates.size());
    double bestOmega = std::numeric_limits<double>::infinity();
    int bestRank = -1;
    for (int q = 1; q <= m; ++q) {
        const double omega =
            order_statistic_probability(q, m, candidates[static_cast<std::size_t>(q - 1)].first);
        if (omega < bestOmega) {
            bestOmega = omega;
            bestRank = q;
        }
    }
    if (bestOmega < resolution) {
        return candidates[static_cast<std::size_t>(bestRank - 1)].second;
    }
    return -1;
}

void admit_all_significant(CommunityState &state, const CoMembershipGraph &g,
                           const DetectionParams &params, bool &changed) {
    int next = -1;
    while ((next = best_significant_candidate(state, g, params.resolution)) >= 0) {
        state.add(next);
        changed = true;
    }
}

double node_set_jaccard(const std::vector<int> &a, const std::vector<int> &b) {
    std::size_t i = 0;
    std::size_t j = 0;
    std::size_t common = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] == b[j]) {
            ++common;
            ++i;
            ++j;
        } else if (a[i] < b[j]) {
            ++i;
        } else {
            ++j;
        }
    }
    const std::size_t unionSize = a.size() + b.size() - common;
    return unionSize == 0 ? 0.0 : static_cast<double>(common) / static_cast<double>(unionSize);
}

// Deterministic in-place shuffle; std::shuffle's draws differ across
// standard libraries.
void fisher_yates(std::vector<int> &values, std::mt19937_64 &rng) {
    for (std::size_t i = values.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(values[i - 1], values[j]);
    }
}

std::vector<std::vector<int>> run_trial(const CoMembershipGraph &g, const DetectionParams &params,
                                        std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::vector<int> order(static_cast<std::size_t>(g.nodeCount()));
    for (int i = 0; i < g.nodeCount(); ++i) {
        order[static_cast<std::size_t>(i)] = i;
    }
    fisher_yates(order, rng);

    std::vector<char> assigned(static_cast<std::size_t>(g.nodeCount()), 0);
    std::vector<std::vector<int>> communities;
    for (int seedNode : order) {
        if (assigned[static_cast<std::size_t>(seedNode)]) {
            continue;
        }
        auto community = clean_community(g, expand_seed(g, seedNode, params), params);
        if (community.empty()) {
            continue;
        }
        for (int v : community) {
            assigned[static_cast<std::size_t>(v)] = 1;
        }
        communities.push_back(std::move(community));
    }
    return communities;
}

struct Cluster {
    std::vector<int> representative;            // first-seen variant, used for matching
    std::map<std::vector<int>, int> variants;   // exact node set -> occurrence count
    std::set<int> trials;
};

} // namespace

std::vector<int> expand_seed(const CoMembershipGraph &g, int seed, const DetectionParams &params) {
    if (seed < 0 || seed >= g.nodeCount()) {
        throw std::invalid_argument("expand_seed: seed out of range");
    }
    validate_params(params);
    CommunityState state(g);
    state.add(seed);
    int next = -1;
    while ((next = best_significant_candidate(state, g, params.resolution)) >= 0) {
        state.add(next);
    }
    return state.sortedMembers();
}

std::vector<int> clean_community(const CoMembershipGraph &g, std::vector<int> members,
                                 const DetectionParams &params) {
    validate_params(params);
    if (members.empty()) {
        return {};
    }
    CommunityState state(g);
    std::sort(members.begin(), members.end());
    members.erase(std::unique(members.begin(), members.end()), members.end());
    for (int v : members) {
        if (v < 0 || v >= g.nodeCount()) {
            throw std::invalid_argument("clean_community: member out of range");
        }
        state.add(v);
    }

    for (int iter = 0; iter < params.maxCleanupIters; ++iter) {
        bool changed = false;
        // Prune: repeatedly drop the member that fits worst, while it fails
        // the significance threshold against the rest of the set.
        while (state.size() > 0) {
            int worst = -1;
            double worstScore = -1.0;
            for (int v : state.members()) {
                const double score = state.memberScore(v);
                if (score > worstScore || (score == worstScore && (worst < 0 || v < worst))) {
                    worstScore = score;
                    worst = v;
                }
            }
            if (worstScore < params.resolution) {
                break;
            }
            state.remove(worst);
            changed = true;
        }
        if (state.size() == 0) {
            return {};
        }
        admit_all_significant(state, g, params, changed);
        if (!changed) {
            break;
        }
    }
    return state.sortedMembers();
}

Cover detect_cover(const CoMembershipGraph &g, const DetectionParams &params) {
    validate_params(params);
    if (g.nodeCount() == 0) {
        throw DataError("detect_cover: empty graph");
    }

    // Independent trials with derived seeds; results are reduced in trial
    // order so the outcome is a pure function of (g, params).
    std::vector<std::vector<std::vector<int>>> trialResults(
        static_cast<std::size_t>(params.nTrials));
    {
        unsigned threadCount = std::max(1u, std::thread::hardware_concurrency());
        threadCount = std::min<unsigned>(threadCount, static_cast<unsigned>(params.nTrials));
        std::vector<std::thread> workers;
        workers.reserve(threadCount);
        for (unsigned t = 0; t < threadCount; ++t) {
            workers.emplace_back([&, t] {
                for (int trial = static_cast<int>(t); trial < params.nTrials;
                     trial += static_cast<int>(threadCount)) {
                    trialResults[static_cast<std::size_t>(trial)] =
                        run_trial(g, params, params.rngSeed + static_cast<std::uint64_t>(trial));
                }
            });
        }
        for (auto &w : workers) {
            w.join();
        }
    }

    // Cross-trial matching: greedy clustering against first-seen
    // representatives at Jaccard >= 0.5.
    std::vector<Cluster> clusters;
    for (int trial = 0; trial < params.nTrials; ++trial) {
        for (auto &community : trialResults[static_cast<std::size_t>(trial)]) {
            int best = -1;
            double bestJaccard = -1.0;
            for (std::size_t c = 0; c < clusters.size(); ++c) {
                const double j = node_set_jaccard(community, clusters[c].representative);
                if (j >= 0.5 && j > bestJaccard) {
                    bestJaccard = j;
                    best = static_cast<int>(c);
                }
            }
            if (best < 0) {
                Cluster cluster;
                cluster.representative = community;
                cluster.variants.emplace(community, 1);
                cluster.trials.insert(trial);
                clusters.push_back(std::move(cluster));
            } else {
                ++clusters[static_cast<std::size_t>(best)].variants[community];
                clusters[static_cast<std::size_t>(best)].trials.insert(trial);
            }
        }
    }

    struct Candidate {
        std::vector<int> nodes;
        int support = 0;
    };
    std::vector<Candidate> candidates;
    for (const auto &cluster : clusters) {
        const int support = static_cast<int>(cluster.trials.size());
        if (static_cast<double>(support) + 1e-9 <
            params.consensusFraction * static_cast<double>(params.nTrials)) {
            continue;
        }
        // Modal variant; ties resolve to the lexicographically smallest node
        // set via the map order.
        const std::vector<int> *modal = nullptr;
        int bestCount = 0;
        for (const auto &[variant, count] : cluster.variants) {
            if (count > bestCount) {
                bestCount = count;
                modal = &variant;
            }
        }
        auto cleaned = clean_community(g, *modal, params);
        if (static_cast<int>(cleaned.size()) < params.minSize) {
            continue;
        }
        candidates.push_back({std::move(cleaned), support});
    }

    // Near-duplicates collapse to the variant with more trial support.
    std::sort(candidates.begin(), candidates.end(), [](const Candidate &a, const Candidate &b) {
        if (a.support != b.support) {
            return a.support > b.support;
        }
        if (a.nodes.size() != b.nodes.size()) {
            return a.nodes.size() > b.nodes.size();
        }
        return a.nodes < b.nodes;
    });
    std::vector<Candidate> kept;
    for (auto &candidate : candidates) {
        bool duplicate = false;
        for (const auto &existing : kept) {
            if (node_set_jaccard(candidate.nodes, existing.nodes) >= params.dedupJaccard) {
                duplicate = true;
                break;
            }
        }
        if (!duplicate) {
            kept.push_back(std::move(candidate));
        }
    }
    std::sort(kept.begin(), kept.end(), [](const Candidate &a, const Candidate &b) {
        if (a.nodes.size() != b.nodes.size()) {
            return a.nodes.size() > b.nodes.size();
        }
        return a.nodes < b.nodes;
    });

    Cover cover;
    cover.params = params;
    cover.universe.reserve(static_cast<std::size_t>(g.nodeCount()));
    for (const auto &node : g.nodes()) {
        cover.universe.push_back(node.id);
    }
    int nextId = 1;
    for (const auto &candidate : kept) {
        Community community;
        community.id = nextId++;
        community.trialSupport = candidate.support;
        community.nodes.reserve(candidate.nodes.size());
        for (int v : candidate.nodes) {
            community.nodes.push_back(g.node(v).id);
        }
        cover.communities.push_back(std::move(community));
    }
    return cover;
}

OverlapStats overlap_stats(const Cover &cover, const CoMembershipGraph &g) {
    std::unordered_map<std::string, int> multiplicity;
    for (const auto &community : cover.communities) {
        for (const auto &id : community.nodes) {
            if (g.indexOf(id) < 0) {
                throw DataError("overlap_stats: community " + std::to_string(community.id) +
                                " references unknown node \"" + id + "\"");
            }
            ++multiplicity[id];
        }
    }

    OverlapStats stats;
    for (const auto &[id, count] : multiplicity) {
        ++stats.multiplicityHistogram[count];
    }
    for (const auto &community : cover.communities) {
        std::size_t shared = 0;
        for (const auto &id : community.nodes) {
            if (multiplicity.at(id) > 1) {
                ++shared;
            }
        }
        const double percent =
            community.nodes.empty()
                ? 0.0
                : 100.0 * static_cast<double>(shared) / static_cast<double>(community.nodes.size());
        stats.overlapPercent.emplace_back(community.id, percent);
    }
    return stats;
}

double compare_covers(const Cover &a, const Cover &b) {
    if (a.universe != b.universe) {
        throw DataError("compare_covers: covers are over different node universes");
    }
    const std::size_t n = a.universe.size();
    if (n < 2) {
        return 1.0;
    }
    std::unordered_map<std::string, int> index;
    index.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        index.emplace(a.universe[i], static_cast<int>(i));
    }

    const std::size_t pairCount = n * (n - 1) / 2;
    auto pair_multiplicities = [&](const Cover &cover) {
        std::vector<int> counts(pairCount, 0);
        for (const auto &community : cover.communities) {
            std::vector<int> ids;
            ids.reserve(community.nodes.size());
            for (const auto &id : community.nodes) {
                ids.push_back(index.at(id));
            }
            std::sort(ids.begin(), ids.end());
            for (std::size_t x = 0; x < ids.size(); ++x) {
                for (std::size_t y = x + 1; y < ids.size(); ++y) {
                    const std::size_t i = static_cast<std::size_t>(ids[x]);
                    const std::size_t j = static_cast<std::size_t>(ids[y]);
                    // index of pair (i,j), i<j, in row-major upper triangle
                    const std::size_t offset = i * n - i * (i + 1) / 2 + (j - i - 1);
                    ++counts[offset];
                }
            }
        }
        return counts;
    };

    const std::vector<int> countsA = pair_multiplicities(a);
    const std::vector<int> countsB = pair_multiplicities(b);

    std::size_t agreements = 0;
    std::map<int, std::size_t> histA;
    std::map<int, std::size_t> histB;
    for (std::size_t p = 0; p < pairCount; ++p) {
        if (countsA[p] == countsB[p]) {
            ++agreements;
        }
        ++histA[countsA[p]];
        ++histB[countsB[p]];
    }
    const double total = static_cast<double>(pairCount);
    const double observed = static_cast<double>(agreements) / total;
    double expected = 0.0;
    for (const auto &[mult, countA] : histA) {
        auto it = histB.find(mult);
        if (it != histB.end()) {
            expected += (static_cast<double>(countA) / total) *
                        (static_cast<double>(it->second) / total);
        }
    }
    if (1.0 - expected <= 1e-15) {
        return observed >= 1.0 - 1e-15 ? 1.0 : 0.0;
    }
    return std::clamp((observed - expected) / (1.0 - expected), 0.0, 1.0);
}

} // namespace comem
