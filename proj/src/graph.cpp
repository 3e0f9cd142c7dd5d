#include "comem/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "comem/errors.hpp"

namespace comem {

CoMembershipGraph::CoMembershipGraph(std::vector<NodeInfo> nodes, const std::vector<Edge> &edges) {
    const int n = static_cast<int>(nodes.size());

    // Canonical node order: sorted by id. Edge endpoints are remapped.
    std::vector<int> perm(nodes.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::sort(perm.begin(), perm.end(),
              [&](int a, int b) { return nodes[static_cast<std::size_t>(a)].id <
                                         nodes[static_cast<std::size_t>(b)].id; });
    std::vector<int> newIndex(nodes.size());
    nodes_.reserve(nodes.size());
    for (int pos = 0; pos < n; ++pos) {
        newIndex[static_cast<std::size_t>(perm[static_cast<std::size_t>(pos)])] = pos;
        nodes_.push_back(std::move(nodes[static_cast<std::size_t>(perm[static_cast<std::size_t>(pos)])]));
    }

    index_.reserve(nodes_.size());
    for (int i = 0; i < n; ++i) {
        const auto &id = nodes_[static_cast<std::size_t>(i)].id;
        if (id.empty()) {
            throw DataError("graph: empty node id");
        }
        if (!index_.emplace(id, i).second) {
            throw DataError("graph: duplicate node id \"" + id + "\"");
        }
    }

    adjacency_.assign(nodes_.size(), {});
    strength_.assign(nodes_.size(), 0.0);
    minWeight_ = std::numeric_limits<double>::infinity();
    for (const auto &e : edges) {
        if (e.source < 0 || e.source >= n || e.target < 0 || e.target >= n) {
            throw DataError("graph: edge endpoint out of range");
        }
        const int i = newIndex[static_cast<std::size_t>(e.source)];
        const int j = newIndex[static_cast<std::size_t>(e.target)];
        if (i == j) {
            throw DataError("graph: self-loop on node \"" + nodes_[static_cast<std::size_t>(i)].id + "\"");
        }
        if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
            throw DataError("graph: edge weight must be positive and finite");
        }
        adjacency_[static_cast<std::size_t>(i)].emplace_back(j, e.weight);
        adjacency_[static_cast<std::size_t>(j)].emplace_back(i, e.weight);
        strength_[static_cast<std::size_t>(i)] += e.weight;
        strength_[static_cast<std::size_t>(j)] += e.weight;
        totalWeight_ += e.weight;
        minWeight_ = std::min(minWeight_, e.weight);
        ++edgeCount_;
    }
    if (edgeCount_ == 0) {
        minWeight_ = 0.0;
    }

    for (std::size_t i = 0; i < adjacency_.size(); ++i) {
        auto &nbrs = adjacency_[i];
        std::sort(nbrs.begin(), nbrs.end());
        for (std::size_t k = 1; k < nbrs.size(); ++k) {
            if (nbrs[k].first == nbrs[k - 1].first) {
                throw DataError("graph: duplicate edge between \"" + nodes_[i].id + "\" and \"" +
                                nodes_[static_cast<std::size_t>(nbrs[k].first)].id + "\"");
            }
        }
    }
}

int CoMembershipGraph::indexOf(const std::string &id) const {
    auto it = index_.find(id);
    return it == index_.end() ? -1 : it->second;
}

std::vector<Edge> CoMembershipGraph::edgeList() const {
    std::vector<Edge> edges;
    edges.reserve(static_cast<std::size_t>(edgeCount_));
    forEachEdge([&](int i, int j, double w) { edges.push_back({i, j, w}); });
    return edges;
}

CoMembershipGraph project(const AffiliationDataset &ds, double minWeight) {
    if (minWeight < 0.0) {
        throw std::invalid_argument("project: minWeight must be >= 0");
    }
    const auto &groups = ds.groups();
    const int n = static_cast<int>(groups.size());

    std::vector<NodeInfo> nodes;
    nodes.reserve(groups.size());
    std::vector<std::int64_t> memberCounts(groups.size(), 0);
    for (int i = 0; i < n; ++i) {
        const auto &g = groups[static_cast<std::size_t>(i)];
        const auto &members = ds.membersOf(g.id);
        memberCounts[static_cast<std::size_t>(i)] = static_cast<std::int64_t>(members.size());
        nodes.push_back({g.id, g.name, g.description, memberCounts[static_cast<std::size_t>(i)]});
    }

    // Per-user group lists; every pair of groups a user belongs to bumps that
    // pair's intersection count. Groups are already id-sorted, so indices are
    // the positions in `groups`.
    std::unordered_map<std::string, std::vector<int>> userGroups;
    userGroups.reserve(ds.membershipCount());
    {
        std::unordered_map<std::string, int> index;
        index.reserve(groups.size());
        for (int i = 0; i < n; ++i) {
            index.emplace(groups[static_cast<std::size_t>(i)].id, i);
        }
        for (const auto &m : ds.memberships()) {
            userGroups[m.userId].push_back(index.at(m.groupId));
        }
    }

    std::unordered_map<std::int64_t, std::int64_t> intersection;
    for (auto &[user, list] : userGroups) {
        std::sort(list.begin(), list.end());
        for (std::size_t a = 0; a < list.size(); ++a) {
            for (std::size_t b = a + 1; b < list.size(); ++b) {
                const std::int64_t key =
                    static_cast<std::int64_t>(list[a]) * n + list[b];
                ++intersection[key];
            }
        }
    }

    std::vector<Edge> edges;
    edges.reserve(intersection.size());
    for (const auto &[key, common] : intersection) {
        const int i = static_cast<int>(key / n);
        const int j = static_cast<int>(key % n);
        const std::int64_t unionSize =
            memberCounts[static_cast<std::size_t>(i)] + memberCounts[static_cast<std::size_t>(j)] - common;
        const double w = static_cast<double>(common) / static_cast<double>(unionSize);
        if (w > minWeight) {
            edges.push_back({i, j, w});
        }
    }
    return CoMembershipGraph(std::move(nodes), edges);
}

GraphStats compute_stats(const CoMembershipGraph &g, const std::vector<double> &thresholds) {
    GraphStats stats;
    stats.nodeCount = g.nodeCount();
    stats.edgeCount = g.edgeCount();
    const std::int64_t n = stats.nodeCount;
    stats.density = n >= 2 ? static_cast<double>(stats.edgeCount) /
                                 (static_cast<double>(n) * static_cast<double>(n - 1) / 2.0)
                           : 0.0;

    for (double t : thresholds) {
        std::int64_t below = 0;
        g.forEachEdge([&](int, int, double w) {
            if (w <= t) {
                ++below;
            }
        });
        stats.weightQuantiles[t] =
            stats.edgeCount > 0 ? static_cast<double>(below) / static_cast<double>(stats.edgeCount)
                                : 0.0;
    }

    std::vector<int> component(static_cast<std::size_t>(n), -1);
    int componentCount = 0;
    int largest = 0;
    for (int start = 0; start < n; ++start) {
        if (component[static_cast<std::size_t>(start)] >= 0) {
            continue;
        }
        int size = 0;
        std::deque<int> queue{start};
        component[static_cast<std::size_t>(start)] = componentCount;
        while (!queue.empty()) {
            const int v = queue.front();
            queue.pop_front();
            ++size;
            for (const auto &[u, w] : g.neighbors(v)) {
                if (component[static_cast<std::size_t>(u)] < 0) {
                    component[static_cast<std::size_t>(u)] = componentCount;
                    queue.push_back(u);
                }
            }
        }
        largest = std::max(largest, size);
        ++componentCount;
    }
    stats.componentCount = componentCount;
    stats.largestComponentSize = largest;
    return stats;
}

CoMembershipGraph induced_subgraph(const CoMembershipGraph &g,
                                   const std::vector<std::string> &nodeIds) {
    std::vector<int> keep;
    keep.reserve(nodeIds.size());
    std::unordered_set<std::string> seen;
    for (const auto &id : nodeIds) {
        const int idx = g.indexOf(id);
        if (idx < 0) {
            throw DataError("induced_subgraph: unknown node \"" + id + "\"");
        }
        if (seen.insert(id).second) {
            keep.push_back(idx);
        }
    }
    std::sort(keep.begin(), keep.end());

    std::vector<int> remap(static_cast<std::size_t>(g.nodeCount()), -1);
    std::vector<NodeInfo> nodes;
    nodes.reserve(keep.size());
    for (std::size_t pos = 0; pos < keep.size(); ++pos) {
        remap[static_cast<std::size_t>(keep[pos])] = static_cast<int>(pos);
        nodes.push_back(g.node(keep[pos]));
    }

    std::vector<Edge> edges;
    g.forEachEdge([&](int i, int j, double w) {
        const int a = remap[static_cast<std::size_t>(i)];
        const int b = remap[static_cast<std::size_t>(j)];
        if (a >= 0 && b >= 0) {
            edges.push_back({a, b, w});
        }
    });
    return CoMembershipGraph(std::move(nodes), edges);
}

} // namespace comem
