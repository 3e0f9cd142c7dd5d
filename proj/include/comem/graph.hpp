#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "comem/affiliation.hpp"

namespace comem {

struct NodeInfo {
    std::string id;
    std::string name;
    std::string description;
    std::int64_t memberCount = 0;
};

/// One undirected edge, endpoints given as node indices.
struct Edge {
    int source = 0;
    int target = 0;
    double weight = 0.0;
};

/// Undirected weighted graph over groups. Nodes are stored sorted by id so
/// node index order equals id order; each unordered pair carries at most one
/// edge with strictly positive weight.
class CoMembershipGraph {
public:
    CoMembershipGraph() = default;

    /// Takes ownership of the node table and inserts the given edges.
    /// Edge indices refer to the order of `nodes` as passed in; nodes are
    /// re-sorted by id internally and edges remapped. Throws DataError on
    /// duplicate/empty ids, self-loops, duplicate pairs, or non-positive
    /// weights.
    CoMembershipGraph(std::vector<NodeInfo> nodes, const std::vector<Edge> &edges);

    int nodeCount() const { return static_cast<int>(nodes_.size()); }
    std::int64_t edgeCount() const { return edgeCount_; }

    const NodeInfo &node(int i) const { return nodes_[static_cast<std::size_t>(i)]; }
    const std::vector<NodeInfo> &nodes() const { return nodes_; }

    /// Index of a node id, -1 if absent.
    int indexOf(const std::string &id) const;

    std::span<const std::pair<int, double>> neighbors(int i) const {
        return adjacency_[static_cast<std::size_t>(i)];
    }

    /// Sum of incident edge weights (weighted degree).
    double strength(int i) const { return strength_[static_cast<std::size_t>(i)]; }

    double totalEdgeWeight() const { return totalWeight_; }

    /// Smallest stored edge weight; 0 for edgeless graphs.
    double minPositiveWeight() const { return minWeight_; }

    /// Calls f(i, j, w) once per edge with i < j, in index order.
    template <class F>
    void forEachEdge(F &&f) const {
        for (int i = 0; i < nodeCount(); ++i) {
            for (const auto &[j, w] : adjacency_[static_cast<std::size_t>(i)]) {
                if (i < j) {
                    f(i, j, w);
                }
            }
        }
    }

    std::vector<Edge> edgeList() const;

private:
    std::vector<NodeInfo> nodes_;
    std::vector<std::vector<std::pair<int, double>>> adjacency_;
    std::unordered_map<std::string, int> index_;
    std::vector<double> strength_;
    std::int64_t edgeCount_ = 0;
    double totalWeight_ = 0.0;
    double minWeight_ = 0.0;
};

/// Projects the affiliation structure onto groups: the weight of edge (i, j)
/// is the Jaccard index of the two member sets, and an edge is stored iff
/// the sets intersect and the weight exceeds minWeight. Every group becomes
/// a node regardless of degree.
CoMembershipGraph project(const AffiliationDataset &ds, double minWeight = 0.0);

struct GraphStats {
    int nodeCount = 0;
    std::int64_t edgeCount = 0;               // undirected count
    double density = 0.0;                     // edgeCount / (n(n-1)/2), 0 for n < 2
    std::map<double, double> weightQuantiles; // threshold -> fraction of edges with w <= threshold
    int componentCount = 0;
    int largestComponentSize = 0;
};

GraphStats compute_stats(const CoMembershipGraph &g, const std::vector<double> &thresholds);

/// Restriction to the listed nodes and the edges among them, weights
/// unchanged. Throws DataError naming any unknown id.
CoMembershipGraph induced_subgraph(const CoMembershipGraph &g,
                                   const std::vector<std::string> &nodeIds);

} // namespace comem
