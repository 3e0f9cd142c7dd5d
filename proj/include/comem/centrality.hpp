#pragma once

#include <string>
#include <utility>
#include <vector>

#include "comem/graph.hpp"

namespace comem {

enum class Measure { Eigenvector, Betweenness, Degree };
enum class DistanceMode { InverseWeight, Unit };

/// Per-node scores for one measure plus a ranking sorted by descending
/// score, ties broken by node id ascending. Scores are indexed like the
/// graph's node table; nodeIds is a copy so reports stay usable on their
/// own.
struct CentralityReport {
    Measure measure = Measure::Degree;
    std::vector<std::string> nodeIds;
    std::vector<double> scores;
    std::vector<int> ranking;
};

struct PowerIterationOptions {
    double tol = 1e-10;
    int maxIter = 10000;
};

/// Dominant eigenvector of the weighted adjacency matrix by power iteration
/// from the uniform vector, normalised to unit Euclidean norm. Converged
/// when successive iterates differ by less than tol in max-norm. Throws
/// NonConvergenceError (carrying the last iterate) past maxIter and
/// DataError for empty or edgeless graphs.
CentralityReport eigenvector_centrality(const CoMembershipGraph &g,
                                        PowerIterationOptions options = {});

/// Brandes accumulation over weighted shortest paths, edge distance 1/w
/// (InverseWeight) or 1 (Unit). Normalised scores divide by (n-1)(n-2)/2
/// pair counts so values lie in [0,1]; graphs with fewer than three nodes
/// score all zero.
CentralityReport betweenness_centrality(const CoMembershipGraph &g,
                                        DistanceMode mode = DistanceMode::InverseWeight,
                                        bool normalized = true);

/// Weighted degree (strength): the sum of incident edge weights.
CentralityReport degree_centrality(const CoMembershipGraph &g);

/// First k entries of the ranking with their scores; k past the node count
/// returns everything.
std::vector<std::pair<std::string, double>> top_k(const CentralityReport &report, int k);

std::string to_string(Measure m);

} // namespace comem
