#include "comem/centrality.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>
#include <thread>

#include <Eigen/SparseCore>

#include "comem/errors.hpp"

namespace comem {

namespace {

CentralityReport make_report(Measure measure, const CoMembershipGraph &g,
                             std::vector<double> scores) {
    CentralityReport report;
    report.measure = measure;
    report.nodeIds.reserve(static_cast<std::size_t>(g.nodeCount()));
    for (const auto &node : g.nodes()) {
        report.nodeIds.push_back(node.id);
    }
    report.scores = std::move(scores);
    report.ranking.resize(report.scores.size());
    for (std::size_t i = 0; i < report.ranking.size(); ++i) {
        report.ranking[i] = static_cast<int>(i);
    }
    std::sort(report.ranking.begin(), report.ranking.end(), [&](int a, int b) {
        const double sa = report.scores[static_cast<std::size_t>(a)];
        const double sb = report.scores[static_cast<std::size_t>(b)];
        if (sa != sb) {
            return sa > sb;
        }
        return report.nodeIds[static_cast<std::size_t>(a)] < report.nodeIds[static_cast<std::size_t>(b)];
    });
    return report;
}

Eigen::SparseMatrix<double> adjacency_matrix(const CoMembershipGraph &g) {
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(static_cast<std::size_t>(2 * g.edgeCount()));
    g.forEachEdge([&](int i, int j, double w) {
        triplets.emplace_back(i, j, w);
        triplets.emplace_back(j, i, w);
    });
    Eigen::SparseMatrix<double> adjacency(g.nodeCount(), g.nodeCount());
    adjacency.setFromTriplets(triplets.begin(), triplets.end());
    return adjacency;
}

// Path lengths equal within a relative 1e-12 count as ties; exact equality
// is fragile under 1/w arithmetic. Unreached distances (infinity) never tie.
bool near_equal(double a, double b) {
    if (!std::isfinite(a) || !std::isfinite(b)) {
        return false;
    }
    return std::fabs(a - b) <= 1e-12 * std::max({1.0, std::fabs(a), std::fabs(b)});
}

// Single-source Brandes pass: Dijkstra with tie-tolerant shortest-path
// counting, then dependency accumulation into cb.
void accumulate_betweenness(const CoMembershipGraph &g, int source, DistanceMode mode,
                            std::vector<double> &cb) {
    const int n = g.nodeCount();
    constexpr double inf = std::numeric_limits<double>::infinity();

    std::vector<double> dist(static_cast<std::size_t>(n), inf);
    std::vector<double> sigma(static_cast<std::size_t>(n), 0.0);
    std::vector<std::vector<int>> preds(static_cast<std::size_t>(n));
    std::vector<char> settled(static_cast<std::size_t>(n), 0);
    std::vector<int> order;
    order.reserve(static_cast<std::size_t>(n));

    using Entry = std::pair<double, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
    dist[static_cast<std::size_t>(source)] = 0.0;
    sigma[static_cast<std::size_t>(source)] = 1.0;
    queue.push({0.0, source});

    while (!queue.empty()) {
        const auto [d, v] = queue.top();
        queue.pop();
        if (settled[static_cast<std::size_t>(v)]) {
            continue;
        }
        settled[static_cast<std::size_t>(v)] = 1;
        order.push_back(v);
        for (const auto &[u, w] : g.neighbors(v)) {
            if (settled[static_cast<std::size_t>(u)]) {
                continue;
            }
            const double length = mode == DistanceMode::Unit ? 1.0 : 1.0 / w;
            const double candidate = dist[static_cast<std::size_t>(v)] + length;
            if (near_equal(candidate, dist[static_cast<std::size_t>(u)])) {
                sigma[static_cast<std::size_t>(u)] += sigma[static_cast<std::size_t>(v)];
                preds[static_cast<std::size_t>(u)].push_back(v);
            } else if (candidate < dist[static_cast<std::size_t>(u)]) {
                dist[static_cast<std::size_t>(u)] = candidate;
                sigma[static_cast<std::size_t>(u)] = sigma[static_cast<std::size_t>(v)];
                preds[static_cast<std::size_t>(u)].assign(1, v);
                queue.push({candidate, u});
            }
        }
    }

    std::vector<double> delta(static_cast<std::size_t>(n), 0.0);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
        const int v = *it;
        for (int p : preds[static_cast<std::size_t>(v)]) {
            delta[static_cast<std::size_t>(p)] += sigma[static_cast<std::size_t>(p)] /
                                                  sigma[static_cast<std::size_t>(v)] *
                                                  (1.0 + delta[static_cast<std::size_t>(v)]);
        }
        if (v != source) {
            cb[static_cast<std::size_t>(v)] += delta[static_cast<std::size_t>(v)];
        }
    }
}

} // namespace

std::string to_string(Measure m) {
    switch (m) {
    case Measure::Eigenvector:
        return "eigenvector";
    case Measure::Betweenness:
        return "betweenness";
    case Measure::Degree:
        return "degree";
    }
    return "unknown";
}

CentralityReport eigenvector_centrality(const CoMembershipGraph &g,
                                        PowerIterationOptions options) {
    const int n = g.nodeCount();
    if (n == 0) {
        throw DataError("eigenvector_centrality: empty graph");
    }
    if (g.edgeCount() == 0) {
        throw DataError("eigenvector_centrality: graph has no edges");
    }
    if (!(options.tol > 0.0)) {
        throw std::invalid_argument("eigenvector_centrality: tol must be positive");
    }

    const Eigen::SparseMatrix<double> adjacency = adjacency_matrix(g);
    // Bipartite-like graphs carry a -lambda_max eigenvalue, under which the
    // plain iteration oscillates forever. Shifting by the maximum strength
    // (a Gershgorin bound on |lambda|) keeps the spectrum non-negative and
    // leaves every eigenvector unchanged.
    double shift = 0.0;
    for (int i = 0; i < n; ++i) {
        shift = std::max(shift, g.strength(i));
    }
    Eigen::VectorXd v = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
    for (int iter = 0; iter < options.maxIter; ++iter) {
        const Eigen::VectorXd av = adjacency * v;
        const double lambda = v.dot(av); // Rayleigh quotient; v stays unit-norm
        Eigen::VectorXd next = av + shift * v;
        const double norm = next.norm();
        if (!(norm > 0.0)) {
            throw DataError("eigenvector_centrality: iterate collapsed to zero");
        }
        next /= norm;
        const double diff = (next - v).lpNorm<Eigen::Infinity>();
        const double residual = lambda > 0.0 ? (av - lambda * v).norm() / lambda
                                             : std::numeric_limits<double>::infinity();
        if (diff < options.tol && residual <= 10.0 * options.tol) {
            return make_report(Measure::Eigenvector, g,
                               std::vector<double>(v.data(), v.data() + n));
        }
        v = next;
    }
    throw NonConvergenceError("eigenvector_centrality: no convergence within " +
                                  std::to_string(options.maxIter) + " iterations",
                              std::vector<double>(v.data(), v.data() + n));
}

CentralityReport betweenness_centrality(const CoMembershipGraph &g, DistanceMode mode,
                                        bool normalized) {
    const int n = g.nodeCount();
    if (n == 0) {
        throw DataError("betweenness_centrality: empty graph");
    }
    std::vector<double> cb(static_cast<std::size_t>(n), 0.0);
    if (n >= 3) {
        unsigned threadCount = std::max(1u, std::thread::hardware_concurrency());
        threadCount = std::min<unsigned>(threadCount, static_cast<unsigned>(n));
        // Sources are dealt round-robin; each worker sums its own sources in
        // a fixed order and partials merge in worker order, so results do
        // not depend on scheduling.
        std::vector<std::vector<double>> partial(
            threadCount, std::vector<double>(static_cast<std::size_t>(n), 0.0));
        std::vector<std::thread> workers;
        workers.reserve(threadCount);
        for (unsigned t = 0; t < threadCount; ++t) {
            workers.emplace_back([&, t] {
                for (int s = static_cast<int>(t); s < n; s += static_cast<int>(threadCount)) {
                    accumulate_betweenness(g, s, mode, partial[t]);
                }
            });
        }
        for (auto &w : workers) {
            w.join();
        }
        for (unsigned t = 0; t < threadCount; ++t) {
            for (int i = 0; i < n; ++i) {
                cb[static_cast<std::size_t>(i)] += partial[t][static_cast<std::size_t>(i)];
            }
        }
        // Brandes sums over ordered source pairs: halve for the undirected
        // count, then optionally divide by the (n-1)(n-2)/2 pair total.
        const double scale =
            normalized ? 1.0 / (static_cast<double>(n - 1) * static_cast<double>(n - 2)) : 0.5;
        for (auto &score : cb) {
            score *= scale;
        }
    }
    return make_report(Measure::Betweenness, g, std::move(cb));
}

CentralityReport degree_centrality(const CoMembershipGraph &g) {
    std::vector<double> scores(static_cast<std::size_t>(g.nodeCount()), 0.0);
    for (int i = 0; i < g.nodeCount(); ++i) {
        scores[static_cast<std::size_t>(i)] = g.strength(i);
    }
    return make_report(Measure::Degree, g, std::move(scores));
}

std::vector<std::pair<std::string, double>> top_k(const CentralityReport &report, int k) {
    if (k < 1) {
        throw std::invalid_argument("top_k: k must be >= 1");
    }
    const std::size_t count = std::min<std::size_t>(static_cast<std::size_t>(k),
                                                    report.ranking.size());
    std::vector<std::pair<std::string, double>> out;
    out.reserve(count);
    for (std::size_t r = 0; r < count; ++r) {
        const int idx = report.ranking[r];
        out.emplace_back(report.nodeIds[static_cast<std::size_t>(idx)],
                         report.scores[static_cast<std::size_t>(idx)]);
    }
    return out;
}

} // namespace comem
