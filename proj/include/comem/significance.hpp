#pragma once

#include <cstdint>

namespace comem {

/// Regularized incomplete beta function I_x(a, b), a,b > 0, continued
/// fraction evaluation.
double regularized_incomplete_beta(double a, double b, double x);

/// P[X >= k] for X ~ Binomial(n, p).
double binomial_upper_tail(std::int64_t k, std::int64_t n, double p);

/// Scalars needed to score how strongly a node attaches to a community
/// under a strength-preserving random null. Continuous weights are turned
/// into pseudo-counts through the quantum (typically the smallest positive
/// edge weight of the graph).
struct SignificanceContext {
    double communityStrength = 0.0; // summed strength of community members
    double totalStrength = 0.0;     // twice the total edge weight of the graph
    double quantum = 1.0;           // weight-to-count conversion unit, > 0
};

/// Tail probability that a node with the given strength connects into the
/// community at least as strongly as observed, under a null where each
/// strength unit lands in the community with probability
/// communityStrength / totalStrength. Smaller is more significant; zero
/// observed weight scores 1. Throws std::invalid_argument if the quantum
/// is not positive.
double r_score(const SignificanceContext &ctx, double nodeStrength, double weightIntoCommunity);

/// P[q-th smallest of m independent Uniform(0,1) draws <= r], i.e. the
/// Beta(rank, m - rank + 1) cdf at r.
double order_statistic_probability(int rank, int m, double r);

} // namespace comem
