#include "comem/significance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace comem {

namespace {

// Continued fraction for the incomplete beta, modified Lentz method.
double beta_continued_fraction(double a, double b, double x) {
    constexpr double eps = 3e-16;
    constexpr double tiny = 1e-300;
    constexpr int maxIter = 4000;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < tiny) {
        d = tiny;
    }
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= maxIter; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) {
            d = tiny;
        }
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) {
            c = tiny;
        }
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < tiny) {
            d = tiny;
        }
        c = 1.0 + aa / c;
        if (std::fabs(c) < tiny) {
            c = tiny;
        }
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < eps) {
            break;
        }
    }
    return h;
}

} // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0) || !(b > 0.0)) {
        throw std::invalid_argument("regularized_incomplete_beta: a and b must be positive");
    }
    if (x <= 0.0) {
        return 0.0;
    }
    if (x >= 1.0) {
        return 1.0;
    }
    // The log-front factor needs extended precision: for counts in the
    // thousands lgamma's ulp error alone is ~1e-12 in the exponent, which
    // is the accuracy contract of the tail probabilities built on top.
    const long double la = static_cast<long double>(a);
    const long double lb = static_cast<long double>(b);
    const long double lx = static_cast<long double>(x);
    const double lnFront = static_cast<double>(
        std::lgamma(la + lb) - std::lgamma(la) - std::lgamma(lb) + la * std::log(lx) +
        lb * std::log1p(-lx));
    const bool lowerBranch = x < (a + 1.0) / (a + b + 2.0);
    if (lnFront < -745.0) {
        // The front factor underflows; the value is indistinguishable from
        // the branch limit.
        return lowerBranch ? 0.0 : 1.0;
    }
    const double front = std::exp(lnFront);
    if (lowerBranch) {
        return front * beta_continued_fraction(a, b, x) / a;
    }
    return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

double binomial_upper_tail(std::int64_t k, std::int64_t n, double p) {
    if (n < 0) {
        throw std::invalid_argument("binomial_upper_tail: n must be >= 0");
    }
    if (k <= 0) {
        return 1.0;
    }
    if (k > n) {
        return 0.0;
    }
    if (p <= 0.0) {
        return 0.0;
    }
    if (p >= 1.0) {
        return 1.0;
    }
    // P[X >= k] = I_p(k, n - k + 1)
    return regularized_incomplete_beta(static_cast<double>(k), static_cast<double>(n - k + 1), p);
}

double r_score(const SignificanceContext &ctx, double nodeStrength, double weightIntoCommunity) {
    if (!(ctx.quantum > 0.0)) {
        throw std::invalid_argument("r_score: weight quantum must be positive");
    }
    const std::int64_t k = std::llround(weightIntoCommunity / ctx.quantum);
    const std::int64_t n = std::llround(nodeStrength / ctx.quantum);
    double p = ctx.totalStrength > 0.0 ? ctx.communityStrength / ctx.totalStrength : 0.0;
    p = std::clamp(p, 0.0, 1.0);
    return binomial_upper_tail(k, n, p);
}

double order_statistic_probability(int rank, int m, double r) {
    if (rank < 1 || rank > m) {
        throw std::invalid_argument("order_statistic_probability: rank must be in [1, m]");
    }
    r = std::clamp(r, 0.0, 1.0);
    return regularized_incomplete_beta(static_cast<double>(rank), static_cast<double>(m - rank + 1),
                                       r);
}

} // namespace comem
