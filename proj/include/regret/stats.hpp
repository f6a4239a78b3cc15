// Small statistics helpers used by the experiment summaries and tests.
#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <vector>

namespace regret::stats {

inline double mean(std::span<const double> xs) {
    if (xs.empty()) return std::numeric_limits<double>::quiet_NaN();
    double s = 0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

/// Sample standard deviation (n-1 denominator).
inline double stddev(std::span<const double> xs) {
    if (xs.size() < 2) return std::numeric_limits<double>::quiet_NaN();
    const double m = mean(xs);
    double s = 0;
    for (double x : xs) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

/// Pearson correlation; NaN when either side has no variance.
inline double pearson(std::span<const double> xs, std::span<const double> ys) {
    if (xs.size() != ys.size() || xs.size() < 2) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    const double mx = mean(xs);
    const double my = mean(ys);
    double sxy = 0, sxx = 0, syy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    if (sxx <= 0 || syy <= 0) return std::numeric_limits<double>::quiet_NaN();
    return sxy / std::sqrt(sxx * syy);
}

/// log C(n, k)
inline double log_choose(std::int64_t n, std::int64_t k) {
    return std::lgamma(static_cast<double>(n) + 1) - std::lgamma(static_cast<double>(k) + 1) -
           std::lgamma(static_cast<double>(n - k) + 1);
}

/// P[Bin(n, 1/2) <= k], exact in log space.
inline double binom_half_cdf(std::int64_t n, std::int64_t k) {
    if (k < 0) return 0.0;
    if (k >= n) return 1.0;
    const double log_half_n = -static_cast<double>(n) * std::log(2.0);
    double acc = 0;
    for (std::int64_t i = 0; i <= k; ++i) {
        acc += std::exp(log_choose(n, i) + log_half_n);
    }
    return acc < 1.0 ? acc : 1.0;
}

/// Two-sided paired sign test on the counts of positive and negative
/// differences (zeros dropped by the caller).
inline double sign_test_two_sided(std::int64_t n_pos, std::int64_t n_neg) {
    const std::int64_t n = n_pos + n_neg;
    if (n == 0) return std::numeric_limits<double>::quiet_NaN();
    const std::int64_t k = n_pos < n_neg ? n_pos : n_neg;
    const double p = 2.0 * binom_half_cdf(n, k);
    return p < 1.0 ? p : 1.0;
}

/// Share with its Monte-Carlo standard error.
struct Proportion {
    double value = 0;
    double std_error = 0;
};

inline Proportion proportion(std::int64_t count, std::int64_t total) {
    Proportion out;
    if (total <= 0) return out;
    out.value = static_cast<double>(count) / static_cast<double>(total);
    out.std_error = std::sqrt(out.value * (1.0 - out.value) / static_cast<double>(total));
    return out;
}

/// One-sided two-proportion z statistic for H1: p1 > p2.
inline double two_proportion_z(std::int64_t k1, std::int64_t n1, std::int64_t k2,
                               std::int64_t n2) {
    const double p1 = static_cast<double>(k1) / static_cast<double>(n1);
    const double p2 = static_cast<double>(k2) / static_cast<double>(n2);
    const double pool = static_cast<double>(k1 + k2) / static_cast<double>(n1 + n2);
    const double se =
        std::sqrt(pool * (1.0 - pool) * (1.0 / static_cast<double>(n1) + 1.0 / static_cast<double>(n2)));
    if (se == 0) return 0;
    return (p1 - p2) / se;
}

}  // namespace regret::stats
