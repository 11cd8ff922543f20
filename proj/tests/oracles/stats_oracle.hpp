#pragma once

// Quadratic-time and exhaustive reference computations for rank statistics.
// Test-only; deliberately independent of the library's sort-based paths.

#include <cmath>
#include <cstdint>
#include <vector>

namespace oracle {

inline std::vector<double> brute_ranks(const std::vector<double>& xs) {
    std::vector<double> r(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        double less = 0;
        double equal = 0;
        for (double x : xs) {
            if (x < xs[i]) less += 1;
            if (x == xs[i]) equal += 1;
        }
        r[i] = less + (equal + 1.0) / 2.0;
    }
    return r;
}

// Tie-corrected H through the variance-ratio form
// H = (N - 1) * sum n_i (mean_i - mean)^2 / sum (r - mean)^2.
inline double brute_kruskal_h(const std::vector<std::vector<double>>& groups) {
    std::vector<double> pooled;
    for (const auto& g : groups) pooled.insert(pooled.end(), g.begin(), g.end());
    const auto ranks = brute_ranks(pooled);
    const double n = static_cast<double>(pooled.size());
    const double grand = (n + 1.0) / 2.0;
    double between = 0.0;
    double total = 0.0;
    std::size_t offset = 0;
    for (const auto& g : groups) {
        double mean = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) mean += ranks[offset + i];
        mean /= static_cast<double>(g.size());
        between += static_cast<double>(g.size()) * (mean - grand) * (mean - grand);
        offset += g.size();
    }
    for (double r : ranks) total += (r - grand) * (r - grand);
    if (total == 0.0) return 0.0;
    return (n - 1.0) * between / total;
}

inline double brute_cliffs_delta(const std::vector<double>& a, const std::vector<double>& b) {
    long long more = 0;
    long long less = 0;
    for (double x : a)
        for (double y : b) {
            if (x > y) ++more;
            if (x < y) ++less;
        }
    return static_cast<double>(more - less) / static_cast<double>(a.size() * b.size());
}

struct SignedRankExact {
    double w_plus;
    double p_less;
    double p_greater;
    double p_two_sided;
};

// Enumerates all 2^n sign assignments of the nonzero differences.
inline SignedRankExact brute_signed_rank(const std::vector<double>& x, const std::vector<double>& y) {
    std::vector<double> d;
    for (std::size_t i = 0; i < x.size(); ++i)
        if (x[i] != y[i]) d.push_back(x[i] - y[i]);
    std::vector<double> mags;
    for (double v : d) mags.push_back(std::fabs(v));
    const auto ranks = brute_ranks(mags);
    double w = 0.0;
    for (std::size_t i = 0; i < d.size(); ++i)
        if (d[i] > 0) w += ranks[i];
    const std::uint64_t patterns = 1ULL << d.size();
    double le = 0;
    double ge = 0;
    for (std::uint64_t mask = 0; mask < patterns; ++mask) {
        double s = 0.0;
        for (std::size_t i = 0; i < d.size(); ++i)
            if (mask & (1ULL << i)) s += ranks[i];
        if (s <= w + 1e-9) le += 1;
        if (s >= w - 1e-9) ge += 1;
    }
    const double total = static_cast<double>(patterns);
    const double lo = le / total;
    const double hi = ge / total;
    return {w, lo, hi, std::fmin(1.0, 2.0 * std::fmin(lo, hi))};
}

inline double brute_spearman(const std::vector<double>& x, const std::vector<double>& y) {
    const auto rx = brute_ranks(x);
    const auto ry = brute_ranks(y);
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += rx[i];
        sy += ry[i];
        sxx += rx[i] * rx[i];
        syy += ry[i] * ry[i];
        sxy += rx[i] * ry[i];
    }
    return (n * sxy - sx * sy) / std::sqrt((n * sxx - sx * sx) * (n * syy - sy * sy));
}

}  // namespace oracle
