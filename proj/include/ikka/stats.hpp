#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ikka::stats {

struct TestResult {
    double statistic = 0.0;
    double p_value = 1.0;
    int df = 0;             // degrees of freedom where meaningful
    std::size_t n = 0;      // observations used
    bool exact = false;     // p-value from the exact null distribution
    bool small_sample = false;  // asymptotic p-value on very small groups
};

enum class Alternative { two_sided, less, greater };

// Ranks 1..n with ties sharing their average rank.
std::vector<double> average_ranks(std::span<const double> xs);

// H statistic with tie correction, chi-squared p-value on (groups - 1) df.
// When every observation ties, H = 0 and p = 1.
TestResult kruskal_wallis(std::span<const std::vector<double>> groups);

// Holm step-down adjusted p-values, in input order.
std::vector<double> holm_bonferroni(std::span<const double> p_values);

// P(a > b) - P(a < b) over all cross pairs.
double cliffs_delta(std::span<const double> a, std::span<const double> b);

// Paired signed-rank test on d = x - y; statistic is W+ (sum of ranks of
// positive differences). Exact null for n <= 12 nonzero differences,
// normal approximation with continuity and tie correction above.
TestResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y,
                                Alternative alternative = Alternative::two_sided);

// Two-sample rank-sum test (U of the first sample), normal approximation
// with tie correction.
TestResult mann_whitney_u(std::span<const double> a, std::span<const double> b,
                          Alternative alternative = Alternative::two_sided);

// Rank correlation; two-sided p-value from the t approximation.
TestResult spearman(std::span<const double> x, std::span<const double> y);

// Value at rank ceil(q / 100 * n) of the sorted sample, q in (0, 100].
double percentile_nearest_rank(std::span<const double> xs, double q);

double median(std::span<const double> xs);

// Nearest-rank q75 - q25.
double iqr(std::span<const double> xs);

}  // namespace ikka::stats
