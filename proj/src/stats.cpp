#include "ikka/stats.hpp"

#include "ikka/errors.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>
#include <boost/math/distributions/students_t.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ikka::stats {

namespace {

double clamp_p(double p) { return std::clamp(p, 0.0, 1.0); }

// Sum over tie groups of (t^3 - t).
double tie_term(std::span<const double> xs) {
    std::vector<double> sorted(xs.begin(), xs.end());
    std::sort(sorted.begin(), sorted.end());
    double sum = 0.0;
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
        const double t = static_cast<double>(j - i);
        sum += t * t * t - t;
        i = j;
    }
    return sum;
}

double normal_sf(double z) {
    return boost::math::cdf(boost::math::complement(boost::math::normal_distribution<double>(), z));
}

double normal_cdf(double z) { return boost::math::cdf(boost::math::normal_distribution<double>(), z); }

// p-value of a statistic with normal null (mean, sd), continuity corrected.
double normal_p(double stat, double mean, double sd, Alternative alt) {
    if (sd <= 0.0) return 1.0;
    switch (alt) {
        case Alternative::less:
            return clamp_p(normal_cdf((stat - mean + 0.5) / sd));
        case Alternative::greater:
            return clamp_p(normal_sf((stat - mean - 0.5) / sd));
        case Alternative::two_sided:
        default: {
            const double z = std::max(0.0, std::abs(stat - mean) - 0.5) / sd;
            return clamp_p(2.0 * normal_sf(z));
        }
    }
}

}  // namespace

std::vector<double> average_ranks(std::span<const double> xs) {
    const std::size_t n = xs.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    std::vector<double> ranks(n);
    for (std::size_t i = 0; i < n;) {
        std::size_t j = i;
        while (j < n && xs[order[j]] == xs[order[i]]) ++j;
        // Ranks i+1 .. j share their mean.
        const double avg = 0.5 * static_cast<double>(i + 1 + j);
        for (std::size_t k = i; k < j; ++k) ranks[order[k]] = avg;
        i = j;
    }
    return ranks;
}

TestResult kruskal_wallis(std::span<const std::vector<double>> groups) {
    if (groups.size() < 2) throw PreconditionError("kruskal_wallis: at least two groups are required");
    std::vector<double> pooled;
    bool small = false;
    for (const auto& g : groups) {
        if (g.empty()) throw PreconditionError("kruskal_wallis: empty group");
        small = small || g.size() < 5;
        pooled.insert(pooled.end(), g.begin(), g.end());
    }
    const auto ranks = average_ranks(pooled);
    const double n = static_cast<double>(pooled.size());

    TestResult r;
    r.df = static_cast<int>(groups.size()) - 1;
    r.n = pooled.size();
    r.small_sample = small;

    const double correction = 1.0 - tie_term(pooled) / (n * n * n - n);
    if (correction <= 0.0) {
        r.statistic = 0.0;
        r.p_value = 1.0;
        return r;
    }
    double sum = 0.0;
    std::size_t offset = 0;
    for (const auto& g : groups) {
        double rank_sum = 0.0;
        for (std::size_t i = 0; i < g.size(); ++i) rank_sum += ranks[offset + i];
        offset += g.size();
        sum += rank_sum * rank_sum / static_cast<double>(g.size());
    }
    const double h = (12.0 / (n * (n + 1.0)) * sum - 3.0 * (n + 1.0)) / correction;
    r.statistic = std::max(0.0, h);
    const boost::math::chi_squared_distribution<double> chi2(r.df);
    r.p_value = clamp_p(boost::math::cdf(boost::math::complement(chi2, r.statistic)));
    return r;
}

std::vector<double> holm_bonferroni(std::span<const double> p_values) {
    const std::size_t m = p_values.size();
    for (double p : p_values) {
        if (!(p >= 0.0 && p <= 1.0)) throw PreconditionError("holm_bonferroni: p-values must lie in [0, 1]");
    }
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return p_values[a] < p_values[b]; });
    std::vector<double> adjusted(m);
    double running = 0.0;
    for (std::size_t j = 0; j < m; ++j) {
        running = std::max(running, static_cast<double>(m - j) * p_values[order[j]]);
        adjusted[order[j]] = std::min(1.0, running);
    }
    return adjusted;
}

double cliffs_delta(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw PreconditionError("cliffs_delta: both samples must be non-empty");
    std::vector<double> sorted(b.begin(), b.end());
    std::sort(sorted.begin(), sorted.end());
    long long dominance = 0;
    for (double x : a) {
        const auto below = std::lower_bound(sorted.begin(), sorted.end(), x) - sorted.begin();
        const auto above = sorted.end() - std::upper_bound(sorted.begin(), sorted.end(), x);
        dominance += below - above;
    }
    return static_cast<double>(dominance) / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

TestResult wilcoxon_signed_rank(std::span<const double> x, std::span<const double> y, Alternative alternative) {
    if (x.size() != y.size()) throw PreconditionError("wilcoxon_signed_rank: samples must have equal length");
    std::vector<double> diffs;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double d = x[i] - y[i];
        if (d != 0.0) diffs.push_back(d);
    }
    if (diffs.size() < 6) {
        throw InsufficientDataError("wilcoxon_signed_rank: fewer than 6 nonzero differences");
    }
    std::vector<double> mags;
    for (double d : diffs) mags.push_back(std::abs(d));
    const auto ranks = average_ranks(mags);

    TestResult r;
    r.n = diffs.size();
    double w_plus = 0.0;
    for (std::size_t i = 0; i < diffs.size(); ++i) {
        if (diffs[i] > 0.0) w_plus += ranks[i];
    }
    r.statistic = w_plus;

    const std::size_t n = diffs.size();
    if (n <= 12) {
        // Doubled ranks are integers even with ties; count sign patterns by sum.
        std::vector<int> doubled(n);
        int total = 0;
        for (std::size_t i = 0; i < n; ++i) {
            doubled[i] = static_cast<int>(std::lround(2.0 * ranks[i]));
            total += doubled[i];
        }
        std::vector<double> counts(static_cast<std::size_t>(total) + 1, 0.0);
        counts[0] = 1.0;
        int reach = 0;
        for (int d : doubled) {
            for (int s = reach; s >= 0; --s) counts[static_cast<std::size_t>(s + d)] += counts[static_cast<std::size_t>(s)];
            reach += d;
        }
        const double patterns = std::ldexp(1.0, static_cast<int>(n));
        const int observed = static_cast<int>(std::lround(2.0 * w_plus));
        double lower = 0.0;
        double upper = 0.0;
        for (int s = 0; s <= total; ++s) {
            if (s <= observed) lower += counts[static_cast<std::size_t>(s)];
            if (s >= observed) upper += counts[static_cast<std::size_t>(s)];
        }
        lower /= patterns;
        upper /= patterns;
        r.exact = true;
        switch (alternative) {
            case Alternative::less: r.p_value = clamp_p(lower); break;
            case Alternative::greater: r.p_value = clamp_p(upper); break;
            case Alternative::two_sided: r.p_value = clamp_p(2.0 * std::min(lower, upper)); break;
        }
        return r;
    }

    const double nn = static_cast<double>(n);
    const double mean = nn * (nn + 1.0) / 4.0;
    const double var = nn * (nn + 1.0) * (2.0 * nn + 1.0) / 24.0 - tie_term(mags) / 48.0;
    r.p_value = normal_p(w_plus, mean, std::sqrt(std::max(0.0, var)), alternative);
    return r;
}

TestResult mann_whitney_u(std::span<const double> a, std::span<const double> b, Alternative alternative) {
    if (a.empty() || b.empty()) throw PreconditionError("mann_whitney_u: both samples must be non-empty");
    std::vector<double> pooled(a.begin(), a.end());
    pooled.insert(pooled.end(), b.begin(), b.end());
    const auto ranks = average_ranks(pooled);
    const double n1 = static_cast<double>(a.size());
    const double n2 = static_cast<double>(b.size());
    const double n = n1 + n2;
    double r1 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) r1 += ranks[i];
    const double u = r1 - n1 * (n1 + 1.0) / 2.0;
    const double var = n1 * n2 / 12.0 * ((n + 1.0) - tie_term(pooled) / (n * (n - 1.0)));

    TestResult r;
    r.statistic = u;
    r.n = pooled.size();
    r.p_value = normal_p(u, n1 * n2 / 2.0, std::sqrt(std::max(0.0, var)), alternative);
    return r;
}

TestResult spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw PreconditionError("spearman: samples must have equal length");
    if (x.size() < 3) throw PreconditionError("spearman: at least 3 pairs are required");
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    const double n = static_cast<double>(x.size());
    const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
    const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < rx.size(); ++i) {
        sxy += (rx[i] - mx) * (ry[i] - my);
        sxx += (rx[i] - mx) * (rx[i] - mx);
        syy += (ry[i] - my) * (ry[i] - my);
    }
    if (sxx <= 0.0 || syy <= 0.0) throw UndefinedCorrelationError("spearman: a sample has zero rank variance");

    TestResult r;
    r.n = x.size();
    r.df = static_cast<int>(x.size()) - 2;
    r.statistic = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
    const double rho2 = r.statistic * r.statistic;
    if (rho2 >= 1.0) {
        r.p_value = 0.0;
    } else {
        const double t = r.statistic * std::sqrt((n - 2.0) / (1.0 - rho2));
        const boost::math::students_t_distribution<double> dist(n - 2.0);
        r.p_value = clamp_p(2.0 * boost::math::cdf(boost::math::complement(dist, std::abs(t))));
    }
    return r;
}

double percentile_nearest_rank(std::span<const double> xs, double q) {
    if (xs.empty()) throw PreconditionError("percentile_nearest_rank: empty sample");
    if (!(q > 0.0 && q <= 100.0)) throw PreconditionError("percentile_nearest_rank: q must lie in (0, 100]");
    std::vector<double> sorted(xs.begin(), xs.end());
    std::sort(sorted.begin(), sorted.end());
    const double n = static_cast<double>(sorted.size());
    auto rank = static_cast<std::size_t>(std::ceil(q * n / 100.0 - 1e-9));
    rank = std::clamp<std::size_t>(rank, 1, sorted.size());
    return sorted[rank - 1];
}

double median(std::span<const double> xs) {
    if (xs.empty()) throw PreconditionError("median: empty sample");
    std::vector<double> sorted(xs.begin(), xs.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    return n % 2 == 1 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
}

double iqr(std::span<const double> xs) {
    return percentile_nearest_rank(xs, 75.0) - percentile_nearest_rank(xs, 25.0);
}

}  // namespace ikka::stats
