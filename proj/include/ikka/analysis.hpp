#pragma once

#include "ikka/io.hpp"
#include "ikka/simulator.hpp"
#include "ikka/stats.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace ikka::analysis {

struct TrackerSummary {
    simulator::Tracker tracker = simulator::Tracker::hybrid;
    std::size_t nominal_runs = 0;
    std::size_t stress_runs = 0;
    std::optional<double> nominal_p95;  // medians over runs
    std::optional<double> stress_p95;
    std::optional<double> fps;
    int anomalous_runs = 0;
    int stress_anomalous_runs = 0;
};

struct RecoverySummary {
    simulator::Tracker tracker = simulator::Tracker::hybrid;
    std::size_t runs = 0;  // runs with at least one occlusion
    std::size_t events = 0;
    std::optional<double> median_s;
    std::optional<double> iqr_s;
    std::optional<double> max_s;
    int unrecovered = 0;
};

struct AblationRow {
    simulator::Tracker tracker = simulator::Tracker::hybrid;
    std::size_t stress_runs = 0;
    std::optional<double> stress_p95;
    std::optional<double> fps;
    int anomalous_runs = 0;
    // Relative to the hybrid baseline's median stress P95.
    std::optional<double> reduction_vs_baseline;
};

struct PairwiseComparison {
    simulator::Tracker reference = simulator::Tracker::hybrid_ikka;
    simulator::Tracker other = simulator::Tracker::hybrid;
    std::size_t n_reference = 0;
    std::size_t n_other = 0;
    stats::TestResult test;  // rank-sum, two-sided
    double p_holm = 1.0;
    // Cliff's delta of other against reference; positive favours the
    // reference (lower error).
    double cliffs_delta = 0.0;
};

struct PairedRecovery {
    std::size_t pairs = 0;
    stats::TestResult test;  // signed-rank on per-seed median recovery
    double cliffs_delta = 0.0;
};

struct Report {
    std::size_t runs = 0;
    std::vector<TrackerSummary> table1;
    std::vector<RecoverySummary> table2;
    std::vector<AblationRow> table3;
    std::optional<stats::TestResult> kruskal_wallis;  // stress P95 across the six main arms
    std::vector<PairwiseComparison> pairwise;         // hybrid_ikka against each other arm
    std::optional<stats::TestResult> fps_vs_error;    // Spearman over stress runs
    std::optional<PairedRecovery> recovery_hybrid_vs_ikka;
    std::vector<std::string> notes;                   // tests skipped and why
};

// Aggregates per-run metrics. Stress means any condition other than nominal.
Report analyze(std::span<const simulator::RunMetrics> runs);

io::Json report_to_json(const Report& report);
std::string table1_csv(const Report& report);
std::string table2_csv(const Report& report);
std::string table3_csv(const Report& report);

}  // namespace ikka::analysis
