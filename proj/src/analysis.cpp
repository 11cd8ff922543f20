#include "ikka/analysis.hpp"

#include "ikka/errors.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace ikka::analysis {

using simulator::Condition;
using simulator::RunMetrics;
using simulator::Tracker;

namespace {

constexpr std::array<Tracker, 6> kMainArms{Tracker::hsv,  Tracker::mosse,  Tracker::kcf,
                                           Tracker::csrt, Tracker::hybrid, Tracker::hybrid_ikka};
constexpr std::array<Tracker, 5> kAblationArms{Tracker::hybrid, Tracker::hybrid_ikka, Tracker::ablation_e,
                                               Tracker::ablation_t, Tracker::ablation_m};

std::optional<double> median_of(const std::vector<double>& xs) {
    if (xs.empty()) return std::nullopt;
    return stats::median(xs);
}

struct ArmData {
    std::vector<double> nominal_p95;
    std::vector<double> stress_p95;
    std::vector<double> stress_fps;
    std::vector<double> fps;
    std::vector<double> recoveries;
    std::size_t occluded_runs = 0;
    int unrecovered = 0;
    int anomalous = 0;
    int stress_anomalous = 0;
};

io::Json optional_number(const std::optional<double>& v) {
    return v ? io::Json(io::fixed(*v)) : io::Json(nullptr);
}

io::Json test_json(const stats::TestResult& t) {
    io::Json j;
    j["statistic"] = io::fixed(t.statistic);
    j["p_value"] = io::fixed(t.p_value, 9);
    j["df"] = t.df;
    j["n"] = t.n;
    j["exact"] = t.exact;
    j["small_sample"] = t.small_sample;
    return j;
}

std::string cell(const std::optional<double>& v) { return v ? io::format_fixed(*v) : std::string{}; }

}  // namespace

Report analyze(std::span<const RunMetrics> runs) {
    if (runs.empty()) throw InsufficientDataError("analysis needs at least one run");
    Report report;
    report.runs = runs.size();

    std::map<Tracker, ArmData> arms;
    for (const auto& m : runs) {
        ArmData& a = arms[m.tracker];
        a.fps.push_back(m.mean_effective_fps);
        if (m.anomalous) ++a.anomalous;
        if (simulator::is_stress(m.condition)) {
            a.stress_p95.push_back(m.p95_abs_error);
            a.stress_fps.push_back(m.mean_effective_fps);
            if (m.anomalous) ++a.stress_anomalous;
        } else {
            a.nominal_p95.push_back(m.p95_abs_error);
        }
        if (m.condition == Condition::occlusion || m.condition == Condition::dim_occlusion) {
            ++a.occluded_runs;
            a.recoveries.insert(a.recoveries.end(), m.recovery_times_s.begin(), m.recovery_times_s.end());
            a.unrecovered += m.unrecovered;
        }
    }

    for (Tracker t : simulator::kAllTrackers) {
        const auto it = arms.find(t);
        if (it == arms.end()) continue;
        const ArmData& a = it->second;
        TrackerSummary s;
        s.tracker = t;
        s.nominal_runs = a.nominal_p95.size();
        s.stress_runs = a.stress_p95.size();
        s.nominal_p95 = median_of(a.nominal_p95);
        s.stress_p95 = median_of(a.stress_p95);
        s.fps = median_of(a.fps);
        s.anomalous_runs = a.anomalous;
        s.stress_anomalous_runs = a.stress_anomalous;
        report.table1.push_back(s);

        RecoverySummary r;
        r.tracker = t;
        r.runs = a.occluded_runs;
        r.events = a.recoveries.size() + static_cast<std::size_t>(a.unrecovered);
        r.median_s = median_of(a.recoveries);
        if (!a.recoveries.empty()) {
            r.iqr_s = stats::iqr(a.recoveries);
            r.max_s = *std::max_element(a.recoveries.begin(), a.recoveries.end());
        }
        r.unrecovered = a.unrecovered;
        report.table2.push_back(r);
    }

    std::optional<double> baseline;
    if (const auto it = arms.find(Tracker::hybrid); it != arms.end()) baseline = median_of(it->second.stress_p95);
    for (Tracker t : kAblationArms) {
        const auto it = arms.find(t);
        if (it == arms.end()) continue;
        AblationRow row;
        row.tracker = t;
        row.stress_runs = it->second.stress_p95.size();
        row.stress_p95 = median_of(it->second.stress_p95);
        row.fps = median_of(it->second.fps);
        row.anomalous_runs = it->second.stress_anomalous;
        if (baseline && row.stress_p95 && *baseline > 0.0) row.reduction_vs_baseline = (*baseline - *row.stress_p95) / *baseline;
        report.table3.push_back(row);
    }

    // Omnibus over the main arms that have stress runs.
    std::vector<std::vector<double>> groups;
    for (Tracker t : kMainArms) {
        const auto it = arms.find(t);
        if (it != arms.end() && !it->second.stress_p95.empty()) groups.push_back(it->second.stress_p95);
    }
    if (groups.size() >= 2) report.kruskal_wallis = stats::kruskal_wallis(groups);
    else report.notes.push_back("kruskal_wallis skipped: fewer than two arms with stress runs");

    const auto ikka = arms.find(Tracker::hybrid_ikka);
    if (ikka != arms.end() && !ikka->second.stress_p95.empty()) {
        std::vector<double> raw;
        for (Tracker t : kMainArms) {
            if (t == Tracker::hybrid_ikka) continue;
            const auto it = arms.find(t);
            if (it == arms.end() || it->second.stress_p95.empty()) continue;
            PairwiseComparison c;
            c.other = t;
            c.n_reference = ikka->second.stress_p95.size();
            c.n_other = it->second.stress_p95.size();
            c.test = stats::mann_whitney_u(ikka->second.stress_p95, it->second.stress_p95);
            c.cliffs_delta = stats::cliffs_delta(it->second.stress_p95, ikka->second.stress_p95);
            raw.push_back(c.test.p_value);
            report.pairwise.push_back(c);
        }
        const auto adjusted = stats::holm_bonferroni(raw);
        for (std::size_t i = 0; i < adjusted.size(); ++i) report.pairwise[i].p_holm = adjusted[i];
    } else {
        report.notes.push_back("pairwise comparisons skipped: no hybrid_ikka stress runs");
    }

    std::vector<double> fps;
    std::vector<double> err;
    for (Tracker t : kMainArms) {
        const auto it = arms.find(t);
        if (it == arms.end()) continue;
        fps.insert(fps.end(), it->second.stress_fps.begin(), it->second.stress_fps.end());
        err.insert(err.end(), it->second.stress_p95.begin(), it->second.stress_p95.end());
    }
    try {
        report.fps_vs_error = stats::spearman(fps, err);
    } catch (const Error& ex) {
        report.notes.push_back(std::string("fps vs error correlation skipped: ") + ex.what());
    }

    // Recovery pairs share a seed and an occlusion condition.
    std::map<std::pair<std::uint64_t, Condition>, double> hybrid_rec;
    for (const auto& m : runs)
        if (m.tracker == Tracker::hybrid && m.median_recovery_s) hybrid_rec[{m.seed, m.condition}] = *m.median_recovery_s;
    std::vector<double> xs;
    std::vector<double> ys;
    for (const auto& m : runs) {
        if (m.tracker != Tracker::hybrid_ikka || !m.median_recovery_s) continue;
        const auto it = hybrid_rec.find({m.seed, m.condition});
        if (it == hybrid_rec.end()) continue;
        xs.push_back(it->second);
        ys.push_back(*m.median_recovery_s);
    }
    try {
        PairedRecovery pr;
        pr.pairs = xs.size();
        pr.test = stats::wilcoxon_signed_rank(xs, ys);
        pr.cliffs_delta = stats::cliffs_delta(xs, ys);
        report.recovery_hybrid_vs_ikka = pr;
    } catch (const Error& ex) {
        report.notes.push_back("paired recovery test skipped (" + std::to_string(xs.size()) + " seed-matched pairs): " +
                               ex.what());
    }
    return report;
}

io::Json report_to_json(const Report& r) {
    io::Json j;
    j["runs"] = r.runs;
    io::Json t1 = io::Json::array();
    for (const auto& s : r.table1) {
        io::Json row;
        row["tracker"] = simulator::to_string(s.tracker);
        row["nominal_runs"] = s.nominal_runs;
        row["stress_runs"] = s.stress_runs;
        row["nominal_p95"] = optional_number(s.nominal_p95);
        row["stress_p95"] = optional_number(s.stress_p95);
        row["fps"] = optional_number(s.fps);
        row["anomalous_runs"] = s.anomalous_runs;
        row["stress_anomalous_runs"] = s.stress_anomalous_runs;
        t1.push_back(row);
    }
    j["table1"] = t1;
    io::Json t2 = io::Json::array();
    for (const auto& s : r.table2) {
        io::Json row;
        row["tracker"] = simulator::to_string(s.tracker);
        row["occluded_runs"] = s.runs;
        row["events"] = s.events;
        row["median_recovery_s"] = optional_number(s.median_s);
        row["iqr_s"] = optional_number(s.iqr_s);
        row["max_recovery_s"] = optional_number(s.max_s);
        row["unrecovered"] = s.unrecovered;
        t2.push_back(row);
    }
    j["table2"] = t2;
    io::Json t3 = io::Json::array();
    for (const auto& s : r.table3) {
        io::Json row;
        row["tracker"] = simulator::to_string(s.tracker);
        row["stress_runs"] = s.stress_runs;
        row["stress_p95"] = optional_number(s.stress_p95);
        row["fps"] = optional_number(s.fps);
        row["anomalous_runs"] = s.anomalous_runs;
        row["reduction_vs_baseline"] = optional_number(s.reduction_vs_baseline);
        t3.push_back(row);
    }
    j["table3"] = t3;

    io::Json st;
    st["kruskal_wallis"] = r.kruskal_wallis ? test_json(*r.kruskal_wallis) : io::Json(nullptr);
    io::Json pw = io::Json::array();
    for (const auto& c : r.pairwise) {
        io::Json row;
        row["reference"] = simulator::to_string(c.reference);
        row["other"] = simulator::to_string(c.other);
        row["n_reference"] = c.n_reference;
        row["n_other"] = c.n_other;
        row["rank_sum"] = test_json(c.test);
        row["p_holm"] = io::fixed(c.p_holm, 9);
        row["cliffs_delta"] = io::fixed(c.cliffs_delta);
        pw.push_back(row);
    }
    st["pairwise_stress_p95"] = pw;
    st["spearman_fps_vs_stress_p95"] = r.fps_vs_error ? test_json(*r.fps_vs_error) : io::Json(nullptr);
    if (r.recovery_hybrid_vs_ikka) {
        io::Json pr;
        pr["pairs"] = r.recovery_hybrid_vs_ikka->pairs;
        pr["signed_rank"] = test_json(r.recovery_hybrid_vs_ikka->test);
        pr["cliffs_delta"] = io::fixed(r.recovery_hybrid_vs_ikka->cliffs_delta);
        st["recovery_hybrid_vs_hybrid_ikka"] = pr;
    } else {
        st["recovery_hybrid_vs_hybrid_ikka"] = nullptr;
    }
    j["statistics"] = st;
    j["notes"] = r.notes;
    return j;
}

std::string table1_csv(const Report& r) {
    std::ostringstream out;
    out << "tracker,nominal_runs,stress_runs,nominal_p95,stress_p95,fps,anomalous_runs,stress_anomalous_runs\n";
    for (const auto& s : r.table1) {
        out << simulator::to_string(s.tracker) << ',' << s.nominal_runs << ',' << s.stress_runs << ','
            << cell(s.nominal_p95) << ',' << cell(s.stress_p95) << ',' << cell(s.fps) << ',' << s.anomalous_runs << ','
            << s.stress_anomalous_runs << '\n';
    }
    return out.str();
}

std::string table2_csv(const Report& r) {
    std::ostringstream out;
    out << "tracker,occluded_runs,events,median_recovery_s,iqr_s,max_recovery_s,unrecovered\n";
    for (const auto& s : r.table2) {
        out << simulator::to_string(s.tracker) << ',' << s.runs << ',' << s.events << ',' << cell(s.median_s) << ','
            << cell(s.iqr_s) << ',' << cell(s.max_s) << ',' << s.unrecovered << '\n';
    }
    return out.str();
}

std::string table3_csv(const Report& r) {
    std::ostringstream out;
    out << "tracker,stress_runs,stress_p95,fps,anomalous_runs,reduction_vs_baseline\n";
    for (const auto& s : r.table3) {
        out << simulator::to_string(s.tracker) << ',' << s.stress_runs << ',' << cell(s.stress_p95) << ','
            << cell(s.fps) << ',' << s.anomalous_runs << ',' << cell(s.reduction_vs_baseline) << '\n';
    }
    return out.str();
}

}  // namespace ikka::analysis
