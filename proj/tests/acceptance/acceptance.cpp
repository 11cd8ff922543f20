#include "ikka/cli.hpp"
#include "ikka/control.hpp"
#include "ikka/counterexample.hpp"
#include "ikka/io.hpp"
#include "ikka/simulator.hpp"
#include "ikka/stats.hpp"
#include "ikka/topology.hpp"

#include "oracles/persistence_oracle.hpp"
#include "oracles/qp_oracle.hpp"
#include "oracles/stats_oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <span>
#include <stdexcept>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace ikka;
using simulator::Tracker;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

struct Criterion {
    int id;
    const char* name;
    double budget_s;  // 0 means no runtime bound
    std::function<Outcome()> check;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

std::vector<topology::Point2> random_cloud(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<topology::Point2> pts(n);
    for (auto& p : pts) p = {u(rng), u(rng)};
    return pts;
}

std::vector<std::pair<double, double>> sorted_pairs(const topology::PersistenceDiagram& d) {
    std::vector<std::pair<double, double>> out;
    for (const auto& p : d.pairs) out.emplace_back(p.birth, p.death);
    std::sort(out.begin(), out.end());
    return out;
}

Outcome persistence_oracle() {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<std::size_t> size(3, 12);
    std::uniform_real_distribution<double> radius(0.2, 1.2);
    std::size_t bars = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const auto pts = random_cloud(rng, size(rng));
        const double r = radius(rng);
        std::vector<oracle::Pt> plain;
        for (const auto& p : pts) plain.push_back({p.a, p.b});
        auto theirs = oracle::brute_force_diagram(plain, r, 1);
        std::vector<std::pair<double, double>> ref;
        for (const auto& b : theirs) ref.emplace_back(b.birth, b.death);
        std::sort(ref.begin(), ref.end());
        if (sorted_pairs(topology::rips_pd1(pts, r)) != ref) return {false, fmt("cloud %d differs", trial)};
        bars += ref.size();
    }
    return {true, fmt("200 clouds, %zu bars identical", bars)};
}

Outcome stability() {
    // eps bounds the change of every pairwise distance, so points move by eps/2.
    std::mt19937_64 rng(2);
    std::uniform_int_distribution<std::size_t> size(5, 60);
    double worst = 0.0;
    for (double eps : {0.01, 0.05, 0.1}) {
        std::uniform_real_distribution<double> jitter(-eps / 2, eps / 2);
        for (int trial = 0; trial < 100; ++trial) {
            const auto pts = random_cloud(rng, size(rng));
            auto moved = pts;
            for (auto& p : moved) {
                p.a += jitter(rng);
                p.b += jitter(rng);
            }
            const double d = topology::bottleneck_distance(topology::rips_pd1(pts, 3.0), topology::rips_pd1(moved, 3.0));
            worst = std::max(worst, d / eps);
            if (d > eps + 1e-9) return {false, fmt("eps %.2f trial %d: bottleneck %.6f", eps, trial, d)};
        }
    }
    return {true, fmt("300 trials, worst bottleneck/eps %.3f", worst)};
}

Outcome control_law() {
    const control::ControllerConfig cfg;
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> ex(-10.0, 10.0);
    std::uniform_real_distribution<double> wd(0.0, 1.0);
    double peak = 0.0;
    for (int i = 0; i < 1'000'000; ++i) peak = std::max(peak, std::abs(control::yaw_command(ex(rng), wd(rng), cfg)));
    if (peak > cfg.omega_max) return {false, fmt("|omega| reached %.6f", peak)};

    const auto report = control::stability_check(cfg);
    if (std::abs(report.kT - 0.125) > 1e-12 || !report.stable) return {false, fmt("kT %.6f", report.kT)};

    const int steps = static_cast<int>(std::round(5.0 / cfg.period_T));
    double residual = 0.0;
    for (int k = 0; k <= 200; ++k) {
        const double e0 = -1.0 + 0.01 * k;
        double e = e0;
        for (int n = 0; n < steps; ++n) e -= cfg.period_T * control::yaw_command(e, 1.0, cfg);
        residual = std::max(residual, std::abs(e));
    }
    // Shrinkage makes the approach to the band edge geometric (ratio 1 - kT), never exact.
    const double band = cfg.deadzone_delta + 1e-5;
    if (residual > band) return {false, fmt("worst |e| after 5 s: %.6f", residual)};
    return {true, fmt("max |omega| %.4f, kT %.3f, worst |e(5 s)| %.5f", peak, report.kT, residual)};
}

std::vector<double> tied_sample(std::mt19937_64& rng, std::size_t n, int levels) {
    std::uniform_int_distribution<int> level(0, levels - 1);
    std::vector<double> out(n);
    for (auto& v : out) v = 0.5 * level(rng);
    return out;
}

Outcome stats_oracles() {
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<std::size_t> size(4, 12);
    double worst = 0.0;
    auto track = [&](double a, double b) { worst = std::max(worst, std::abs(a - b)); };
    for (int trial = 0; trial < 250; ++trial) {
        const auto a = tied_sample(rng, size(rng), 6);
        const auto b = tied_sample(rng, size(rng), 6);
        track(stats::cliffs_delta(a, b), oracle::brute_cliffs_delta(a, b));

        std::vector<std::vector<double>> groups{a, b, tied_sample(rng, size(rng), 6)};
        bool all_tied = true;
        for (const auto& g : groups)
            for (double v : g) all_tied = all_tied && v == groups[0][0];
        if (!all_tied) track(stats::kruskal_wallis(groups).statistic, oracle::brute_kruskal_h(groups));

        const std::size_t n = std::max<std::size_t>(size(rng), 6);  // the signed-rank test needs six pairs
        auto x = tied_sample(rng, n, 5);
        auto y = tied_sample(rng, n, 5);
        for (std::size_t i = 0; i < n; ++i)
            if (x[i] == y[i]) y[i] += 0.25 * static_cast<double>(1 + i % 3);
        const auto exact = oracle::brute_signed_rank(x, y);
        const auto two = stats::wilcoxon_signed_rank(x, y);
        if (!two.exact) return {false, fmt("signed-rank n=%zu not exact", n)};
        track(two.statistic, exact.w_plus);
        track(two.p_value, exact.p_two_sided);
        track(stats::wilcoxon_signed_rank(x, y, stats::Alternative::less).p_value, exact.p_less);
        track(stats::wilcoxon_signed_rank(x, y, stats::Alternative::greater).p_value, exact.p_greater);

        auto sx = tied_sample(rng, n, 7);
        auto sy = tied_sample(rng, n, 7);
        sx[0] = -1.0;  // keep both samples non-constant
        sy[1] = -1.0;
        track(stats::spearman(sx, sy).statistic, oracle::brute_spearman(sx, sy));
    }
    if (worst > 1e-12) return {false, fmt("max deviation %.3g", worst)};
    return {true, fmt("250 instances per test, max deviation %.3g", worst)};
}

std::map<Tracker, std::vector<double>> stress_p95(std::span<const Tracker> arms, int runs, std::uint64_t seed) {
    const auto manifest = simulator::stress_manifest(arms, runs, seed);
    std::map<Tracker, std::vector<double>> out;
    for (const auto& item : simulator::run_batch(manifest, simulator::SimulationConfig{}, false, 0)) {
        if (!item.metrics) throw std::runtime_error(item.entry.run_id + ": " + item.error);
        out[item.metrics->tracker].push_back(item.metrics->p95_abs_error);
    }
    return out;
}

Outcome table1_direction() {
    constexpr std::array arms{Tracker::hsv, Tracker::hybrid, Tracker::hybrid_ikka};
    auto p95 = stress_p95(arms, 30, 2026);
    const double hsv = stats::median(p95[Tracker::hsv]);
    const double hyb = stats::median(p95[Tracker::hybrid]);
    const double ikka = stats::median(p95[Tracker::hybrid_ikka]);
    const double delta = stats::cliffs_delta(p95[Tracker::hybrid], p95[Tracker::hybrid_ikka]);
    const double reduction = (hyb - ikka) / hyb;
    const bool pass = ikka < hyb && hyb < hsv && delta >= 0.4 && reduction >= 0.15;
    return {pass, fmt("medians ikka %.4f hybrid %.4f hsv %.4f, delta %.3f (ref 0.79), reduction %.1f%% (ref 24%%)", ikka,
                      hyb, hsv, delta, 100.0 * reduction)};
}

Outcome ablation_order() {
    constexpr std::array arms{Tracker::hybrid, Tracker::hybrid_ikka, Tracker::ablation_e, Tracker::ablation_t,
                              Tracker::ablation_m};
    auto p95 = stress_p95(arms, 30, 2026);
    std::map<Tracker, double> med;
    for (auto t : arms) med[t] = stats::median(p95[t]);
    bool pass = true;
    for (auto t : {Tracker::ablation_e, Tracker::ablation_t, Tracker::ablation_m})
        pass = pass && med[Tracker::hybrid_ikka] < med[t] && med[t] < med[Tracker::hybrid];
    return {pass, fmt("medians full %.4f E %.4f T %.4f M %.4f baseline %.4f", med[Tracker::hybrid_ikka],
                      med[Tracker::ablation_e], med[Tracker::ablation_t], med[Tracker::ablation_m],
                      med[Tracker::hybrid])};
}

struct RecoverySweep {
    std::vector<double> hybrid;
    std::vector<double> ikka;
    int ikka_unrecovered = 0;
};

RecoverySweep recovery_sweep(std::uint64_t base) {
    std::vector<simulator::ScenarioEntry> manifest;
    for (auto tracker : {Tracker::hybrid, Tracker::hybrid_ikka})
        for (int j = 0; j < 30; ++j)
            manifest.push_back({fmt("occ_%s_%02d", std::string(simulator::to_string(tracker)).c_str(), j),
                                simulator::Group::occlusion, simulator::Condition::occlusion, tracker,
                                simulator::derive_seed(base, static_cast<std::uint64_t>(j)), 20.0});
    RecoverySweep out;
    for (const auto& item : simulator::run_batch(manifest, simulator::SimulationConfig{}, false, 0)) {
        if (!item.metrics) throw std::runtime_error(item.entry.run_id + ": " + item.error);
        const auto& m = *item.metrics;
        auto& dst = m.tracker == Tracker::hybrid ? out.hybrid : out.ikka;
        dst.insert(dst.end(), m.recovery_times_s.begin(), m.recovery_times_s.end());
        if (m.tracker == Tracker::hybrid_ikka) out.ikka_unrecovered += m.unrecovered;
    }
    return out;
}

Outcome recovery() {
    const auto first = recovery_sweep(2026);
    if (first.hybrid.empty() || first.ikka.empty()) return {false, "no recovery events"};
    const double hyb = stats::median(first.hybrid);
    const double ikka = stats::median(first.ikka);
    int good = 0;
    double worst = 0.0;
    constexpr int sweeps = 10;
    for (int s = 0; s < sweeps; ++s) {
        const auto sweep = s == 0 ? first : recovery_sweep(2026 + static_cast<std::uint64_t>(s));
        const double top = sweep.ikka.empty() ? 0.0 : *std::max_element(sweep.ikka.begin(), sweep.ikka.end());
        worst = std::max(worst, top);
        // Times sit on the frame grid, so 14 frames must not slip under 0.7 s by rounding.
        if (top < 0.7 - 1e-9 && sweep.ikka_unrecovered == 0) ++good;
    }
    const bool pass = ikka < hyb && good * 10 >= sweeps * 9;
    return {pass, fmt("median recovery ikka %.3f s hybrid %.3f s, sweeps all < 0.7 s: %d/%d (worst %.3f s)", ikka, hyb,
                      good, sweeps, worst)};
}

Outcome counterexample_gap() {
    std::vector<double> maverick, sv;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        counterexample::CounterexampleConfig cfg;
        cfg.seed = seed;
        const auto r = counterexample::run_counterexample(cfg);
        maverick.push_back(r.maverick_distance);
        sv.push_back(r.sv_mean_distance);
    }
    const double m = stats::median(maverick);
    const double s = stats::median(sv);
    return {m < 0.3 && s > 0.9, fmt("median maverick %.3f (ref 0.13), median SV distance %.3f (ref 1.32)", m, s)};
}

Outcome smo() {
    counterexample::SmoOptions opts;
    opts.record_objective = true;
    std::size_t steps = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const auto data = counterexample::generate_three_class(60, seed);
        const auto model = counterexample::train_rbf_svm(data, 1.0, counterexample::median_pairwise_distance(data.points), opts);
        for (const auto& mach : model.machines) {
            for (std::size_t i = 1; i < mach.objective_trace.size(); ++i)
                if (mach.objective_trace[i] < mach.objective_trace[i - 1] - 1e-12)
                    return {false, fmt("objective fell at step %zu (seed %llu)", i, static_cast<unsigned long long>(seed))};
            steps += mach.objective_trace.size();
        }
    }

    const std::vector<counterexample::Vec2> pts{{0.0, 0.0}, {1.0, 0.2}, {0.3, 1.1}, {1.4, 1.0}, {0.6, 0.5}};
    const std::vector<double> y{1, -1, 1, -1, 1};
    std::vector<double> k(25);
    for (std::size_t i = 0; i < 5; ++i)
        for (std::size_t j = 0; j < 5; ++j) {
            const double d = counterexample::distance(pts[i], pts[j]);
            k[i * 5 + j] = std::exp(-d * d / (2 * 0.7 * 0.7));
        }
    double gap = 0.0;
    for (double c : {0.5, 1.0, 10.0}) {
        counterexample::SmoOptions tight;
        tight.tolerance = 1e-9;
        const auto sol = counterexample::solve_dual(k, y, c, tight);
        const auto ref = oracle::solve_dual_qp(k, y, c);
        for (std::size_t i = 0; i < 5; ++i) gap = std::max(gap, std::abs(sol.alpha[i] - ref[i]));
    }
    return {gap <= 1e-4, fmt("%zu monotone steps, toy max |alpha - oracle| %.2g", steps, gap)};
}

std::map<std::string, std::string> tree(const fs::path& dir) {
    std::map<std::string, std::string> out;
    for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (!e.is_regular_file()) continue;
        std::ifstream in(e.path(), std::ios::binary);
        std::ostringstream buf;
        buf << in.rdbuf();
        out[fs::relative(e.path(), dir).generic_string()] = buf.str();
    }
    return out;
}

Outcome determinism() {
    const fs::path root = fs::temp_directory_path() / fmt("ikka_acceptance_%lld",
                                                          static_cast<long long>(std::chrono::steady_clock::now().time_since_epoch().count()));
    fs::create_directories(root);
    const auto manifest = root / "manifest.csv";
    {
        std::ofstream out(manifest);
        io::write_manifest_csv(out, simulator::default_manifest());
    }
    std::ostringstream sink;
    auto run = [&](std::vector<std::string> args) {
        args.insert(args.begin(), "ikka");
        std::vector<const char*> argv;
        for (const auto& a : args) argv.push_back(a.c_str());
        return cli::run(static_cast<int>(argv.size()), argv.data(), sink, sink);
    };
    for (const char* name : {"a", "b"}) {
        const auto dir = root / name;
        const int sim = run({"simulate", "-m", manifest.string(), "-o", (dir / "sim").string()});
        const int an = run({"analyze", "-m", manifest.string(), "-i", (dir / "sim").string(), "-o", (dir / "analysis").string()});
        if (sim != 0 || an != 0) {
            fs::remove_all(root);
            return {false, fmt("exit codes %d/%d: %s", sim, an, sink.str().c_str())};
        }
    }
    const auto a = tree(root / "a");
    const auto b = tree(root / "b");
    std::size_t bytes = 0;
    for (const auto& [k, v] : a) bytes += v.size();
    fs::remove_all(root);
    return {a == b && a.size() > 230, fmt("%zu files, %zu bytes, trees %s", a.size(), bytes, a == b ? "identical" : "differ")};
}

}  // namespace

int main(int argc, char** argv) {
    std::set<int> expected_fail;
    std::set<int> only;
    for (int i = 1; i < argc; ++i) {
        const std::string a = argv[i];
        if (a == "--expect-fail" && i + 1 < argc)
            expected_fail.insert(std::stoi(argv[++i]));
        else if (a == "--only" && i + 1 < argc)
            only.insert(std::stoi(argv[++i]));
        else {
            std::fprintf(stderr, "usage: %s [--expect-fail N]... [--only N]...\n", argv[0]);
            return 2;
        }
    }

    const std::vector<Criterion> criteria{
        {1, "persistence matches brute-force oracle", 30, persistence_oracle},
        {2, "bottleneck stability under perturbation", 120, stability},
        {3, "control law bounds and convergence", 0, control_law},
        {4, "statistics match brute-force oracles", 60, stats_oracles},
        {5, "stress ordering and effect size", 300, table1_direction},
        {6, "ablation ordering", 0, ablation_order},
        {7, "occlusion recovery", 0, recovery},
        {8, "counterexample distance gap", 0, counterexample_gap},
        {9, "SMO monotone and matches QP oracle", 0, smo},
        {10, "simulate+analyze byte-identical", 600, determinism},
    };

    int unexpected = 0;
    for (const auto& c : criteria) {
        if (!only.empty() && !only.count(c.id)) continue;
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.check();
        } catch (const std::exception& ex) {
            o = {false, std::string("exception: ") + ex.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (c.budget_s > 0 && secs > c.budget_s) {
            o.pass = false;
            o.detail += fmt("; over the %.0f s budget", c.budget_s);
        }
        const bool known = expected_fail.count(c.id) > 0;
        std::printf("%s [%d] %s: %s (%.1f s)%s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs,
                    !o.pass && known ? " [known failure]" : "");
        std::fflush(stdout);
        if (!o.pass && !known) ++unexpected;
    }
    return unexpected == 0 ? 0 : 1;
}
