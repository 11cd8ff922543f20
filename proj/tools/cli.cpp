#include "ikka/cli.hpp"

#include "ikka/analysis.hpp"
#include "ikka/anomaly.hpp"
#include "ikka/counterexample.hpp"
#include "ikka/errors.hpp"
#include "ikka/io.hpp"
#include "ikka/simulator.hpp"
#include "ikka/topology.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <sstream>
#include <vector>

namespace ikka::cli {

namespace fs = std::filesystem;
using io::Json;
using simulator::ScenarioEntry;

namespace {

constexpr std::uint64_t kDefaultSeed = 2026;

simulator::SimulationConfig load_config(const CliConfig& cfg) {
    if (!cfg.config) return {};
    auto config = io::read_config(*cfg.config);
    config.validate();
    return config;
}

void prepare_output(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw ConfigError("cannot create output directory " + dir.string());
    const auto probe = dir / ".ikka_write_probe";
    {
        std::ofstream out(probe);
        if (!out) throw ConfigError("output directory is not writable: " + dir.string());
    }
    fs::remove(probe, ec);
}

fs::path output_dir(const CliConfig& cfg) { return cfg.output.empty() ? default_output_dir() : cfg.output; }

void apply_seed(std::vector<ScenarioEntry>& entries, std::optional<std::uint64_t> seed) {
    if (!seed) return;
    for (std::size_t i = 0; i < entries.size(); ++i) entries[i].seed = simulator::derive_seed(*seed, i);
}

Json row_errors_json(const std::vector<io::RowError>& errors) {
    Json out = Json::array();
    for (const auto& e : errors) out.push_back({{"line", e.line}, {"run_id", e.run_id}, {"error", e.message}});
    return out;
}

// Runs the entries and writes logs/, metrics/, config.json and summary.json.
int simulate_entries(const std::vector<ScenarioEntry>& entries, const std::vector<io::RowError>& row_errors,
                     const simulator::SimulationConfig& config, const fs::path& out_dir, const CliConfig& cfg,
                     std::ostream& err) {
    const auto logs_dir = out_dir / "logs";
    const auto metrics_dir = out_dir / "metrics";
    fs::create_directories(logs_dir);
    fs::create_directories(metrics_dir);
    io::write_json(out_dir / "config.json", io::config_to_json(config));

    for (const auto& e : row_errors) err << "manifest line " << e.line << " (" << e.run_id << "): " << e.message << '\n';

    Json runs = Json::array();
    Json failures = Json::array();
    std::size_t ok = 0;
    constexpr std::size_t kChunk = 64;  // bounds the number of logs held in memory
    for (std::size_t start = 0; start < entries.size(); start += kChunk) {
        const std::size_t stop = std::min(entries.size(), start + kChunk);
        const std::span<const ScenarioEntry> chunk(entries.data() + start, stop - start);
        const auto items = simulator::run_batch(chunk, config, true, cfg.jobs);
        for (const auto& item : items) {
            if (!item.metrics) {
                err << "run " << item.entry.run_id << " failed: " << item.error << '\n';
                failures.push_back({{"run_id", item.entry.run_id}, {"error", item.error}});
                continue;
            }
            std::ostringstream csv;
            io::write_run_log_csv(csv, *item.log);
            io::write_text(logs_dir / (item.entry.run_id + ".csv"), csv.str());
            io::write_json(metrics_dir / (item.entry.run_id + ".json"), io::metrics_to_json(*item.metrics));
            runs.push_back({{"run_id", item.entry.run_id},
                            {"tracker", simulator::to_string(item.entry.tracker)},
                            {"condition", simulator::to_string(item.entry.condition)},
                            {"p95_abs_error", io::fixed(item.metrics->p95_abs_error)},
                            {"anomalous", item.metrics->anomalous}});
            ++ok;
            if (cfg.verbosity > 0) err << "ok " << item.entry.run_id << '\n';
        }
    }

    Json summary;
    summary["runs_requested"] = entries.size() + row_errors.size();
    summary["runs_completed"] = ok;
    summary["manifest_errors"] = row_errors_json(row_errors);
    summary["run_errors"] = failures;
    summary["runs"] = runs;
    io::write_json(out_dir / "summary.json", summary);

    err << ok << " of " << entries.size() + row_errors.size() << " runs written to " << out_dir.string() << '\n';
    return (row_errors.empty() && failures.empty()) ? kSuccess : kPartialFailure;
}

// Analyzes metrics/<run_id>.json (or <run_id>.json) under `in_dir` for every
// manifest entry and writes the tables and report into `out_dir`.
int analyze_entries(const std::vector<ScenarioEntry>& entries, const fs::path& in_dir, const fs::path& out_dir,
                    std::ostream& err) {
    std::vector<simulator::RunMetrics> metrics;
    Json missing = Json::array();
    for (const auto& e : entries) {
        fs::path path = in_dir / "metrics" / (e.run_id + ".json");
        if (!fs::exists(path)) path = in_dir / (e.run_id + ".json");
        try {
            if (!fs::exists(path)) throw SchemaError("no metrics file");
            metrics.push_back(io::metrics_from_json(io::read_json(path)));
        } catch (const Error& ex) {
            err << "metrics for " << e.run_id << " excluded: " << ex.what() << '\n';
            missing.push_back({{"run_id", e.run_id}, {"error", ex.what()}});
        }
    }
    if (metrics.empty()) {
        err << "no readable metrics under " << in_dir.string() << '\n';
        return kPartialFailure;
    }

    prepare_output(out_dir);
    const auto report = analysis::analyze(metrics);
    io::write_text(out_dir / "table1.csv", analysis::table1_csv(report));
    io::write_text(out_dir / "table2.csv", analysis::table2_csv(report));
    io::write_text(out_dir / "table3.csv", analysis::table3_csv(report));
    auto j = analysis::report_to_json(report);
    j["excluded"] = missing;
    io::write_json(out_dir / "report.json", j);
    err << metrics.size() << " runs analyzed into " << out_dir.string() << '\n';
    return missing.empty() ? kSuccess : kPartialFailure;
}

std::vector<ScenarioEntry> require_manifest(const CliConfig& cfg, std::vector<io::RowError>& errors) {
    if (cfg.manifest.empty()) throw ConfigError("--manifest is required");
    if (!fs::exists(cfg.manifest)) throw ConfigError("manifest not found: " + cfg.manifest.string());
    io::ManifestParse parse;
    try {
        parse = io::read_manifest_csv(cfg.manifest);
    } catch (const SchemaError& ex) {
        throw ConfigError(ex.what());
    }
    errors = std::move(parse.errors);
    return std::move(parse.entries);
}

std::string diagram_csv(const topology::PersistenceDiagram& pd) {
    std::string out = "degree,birth,death,truncated\n";
    for (const auto& p : pd.pairs)
        out += std::to_string(pd.degree) + ',' + io::format_fixed(p.birth) + ',' + io::format_fixed(p.death) + ',' +
               (p.truncated ? "1" : "0") + '\n';
    return out;
}

std::string points_csv(const std::vector<counterexample::Vec2>& pts) {
    std::string out = "x,y\n";
    for (const auto& p : pts) out += io::format_fixed(p.x) + ',' + io::format_fixed(p.y) + '\n';
    return out;
}

Json check_json(const std::optional<counterexample::Indispensability>& c) {
    if (!c) return nullptr;
    return {{"beta1_before", c->beta1_before},
            {"beta1_after", c->beta1_after},
            {"scale", io::fixed(c->scale)},
            {"local_points", c->local_points},
            {"removed", c->removed}};
}

Json point_json(const counterexample::Vec2& p) { return {io::fixed(p.x), io::fixed(p.y)}; }

// Config errors map to exit 2, everything else to exit 1.
template <class F>
int guarded(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const ConfigError& ex) {
        err << "configuration error: " << ex.what() << '\n';
        return kConfigError;
    } catch (const PreconditionError& ex) {
        err << "configuration error: " << ex.what() << '\n';
        return kConfigError;
    } catch (const SolverError& ex) {
        err << "solver error: " << ex.what() << " (residual " << ex.residual() << ")\n";
        return kPartialFailure;
    } catch (const std::exception& ex) {
        err << "error: " << ex.what() << '\n';
        return kPartialFailure;
    }
}

}  // namespace

fs::path default_output_dir() {
    if (const char* env = std::getenv(kOutputDirEnv); env != nullptr && *env != '\0') return env;
    return "ikka_out";
}

int cmd_simulate(const CliConfig& cfg, std::ostream& err) {
    return guarded(err, [&] {
        std::vector<io::RowError> row_errors;
        auto entries = require_manifest(cfg, row_errors);
        apply_seed(entries, cfg.seed);
        const auto config = load_config(cfg);
        const auto out = output_dir(cfg);
        prepare_output(out);
        return simulate_entries(entries, row_errors, config, out, cfg, err);
    });
}

int cmd_ablation(const CliConfig& cfg, std::ostream& err) {
    return guarded(err, [&] {
        if (cfg.runs < 1) throw ConfigError("--runs must be positive");
        using simulator::Tracker;
        const std::vector<Tracker> arms{Tracker::hybrid, Tracker::hybrid_ikka, Tracker::ablation_e,
                                        Tracker::ablation_t, Tracker::ablation_m};
        const auto entries = simulator::stress_manifest(arms, cfg.runs, cfg.seed.value_or(kDefaultSeed));
        const auto config = load_config(cfg);
        const auto out = output_dir(cfg);
        prepare_output(out);
        std::ofstream manifest(out / "manifest.csv", std::ios::binary);
        io::write_manifest_csv(manifest, entries);
        manifest.close();
        const int sim = simulate_entries(entries, {}, config, out, cfg, err);
        const int ana = analyze_entries(entries, out, out / "analysis", err);
        return std::max(sim, ana);
    });
}

int cmd_analyze(const CliConfig& cfg, std::ostream& err) {
    return guarded(err, [&] {
        std::vector<io::RowError> row_errors;
        const auto entries = require_manifest(cfg, row_errors);
        for (const auto& e : row_errors) err << "manifest line " << e.line << ": " << e.message << '\n';
        if (cfg.input.empty()) throw ConfigError("--input is required");
        if (!fs::is_directory(cfg.input)) throw ConfigError("input directory not found: " + cfg.input.string());
        const int rc = analyze_entries(entries, cfg.input, output_dir(cfg), err);
        return row_errors.empty() ? rc : std::max(rc, static_cast<int>(kPartialFailure));
    });
}

int cmd_persistence(const CliConfig& cfg, std::ostream& err) {
    return guarded(err, [&] {
        if (cfg.input.empty()) throw ConfigError("--input must name a run-log CSV");
        if (!fs::is_regular_file(cfg.input)) throw ConfigError("run log not found: " + cfg.input.string());
        const auto config = load_config(cfg);
        const auto rows = io::read_run_log_csv(cfg.input);
        if (rows.size() < 3) throw SchemaError("run log needs at least three rows");

        std::vector<topology::Point2> cloud;
        cloud.reserve(rows.size());
        for (const auto& r : rows) cloud.push_back({r.t, std::abs(r.e_meas)});
        const double radius = config.settings.persistence_max_radius;
        const auto filtration = topology::build_rips(cloud, radius, {.max_points = std::max<std::size_t>(2000, rows.size())});
        const auto pd0 = topology::persistence(filtration, 0);
        const auto pd1 = topology::persistence(filtration, 1);
        const double raw = topology::total_persistence(pd1);
        const double half = config.settings.persistence_half_saturation;

        const auto out = output_dir(cfg);
        prepare_output(out);
        io::write_text(out / "pd0.csv", diagram_csv(pd0));
        io::write_text(out / "pd1.csv", diagram_csv(pd1));
        Json j;
        j["input"] = cfg.input.filename().string();
        j["points"] = cloud.size();
        j["max_radius"] = radius;
        j["half_saturation"] = half;
        j["pd0_pairs"] = pd0.size();
        j["pd1_pairs"] = pd1.size();
        j["raw_persistence"] = io::fixed(raw, 9);
        j["M"] = io::fixed(anomaly::normalize_persistence(raw, half), 9);
        io::write_json(out / "persistence.json", j);
        err << "M = " << io::format_fixed(anomaly::normalize_persistence(raw, half)) << " from " << pd1.size()
            << " H1 classes\n";
        return static_cast<int>(kSuccess);
    });
}

int cmd_counterexample(const CliConfig& cfg, std::ostream& err) {
    return guarded(err, [&] {
        counterexample::CounterexampleConfig cc;
        cc.n_per_class = cfg.n_per_class;
        if (cfg.seed) cc.seed = *cfg.seed;
        if (cc.n_per_class < 30) throw PreconditionError("n_per_class must be at least 30");
        const auto report = counterexample::run_counterexample(cc);

        const auto out = output_dir(cfg);
        prepare_output(out);
        const auto& g = report.grid;
        std::string grid;
        for (std::size_t iy = 0; iy < g.ny; ++iy) {
            for (std::size_t ix = 0; ix < g.nx; ++ix) {
                if (ix > 0) grid += ',';
                grid += io::format_fixed(g.at(ix, iy));
            }
            grid += '\n';
        }
        io::write_text(out / "w_grid.csv", grid);

        std::string data = "x,y,label\n";
        for (std::size_t i = 0; i < report.data.size(); ++i)
            data += io::format_fixed(report.data.points[i].x) + ',' + io::format_fixed(report.data.points[i].y) + ',' +
                    std::to_string(report.data.labels[i]) + '\n';
        io::write_text(out / "dataset.csv", data);
        io::write_text(out / "support_vectors.csv", points_csv(report.support_vectors));
        io::write_text(out / "mavericks.csv", points_csv(g.top5));

        Json j;
        j["seed"] = cc.seed;
        j["n_per_class"] = cc.n_per_class;
        j["box_c"] = cc.box_c;
        j["bandwidth"] = io::fixed(report.model.bandwidth);
        j["grid"] = {{"nx", g.nx},
                     {"ny", g.ny},
                     {"x_min", cc.grid.x_min},
                     {"x_max", cc.grid.x_max},
                     {"y_min", cc.grid.y_min},
                     {"y_max", cc.grid.y_max},
                     {"rows", "y ascending"}};
        j["training_accuracy"] = io::fixed(report.training_accuracy);
        j["support_vectors"] = report.support_vectors.size();
        j["sv_mean_distance"] = io::fixed(report.sv_mean_distance);
        j["maverick"] = point_json(g.maverick);
        j["maverick_weight"] = io::fixed(g.maverick_weight);
        j["maverick_distance"] = io::fixed(report.maverick_distance);
        j["degenerate_grid"] = g.degenerate;
        j["maverick_check"] = check_json(report.maverick_check);
        j["support_vector_probe"] = point_json(report.support_vector_probe);
        j["support_vector_check"] = check_json(report.support_vector_check);
        io::write_json(out / "summary.json", j);
        err << "maverick at distance " << io::format_fixed(report.maverick_distance, 4) << ", support vectors at "
            << io::format_fixed(report.sv_mean_distance, 4) << '\n';
        return static_cast<int>(kSuccess);
    });
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"IKKA anomaly weighting toolkit"};
    app.require_subcommand(1);
    CliConfig cfg;
    std::string manifest, input, output, config;
    std::optional<std::uint64_t> seed;

    const auto common = [&](CLI::App* sub) {
        sub->add_option("-o,--output", output, "Output directory (default $IKKA_OUTPUT_DIR or ikka_out)");
        sub->add_option("--config", config, "JSON configuration overlay")->check(CLI::ExistingFile);
        sub->add_flag("-v,--verbose", cfg.verbosity, "More progress output");
    };

    auto* simulate = app.add_subcommand("simulate", "Run a manifest of closed-loop scenarios");
    simulate->add_option("-m,--manifest", manifest, "Scenario manifest CSV")->required();
    simulate->add_option("--seed", seed, "Replace manifest seeds with ones derived from this value");
    simulate->add_option("-j,--jobs", cfg.jobs, "Worker threads, 0 for all cores");
    common(simulate);

    auto* ablation = app.add_subcommand("ablation", "Simulate and analyze the ablation arms under stress");
    ablation->add_option("--runs", cfg.runs, "Runs per arm");
    ablation->add_option("--seed", seed, "Base seed");
    ablation->add_option("-j,--jobs", cfg.jobs, "Worker threads, 0 for all cores");
    common(ablation);

    auto* analyze = app.add_subcommand("analyze", "Aggregate run metrics into tables and statistics");
    analyze->add_option("-m,--manifest", manifest, "Scenario manifest CSV")->required();
    analyze->add_option("-i,--input", input, "Directory holding metric JSON files")->required();
    common(analyze);

    auto* persist = app.add_subcommand("persistence", "Persistence diagrams of a run log");
    persist->add_option("-i,--input", input, "Run-log CSV")->required();
    common(persist);

    auto* counter = app.add_subcommand("counterexample", "Support vectors against the maverick point");
    counter->add_option("--seed", seed, "Dataset seed");
    counter->add_option("--n-per-class", cfg.n_per_class, "Points per class");
    common(counter);

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kSuccess;
    } catch (const CLI::CallForAllHelp& e) {
        out << app.help("", CLI::AppFormatMode::All);
        return kSuccess;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        return kConfigError;
    }

    CLI::App* chosen = app.get_subcommands().front();
    cfg.subcommand = chosen->get_name();
    cfg.manifest = manifest;
    cfg.input = input;
    cfg.output = output;
    if (!config.empty()) cfg.config = config;
    cfg.seed = seed;

    if (cfg.subcommand == "simulate") return cmd_simulate(cfg, err);
    if (cfg.subcommand == "ablation") return cmd_ablation(cfg, err);
    if (cfg.subcommand == "analyze") return cmd_analyze(cfg, err);
    if (cfg.subcommand == "persistence") return cmd_persistence(cfg, err);
    return cmd_counterexample(cfg, err);
}

}  // namespace ikka::cli
