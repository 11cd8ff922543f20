#include "ikka/analysis.hpp"
#include "ikka/anomaly.hpp"
#include "ikka/control.hpp"
#include "ikka/counterexample.hpp"
#include "ikka/errors.hpp"
#include "ikka/io.hpp"
#include "ikka/simulator.hpp"
#include "ikka/stats.hpp"
#include "ikka/topology.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <utility>

namespace py = pybind11;
using namespace ikka;

namespace {

using PointList = std::vector<std::pair<double, double>>;
using Diagram = std::vector<std::pair<double, double>>;

std::vector<topology::Point2> to_points(const PointList& pts) {
    std::vector<topology::Point2> out;
    out.reserve(pts.size());
    for (const auto& [x, y] : pts) out.push_back({x, y});
    return out;
}

topology::PersistenceDiagram to_diagram(const Diagram& d) {
    topology::PersistenceDiagram pd;
    for (const auto& [b, e] : d) pd.pairs.push_back({b, e, false});
    return pd;
}

Diagram from_diagram(const topology::PersistenceDiagram& pd) {
    Diagram out;
    for (const auto& p : pd.pairs) out.emplace_back(p.birth, p.death);
    return out;
}

simulator::SimulationConfig config_from(const std::string& json) {
    if (json.empty()) return {};
    auto config = io::config_from_json(io::Json::parse(json));
    config.validate();
    return config;
}

simulator::ScenarioEntry make_entry(const std::string& run_id, const std::string& group, const std::string& condition,
                                    const std::string& tracker, std::uint64_t seed, double duration_s) {
    simulator::ScenarioEntry e;
    e.run_id = run_id;
    e.group = simulator::parse_group(group);
    e.condition = simulator::parse_condition(condition);
    e.tracker = simulator::parse_tracker(tracker);
    e.seed = seed;
    e.duration_s = duration_s;
    e.validate();
    return e;
}

py::dict test_dict(const stats::TestResult& t) {
    py::dict d;
    d["statistic"] = t.statistic;
    d["p_value"] = t.p_value;
    d["df"] = t.df;
    d["n"] = t.n;
    d["exact"] = t.exact;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Native core of the ikka package";

    // Translators run newest first, so the base class goes first.
    py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<PreconditionError>(m, "PreconditionError", PyExc_ValueError);
    py::register_exception<SchemaError>(m, "SchemaError", PyExc_ValueError);

    m.def(
        "yaw_command",
        [](double e_x, double w, double gain_k, double deadzone, double omega_max, double period) {
            return control::yaw_command(e_x, w, control::ControllerConfig{gain_k, deadzone, omega_max, period});
        },
        py::arg("e_x"), py::arg("w") = 1.0, py::arg("gain_k") = 2.5, py::arg("deadzone") = 0.02,
        py::arg("omega_max") = 1.2, py::arg("period") = 0.05);
    m.def(
        "stability_kT",
        [](double gain_k, double period) {
            control::ControllerConfig cfg;
            cfg.gain_k = gain_k;
            cfg.period_T = period;
            const auto r = control::stability_check(cfg);
            return std::make_pair(r.kT, r.stable);
        },
        py::arg("gain_k") = 2.5, py::arg("period") = 0.05);

    m.def(
        "rips_pd1", [](const PointList& pts, double max_radius) { return from_diagram(topology::rips_pd1(to_points(pts), max_radius)); },
        py::arg("points"), py::arg("max_radius"));
    m.def(
        "rips_pd0",
        [](const PointList& pts, double max_radius) {
            return from_diagram(topology::persistence(topology::build_rips(to_points(pts), max_radius), 0));
        },
        py::arg("points"), py::arg("max_radius"));
    m.def(
        "total_persistence", [](const Diagram& d) { return topology::total_persistence(to_diagram(d)); },
        py::arg("diagram"));
    m.def(
        "bottleneck_distance",
        [](const Diagram& a, const Diagram& b) { return topology::bottleneck_distance(to_diagram(a), to_diagram(b)); },
        py::arg("a"), py::arg("b"));
    m.def(
        "persistence_term",
        [](const PointList& te, double max_radius, double half_saturation) {
            std::vector<anomaly::FrameObservation> window;
            for (const auto& [t, e] : te) window.push_back({t, e, 1.0, std::nullopt, true});
            return anomaly::persistence_term(window, max_radius, half_saturation);
        },
        py::arg("frames"), py::arg("max_radius"), py::arg("half_saturation"));

    m.def("cliffs_delta", [](const std::vector<double>& a, const std::vector<double>& b) { return stats::cliffs_delta(a, b); });
    m.def("kruskal_wallis", [](const std::vector<std::vector<double>>& g) { return test_dict(stats::kruskal_wallis(g)); });
    m.def("spearman", [](const std::vector<double>& x, const std::vector<double>& y) { return test_dict(stats::spearman(x, y)); });
    m.def("holm_bonferroni", [](const std::vector<double>& p) { return stats::holm_bonferroni(p); });
    m.def(
        "percentile", [](const std::vector<double>& xs, double q) { return stats::percentile_nearest_rank(xs, q); },
        py::arg("xs"), py::arg("q"));

    m.def("default_config_json", [] { return io::config_to_json(simulator::SimulationConfig{}).dump(); });
    m.def(
        "run_scenario_csv",
        [](const std::string& run_id, const std::string& group, const std::string& condition,
           const std::string& tracker, std::uint64_t seed, double duration_s, const std::string& config) {
            const auto cfg = config_from(config);
            const auto log = simulator::run_scenario(make_entry(run_id, group, condition, tracker, seed, duration_s), cfg);
            std::ostringstream csv;
            io::write_run_log_csv(csv, log);
            return std::make_pair(csv.str(), io::metrics_to_json(simulator::compute_metrics(log, cfg)).dump());
        },
        py::arg("run_id"), py::arg("group"), py::arg("condition"), py::arg("tracker"), py::arg("seed"),
        py::arg("duration_s"), py::arg("config") = "");
    m.def(
        "analyze_json",
        [](const std::vector<std::string>& metrics) {
            std::vector<simulator::RunMetrics> runs;
            for (const auto& s : metrics) runs.push_back(io::metrics_from_json(io::Json::parse(s)));
            return analysis::report_to_json(analysis::analyze(runs)).dump();
        },
        py::arg("metrics"));
    m.def(
        "counterexample",
        [](std::uint64_t seed, int n_per_class) {
            counterexample::CounterexampleConfig cfg;
            cfg.seed = seed;
            cfg.n_per_class = n_per_class;
            const auto r = counterexample::run_counterexample(cfg);
            py::dict d;
            d["maverick"] = std::make_pair(r.grid.maverick.x, r.grid.maverick.y);
            d["maverick_distance"] = r.maverick_distance;
            d["sv_mean_distance"] = r.sv_mean_distance;
            d["support_vectors"] = r.support_vectors.size();
            d["training_accuracy"] = r.training_accuracy;
            return d;
        },
        py::arg("seed") = 7, py::arg("n_per_class") = 100);
}
