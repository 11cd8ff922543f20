#include "ikka/io.hpp"

#include "ikka/errors.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

namespace ikka::io {

using simulator::BaseTracker;
using simulator::LogRow;
using simulator::RunMetrics;
using simulator::ScenarioEntry;
using simulator::SimulationConfig;

double fixed(double x, int digits) {
    if (!std::isfinite(x)) return x;
    const double scale = std::pow(10.0, digits);
    const double r = std::round(x * scale) / scale;
    return r == 0.0 ? 0.0 : r;  // no negative zero
}

std::string format_fixed(double x, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", digits, fixed(x, digits));
    return buf;
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur.push_back(c);
        }
    }
    out.push_back(cur);
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& s, const std::string& what) {
    const std::string t = trim(s);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size() || !std::isfinite(v))
        throw SchemaError("bad number '" + s + "' in " + what);
    return v;
}

std::uint64_t parse_u64(const std::string& s, const std::string& what) {
    const std::string t = trim(s);
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size())
        throw SchemaError("bad unsigned integer '" + s + "' in " + what);
    return v;
}

bool parse_flag(const std::string& s, const std::string& what) {
    const std::string t = trim(s);
    if (t == "1") return true;
    if (t == "0") return false;
    throw SchemaError("bad flag '" + s + "' in " + what + " (expected 0 or 1)");
}

std::ifstream open_in(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open " + path.string());
    return in;
}

}  // namespace

// ---- manifest ---------------------------------------------------------------

ManifestParse parse_manifest_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw SchemaError("manifest is empty");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (trim(line) != kManifestHeader)
        throw SchemaError(std::string("manifest header must be '") + kManifestHeader + "'");

    ManifestParse out;
    std::set<std::string> seen;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto cells = split_csv(line);
        RowError err{lineno, cells.empty() ? std::string{} : trim(cells[0]), {}};
        try {
            if (cells.size() != 6) throw SchemaError("expected 6 fields, got " + std::to_string(cells.size()));
            ScenarioEntry e;
            e.run_id = trim(cells[0]);
            e.group = simulator::parse_group(trim(cells[1]));
            e.condition = simulator::parse_condition(trim(cells[2]));
            e.tracker = simulator::parse_tracker(trim(cells[3]));
            e.seed = parse_u64(cells[4], "seed");
            e.duration_s = parse_double(cells[5], "duration_s");
            e.validate();
            if (!seen.insert(e.run_id).second) throw ConfigError("duplicate run_id");
            out.entries.push_back(std::move(e));
        } catch (const Error& ex) {
            err.message = ex.what();
            out.errors.push_back(std::move(err));
        }
    }
    return out;
}

ManifestParse read_manifest_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    return parse_manifest_csv(in);
}

void write_manifest_csv(std::ostream& out, std::span<const ScenarioEntry> entries) {
    out << kManifestHeader << '\n';
    for (const auto& e : entries) {
        out << e.run_id << ',' << simulator::to_string(e.group) << ',' << simulator::to_string(e.condition) << ','
            << simulator::to_string(e.tracker) << ',' << e.seed << ',' << format_fixed(e.duration_s, 3) << '\n';
    }
}

// ---- run logs ---------------------------------------------------------------

void write_run_log_csv(std::ostream& out, const simulator::RunLog& log) {
    out << kRunLogHeader << '\n';
    std::string line;
    for (const auto& r : log.rows) {
        line.clear();
        for (double v : {r.t, r.e_true, r.e_meas, r.psr, r.csi, r.E, r.T, r.M, r.W, r.w, r.tau}) {
            line += format_fixed(v);
            line += ',';
        }
        line += r.tracked ? "1," : "0,";
        line += r.occluded ? "1," : "0,";
        line += simulator::to_string(r.active);
        out << line << '\n';
    }
}

std::vector<LogRow> parse_run_log_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) throw SchemaError("run log is empty");
    const auto header = split_csv(line);
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < header.size(); ++i) col[trim(header[i])] = i;
    auto need = [&](const char* name) {
        const auto it = col.find(name);
        if (it == col.end()) throw SchemaError(std::string("run log is missing column '") + name + "'");
        return it->second;
    };
    const std::size_t c_t = need("t");
    const std::size_t c_e_true = need("e_true");
    const std::size_t c_e_meas = need("e_meas");
    const std::size_t c_psr = need("psr");
    const std::size_t c_csi = need("csi");
    const std::size_t c_E = need("E");
    const std::size_t c_T = need("T");
    const std::size_t c_M = need("M");
    const std::size_t c_W = need("W");
    const std::size_t c_w = need("w");
    const std::size_t c_tau = need("tau");
    const std::size_t c_tracked = need("tracked");
    const std::size_t c_occluded = need("occluded");
    const std::size_t c_active = need("active_tracker");

    std::vector<LogRow> rows;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto cells = split_csv(line);
        if (cells.size() != header.size())
            throw SchemaError("run log line " + std::to_string(lineno) + ": expected " +
                              std::to_string(header.size()) + " fields");
        const std::string where = "run log line " + std::to_string(lineno);
        LogRow r;
        r.t = parse_double(cells[c_t], where);
        r.e_true = parse_double(cells[c_e_true], where);
        r.e_meas = parse_double(cells[c_e_meas], where);
        r.psr = parse_double(cells[c_psr], where);
        r.csi = parse_double(cells[c_csi], where);
        r.E = parse_double(cells[c_E], where);
        r.T = parse_double(cells[c_T], where);
        r.M = parse_double(cells[c_M], where);
        r.W = parse_double(cells[c_W], where);
        r.w = parse_double(cells[c_w], where);
        r.tau = parse_double(cells[c_tau], where);
        r.tracked = parse_flag(cells[c_tracked], where);
        r.occluded = parse_flag(cells[c_occluded], where);
        try {
            r.active = simulator::parse_base_tracker(trim(cells[c_active]));
        } catch (const ConfigError& ex) {
            throw SchemaError(where + ": " + ex.what());
        }
        rows.push_back(r);
    }
    return rows;
}

std::vector<LogRow> read_run_log_csv(const std::filesystem::path& path) {
    auto in = open_in(path);
    return parse_run_log_csv(in);
}

// ---- metrics ----------------------------------------------------------------

Json metrics_to_json(const RunMetrics& m) {
    Json j;
    j["run_id"] = m.run_id;
    j["group"] = simulator::to_string(m.group);
    j["condition"] = simulator::to_string(m.condition);
    j["tracker"] = simulator::to_string(m.tracker);
    j["seed"] = m.seed;
    j["p95_abs_error"] = fixed(m.p95_abs_error);
    j["p95_all_frames"] = fixed(m.p95_all_frames);
    j["tracked_fraction"] = fixed(m.tracked_fraction);
    Json rec = Json::array();
    for (double r : m.recovery_times_s) rec.push_back(fixed(r));
    j["recovery_times_s"] = rec;
    j["median_recovery_s"] = m.median_recovery_s ? Json(fixed(*m.median_recovery_s)) : Json(nullptr);
    j["unrecovered"] = m.unrecovered;
    j["anomalous"] = m.anomalous;
    j["mean_effective_fps"] = fixed(m.mean_effective_fps);
    j["fallback_count"] = m.fallback_count;
    j["mean_abs_tau_occluded"] = fixed(m.mean_abs_tau_occluded);
    return j;
}

namespace {

const Json& field(const Json& j, const char* name) {
    if (!j.is_object() || !j.contains(name)) throw SchemaError(std::string("metrics: missing field '") + name + "'");
    return j.at(name);
}

double number(const Json& j, const char* name) {
    const Json& v = field(j, name);
    if (!v.is_number()) throw SchemaError(std::string("metrics: field '") + name + "' is not a number");
    return v.get<double>();
}

int integer(const Json& j, const char* name) {
    const Json& v = field(j, name);
    if (!v.is_number_integer()) throw SchemaError(std::string("metrics: field '") + name + "' is not an integer");
    return v.get<int>();
}

std::string text(const Json& j, const char* name) {
    const Json& v = field(j, name);
    if (!v.is_string()) throw SchemaError(std::string("metrics: field '") + name + "' is not a string");
    return v.get<std::string>();
}

template <typename F>
auto named(const char* what, F&& f) {
    try {
        return f();
    } catch (const ConfigError& ex) {
        throw SchemaError(std::string("metrics: ") + what + ": " + ex.what());
    }
}

}  // namespace

RunMetrics metrics_from_json(const Json& j) {
    RunMetrics m;
    m.run_id = text(j, "run_id");
    m.group = named("group", [&] { return simulator::parse_group(text(j, "group")); });
    m.condition = named("condition", [&] { return simulator::parse_condition(text(j, "condition")); });
    m.tracker = named("tracker", [&] { return simulator::parse_tracker(text(j, "tracker")); });
    const Json& seed = field(j, "seed");
    if (!seed.is_number_unsigned()) throw SchemaError("metrics: field 'seed' is not an unsigned integer");
    m.seed = seed.get<std::uint64_t>();
    m.p95_abs_error = number(j, "p95_abs_error");
    m.p95_all_frames = number(j, "p95_all_frames");
    m.tracked_fraction = number(j, "tracked_fraction");
    const Json& rec = field(j, "recovery_times_s");
    if (!rec.is_array()) throw SchemaError("metrics: field 'recovery_times_s' is not a list");
    for (const auto& r : rec) {
        if (!r.is_number()) throw SchemaError("metrics: non-numeric recovery time");
        m.recovery_times_s.push_back(r.get<double>());
    }
    const Json& med = field(j, "median_recovery_s");
    if (med.is_number()) m.median_recovery_s = med.get<double>();
    else if (!med.is_null()) throw SchemaError("metrics: field 'median_recovery_s' is not a number or null");
    m.unrecovered = integer(j, "unrecovered");
    const Json& anomalous = field(j, "anomalous");
    if (!anomalous.is_boolean()) throw SchemaError("metrics: field 'anomalous' is not a boolean");
    m.anomalous = anomalous.get<bool>();
    m.mean_effective_fps = number(j, "mean_effective_fps");
    m.fallback_count = integer(j, "fallback_count");
    m.mean_abs_tau_occluded = number(j, "mean_abs_tau_occluded");
    if (m.p95_abs_error < 0.0) throw SchemaError("metrics: negative p95");
    return m;
}

// ---- configuration ----------------------------------------------------------

namespace {

// One scalar parameter: where it lives in the document and in the struct.
struct Param {
    std::string section;
    std::string key;
    std::function<double&(SimulationConfig&)> ref;
};

std::vector<Param> scalar_params() {
    std::vector<Param> p;
    auto add = [&](std::string section, std::string key, std::function<double&(SimulationConfig&)> ref) {
        p.push_back({std::move(section), std::move(key), std::move(ref)});
    };
    add("controller", "gain_k", [](SimulationConfig& c) -> double& { return c.controller.gain_k; });
    add("controller", "deadzone", [](SimulationConfig& c) -> double& { return c.controller.deadzone_delta; });
    add("controller", "omega_max", [](SimulationConfig& c) -> double& { return c.controller.omega_max; });
    add("controller", "period_s", [](SimulationConfig& c) -> double& { return c.controller.period_T; });

    add("coefficients", "alpha", [](SimulationConfig& c) -> double& { return c.coefficients.alpha; });
    add("coefficients", "beta", [](SimulationConfig& c) -> double& { return c.coefficients.beta; });
    add("coefficients", "gamma", [](SimulationConfig& c) -> double& { return c.coefficients.gamma; });
    add("coefficients", "calibration_offset",
        [](SimulationConfig& c) -> double& { return c.coefficients.calibration_offset; });

    add("hybrid", "fallback_psr", [](SimulationConfig& c) -> double& { return c.hybrid.fallback_psr; });
    add("hybrid", "recovery_psr", [](SimulationConfig& c) -> double& { return c.hybrid.recovery_psr; });
    add("hybrid", "ikka_gate", [](SimulationConfig& c) -> double& { return c.hybrid.ikka_gate; });

#define IKKA_SETTING(name) \
    add("settings", #name, [](SimulationConfig& c) -> double& { return c.settings.name; })
    IKKA_SETTING(loss_psr);
    IKKA_SETTING(psr_recovery_rate);
    IKKA_SETTING(reacquire_psr);
    IKKA_SETTING(relock_s);
    IKKA_SETTING(psr_noise_std);
    IKKA_SETTING(dim_threshold);
    IKKA_SETTING(velocity_time_constant_s);
    IKKA_SETTING(velocity_std);
    IKKA_SETTING(velocity_max);
    IKKA_SETTING(disturbance_std);
    IKKA_SETTING(initial_error_max);
    IKKA_SETTING(persistence_max_radius);
    IKKA_SETTING(persistence_half_saturation);
    IKKA_SETTING(field_error_scale);
    IKKA_SETTING(field_psr_scale);
    IKKA_SETTING(transversality_max);
    IKKA_SETTING(csi_noise_std);
    IKKA_SETTING(ikka_cost_ms);
#undef IKKA_SETTING

#define IKKA_STRESS(name) \
    add("stress", #name, [](SimulationConfig& c) -> double& { return c.settings.stress.name; })
    IKKA_STRESS(dim_onset_min_s);
    IKKA_STRESS(dim_onset_max_s);
    IKKA_STRESS(dim_duration_min_s);
    IKKA_STRESS(dim_duration_max_s);
    IKKA_STRESS(dim_level_min);
    IKKA_STRESS(dim_level_max);
    IKKA_STRESS(occlusion_onset_min_s);
    IKKA_STRESS(occlusion_tail_s);
    IKKA_STRESS(occlusion_min_s);
    IKKA_STRESS(occlusion_max_s);
#undef IKKA_STRESS

    add("acceptance", "recovery_band", [](SimulationConfig& c) -> double& { return c.acceptance.recovery_band; });
    add("acceptance", "recovery_hold_s", [](SimulationConfig& c) -> double& { return c.acceptance.recovery_hold_s; });
    add("acceptance", "max_recovery_s", [](SimulationConfig& c) -> double& { return c.acceptance.max_recovery_s; });
    add("acceptance", "max_p95", [](SimulationConfig& c) -> double& { return c.acceptance.max_p95; });
    return p;
}

// Integer and boolean parameters, stored as JSON integers / booleans.
struct IntParam {
    std::string section;
    std::string key;
    std::function<int&(SimulationConfig&)> ref;
};

std::vector<IntParam> int_params() {
    return {
        {"hybrid", "recovery_frames", [](SimulationConfig& c) -> int& { return c.hybrid.recovery_frames; }},
        {"settings", "window", [](SimulationConfig& c) -> int& { return c.settings.window; }},
    };
}

constexpr std::array<const char*, 8> kProfileKeys{"measurement_noise_std", "psr_nominal",     "psr_decay_under_stress",
                                                  "reacquire_lag_s",       "compute_cost_ms", "occlusion_drift",
                                                  "stress_noise_std",      "name"};

double& profile_field(simulator::TrackerProfile& p, const std::string& key) {
    if (key == "measurement_noise_std") return p.measurement_noise_std;
    if (key == "psr_nominal") return p.psr_nominal;
    if (key == "psr_decay_under_stress") return p.psr_decay_under_stress;
    if (key == "reacquire_lag_s") return p.reacquire_lag_s;
    if (key == "compute_cost_ms") return p.compute_cost_ms;
    if (key == "occlusion_drift") return p.occlusion_drift;
    if (key == "stress_noise_std") return p.stress_noise_std;
    throw ConfigError("unknown profile field '" + key + "'");
}

}  // namespace

Json config_to_json(const SimulationConfig& config) {
    SimulationConfig c = config;
    Json j;
    for (const auto& p : scalar_params()) j[p.section][p.key] = fixed(p.ref(c), 9);
    for (const auto& p : int_params()) j[p.section][p.key] = p.ref(c);
    j["coefficients"]["mode"] = c.coefficients.mode == anomaly::WeightMode::damping ? "damping" : "literal";
    j["settings"]["emit_csi"] = c.settings.emit_csi;
    for (auto& prof : c.profiles.profiles) {
        Json pj;
        for (const char* key : kProfileKeys) {
            if (std::string(key) == "name") continue;
            pj[key] = fixed(profile_field(prof, key), 9);
        }
        j["profiles"][prof.name] = pj;
    }
    return j;
}

SimulationConfig config_from_json(const Json& j, SimulationConfig base) {
    if (!j.is_object()) throw ConfigError("configuration must be a JSON object");
    const auto scalars = scalar_params();
    const auto ints = int_params();
    const Json known = config_to_json(SimulationConfig{});
    for (const auto& [section, body] : j.items()) {
        if (!known.contains(section)) throw ConfigError("unknown configuration section '" + section + "'");
        if (section == "profiles") {
            if (!body.is_object()) throw ConfigError("'profiles' must be an object");
            for (const auto& [name, pj] : body.items()) {
                BaseTracker t;
                try {
                    t = simulator::parse_base_tracker(name);
                } catch (const ConfigError&) {
                    throw ConfigError("unknown profile '" + name + "'");
                }
                if (!pj.is_object()) throw ConfigError("profile '" + name + "' must be an object");
                for (const auto& [key, v] : pj.items()) {
                    if (!v.is_number()) throw ConfigError("profile " + name + "." + key + " must be a number");
                    profile_field(base.profiles.get(t), key) = v.get<double>();
                }
            }
            continue;
        }
        if (!body.is_object()) throw ConfigError("section '" + section + "' must be an object");
        for (const auto& [key, v] : body.items()) {
            const std::string where = section + "." + key;
            if (section == "coefficients" && key == "mode") {
                if (v == "damping") base.coefficients.mode = anomaly::WeightMode::damping;
                else if (v == "literal") base.coefficients.mode = anomaly::WeightMode::literal;
                else throw ConfigError(where + " must be 'damping' or 'literal'");
                continue;
            }
            if (section == "settings" && key == "emit_csi") {
                if (!v.is_boolean()) throw ConfigError(where + " must be a boolean");
                base.settings.emit_csi = v.get<bool>();
                continue;
            }
            bool found = false;
            for (const auto& p : scalars) {
                if (p.section != section || p.key != key) continue;
                if (!v.is_number()) throw ConfigError(where + " must be a number");
                p.ref(base) = v.get<double>();
                found = true;
            }
            for (const auto& p : ints) {
                if (p.section != section || p.key != key) continue;
                if (!v.is_number_integer()) throw ConfigError(where + " must be an integer");
                p.ref(base) = v.get<int>();
                found = true;
            }
            if (!found) throw ConfigError("unknown configuration key '" + where + "'");
        }
    }
    base.validate();
    return base;
}

Json read_json(const std::filesystem::path& path) {
    auto in = open_in(path);
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& ex) {
        throw SchemaError(path.string() + ": " + ex.what());
    }
}

SimulationConfig read_config(const std::filesystem::path& path) {
    Json j;
    try {
        j = read_json(path);
    } catch (const SchemaError& ex) {
        throw ConfigError(ex.what());
    }
    return config_from_json(j);
}

void write_json(const std::filesystem::path& path, const Json& j) { write_text(path, j.dump(2) + "\n"); }

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << text;
    if (!out) throw Error("write failed for " + path.string());
}

}  // namespace ikka::io
