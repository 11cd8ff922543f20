#include "ikka/simulator.hpp"

#include "ikka/errors.hpp"
#include "ikka/stats.hpp"

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>
#include <boost/random/seed_seq.hpp>
#include <boost/random/uniform_01.hpp>
#include <boost/random/uniform_real_distribution.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <deque>
#include <map>
#include <set>
#include <thread>

namespace ikka::simulator {

namespace {

constexpr std::array<std::string_view, 3> kGroupNames{"screen_gt", "arena", "occlusion"};
constexpr std::array<std::string_view, 4> kConditionNames{"nominal", "dim", "occlusion", "dim_occlusion"};
constexpr std::array<std::string_view, 9> kTrackerNames{"hsv",    "mosse",       "kcf",        "csrt",      "hybrid",
                                                        "hybrid_ikka", "ablation_e", "ablation_t", "ablation_m"};
constexpr std::array<std::string_view, 4> kBaseNames{"hsv", "mosse", "kcf", "csrt"};

template <typename Enum, std::size_t N>
Enum parse_name(std::string_view s, const std::array<std::string_view, N>& names, const char* what) {
    for (std::size_t i = 0; i < N; ++i)
        if (names[i] == s) return static_cast<Enum>(i);
    throw ConfigError(std::string("unknown ") + what + " '" + std::string(s) + "'");
}

// Independent generator per purpose so arms on the same seed share the
// environment draws regardless of how many draws their trackers need.
boost::random::mt19937_64 stream(std::uint64_t seed, std::uint32_t purpose) {
    boost::random::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), purpose};
    return boost::random::mt19937_64(seq);
}

struct Schedule {
    double dim_on = 0.0;
    double dim_off = 0.0;
    double dim_level = 1.0;
    double occ_on = 0.0;
    double occ_off = 0.0;
};

Schedule draw_schedule(const ScenarioEntry& entry, const StressSettings& s, boost::random::mt19937_64& rng) {
    // Scaled unit draws: a zero-width range is allowed and still consumes one.
    boost::random::uniform_01<double> unit;
    const auto draw = [&](double lo, double hi) { return lo + (hi - lo) * unit(rng); };
    // Every value is drawn for every condition so the draws stay aligned.
    const double dim_on = draw(s.dim_onset_min_s, s.dim_onset_max_s);
    const double dim_len = draw(s.dim_duration_min_s, s.dim_duration_max_s);
    const double dim_level = draw(s.dim_level_min, s.dim_level_max);
    const double latest = std::max(s.occlusion_onset_min_s, entry.duration_s - s.occlusion_tail_s);
    const double occ_on = draw(s.occlusion_onset_min_s, latest);
    const double occ_len = draw(s.occlusion_min_s, s.occlusion_max_s);

    Schedule out;
    if (entry.condition == Condition::dim || entry.condition == Condition::dim_occlusion) {
        out.dim_on = dim_on;
        out.dim_off = dim_on + dim_len;
        out.dim_level = dim_level;
    }
    if (entry.condition == Condition::occlusion || entry.condition == Condition::dim_occlusion) {
        out.occ_on = occ_on;
        out.occ_off = occ_on + occ_len;
    }
    return out;
}

TrackerState switch_tracker(const TrackerState& from, const TrackerProfile& to, double drift_draw, double relock_s) {
    TrackerState next;
    next.psr = to.psr_nominal;
    next.drift_rate = drift_draw * to.occlusion_drift;
    next.e_meas = from.e_meas;
    next.held = from.held;
    if (from.tracked || from.init_remaining_s > 0.0) {
        // Initialized on the current box; no output until the model is built.
        next.tracked = false;
        next.init_remaining_s = to.reacquire_lag_s;
        next.held = from.e_meas;
        next.anchor_remaining_s = relock_s;
    } else {
        next.tracked = false;
        next.lost_clear_s = 0.0;
    }
    return next;
}

}  // namespace

std::string_view to_string(Group g) { return kGroupNames.at(static_cast<std::size_t>(g)); }
std::string_view to_string(Condition c) { return kConditionNames.at(static_cast<std::size_t>(c)); }
std::string_view to_string(Tracker t) { return kTrackerNames.at(static_cast<std::size_t>(t)); }
std::string_view to_string(BaseTracker t) { return kBaseNames.at(static_cast<std::size_t>(t)); }

Group parse_group(std::string_view s) { return parse_name<Group>(s, kGroupNames, "group"); }
Condition parse_condition(std::string_view s) { return parse_name<Condition>(s, kConditionNames, "condition"); }
Tracker parse_tracker(std::string_view s) { return parse_name<Tracker>(s, kTrackerNames, "tracker"); }
BaseTracker parse_base_tracker(std::string_view s) { return parse_name<BaseTracker>(s, kBaseNames, "base tracker"); }

bool is_hybrid(Tracker t) {
    return t == Tracker::hybrid || t == Tracker::hybrid_ikka || t == Tracker::ablation_e ||
           t == Tracker::ablation_t || t == Tracker::ablation_m;
}

WeightSource weight_source(Tracker t) {
    switch (t) {
        case Tracker::hybrid_ikka: return WeightSource::full;
        case Tracker::ablation_e: return WeightSource::extremality;
        case Tracker::ablation_t: return WeightSource::transversality;
        case Tracker::ablation_m: return WeightSource::persistence;
        default: return WeightSource::none;
    }
}

bool is_stress(Condition c) { return c != Condition::nominal; }

void ScenarioEntry::validate() const {
    if (run_id.empty()) throw ConfigError("empty run_id");
    if (!(duration_s > 0.0) || !std::isfinite(duration_s))
        throw ConfigError("run " + run_id + ": duration_s must be positive");
}

void TrackerProfile::validate() const {
    for (double v : {measurement_noise_std, psr_decay_under_stress, reacquire_lag_s, compute_cost_ms, occlusion_drift,
                     stress_noise_std})
        if (!(v >= 0.0) || !std::isfinite(v)) throw ConfigError("profile " + name + ": negative or non-finite field");
    if (!(psr_nominal >= 0.0 && psr_nominal <= 1.0)) throw ConfigError("profile " + name + ": psr_nominal outside [0,1]");
    if (psr_decay_under_stress > 1.0) throw ConfigError("profile " + name + ": psr_decay_under_stress above 1 per second");
}

void ProfileTable::validate() const {
    for (const auto& p : profiles) p.validate();
}

ProfileTable default_profiles() {
    ProfileTable t;
    t.get(BaseTracker::hsv) = {"hsv", 0.020, 0.75, 0.30, 0.10, 35.6, 0.02, 0.50};
    t.get(BaseTracker::mosse) = {"mosse", 0.006, 0.90, 1.00, 0.15, 38.5, 0.06, 0.08};
    t.get(BaseTracker::kcf) = {"kcf", 0.008, 0.90, 0.35, 0.45, 45.5, 0.05, 0.15};
    t.get(BaseTracker::csrt) = {"csrt", 0.005, 0.85, 0.15, 0.60, 55.6, 0.04, 0.15};
    return t;
}

void SimulationConfig::validate() const {
    profiles.validate();
    controller.validate();
    coefficients.validate();
    if (settings.window < 5) throw ConfigError("anomaly window must hold at least 5 frames");
    if (!(settings.transversality_max > 0.0)) throw ConfigError("transversality_max must be positive");
    if (hybrid.recovery_frames < 1) throw ConfigError("recovery_frames must be positive");
    const auto& st = settings.stress;
    if (!(st.dim_onset_min_s <= st.dim_onset_max_s) || !(st.dim_duration_min_s <= st.dim_duration_max_s) ||
        !(st.dim_level_min <= st.dim_level_max) || !(st.occlusion_min_s <= st.occlusion_max_s) ||
        !(st.occlusion_onset_min_s >= 0.0) || !(st.occlusion_min_s >= 0.0) || !(st.dim_level_min >= 0.0) ||
        !(st.dim_level_max <= 1.0))
        throw ConfigError("stress ranges must be ordered and non-negative");
    if (!(settings.relock_s >= 0.0)) throw ConfigError("relock_s must be non-negative");
    if (!(settings.reacquire_psr >= 0.0 && settings.reacquire_psr <= 1.0))
        throw ConfigError("reacquire_psr must lie in [0, 1]");
    if (!(settings.velocity_max >= 0.0) || !(settings.velocity_time_constant_s > 0.0))
        throw ConfigError("velocity bounds must be non-negative and the time constant positive");
    if (!(acceptance.recovery_hold_s >= 0.0) || !(acceptance.recovery_band > 0.0))
        throw ConfigError("recovery thresholds must be positive");
}

PlantState plant_step(const PlantState& state, double tau, double dt, double disturbance) {
    if (!(dt > 0.0)) throw PreconditionError("dt must be positive");
    PlantState next = state;
    next.e_true = std::clamp(state.e_true + dt * (state.target_velocity - tau) + disturbance, -1.0, 1.0);
    return next;
}

double advance_velocity(double v, double innovation, double dt, const SimulationSettings& s) {
    const double theta = s.velocity_time_constant_s;
    const double next = v - dt * v / theta + s.velocity_std * std::sqrt(2.0 * dt / theta) * innovation;
    return std::clamp(next, -s.velocity_max, s.velocity_max);
}

TrackerState initial_tracker_state(const TrackerProfile& profile, double e_true) {
    TrackerState s;
    s.psr = profile.psr_nominal;
    s.e_meas = e_true;
    s.held = e_true;
    return s;
}

Observation observe(const PlantState& plant, const TrackerProfile& profile, TrackerState& tr,
                    const FrameNoise& noise, double dt, const SimulationSettings& s) {
    const bool stressed = plant.occluded || plant.illumination < s.dim_threshold;
    const double illum = std::max(plant.illumination, 1e-3);
    if (stressed) tr.psr = std::max(0.0, tr.psr - profile.psr_decay_under_stress * dt);
    else tr.psr = std::min(profile.psr_nominal, tr.psr + s.psr_recovery_rate * dt);

    if (tr.init_remaining_s > 0.0) {
        tr.init_remaining_s -= dt;
        if (tr.init_remaining_s <= 1e-12) {
            tr.init_remaining_s = 0.0;
            tr.tracked = true;
        }
    } else if (tr.tracked) {
        if (stressed && tr.psr < s.loss_psr) {
            tr.tracked = false;
            tr.lost_clear_s = 0.0;
        }
        tr.anchor_remaining_s = std::max(0.0, tr.anchor_remaining_s - dt);
        if (tr.anchor_remaining_s <= 1e-12) tr.anchor_remaining_s = 0.0;
    } else {
        // Re-detection needs the target in view.
        tr.lost_clear_s = plant.occluded ? 0.0 : tr.lost_clear_s + dt;
        if (tr.lost_clear_s >= profile.reacquire_lag_s - 1e-12) {
            tr.tracked = true;
            tr.psr = std::min(profile.psr_nominal, s.reacquire_psr);
            tr.anchor_remaining_s = 0.0;
        }
    }

    Observation obs;
    obs.tracked = tr.tracked;
    const double unstable = stressed && profile.psr_nominal > 0.0
                                ? profile.stress_noise_std * noise.instability * std::max(0.0, 1.0 - tr.psr / profile.psr_nominal)
                                : 0.0;
    if (tr.tracked && (plant.occluded || tr.anchor_remaining_s > 0.0)) {
        // Target hidden or box on the wrong patch: it slides off the last position.
        tr.held = std::clamp(tr.held + tr.drift_rate * dt, -1.0, 1.0);
        tr.e_meas = std::clamp(tr.held + unstable, -1.0, 1.0);
        obs.fresh = true;
    } else if (tr.tracked) {
        const double period_ms = dt * 1000.0;
        tr.cost_debt_ms += profile.compute_cost_ms - period_ms;
        if (tr.cost_debt_ms >= period_ms) {
            tr.cost_debt_ms -= period_ms;  // frame dropped: previous estimate stands
        } else {
            tr.cost_debt_ms = std::max(tr.cost_debt_ms, 0.0);
            const double sigma = profile.measurement_noise_std / illum;
            tr.e_meas = std::clamp(plant.e_true + noise.measurement * sigma + unstable, -1.0, 1.0);
            tr.held = tr.e_meas;
            obs.fresh = true;
        }
    }
    obs.e_meas = tr.e_meas;
    obs.psr = std::clamp(tr.psr + s.psr_noise_std * noise.psr, 0.0, 1.0);
    return obs;
}

BaseTracker hybrid_step(HybridState& state, double psr, std::optional<double> w, const HybridThresholds& t) {
    if (state.active == BaseTracker::mosse) {
        if (psr < t.fallback_psr && (!w || *w < t.ikka_gate)) {
            state.active = BaseTracker::csrt;
            state.recovery_streak = 0;
            ++state.fallbacks;
        }
    } else if (state.active == BaseTracker::csrt) {
        state.recovery_streak = psr > t.recovery_psr ? state.recovery_streak + 1 : 0;
        if (state.recovery_streak >= t.recovery_frames) {
            state.active = BaseTracker::mosse;
            state.recovery_streak = 0;
        }
    } else {
        throw PreconditionError("hybrid switching needs mosse or csrt active");
    }
    return state.active;
}

anomaly::ProbabilityField servo_field(const SimulationSettings& s) {
    constexpr std::size_t nx = 81;
    constexpr std::size_t ny = 41;
    anomaly::ProbabilityField field(3, nx, ny, -1.0, 1.0, 0.0, 1.0);
    for (std::size_t iy = 0; iy < ny; ++iy)
        for (std::size_t ix = 0; ix < nx; ++ix) {
            const double e = field.x_at(ix);
            const double psr = field.y_at(iy);
            const std::array<double, 3> score{-e / s.field_error_scale, e / s.field_error_scale,
                                              (s.loss_psr - psr) / s.field_psr_scale};
            const double top = std::max({score[0], score[1], score[2]});
            double total = 0.0;
            std::array<double, 3> ex{};
            for (std::size_t k = 0; k < 3; ++k) {
                ex[k] = std::exp(score[k] - top);
                total += ex[k];
            }
            for (std::size_t k = 0; k < 3; ++k) field.at(ix, iy, k) = ex[k] / total;
        }
    return field;
}

RunLog run_scenario(const ScenarioEntry& entry, const SimulationConfig& config) {
    entry.validate();
    config.validate();
    const auto& s = config.settings;
    const double dt = config.controller.period_T;
    const auto steps = static_cast<std::size_t>(std::llround(entry.duration_s / dt));

    auto env = stream(entry.seed, 1);
    auto sensor = stream(entry.seed, 2);
    auto aux = stream(entry.seed, 3);
    boost::random::normal_distribution<double> gauss;
    boost::random::uniform_real_distribution<double> uniform(-1.0, 1.0);

    const Schedule sched = draw_schedule(entry, s.stress, env);
    const double drift_draw = gauss(env);

    // Transversality per node, looked up at the nearest interior node.
    const auto field = servo_field(s);
    std::vector<double> t_table(field.nx() * field.ny(), 0.0);
    for (std::size_t iy = 1; iy + 1 < field.ny(); ++iy)
        for (std::size_t ix = 1; ix + 1 < field.nx(); ++ix) {
            const auto tr = anomaly::transversality(field, {ix, iy});
            t_table[iy * field.nx() + ix] = tr.degenerate_pairs > 0 ? 0.0 : std::min(1.0, tr.value / s.transversality_max);
        }
    const auto lookup_t = [&](double e, double psr) {
        const auto ix = static_cast<std::size_t>(
            std::clamp(std::lround((e - field.x_min()) / field.dx()), 1L, static_cast<long>(field.nx()) - 2));
        const auto iy = static_cast<std::size_t>(
            std::clamp(std::lround((psr - field.y_min()) / field.dy()), 1L, static_cast<long>(field.ny()) - 2));
        return t_table[iy * field.nx() + ix];
    };

    PlantState plant;
    plant.e_true = s.initial_error_max * uniform(env);
    plant.target_velocity = std::clamp(s.velocity_std * gauss(env), -s.velocity_max, s.velocity_max);

    const bool hybrid = is_hybrid(entry.tracker);
    const auto source = weight_source(entry.tracker);
    HybridState hstate;
    BaseTracker active = hybrid ? BaseTracker::mosse : static_cast<BaseTracker>(static_cast<int>(entry.tracker));
    TrackerState tracker = initial_tracker_state(config.profiles.get(active), plant.e_true);
    tracker.drift_rate = drift_draw * config.profiles.get(active).occlusion_drift;

    std::deque<anomaly::FrameObservation> window;
    std::deque<double> csi_window;
    std::vector<anomaly::FrameObservation> window_buf;
    std::vector<double> csi_buf;

    double last_tau = 0.0;
    RunLog log;
    log.entry = entry;
    log.rows.reserve(steps);
    for (std::size_t k = 0; k < steps; ++k) {
        const double t = static_cast<double>(k) * dt;
        plant.occluded = t >= sched.occ_on && t < sched.occ_off;
        plant.illumination = (t >= sched.dim_on && t < sched.dim_off) ? sched.dim_level : 1.0;

        FrameNoise noise;
        noise.measurement = gauss(sensor);
        noise.psr = gauss(sensor);
        noise.instability = gauss(sensor);
        const double velocity_draw = gauss(env);
        const double disturbance = s.disturbance_std * gauss(env);
        const double csi_draw = gauss(aux);

        const auto& profile = config.profiles.get(active);
        const auto obs = observe(plant, profile, tracker, noise, dt, s);
        const double csi = s.emit_csi ? plant.illumination + s.csi_noise_std * csi_draw : 0.0;

        window.push_back({t, obs.e_meas, obs.psr, s.emit_csi ? std::optional<double>(csi) : std::nullopt, obs.tracked});
        if (s.emit_csi) csi_window.push_back(csi);
        if (window.size() > static_cast<std::size_t>(s.window)) window.pop_front();
        if (csi_window.size() > static_cast<std::size_t>(s.window)) csi_window.pop_front();
        window_buf.assign(window.begin(), window.end());
        csi_buf.assign(csi_window.begin(), csi_window.end());

        LogRow row;
        row.t = t;
        row.e_true = plant.e_true;
        row.e_meas = obs.e_meas;
        row.psr = obs.psr;
        row.csi = csi;
        row.E = window_buf.size() >= 5 ? anomaly::extremality(window_buf) : 0.0;
        row.T = lookup_t(obs.e_meas, obs.psr);
        row.M = window_buf.size() >= 3 ? anomaly::persistence_term(window_buf, s.persistence_max_radius,
                                                                    s.persistence_half_saturation)
                                       : 0.0;
        row.W = anomaly::full_weight(row.E, row.T, row.M);
        double x = 0.0;
        switch (source) {
            case WeightSource::full: x = row.W; break;
            case WeightSource::extremality: x = row.E; break;
            case WeightSource::transversality: x = row.T; break;
            case WeightSource::persistence: x = row.M; break;
            case WeightSource::none: break;
        }
        row.w = source == WeightSource::none ? 1.0 : anomaly::frame_weight(x, obs.psr, csi_buf, config.coefficients);
        // While a tracker initializes the loop is stalled and the last
        // command stays on the motors; after a loss the servo stops.
        if (obs.tracked) row.tau = control::yaw_command(obs.e_meas, row.w, config.controller);
        else row.tau = tracker.init_remaining_s > 0.0 ? last_tau : 0.0;
        last_tau = row.tau;
        row.tracked = obs.tracked;
        row.occluded = plant.occluded;
        row.active = active;
        log.rows.push_back(row);

        // A tracker that is still initializing reports no confidence.
        if (hybrid && tracker.init_remaining_s <= 0.0) {
            const auto next = hybrid_step(hstate, obs.psr,
                                          source == WeightSource::none ? std::nullopt : std::optional<double>(row.w),
                                          config.hybrid);
            if (next != active) {
                tracker = switch_tracker(tracker, config.profiles.get(next), drift_draw, s.relock_s);
                active = next;
            }
        }

        plant = plant_step(plant, row.tau, dt, disturbance);
        plant.target_velocity = advance_velocity(plant.target_velocity, velocity_draw, dt, s);
    }
    return log;
}

RunMetrics compute_metrics(const RunLog& log, const SimulationConfig& config) {
    if (log.rows.empty()) throw PreconditionError("run log " + log.entry.run_id + " has no rows");
    const auto& rows = log.rows;
    const auto& acc = config.acceptance;
    RunMetrics m;
    m.run_id = log.entry.run_id;
    m.group = log.entry.group;
    m.condition = log.entry.condition;
    m.tracker = log.entry.tracker;
    m.seed = log.entry.seed;

    std::vector<double> tracked_err;
    std::vector<double> all_err;
    double cost = 0.0;
    double tau_occ = 0.0;
    int occ_rows = 0;
    const bool ikka = weight_source(log.entry.tracker) != WeightSource::none;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        all_err.push_back(std::fabs(r.e_meas));
        if (r.tracked) tracked_err.push_back(std::fabs(r.e_meas));
        cost += config.profiles.get(r.active).compute_cost_ms + (ikka ? config.settings.ikka_cost_ms : 0.0);
        if (r.occluded) {
            tau_occ += std::fabs(r.tau);
            ++occ_rows;
        }
        if (i > 0 && rows[i - 1].active == BaseTracker::mosse && r.active == BaseTracker::csrt) ++m.fallback_count;
    }
    m.p95_all_frames = stats::percentile_nearest_rank(all_err, 95.0);
    m.p95_abs_error = tracked_err.empty() ? m.p95_all_frames : stats::percentile_nearest_rank(tracked_err, 95.0);
    m.tracked_fraction = static_cast<double>(tracked_err.size()) / static_cast<double>(rows.size());
    m.mean_effective_fps = 1000.0 / (cost / static_cast<double>(rows.size()));
    m.mean_abs_tau_occluded = occ_rows > 0 ? tau_occ / occ_rows : 0.0;

    const double dt = rows.size() > 1 ? rows[1].t - rows[0].t : config.controller.period_T;
    const auto hold = static_cast<std::size_t>(std::llround(acc.recovery_hold_s / dt));
    for (std::size_t j = 1; j < rows.size(); ++j) {
        if (!(rows[j - 1].occluded && !rows[j].occluded)) continue;
        std::optional<double> found;
        for (std::size_t i = j; i + hold < rows.size(); ++i) {
            bool ok = true;
            for (std::size_t h = 0; h <= hold && ok; ++h) ok = std::fabs(rows[i + h].e_true) < acc.recovery_band;
            if (ok) {
                found = rows[i].t - rows[j].t;
                break;
            }
        }
        if (found) {
            m.recovery_times_s.push_back(*found);
        } else {
            ++m.unrecovered;
            m.recovery_times_s.push_back(rows.back().t + dt - rows[j].t);
        }
    }
    if (!m.recovery_times_s.empty()) m.median_recovery_s = stats::median(m.recovery_times_s);
    const bool slow = std::any_of(m.recovery_times_s.begin(), m.recovery_times_s.end(),
                                  [&](double r) { return r > acc.max_recovery_s + 1e-9; });
    m.anomalous = slow || m.unrecovered > 0 || m.p95_abs_error > acc.max_p95;
    return m;
}

std::vector<BatchItem> run_batch(std::span<const ScenarioEntry> manifest, const SimulationConfig& config,
                                 bool keep_logs, unsigned threads) {
    std::vector<BatchItem> out(manifest.size());
    const auto run_one = [&](std::size_t i) {
        BatchItem& item = out[i];
        item.entry = manifest[i];
        try {
            auto log = run_scenario(item.entry, config);
            item.metrics = compute_metrics(log, config);
            if (keep_logs) item.log = std::move(log);
        } catch (const Error& e) {
            item.error = e.what();
        }
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(manifest.size(), 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < manifest.size(); ++i) run_one(i);
        return out;
    }
    // Each slot is written by exactly one worker.
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (unsigned w = 0; w < threads; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < manifest.size(); i = next++) run_one(i);
        });
    for (auto& t : pool) t.join();
    return out;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    boost::random::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                                static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    std::array<std::uint32_t, 2> words{};
    seq.generate(words.begin(), words.end());
    return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

std::vector<ScenarioEntry> default_manifest(std::uint64_t base_seed) {
    constexpr std::array<Tracker, 6> main{Tracker::hsv,  Tracker::mosse,  Tracker::kcf,
                                          Tracker::csrt, Tracker::hybrid, Tracker::hybrid_ikka};
    constexpr std::array<Condition, 5> arena_cycle{Condition::nominal, Condition::nominal, Condition::dim,
                                                   Condition::occlusion, Condition::dim_occlusion};
    std::vector<ScenarioEntry> out;
    char id[64];
    for (int i = 0; i < 50; ++i) {
        std::snprintf(id, sizeof id, "gt_%03d", i);
        out.push_back({id, Group::screen_gt, Condition::nominal, main[static_cast<std::size_t>(i % 6)],
                       derive_seed(base_seed, static_cast<std::uint64_t>(i)), 10.0});
    }
    for (const auto tracker : main)
        for (int j = 0; j < 25; ++j) {
            std::snprintf(id, sizeof id, "arena_%s_%02d", std::string(to_string(tracker)).c_str(), j);
            out.push_back({id, Group::arena, arena_cycle[static_cast<std::size_t>(j % 5)], tracker,
                           derive_seed(base_seed, 1000 + static_cast<std::uint64_t>(j)), 20.0});
        }
    for (const auto tracker : main)
        for (int j = 0; j < 5; ++j) {
            std::snprintf(id, sizeof id, "occ_%s_%02d", std::string(to_string(tracker)).c_str(), j);
            out.push_back({id, Group::occlusion, Condition::occlusion, tracker,
                           derive_seed(base_seed, 2000 + static_cast<std::uint64_t>(j)), 15.0});
        }
    return out;
}

std::vector<ScenarioEntry> stress_manifest(std::span<const Tracker> arms, int runs, std::uint64_t base_seed) {
    constexpr std::array<Condition, 3> cycle{Condition::dim, Condition::occlusion, Condition::dim_occlusion};
    std::vector<ScenarioEntry> out;
    char id[64];
    for (const auto tracker : arms)
        for (int j = 0; j < runs; ++j) {
            const auto condition = cycle[static_cast<std::size_t>(j % 3)];
            std::snprintf(id, sizeof id, "stress_%s_%02d", std::string(to_string(tracker)).c_str(), j);
            out.push_back({id, condition == Condition::dim ? Group::arena : Group::occlusion, condition, tracker,
                           derive_seed(base_seed, static_cast<std::uint64_t>(j)), 20.0});
        }
    return out;
}

}  // namespace ikka::simulator
