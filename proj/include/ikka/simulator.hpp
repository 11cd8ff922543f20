#pragma once

#include "ikka/anomaly.hpp"
#include "ikka/control.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ikka::simulator {

enum class Group { screen_gt, arena, occlusion };
enum class Condition { nominal, dim, occlusion, dim_occlusion };
enum class Tracker { hsv, mosse, kcf, csrt, hybrid, hybrid_ikka, ablation_e, ablation_t, ablation_m };
// Trackers that actually produce measurements.
enum class BaseTracker { hsv, mosse, kcf, csrt };

std::string_view to_string(Group g);
std::string_view to_string(Condition c);
std::string_view to_string(Tracker t);
std::string_view to_string(BaseTracker t);
// Throw ConfigError on unknown names.
Group parse_group(std::string_view s);
Condition parse_condition(std::string_view s);
Tracker parse_tracker(std::string_view s);
BaseTracker parse_base_tracker(std::string_view s);

inline constexpr std::array<Tracker, 9> kAllTrackers{Tracker::hsv,         Tracker::mosse,      Tracker::kcf,
                                                     Tracker::csrt,        Tracker::hybrid,     Tracker::hybrid_ikka,
                                                     Tracker::ablation_e,  Tracker::ablation_t, Tracker::ablation_m};

bool is_hybrid(Tracker t);
// Which quantity replaces E in the damping exponent; empty when w = 1.
enum class WeightSource { none, full, extremality, transversality, persistence };
WeightSource weight_source(Tracker t);
bool is_stress(Condition c);

struct ScenarioEntry {
    std::string run_id;
    Group group = Group::arena;
    Condition condition = Condition::nominal;
    Tracker tracker = Tracker::hybrid;
    std::uint64_t seed = 0;
    double duration_s = 20.0;

    void validate() const;
};

struct TrackerProfile {
    std::string name;
    double measurement_noise_std = 0.01;
    double psr_nominal = 0.9;
    double psr_decay_under_stress = 0.5;  // per second, linear
    double reacquire_lag_s = 0.2;
    double compute_cost_ms = 40.0;
    // Std of the rate at which the box slides off a hidden target, per second.
    double occlusion_drift = 0.05;
    // Extra estimate noise under stress, scaled by the lost confidence
    // fraction 1 - psr / psr_nominal.
    double stress_noise_std = 0.15;

    void validate() const;
};

struct ProfileTable {
    std::array<TrackerProfile, 4> profiles;

    const TrackerProfile& get(BaseTracker t) const { return profiles[static_cast<std::size_t>(t)]; }
    TrackerProfile& get(BaseTracker t) { return profiles[static_cast<std::size_t>(t)]; }
    void validate() const;
};

ProfileTable default_profiles();

struct HybridThresholds {
    double fallback_psr = 0.35;
    double recovery_psr = 0.6;
    int recovery_frames = 10;
    double ikka_gate = 0.5;
};

struct StressSettings {
    double dim_onset_min_s = 2.0;
    double dim_onset_max_s = 4.0;
    double dim_duration_min_s = 4.0;
    double dim_duration_max_s = 8.0;
    double dim_level_min = 0.25;
    double dim_level_max = 0.4;
    double occlusion_onset_min_s = 3.0;
    double occlusion_tail_s = 5.0;  // latest onset is duration minus this
    double occlusion_min_s = 1.0;
    double occlusion_max_s = 2.0;
};

struct SimulationSettings {
    int window = 30;
    double loss_psr = 0.2;
    double psr_recovery_rate = 1.5;  // per second
    double reacquire_psr = 0.9;      // confidence of a freshly re-detected target
    // A tracker started on another tracker's box stays on that image patch
    // for this long after initializing, then relocks onto the target.
    double relock_s = 0.4;
    double psr_noise_std = 0.02;
    double dim_threshold = 0.5;
    double velocity_time_constant_s = 1.0;
    double velocity_std = 0.03;  // stationary std, per second
    double velocity_max = 0.04;
    double disturbance_std = 0.002;
    double initial_error_max = 0.02;
    double persistence_max_radius = 0.3;
    double persistence_half_saturation = 0.02;
    // Softmax scales of the left / right / lost posterior over (e, psr).
    double field_error_scale = 0.3;
    double field_psr_scale = 0.3;
    // Divides raw transversality; 1/8 is the three-class planar maximum.
    double transversality_max = 0.125;
    bool emit_csi = false;
    double csi_noise_std = 0.05;
    double ikka_cost_ms = 1.4;
    StressSettings stress;
};

struct AcceptanceThresholds {
    double recovery_band = 0.05;
    double recovery_hold_s = 0.2;
    double max_recovery_s = 0.7;
    double max_p95 = 0.25;
};

struct SimulationConfig {
    ProfileTable profiles = default_profiles();
    control::ControllerConfig controller;
    anomaly::AnomalyCoefficients coefficients;
    HybridThresholds hybrid;
    SimulationSettings settings;
    AcceptanceThresholds acceptance;

    void validate() const;
};

struct PlantState {
    double e_true = 0.0;
    double target_velocity = 0.0;
    bool occluded = false;
    double illumination = 1.0;
};

// Euler step of the lateral error, clamped to the frame edge.
PlantState plant_step(const PlantState& state, double tau, double dt, double disturbance);

// Mean-reverting bounded walk; `innovation` is a standard normal draw.
double advance_velocity(double v, double innovation, double dt, const SimulationSettings& settings);

struct TrackerState {
    double psr = 0.9;
    double drift_rate = 0.0;
    bool tracked = true;
    double lost_clear_s = 0.0;  // time the target has been back in view
    double init_remaining_s = 0.0;
    double e_meas = 0.0;
    double held = 0.0;  // box position while it is off the target
    double anchor_remaining_s = 0.0;
    double cost_debt_ms = 0.0;
};

TrackerState initial_tracker_state(const TrackerProfile& profile, double e_true);

// Standard normal draws consumed by one frame, fixed in number so that
// arms with matched seeds see the same noise whatever they do.
struct FrameNoise {
    double measurement = 0.0;
    double psr = 0.0;
    double instability = 0.0;
};

struct Observation {
    double e_meas = 0.0;
    double psr = 0.0;
    bool tracked = false;
    bool fresh = false;  // a new measurement this frame
};

// One camera frame for the active tracker. Updates confidence, drift and
// loss / reacquisition state, then reports the measurement.
Observation observe(const PlantState& plant, const TrackerProfile& profile, TrackerState& tracker,
                    const FrameNoise& noise, double dt, const SimulationSettings& settings);

struct HybridState {
    BaseTracker active = BaseTracker::mosse;
    int recovery_streak = 0;
    int fallbacks = 0;
};

// MOSSE -> CSRT when psr drops below the fallback threshold (for IKKA arms
// only if w is also below the gate); back after `recovery_frames`
// consecutive frames above the recovery threshold.
BaseTracker hybrid_step(HybridState& state, double psr, std::optional<double> w, const HybridThresholds& t);

struct LogRow {
    double t = 0.0;
    double e_true = 0.0;
    double e_meas = 0.0;
    double psr = 0.0;
    double csi = 0.0;
    double E = 0.0;
    double T = 0.0;
    double M = 0.0;
    double W = 0.0;
    double w = 1.0;
    double tau = 0.0;
    bool tracked = true;
    bool occluded = false;
    BaseTracker active = BaseTracker::mosse;
};

struct RunLog {
    ScenarioEntry entry;
    std::vector<LogRow> rows;
};

// Left / right / lost posterior over (e_meas, psr), used for the servo T.
anomaly::ProbabilityField servo_field(const SimulationSettings& settings);

RunLog run_scenario(const ScenarioEntry& entry, const SimulationConfig& config);

struct RunMetrics {
    std::string run_id;
    Group group = Group::arena;
    Condition condition = Condition::nominal;
    Tracker tracker = Tracker::hybrid;
    std::uint64_t seed = 0;
    double p95_abs_error = 0.0;   // tracked frames
    double p95_all_frames = 0.0;
    double tracked_fraction = 1.0;
    std::vector<double> recovery_times_s;
    std::optional<double> median_recovery_s;
    int unrecovered = 0;
    bool anomalous = false;
    double mean_effective_fps = 0.0;
    int fallback_count = 0;
    double mean_abs_tau_occluded = 0.0;
};

RunMetrics compute_metrics(const RunLog& log, const SimulationConfig& config);

struct BatchItem {
    ScenarioEntry entry;
    std::optional<RunLog> log;
    std::optional<RunMetrics> metrics;
    std::string error;
};

// Runs are independent; results come back in manifest order whatever the
// number of worker threads (0 picks the hardware concurrency).
std::vector<BatchItem> run_batch(std::span<const ScenarioEntry> manifest, const SimulationConfig& config,
                                 bool keep_logs = true, unsigned threads = 1);

// 50 screen_gt, 150 arena, 30 occlusion runs with seeds derived from
// `base_seed` and the row index.
std::vector<ScenarioEntry> default_manifest(std::uint64_t base_seed = 2026);

// `runs` stress runs for each arm, seeds matched across arms.
std::vector<ScenarioEntry> stress_manifest(std::span<const Tracker> arms, int runs, std::uint64_t base_seed);

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

}  // namespace ikka::simulator
