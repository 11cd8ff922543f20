#include "ikka/control.hpp"

#include "ikka/errors.hpp"

#include <algorithm>
#include <cmath>

namespace ikka::control {

void ControllerConfig::validate() const {
    if (!(gain_k > 0.0)) throw ConfigError("controller: gain_k must be > 0");
    if (!(deadzone_delta >= 0.0)) throw ConfigError("controller: deadzone_delta must be >= 0");
    if (!(omega_max > 0.0)) throw ConfigError("controller: omega_max must be > 0");
    if (!(period_T > 0.0)) throw ConfigError("controller: period_T must be > 0");
}

double deadzone(double e, double delta) {
    if (std::abs(e) <= delta) return 0.0;
    return e > 0.0 ? e - delta : e + delta;
}

double yaw_command(double e_x, double w, const ControllerConfig& cfg) {
    const double raw = cfg.gain_k * deadzone(e_x, cfg.deadzone_delta) * w;
    return std::clamp(raw, -cfg.omega_max, cfg.omega_max);
}

StabilityReport stability_check(const ControllerConfig& cfg) {
    const double kT = cfg.gain_k * cfg.period_T;
    return {kT, kT > 0.0 && kT < 2.0};
}

}  // namespace ikka::control
