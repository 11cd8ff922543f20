#pragma once

namespace ikka::control {

// Yaw-rate servo parameters. Defaults are the platform values.
struct ControllerConfig {
    double gain_k = 2.5;           // 1/s
    double deadzone_delta = 0.02;  // normalized image error
    double omega_max = 1.2;        // rad/s
    double period_T = 0.05;        // s

    // Throws ConfigError if any invariant is violated.
    void validate() const;
};

// Continuous shrinkage: zero inside |e| <= delta, e - sign(e) * delta outside.
double deadzone(double e, double delta);

// Anomaly-modulated bounded command, saturated to [-omega_max, omega_max].
double yaw_command(double e_x, double w, const ControllerConfig& cfg);

struct StabilityReport {
    double kT = 0.0;
    bool stable = false;
};

// Discrete-time bound for the proportional loop: 0 < kT < 2.
StabilityReport stability_check(const ControllerConfig& cfg);

}  // namespace ikka::control
