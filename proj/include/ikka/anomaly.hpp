#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace ikka::anomaly {

// How the raw anomaly enters the per-frame weight.
enum class WeightMode {
    // w = sigmoid(offset - a): anomalies shrink the command gain.
    damping,
    // w = sigmoid(a), the unreconciled form; kept for comparison runs.
    literal,
};

struct AnomalyCoefficients {
    double alpha = 1.0;
    double beta = 0.8;
    double gamma = 0.3;
    double calibration_offset = 3.0;
    WeightMode mode = WeightMode::damping;

    void validate() const;
};

struct AnomalyWeights {
    double extremality = 0.0;
    double transversality = 0.0;
    double persistence = 0.0;
    double full_weight = 0.0;
    double frame_weight = 1.0;
};

struct FrameObservation {
    double t = 0.0;
    double e_x = 0.0;
    double psr = 1.0;
    std::optional<double> csi;
    bool tracked = true;
};

// Class posteriors sampled on a regular grid. Node (ix, iy) sits at
// x_min + ix * dx, y_min + iy * dy with dx = (x_max - x_min) / (nx - 1).
class ProbabilityField {
public:
    ProbabilityField() = default;
    ProbabilityField(std::size_t classes, std::size_t nx, std::size_t ny, double x_min, double x_max,
                     double y_min, double y_max);

    std::size_t classes() const { return classes_; }
    std::size_t nx() const { return nx_; }
    std::size_t ny() const { return ny_; }
    double x_min() const { return x_min_; }
    double x_max() const { return x_max_; }
    double y_min() const { return y_min_; }
    double y_max() const { return y_max_; }
    double dx() const;
    double dy() const;
    double x_at(std::size_t ix) const { return x_min_ + static_cast<double>(ix) * dx(); }
    double y_at(std::size_t iy) const { return y_min_ + static_cast<double>(iy) * dy(); }

    double& at(std::size_t ix, std::size_t iy, std::size_t k) { return values_[offset(ix, iy) + k]; }
    double at(std::size_t ix, std::size_t iy, std::size_t k) const { return values_[offset(ix, iy) + k]; }
    std::span<const double> posterior(std::size_t ix, std::size_t iy) const {
        return {values_.data() + offset(ix, iy), classes_};
    }

    // Throws PreconditionError when a node is negative or does not sum to 1.
    void validate(double tolerance = 1e-9) const;

private:
    std::size_t offset(std::size_t ix, std::size_t iy) const { return (iy * nx_ + ix) * classes_; }

    std::size_t classes_ = 0;
    std::size_t nx_ = 0;
    std::size_t ny_ = 0;
    double x_min_ = 0.0;
    double x_max_ = 1.0;
    double y_min_ = 0.0;
    double y_max_ = 1.0;
    std::vector<double> values_;
};

struct GridIndex {
    std::size_t ix = 0;
    std::size_t iy = 0;
};

struct Gradient {
    double dx = 0.0;
    double dy = 0.0;
};

struct TransversalityResult {
    double value = 1.0;
    // Pairs skipped because a gradient norm fell below 1e-12.
    int degenerate_pairs = 0;
};

// Product over class pairs of (1 - |cos angle|) between posterior gradients.
TransversalityResult transversality_from_gradients(std::span<const Gradient> gradients);

// Gradients by central differences at an interior node. Throws
// PreconditionError on a boundary node or fewer than two classes.
TransversalityResult transversality(const ProbabilityField& field, GridIndex location);

// Robust z-score of the latest |e_x| against the window median and MAD,
// clipped to [0, 1]. Needs at least five frames.
double extremality(std::span<const FrameObservation> window);

// Total H1 persistence of the (t, |e_x|) cloud, before normalization.
double raw_persistence(std::span<const FrameObservation> window, double max_radius);

// raw / (raw + half_saturation), in [0, 1). Needs at least three frames.
double persistence_term(std::span<const FrameObservation> window, double max_radius, double half_saturation);

// Saturating normalization shared by every persistence term.
double normalize_persistence(double raw, double half_saturation);

// E * T * M; each factor must lie in [0, 1].
double full_weight(double extremality, double transversality, double persistence);

// Population variance; 0 for fewer than two samples.
double csi_variance(std::span<const double> window);

// alpha * E + beta * (1 - psr) + gamma * Var(csi).
double raw_anomaly(double extremality, double psr, std::span<const double> csi_window,
                   const AnomalyCoefficients& coeffs);

// Per-frame gain in (0, 1); see WeightMode.
double frame_weight(double extremality, double psr, std::span<const double> csi_window,
                    const AnomalyCoefficients& coeffs);

double sigmoid(double x);

}  // namespace ikka::anomaly
