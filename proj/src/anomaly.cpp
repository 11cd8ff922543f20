#include "ikka/anomaly.hpp"

#include "ikka/errors.hpp"
#include "ikka/topology.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ikka::anomaly {

namespace {

constexpr double kDegenerateNorm = 1e-12;

double median_of(std::vector<double> xs) {
    const std::size_t n = xs.size();
    const auto mid = xs.begin() + static_cast<long>(n / 2);
    std::nth_element(xs.begin(), mid, xs.end());
    const double upper = *mid;
    if (n % 2 == 1) return upper;
    const double lower = *std::max_element(xs.begin(), mid);
    return 0.5 * (lower + upper);
}

void require_unit(double v, const char* name) {
    if (!(v >= 0.0 && v <= 1.0)) {
        throw PreconditionError(std::string(name) + " must lie in [0, 1], got " + std::to_string(v));
    }
}

}  // namespace

void AnomalyCoefficients::validate() const {
    if (!(alpha >= 0.0 && beta >= 0.0 && gamma >= 0.0)) {
        throw ConfigError("anomaly coefficients alpha, beta, gamma must be >= 0");
    }
    if (!std::isfinite(calibration_offset)) throw ConfigError("calibration_offset must be finite");
}

ProbabilityField::ProbabilityField(std::size_t classes, std::size_t nx, std::size_t ny, double x_min,
                                   double x_max, double y_min, double y_max)
    : classes_(classes), nx_(nx), ny_(ny), x_min_(x_min), x_max_(x_max), y_min_(y_min), y_max_(y_max),
      values_(classes * nx * ny, 0.0) {
    if (nx < 2 || ny < 2) throw PreconditionError("probability field needs at least 2 nodes per axis");
    if (!(x_max > x_min) || !(y_max > y_min)) throw PreconditionError("probability field: empty range");
}

double ProbabilityField::dx() const { return (x_max_ - x_min_) / static_cast<double>(nx_ - 1); }
double ProbabilityField::dy() const { return (y_max_ - y_min_) / static_cast<double>(ny_ - 1); }

void ProbabilityField::validate(double tolerance) const {
    for (std::size_t iy = 0; iy < ny_; ++iy) {
        for (std::size_t ix = 0; ix < nx_; ++ix) {
            double sum = 0.0;
            for (double p : posterior(ix, iy)) {
                if (p < 0.0) throw PreconditionError("probability field: negative posterior");
                sum += p;
            }
            if (std::abs(sum - 1.0) > tolerance) {
                throw PreconditionError("probability field: posteriors do not sum to 1");
            }
        }
    }
}

TransversalityResult transversality_from_gradients(std::span<const Gradient> gradients) {
    TransversalityResult result;
    const std::size_t k = gradients.size();
    for (std::size_t i = 0; i < k; ++i) {
        const double ni = std::hypot(gradients[i].dx, gradients[i].dy);
        for (std::size_t j = i + 1; j < k; ++j) {
            const double nj = std::hypot(gradients[j].dx, gradients[j].dy);
            if (ni < kDegenerateNorm || nj < kDegenerateNorm) {
                ++result.degenerate_pairs;
                continue;
            }
            const double dot = gradients[i].dx * gradients[j].dx + gradients[i].dy * gradients[j].dy;
            const double cosine = std::min(1.0, std::abs(dot) / (ni * nj));
            result.value *= 1.0 - cosine;
        }
    }
    return result;
}

TransversalityResult transversality(const ProbabilityField& field, GridIndex loc) {
    if (field.classes() < 2) throw PreconditionError("transversality needs at least two classes");
    if (loc.ix == 0 || loc.iy == 0 || loc.ix + 1 >= field.nx() || loc.iy + 1 >= field.ny()) {
        throw PreconditionError("transversality: location must be interior to the grid");
    }
    std::vector<Gradient> grads(field.classes());
    const double hx = 2.0 * field.dx();
    const double hy = 2.0 * field.dy();
    for (std::size_t k = 0; k < field.classes(); ++k) {
        grads[k].dx = (field.at(loc.ix + 1, loc.iy, k) - field.at(loc.ix - 1, loc.iy, k)) / hx;
        grads[k].dy = (field.at(loc.ix, loc.iy + 1, k) - field.at(loc.ix, loc.iy - 1, k)) / hy;
    }
    return transversality_from_gradients(grads);
}

double extremality(std::span<const FrameObservation> window) {
    if (window.size() < 5) throw PreconditionError("extremality needs a window of at least 5 frames");
    std::vector<double> mags;
    mags.reserve(window.size());
    for (const auto& f : window) mags.push_back(std::abs(f.e_x));
    const double latest = mags.back();
    const double med = median_of(mags);
    std::vector<double> deviations;
    deviations.reserve(mags.size());
    for (double m : mags) deviations.push_back(std::abs(m - med));
    const double mad = median_of(std::move(deviations));
    return std::min(1.0, std::abs(latest - med) / (3.0 * mad + 1e-9));
}

double raw_persistence(std::span<const FrameObservation> window, double max_radius) {
    if (window.size() < 3) throw PreconditionError("persistence term needs a window of at least 3 frames");
    std::vector<topology::Point2> cloud;
    cloud.reserve(window.size());
    for (const auto& f : window) cloud.push_back({f.t, std::abs(f.e_x)});
    return topology::total_persistence(topology::rips_pd1(cloud, max_radius));
}

double normalize_persistence(double raw, double half_saturation) {
    if (!(half_saturation > 0.0)) throw PreconditionError("half_saturation must be > 0");
    return raw / (raw + half_saturation);
}

double persistence_term(std::span<const FrameObservation> window, double max_radius, double half_saturation) {
    return normalize_persistence(raw_persistence(window, max_radius), half_saturation);
}

double full_weight(double extremality, double transversality, double persistence) {
    require_unit(extremality, "extremality");
    require_unit(transversality, "transversality");
    require_unit(persistence, "persistence");
    return extremality * transversality * persistence;
}

double csi_variance(std::span<const double> window) {
    if (window.size() < 2) return 0.0;
    double mean = 0.0;
    for (double v : window) mean += v;
    mean /= static_cast<double>(window.size());
    double ss = 0.0;
    for (double v : window) ss += (v - mean) * (v - mean);
    return ss / static_cast<double>(window.size());
}

double raw_anomaly(double extremality, double psr, std::span<const double> csi_window,
                   const AnomalyCoefficients& coeffs) {
    require_unit(extremality, "extremality");
    require_unit(psr, "psr");
    return coeffs.alpha * extremality + coeffs.beta * (1.0 - psr) + coeffs.gamma * csi_variance(csi_window);
}

double sigmoid(double x) {
    if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double frame_weight(double extremality, double psr, std::span<const double> csi_window,
                    const AnomalyCoefficients& coeffs) {
    const double a = raw_anomaly(extremality, psr, csi_window, coeffs);
    return coeffs.mode == WeightMode::damping ? sigmoid(coeffs.calibration_offset - a) : sigmoid(a);
}

}  // namespace ikka::anomaly
