#pragma once

#include "ikka/anomaly.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace ikka::counterexample {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend bool operator==(const Vec2&, const Vec2&) = default;
};

double norm(const Vec2& v);
double distance(const Vec2& p, const Vec2& q);

struct LabeledDataset2D {
    std::vector<Vec2> points;
    std::vector<int> labels;

    std::size_t size() const { return points.size(); }
    // Equal lengths, labels in {0, 1, 2}, all three present.
    void validate() const;
};

// Three 120-degree sectors around 90, 210 and 330 degrees. Radii follow
// r = 2 * u^(1/3), so density grows away from the origin and the mean radius
// is 1.5. Radii are stratified and angles follow a jittered golden-ratio
// sequence, which keeps the class means close to their sector axes.
LabeledDataset2D generate_three_class(int n_per_class, std::uint64_t seed);

double median_pairwise_distance(std::span<const Vec2> points);

struct SmoOptions {
    double tolerance = 1e-3;
    std::size_t max_iterations = 1'000'000;
    bool record_objective = false;
};

// Solution of max sum(a) - 1/2 a^T Q a, 0 <= a <= C, y^T a = 0 with
// Q_ij = y_i y_j K_ij.
struct DualSolution {
    std::vector<double> alpha;
    double rho = 0.0;  // decision = sum a_i y_i K(x_i, x) - rho
    std::size_t iterations = 0;
    double kkt_violation = 0.0;
    std::vector<double> objective_trace;  // dual objective after each step
};

double dual_objective(std::span<const double> kernel, std::span<const double> labels,
                      std::span<const double> alpha);

// SMO with second-order working-set selection. `kernel` is n x n row-major,
// labels are +1 / -1. Ties in selection go to the lowest index. Throws
// SolverError carrying the final violation when the iteration cap is hit.
DualSolution solve_dual(std::span<const double> kernel, std::span<const double> labels, double box_c,
                        const SmoOptions& options = {});

struct PairwiseMachine {
    int positive = 0;  // class voted for by a positive decision
    int negative = 1;
    std::vector<std::size_t> indices;  // training rows in the dataset
    std::vector<double> coefficients;  // alpha_i * y_i
    double rho = 0.0;
    std::size_t iterations = 0;
    double kkt_violation = 0.0;
    std::vector<double> objective_trace;
};

struct SvmModel {
    LabeledDataset2D data;
    double box_c = 1.0;
    double bandwidth = 1.0;  // RBF length scale: K = exp(-|x - y|^2 / (2 bw^2))
    std::vector<PairwiseMachine> machines;  // pairs (0,1), (0,2), (1,2)

    double kernel(const Vec2& p, const Vec2& q) const;
    double decision(std::size_t machine, const Vec2& x) const;
    // Per class, the pairwise margins summed with sign: +d for a contest the
    // class leads by d, -d for one it trails by d.
    std::array<double, 3> scores(const Vec2& x) const;
    int predict(const Vec2& x) const;
    // Rows with a nonzero coefficient in any machine, ascending.
    std::vector<std::size_t> support_indices() const;
};

SvmModel train_rbf_svm(const LabeledDataset2D& data, double box_c, double bandwidth,
                       const SmoOptions& options = {});

struct GridSpec {
    std::size_t nx = 128;
    std::size_t ny = 128;
    double x_min = -3.0;
    double x_max = 3.0;
    double y_min = -3.0;
    double y_max = 3.0;
};

// Softmax (temperature 1) of the class scores at every grid node.
anomaly::ProbabilityField posterior_field(const SvmModel& model, const GridSpec& grid = {});

struct IkkaGridOptions {
    int knn = 10;
    double locality_radius = 0.75;
    double persistence_max_radius = 0.5;
    double half_saturation = 0.1;
    // Zero W outside the convex hull of the data, where every factor is
    // extrapolated.
    bool restrict_to_hull = true;
};

struct IkkaGrid {
    std::size_t nx = 0;
    std::size_t ny = 0;
    // Row-major by iy, then ix.
    std::vector<double> extremality;
    std::vector<double> transversality;
    std::vector<double> persistence;
    std::vector<double> weight;
    Vec2 maverick;
    double maverick_weight = 0.0;
    std::vector<Vec2> top5;
    std::size_t degenerate_cells = 0;
    // Set when no interior node has a usable gradient for every class.
    bool degenerate = false;

    double at(std::size_t ix, std::size_t iy) const { return weight[iy * nx + ix]; }
};

// W = E * T * M on the field's grid. E ranks the node's k-NN distance among
// the points' own k-NN distances; T is zero on the border and wherever a
// class gradient vanishes; M is the normalized total H1 persistence of the
// points within `locality_radius`. Needs at least 64 nodes per axis.
IkkaGrid ikka_grid(const LabeledDataset2D& data, const anomaly::ProbabilityField& field,
                   const IkkaGridOptions& options = {});

struct Indispensability {
    int beta1_before = 0;
    int beta1_after = 0;
    double scale = 0.0;
    std::size_t local_points = 0;
    std::size_t removed = 0;
};

// Betti-1 of the Rips complex of the points within `radius` of `query`, at
// the median pairwise distance of those points, before and after deleting
// the `removal_count` points nearest the query.
Indispensability indispensability_check(const LabeledDataset2D& data, const Vec2& query, double radius,
                                        int removal_count = 3);

// Counter-clockwise hull without collinear vertices.
std::vector<Vec2> convex_hull(std::span<const Vec2> points);
bool inside_convex_hull(std::span<const Vec2> points, const Vec2& query);

struct CounterexampleConfig {
    int n_per_class = 100;
    std::uint64_t seed = 7;
    double box_c = 1.0;
    double bandwidth = 0.0;  // <= 0 selects the median pairwise distance
    SmoOptions smo;
    GridSpec grid;
    IkkaGridOptions ikka;
    double check_radius = 0.75;
    int removal_count = 3;
};

struct CounterexampleReport {
    LabeledDataset2D data;
    SvmModel model;
    IkkaGrid grid;
    std::vector<Vec2> support_vectors;
    double sv_mean_distance = 0.0;
    double maverick_distance = 0.0;
    double training_accuracy = 0.0;
    std::optional<Indispensability> maverick_check;
    // Taken at the support vector with the largest coefficient.
    std::optional<Indispensability> support_vector_check;
    Vec2 support_vector_probe;
};

CounterexampleReport run_counterexample(const CounterexampleConfig& config);

}  // namespace ikka::counterexample
