#include "ikka/counterexample.hpp"

#include "ikka/errors.hpp"
#include "ikka/topology.hpp"

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/uniform_01.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <string>

namespace ikka::counterexample {

namespace {

constexpr double kTau = 1e-12;

bool at_upper(double a, double c) { return a >= c; }
bool at_lower(double a) { return a <= 0.0; }

bool in_up_set(double a, double y, double c) { return (y > 0 && !at_upper(a, c)) || (y < 0 && !at_lower(a)); }
bool in_low_set(double a, double y, double c) { return (y < 0 && !at_upper(a, c)) || (y > 0 && !at_lower(a)); }

double compute_rho(std::span<const double> alpha, std::span<const double> y, std::span<const double> grad,
                   double c) {
    double upper = std::numeric_limits<double>::infinity();
    double lower = -std::numeric_limits<double>::infinity();
    double free_sum = 0.0;
    std::size_t free_count = 0;
    for (std::size_t t = 0; t < alpha.size(); ++t) {
        const double yg = y[t] * grad[t];
        if (at_upper(alpha[t], c)) {
            if (y[t] < 0) upper = std::min(upper, yg);
            else lower = std::max(lower, yg);
        } else if (at_lower(alpha[t])) {
            if (y[t] > 0) upper = std::min(upper, yg);
            else lower = std::max(lower, yg);
        } else {
            free_sum += yg;
            ++free_count;
        }
    }
    if (free_count > 0) return free_sum / static_cast<double>(free_count);
    return (upper + lower) / 2.0;
}

double objective_from_gradient(std::span<const double> alpha, std::span<const double> grad) {
    // grad = Q a - 1, so 1/2 a^T Q a - sum a = 1/2 sum a (grad - 1).
    double f = 0.0;
    for (std::size_t t = 0; t < alpha.size(); ++t) f += alpha[t] * (grad[t] - 1.0);
    return -0.5 * f;
}

std::vector<double> knn_distances(std::span<const Vec2> points, int k) {
    std::vector<double> out(points.size());
    std::vector<double> d;
    for (std::size_t i = 0; i < points.size(); ++i) {
        d.clear();
        for (std::size_t j = 0; j < points.size(); ++j)
            if (j != i) d.push_back(distance(points[i], points[j]));
        const auto kth = std::min<std::size_t>(static_cast<std::size_t>(k), d.size()) - 1;
        std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(kth), d.end());
        out[i] = d[kth];
    }
    return out;
}

double kth_distance(std::span<const Vec2> points, const Vec2& q, int k, std::vector<double>& scratch) {
    scratch.clear();
    for (const auto& p : points) scratch.push_back(distance(p, q));
    const auto kth = std::min<std::size_t>(static_cast<std::size_t>(k), scratch.size()) - 1;
    std::nth_element(scratch.begin(), scratch.begin() + static_cast<std::ptrdiff_t>(kth), scratch.end());
    return scratch[kth];
}

std::vector<topology::Point2> as_topology_points(std::span<const Vec2> points) {
    std::vector<topology::Point2> out;
    out.reserve(points.size());
    for (const auto& p : points) out.push_back({p.x, p.y});
    return out;
}

int betti1_at_median_scale(std::span<const Vec2> points, double& scale) {
    std::vector<double> d;
    double diameter = 0.0;
    const auto pts = as_topology_points(points);
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            d.push_back(topology::chebyshev_distance(pts[i], pts[j]));
            diameter = std::max(diameter, d.back());
        }
    if (d.empty()) {
        scale = 0.0;
        return 0;
    }
    std::sort(d.begin(), d.end());
    scale = d.size() % 2 == 1 ? d[d.size() / 2] : 0.5 * (d[d.size() / 2 - 1] + d[d.size() / 2]);
    if (pts.size() < 3 || diameter <= 0.0) return 0;
    const auto diagram = topology::rips_pd1(pts, diameter);
    return topology::betti1_at_scale(diagram, scale);
}

double cross(const Vec2& o, const Vec2& a, const Vec2& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

bool inside_hull_polygon(const std::vector<Vec2>& hull, const Vec2& q) {
    if (hull.size() < 3) return false;
    for (std::size_t i = 0; i < hull.size(); ++i)
        if (cross(hull[i], hull[(i + 1) % hull.size()], q) < 0) return false;
    return true;
}

}  // namespace

double norm(const Vec2& v) { return std::hypot(v.x, v.y); }

double distance(const Vec2& p, const Vec2& q) { return std::hypot(p.x - q.x, p.y - q.y); }

void LabeledDataset2D::validate() const {
    if (points.size() != labels.size())
        throw PreconditionError("dataset has " + std::to_string(points.size()) + " points but " +
                                std::to_string(labels.size()) + " labels");
    std::array<bool, 3> present{};
    for (int label : labels) {
        if (label < 0 || label > 2) throw PreconditionError("label outside {0, 1, 2}: " + std::to_string(label));
        present[static_cast<std::size_t>(label)] = true;
    }
    for (std::size_t c = 0; c < 3; ++c)
        if (!present[c]) throw PreconditionError("class " + std::to_string(c) + " has no points");
    for (const auto& p : points)
        if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw PreconditionError("non-finite point");
}

LabeledDataset2D generate_three_class(int n_per_class, std::uint64_t seed) {
    if (n_per_class < 30) throw PreconditionError("n_per_class must be at least 30");
    boost::random::mt19937_64 rng(seed);
    boost::random::uniform_01<double> unit;
    const double golden = (std::sqrt(5.0) - 1.0) / 2.0;
    const double half_width = std::numbers::pi / 3.0;
    const auto n = static_cast<std::size_t>(n_per_class);

    LabeledDataset2D data;
    data.points.reserve(3 * n);
    data.labels.reserve(3 * n);
    for (int c = 0; c < 3; ++c) {
        const double axis = std::numbers::pi / 2.0 + 2.0 * std::numbers::pi / 3.0 * c;
        const double phase = unit(rng);
        for (std::size_t i = 0; i < n; ++i) {
            const double u_r = (static_cast<double>(i) + unit(rng)) / static_cast<double>(n);
            double u_theta = phase + golden * static_cast<double>(i);
            u_theta -= std::floor(u_theta);
            const double r = 2.0 * std::cbrt(u_r);
            const double theta = axis + (2.0 * u_theta - 1.0) * half_width;
            data.points.push_back({r * std::cos(theta), r * std::sin(theta)});
            data.labels.push_back(c);
        }
    }
    return data;
}

double median_pairwise_distance(std::span<const Vec2> points) {
    if (points.size() < 2) throw PreconditionError("need two points for a pairwise distance");
    std::vector<double> d;
    d.reserve(points.size() * (points.size() - 1) / 2);
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j) d.push_back(distance(points[i], points[j]));
    const auto mid = d.size() / 2;
    std::nth_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(mid), d.end());
    if (d.size() % 2 == 1) return d[mid];
    const double upper = d[mid];
    const double lower = *std::max_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lower + upper);
}

double dual_objective(std::span<const double> kernel, std::span<const double> labels,
                      std::span<const double> alpha) {
    const std::size_t n = alpha.size();
    double linear = 0.0;
    double quad = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        linear += alpha[i];
        for (std::size_t j = 0; j < n; ++j) quad += alpha[i] * alpha[j] * labels[i] * labels[j] * kernel[i * n + j];
    }
    return linear - 0.5 * quad;
}

DualSolution solve_dual(std::span<const double> kernel, std::span<const double> labels, double box_c,
                        const SmoOptions& options) {
    const std::size_t n = labels.size();
    if (n < 2) throw PreconditionError("dual problem needs at least two points");
    if (kernel.size() != n * n) throw PreconditionError("kernel matrix does not match the label count");
    if (!(box_c > 0.0)) throw PreconditionError("box constraint must be positive");
    bool has_pos = false;
    bool has_neg = false;
    for (double y : labels) {
        if (y == 1.0) has_pos = true;
        else if (y == -1.0) has_neg = true;
        else throw PreconditionError("labels must be +1 or -1");
    }
    if (!has_pos || !has_neg) throw PreconditionError("dual problem needs both labels");

    const auto k = [&](std::size_t i, std::size_t j) { return kernel[i * n + j]; };
    DualSolution out;
    out.alpha.assign(n, 0.0);
    std::vector<double> grad(n, -1.0);
    auto& a = out.alpha;
    const auto y = labels;

    for (;;) {
        double g_max = -std::numeric_limits<double>::infinity();
        std::size_t i = n;
        for (std::size_t t = 0; t < n; ++t)
            if (in_up_set(a[t], y[t], box_c) && -y[t] * grad[t] > g_max) {
                g_max = -y[t] * grad[t];
                i = t;
            }
        double g_min = std::numeric_limits<double>::infinity();
        double best = std::numeric_limits<double>::infinity();
        std::size_t j = n;
        for (std::size_t t = 0; t < n; ++t) {
            if (!in_low_set(a[t], y[t], box_c)) continue;
            const double v = -y[t] * grad[t];
            g_min = std::min(g_min, v);
            if (i == n || v >= g_max) continue;
            const double b = g_max - v;
            double quad = k(i, i) + k(t, t) - 2.0 * k(i, t);
            if (quad <= 0.0) quad = kTau;
            const double gain = -(b * b) / quad;
            if (gain < best) {
                best = gain;
                j = t;
            }
        }
        out.kkt_violation = (i == n || std::isinf(g_min)) ? 0.0 : std::max(0.0, g_max - g_min);
        if (i == n || j == n || out.kkt_violation < options.tolerance) break;
        if (out.iterations >= options.max_iterations)
            throw SolverError("SMO did not converge within " + std::to_string(options.max_iterations) +
                                  " iterations (violation " + std::to_string(out.kkt_violation) + ")",
                              out.kkt_violation);

        const double old_i = a[i];
        const double old_j = a[j];
        const double q_ij = y[i] * y[j] * k(i, j);
        if (y[i] != y[j]) {
            double quad = k(i, i) + k(j, j) + 2.0 * q_ij;
            if (quad <= 0.0) quad = kTau;
            const double delta = (-grad[i] - grad[j]) / quad;
            const double diff = a[i] - a[j];
            a[i] += delta;
            a[j] += delta;
            if (diff > 0.0) {
                if (a[j] < 0.0) {
                    a[j] = 0.0;
                    a[i] = diff;
                }
            } else if (a[i] < 0.0) {
                a[i] = 0.0;
                a[j] = -diff;
            }
            if (diff > 0.0) {
                if (a[i] > box_c) {
                    a[i] = box_c;
                    a[j] = box_c - diff;
                }
            } else if (a[j] > box_c) {
                a[j] = box_c;
                a[i] = box_c + diff;
            }
        } else {
            double quad = k(i, i) + k(j, j) - 2.0 * q_ij;
            if (quad <= 0.0) quad = kTau;
            const double delta = (grad[i] - grad[j]) / quad;
            const double sum = a[i] + a[j];
            a[i] -= delta;
            a[j] += delta;
            if (sum > box_c) {
                if (a[i] > box_c) {
                    a[i] = box_c;
                    a[j] = sum - box_c;
                }
            } else if (a[j] < 0.0) {
                a[j] = 0.0;
                a[i] = sum;
            }
            if (sum > box_c) {
                if (a[j] > box_c) {
                    a[j] = box_c;
                    a[i] = sum - box_c;
                }
            } else if (a[i] < 0.0) {
                a[i] = 0.0;
                a[j] = sum;
            }
        }
        const double d_i = a[i] - old_i;
        const double d_j = a[j] - old_j;
        for (std::size_t t = 0; t < n; ++t)
            grad[t] += y[t] * (y[i] * k(i, t) * d_i + y[j] * k(j, t) * d_j);
        ++out.iterations;
        if (options.record_objective) out.objective_trace.push_back(objective_from_gradient(a, grad));
    }
    out.rho = compute_rho(a, y, grad, box_c);
    return out;
}

double SvmModel::kernel(const Vec2& p, const Vec2& q) const {
    const double dx = p.x - q.x;
    const double dy = p.y - q.y;
    return std::exp(-(dx * dx + dy * dy) / (2.0 * bandwidth * bandwidth));
}

double SvmModel::decision(std::size_t machine, const Vec2& x) const {
    const auto& m = machines.at(machine);
    double sum = -m.rho;
    for (std::size_t t = 0; t < m.indices.size(); ++t)
        if (m.coefficients[t] != 0.0) sum += m.coefficients[t] * kernel(data.points[m.indices[t]], x);
    return sum;
}

std::array<double, 3> SvmModel::scores(const Vec2& x) const {
    std::array<double, 3> s{};
    for (std::size_t m = 0; m < machines.size(); ++m) {
        const double d = decision(m, x);
        s[static_cast<std::size_t>(machines[m].positive)] += d;
        s[static_cast<std::size_t>(machines[m].negative)] -= d;
    }
    return s;
}

int SvmModel::predict(const Vec2& x) const {
    std::array<int, 3> votes{};
    std::array<double, 3> s{};
    for (std::size_t m = 0; m < machines.size(); ++m) {
        const double d = decision(m, x);
        const int winner = d > 0.0 ? machines[m].positive : machines[m].negative;
        ++votes[static_cast<std::size_t>(winner)];
        s[static_cast<std::size_t>(winner)] += std::fabs(d);
    }
    int best = 0;
    for (int c = 1; c < 3; ++c) {
        const auto cu = static_cast<std::size_t>(c);
        const auto bu = static_cast<std::size_t>(best);
        if (votes[cu] > votes[bu] || (votes[cu] == votes[bu] && s[cu] > s[bu])) best = c;
    }
    return best;
}

std::vector<std::size_t> SvmModel::support_indices() const {
    std::vector<std::size_t> out;
    for (const auto& m : machines)
        for (std::size_t t = 0; t < m.indices.size(); ++t)
            if (m.coefficients[t] != 0.0) out.push_back(m.indices[t]);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

SvmModel train_rbf_svm(const LabeledDataset2D& data, double box_c, double bandwidth, const SmoOptions& options) {
    data.validate();
    if (!(box_c > 0.0)) throw PreconditionError("box constraint must be positive");
    if (!(bandwidth > 0.0)) throw PreconditionError("bandwidth must be positive");
    SvmModel model;
    model.data = data;
    model.box_c = box_c;
    model.bandwidth = bandwidth;
    constexpr std::array<std::array<int, 2>, 3> pairs{{{0, 1}, {0, 2}, {1, 2}}};
    for (const auto& [pos, neg] : pairs) {
        PairwiseMachine m;
        m.positive = pos;
        m.negative = neg;
        std::vector<double> y;
        for (std::size_t i = 0; i < data.size(); ++i) {
            if (data.labels[i] == pos || data.labels[i] == neg) {
                m.indices.push_back(i);
                y.push_back(data.labels[i] == pos ? 1.0 : -1.0);
            }
        }
        const std::size_t n = m.indices.size();
        std::vector<double> gram(n * n);
        for (std::size_t r = 0; r < n; ++r)
            for (std::size_t c = 0; c < n; ++c)
                gram[r * n + c] = model.kernel(data.points[m.indices[r]], data.points[m.indices[c]]);
        auto sol = solve_dual(gram, y, box_c, options);
        m.coefficients.resize(n);
        for (std::size_t t = 0; t < n; ++t) m.coefficients[t] = sol.alpha[t] * y[t];
        m.rho = sol.rho;
        m.iterations = sol.iterations;
        m.kkt_violation = sol.kkt_violation;
        m.objective_trace = std::move(sol.objective_trace);
        model.machines.push_back(std::move(m));
    }
    return model;
}

anomaly::ProbabilityField posterior_field(const SvmModel& model, const GridSpec& grid) {
    if (grid.nx < 2 || grid.ny < 2) throw PreconditionError("grid needs at least two nodes per axis");
    if (!(grid.x_max > grid.x_min) || !(grid.y_max > grid.y_min)) throw PreconditionError("empty grid extent");
    anomaly::ProbabilityField field(3, grid.nx, grid.ny, grid.x_min, grid.x_max, grid.y_min, grid.y_max);
    for (std::size_t iy = 0; iy < grid.ny; ++iy)
        for (std::size_t ix = 0; ix < grid.nx; ++ix) {
            const auto s = model.scores({field.x_at(ix), field.y_at(iy)});
            const double top = std::max({s[0], s[1], s[2]});
            double total = 0.0;
            std::array<double, 3> e{};
            for (std::size_t c = 0; c < 3; ++c) {
                e[c] = std::exp(s[c] - top);
                total += e[c];
            }
            for (std::size_t c = 0; c < 3; ++c) field.at(ix, iy, c) = e[c] / total;
        }
    return field;
}

IkkaGrid ikka_grid(const LabeledDataset2D& data, const anomaly::ProbabilityField& field,
                   const IkkaGridOptions& options) {
    if (field.nx() < 64 || field.ny() < 64) throw PreconditionError("W-grid needs at least 64 nodes per axis");
    if (field.classes() < 2) throw PreconditionError("posterior field needs at least two classes");
    if (options.knn < 1) throw PreconditionError("k must be positive");
    if (data.size() < static_cast<std::size_t>(options.knn) + 1)
        throw PreconditionError("dataset smaller than k + 1");
    if (!(options.locality_radius > 0.0) || !(options.persistence_max_radius > 0.0))
        throw PreconditionError("locality and persistence radii must be positive");

    const std::size_t nx = field.nx();
    const std::size_t ny = field.ny();
    IkkaGrid out;
    out.nx = nx;
    out.ny = ny;
    out.extremality.assign(nx * ny, 0.0);
    out.transversality.assign(nx * ny, 0.0);
    out.persistence.assign(nx * ny, 0.0);
    out.weight.assign(nx * ny, 0.0);

    auto reference = knn_distances(data.points, options.knn);
    const auto hull = convex_hull(data.points);
    std::sort(reference.begin(), reference.end());

    std::map<std::vector<std::uint32_t>, double> memo;
    std::vector<double> scratch;
    std::vector<std::uint32_t> local;
    std::vector<Vec2> local_points;
    std::size_t interior = 0;
    const double r2 = options.locality_radius * options.locality_radius;

    for (std::size_t iy = 0; iy < ny; ++iy)
        for (std::size_t ix = 0; ix < nx; ++ix) {
            const std::size_t cell = iy * nx + ix;
            const Vec2 q{field.x_at(ix), field.y_at(iy)};

            const double dk = kth_distance(data.points, q, options.knn, scratch);
            const auto rank = std::upper_bound(reference.begin(), reference.end(), dk) - reference.begin();
            out.extremality[cell] = static_cast<double>(rank) / static_cast<double>(reference.size());

            if (ix > 0 && iy > 0 && ix + 1 < nx && iy + 1 < ny) {
                ++interior;
                const auto t = anomaly::transversality(field, {ix, iy});
                if (t.degenerate_pairs > 0) ++out.degenerate_cells;
                else out.transversality[cell] = t.value;
            }

            local.clear();
            for (std::size_t i = 0; i < data.size(); ++i) {
                const double dx = data.points[i].x - q.x;
                const double dy = data.points[i].y - q.y;
                if (dx * dx + dy * dy <= r2) local.push_back(static_cast<std::uint32_t>(i));
            }
            double m = 0.0;
            if (local.size() >= 4) {
                auto it = memo.find(local);
                if (it == memo.end()) {
                    local_points.clear();
                    for (auto i : local) local_points.push_back(data.points[i]);
                    const auto pd = topology::rips_pd1(as_topology_points(local_points), options.persistence_max_radius);
                    const double raw = topology::total_persistence(pd);
                    it = memo.emplace(local, anomaly::normalize_persistence(raw, options.half_saturation)).first;
                }
                m = it->second;
            }
            out.persistence[cell] = m;
            if (!options.restrict_to_hull || inside_hull_polygon(hull, q))
                out.weight[cell] = out.extremality[cell] * out.transversality[cell] * m;
        }
    out.degenerate = interior == 0 || out.degenerate_cells == interior;

    std::vector<std::size_t> order(nx * ny);
    for (std::size_t c = 0; c < order.size(); ++c) order[c] = c;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return out.weight[a] > out.weight[b]; });
    const std::size_t best = order.front();
    out.maverick = {field.x_at(best % nx), field.y_at(best / nx)};
    out.maverick_weight = out.weight[best];
    std::vector<std::size_t> picked;
    for (std::size_t c : order) {
        if (picked.size() == 5) break;
        const bool adjacent = std::any_of(picked.begin(), picked.end(), [&](std::size_t p) {
            const auto dx = static_cast<long>(p % nx) - static_cast<long>(c % nx);
            const auto dy = static_cast<long>(p / nx) - static_cast<long>(c / nx);
            return std::labs(dx) <= 1 && std::labs(dy) <= 1;
        });
        if (!adjacent) picked.push_back(c);
    }
    for (std::size_t c : picked) out.top5.push_back({field.x_at(c % nx), field.y_at(c / nx)});
    return out;
}

std::vector<Vec2> convex_hull(std::span<const Vec2> points) {
    std::vector<Vec2> pts(points.begin(), points.end());
    std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;
    std::vector<Vec2> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0) --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

bool inside_convex_hull(std::span<const Vec2> points, const Vec2& query) {
    return inside_hull_polygon(convex_hull(points), query);
}

Indispensability indispensability_check(const LabeledDataset2D& data, const Vec2& query, double radius,
                                        int removal_count) {
    if (!(radius > 0.0)) throw PreconditionError("radius must be positive");
    if (removal_count < 0) throw PreconditionError("removal count must be non-negative");
    if (!inside_convex_hull(data.points, query)) throw PreconditionError("query lies outside the data hull");

    std::vector<std::pair<double, std::size_t>> local;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const double d = distance(data.points[i], query);
        if (d <= radius) local.emplace_back(d, i);
    }
    if (local.size() < 5)
        throw InsufficientLocalityError("only " + std::to_string(local.size()) + " points within radius " +
                                        std::to_string(radius));
    std::sort(local.begin(), local.end());

    Indispensability out;
    out.local_points = local.size();
    std::vector<Vec2> pts;
    for (const auto& [d, i] : local) pts.push_back(data.points[i]);
    out.beta1_before = betti1_at_median_scale(pts, out.scale);

    out.removed = std::min(pts.size(), static_cast<std::size_t>(removal_count));
    const std::vector<Vec2> kept(pts.begin() + static_cast<std::ptrdiff_t>(out.removed), pts.end());
    double scale_after = 0.0;
    out.beta1_after = betti1_at_median_scale(kept, scale_after);
    return out;
}

CounterexampleReport run_counterexample(const CounterexampleConfig& config) {
    CounterexampleReport report;
    report.data = generate_three_class(config.n_per_class, config.seed);
    const double bandwidth = config.bandwidth > 0.0 ? config.bandwidth : median_pairwise_distance(report.data.points);
    report.model = train_rbf_svm(report.data, config.box_c, bandwidth, config.smo);
    const auto field = posterior_field(report.model, config.grid);
    report.grid = ikka_grid(report.data, field, config.ikka);

    std::size_t correct = 0;
    for (std::size_t i = 0; i < report.data.size(); ++i)
        if (report.model.predict(report.data.points[i]) == report.data.labels[i]) ++correct;
    report.training_accuracy = static_cast<double>(correct) / static_cast<double>(report.data.size());

    double sum = 0.0;
    for (std::size_t i : report.model.support_indices()) {
        report.support_vectors.push_back(report.data.points[i]);
        sum += norm(report.data.points[i]);
    }
    if (!report.support_vectors.empty()) report.sv_mean_distance = sum / static_cast<double>(report.support_vectors.size());
    report.maverick_distance = norm(report.grid.maverick);

    double heaviest = -1.0;
    for (const auto& m : report.model.machines)
        for (std::size_t t = 0; t < m.indices.size(); ++t)
            if (std::fabs(m.coefficients[t]) > heaviest) {
                heaviest = std::fabs(m.coefficients[t]);
                report.support_vector_probe = report.data.points[m.indices[t]];
            }

    const auto checked = [&](const Vec2& q) -> std::optional<Indispensability> {
        try {
            return indispensability_check(report.data, q, config.check_radius, config.removal_count);
        } catch (const InsufficientLocalityError&) {
            return std::nullopt;
        } catch (const PreconditionError&) {
            return std::nullopt;
        }
    };
    report.maverick_check = checked(report.grid.maverick);
    if (!report.support_vectors.empty()) report.support_vector_check = checked(report.support_vector_probe);
    return report;
}

}  // namespace ikka::counterexample
