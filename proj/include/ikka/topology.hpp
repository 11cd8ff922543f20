#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace ikka::topology {

// A planar sample. For run logs `a` is time in seconds and `b` the absolute
// lateral error; the counterexample uses plain (x, y).
struct Point2 {
    double a = 0.0;
    double b = 0.0;

    friend bool operator==(const Point2&, const Point2&) = default;
};

double chebyshev_distance(const Point2& p, const Point2& q);

// A vertex, edge or triangle of a Rips complex. Vertex indices are sorted
// ascending; slots past `dim` are unused and hold 0.
struct Simplex {
    int dim = 0;
    std::array<std::uint32_t, 3> vertices{};
    double value = 0.0;
};

// Strict ordering used for filtrations: (value, dim, vertex tuple).
bool filtration_less(const Simplex& lhs, const Simplex& rhs);

struct Filtration {
    std::vector<Point2> vertices;
    std::vector<Simplex> simplices;
    double max_radius = 0.0;

    std::size_t count(int dim) const;
};

struct RipsOptions {
    std::size_t max_points = 2000;
};

// Vietoris-Rips complex up to dimension 2 under the Chebyshev metric,
// truncated at `max_radius`. Throws PreconditionError on empty input,
// non-finite coordinates, a non-positive radius, or too many points.
Filtration build_rips(std::span<const Point2> points, double max_radius,
                      const RipsOptions& options = {});

struct PersistencePair {
    double birth = 0.0;
    double death = 0.0;
    // Class still alive at max_radius; death was clamped to it.
    bool truncated = false;

    double lifetime() const { return death - birth; }
};

struct PersistenceDiagram {
    int degree = 1;
    std::vector<PersistencePair> pairs;

    std::size_t size() const { return pairs.size(); }
    bool empty() const { return pairs.empty(); }
};

// Persistence of degree 0 or 1 by boundary-matrix reduction over Z/2.
// Zero-persistence pairs are dropped; classes alive at the end of the
// filtration are reported with death = max_radius and `truncated` set.
// Throws StructuralError when a face appears after one of its cofaces.
PersistenceDiagram persistence(const Filtration& filtration, int degree);

double total_persistence(const PersistenceDiagram& diagram);

// Exact bottleneck distance under the L-infinity ground metric, diagonal
// matches allowed at cost lifetime / 2.
double bottleneck_distance(const PersistenceDiagram& lhs, const PersistenceDiagram& rhs);

// Number of pairs alive at scale r, i.e. birth <= r < death.
int betti1_at_scale(const PersistenceDiagram& diagram, double r);

// Convenience: PD1 of the Rips complex on `points`.
PersistenceDiagram rips_pd1(std::span<const Point2> points, double max_radius,
                            const RipsOptions& options = {});

}  // namespace ikka::topology
