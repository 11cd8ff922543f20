#include "ikka/topology.hpp"

#include "ikka/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <string>
#include <unordered_map>

namespace ikka::topology {

double chebyshev_distance(const Point2& p, const Point2& q) {
    return std::max(std::abs(p.a - q.a), std::abs(p.b - q.b));
}

bool filtration_less(const Simplex& lhs, const Simplex& rhs) {
    if (lhs.value != rhs.value) return lhs.value < rhs.value;
    if (lhs.dim != rhs.dim) return lhs.dim < rhs.dim;
    return lhs.vertices < rhs.vertices;
}

std::size_t Filtration::count(int dim) const {
    return static_cast<std::size_t>(std::count_if(
        simplices.begin(), simplices.end(), [dim](const Simplex& s) { return s.dim == dim; }));
}

Filtration build_rips(std::span<const Point2> points, double max_radius, const RipsOptions& options) {
    if (points.empty()) throw PreconditionError("build_rips: at least one point is required");
    if (points.size() > options.max_points) {
        throw PreconditionError("build_rips: " + std::to_string(points.size()) +
                                " points exceeds the cap of " + std::to_string(options.max_points));
    }
    if (!(max_radius > 0.0) || !std::isfinite(max_radius)) {
        throw PreconditionError("build_rips: max_radius must be positive and finite");
    }
    for (const auto& p : points) {
        if (!std::isfinite(p.a) || !std::isfinite(p.b)) {
            throw PreconditionError("build_rips: non-finite coordinate");
        }
    }

    const auto n = static_cast<std::uint32_t>(points.size());
    Filtration f;
    f.vertices.assign(points.begin(), points.end());
    f.max_radius = max_radius;

    // Upper neighbours within the radius, ascending by index.
    std::vector<std::vector<std::pair<std::uint32_t, double>>> upper(n);
    for (std::uint32_t i = 0; i < n; ++i) {
        for (std::uint32_t j = i + 1; j < n; ++j) {
            const double d = chebyshev_distance(points[i], points[j]);
            if (d <= max_radius) upper[i].emplace_back(j, d);
        }
    }

    for (std::uint32_t i = 0; i < n; ++i) f.simplices.push_back({0, {i, 0, 0}, 0.0});
    for (std::uint32_t i = 0; i < n; ++i) {
        for (const auto& [j, d] : upper[i]) f.simplices.push_back({1, {i, j, 0}, d});
    }
    for (std::uint32_t i = 0; i < n; ++i) {
        const auto& ni = upper[i];
        for (std::size_t x = 0; x < ni.size(); ++x) {
            const auto [j, dij] = ni[x];
            const auto& nj = upper[j];
            // Both lists are sorted by vertex index: intersect them.
            std::size_t y = x + 1;
            std::size_t z = 0;
            while (y < ni.size() && z < nj.size()) {
                if (ni[y].first < nj[z].first) {
                    ++y;
                } else if (nj[z].first < ni[y].first) {
                    ++z;
                } else {
                    const double value = std::max({dij, ni[y].second, nj[z].second});
                    f.simplices.push_back({2, {i, j, ni[y].first}, value});
                    ++y;
                    ++z;
                }
            }
        }
    }

    std::sort(f.simplices.begin(), f.simplices.end(), filtration_less);
    return f;
}

namespace {

std::uint64_t edge_key(std::uint32_t u, std::uint32_t v) {
    return (static_cast<std::uint64_t>(u) << 32) | v;
}

struct UnionFind {
    explicit UnionFind(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }

    std::size_t find(std::size_t x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }

    std::vector<std::size_t> parent;
};

// Validated view of a filtration: per-dimension order and face lookups.
struct IndexedFiltration {
    std::vector<std::size_t> vertex_pos;  // vertex id -> global position
    std::vector<std::size_t> edges;       // global positions of edges, in order
    std::vector<std::size_t> triangles;
    std::unordered_map<std::uint64_t, std::uint32_t> edge_order;  // key -> index into edges
};

IndexedFiltration index_filtration(const Filtration& f) {
    const std::size_t n = f.vertices.size();
    constexpr auto unseen = std::numeric_limits<std::size_t>::max();
    IndexedFiltration idx;
    idx.vertex_pos.assign(n, unseen);

    auto fail = [](std::size_t pos, const std::string& why) {
        throw StructuralError("malformed filtration at simplex " + std::to_string(pos) + ": " + why);
    };

    for (std::size_t pos = 0; pos < f.simplices.size(); ++pos) {
        const Simplex& s = f.simplices[pos];
        if (pos > 0 && filtration_less(s, f.simplices[pos - 1])) fail(pos, "simplices out of order");
        if (s.dim < 0 || s.dim > 2) fail(pos, "dimension outside {0,1,2}");
        for (int k = 0; k <= s.dim; ++k) {
            if (s.vertices[k] >= n) fail(pos, "vertex index out of range");
            if (k > 0 && s.vertices[k] <= s.vertices[k - 1]) fail(pos, "vertex tuple not strictly ascending");
        }
        const auto& v = s.vertices;
        if (s.dim == 0) {
            if (idx.vertex_pos[v[0]] != unseen) fail(pos, "duplicate vertex");
            idx.vertex_pos[v[0]] = pos;
        } else if (s.dim == 1) {
            for (int k = 0; k < 2; ++k) {
                if (idx.vertex_pos[v[k]] == unseen) fail(pos, "edge precedes its vertex");
            }
            const auto key = edge_key(v[0], v[1]);
            if (idx.edge_order.contains(key)) fail(pos, "duplicate edge");
            idx.edge_order.emplace(key, static_cast<std::uint32_t>(idx.edges.size()));
            idx.edges.push_back(pos);
        } else {
            const std::array<std::uint64_t, 3> faces{edge_key(v[0], v[1]), edge_key(v[0], v[2]),
                                                     edge_key(v[1], v[2])};
            for (auto key : faces) {
                if (!idx.edge_order.contains(key)) fail(pos, "triangle precedes one of its edges");
            }
            idx.triangles.push_back(pos);
        }
    }
    if (std::find(idx.vertex_pos.begin(), idx.vertex_pos.end(), unseen) != idx.vertex_pos.end()) {
        throw StructuralError("malformed filtration: a vertex has no 0-simplex");
    }
    return idx;
}

void push_pair(PersistenceDiagram& pd, double birth, double death, bool truncated) {
    if (death > birth) pd.pairs.push_back({birth, death, truncated});
}

// Symmetric difference of two ascending index lists.
void add_column(std::vector<std::uint32_t>& target, const std::vector<std::uint32_t>& source,
                std::vector<std::uint32_t>& scratch) {
    scratch.clear();
    std::set_symmetric_difference(target.begin(), target.end(), source.begin(), source.end(),
                                  std::back_inserter(scratch));
    target.swap(scratch);
}

}  // namespace

PersistenceDiagram persistence(const Filtration& f, int degree) {
    if (degree != 0 && degree != 1) throw PreconditionError("persistence: degree must be 0 or 1");
    const IndexedFiltration idx = index_filtration(f);
    const auto& sx = f.simplices;
    const std::size_t n = f.vertices.size();

    PersistenceDiagram pd;
    pd.degree = degree;

    // Edge columns. Over Z/2 the reduction of a column with two vertex
    // entries is the elder rule, which union-find applies directly.
    UnionFind uf(n);
    std::vector<std::size_t> root_birth_pos(n);
    for (std::size_t v = 0; v < n; ++v) root_birth_pos[v] = idx.vertex_pos[v];
    std::vector<char> negative_edge(idx.edges.size(), 0);

    for (std::size_t e = 0; e < idx.edges.size(); ++e) {
        const Simplex& edge = sx[idx.edges[e]];
        std::size_t ru = uf.find(edge.vertices[0]);
        std::size_t rv = uf.find(edge.vertices[1]);
        if (ru == rv) continue;
        // The younger component (later birth position) dies.
        if (root_birth_pos[ru] < root_birth_pos[rv]) std::swap(ru, rv);
        if (degree == 0) push_pair(pd, sx[root_birth_pos[ru]].value, edge.value, false);
        uf.parent[ru] = rv;
        negative_edge[e] = 1;
    }

    if (degree == 0) {
        for (std::size_t v = 0; v < n; ++v) {
            if (uf.find(v) == v) push_pair(pd, sx[root_birth_pos[v]].value, f.max_radius, true);
        }
        return pd;
    }

    // Triangle columns, boundary expressed in edge order indices.
    std::vector<std::vector<std::uint32_t>> reduced;
    reduced.reserve(idx.triangles.size());
    std::vector<std::int64_t> pivot_owner(idx.edges.size(), -1);
    std::vector<char> edge_killed(idx.edges.size(), 0);
    std::vector<std::uint32_t> column;
    std::vector<std::uint32_t> scratch;

    for (const std::size_t tpos : idx.triangles) {
        const Simplex& tri = sx[tpos];
        const auto& v = tri.vertices;
        column = {idx.edge_order.at(edge_key(v[0], v[1])), idx.edge_order.at(edge_key(v[0], v[2])),
                  idx.edge_order.at(edge_key(v[1], v[2]))};
        std::sort(column.begin(), column.end());
        while (!column.empty() && pivot_owner[column.back()] >= 0) {
            add_column(column, reduced[static_cast<std::size_t>(pivot_owner[column.back()])], scratch);
        }
        if (!column.empty()) {
            const std::uint32_t pivot = column.back();
            pivot_owner[pivot] = static_cast<std::int64_t>(reduced.size());
            edge_killed[pivot] = 1;
            push_pair(pd, sx[idx.edges[pivot]].value, tri.value, false);
        }
        reduced.push_back(column);
    }

    for (std::size_t e = 0; e < idx.edges.size(); ++e) {
        if (!negative_edge[e] && !edge_killed[e]) {
            push_pair(pd, sx[idx.edges[e]].value, f.max_radius, true);
        }
    }
    return pd;
}

double total_persistence(const PersistenceDiagram& diagram) {
    double sum = 0.0;
    for (const auto& p : diagram.pairs) sum += p.lifetime();
    return sum;
}

namespace {

// Hopcroft-Karp on a dense bipartite adjacency list; returns matching size.
class BipartiteMatcher {
public:
    explicit BipartiteMatcher(std::size_t n) : adj_(n), match_l_(n), match_r_(n), dist_(n) {}

    void add_edge(std::size_t l, std::size_t r) { adj_[l].push_back(r); }

    std::size_t max_matching() {
        constexpr auto none = std::numeric_limits<std::size_t>::max();
        std::fill(match_l_.begin(), match_l_.end(), none);
        std::fill(match_r_.begin(), match_r_.end(), none);
        std::size_t size = 0;
        while (bfs()) {
            for (std::size_t l = 0; l < adj_.size(); ++l) {
                if (match_l_[l] == none && dfs(l)) ++size;
            }
        }
        return size;
    }

private:
    static constexpr std::size_t inf = std::numeric_limits<std::size_t>::max();

    bool bfs() {
        std::queue<std::size_t> queue;
        bool found = false;
        for (std::size_t l = 0; l < adj_.size(); ++l) {
            if (match_l_[l] == inf) {
                dist_[l] = 0;
                queue.push(l);
            } else {
                dist_[l] = inf;
            }
        }
        while (!queue.empty()) {
            const std::size_t l = queue.front();
            queue.pop();
            for (std::size_t r : adj_[l]) {
                const std::size_t next = match_r_[r];
                if (next == inf) {
                    found = true;
                } else if (dist_[next] == inf) {
                    dist_[next] = dist_[l] + 1;
                    queue.push(next);
                }
            }
        }
        return found;
    }

    bool dfs(std::size_t l) {
        for (std::size_t r : adj_[l]) {
            const std::size_t next = match_r_[r];
            if (next == inf || (dist_[next] == dist_[l] + 1 && dfs(next))) {
                match_l_[l] = r;
                match_r_[r] = l;
                return true;
            }
        }
        dist_[l] = inf;
        return false;
    }

    std::vector<std::vector<std::size_t>> adj_;
    std::vector<std::size_t> match_l_;
    std::vector<std::size_t> match_r_;
    std::vector<std::size_t> dist_;
};

double linf(const PersistencePair& p, const PersistencePair& q) {
    return std::max(std::abs(p.birth - q.birth), std::abs(p.death - q.death));
}

}  // namespace

double bottleneck_distance(const PersistenceDiagram& lhs, const PersistenceDiagram& rhs) {
    const auto& a = lhs.pairs;
    const auto& b = rhs.pairs;
    const std::size_t n = a.size();
    const std::size_t m = b.size();
    if (n + m == 0) return 0.0;

    std::vector<double> candidates{0.0};
    candidates.reserve(n * m + n + m + 1);
    for (const auto& p : a) candidates.push_back(p.lifetime() / 2.0);
    for (const auto& q : b) candidates.push_back(q.lifetime() / 2.0);
    for (const auto& p : a) {
        for (const auto& q : b) candidates.push_back(linf(p, q));
    }
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    // Left: a_0..a_{n-1}, then diagonal images of b. Right: b_0..b_{m-1},
    // then diagonal images of a.
    auto feasible = [&](double threshold) {
        BipartiteMatcher matcher(n + m);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < m; ++j) {
                if (linf(a[i], b[j]) <= threshold) matcher.add_edge(i, j);
            }
            if (a[i].lifetime() / 2.0 <= threshold) matcher.add_edge(i, m + i);
        }
        for (std::size_t j = 0; j < m; ++j) {
            if (b[j].lifetime() / 2.0 <= threshold) matcher.add_edge(n + j, j);
            for (std::size_t i = 0; i < n; ++i) matcher.add_edge(n + j, m + i);
        }
        return matcher.max_matching() == n + m;
    };

    std::size_t lo = 0;
    std::size_t hi = candidates.size() - 1;  // every point to the diagonal is always feasible
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (feasible(candidates[mid])) {
            hi = mid;
        } else {
            lo = mid + 1;
        }
    }
    return candidates[lo];
}

int betti1_at_scale(const PersistenceDiagram& diagram, double r) {
    return static_cast<int>(std::count_if(diagram.pairs.begin(), diagram.pairs.end(),
                                          [r](const PersistencePair& p) { return p.birth <= r && r < p.death; }));
}

PersistenceDiagram rips_pd1(std::span<const Point2> points, double max_radius, const RipsOptions& options) {
    return persistence(build_rips(points, max_radius, options), 1);
}

}  // namespace ikka::topology
