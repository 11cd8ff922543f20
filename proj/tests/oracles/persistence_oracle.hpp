#pragma once

// Brute-force Rips persistence used only by tests. It shares no code with
// the library: simplices are enumerated with plain loops, the full boundary
// matrix over Z/2 is stored densely and reduced column by column.

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

namespace oracle {

struct Pt {
    double a;
    double b;
};

struct BarPair {
    double birth;
    double death;
};

inline double cheb(const Pt& p, const Pt& q) {
    return std::max(std::fabs(p.a - q.a), std::fabs(p.b - q.b));
}

struct Cell {
    int dim;
    std::vector<int> verts;
    double value;
};

inline std::vector<Cell> enumerate_rips(const std::vector<Pt>& pts, double radius) {
    const int n = static_cast<int>(pts.size());
    std::vector<Cell> cells;
    for (int i = 0; i < n; ++i) cells.push_back({0, {i}, 0.0});
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            const double d = cheb(pts[i], pts[j]);
            if (d <= radius) cells.push_back({1, {i, j}, d});
        }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            for (int k = j + 1; k < n; ++k) {
                const double d = std::max({cheb(pts[i], pts[j]), cheb(pts[i], pts[k]), cheb(pts[j], pts[k])});
                if (d <= radius) cells.push_back({2, {i, j, k}, d});
            }
    std::stable_sort(cells.begin(), cells.end(), [](const Cell& x, const Cell& y) {
        if (x.value != y.value) return x.value < y.value;
        return x.dim < y.dim;
    });
    return cells;
}

// Counts of edges and triangles by exhaustive pair/triple enumeration.
inline std::pair<int, int> count_rips(const std::vector<Pt>& pts, double radius) {
    int edges = 0;
    int triangles = 0;
    for (const auto& c : enumerate_rips(pts, radius)) {
        if (c.dim == 1) ++edges;
        if (c.dim == 2) ++triangles;
    }
    return {edges, triangles};
}

// Pairs of the requested degree, zero-length pairs dropped, essential
// classes closed at `radius`. Sorted by (birth, death).
inline std::vector<BarPair> brute_force_diagram(const std::vector<Pt>& pts, double radius, int degree) {
    const auto cells = enumerate_rips(pts, radius);
    const std::size_t m = cells.size();

    auto face_index = [&](const std::vector<int>& face) -> std::size_t {
        for (std::size_t r = 0; r < m; ++r)
            if (cells[r].verts == face) return r;
        return m;
    };

    std::vector<std::vector<char>> matrix(m, std::vector<char>(m, 0));  // matrix[col][row]
    for (std::size_t c = 0; c < m; ++c) {
        const auto& v = cells[c].verts;
        if (v.size() < 2) continue;
        for (std::size_t drop = 0; drop < v.size(); ++drop) {
            std::vector<int> face;
            for (std::size_t k = 0; k < v.size(); ++k)
                if (k != drop) face.push_back(v[k]);
            matrix[c][face_index(face)] = 1;
        }
    }

    auto low = [&](std::size_t c) -> long {
        for (long r = static_cast<long>(m) - 1; r >= 0; --r)
            if (matrix[c][static_cast<std::size_t>(r)]) return r;
        return -1;
    };

    std::vector<long> lows(m, -1);
    for (std::size_t c = 0; c < m; ++c) {
        bool changed = true;
        while (changed) {
            changed = false;
            const long l = low(c);
            if (l < 0) break;
            for (std::size_t prev = 0; prev < c; ++prev) {
                if (lows[prev] == l) {
                    for (std::size_t r = 0; r < m; ++r) matrix[c][r] ^= matrix[prev][r];
                    changed = true;
                    break;
                }
            }
        }
        lows[c] = low(c);
    }

    std::vector<char> paired(m, 0);
    std::vector<BarPair> out;
    for (std::size_t c = 0; c < m; ++c) {
        if (lows[c] < 0) continue;
        const auto birth_cell = static_cast<std::size_t>(lows[c]);
        paired[birth_cell] = 1;
        paired[c] = 1;
        if (cells[birth_cell].dim == degree && cells[c].value > cells[birth_cell].value)
            out.push_back({cells[birth_cell].value, cells[c].value});
    }
    for (std::size_t c = 0; c < m; ++c) {
        if (!paired[c] && cells[c].dim == degree && radius > cells[c].value)
            out.push_back({cells[c].value, radius});
    }
    std::sort(out.begin(), out.end(), [](const BarPair& x, const BarPair& y) {
        return x.birth != y.birth ? x.birth < y.birth : x.death < y.death;
    });
    return out;
}

}  // namespace oracle
