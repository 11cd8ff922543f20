#include "ikka/errors.hpp"
#include "ikka/topology.hpp"
#include "oracles/persistence_oracle.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <vector>

using namespace ikka::topology;

namespace {

std::vector<Point2> chebyshev_ring() {
    return {{-2, -2}, {-2, 0}, {-2, 2}, {0, -2}, {0, 2}, {2, -2}, {2, 0}, {2, 2}};
}

std::vector<oracle::Pt> to_oracle(const std::vector<Point2>& pts) {
    std::vector<oracle::Pt> out;
    for (const auto& p : pts) out.push_back({p.a, p.b});
    return out;
}

std::vector<std::pair<double, double>> sorted_pairs(const PersistenceDiagram& pd) {
    std::vector<std::pair<double, double>> out;
    for (const auto& p : pd.pairs) out.emplace_back(p.birth, p.death);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<Point2> random_cloud(std::mt19937_64& rng, int n, double scale) {
    std::uniform_real_distribution<double> u(0.0, scale);
    std::vector<Point2> pts(static_cast<std::size_t>(n));
    for (auto& p : pts) p = {u(rng), u(rng)};
    return pts;
}

PersistenceDiagram diagram(std::initializer_list<std::pair<double, double>> pairs) {
    PersistenceDiagram pd;
    for (auto [b, d] : pairs) pd.pairs.push_back({b, d, false});
    return pd;
}

}  // namespace

TEST(ChebyshevDistance, Examples) {
    EXPECT_DOUBLE_EQ(chebyshev_distance({0, 0}, {3, 1}), 3.0);
    EXPECT_DOUBLE_EQ(chebyshev_distance({2, 2}, {2, 2}), 0.0);
    EXPECT_NEAR(chebyshev_distance({1.0, 0.5}, {1.2, 0.9}), 0.4, 1e-15);
    EXPECT_DOUBLE_EQ(chebyshev_distance({1.0, 0.5}, {1.2, 0.9}), chebyshev_distance({1.2, 0.9}, {1.0, 0.5}));
}

TEST(BuildRips, SinglePoint) {
    const std::vector<Point2> pts{{0.3, 0.7}};
    const auto f = build_rips(pts, 1.0);
    EXPECT_EQ(f.count(0), 1u);
    EXPECT_EQ(f.count(1), 0u);
}

TEST(BuildRips, CollinearTriple) {
    const std::vector<Point2> pts{{0, 0}, {1, 0}, {2, 0}};
    const auto f = build_rips(pts, 10.0);
    ASSERT_EQ(f.count(0), 3u);
    ASSERT_EQ(f.count(1), 3u);
    ASSERT_EQ(f.count(2), 1u);
    std::vector<double> edge_values;
    for (const auto& s : f.simplices) {
        if (s.dim == 1) edge_values.push_back(s.value);
        if (s.dim == 2) EXPECT_DOUBLE_EQ(s.value, 2.0);
    }
    EXPECT_EQ(edge_values, (std::vector<double>{1.0, 1.0, 2.0}));
}

TEST(BuildRips, RingCountsMatchEnumeration) {
    const auto ring = chebyshev_ring();
    const auto f = build_rips(ring, 5.0);
    const auto [edges, triangles] = oracle::count_rips(to_oracle(ring), 5.0);
    EXPECT_EQ(f.count(1), static_cast<std::size_t>(edges));
    EXPECT_EQ(f.count(2), static_cast<std::size_t>(triangles));
    EXPECT_EQ(edges, 28);
    EXPECT_EQ(triangles, 56);
}

TEST(BuildRips, SortedAndRipsValued) {
    std::mt19937_64 rng(7);
    const auto pts = random_cloud(rng, 15, 1.0);
    const auto f = build_rips(pts, 0.6);
    for (std::size_t i = 1; i < f.simplices.size(); ++i) {
        EXPECT_FALSE(filtration_less(f.simplices[i], f.simplices[i - 1]));
    }
    for (const auto& s : f.simplices) {
        double diameter = 0.0;
        for (int x = 0; x <= s.dim; ++x)
            for (int y = x + 1; y <= s.dim; ++y)
                diameter = std::max(diameter, chebyshev_distance(pts[s.vertices[x]], pts[s.vertices[y]]));
        EXPECT_DOUBLE_EQ(s.value, diameter);
        EXPECT_LE(s.value, 0.6);
    }
}

TEST(BuildRips, Monotone) {
    std::mt19937_64 rng(11);
    const auto pts = random_cloud(rng, 12, 1.0);
    const auto small = build_rips(pts, 0.3);
    const auto large = build_rips(pts, 0.7);
    for (const auto& s : small.simplices) {
        const bool found = std::any_of(large.simplices.begin(), large.simplices.end(), [&](const Simplex& t) {
            return t.dim == s.dim && t.vertices == s.vertices && t.value == s.value;
        });
        EXPECT_TRUE(found);
    }
}

TEST(BuildRips, Preconditions) {
    const std::vector<Point2> none;
    EXPECT_THROW(build_rips(none, 1.0), ikka::PreconditionError);
    const std::vector<Point2> one{{0, 0}};
    EXPECT_THROW(build_rips(one, 0.0), ikka::PreconditionError);
    const std::vector<Point2> many(11, Point2{0, 0});
    EXPECT_THROW(build_rips(many, 1.0, RipsOptions{10}), ikka::PreconditionError);
    const std::vector<Point2> bad{{0, std::numeric_limits<double>::quiet_NaN()}};
    EXPECT_THROW(build_rips(bad, 1.0), ikka::PreconditionError);
}

TEST(Persistence, CollinearHasNoLoops) {
    std::vector<Point2> line;
    for (int i = 0; i < 9; ++i) line.push_back({0.1 * i, 0.0});
    EXPECT_TRUE(rips_pd1(line, 5.0).empty());
}

TEST(Persistence, ChebyshevRing) {
    const auto ring = chebyshev_ring();
    const auto pd = rips_pd1(ring, 5.0);
    ASSERT_EQ(pd.size(), 1u);
    EXPECT_DOUBLE_EQ(pd.pairs[0].birth, 2.0);
    EXPECT_DOUBLE_EQ(pd.pairs[0].death, 4.0);
    EXPECT_FALSE(pd.pairs[0].truncated);

    const auto expected = oracle::brute_force_diagram(to_oracle(ring), 5.0, 1);
    ASSERT_EQ(expected.size(), 1u);
    EXPECT_DOUBLE_EQ(expected[0].birth, 2.0);
    EXPECT_DOUBLE_EQ(expected[0].death, 4.0);
}

TEST(Persistence, TruncatedEssentialCycle) {
    // The ring's loop is still open at radius 3.
    const auto pd = rips_pd1(chebyshev_ring(), 3.0);
    ASSERT_EQ(pd.size(), 1u);
    EXPECT_TRUE(pd.pairs[0].truncated);
    EXPECT_DOUBLE_EQ(pd.pairs[0].death, 3.0);
    EXPECT_DOUBLE_EQ(total_persistence(pd), 1.0);
}

TEST(Persistence, DegreeZeroCountingIdentity) {
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const auto pts = random_cloud(rng, 5 + trial % 10, 1.0);
        const auto pd0 = persistence(build_rips(pts, 0.25), 0);
        std::size_t finite = 0;
        std::size_t survivors = 0;
        for (const auto& p : pd0.pairs) {
            EXPECT_DOUBLE_EQ(p.birth, 0.0);
            (p.truncated ? survivors : finite) += 1;
        }
        EXPECT_EQ(finite + survivors, pts.size());
    }
}

TEST(Persistence, MalformedFiltrationRejected) {
    auto f = build_rips(chebyshev_ring(), 5.0);
    // Move the last triangle to the front: its faces now appear after it.
    auto tri = f.simplices.back();
    f.simplices.pop_back();
    tri.value = 0.0;
    tri.dim = 2;
    f.simplices.insert(f.simplices.begin() + static_cast<long>(f.count(0)), tri);
    EXPECT_THROW(persistence(f, 1), ikka::StructuralError);

    auto g = build_rips(chebyshev_ring(), 5.0);
    std::swap(g.simplices[0], g.simplices.back());
    EXPECT_THROW(persistence(g, 1), ikka::StructuralError);
    EXPECT_THROW(persistence(build_rips(chebyshev_ring(), 5.0), 2), ikka::PreconditionError);
}

TEST(Persistence, MatchesBruteForceOracle) {
    std::mt19937_64 rng(2024);
    std::uniform_int_distribution<int> size(3, 12);
    std::uniform_real_distribution<double> radius(0.2, 1.2);
    for (int trial = 0; trial < 60; ++trial) {
        const auto pts = random_cloud(rng, size(rng), 1.0);
        const double r = radius(rng);
        const auto ours = sorted_pairs(rips_pd1(pts, r));
        const auto theirs = oracle::brute_force_diagram(to_oracle(pts), r, 1);
        ASSERT_EQ(ours.size(), theirs.size()) << "trial " << trial;
        for (std::size_t i = 0; i < ours.size(); ++i) {
            EXPECT_EQ(ours[i].first, theirs[i].birth);
            EXPECT_EQ(ours[i].second, theirs[i].death);
        }
    }
}

TEST(Persistence, PermutationInvariant) {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        auto pts = random_cloud(rng, 20, 1.0);
        const auto before = sorted_pairs(rips_pd1(pts, 0.5));
        std::shuffle(pts.begin(), pts.end(), rng);
        EXPECT_EQ(before, sorted_pairs(rips_pd1(pts, 0.5)));
    }
}

TEST(TotalPersistence, Examples) {
    EXPECT_DOUBLE_EQ(total_persistence(PersistenceDiagram{}), 0.0);
    EXPECT_DOUBLE_EQ(total_persistence(diagram({{2, 4}})), 2.0);
    EXPECT_NEAR(total_persistence(diagram({{1, 3}, {0.5, 0.7}})), 2.2, 1e-12);
}

TEST(TotalPersistence, SinglePairPerturbationBound) {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 100; ++trial) {
        auto pd = diagram({{0.1, 0.9}, {0.2, 0.5}, {0.3, 0.8}});
        const double before = total_persistence(pd);
        const double delta = 0.05 * u(rng);
        auto& p = pd.pairs[trial % 3];
        p.birth += (u(rng) < 0.5 ? -1 : 1) * delta;
        p.death += (u(rng) < 0.5 ? -1 : 1) * delta;
        EXPECT_LE(std::abs(total_persistence(pd) - before), 2 * delta + 1e-15);
    }
}

TEST(Bottleneck, Examples) {
    const auto pd = diagram({{1, 4}, {0.2, 0.9}});
    EXPECT_DOUBLE_EQ(bottleneck_distance(pd, pd), 0.0);
    EXPECT_DOUBLE_EQ(bottleneck_distance(diagram({{0, 2}}), PersistenceDiagram{}), 1.0);
    EXPECT_NEAR(bottleneck_distance(diagram({{1, 4}}), diagram({{1.3, 4.2}})), 0.3, 1e-12);
    EXPECT_DOUBLE_EQ(bottleneck_distance(PersistenceDiagram{}, PersistenceDiagram{}), 0.0);
}

TEST(Bottleneck, BruteForceOverMatchings) {
    // Exhaustive search over injective partial matchings for tiny diagrams.
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    auto random_pd = [&](int n) {
        PersistenceDiagram pd;
        for (int i = 0; i < n; ++i) {
            const double b = u(rng);
            pd.pairs.push_back({b, b + u(rng), false});
        }
        return pd;
    };
    for (int trial = 0; trial < 50; ++trial) {
        const auto a = random_pd(1 + trial % 3);
        const auto b = random_pd(trial % 4);
        const std::size_t n = a.size();
        const std::size_t m = b.size();
        // assign[i] in [0, m] where m means "diagonal".
        double best = std::numeric_limits<double>::infinity();
        std::vector<std::size_t> assign(n, 0);
        while (true) {
            std::vector<char> used(m, 0);
            bool ok = true;
            double cost = 0.0;
            for (std::size_t i = 0; i < n && ok; ++i) {
                if (assign[i] == m) {
                    cost = std::max(cost, a.pairs[i].lifetime() / 2);
                } else if (used[assign[i]]) {
                    ok = false;
                } else {
                    used[assign[i]] = 1;
                    const auto& p = a.pairs[i];
                    const auto& q = b.pairs[assign[i]];
                    cost = std::max({cost, std::abs(p.birth - q.birth), std::abs(p.death - q.death)});
                }
            }
            if (ok) {
                for (std::size_t j = 0; j < m; ++j)
                    if (!used[j]) cost = std::max(cost, b.pairs[j].lifetime() / 2);
                best = std::min(best, cost);
            }
            std::size_t k = 0;
            while (k < n && ++assign[k] > m) assign[k++] = 0;
            if (k == n) break;
        }
        EXPECT_DOUBLE_EQ(bottleneck_distance(a, b), best) << "trial " << trial;
        EXPECT_DOUBLE_EQ(bottleneck_distance(b, a), best);
    }
}

TEST(Bottleneck, StabilityUnderSmallPerturbation) {
    std::mt19937_64 rng(123);
    for (int trial = 0; trial < 20; ++trial) {
        const auto pts = random_cloud(rng, 25, 1.0);
        const double eps = 0.02;
        std::uniform_real_distribution<double> jitter(-eps / 2, eps / 2);
        auto moved = pts;
        for (auto& p : moved) {
            p.a += jitter(rng);
            p.b += jitter(rng);
        }
        const auto a = rips_pd1(pts, 3.0);
        const auto b = rips_pd1(moved, 3.0);
        EXPECT_LE(bottleneck_distance(a, b), eps + 1e-9);
    }
}

TEST(Betti1, Examples) {
    EXPECT_EQ(betti1_at_scale(diagram({{2, 4}}), 3.0), 1);
    EXPECT_EQ(betti1_at_scale(diagram({{2, 4}}), 5.0), 0);
    EXPECT_EQ(betti1_at_scale(diagram({{1, 3}, {2, 6}}), 2.5), 2);
    EXPECT_EQ(betti1_at_scale(diagram({{2, 4}}), 4.0), 0);
    EXPECT_EQ(betti1_at_scale(diagram({{2, 4}}), 2.0), 1);
}
