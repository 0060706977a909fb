#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>

#include "setout/metric_core.hpp"
#include "test_support.hpp"

using namespace setout;

namespace {

GeneralInstance line_instance(std::vector<double> coords, std::vector<std::vector<int>> sets) {
    GeneralInstance g;
    g.n = static_cast<int>(coords.size());
    g.metric = GeneralInstance::Metric::Euclidean;
    for (double c : coords) g.points.push_back({c});
    g.sets = std::move(sets);
    g.membership.assign(static_cast<std::size_t>(g.n), {});
    for (int j = 0; j < g.m(); ++j)
        for (int i : g.sets[static_cast<std::size_t>(j)]) g.membership[static_cast<std::size_t>(i)].push_back(j);
    return g;
}

// Exhaustive k-center (no outliers) over all center subsets of size <= k.
double exhaustive_kcenter(const GeneralInstance& g, int k) {
    std::vector<int> idx;
    double best = inf();
    std::vector<int> cur;
    auto rec = [&](auto&& self, int start) -> void {
        if (!cur.empty())
            best = std::min(best, clustering_cost(g, cur, std::vector<bool>(static_cast<std::size_t>(g.n), false)));
        if (static_cast<int>(cur.size()) == k) return;
        for (int i = start; i < g.n; ++i) {
            cur.push_back(i);
            self(self, i + 1);
            cur.pop_back();
        }
    };
    rec(rec, 0);
    return best;
}

}  // namespace

TEST_CASE("gonzalez: k >= n gives radius 0") {
    auto g = line_instance({0, 5, 9}, {{0, 1, 2}});
    auto res = gonzalez_kcenter(g, 5);
    CHECK(res.radius == 0.0);
}

TEST_CASE("gonzalez: hand-simulated greedy on 0,1,10 with k=2") {
    auto g = line_instance({0, 1, 10}, {{0, 1, 2}});
    auto res = gonzalez_kcenter(g, 2);
    REQUIRE(res.centers.size() == 2);
    CHECK(res.centers[0] == 0);
    CHECK(res.centers[1] == 2);  // farthest from 0 is the point at 10
    CHECK(res.radius == 1.0);
}

TEST_CASE("gonzalez: 2-approximation against exhaustive optimum") {
    testsup::Rng rng(99);
    for (int trial = 0; trial < 25; ++trial) {
        auto g = testsup::random_general(rng, 10, 2, 2);
        auto res = gonzalez_kcenter(g, 3);
        double opt = exhaustive_kcenter(g, 3);
        CHECK(res.radius <= 2.0 * opt + 1e-12);
        CHECK(res.radius + 1e-12 >= opt);
    }
}

TEST_CASE("gonzalez: radius monotone nonincreasing in k") {
    testsup::Rng rng(5);
    for (int trial = 0; trial < 10; ++trial) {
        auto g = testsup::random_general(rng, 12, 2, 2);
        double prev = inf();
        for (int k = 1; k <= 6; ++k) {
            auto res = gonzalez_kcenter(g, k);
            CHECK(res.radius <= prev + 1e-15);
            prev = res.radius;
        }
    }
}

TEST_CASE("enumerate_radii basics") {
    SUBCASE("two points at distance 5") {
        auto g = line_instance({0, 5}, {{0, 1}});
        auto r = enumerate_radii(g);
        CHECK(r.values == std::vector<double>{0, 5});
    }
    SUBCASE("three points pairwise 1,2,3") {
        auto g = line_instance({0, 1, 3}, {{0, 1, 2}});
        auto r = enumerate_radii(g);
        CHECK(r.values == std::vector<double>{0, 1, 2, 3});
    }
}

TEST_CASE("enumerate_radii: every value realized by some pair") {
    testsup::Rng rng(17);
    for (int trial = 0; trial < 15; ++trial) {
        auto g = testsup::random_general(rng, 9, 2, 2);
        auto r = enumerate_radii(g);
        for (std::size_t a = 1; a + 1 < r.values.size(); ++a)
            CHECK(r.values[a] < r.values[a + 1]);  // strictly increasing
        for (double v : r.values) {
            if (v == 0.0) continue;
            bool found = false;
            for (int i = 0; i < g.n && !found; ++i)
                for (int j = i + 1; j < g.n && !found; ++j) found = g.dist(i, j) == v;
            CHECK(found);
        }
    }
}

TEST_CASE("brute_force_cso: single element") {
    auto g = line_instance({4.0}, {{0}});
    auto res = brute_force_cso(g, Params{1, 1, 0.2});
    CHECK(res.opt_radius == 0.0);
}

TEST_CASE("brute_force_cso: 4-point line instance has optimum 1") {
    auto g = line_instance({0, 1, 10, 11}, {{2, 3}, {0, 1}});
    auto res = brute_force_cso(g, Params{1, 1, 0.2});
    CHECK(res.opt_radius == 1.0);
}

TEST_CASE("brute_force_cso: invariant under permutation of the set family") {
    testsup::Rng rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        auto g = testsup::random_general(rng, 8, 4, 2);
        auto res = brute_force_cso(g, Params{2, 2, 0.2});
        GeneralInstance h = g;
        std::reverse(h.sets.begin(), h.sets.end());
        h.membership.assign(static_cast<std::size_t>(h.n), {});
        for (int j = 0; j < h.m(); ++j)
            for (int i : h.sets[static_cast<std::size_t>(j)]) h.membership[static_cast<std::size_t>(i)].push_back(j);
        auto res2 = brute_force_cso(h, Params{2, 2, 0.2});
        CHECK(res.opt_radius == res2.opt_radius);
    }
}

TEST_CASE("brute_force_cso: refuses above explosion cap with an estimate") {
    testsup::Rng rng(3);
    auto g = testsup::random_general(rng, 12, 4, 2);
    CHECK_THROWS_AS(brute_force_cso(g, Params{6, 4, 0.2}, 100), BruteForceRefused);
}

TEST_CASE("setcover_to_cso: single element construction") {
    auto g = setcover_to_cso(1, {{0}}, 1);
    REQUIRE(g.n == 2);
    CHECK(g.points[0][0] == 1.0);
    CHECK(g.points[1][0] == 3.0);  // coordinate 2n'+j with n'=1, j=1
    REQUIRE(g.m() == 2);
    CHECK(g.sets[0] == std::vector<int>{0});
    CHECK(g.sets[1] == std::vector<int>{1});
}

TEST_CASE("setcover_to_cso: z = cover optimum gives radius 0, z-1 does not") {
    // Universe {0..4}; sets chosen so the minimum cover has size 2.
    std::vector<std::vector<int>> Y = {{0, 1, 2}, {2, 3, 4}, {0, 3}, {1, 4}};
    const int cover_opt = 2;  // {0,1,2} + {2,3,4}
    auto g = setcover_to_cso(5, Y, 2);
    auto at_opt = brute_force_cso(g, Params{2, cover_opt, 0.2});
    CHECK(at_opt.opt_radius == 0.0);
    auto below = brute_force_cso(g, Params{2, cover_opt - 1, 0.2});
    CHECK(below.opt_radius > 0.0);
}

TEST_CASE("setcover_to_cso: radius-0 check across random small covers") {
    testsup::Rng rng(77);
    for (int trial = 0; trial < 10; ++trial) {
        const int nx = 3 + rng.below(4);  // |X| <= 6
        std::vector<std::vector<int>> Y;
        for (int j = 0; j < 4; ++j) {
            std::vector<int> y;
            for (int x = 0; x < nx; ++x)
                if (rng.below(2) == 0) y.push_back(x);
            if (!y.empty()) Y.push_back(y);
        }
        // Ensure coverage with singletons for missed elements.
        std::vector<bool> cov(static_cast<std::size_t>(nx), false);
        for (auto& y : Y)
            for (int x : y) cov[static_cast<std::size_t>(x)] = true;
        for (int x = 0; x < nx; ++x)
            if (!cov[static_cast<std::size_t>(x)]) Y.push_back({x});

        // Exhaustive minimum cover size.
        int opt = static_cast<int>(Y.size());
        const int m = static_cast<int>(Y.size());
        for (int mask = 0; mask < (1 << m); ++mask) {
            std::vector<bool> c(static_cast<std::size_t>(nx), false);
            for (int j = 0; j < m; ++j)
                if (mask & (1 << j))
                    for (int x : Y[static_cast<std::size_t>(j)]) c[static_cast<std::size_t>(x)] = true;
            if (std::all_of(c.begin(), c.end(), [](bool b) { return b; }))
                opt = std::min(opt, __builtin_popcount(static_cast<unsigned>(mask)));
        }

        const int k = std::max(1, nx / 2);
        auto g = setcover_to_cso(nx, Y, k);
        CHECK(brute_force_cso(g, Params{k, opt, 0.2}).opt_radius == 0.0);
        if (opt > 1) CHECK(brute_force_cso(g, Params{k, opt - 1, 0.2}).opt_radius > 0.0);
    }
}
