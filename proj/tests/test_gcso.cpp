#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "setout/cso_general.hpp"
#include "setout/gcso.hpp"
#include "setout/metric_core.hpp"
#include "test_support.hpp"

using namespace setout;

namespace {

// Dyadic sigma values make every partial sum exact in doubles, so the tree
// and dense computations must agree bit for bit.
std::vector<double> dyadic_sigma(testsup::Rng& rng, int n) {
    std::vector<double> s(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        s[static_cast<std::size_t>(i)] = static_cast<double>(1 + rng.below(1 << 20)) * 0x1.0p-20;
    return s;
}

struct DenseRef {
    std::vector<std::vector<int>> cover;    // S^eps, taken from the BBD query itself
    std::vector<std::vector<int>> sets_of;  // rect memberships by direct containment
};

DenseRef dense_ref(const GeoLpSystem& sys, const std::vector<Point>& pts, const std::vector<Box>& rects) {
    DenseRef ref;
    ref.cover = sys.materialize_cover();
    ref.sets_of.resize(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = 0; j < rects.size(); ++j)
            if (rects[j].contains(pts[i])) ref.sets_of[i].push_back(static_cast<int>(j));
    return ref;
}

}  // namespace

TEST_CASE("oracle_step: one point covering itself") {
    std::vector<Point> pts{{0.0}};
    std::vector<Box> rects{Box::whole(1)};
    GeoLpSystem sys(pts, rects, 5.0, 0.2);
    auto step = oracle_step(sys, {1.0}, 1, 1);
    CHECK(step.w == std::vector<double>{1.0});
    CHECK(step.feasible);
}

TEST_CASE("oracle_step: uniform sigma inside one rectangle gives tau = 1") {
    testsup::Rng rng(1);
    auto pts = testsup::random_points(rng, 10, 2);
    std::vector<Box> rects{Box::whole(2), Box::closed({100, 100}, {101, 101})};
    GeoLpSystem sys(pts, rects, 1.0, 0.2);
    std::vector<double> sigma(10, 0.1);
    std::vector<double> w, tau;
    sys.coefficients(sigma, w, tau);
    CHECK(tau[0] == doctest::Approx(1.0));
    CHECK(tau[1] == 0.0);
}

TEST_CASE("oracle/update: tree computation equals the dense reference exactly") {
    testsup::Rng rng(7);
    for (int trial = 0; trial < 10; ++trial) {
        const int d = 1 + trial % 3;
        const int n = 10 + rng.below(41);  // up to 50
        const int m = 1 + rng.below(8);
        auto g = testsup::random_geometric(rng, n, m, d);
        const double r = rng.uniform(0.5, 6.0);
        GeoLpSystem sys(g.points, g.rects, r, 0.2);
        const auto ref = dense_ref(sys, g.points, g.rects);
        const auto sigma = dyadic_sigma(rng, n);

        std::vector<double> w, tau;
        sys.coefficients(sigma, w, tau);
        std::vector<double> w_ref(static_cast<std::size_t>(n), 0.0), tau_ref(static_cast<std::size_t>(m), 0.0);
        for (int i = 0; i < n; ++i) {
            for (int l : ref.cover[static_cast<std::size_t>(i)])
                w_ref[static_cast<std::size_t>(l)] += sigma[static_cast<std::size_t>(i)];
            for (int j : ref.sets_of[static_cast<std::size_t>(i)])
                tau_ref[static_cast<std::size_t>(j)] += sigma[static_cast<std::size_t>(i)];
        }
        CHECK(w == w_ref);
        CHECK(tau == tau_ref);

        // row sums / deltas for the oracle's own 0/1 pick
        const int k = 1 + rng.below(3), z = 1 + rng.below(2);
        auto step = oracle_step(sys, sigma, k, z);
        std::vector<double> rows;
        sys.row_sums(step.x_chosen, step.y_chosen, rows);
        for (int i = 0; i < n; ++i) {
            double expect = 0;
            for (int l : step.x_chosen)
                expect += std::binary_search(ref.cover[static_cast<std::size_t>(i)].begin(),
                                             ref.cover[static_cast<std::size_t>(i)].end(), l)
                              ? 1
                              : 0;
            for (int j : step.y_chosen)
                expect += static_cast<double>(std::count(ref.sets_of[static_cast<std::size_t>(i)].begin(),
                                                         ref.sets_of[static_cast<std::size_t>(i)].end(), j));
            CHECK(rows[static_cast<std::size_t>(i)] == expect);
            // oracle range: A_i psi - 1 in [-1, k+z-1]
            CHECK(rows[static_cast<std::size_t>(i)] - 1.0 >= -1.0);
            CHECK(rows[static_cast<std::size_t>(i)] - 1.0 <= k + z - 1.0);
        }

        // oracle maximality against random 0/1 picks
        for (int probe = 0; probe < 10; ++probe) {
            double other = 0;
            std::set<int> xs, ys;
            while (static_cast<int>(xs.size()) < std::min(k, n)) xs.insert(rng.below(n));
            while (static_cast<int>(ys.size()) < std::min(z, m)) ys.insert(rng.below(m));
            for (int l : xs) other += step.w[static_cast<std::size_t>(l)];
            for (int j : ys) other += step.tau[static_cast<std::size_t>(j)];
            CHECK(step.lhs >= other - 1e-12);
        }
    }
}

TEST_CASE("update_step: all-zero pick rescales sigma uniformly") {
    testsup::Rng rng(13);
    auto pts = testsup::random_points(rng, 8, 2);
    std::vector<Box> rects{Box::whole(2)};
    GeoLpSystem sys(pts, rects, 1.0, 0.2);
    OracleStep zero;  // no x, no y chosen
    auto sigma = dyadic_sigma(rng, 8);
    auto next = update_step(sys, zero, sigma, 0.2, 1, 1);
    // every delta = -1/(k+z): one common factor, ratios preserved
    for (int i = 1; i < 8; ++i)
        CHECK(next[static_cast<std::size_t>(i)] / next[0] ==
              doctest::Approx(sigma[static_cast<std::size_t>(i)] / sigma[0]).epsilon(1e-12));
}

TEST_CASE("update_step: single point and rect picked together give delta 1/2") {
    std::vector<Point> pts{{0.0}};
    std::vector<Box> rects{Box::whole(1)};
    GeoLpSystem sys(pts, rects, 1.0, 0.2);
    OracleStep step;
    step.x_chosen = {0};
    step.y_chosen = {0};
    const double eps = 0.2;
    auto next = update_step(sys, step, {1.0}, eps, 1, 1);
    // A_0 psi = 2, delta = 1/2, factor 1 - eps/8
    CHECK(next[0] == 1.0 - eps / 8.0);
}

TEST_CASE("geometric mwu: feasible at the diameter and constraint slack holds") {
    testsup::Rng rng(23);
    for (int trial = 0; trial < 6; ++trial) {
        const int d = 1 + trial % 3;
        auto g = testsup::random_geometric(rng, 12 + rng.below(20), 1 + rng.below(4), d);
        double diam = 0;
        for (std::size_t i = 0; i < g.points.size(); ++i)
            for (std::size_t j = 0; j < g.points.size(); ++j) diam = std::max(diam, dist_l2(g.points[i], g.points[j]));
        const double eps = 0.15;
        GeoLpSystem sys(g.points, g.rects, diam, eps);
        const int k = 1 + rng.below(2), z = 1 + rng.below(2);
        auto out = mwu_solve(sys, k, z, eps);
        REQUIRE(out.feasible);
        CHECK(out.iterations <= mwu_iteration_budget(g.n(), k, z, eps));
        const auto ref = dense_ref(sys, g.points, g.rects);
        for (int i = 0; i < g.n(); ++i) {
            double v = 0;
            for (int l : ref.cover[static_cast<std::size_t>(i)]) v += out.psi.x(static_cast<std::size_t>(l));
            for (int j : ref.sets_of[static_cast<std::size_t>(i)]) v += out.psi.y(static_cast<std::size_t>(j));
            CHECK(v >= 1.0 - eps - 1e-9);
        }
    }
}

TEST_CASE("geometric mwu: two far points with one rect each feasible at r=0") {
    std::vector<Point> pts{{0.0, 0.0}, {100.0, 100.0}};
    std::vector<Box> rects{Box::closed({-1, -1}, {1, 1}), Box::closed({99, 99}, {101, 101})};
    GeoLpSystem sys(pts, rects, 0.0, 0.2);
    auto out = mwu_solve(sys, 1, 1, 0.2);
    CHECK(out.feasible);
}

TEST_CASE("round_geometric: no y above threshold leaves R empty; separation > 2r") {
    testsup::Rng rng(31);
    auto g = testsup::random_geometric(rng, 25, 2, 2);
    const double r = 1.5;
    GeoLpSystem sys(g.points, g.rects, r, 0.2);
    MwuSolution psi;
    psi.rounds = 8LL * g.frequency();
    psi.x_counts.assign(static_cast<std::size_t>(g.n()), 0);
    psi.y_counts.assign(static_cast<std::size_t>(g.m()), 1);  // 1/(8f) < 1/(2f)
    TriSolution sol = round_geometric(g, sys, psi, Params{3, 1, 0.2}, 2.2);
    CHECK(sol.outliers.empty());
    for (std::size_t a = 0; a < sol.centers.size(); ++a)
        for (std::size_t b = a + 1; b < sol.centers.size(); ++b)
            CHECK(dist_l2(g.points[static_cast<std::size_t>(sol.centers[a])],
                          g.points[static_cast<std::size_t>(sol.centers[b])]) > 2.0 * r);
    // every point is covered within the inflated peel radius
    CHECK(sol.radius <= 2.0 * (1.0 + 0.2) * r);
}

TEST_CASE("round_geometric: everything inside one selected rectangle leaves C empty") {
    GeometricInstance g;
    g.points = {{1, 1}, {2, 2}, {3, 3}};
    g.rects = {Box::closed({0, 0}, {4, 4})};
    GeoLpSystem sys(g.points, g.rects, 1.0, 0.2);
    MwuSolution psi;
    psi.rounds = 2;
    psi.x_counts.assign(3, 0);
    psi.y_counts = {1};  // 1/2 >= 1/(2f) with f=1
    TriSolution sol = round_geometric(g, sys, psi, Params{1, 1, 0.2}, 2.2);
    CHECK(sol.centers.empty());
    CHECK(sol.outliers == std::vector<int>{0});
    CHECK(sol.radius == 0.0);
}

TEST_CASE("solve_gcso: one point, one rectangle") {
    GeometricInstance g;
    g.points = {{5.0, 5.0}};
    g.rects = {Box::closed({4, 4}, {6, 6})};
    TriSolution sol = solve_gcso(g, Params{1, 1, 0.2});
    CHECK(sol.radius == 0.0);
}

TEST_CASE("solve_gcso: two clusters and a junk rectangle") {
    // junk spread is too wide for k=2, so the junk rectangle is the only way
    // to reach the cluster-scale optimum
    GeometricInstance g;
    for (double dx : {0.0, 0.4, 0.8}) g.points.push_back({dx, 0.0});
    for (double dx : {0.0, 0.4, 0.8}) g.points.push_back({10.0 + dx, 10.0});
    g.points.push_back({50.0, 50.0});
    g.points.push_back({54.0, 54.0});
    g.points.push_back({58.0, 58.0});
    g.rects = {Box::closed({49, 49}, {59, 59}), Box::closed({-1, -1}, {12, 12})};
    const Params p{2, 1, 0.3};
    const auto bf = brute_force_cso(g, p);
    CHECK(bf.solution.outliers == std::vector<int>{0});
    TriSolution sol = solve_gcso(g, p);
    CHECK(std::count(sol.outliers.begin(), sol.outliers.end(), 0) == 1);
    CHECK(sol.radius <= (2 + p.eps) * (1 + p.eps) * (1 + p.eps) * bf.opt_radius);
}

TEST_CASE("solve_gcso: fuzzed tri-criteria bounds against the materialized brute force") {
    testsup::Rng rng(2025);
    for (int trial = 0; trial < 14; ++trial) {
        const int d = 1 + trial % 3;
        const int n = 8 + rng.below(18);
        const int m = 2 + rng.below(4);
        auto g = testsup::random_geometric(rng, n, m, d);
        const Params p{1 + rng.below(2), 1 + rng.below(2), 0.2};
        const int f = g.frequency();
        TriSolution sol = solve_gcso(g, p);
        auto rep = validate_solution(g, sol, p, BoundsClaim{2.0 + p.eps, 2.0 * f, 99});
        CHECK(rep.ok());
        const double opt = brute_force_cso(g, p).opt_radius;
        CHECK(rep.radius <= (2 + p.eps) * (1 + p.eps) * (1 + p.eps) * opt + 1e-12);
        CHECK(static_cast<double>(sol.centers.size()) <= (2 + p.eps) * p.k);
        CHECK(static_cast<int>(sol.outliers.size()) <= 2 * f * p.z);
        // agreement with the general-metric solver on the induced set system
        TriSolution cso = solve_cso(g.to_general(), p);
        CHECK(cso.radius <= 2.0 * opt);
    }
}

TEST_CASE("dense-ball index: incremental bookkeeping equals full rebuild after each deletion") {
    testsup::Rng rng(404);
    const int n = 200;
    auto g = testsup::random_disjoint_geometric(rng, n, 5, 2);
    std::vector<int> rect_of(static_cast<std::size_t>(n), -1);
    for (int i = 0; i < n; ++i) rect_of[static_cast<std::size_t>(i)] = g.rects_containing(i).front();
    const double probe_r = 1.2;

    std::vector<char> alive(static_cast<std::size_t>(n), 1);
    BbdTree tree(g.points, 0.15);
    DenseBallIndex inc(tree, g.points, rect_of, alive, probe_r);

    for (int step = 0; step < 25; ++step) {
        int victim = rng.below(n);
        while (!alive[static_cast<std::size_t>(victim)]) victim = rng.below(n);
        inc.remove_point(victim);
        alive[static_cast<std::size_t>(victim)] = 0;

        BbdTree fresh(g.points, 0.15);
        DenseBallIndex rebuilt(fresh, g.points, rect_of, alive, probe_r);
        for (int i = 0; i < n; ++i) {
            if (!alive[static_cast<std::size_t>(i)]) continue;
            CHECK(inc.touched_count(i) == rebuilt.touched_count(i));
        }
    }
}

TEST_CASE("solve_gcso_disjoint: identity coreset reproduces solve_gcso exactly") {
    GeometricInstance g;
    g.points = {{0.0, 0.0}, {9.0, 9.0}, {5.0, 1.0}};
    for (const auto& pt : g.points) g.rects.push_back(Box::closed(pt, pt));
    // eps slices align: 0.25/5 == 0.30/6
    TriSolution plain = solve_gcso(g, Params{1, 3, 0.25});
    TriSolution core = solve_gcso_disjoint(g, Params{1, 3, 0.30});
    CHECK(plain.centers == core.centers);
    CHECK(plain.outliers == core.outliers);
    CHECK(plain.radius == core.radius);
}

TEST_CASE("solve_gcso_disjoint: fuzzed bounds against brute force") {
    testsup::Rng rng(606);
    for (int trial = 0; trial < 12; ++trial) {
        const int d = 1 + trial % 2;
        const int n = 7 + rng.below(10);
        const int m = 2 + rng.below(3);
        auto g = testsup::random_disjoint_geometric(rng, n, m, d);
        const Params p{1 + rng.below(2), 1 + rng.below(2), 0.25};
        TriSolution sol = solve_gcso_disjoint(g, p);
        auto rep = validate_solution(g, sol, p, BoundsClaim{2.0 + p.eps, 2.0, 99});
        CHECK(rep.ok());
        const double opt = brute_force_cso(g, p).opt_radius;
        CHECK(rep.radius <= factors::gcso_disjoint_cost_factor(p.eps) * opt + 1e-12);
        CHECK(static_cast<int>(sol.outliers.size()) <= 2 * p.z);
        CHECK(static_cast<double>(sol.centers.size()) <= (2 + p.eps) * p.k);
    }
}

TEST_CASE("solve_gcso_disjoint: rejects overlapping rectangles") {
    GeometricInstance g;
    g.points = {{0.0}, {1.0}};
    g.rects = {Box::closed({-1.0}, {2.0}), Box::closed({0.5}, {3.0})};
    CHECK_THROWS_AS(solve_gcso_disjoint(g, Params{1, 1, 0.2}), InstanceError);
}
