#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <numeric>

#include "setout/instance.hpp"
#include "setout/io.hpp"
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

}  // namespace

TEST_CASE("validate_solution: single point self-covers") {
    auto g = line_instance({0.0}, {{0}});
    Params p{1, 1, 0.2};
    TriSolution sol = make_solution(g, {0}, {}, BoundsClaim{1, 1, 1});
    auto rep = validate_solution(g, sol, p, BoundsClaim{1, 1, 1});
    CHECK(rep.ok());
    CHECK(rep.radius == 0.0);
}

TEST_CASE("validate_solution: center inside chosen outlier union is invalid") {
    auto g = line_instance({0.0, 1.0}, {{0, 1}});
    Params p{1, 1, 0.2};
    TriSolution sol;
    sol.centers = {0};
    sol.outliers = {0};
    auto rep = validate_solution(g, sol, p, BoundsClaim{1, 1, 1});
    CHECK_FALSE(rep.disjoint_ok);
    CHECK_FALSE(rep.ok());
}

TEST_CASE("validate_solution: 4 collinear points, outlier far pair") {
    // Points at 0,1,10,11; C={0}, H={set {2,3}}: survivors {0,1}, radius 1
    // by exhaustive max-min scan.
    auto g = line_instance({0.0, 1.0, 10.0, 11.0}, {{2, 3}, {0, 1}});
    Params p{1, 1, 0.2};
    TriSolution sol = make_solution(g, {0}, {0}, BoundsClaim{1, 1, 1});
    auto rep = validate_solution(g, sol, p, BoundsClaim{1, 1, 1});
    CHECK(rep.ok());
    CHECK(rep.radius == 1.0);
}

TEST_CASE("validate_solution: index out of range reported as structural error") {
    auto g = line_instance({0.0, 1.0}, {{0, 1}});
    TriSolution sol;
    sol.centers = {5};
    auto rep = validate_solution(g, sol, Params{1, 1, 0.2}, BoundsClaim{1, 1, 1});
    CHECK_FALSE(rep.indices_ok);
}

TEST_CASE("clustering_cost basics") {
    auto g = line_instance({0.0, 3.0, 7.0}, {{0, 1, 2}});
    SUBCASE("all others excluded -> 0") {
        std::vector<bool> excl{false, true, true};
        CHECK(clustering_cost(g, {0}, excl) == 0.0);
    }
    SUBCASE("centers={3}, none excluded -> 4") {
        CHECK(clustering_cost(g, {1}, std::vector<bool>(3, false)) == 4.0);
    }
    SUBCASE("empty centers with survivors -> infinite radius, no crash") {
        CHECK(clustering_cost(g, {}, std::vector<bool>(3, false)) == inf());
    }
    SUBCASE("everything excluded -> 0 even with empty centers") {
        CHECK(clustering_cost(g, {}, std::vector<bool>(3, true)) == 0.0);
    }
}

TEST_CASE("clustering_cost matches brute double loop on random instances") {
    testsup::Rng rng(42);
    for (int trial = 0; trial < 30; ++trial) {
        auto g = testsup::random_general(rng, 8, 3, 2);
        std::vector<int> centers;
        for (int i = 0; i < g.n; ++i)
            if (rng.below(3) == 0) centers.push_back(i);
        if (centers.empty()) centers.push_back(0);
        std::vector<bool> excl(static_cast<std::size_t>(g.n), false);
        for (int i = 0; i < g.n; ++i) excl[static_cast<std::size_t>(i)] = rng.below(4) == 0;

        double expect = 0.0;
        bool any = false;
        for (int i = 0; i < g.n; ++i) {
            if (excl[static_cast<std::size_t>(i)]) continue;
            any = true;
            double best = inf();
            for (int c : centers) best = std::min(best, g.dist(i, c));
            expect = std::max(expect, best);
        }
        if (!any) expect = 0.0;
        CHECK(clustering_cost(g, centers, excl) == expect);
    }
}

TEST_CASE("clustering_cost invariant under element relabeling") {
    testsup::Rng rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        auto g = testsup::random_general(rng, 9, 3, 2);
        std::vector<int> perm(static_cast<std::size_t>(g.n));
        std::iota(perm.begin(), perm.end(), 0);
        for (int i = g.n - 1; i > 0; --i) std::swap(perm[static_cast<std::size_t>(i)], perm[static_cast<std::size_t>(rng.below(i + 1))]);

        GeneralInstance h = g;
        for (int i = 0; i < g.n; ++i)
            h.points[static_cast<std::size_t>(perm[static_cast<std::size_t>(i)])] = g.points[static_cast<std::size_t>(i)];
        for (auto& s : h.sets)
            for (auto& e : s) e = perm[static_cast<std::size_t>(e)];
        for (auto& s : h.sets) std::sort(s.begin(), s.end());
        h.membership.assign(static_cast<std::size_t>(h.n), {});
        for (int j = 0; j < h.m(); ++j)
            for (int i : h.sets[static_cast<std::size_t>(j)]) h.membership[static_cast<std::size_t>(i)].push_back(j);

        std::vector<int> centers{0, g.n / 2};
        std::vector<int> centers_p;
        for (int c : centers) centers_p.push_back(perm[static_cast<std::size_t>(c)]);
        std::vector<bool> none_g(static_cast<std::size_t>(g.n), false), none_h = none_g;
        CHECK(clustering_cost(g, centers, none_g) == clustering_cost(h, centers_p, none_h));
    }
}

TEST_CASE("load: minimal geometric file parses") {
    const char* text = R"({"kind":"geometric","n":1,"d":2,"points":[[0.5,0.5]],
                            "rects":[{"lo":[0,0],"hi":[1,1]}]})";
    auto inst = parse_instance(text);
    REQUIRE(std::holds_alternative<GeometricInstance>(inst));
    CHECK(std::get<GeometricInstance>(inst).n() == 1);
}

TEST_CASE("load: point outside every rectangle -> CoverageError") {
    const char* text = R"({"kind":"geometric","n":1,"d":1,"points":[[5.0]],
                            "rects":[{"lo":[0],"hi":[1]}]})";
    CHECK_THROWS_AS(parse_instance(text), CoverageError);
}

TEST_CASE("load: element in no set -> CoverageError") {
    const char* text = R"({"kind":"general","n":2,"dist_matrix":[[0,1],[1,0]],"sets":[[0]]})";
    CHECK_THROWS_AS(parse_instance(text), CoverageError);
}

TEST_CASE("load: triangle violation names the triple") {
    const char* text = R"({"kind":"general","n":3,
        "dist_matrix":[[0,1,9],[1,0,1],[9,1,0]],"sets":[[0,1,2]]})";
    try {
        parse_instance(text);
        FAIL("expected MetricError");
    } catch (const MetricError& e) {
        const std::string msg = e.what();
        CHECK(msg.find("triangle") != std::string::npos);
        CHECK(msg.find("(") != std::string::npos);
    }
}

TEST_CASE("load: infinity endpoints round-trip as tagged values") {
    const char* text = R"({"kind":"geometric","n":1,"d":2,"points":[[0,0]],
        "rects":[{"lo":["-inf",0],"hi":["+inf",0]}]})";
    auto inst = parse_instance(text);
    const auto& g = std::get<GeometricInstance>(inst);
    CHECK(g.rects[0].iv[0].lo_inf);
    CHECK(g.rects[0].iv[0].hi_inf);
    CHECK_FALSE(g.rects[0].iv[1].lo_inf);
    CHECK(g.rects[0].iv[1].lo == 0.0);
    CHECK(g.rects[0].contains({123456.0, 0.0}));
    CHECK_FALSE(g.rects[0].contains({0.0, 0.1}));
}

TEST_CASE("save/load round trip is the identity on canonical instances") {
    testsup::Rng rng(1234);
    for (int trial = 0; trial < 100; ++trial) {
        Instance inst;
        if (trial % 2 == 0) {
            auto g = testsup::random_general(rng, 3 + rng.below(8), 1 + rng.below(4), 1 + rng.below(3));
            if (trial % 4 == 0) {
                // Re-back by an explicit matrix to cover the matrix path.
                GeneralInstance m;
                m.n = g.n;
                m.metric = GeneralInstance::Metric::Matrix;
                m.dist_matrix.assign(static_cast<std::size_t>(g.n), std::vector<double>(static_cast<std::size_t>(g.n), 0));
                for (int i = 0; i < g.n; ++i)
                    for (int j = 0; j < g.n; ++j) m.dist_matrix[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = g.dist(i, j);
                m.sets = g.sets;
                m.membership = g.membership;
                inst = m;
            } else {
                inst = g;
            }
        } else {
            inst = testsup::random_geometric(rng, 3 + rng.below(8), 1 + rng.below(4), 1 + rng.below(3));
        }
        const std::string once = dump_instance(inst);
        const std::string twice = dump_instance(parse_instance(once));
        CHECK(once == twice);
    }
}

TEST_CASE("solution JSON round trip") {
    TriSolution s;
    s.centers = {3, 1};
    s.outliers = {0};
    s.radius = 2.5;
    auto t = parse_solution(dump_solution(s));
    CHECK(t.centers == s.centers);
    CHECK(t.outliers == s.outliers);
    CHECK(t.radius == s.radius);
}
