#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "setout/generators.hpp"
#include "setout/oracle_suite.hpp"
#include "setout/relational_outliers.hpp"
#include "test_support.hpp"

using namespace setout;

namespace {

RelationalDatabase chain_db(std::vector<std::vector<double>> r1, std::vector<std::vector<double>> r2) {
    RelationalDatabase db;
    db.attr_names = {"A0", "A1", "A2"};
    db.relations.resize(2);
    db.relations[0].name = "R1";
    db.relations[0].attrs = {0, 1};
    db.relations[0].tuples = std::move(r1);
    db.relations[1].name = "R2";
    db.relations[1].attrs = {1, 2};
    db.relations[1].tuples = std::move(r2);
    return db;
}

double join_radius(const RelationalDatabase& db, const JoinTree& tree, const std::vector<TupleRef>& removed,
                   const std::vector<Point>& centers) {
    std::vector<std::vector<char>> mask(static_cast<std::size_t>(db.num_relations()));
    for (int i = 0; i < db.num_relations(); ++i)
        mask[static_cast<std::size_t>(i)].assign(db.relations[static_cast<std::size_t>(i)].tuples.size(), 1);
    for (const auto& t : removed) mask[static_cast<std::size_t>(t.relation)][static_cast<std::size_t>(t.row)] = 0;
    JoinEvaluator ev(db, tree, Box::whole(db.num_attrs()), &mask);
    if (ev.count() == 0) return 0.0;
    if (centers.empty()) return inf();
    double worst = 0;
    ev.enumerate([&](const Point& q) {
        double best = inf();
        for (const auto& s : centers) best = std::min(best, dist_l2(q, s));
        worst = std::max(worst, best);
        return true;
    });
    return worst;
}

bool in_join(const RelationalDatabase& db, const JoinTree& tree, const std::vector<TupleRef>& removed,
             const Point& s) {
    std::vector<std::vector<char>> mask(static_cast<std::size_t>(db.num_relations()));
    for (int i = 0; i < db.num_relations(); ++i)
        mask[static_cast<std::size_t>(i)].assign(db.relations[static_cast<std::size_t>(i)].tuples.size(), 1);
    for (const auto& t : removed) mask[static_cast<std::size_t>(t.relation)][static_cast<std::size_t>(t.row)] = 0;
    Box pb(std::vector<Interval>{});
    for (double v : s) pb.iv.push_back(Interval::point(v));
    return JoinEvaluator(db, tree, pb, &mask).count() == 1;
}

}  // namespace

TEST_CASE("tuple_rectangle: point intervals on own attributes, open elsewhere") {
    auto db = chain_db({{1.0, 2.0}}, {{2.0, 5.0}});
    Box b = tuple_rectangle(db, TupleRef{0, 0});
    CHECK(b.iv[0].lo == 1.0);
    CHECK(b.iv[0].hi == 1.0);
    CHECK(b.iv[1].lo == 2.0);
    CHECK(b.iv[2].lo_inf);
    CHECK(b.iv[2].hi_inf);
    CHECK(b.contains({1.0, 2.0, 123.0}));
    CHECK_FALSE(b.contains({1.5, 2.0, 0.0}));
}

TEST_CASE("tuple rectangles of distinct tuples in one relation are disjoint") {
    auto db = chain_db({{1.0, 2.0}, {1.0, 3.0}, {4.0, 2.0}}, {{2.0, 5.0}});
    for (int a = 0; a < 3; ++a)
        for (int b = a + 1; b < 3; ++b) {
            Box ra = tuple_rectangle(db, TupleRef{0, a});
            Box rb = tuple_rectangle(db, TupleRef{0, b});
            // distinct tuples differ on some shared attribute
            bool separated = false;
            for (int ax = 0; ax < 3; ++ax) {
                const auto& ia = ra.iv[static_cast<std::size_t>(ax)];
                const auto& ib = rb.iv[static_cast<std::size_t>(ax)];
                if (!ia.lo_inf && !ib.lo_inf && ia.lo != ib.lo) separated = true;
            }
            CHECK(separated);
        }
}

TEST_CASE("solve_rcro: z covering everything gives radius 0") {
    auto db = chain_db({{1.0, 0.0}, {2.0, 0.0}}, {{0.0, 1.0}, {0.0, 2.0}});
    auto tree = build_join_tree(db);
    REQUIRE(tree.has_value());
    auto sol = solve_rcro(db, *tree, 1, 10);
    CHECK(sol.radius == 0.0);
    CHECK(sol.result_outliers.size() == 4);
}

TEST_CASE("solve_rcro: k = |Q| - z gives radius 0") {
    auto db = chain_db({{1.0, 0.0}, {50.0, 1.0}, {90.0, 2.0}}, {{0.0, 1.0}, {1.0, 2.0}, {2.0, 3.0}});
    auto tree = build_join_tree(db);
    REQUIRE(tree.has_value());
    REQUIRE(JoinEvaluator(db, *tree).count() == 3);
    auto sol = solve_rcro(db, *tree, 2, 1);
    CHECK(sol.radius == 0.0);
}

TEST_CASE("solve_rcro: planted outliers removed across seeds (materialized path)") {
    testsup::Rng rng(11);
    int success = 0;
    const int runs = 12;
    for (int run = 0; run < runs; ++run) {
        RelationalGenOptions gopt;
        gopt.seed = 1000 + run;
        gopt.relations = 2;
        gopt.tuples_per_relation = 5;
        gopt.key_pool = 2;
        gopt.planted_bad = 1;
        auto db = gen_relational(gopt);
        auto tree = build_join_tree(db);
        REQUIRE(tree.has_value());
        JoinEvaluator ev(db, *tree);
        if (ev.count() < 3 || ev.count() > 40) continue;
        const int k = 2;
        const int z = std::max(1, static_cast<int>(ev.count() / 8));
        RelOptions opt;
        opt.eps = 0.3;
        opt.seed = 77 + run;
        auto sol = solve_rcro(db, *tree, k, z, opt);
        auto pts = ev.materialize(64);
        auto opt_ref = exhaustive_kcenter_outliers(pts, k, z);
        const bool ok = sol.radius <= (3.0 + 0.3) * opt_ref.radius + 1e-9 &&
                        static_cast<double>(sol.result_outliers.size()) <= (1.0 + 0.3) * (1.0 + 0.3) * z;
        success += ok ? 1 : 0;
    }
    CHECK(success >= 9);
}

TEST_CASE("solve_rcro: sampled path stays within factor bounds") {
    RelationalGenOptions gopt;
    gopt.seed = 42;
    gopt.relations = 2;
    gopt.tuples_per_relation = 24;
    gopt.key_pool = 2;  // dense join, |Q| in the hundreds
    gopt.planted_bad = 2;
    auto db = gen_relational(gopt);
    auto tree = build_join_tree(db);
    REQUIRE(tree.has_value());
    JoinEvaluator ev(db, *tree);
    REQUIRE(ev.count() > 64);
    const int k = 2;
    const int z = static_cast<int>(ev.count() / 10);
    RelOptions opt;
    opt.eps = 0.3;
    opt.seed = 5;
    opt.materialize_cap = 64;  // force sampling
    opt.tau_multiplier = 1.0;
    auto sol = solve_rcro(db, *tree, k, z, opt);
    CHECK(static_cast<int>(sol.centers.size()) <= k);
    auto pts = ev.materialize(100000);
    auto ref = exhaustive_kcenter_outliers(pts, k, z);
    CHECK(sol.radius <= (3.0 + 0.3) * ref.radius + 1e-9);
    CHECK(static_cast<double>(sol.result_outliers.size()) <= (1 + 0.3) * (1 + 0.3) * z);
}

TEST_CASE("solve_rcto1: tight per-tuple clusters with z=0 reduce to relational k-center") {
    auto db = chain_db({{0.0, 0.0}, {10.0, 1.0}}, {{0.0, 0.1}, {0.0, 0.2}, {1.0, 10.1}, {1.0, 10.2}});
    auto tree = build_join_tree(db);
    REQUIRE(tree.has_value());
    auto sol = solve_rcto1(db, *tree, 2, 0);
    CHECK(sol.outliers.empty());
    CHECK(sol.radius <= factors::rcto1_cost_factor(3, 0.2) * exhaustive_rcto1_opt(db, *tree, 2, 0));
}

TEST_CASE("solve_rcto1: a huge-spread tuple becomes the outlier") {
    // tuple (0,*) joins to a tight cluster, tuple (9,*) to a huge spread
    auto db = chain_db({{0.0, 0.0}, {9.0, 1.0}},
                       {{0.0, 0.1}, {0.0, 0.3}, {1.0, 50.0}, {1.0, 500.0}, {1.0, 5000.0}});
    auto tree = build_join_tree(db);
    REQUIRE(tree.has_value());
    auto sol = solve_rcto1(db, *tree, 1, 1);
    REQUIRE(sol.outliers.size() == 1);
    CHECK(sol.outliers[0].relation == 0);
    CHECK(sol.outliers[0].row == 1);
    const double opt = exhaustive_rcto1_opt(db, *tree, 1, 1);
    CHECK(sol.radius <= factors::rcto1_cost_factor(3, 0.2) * opt + 1e-9);
}

TEST_CASE("solve_rcto1: fuzzed bounds against the exhaustive oracle") {
    testsup::Rng rng(314);
    int tried = 0;
    for (int trial = 0; trial < 14 && tried < 8; ++trial) {
        RelationalGenOptions gopt;
        gopt.seed = 9000 + trial;
        gopt.relations = 2;
        gopt.tuples_per_relation = 4 + trial % 3;
        gopt.key_pool = 2;
        gopt.planted_bad = trial % 2;
        auto db = gen_relational(gopt);
        if (static_cast<int>(db.relations[0].tuples.size()) > 6) continue;
        auto tree = build_join_tree(db);
        REQUIRE(tree.has_value());
        JoinEvaluator ev(db, *tree);
        if (ev.count() < 2 || ev.count() > 60) continue;
        ++tried;
        const int k = 1 + rng.below(2), z = 1 + rng.below(2);
        RelOptions opt;
        opt.eps = 0.25;
        auto sol = solve_rcto1(db, *tree, k, z, opt);
        CHECK(static_cast<int>(sol.outliers.size()) <= 2 * z);
        CHECK(static_cast<double>(sol.centers.size()) <= (2 + opt.eps) * k);
        for (const auto& t : sol.outliers) CHECK(t.relation == 0);
        for (const auto& s : sol.centers) CHECK(in_join(db, *tree, sol.outliers, s));
        const double ref = exhaustive_rcto1_opt(db, *tree, k, z);
        CHECK(sol.radius <= factors::rcto1_cost_factor(db.num_attrs(), opt.eps) * ref + 1e-9);
        CHECK(join_radius(db, *tree, sol.outliers, sol.centers) == sol.radius);
    }
    CHECK(tried >= 4);
}

TEST_CASE("solve_rcto: z covering every tuple empties the database") {
    auto db = chain_db({{0.0, 0.0}}, {{0.0, 1.0}});
    auto tree = build_join_tree(db);
    REQUIRE(tree.has_value());
    auto res = solve_rcto(db, *tree, 1, 5);
    CHECK(res.solution.radius == 0.0);
    CHECK(res.solution.outliers.size() == 2);
}

TEST_CASE("solve_rcto: trial cap refusal carries an estimate") {
    auto db = chain_db({{0.0, 0.0}}, {{0.0, 1.0}});
    auto tree = build_join_tree(db);
    REQUIRE(tree.has_value());
    RelOptions opt;
    opt.trial_cap = 4;
    CHECK_THROWS_AS(solve_rcto(db, *tree, 1, 1, opt), TrialCapExceeded);
}

TEST_CASE("solve_rcto: one bad tuple producing all far results is removed") {
    // both R1 tuples join to the bad R2 tuple, so removing any single R1
    // tuple still leaves a far result; only the bad R2 tuple fixes the radius
    auto db = chain_db({{0.0, 0.0}, {1.0, 0.0}},
                       {{0.0, 1.0}, {0.0, 1.5}, {0.0, 80.0}});
    auto tree = build_join_tree(db);
    REQUIRE(tree.has_value());
    const double ref = exhaustive_rcto_opt(db, *tree, 1, 1);
    CHECK(ref > 1.0);  // the degenerate removals do not help here
    RelOptions opt;
    opt.eps = 0.2;
    opt.seed = 3;
    auto res = solve_rcto(db, *tree, 1, 1, opt);
    CHECK(static_cast<int>(res.solution.outliers.size()) <= 2);  // g*z
    bool bad_removed = false;
    for (const auto& t : res.solution.outliers) bad_removed |= (t.relation == 1 && t.row == 2);
    CHECK(bad_removed);
    CHECK(res.solution.radius <= factors::rcto_cost_factor(db.num_attrs()) * ref + 1e-9);
}

TEST_CASE("solve_rcto: fuzzed success rate with witness replay") {
    int success = 0, runs = 0;
    for (int inst = 0; inst < 3; ++inst) {
        RelationalGenOptions gopt;
        gopt.seed = 500 + inst;
        gopt.relations = 2;
        gopt.tuples_per_relation = 5;
        gopt.key_pool = 2;
        gopt.planted_bad = 1;
        auto db = gen_relational(gopt);
        auto tree = build_join_tree(db);
        REQUIRE(tree.has_value());
        JoinEvaluator ev(db, *tree);
        if (ev.count() < 2) continue;
        const int k = 1, z = 1;
        const double ref = exhaustive_rcto_opt(db, *tree, k, z);
        for (int seed = 0; seed < 5; ++seed) {
            ++runs;
            RelOptions opt;
            opt.eps = 0.2;
            opt.seed = 100 * inst + seed;
            auto res = solve_rcto(db, *tree, k, z, opt);
            const bool ok = res.solution.radius <= factors::rcto_cost_factor(db.num_attrs()) * ref + 1e-9 &&
                            static_cast<int>(res.solution.outliers.size()) <= db.num_relations() * z &&
                            static_cast<int>(res.solution.centers.size()) <= k;
            success += ok ? 1 : 0;
            // validity: S inside the reduced join
            for (const auto& s : res.solution.centers) CHECK(in_join(db, *tree, res.solution.outliers, s));
            // witness soundness: recorded witnesses lie strictly outside every cube
            if (res.best_trial >= 0) {
                for (const auto& evnt : res.trials[static_cast<std::size_t>(res.best_trial)].witnesses) {
                    double best = inf();
                    for (const auto& c : evnt.cube_centers) best = std::min(best, dist_linf(evnt.witness, c));
                    CHECK(best > evnt.cube_radius);
                }
            }
        }
    }
    REQUIRE(runs >= 10);
    CHECK(success * 10 >= runs * 9);  // >= 90%
}
