#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "setout/generators.hpp"
#include "setout/io.hpp"
#include "setout/metric_core.hpp"
#include "setout/relational.hpp"

using namespace setout;

TEST_CASE("generators: fixed seed gives byte-identical instances") {
    ClusterGenOptions opt;
    opt.seed = 7;
    const std::string a = dump_instance(gen_clustered_general(opt));
    const std::string b = dump_instance(gen_clustered_general(opt));
    CHECK(a == b);
    const std::string c = dump_instance(gen_clustered_geometric(opt));
    const std::string d = dump_instance(gen_clustered_geometric(opt));
    CHECK(c == d);
}

TEST_CASE("generators: outputs pass load validation") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        ClusterGenOptions opt;
        opt.seed = seed;
        opt.max_f = 1 + static_cast<int>(seed % 3);
        CHECK_NOTHROW(parse_instance(dump_instance(gen_clustered_general(opt))));
        CHECK_NOTHROW(parse_instance(dump_instance(gen_clustered_geometric(opt))));
        SetCoverGenOptions sopt;
        sopt.seed = seed;
        CHECK_NOTHROW(parse_instance(dump_instance(gen_setcover_instance(sopt))));
    }
}

TEST_CASE("generators: planted sets are the brute-force optimum on most seeds") {
    int hits = 0;
    const int runs = 20;
    for (int run = 0; run < runs; ++run) {
        ClusterGenOptions opt;
        opt.seed = 100 + run;
        opt.clusters = 2;
        opt.points_per_cluster = 3;
        opt.planted_sets = 1;
        opt.junk_per_set = 2;
        opt.cover_sets = 2;
        auto g = gen_clustered_general(opt);
        auto bf = brute_force_cso(g, Params{2, 1, 0.2});
        // the planted junk set is the last one
        const int planted = g.m() - 1;
        bool chose = false;
        for (int j : bf.solution.outliers) chose |= (j == planted);
        hits += chose ? 1 : 0;
    }
    CHECK(hits >= 16);  // >= 80%
}

TEST_CASE("generators: relational schemas are always acyclic") {
    for (std::uint64_t seed = 1; seed <= 12; ++seed) {
        RelationalGenOptions opt;
        opt.seed = seed;
        opt.relations = 1 + static_cast<int>(seed % 3);
        auto db = gen_relational(opt);
        CHECK(build_join_tree(db).has_value());
        CHECK(db.total_tuples() >= opt.tuples_per_relation);
    }
}
