#pragma once

#include <cstdint>

#include "setout/instance.hpp"
#include "setout/relational.hpp"

namespace setout {

// Seeded instance generators. Identical seeds give byte-identical instances;
// all randomness flows through SplitRng.

struct ClusterGenOptions {
    std::uint64_t seed = 1;
    int clusters = 2;        // well-separated core clusters
    int points_per_cluster = 4;
    int planted_sets = 1;    // far junk groups, one outlier set each
    int junk_per_set = 2;
    int cover_sets = 2;      // additional sets partitioning the core
    int dim = 2;
    int max_f = 1;           // extra memberships on core points (general only)
    double cluster_radius = 0.5;
    double junk_offset = 60.0;
};

GeneralInstance gen_clustered_general(const ClusterGenOptions& opt);
GeometricInstance gen_clustered_geometric(const ClusterGenOptions& opt);

struct SetCoverGenOptions {
    std::uint64_t seed = 1;
    int universe = 5;
    int sets = 4;
    int k = 2;
};

GeneralInstance gen_setcover_instance(const SetCoverGenOptions& opt);

struct RelationalGenOptions {
    std::uint64_t seed = 1;
    int relations = 2;        // chain schema R_i(A_{i-1}, A_i)
    int tuples_per_relation = 8;
    int key_pool = 3;         // join-key values; smaller pools join more
    int planted_bad = 1;      // tuples whose join results land far away
    double value_range = 10.0;
    double bad_offset = 80.0;
};

RelationalDatabase gen_relational(const RelationalGenOptions& opt);

}  // namespace setout
