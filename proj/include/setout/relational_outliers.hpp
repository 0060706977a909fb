#pragma once

#include <optional>

#include "setout/constants.hpp"
#include "setout/relational.hpp"

namespace setout {

// A tuple of the input database, addressed by (relation, row).
struct TupleRef {
    int relation = -1;
    int row = -1;
    auto operator<=>(const TupleRef&) const = default;
};

// The degenerate hyper-rectangle selecting the join results built from one
// tuple: point intervals on the relation's attributes, open elsewhere.
Box tuple_rectangle(const RelationalDatabase& db, const TupleRef& t);

struct RelSolution {
    std::vector<Point> centers;       // S, join results
    std::vector<TupleRef> outliers;   // T (tuple outliers); empty for RCRO
    std::vector<Point> result_outliers;  // T for RCRO (join results)
    double radius = 0.0;              // recomputed over Q(I minus T) or Q minus T
};

struct RelOptions {
    double eps = 0.2;
    std::uint64_t seed = 1;
    long long materialize_cap = 512;   // RCRO: run directly on Q when |Q| <= cap
    double tau_multiplier = 4.0;       // RCRO sample-size constant
    double trial_multiplier = 1.0;     // RCTO trial-count constant
    long long trial_cap = 1 << 22;     // refuse when 2^(gk+z) exceeds this
    double budget_c = 8.0;
};

struct TrialCapExceeded : InstanceError {
    using InstanceError::InstanceError;
};

// (1, 1+eps, 3+eps) result-outlier clustering: greedy max-coverage peeling
// with BBD counts over Q itself (small joins) or a uniform sample.
RelSolution solve_rcro(const RelationalDatabase& db, const JoinTree& tree, int k, int z,
                       const RelOptions& opt = {});

// (2+eps, 2, O(1)) tuple outliers restricted to relation 0: per-tuple
// rel_cluster premarking, then the disjoint GCSO pipeline on the union of
// returned centers with the tuple rectangles.
RelSolution solve_rcto1(const RelationalDatabase& db, const JoinTree& tree, int k, int z,
                        const RelOptions& opt = {});

// One witness extraction event of the FPT algorithm, kept for replay.
struct WitnessEvent {
    Point witness;
    double cube_radius = 0.0;        // h-hat at extraction time
    std::vector<Point> cube_centers; // S1 at extraction time
};

struct PartitionTrial {
    int index = 0;
    std::uint64_t seed = 0;
    std::vector<std::vector<char>> in_first;  // I1 membership per relation/row
    std::vector<Point> centers;               // S_l
    std::vector<TupleRef> outliers;           // T_l
    double radius = -1.0;                     // r_l (h-hat of the last valid step), -1 = invalid trial
    std::vector<WitnessEvent> witnesses;
};

struct RctoResult {
    RelSolution solution;
    std::vector<PartitionTrial> trials;
    int best_trial = -1;
};

// (1, g, O(1)) FPT tuple-outlier clustering over random I1/I2 partitions.
RctoResult solve_rcto(const RelationalDatabase& db, const JoinTree& tree, int k, int z,
                      const RelOptions& opt = {});

}  // namespace setout
