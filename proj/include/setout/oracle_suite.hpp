#pragma once

#include "setout/relational.hpp"

namespace setout {

// Exhaustive references for the relational solvers. Exponential; desk scale
// only. These stay independent of the solver code paths they check.

struct KcwoOpt {
    double radius = 0.0;
    std::vector<int> centers;
    std::vector<int> outliers;
};

// k-center with z point outliers over explicit points, centers from the set:
// for every center subset the z farthest points are dropped.
KcwoOpt exhaustive_kcenter_outliers(const std::vector<Point>& pts, int k, int z);

// plain exact k-center (z = 0)
double exhaustive_kcenter(const std::vector<Point>& pts, int k);

// RCTO1 optimum: enumerate outlier subsets of relation 0 up to size z, exact
// k-center on each surviving join.
double exhaustive_rcto1_opt(const RelationalDatabase& db, const JoinTree& tree, int k, int z,
                            long long cap = 2'000'000);

// RCTO optimum: outlier subsets range over all input tuples.
double exhaustive_rcto_opt(const RelationalDatabase& db, const JoinTree& tree, int k, int z,
                           long long cap = 2'000'000);

}  // namespace setout
