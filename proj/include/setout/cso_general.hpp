#pragma once

#include <optional>

#include "setout/constants.hpp"
#include "setout/instance.hpp"
#include "setout/metric_core.hpp"
#include "setout/mwu.hpp"

namespace setout {

// LP1 variable vector: center mass per element and outlier mass per set,
// with the exact integer backing from the MWU averaging.
struct FractionalAssignment {
    std::vector<double> x;
    std::vector<double> y;
    MwuSolution exact;
};

struct Lp1Outcome {
    bool feasible = false;
    FractionalAssignment frac;
    MwuOutcome raw;
};

struct CsoOptions {
    double eps_lp = factors::kDefaultEpsLp;
    double budget_c = kMwuBudgetConstant;
};

// Membership lists of LP1 at radius cover_r: ball columns and set columns
// per coverage constraint. Shared with the coreset pipeline (LP2 uses the
// same structure at radius 10r).
DenseOracle make_lp_oracle(const GeneralInstance& inst, double cover_r);

// Decides LP1 feasibility at radius r with the in-repo MWU engine. One-sided:
// Infeasible comes with a dual witness, so r >= rho* never reports Infeasible.
Lp1Outcome lp1_feasible(const GeneralInstance& inst, double r, const Params& p,
                        const CsoOptions& opt = {});

// Threshold y_j >= 1/(2f), then greedy 2r-ball peeling of the active
// elements, lowest index first.
TriSolution round_lp1(const GeneralInstance& inst, double r, const FractionalAssignment& frac,
                      const Params& p, const CsoOptions& opt = {});

// Shared rounding core: peel_r is the deletion radius (2r for LP1, 20r for
// LP2 on coresets).
TriSolution round_fractional(const GeneralInstance& inst, const FractionalAssignment& frac,
                             double peel_r, const Params& p, const CsoOptions& opt);

// Binary search over all pairwise distances; returns the rounded solution of
// the smallest feasible radius. (2, 2f, 2)-approximation up to the LP slack
// inflation on |C|.
TriSolution solve_cso(const GeneralInstance& inst, const Params& p, const CsoOptions& opt = {});

}  // namespace setout
