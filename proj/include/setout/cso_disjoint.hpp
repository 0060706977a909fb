#pragma once

#include <optional>

#include "setout/cso_general.hpp"
#include "setout/instance.hpp"

namespace setout {

// One dense-ball extraction: the probe element, the removed 15r-ball and the
// touched-set count that triggered it (kept for trace replay).
struct ExtractedBall {
    int center = -1;
    std::vector<int> members;
    int touched_sets = 0;
};

// Coreset bookkeeping across the two pruning phases of the f=1 pipeline.
struct CoresetState {
    double r = 0.0;
    std::vector<char> alive;                // element in current P-bar / P'
    std::vector<int> forced_outliers;       // H0: set ids evicted in phase 1
    std::vector<ExtractedBall> extracted;   // X
    int z_bar = 0;                          // z - |H0|
    int k_prime = 0;                        // k - |X|

    std::vector<int> alive_elements() const {
        std::vector<int> out;
        for (int i = 0; i < static_cast<int>(alive.size()); ++i)
            if (alive[static_cast<std::size_t>(i)]) out.push_back(i);
        return out;
    }
    std::vector<int> surviving_sets(const GeneralInstance& inst) const;
};

// Per-set Gonzalez pruning: evict sets that k balls of radius r cannot cover
// (charging z), keep only the Gonzalez centers elsewhere, then 2r-dedup
// within each kept set. nullopt = skip this radius (z exhausted).
std::optional<CoresetState> coreset_phase1(const GeneralInstance& inst, double r, const Params& p);

// Dense-ball extraction: ascending scan; an element whose 10r-ball touches
// more than z-bar sets costs one center and removes its 15r-ball. nullopt =
// skip (k exhausted or the |H'| guard fired).
std::optional<CoresetState> coreset_phase2(const GeneralInstance& inst, CoresetState state, const Params& p);

// LP2 on the coreset (coverage 10r, peel 20r) and reassembly H = H-hat + H0,
// C = C-hat + one representative per extracted ball outside the chosen
// outliers. nullopt when LP2 is infeasible at this radius.
std::optional<TriSolution> solve_lp2_and_reassemble(const GeneralInstance& inst, const CoresetState& state,
                                                    const Params& p, const CsoOptions& opt = {});

// Full (2, 2, O(1)) driver for disjoint set families.
TriSolution solve_cso_disjoint(const GeneralInstance& inst, const Params& p, const CsoOptions& opt = {});

}  // namespace setout
