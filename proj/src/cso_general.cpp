#include "setout/cso_general.hpp"

#include <algorithm>
#include <cassert>

namespace setout {

DenseOracle make_lp_oracle(const GeneralInstance& inst, double cover_r) {
    std::vector<std::vector<int>> cover(static_cast<std::size_t>(inst.n));
    for (int i = 0; i < inst.n; ++i)
        for (int l = 0; l < inst.n; ++l)
            if (inst.dist(i, l) <= cover_r) cover[static_cast<std::size_t>(i)].push_back(l);
    return DenseOracle(std::move(cover), inst.membership, inst.n, inst.m());
}

Lp1Outcome lp1_feasible(const GeneralInstance& inst, double r, const Params& p, const CsoOptions& opt) {
    DenseOracle oracle = make_lp_oracle(inst, r);
    Lp1Outcome out;
    out.raw = mwu_solve(oracle, p.k, p.z, opt.eps_lp, opt.budget_c);
    out.feasible = out.raw.feasible;
    if (out.feasible) {
        out.frac.exact = out.raw.psi;
        out.frac.x.resize(static_cast<std::size_t>(inst.n));
        out.frac.y.resize(static_cast<std::size_t>(inst.m()));
        for (int i = 0; i < inst.n; ++i) out.frac.x[static_cast<std::size_t>(i)] = out.raw.psi.x(static_cast<std::size_t>(i));
        for (int j = 0; j < inst.m(); ++j) out.frac.y[static_cast<std::size_t>(j)] = out.raw.psi.y(static_cast<std::size_t>(j));
    }
    return out;
}

TriSolution round_fractional(const GeneralInstance& inst, const FractionalAssignment& frac, double peel_r,
                             const Params& p, const CsoOptions& opt) {
    const int f = std::max(1, inst.frequency());
    std::vector<int> H;
    for (int j = 0; j < inst.m(); ++j) {
        const bool take = frac.exact.rounds > 0
                              ? frac.exact.y_above_threshold(static_cast<std::size_t>(j), f)
                              : frac.y[static_cast<std::size_t>(j)] >= 1.0 / (2.0 * f);
        if (take) H.push_back(j);
    }
    std::vector<bool> active(static_cast<std::size_t>(inst.n), true);
    {
        const auto excluded = excluded_mask_general(inst, H);
        for (int i = 0; i < inst.n; ++i)
            if (excluded[static_cast<std::size_t>(i)]) active[static_cast<std::size_t>(i)] = false;
    }
    std::vector<int> C;
    for (int i = 0; i < inst.n; ++i) {
        if (!active[static_cast<std::size_t>(i)]) continue;
        C.push_back(i);
        for (int l = i; l < inst.n; ++l)
            if (active[static_cast<std::size_t>(l)] && inst.dist(i, l) <= peel_r)
                active[static_cast<std::size_t>(l)] = false;
    }
    BoundsClaim claim;
    claim.mu_centers = factors::center_bound(p.k, opt.eps_lp) / p.k;
    claim.mu_outliers = 2.0 * f;
    claim.mu_cost = 2.0;
    return make_solution(inst, std::move(C), std::move(H), claim);
}

TriSolution round_lp1(const GeneralInstance& inst, double r, const FractionalAssignment& frac, const Params& p,
                      const CsoOptions& opt) {
    return round_fractional(inst, frac, 2.0 * r, p, opt);
}

TriSolution solve_cso(const GeneralInstance& inst, const Params& p, const CsoOptions& opt) {
    check_params(p);
    const CandidateRadii radii = enumerate_radii(inst);
    std::optional<TriSolution> best;
    int lo = 0, hi = static_cast<int>(radii.values.size()) - 1;
    while (lo <= hi) {
        const int mid = (lo + hi) / 2;
        const double r = radii.values[static_cast<std::size_t>(mid)];
        Lp1Outcome lp = lp1_feasible(inst, r, p, opt);
        if (lp.feasible) {
            best = round_lp1(inst, r, lp.frac, p, opt);
            hi = mid - 1;
        } else {
            lo = mid + 1;
        }
    }
    // r = max pairwise distance is always feasible with k >= 1
    assert(best.has_value());
    return *best;
}

}  // namespace setout
