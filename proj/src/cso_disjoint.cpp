#include "setout/cso_disjoint.hpp"

#include <algorithm>
#include <cassert>

#include "setout/constants.hpp"

namespace setout {

std::vector<int> CoresetState::surviving_sets(const GeneralInstance& inst) const {
    std::vector<int> out;
    std::vector<char> forced(static_cast<std::size_t>(inst.m()), 0);
    for (int j : forced_outliers) forced[static_cast<std::size_t>(j)] = 1;
    for (int j = 0; j < inst.m(); ++j) {
        if (forced[static_cast<std::size_t>(j)]) continue;
        bool any = false;
        for (int i : inst.sets[static_cast<std::size_t>(j)])
            if (alive[static_cast<std::size_t>(i)]) {
                any = true;
                break;
            }
        if (any) out.push_back(j);
    }
    return out;
}

std::optional<CoresetState> coreset_phase1(const GeneralInstance& inst, double r, const Params& p) {
    if (inst.frequency() != 1) throw InstanceError("disjoint pipeline requires f = 1");
    CoresetState st;
    st.r = r;
    st.alive.assign(static_cast<std::size_t>(inst.n), 1);
    st.k_prime = p.k;

    for (int j = 0; j < inst.m(); ++j) {
        const auto& members = inst.sets[static_cast<std::size_t>(j)];
        if (members.empty()) continue;
        auto gz = gonzalez_kcenter(members, [&](int a, int b) { return inst.dist(a, b); }, p.k);
        if (gz.radius > factors::kPhase1Accept * r) {
            st.forced_outliers.push_back(j);
            for (int i : members) st.alive[static_cast<std::size_t>(i)] = 0;
            continue;
        }
        std::vector<char> keep(static_cast<std::size_t>(inst.n), 0);
        for (int c : gz.centers) keep[static_cast<std::size_t>(c)] = 1;
        for (int i : members)
            if (!keep[static_cast<std::size_t>(i)]) st.alive[static_cast<std::size_t>(i)] = 0;
        // 2r-dedup among the kept centers, ascending index
        std::vector<int> kept(gz.centers);
        std::sort(kept.begin(), kept.end());
        for (std::size_t a = 0; a < kept.size(); ++a) {
            if (!st.alive[static_cast<std::size_t>(kept[a])]) continue;
            for (std::size_t b = 0; b < kept.size(); ++b) {
                if (b == a || !st.alive[static_cast<std::size_t>(kept[b])]) continue;
                if (inst.dist(kept[a], kept[b]) <= factors::kPhase1Accept * r)
                    st.alive[static_cast<std::size_t>(kept[b])] = 0;
            }
        }
    }
    st.z_bar = p.z - static_cast<int>(st.forced_outliers.size());
    if (st.z_bar < 0) return std::nullopt;
    return st;
}

std::optional<CoresetState> coreset_phase2(const GeneralInstance& inst, CoresetState st, const Params& p) {
    std::vector<int> set_of(static_cast<std::size_t>(inst.n), -1);
    for (int j = 0; j < inst.m(); ++j)
        for (int i : inst.sets[static_cast<std::size_t>(j)]) set_of[static_cast<std::size_t>(i)] = j;

    const double probe_r = factors::kDenseProbe * st.r;
    const double extract_r = factors::kExtract * st.r;
    for (int i = 0; i < inst.n; ++i) {
        if (!st.alive[static_cast<std::size_t>(i)]) continue;
        std::vector<char> seen(static_cast<std::size_t>(inst.m()), 0);
        int touched = 0;
        for (int l = 0; l < inst.n; ++l) {
            if (!st.alive[static_cast<std::size_t>(l)] || inst.dist(i, l) > probe_r) continue;
            const int j = set_of[static_cast<std::size_t>(l)];
            if (!seen[static_cast<std::size_t>(j)]) {
                seen[static_cast<std::size_t>(j)] = 1;
                ++touched;
            }
        }
        if (touched <= st.z_bar) continue;
        ExtractedBall ball;
        ball.center = i;
        ball.touched_sets = touched;
        for (int l = 0; l < inst.n; ++l)
            if (st.alive[static_cast<std::size_t>(l)] && inst.dist(i, l) <= extract_r) {
                ball.members.push_back(l);
                st.alive[static_cast<std::size_t>(l)] = 0;
            }
        st.extracted.push_back(std::move(ball));
        --st.k_prime;
        if (st.k_prime < 0) return std::nullopt;
    }
    const auto surviving = st.surviving_sets(inst);
    if (static_cast<double>(surviving.size()) >
        std::min(static_cast<double>(inst.m()), factors::kSkipGuardSets * p.k * p.z))
        return std::nullopt;
    return st;
}

namespace {

// Coreset as its own instance, with maps back to original ids.
struct SubInstance {
    GeneralInstance inst;
    std::vector<int> element_of;  // sub element -> original element
    std::vector<int> set_of;      // sub set -> original set
};

SubInstance restrict_to(const GeneralInstance& inst, const CoresetState& st) {
    SubInstance sub;
    sub.element_of = st.alive_elements();
    std::vector<int> rank(static_cast<std::size_t>(inst.n), -1);
    for (int s = 0; s < static_cast<int>(sub.element_of.size()); ++s)
        rank[static_cast<std::size_t>(sub.element_of[static_cast<std::size_t>(s)])] = s;

    sub.inst.n = static_cast<int>(sub.element_of.size());
    sub.inst.metric = GeneralInstance::Metric::Matrix;
    sub.inst.dist_matrix.assign(static_cast<std::size_t>(sub.inst.n),
                                std::vector<double>(static_cast<std::size_t>(sub.inst.n), 0.0));
    for (int a = 0; a < sub.inst.n; ++a)
        for (int b = 0; b < sub.inst.n; ++b)
            sub.inst.dist_matrix[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
                inst.dist(sub.element_of[static_cast<std::size_t>(a)], sub.element_of[static_cast<std::size_t>(b)]);

    sub.set_of = st.surviving_sets(inst);
    for (int j : sub.set_of) {
        std::vector<int> members;
        for (int i : inst.sets[static_cast<std::size_t>(j)])
            if (rank[static_cast<std::size_t>(i)] >= 0) members.push_back(rank[static_cast<std::size_t>(i)]);
        sub.inst.sets.push_back(std::move(members));
    }
    sub.inst.membership.assign(static_cast<std::size_t>(sub.inst.n), {});
    for (int j = 0; j < sub.inst.m(); ++j)
        for (int i : sub.inst.sets[static_cast<std::size_t>(j)])
            sub.inst.membership[static_cast<std::size_t>(i)].push_back(j);
    return sub;
}

}  // namespace

std::optional<TriSolution> solve_lp2_and_reassemble(const GeneralInstance& inst, const CoresetState& st,
                                                    const Params& p, const CsoOptions& opt) {
    const SubInstance sub = restrict_to(inst, st);
    std::vector<int> hat_centers, hat_outliers;
    if (sub.inst.n > 0) {
        DenseOracle oracle = make_lp_oracle(sub.inst, factors::kCoresetCover * st.r);
        MwuOutcome mwu = mwu_solve(oracle, std::max(st.k_prime, 0), std::max(st.z_bar, 0), opt.eps_lp, opt.budget_c);
        if (!mwu.feasible) return std::nullopt;
        FractionalAssignment frac;
        frac.exact = mwu.psi;
        frac.x.resize(static_cast<std::size_t>(sub.inst.n));
        frac.y.resize(static_cast<std::size_t>(sub.inst.m()));
        for (int i = 0; i < sub.inst.n; ++i) frac.x[static_cast<std::size_t>(i)] = mwu.psi.x(static_cast<std::size_t>(i));
        for (int j = 0; j < sub.inst.m(); ++j) frac.y[static_cast<std::size_t>(j)] = mwu.psi.y(static_cast<std::size_t>(j));
        Params sub_p{std::max(st.k_prime, 1), std::max(st.z_bar, 1), p.eps};
        TriSolution rounded = round_fractional(sub.inst, frac, factors::kCoresetPeel * st.r, sub_p, opt);
        for (int c : rounded.centers) hat_centers.push_back(sub.element_of[static_cast<std::size_t>(c)]);
        for (int j : rounded.outliers) hat_outliers.push_back(sub.set_of[static_cast<std::size_t>(j)]);
    }

    std::vector<int> H = hat_outliers;
    H.insert(H.end(), st.forced_outliers.begin(), st.forced_outliers.end());
    std::sort(H.begin(), H.end());
    std::vector<char> outlier_set(static_cast<std::size_t>(inst.m()), 0);
    for (int j : H) outlier_set[static_cast<std::size_t>(j)] = 1;

    std::vector<int> C = hat_centers;
    for (const auto& ball : st.extracted) {
        for (int i : ball.members) {
            const int j = inst.membership[static_cast<std::size_t>(i)].front();
            if (!outlier_set[static_cast<std::size_t>(j)]) {
                C.push_back(i);
                break;  // members are in ascending order
            }
        }
    }
    std::sort(C.begin(), C.end());

    BoundsClaim claim;
    claim.mu_centers = 2.0;
    claim.mu_outliers = 2.0;
    claim.mu_cost = factors::kDisjointCost;
    return make_solution(inst, std::move(C), std::move(H), claim);
}

TriSolution solve_cso_disjoint(const GeneralInstance& inst, const Params& p, const CsoOptions& opt) {
    check_params(p);
    if (inst.frequency() != 1) throw InstanceError("solve_cso_disjoint requires f = 1");
    const CandidateRadii radii = enumerate_radii(inst);

    auto probe = [&](double r) -> std::optional<TriSolution> {
        auto st1 = coreset_phase1(inst, r, p);
        if (!st1) return std::nullopt;
        auto st2 = coreset_phase2(inst, std::move(*st1), p);
        if (!st2) return std::nullopt;
        return solve_lp2_and_reassemble(inst, *st2, p, opt);
    };

    std::optional<TriSolution> best;
    int lo = 0, hi = static_cast<int>(radii.values.size()) - 1;
    while (lo <= hi) {
        const int mid = (lo + hi) / 2;
        auto sol = probe(radii.values[static_cast<std::size_t>(mid)]);
        if (sol) {
            best = std::move(sol);
            hi = mid - 1;
        } else {
            lo = mid + 1;
        }
    }
    assert(best.has_value());  // the max pairwise distance always succeeds
    return *best;
}

}  // namespace setout
