#include "setout/gcso.hpp"

#include <algorithm>
#include <cassert>

#include "setout/wspd.hpp"

namespace setout {

GeoLpSystem::GeoLpSystem(const std::vector<Point>& pts, const std::vector<Box>& rects, double r, double eps)
    : pts_(&pts), rects_(&rects), r_(r), eps_(eps) {
    bbd_ = std::make_unique<BbdTree>(pts, eps);
    range_ = std::make_unique<RangeTree>(pts);
    const int n = static_cast<int>(pts.size());
    ball_canon_.resize(static_cast<std::size_t>(n));
    bbd_path_.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        ball_canon_[static_cast<std::size_t>(i)] = bbd_->ball_query(pts[static_cast<std::size_t>(i)], r, eps);
        bbd_->walk_up(i, [&](int u) { bbd_path_[static_cast<std::size_t>(i)].push_back(u); });
    }
    rect_canon_.resize(rects.size());
    for (std::size_t j = 0; j < rects.size(); ++j) rect_canon_[j] = range_->query(rects[j]);
}

void GeoLpSystem::coefficients(const std::vector<double>& sigma, std::vector<double>& w, std::vector<double>& tau) {
    const int n = num_x();
    bbd_->reset_accumulators();
    for (int i = 0; i < n; ++i)
        for (int u : ball_canon_[static_cast<std::size_t>(i)]) bbd_->node(u).acc_s += sigma[static_cast<std::size_t>(i)];
    w.assign(static_cast<std::size_t>(n), 0.0);
    for (int l = 0; l < n; ++l)
        for (int u : bbd_path_[static_cast<std::size_t>(l)]) w[static_cast<std::size_t>(l)] += bbd_->node(u).acc_s;

    range_->load_sigma(sigma);
    tau.assign(rects_->size(), 0.0);
    for (std::size_t j = 0; j < rects_->size(); ++j)
        for (int v : rect_canon_[j]) tau[j] += range_->lnode(v).s;
}

void GeoLpSystem::row_sums(const std::vector<int>& x_chosen, const std::vector<int>& y_chosen,
                           std::vector<double>& out) {
    const int n = num_constraints();
    // R1 via transposed accumulation on the BBD tree
    for (int l : x_chosen)
        for (int u : bbd_path_[static_cast<std::size_t>(l)]) bbd_->node(u).acc_w += 1.0;
    out.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i)
        for (int u : ball_canon_[static_cast<std::size_t>(i)]) out[static_cast<std::size_t>(i)] += bbd_->node(u).acc_w;
    for (int l : x_chosen)
        for (int u : bbd_path_[static_cast<std::size_t>(l)]) bbd_->node(u).acc_w = 0.0;

    // R2 via canonical weights on the range tree
    for (int j : y_chosen)
        for (int v : rect_canon_[static_cast<std::size_t>(j)]) range_->lnode(v).w += 1.0;
    for (int i = 0; i < n; ++i) {
        double r2 = 0.0;
        range_->walk_up_all(i, [&](int v) { r2 += range_->lnode(v).w; });
        out[static_cast<std::size_t>(i)] += r2;
    }
    for (int j : y_chosen)
        for (int v : rect_canon_[static_cast<std::size_t>(j)]) range_->lnode(v).w = 0.0;
}

std::vector<std::vector<int>> GeoLpSystem::materialize_cover() const {
    std::vector<std::vector<int>> cover(static_cast<std::size_t>(num_x()));
    for (int i = 0; i < num_x(); ++i) {
        for (int u : ball_canon_[static_cast<std::size_t>(i)]) {
            auto ps = bbd_->points_in(u);
            cover[static_cast<std::size_t>(i)].insert(cover[static_cast<std::size_t>(i)].end(), ps.begin(), ps.end());
        }
        std::sort(cover[static_cast<std::size_t>(i)].begin(), cover[static_cast<std::size_t>(i)].end());
    }
    return cover;
}

OracleStep oracle_step(GeoLpSystem& sys, const std::vector<double>& sigma, int k, int z) {
    OracleStep step;
    sys.coefficients(sigma, step.w, step.tau);
    step.x_chosen = top_indices(step.w, k);
    step.y_chosen = top_indices(step.tau, z);
    for (int l : step.x_chosen) step.lhs += step.w[static_cast<std::size_t>(l)];
    for (int j : step.y_chosen) step.lhs += step.tau[static_cast<std::size_t>(j)];
    for (double s : sigma) step.rhs += s;
    step.feasible = step.lhs >= step.rhs * (1.0 - 1e-12);
    return step;
}

std::vector<double> update_step(GeoLpSystem& sys, const OracleStep& step, std::vector<double> sigma, double eps,
                                int k, int z) {
    std::vector<double> rows;
    sys.row_sums(step.x_chosen, step.y_chosen, rows);
    for (std::size_t i = 0; i < sigma.size(); ++i) {
        const double delta = (rows[i] - 1.0) / static_cast<double>(k + z);
        sigma[i] *= 1.0 - delta * eps / 4.0;
    }
    return sigma;
}

namespace {

struct RoundedPick {
    std::vector<int> centers;
    std::vector<int> rects;
};

// Rounding over the system's own trees: y-threshold 1/(2f), active
// set via rectangle lists on root paths, then 2r peeling with active flags.
RoundedPick round_pick(const std::vector<Point>& pts, GeoLpSystem& sys, const MwuSolution& psi, int f) {
    RoundedPick out;
    const int n = static_cast<int>(pts.size());
    auto& rt = sys.range();
    rt.clear_lists();
    for (int j = 0; j < sys.num_y(); ++j) {
        if (psi.rounds == 0 || !psi.y_above_threshold(static_cast<std::size_t>(j), f)) continue;
        out.rects.push_back(j);
        for (int v : sys.rect_canonical()[static_cast<std::size_t>(j)]) rt.lnode(v).list.push_back(j);
    }
    std::vector<int> act_ids;
    for (int i = 0; i < n; ++i) {
        bool covered = false;
        rt.walk_up_all(i, [&](int v) {
            if (!rt.lnode(v).list.empty()) covered = true;
        });
        if (!covered) act_ids.push_back(i);
    }
    if (act_ids.empty()) return out;

    std::vector<Point> act_pts;
    act_pts.reserve(act_ids.size());
    for (int i : act_ids) act_pts.push_back(pts[static_cast<std::size_t>(i)]);
    BbdTree peel(act_pts, sys.eps());
    const double peel_r = 2.0 * sys.radius();
    while (peel.node(peel.root()).active) {
        const int local = peel.node(peel.root()).repr;
        out.centers.push_back(act_ids[static_cast<std::size_t>(local)]);
        auto canon = peel.ball_query(act_pts[static_cast<std::size_t>(local)], peel_r, sys.eps());
        peel.deactivate(canon);
    }
    std::sort(out.centers.begin(), out.centers.end());
    return out;
}

double gamma_sentinel(const CandidateRadii& radii, double eps) {
    return radii.values.empty() ? 0.0 : radii.values.back() / (1.0 - eps);
}

}  // namespace

TriSolution round_geometric(const GeometricInstance& inst, GeoLpSystem& sys, const MwuSolution& psi,
                            const Params& p, double mu_cost_claim) {
    const int f = std::max(1, inst.frequency());
    RoundedPick pick = round_pick(inst.points, sys, psi, f);
    BoundsClaim claim;
    claim.mu_centers = factors::gcso_center_factor(p.eps);
    claim.mu_outliers = 2.0 * f;
    claim.mu_cost = mu_cost_claim;
    return make_solution(inst, std::move(pick.centers), std::move(pick.rects), claim);
}

TriSolution solve_gcso(const GeometricInstance& inst, const Params& p, const GcsoOptions& opt) {
    check_params(p);
    const double eps = factors::eps_slice_gcso(p.eps);
    CandidateRadii radii = wspd_distances(inst.points, eps);
    if (inst.n() >= 2) radii.values.push_back(gamma_sentinel(radii, eps));

    std::optional<TriSolution> best;
    int lo = 0, hi = static_cast<int>(radii.values.size()) - 1;
    while (lo <= hi) {
        const int mid = (lo + hi) / 2;
        const double r = radii.values[static_cast<std::size_t>(mid)];
        GeoLpSystem sys(inst.points, inst.rects, r, eps);
        MwuOutcome mwu = mwu_solve(sys, p.k, p.z, eps, opt.budget_c);
        if (mwu.feasible) {
            best = round_geometric(inst, sys, mwu.psi, p, factors::gcso_cost_factor(p.eps));
            hi = mid - 1;
        } else {
            lo = mid + 1;
        }
    }
    assert(best.has_value());
    return *best;
}

DenseBallIndex::DenseBallIndex(BbdTree& tree, const std::vector<Point>& pts, const std::vector<int>& rect_of,
                               const std::vector<char>& alive, double probe_r)
    : tree_(&tree), rect_of_(rect_of) {
    const int n = tree.num_points();
    canon_.resize(static_cast<std::size_t>(n));
    // stamp pass
    for (int i = 0; i < n; ++i) {
        if (!alive[static_cast<std::size_t>(i)]) continue;
        canon_[static_cast<std::size_t>(i)] = tree.ball_query(pts[static_cast<std::size_t>(i)], probe_r);
        const int j = rect_of_[static_cast<std::size_t>(i)];
        for (int u : canon_[static_cast<std::size_t>(i)]) ++tree.node(u).stamp[j];
    }
    // ancestor-unique placement: node ids ascend from the root, so a node's
    // ancestors are consolidated before the node itself
    for (int u = 0; u < tree.size(); ++u) {
        auto& st = tree.node(u).stamp;
        for (auto it = st.begin(); it != st.end();) {
            int v = tree.node(u).parent;
            while (v != -1 && tree.node(v).stamp.find(it->first) == tree.node(v).stamp.end())
                v = tree.node(v).parent;
            if (v != -1) {
                tree.node(v).stamp[it->first] += it->second;
                it = st.erase(it);
            } else {
                ++it;
            }
        }
    }
}

int DenseBallIndex::touched_count(int point) const {
    int total = 0;
    tree_->walk_up(point, [&](int u) { total += static_cast<int>(tree_->node(u).stamp.size()); });
    return total;
}

void DenseBallIndex::remove_point(int point) {
    const int j = rect_of_[static_cast<std::size_t>(point)];
    for (int u : canon_[static_cast<std::size_t>(point)]) {
        int v = u;
        while (v != -1 && tree_->node(v).stamp.find(j) == tree_->node(v).stamp.end())
            v = tree_->node(v).parent;
        assert(v != -1);
        auto it = tree_->node(v).stamp.find(j);
        if (--(it->second) == 0) tree_->node(v).stamp.erase(it);
    }
}

std::optional<GeoCoreset> geo_coreset(const GeometricInstance& inst, double r, const Params& p, double eps) {
    const int n = inst.n();
    GeoCoreset cs;
    cs.r = r;
    cs.alive.assign(static_cast<std::size_t>(n), 1);
    cs.k_prime = p.k;
    bool changed = false;

    std::vector<int> rect_of(static_cast<std::size_t>(n), -1);
    RangeTree rt(inst.points);
    std::vector<std::vector<int>> members(static_cast<std::size_t>(inst.m()));
    for (int j = 0; j < inst.m(); ++j) {
        members[static_cast<std::size_t>(j)] = rt.report(inst.rects[static_cast<std::size_t>(j)]);
        std::sort(members[static_cast<std::size_t>(j)].begin(), members[static_cast<std::size_t>(j)].end());
        for (int i : members[static_cast<std::size_t>(j)]) rect_of[static_cast<std::size_t>(i)] = j;
    }

    // rect-local Gonzalez pruning
    for (int j = 0; j < inst.m(); ++j) {
        const auto& mem = members[static_cast<std::size_t>(j)];
        if (mem.empty()) continue;
        auto gz = gonzalez_kcenter(mem,
                                   [&](int a, int b) {
                                       return dist_l2(inst.points[static_cast<std::size_t>(a)],
                                                      inst.points[static_cast<std::size_t>(b)]);
                                   },
                                   p.k);
        if (gz.radius > factors::kPhase1Accept * r) {
            cs.forced_outliers.push_back(j);
            for (int i : mem) cs.alive[static_cast<std::size_t>(i)] = 0;
            changed = true;
            continue;
        }
        std::vector<char> keep(static_cast<std::size_t>(n), 0);
        for (int c : gz.centers) keep[static_cast<std::size_t>(c)] = 1;
        for (int i : mem)
            if (!keep[static_cast<std::size_t>(i)]) {
                cs.alive[static_cast<std::size_t>(i)] = 0;
                changed = true;
            }
        // 2r dedup with a per-set BBD tree; leaves of removed points go inactive
        std::vector<int> kept(gz.centers);
        std::sort(kept.begin(), kept.end());
        if (kept.size() > 1) {
            std::vector<Point> coords;
            coords.reserve(kept.size());
            for (int c : kept) coords.push_back(inst.points[static_cast<std::size_t>(c)]);
            BbdTree dedup(coords, eps);
            for (std::size_t a = 0; a < kept.size(); ++a) {
                if (!cs.alive[static_cast<std::size_t>(kept[a])]) continue;
                auto canon = dedup.ball_query(coords[a], factors::kPhase1Accept * r, eps);
                std::vector<int> hit;
                for (int u : canon) dedup.report_active(u, hit);
                for (int local : hit) {
                    if (static_cast<std::size_t>(local) == a) continue;
                    dedup.deactivate({dedup.leaf_of(local)});
                    cs.alive[static_cast<std::size_t>(kept[static_cast<std::size_t>(local)])] = 0;
                    changed = true;
                }
            }
        }
    }
    cs.z_bar = p.z - static_cast<int>(cs.forced_outliers.size());
    if (cs.z_bar < 0) return std::nullopt;

    // dense-ball extraction over the stamped tree, twin tree for deletions
    BbdTree stamped(inst.points, eps);
    for (int i = 0; i < n; ++i)
        if (!cs.alive[static_cast<std::size_t>(i)]) stamped.deactivate({stamped.leaf_of(i)});
    BbdTree twin = stamped;
    DenseBallIndex index(stamped, inst.points, rect_of, cs.alive, factors::kDenseProbe * r);

    for (int i = 0; i < n; ++i) {
        if (!cs.alive[static_cast<std::size_t>(i)]) continue;
        const int touched = index.touched_count(i);
        if (touched <= cs.z_bar) continue;
        auto canon15 = twin.ball_query(inst.points[static_cast<std::size_t>(i)], factors::kExtract * r, eps);
        ExtractedBall ball;
        ball.center = i;
        ball.touched_sets = touched;
        for (int u : canon15) twin.report_active(u, ball.members);
        std::sort(ball.members.begin(), ball.members.end());
        twin.deactivate(canon15);
        for (int q : ball.members) {
            index.remove_point(q);
            cs.alive[static_cast<std::size_t>(q)] = 0;
        }
        cs.extracted.push_back(std::move(ball));
        changed = true;
        if (--cs.k_prime < 0) return std::nullopt;
    }

    int surviving = 0;
    for (int j = 0; j < inst.m(); ++j) {
        bool any = false;
        for (int i : members[static_cast<std::size_t>(j)]) any |= cs.alive[static_cast<std::size_t>(i)] != 0;
        surviving += any ? 1 : 0;
    }
    if (static_cast<double>(surviving) >
        std::min(static_cast<double>(inst.m()), factors::kSkipGuardSets * p.k * p.z))
        return std::nullopt;

    cs.identity = !changed;
    return cs;
}

std::optional<TriSolution> gcso_disjoint_at_radius(const GeometricInstance& inst, double r, const Params& p,
                                                   double eps, const GcsoOptions& opt) {
    auto cs = geo_coreset(inst, r, p, eps);
    if (!cs) return std::nullopt;

    if (cs->identity) {  // phases were no-ops: behave exactly like the plain solver
        GeoLpSystem sys(inst.points, inst.rects, r, eps);
        MwuOutcome mwu = mwu_solve(sys, p.k, p.z, eps, opt.budget_c);
        if (!mwu.feasible) return std::nullopt;
        return round_geometric(inst, sys, mwu.psi, p, factors::gcso_disjoint_cost_factor(p.eps));
    }

    const std::vector<int> sub_ids = cs->alive_points();
    std::vector<char> forced(static_cast<std::size_t>(inst.m()), 0);
    for (int j : cs->forced_outliers) forced[static_cast<std::size_t>(j)] = 1;
    std::vector<int> sub_rects;
    for (int j = 0; j < inst.m(); ++j) {
        if (forced[static_cast<std::size_t>(j)]) continue;
        bool any = false;
        for (int i : sub_ids)
            any |= inst.rects[static_cast<std::size_t>(j)].contains(inst.points[static_cast<std::size_t>(i)]);
        if (any) sub_rects.push_back(j);
    }

    std::vector<int> hat_centers, hat_rects;
    if (!sub_ids.empty()) {
        std::vector<Point> sub_pts;
        sub_pts.reserve(sub_ids.size());
        for (int i : sub_ids) sub_pts.push_back(inst.points[static_cast<std::size_t>(i)]);
        std::vector<Box> boxes;
        boxes.reserve(sub_rects.size());
        for (int j : sub_rects) boxes.push_back(inst.rects[static_cast<std::size_t>(j)]);

        const double r_lp = factors::kCoresetCover * (1.0 + eps) * r;
        GeoLpSystem sys(sub_pts, boxes, r_lp, eps);
        MwuOutcome mwu = mwu_solve(sys, cs->k_prime, cs->z_bar, eps, opt.budget_c);
        if (!mwu.feasible) return std::nullopt;
        RoundedPick pick = round_pick(sub_pts, sys, mwu.psi, 1);
        for (int c : pick.centers) hat_centers.push_back(sub_ids[static_cast<std::size_t>(c)]);
        for (int j : pick.rects) hat_rects.push_back(sub_rects[static_cast<std::size_t>(j)]);
    }

    std::vector<int> H = hat_rects;
    H.insert(H.end(), cs->forced_outliers.begin(), cs->forced_outliers.end());
    std::sort(H.begin(), H.end());
    std::vector<int> C = hat_centers;
    for (const auto& ball : cs->extracted) {
        for (int i : ball.members) {
            bool inside_outlier = false;
            for (int j : H)
                inside_outlier |=
                    inst.rects[static_cast<std::size_t>(j)].contains(inst.points[static_cast<std::size_t>(i)]);
            if (!inside_outlier) {
                C.push_back(i);
                break;
            }
        }
    }
    std::sort(C.begin(), C.end());
    BoundsClaim claim;
    claim.mu_centers = factors::gcso_center_factor(p.eps);
    claim.mu_outliers = 2.0;
    claim.mu_cost = factors::gcso_disjoint_cost_factor(p.eps);
    return make_solution(inst, std::move(C), std::move(H), claim);
}

TriSolution solve_gcso_disjoint(const GeometricInstance& inst, const Params& p, const GcsoOptions& opt) {
    check_params(p);
    if (inst.frequency() != 1) throw InstanceError("solve_gcso_disjoint requires pairwise-disjoint rectangles on P");
    const double eps = factors::eps_slice_gcso_disjoint(p.eps);
    CandidateRadii radii = wspd_distances(inst.points, eps);
    if (inst.n() >= 2) radii.values.push_back(gamma_sentinel(radii, eps));

    std::optional<TriSolution> best;
    int lo = 0, hi = static_cast<int>(radii.values.size()) - 1;
    while (lo <= hi) {
        const int mid = (lo + hi) / 2;
        auto sol = gcso_disjoint_at_radius(inst, radii.values[static_cast<std::size_t>(mid)], p, eps, opt);
        if (sol) {
            best = std::move(sol);
            hi = mid - 1;
        } else {
            lo = mid + 1;
        }
    }
    assert(best.has_value());
    return *best;
}

}  // namespace setout
