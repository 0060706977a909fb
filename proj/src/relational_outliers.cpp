#include "setout/relational_outliers.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <set>

#include "setout/bbd_tree.hpp"
#include "setout/complement.hpp"
#include "setout/gcso.hpp"
#include "setout/wspd.hpp"

namespace setout {

Box tuple_rectangle(const RelationalDatabase& db, const TupleRef& t) {
    Box b = Box::whole(db.num_attrs());
    const auto& rel = db.relations[static_cast<std::size_t>(t.relation)];
    for (std::size_t c = 0; c < rel.attrs.size(); ++c)
        b.iv[static_cast<std::size_t>(rel.attrs[c])] =
            Interval::point(rel.tuples[static_cast<std::size_t>(t.row)][c]);
    return b;
}

namespace {

std::vector<std::vector<char>> full_mask(const RelationalDatabase& db) {
    std::vector<std::vector<char>> mask(static_cast<std::size_t>(db.num_relations()));
    for (int i = 0; i < db.num_relations(); ++i)
        mask[static_cast<std::size_t>(i)].assign(db.relations[static_cast<std::size_t>(i)].tuples.size(), 1);
    return mask;
}

std::vector<std::vector<char>> mask_without(const RelationalDatabase& db, const std::vector<TupleRef>& removed) {
    auto mask = full_mask(db);
    for (const TupleRef& t : removed)
        mask[static_cast<std::size_t>(t.relation)][static_cast<std::size_t>(t.row)] = 0;
    return mask;
}

RelationalDatabase apply_mask(const RelationalDatabase& db, const std::vector<std::vector<char>>& mask) {
    RelationalDatabase out;
    out.attr_names = db.attr_names;
    out.relations.resize(db.relations.size());
    for (std::size_t i = 0; i < db.relations.size(); ++i) {
        out.relations[i].name = db.relations[i].name;
        out.relations[i].attrs = db.relations[i].attrs;
        for (std::size_t t = 0; t < db.relations[i].tuples.size(); ++t)
            if (mask[i][t]) out.relations[i].tuples.push_back(db.relations[i].tuples[t]);
    }
    return out;
}

// rows of each relation keyed by tuple values, for constituent lookup
std::vector<std::map<std::vector<double>, int>> row_maps(const RelationalDatabase& db) {
    std::vector<std::map<std::vector<double>, int>> maps(static_cast<std::size_t>(db.num_relations()));
    for (int i = 0; i < db.num_relations(); ++i)
        for (std::size_t t = 0; t < db.relations[static_cast<std::size_t>(i)].tuples.size(); ++t)
            maps[static_cast<std::size_t>(i)][db.relations[static_cast<std::size_t>(i)].tuples[t]] =
                static_cast<int>(t);
    return maps;
}

std::vector<TupleRef> constituents(const RelationalDatabase& db,
                                   const std::vector<std::map<std::vector<double>, int>>& rows, const Point& q) {
    std::vector<TupleRef> out;
    for (int i = 0; i < db.num_relations(); ++i) {
        const auto& rel = db.relations[static_cast<std::size_t>(i)];
        std::vector<double> proj;
        proj.reserve(rel.attrs.size());
        for (int a : rel.attrs) proj.push_back(q[static_cast<std::size_t>(a)]);
        out.push_back(TupleRef{i, rows[static_cast<std::size_t>(i)].at(proj)});
    }
    return out;
}

double radius_over_join(const RelationalDatabase& db, const JoinTree& tree,
                        const std::vector<std::vector<char>>& mask, const std::vector<Point>& centers) {
    JoinEvaluator ev(db, tree, Box::whole(db.num_attrs()), &mask);
    if (ev.count() == 0) return 0.0;
    if (centers.empty()) return inf();
    double worst = 0.0;
    ev.enumerate([&](const Point& q) {
        double best = inf();
        for (const Point& s : centers) best = std::min(best, dist_l2(q, s));
        worst = std::max(worst, best);
        return true;
    });
    return worst;
}

struct CharikarOut {
    std::vector<int> centers;    // indices into the point set
    std::vector<int> uncovered;  // points left active at acceptance
    double r_hat = 0.0;
};

// Greedy max-coverage peeling with BBD counts: per radius, k rounds of
// "pick the active point whose r-ball holds the most active points, then
// deactivate its 3r-ball"; accept when the leftovers fit the cap.
std::optional<CharikarOut> charikar_bbd(const std::vector<Point>& pts, int k, double accept_cap, double eps) {
    CandidateRadii radii = wspd_distances(pts, eps);
    if (pts.size() >= 2) radii.values.push_back(radii.values.back() / (1.0 - eps));
    BbdTree tree(pts, eps);

    std::optional<CharikarOut> best;
    int lo = 0, hi = static_cast<int>(radii.values.size()) - 1;
    while (lo <= hi) {
        const int mid = (lo + hi) / 2;
        const double r = radii.values[static_cast<std::size_t>(mid)];
        tree.reset_active();
        CharikarOut cur;
        cur.r_hat = r;
        for (int round = 0; round < k; ++round) {
            const auto active = tree.active_points();
            if (active.empty()) break;
            int best_p = -1;
            long long best_c = -1;
            for (int p : active) {
                long long c = 0;
                for (int u : tree.ball_query(pts[static_cast<std::size_t>(p)], r, eps)) c += tree.node(u).count;
                if (c > best_c) {
                    best_c = c;
                    best_p = p;
                }
            }
            cur.centers.push_back(best_p);
            tree.deactivate(tree.ball_query(pts[static_cast<std::size_t>(best_p)], 3.0 * r, eps));
        }
        cur.uncovered = tree.active_points();
        if (static_cast<double>(cur.uncovered.size()) <= accept_cap) {
            best = std::move(cur);
            hi = mid - 1;
        } else {
            lo = mid + 1;
        }
    }
    return best;
}

}  // namespace

RelSolution solve_rcro(const RelationalDatabase& db, const JoinTree& tree, int k, int z, const RelOptions& opt) {
    JoinEvaluator ev(db, tree);
    const long long q = ev.count();
    RelSolution sol;
    if (q == 0) return sol;
    if (z >= q) {  // everything removable
        sol.result_outliers = ev.materialize(q);
        return sol;
    }
    const double eps = opt.eps / 6.0;  // greedy, BBD and WSPD each take a slice
    const double delta = static_cast<double>(z) / static_cast<double>(q);
    SplitRng rng(opt.seed);
    const long long tau = static_cast<long long>(
        std::ceil(opt.tau_multiplier * k * std::log(static_cast<double>(std::max<long long>(q, 2))) /
                  (eps * eps * delta)));

    if (q <= opt.materialize_cap || tau >= q) {
        const auto pts = ev.materialize(q);
        auto out = charikar_bbd(pts, k, static_cast<double>(z), eps);
        assert(out.has_value());  // everything fits one ball at the top radius
        for (int c : out->centers) sol.centers.push_back(pts[static_cast<std::size_t>(c)]);
        std::vector<bool> outlier(pts.size(), false);
        for (int t : out->uncovered) {
            sol.result_outliers.push_back(pts[static_cast<std::size_t>(t)]);
            outlier[static_cast<std::size_t>(t)] = true;
        }
        double worst = 0.0;
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (outlier[i]) continue;
            double bestd = inf();
            for (const Point& s : sol.centers) bestd = std::min(bestd, dist_l2(pts[i], s));
            worst = std::max(worst, bestd);
        }
        sol.radius = worst;
        return sol;
    }

    // sampled path
    std::vector<Point> samples;
    samples.reserve(static_cast<std::size_t>(tau));
    for (long long i = 0; i < tau; ++i) samples.push_back(ev.sample(rng));
    auto out = charikar_bbd(samples, k, (1.0 + eps) * delta * static_cast<double>(tau), eps);
    assert(out.has_value());
    for (int c : out->centers) sol.centers.push_back(samples[static_cast<std::size_t>(c)]);
    const double thresh = 3.0 * (1.0 + eps) * out->r_hat;
    double worst = 0.0;
    ev.enumerate([&](const Point& p) {
        double bestd = inf();
        for (const Point& s : sol.centers) bestd = std::min(bestd, dist_l2(p, s));
        if (bestd > thresh) sol.result_outliers.push_back(p);
        else worst = std::max(worst, bestd);
        return true;
    });
    sol.radius = worst;
    return sol;
}

RelSolution solve_rcto1(const RelationalDatabase& db, const JoinTree& tree, int k, int z, const RelOptions& opt) {
    const int d = db.num_attrs();
    JoinEvaluator full(db, tree);
    RelSolution trivial;
    if (full.count() == 0) return trivial;

    // candidate scales: per-axis gaps plus their sqrt(d) lifts
    std::vector<double> cands = linf_candidates(db, tree);
    {
        const std::size_t base = cands.size();
        for (std::size_t i = 0; i < base; ++i) cands.push_back(cands[i] * std::sqrt(static_cast<double>(d)));
        std::sort(cands.begin(), cands.end());
        cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    }

    const double eps_pipe = factors::eps_slice_gcso_disjoint(opt.eps);
    const auto& r1 = db.relations[0];

    struct Probe {
        std::vector<Point> centers;
        std::vector<TupleRef> outliers;
    };
    auto probe = [&](double r) -> std::optional<Probe> {
        std::vector<TupleRef> premarked;
        std::vector<Point> pts;
        std::vector<Box> rects;
        std::vector<TupleRef> rect_tuple;
        std::vector<std::vector<int>> rect_points;  // center ids per rect

        for (std::size_t t = 0; t < r1.tuples.size(); ++t) {
            auto mask = full_mask(db);
            for (std::size_t o = 0; o < r1.tuples.size(); ++o)
                if (o != t) mask[0][o] = 0;
            RelationalDatabase sub = apply_mask(db, mask);
            JoinEvaluator sub_ev(sub, tree);
            if (sub_ev.count() == 0) continue;  // joins to nothing; irrelevant
            auto rc = rel_cluster(sub, tree, k);
            if (rc.r_s > factors::rcto1_premark_factor(d) * r) {
                premarked.push_back(TupleRef{0, static_cast<int>(t)});
                continue;
            }
            rect_tuple.push_back(TupleRef{0, static_cast<int>(t)});
            rects.push_back(tuple_rectangle(db, rect_tuple.back()));
            rect_points.emplace_back();
            for (const Point& c : rc.centers) {
                rect_points.back().push_back(static_cast<int>(pts.size()));
                pts.push_back(c);
            }
        }
        const int z_bar = z - static_cast<int>(premarked.size());
        if (z_bar < 0) return std::nullopt;
        if (pts.empty()) return Probe{{}, premarked};

        GeometricInstance gi;
        gi.points = pts;
        gi.rects = rects;
        Params pipe_params;
        pipe_params.k = k;
        pipe_params.z = z_bar;
        pipe_params.eps = opt.eps;
        GcsoOptions gopt;
        gopt.budget_c = opt.budget_c;
        auto pipe = gcso_disjoint_at_radius(gi, factors::rcto1_pipeline_radius(d) * r, pipe_params, eps_pipe, gopt);
        if (!pipe) return std::nullopt;

        Probe out;
        for (int c : pipe->centers) out.centers.push_back(pts[static_cast<std::size_t>(c)]);
        out.outliers = premarked;
        for (int j : pipe->outliers) out.outliers.push_back(rect_tuple[static_cast<std::size_t>(j)]);
        return out;
    };

    std::optional<Probe> best;
    int lo = 0, hi = static_cast<int>(cands.size()) - 1;
    while (lo <= hi) {
        const int mid = (lo + hi) / 2;
        auto res = probe(cands[static_cast<std::size_t>(mid)]);
        if (res) {
            best = std::move(res);
            hi = mid - 1;
        } else {
            lo = mid + 1;
        }
    }
    assert(best.has_value());  // the top candidate premarks nothing and covers everything

    RelSolution sol;
    sol.centers = best->centers;
    sol.outliers = best->outliers;
    sol.radius = radius_over_join(db, tree, mask_without(db, sol.outliers), sol.centers);
    return sol;
}

RctoResult solve_rcto(const RelationalDatabase& db, const JoinTree& tree, int k, int z, const RelOptions& opt) {
    const int d = db.num_attrs();
    const int g = db.num_relations();
    const long long n_tuples = db.total_tuples();
    RctoResult res;

    if (z >= n_tuples) {  // degenerate: remove every tuple
        for (int i = 0; i < g; ++i)
            for (std::size_t t = 0; t < db.relations[static_cast<std::size_t>(i)].tuples.size(); ++t)
                res.solution.outliers.push_back(TupleRef{i, static_cast<int>(t)});
        return res;
    }

    const long long exponent = static_cast<long long>(g) * k + z;
    if (exponent > 60 || (1LL << exponent) > opt.trial_cap)
        throw TrialCapExceeded("rcto refused: needs about 2^" + std::to_string(exponent) +
                               " trials, above the cap " + std::to_string(opt.trial_cap));
    const long long trials = static_cast<long long>(
        std::ceil(opt.trial_multiplier * static_cast<double>(1LL << exponent) *
                  std::max(1.0, std::log(static_cast<double>(std::max<long long>(n_tuples, 2))))));

    JoinEvaluator full(db, tree);
    if (full.count() == 0) return res;
    const auto cands = linf_candidates(db, tree);
    const auto rows = row_maps(db);
    const double sqd = std::sqrt(static_cast<double>(d));

    double best_radius = inf();
    for (long long ell = 0; ell < trials; ++ell) {
        PartitionTrial trial;
        trial.index = static_cast<int>(ell);
        trial.seed = opt.seed + 0x9e3779b9u * static_cast<std::uint64_t>(ell + 1);
        SplitRng rng(trial.seed);
        trial.in_first.resize(static_cast<std::size_t>(g));
        for (int i = 0; i < g; ++i) {
            trial.in_first[static_cast<std::size_t>(i)].resize(
                db.relations[static_cast<std::size_t>(i)].tuples.size());
            for (auto& b : trial.in_first[static_cast<std::size_t>(i)]) b = rng.next() & 1 ? 1 : 0;
        }
        RelationalDatabase db1 = apply_mask(db, trial.in_first);
        bool any_empty = false;
        for (const auto& rel : db1.relations) any_empty |= rel.tuples.empty();
        if (any_empty || JoinEvaluator(db1, tree).count() == 0) {
            res.trials.push_back(std::move(trial));
            continue;
        }
        auto rc = rel_cluster(db1, tree, k);
        if (rc.r_s >= best_radius) {  // cannot beat the best trial's h-hat
            res.trials.push_back(std::move(trial));
            continue;
        }

        auto step = [&](double r, PartitionTrial& tr) -> std::optional<std::pair<std::vector<TupleRef>, double>> {
            const double hhat = rc.r_s + sqd * r;
            std::vector<Box> cubes;
            for (const Point& p : rc.centers) cubes.push_back(Box::cube(p, hhat));
            const auto cells = cube_complement(cubes);
            std::vector<TupleRef> removed;
            std::vector<WitnessEvent> events;
            for (int witness_count = 0; witness_count <= z; ++witness_count) {
                auto mask = mask_without(db, removed);
                std::optional<Point> q;
                for (const Box& cell : cells) {
                    JoinEvaluator cev(db, tree, cell, &mask);
                    if (cev.count() == 0) continue;
                    q = cev.sample(rng);
                    break;
                }
                if (!q) {  // all cells empty: valid step
                    for (auto& e : events) tr.witnesses.push_back(e);
                    return std::make_pair(removed, hhat);
                }
                if (witness_count == z) return std::nullopt;  // budget spent, leftovers remain
                const auto parts = constituents(db, rows, *q);
                bool fully_first = true;
                for (const TupleRef& t : parts)
                    fully_first = fully_first &&
                                  trial.in_first[static_cast<std::size_t>(t.relation)][static_cast<std::size_t>(t.row)];
                if (fully_first) return std::nullopt;  // witness inside Q(I1): wrong radius guess
                WitnessEvent ev;
                ev.witness = *q;
                ev.cube_radius = hhat;
                ev.cube_centers = rc.centers;
                events.push_back(std::move(ev));
                for (const TupleRef& t : parts)
                    if (std::find(removed.begin(), removed.end(), t) == removed.end()) removed.push_back(t);
            }
            return std::nullopt;
        };

        int lo = 0, hi = static_cast<int>(cands.size()) - 1;
        std::optional<std::pair<std::vector<TupleRef>, double>> kept;
        std::vector<WitnessEvent> kept_witnesses;
        while (lo <= hi) {
            const int mid = (lo + hi) / 2;
            PartitionTrial scratch;
            auto got = step(cands[static_cast<std::size_t>(mid)], scratch);
            if (got) {
                kept = std::move(got);
                kept_witnesses = std::move(scratch.witnesses);
                hi = mid - 1;
            } else {
                lo = mid + 1;
            }
        }
        if (kept) {
            trial.centers = rc.centers;
            trial.outliers = kept->first;
            trial.radius = kept->second;
            trial.witnesses = std::move(kept_witnesses);
            if (trial.radius < best_radius) {
                best_radius = trial.radius;
                res.best_trial = static_cast<int>(res.trials.size());
            }
        }
        res.trials.push_back(std::move(trial));
    }

    if (res.best_trial < 0) {  // no valid trial: fall back to plain clustering
        auto rc = rel_cluster(db, tree, k);
        res.solution.centers = rc.centers;
        res.solution.radius = radius_over_join(db, tree, full_mask(db), res.solution.centers);
        return res;
    }

    const PartitionTrial& best = res.trials[static_cast<std::size_t>(res.best_trial)];
    res.solution.outliers = best.outliers;
    auto mask = mask_without(db, best.outliers);
    SplitRng rng(opt.seed ^ 0xabcdef12345ull);
    for (const Point& p : best.centers) {
        JoinEvaluator cev(db, tree, Box::cube(p, best.radius), &mask);
        if (cev.count() == 0) continue;
        res.solution.centers.push_back(cev.sample(rng));
    }
    res.solution.radius = radius_over_join(db, tree, mask, res.solution.centers);
    return res;
}

}  // namespace setout
