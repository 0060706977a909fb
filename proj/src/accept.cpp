#include "setout/accept.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <mutex>
#include <set>

#include "setout/bbd_tree.hpp"
#include "setout/complement.hpp"
#include "setout/cso_disjoint.hpp"
#include "setout/cso_general.hpp"
#include "setout/gcso.hpp"
#include "setout/generators.hpp"
#include "setout/metric_core.hpp"
#include "setout/oracle_suite.hpp"
#include "setout/parallel.hpp"
#include "setout/range_tree.hpp"
#include "setout/relational_outliers.hpp"
#include "setout/wspd.hpp"

namespace setout {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// fuzz helpers, seeded and platform-stable
GeneralInstance fuzz_general(SplitRng& rng, int n, int m, int d, int max_f) {
    GeneralInstance g;
    g.n = n;
    g.metric = GeneralInstance::Metric::Euclidean;
    for (int i = 0; i < n; ++i) {
        Point p;
        for (int a = 0; a < d; ++a) p.push_back(rng.unit() * 10.0);
        g.points.push_back(std::move(p));
    }
    g.sets.assign(static_cast<std::size_t>(m), {});
    for (int i = 0; i < n; ++i) {
        g.sets[static_cast<std::size_t>(rng.below(m))].push_back(i);
        for (int extra = 1; extra < max_f; ++extra)
            if (rng.below(2) == 0) g.sets[static_cast<std::size_t>(rng.below(m))].push_back(i);
    }
    std::vector<std::vector<int>> sets;
    for (auto& s : g.sets) {
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
        if (!s.empty()) sets.push_back(std::move(s));
    }
    g.sets = std::move(sets);
    g.membership.assign(static_cast<std::size_t>(g.n), {});
    for (int j = 0; j < g.m(); ++j)
        for (int i : g.sets[static_cast<std::size_t>(j)]) g.membership[static_cast<std::size_t>(i)].push_back(j);
    return g;
}

GeometricInstance fuzz_geometric(SplitRng& rng, int n, int m, int d) {
    GeometricInstance g;
    for (int i = 0; i < n; ++i) {
        Point p;
        for (int a = 0; a < d; ++a) p.push_back(rng.unit() * 10.0);
        g.points.push_back(std::move(p));
    }
    for (int j = 0; j + 1 < m; ++j) {
        Point lo, hi;
        for (int a = 0; a < d; ++a) {
            const double c = rng.unit() * 10.0, w = 0.5 + rng.unit() * 4.0;
            lo.push_back(c - w);
            hi.push_back(c + w);
        }
        g.rects.push_back(Box::closed(lo, hi));
    }
    g.rects.push_back(Box::whole(d));
    return g;
}

GeometricInstance fuzz_disjoint_geometric(SplitRng& rng, int n, int m, int d) {
    GeometricInstance g;
    for (int i = 0; i < n; ++i) {
        Point p;
        for (int a = 0; a < d; ++a) p.push_back(rng.unit() * 10.0);
        g.points.push_back(std::move(p));
    }
    const double width = 10.0 / m;
    for (int j = 0; j < m; ++j) {
        Box b = Box::whole(d);
        b.iv[0] = Interval::closed(j * width, (j + 1) * width);
        b.iv[0].hi_strict = (j + 1 < m);
        if (j == 0) b.iv[0].lo_inf = true;
        if (j + 1 == m) b.iv[0].hi_inf = true;
        g.rects.push_back(std::move(b));
    }
    return g;
}

// independent nested-loop join, used against yannakakis counts
long long nested_loop_count(const RelationalDatabase& db) {
    long long out = 0;
    const int g = db.num_relations();
    std::function<void(int, std::vector<double>&, std::vector<char>&)> rec =
        [&](int rel, std::vector<double>& vals, std::vector<char>& set_mask) {
            if (rel == g) {
                ++out;
                return;
            }
            const auto& r = db.relations[static_cast<std::size_t>(rel)];
            for (const auto& t : r.tuples) {
                std::vector<double> nv = vals;
                std::vector<char> nm = set_mask;
                bool ok = true;
                for (std::size_t c = 0; c < r.attrs.size() && ok; ++c) {
                    const auto a = static_cast<std::size_t>(r.attrs[c]);
                    if (nm[a] && nv[a] != t[c]) ok = false;
                    nv[a] = t[c];
                    nm[a] = 1;
                }
                if (ok) rec(rel + 1, nv, nm);
            }
        };
    std::vector<double> vals(static_cast<std::size_t>(db.num_attrs()), 0.0);
    std::vector<char> mask(static_cast<std::size_t>(db.num_attrs()), 0);
    rec(0, vals, mask);
    return out;
}

struct Tally {
    std::atomic<int> failures{0};
    std::mutex mu;
    std::string first_failure;

    void fail(const std::string& what) {
        failures.fetch_add(1);
        std::lock_guard<std::mutex> lock(mu);
        if (first_failure.empty()) first_failure = what;
    }
    void require(bool ok, const std::string& what) {
        if (!ok) fail(what);
    }
};

CriterionResult criterion1_general_cso() {
    CriterionResult res{1, "general CSO tri-criteria vs brute force", false, 0, ""};
    const auto t0 = Clock::now();
    Tally tally;
    const CsoOptions opt;  // eps_lp = 0.05
    parallel_for(200, [&](int run) {
        SplitRng rng(1000 + static_cast<std::uint64_t>(run));
        const int n = 4 + rng.below(9);   // <= 12
        const int m = 2 + rng.below(4);   // <= 5
        auto g = fuzz_general(rng, n, m, 1 + rng.below(2), 1 + rng.below(3));  // f <= 3
        const Params p{1 + rng.below(3), 1 + rng.below(2), 0.2};
        const int f = g.frequency();
        TriSolution sol = solve_cso(g, p, opt);
        auto rep = validate_solution(g, sol, p, BoundsClaim{1e9, 1e9, 1e9});
        tally.require(rep.ok(), "structure on run " + std::to_string(run));
        const double ref = brute_force_cso(g, p).opt_radius;
        tally.require(rep.radius <= 2.0 * ref, "radius > 2 opt on run " + std::to_string(run));
        tally.require(static_cast<double>(sol.outliers.size()) <= 2.0 * f * p.z,
                      "|H| > 2fz on run " + std::to_string(run));
        tally.require(static_cast<double>(sol.centers.size()) <=
                          std::ceil(factors::center_bound(p.k, opt.eps_lp)),
                      "|C| over bound on run " + std::to_string(run));
    });
    res.seconds = seconds_since(t0);
    if (res.seconds >= 60.0) tally.fail("runtime over 60 s");
    res.passed = tally.failures.load() == 0;
    res.detail = res.passed ? "200 runs" : tally.first_failure;
    return res;
}

CriterionResult criterion2_disjoint_cso() {
    CriterionResult res{2, "disjoint CSO pipeline and coreset structure", false, 0, ""};
    const auto t0 = Clock::now();
    Tally tally;
    const CsoOptions opt;
    parallel_for(200, [&](int run) {
        SplitRng rng(2000 + static_cast<std::uint64_t>(run));
        const int n = 4 + rng.below(9);
        const int m = 2 + rng.below(4);
        auto g = fuzz_general(rng, n, m, 1 + rng.below(2), 1);  // f = 1
        const Params p{1 + rng.below(3), 1 + rng.below(2), 0.2};
        TriSolution sol = solve_cso_disjoint(g, p, opt);
        auto rep = validate_solution(g, sol, p, BoundsClaim{1e9, 1e9, 1e9});
        tally.require(rep.ok(), "structure on run " + std::to_string(run));
        const double ref = brute_force_cso(g, p).opt_radius;
        tally.require(rep.radius <= factors::kDisjointCost * ref, "radius > 30 opt on run " + std::to_string(run));
        tally.require(static_cast<int>(sol.outliers.size()) <= 2 * p.z, "|H| > 2z on run " + std::to_string(run));
        tally.require(static_cast<double>(sol.centers.size()) <=
                          std::ceil(factors::center_bound(p.k, opt.eps_lp)),
                      "|C| over bound on run " + std::to_string(run));
        // coreset structural bounds at feasible radii, on a slice of the runs
        if (run % 10 != 0) return;
        for (double r : enumerate_radii(g).values) {
            if (r < ref) continue;
            auto st1 = coreset_phase1(g, r, p);
            if (!st1) continue;
            auto st2 = coreset_phase2(g, *st1, p);
            if (!st2) continue;
            const auto alive = st2->alive_elements();
            const auto sets = st2->surviving_sets(g);
            if (alive.empty() || sets.empty() || st2->k_prime < 1 || st2->z_bar < 1) continue;
            GeneralInstance sub;
            sub.n = static_cast<int>(alive.size());
            sub.metric = GeneralInstance::Metric::Matrix;
            sub.dist_matrix.assign(alive.size(), std::vector<double>(alive.size(), 0));
            for (std::size_t a = 0; a < alive.size(); ++a)
                for (std::size_t b = 0; b < alive.size(); ++b)
                    sub.dist_matrix[a][b] = g.dist(alive[a], alive[b]);
            std::vector<int> rank(static_cast<std::size_t>(g.n), -1);
            for (std::size_t a = 0; a < alive.size(); ++a) rank[static_cast<std::size_t>(alive[a])] = static_cast<int>(a);
            for (int j : sets) {
                std::vector<int> mem;
                for (int i : g.sets[static_cast<std::size_t>(j)])
                    if (rank[static_cast<std::size_t>(i)] >= 0) mem.push_back(rank[static_cast<std::size_t>(i)]);
                sub.sets.push_back(mem);
            }
            sub.membership.assign(static_cast<std::size_t>(sub.n), {});
            for (int j = 0; j < sub.m(); ++j)
                for (int i : sub.sets[static_cast<std::size_t>(j)])
                    sub.membership[static_cast<std::size_t>(i)].push_back(j);
            const double coreset_opt = brute_force_cso(sub, Params{st2->k_prime, st2->z_bar, 0.2}).opt_radius;
            tally.require(coreset_opt <= factors::kCoresetCover * r + 1e-9,
                          "coreset optimum above 10r on run " + std::to_string(run));
        }
    });
    res.seconds = seconds_since(t0);
    res.passed = tally.failures.load() == 0;
    res.detail = res.passed ? "200 runs + coreset slices" : tally.first_failure;
    return res;
}

CriterionResult criterion3_mwu_engine() {
    CriterionResult res{3, "MWU engine slack, exact P sums, iteration budget", false, 0, ""};
    const auto t0 = Clock::now();
    Tally tally;
    parallel_for(60, [&](int run) {
        SplitRng rng(3000 + static_cast<std::uint64_t>(run));
        const double eps = run % 2 == 0 ? 0.1 : 0.05;
        const int k = 1 + rng.below(3), z = 1 + rng.below(2);
        if (run % 2 == 0) {  // dense systems
            auto g = fuzz_general(rng, 5 + rng.below(8), 2 + rng.below(4), 2, 2);
            const auto radii = enumerate_radii(g);
            const double r = radii.values[static_cast<std::size_t>(rng.below(static_cast<int>(radii.values.size())))];
            DenseOracle oracle = make_lp_oracle(g, r);
            auto out = mwu_solve(oracle, k, z, eps);
            tally.require(out.iterations <= mwu_iteration_budget(g.n, k, z, eps),
                          "iteration budget exceeded (dense)");
            if (!out.feasible) return;
            long long xs = 0, ys = 0;
            for (long long c : out.psi.x_counts) xs += c;
            for (long long c : out.psi.y_counts) ys += c;
            tally.require(xs <= static_cast<long long>(k) * out.psi.rounds &&
                              ys <= static_cast<long long>(z) * out.psi.rounds,
                          "P sums not exact (dense)");
            for (int i = 0; i < g.n; ++i) {
                double v = 0;
                for (int l : oracle.cover()[static_cast<std::size_t>(i)]) v += out.psi.x(static_cast<std::size_t>(l));
                for (int j : oracle.sets_of()[static_cast<std::size_t>(i)]) v += out.psi.y(static_cast<std::size_t>(j));
                tally.require(v >= 1.0 - eps - 1e-9, "constraint slack violated (dense)");
            }
        } else {  // geometric systems
            auto g = fuzz_geometric(rng, 10 + rng.below(20), 2 + rng.below(4), 1 + rng.below(3));
            double diam = 0;
            for (std::size_t i = 0; i < g.points.size(); ++i)
                for (std::size_t j = 0; j < g.points.size(); ++j)
                    diam = std::max(diam, dist_l2(g.points[i], g.points[j]));
            GeoLpSystem sys(g.points, g.rects, diam * (0.2 + rng.unit()), eps);
            auto out = mwu_solve(sys, k, z, eps);
            tally.require(out.iterations <= mwu_iteration_budget(g.n(), k, z, eps),
                          "iteration budget exceeded (geo)");
            if (!out.feasible) return;
            const auto cover = sys.materialize_cover();
            for (int i = 0; i < g.n(); ++i) {
                double v = 0;
                for (int l : cover[static_cast<std::size_t>(i)]) v += out.psi.x(static_cast<std::size_t>(l));
                for (int j = 0; j < g.m(); ++j)
                    if (g.rects[static_cast<std::size_t>(j)].contains(g.points[static_cast<std::size_t>(i)]))
                        v += out.psi.y(static_cast<std::size_t>(j));
                tally.require(v >= 1.0 - eps - 1e-9, "constraint slack violated (geo)");
            }
        }
    });
    res.seconds = seconds_since(t0);
    res.passed = tally.failures.load() == 0;
    res.detail = res.passed ? "60 solves" : tally.first_failure;
    return res;
}

CriterionResult criterion4_geo_indexes() {
    CriterionResult res{4, "BBD sandwich, range-tree exactness, WSPD cover, complement MC", false, 0, ""};
    const auto t0 = Clock::now();
    Tally tally;
    SplitRng rng(4000);
    // 500 BBD ball queries vs linear scans
    for (int d = 1; d <= 3; ++d) {
        std::vector<Point> pts;
        for (int i = 0; i < 200; ++i) {
            Point p;
            for (int a = 0; a < d; ++a) p.push_back(rng.unit() * 10.0);
            pts.push_back(std::move(p));
        }
        BbdTree tree(pts, 0.2);
        for (int q = 0; q < 167; ++q) {
            Point x;
            for (int a = 0; a < d; ++a) x.push_back(rng.unit() * 14.0 - 2.0);
            const double r = rng.unit() * 8.0;
            const double eps = q % 2 == 0 ? 0.1 : 0.3;
            std::set<int> got;
            for (int u : tree.ball_query(x, r, eps))
                for (int p : tree.points_in(u)) got.insert(p);
            for (std::size_t i = 0; i < pts.size(); ++i) {
                const double dd = dist_l2(pts[i], x);
                if (dd <= r) tally.require(got.count(static_cast<int>(i)) > 0, "BBD misses an in-ball point");
                if (dd > (1 + eps) * r) tally.require(got.count(static_cast<int>(i)) == 0, "BBD overshoots (1+eps)r");
            }
        }
        // range tree counts vs scans
        RangeTree rt(pts);
        for (int q = 0; q < 167; ++q) {
            Point lo, hi;
            for (int a = 0; a < d; ++a) {
                const double c1 = rng.unit() * 12.0 - 1.0, c2 = rng.unit() * 12.0 - 1.0;
                lo.push_back(std::min(c1, c2));
                hi.push_back(std::max(c1, c2));
            }
            const Box b = Box::closed(lo, hi);
            long long expect = 0;
            for (const auto& p : pts) expect += b.contains(p) ? 1 : 0;
            tally.require(rt.count(b) == expect, "range count mismatch");
        }
    }
    // WSPD cover for both epsilons
    for (double eps : {0.05, 0.2}) {
        std::vector<Point> pts;
        for (int i = 0; i < 40; ++i) pts.push_back({rng.unit() * 10.0, rng.unit() * 10.0});
        const auto radii = wspd_distances(pts, eps);
        for (std::size_t i = 0; i < pts.size(); ++i)
            for (std::size_t j = i + 1; j < pts.size(); ++j) {
                const double dd = dist_l2(pts[i], pts[j]);
                auto lo = std::lower_bound(radii.values.begin(), radii.values.end(), (1 - eps) * dd - 1e-12);
                tally.require(lo != radii.values.end() && *lo <= (1 + eps) * dd + 1e-12, "WSPD misses a pair");
            }
    }
    // complement Monte-Carlo partition
    for (int trial = 0; trial < 4; ++trial) {
        const int d = 1 + trial % 3;
        std::vector<Box> cubes;
        for (int c = 0; c < 1 + trial; ++c) {
            Point lo, hi;
            for (int a = 0; a < d; ++a) {
                const double base = rng.unit() * 8.0;
                lo.push_back(base);
                hi.push_back(base + 0.5 + rng.unit() * 2.5);
            }
            cubes.push_back(Box::closed(lo, hi));
        }
        const auto cells = cube_complement(cubes);
        for (int s = 0; s < 10000; ++s) {
            Point x;
            for (int a = 0; a < d; ++a) x.push_back(rng.unit() * 14.0 - 2.0);
            bool in_cube = false;
            for (const auto& c : cubes) in_cube |= c.contains(x);
            int in_cells = 0;
            for (const auto& cell : cells) in_cells += cell.contains(x) ? 1 : 0;
            tally.require(in_cells == (in_cube ? 0 : 1), "complement partition breaks");
        }
    }
    res.seconds = seconds_since(t0);
    if (res.seconds >= 30.0) tally.fail("runtime over 30 s");
    res.passed = tally.failures.load() == 0;
    res.detail = res.passed ? "500+500 queries, WSPD, 4x10k MC" : tally.first_failure;
    return res;
}

CriterionResult criterion5_gcso() {
    CriterionResult res{5, "GCSO solvers and tree/dense equality", false, 0, ""};
    const auto t0 = Clock::now();
    Tally tally;
    parallel_for(24, [&](int run) {
        SplitRng rng(5000 + static_cast<std::uint64_t>(run));
        const int d = 1 + run % 3;
        const int n = run % 6 == 0 ? 40 + rng.below(21) : 8 + rng.below(20);  // up to 60
        const int m = 2 + rng.below(7);                                       // <= 8
        auto g = fuzz_geometric(rng, n, m, d);
        const Params p{1 + rng.below(2), 1 + rng.below(2), 0.2};
        const int f = g.frequency();
        TriSolution sol = solve_gcso(g, p);
        auto rep = validate_solution(g, sol, p, BoundsClaim{1e9, 1e9, 1e9});
        tally.require(rep.ok(), "gcso structure");
        const double ref = brute_force_cso(g, p).opt_radius;
        tally.require(rep.radius <= (2 + p.eps) * (1 + p.eps) * (1 + p.eps) * ref + 1e-12, "gcso radius bound");
        tally.require(static_cast<double>(sol.centers.size()) <= (2 + p.eps) * p.k, "gcso |C| bound");
        tally.require(static_cast<double>(sol.outliers.size()) <= 2.0 * f * p.z, "gcso |R| bound");

        // exact tree/dense coefficient agreement on dyadic sigma
        GeoLpSystem sys(g.points, g.rects, 0.3 + rng.unit() * 5.0, 0.2);
        std::vector<double> sigma(static_cast<std::size_t>(n));
        for (auto& s : sigma) s = static_cast<double>(1 + rng.below(1 << 20)) * 0x1.0p-20;
        std::vector<double> w, tau;
        sys.coefficients(sigma, w, tau);
        const auto cover = sys.materialize_cover();
        std::vector<double> w_ref(static_cast<std::size_t>(n), 0.0), tau_ref(static_cast<std::size_t>(m), 0.0);
        for (int i = 0; i < n; ++i) {
            for (int l : cover[static_cast<std::size_t>(i)]) w_ref[static_cast<std::size_t>(l)] += sigma[static_cast<std::size_t>(i)];
            for (int j = 0; j < m; ++j)
                if (g.rects[static_cast<std::size_t>(j)].contains(g.points[static_cast<std::size_t>(i)]))
                    tau_ref[static_cast<std::size_t>(j)] += sigma[static_cast<std::size_t>(i)];
        }
        tally.require(w == w_ref && tau == tau_ref, "tree/dense coefficients differ");
    });
    parallel_for(12, [&](int run) {
        SplitRng rng(5600 + static_cast<std::uint64_t>(run));
        const int d = 1 + run % 2;
        auto g = fuzz_disjoint_geometric(rng, 7 + rng.below(10), 2 + rng.below(3), d);
        const Params p{1 + rng.below(2), 1 + rng.below(2), 0.25};
        TriSolution sol = solve_gcso_disjoint(g, p);
        auto rep = validate_solution(g, sol, p, BoundsClaim{1e9, 1e9, 1e9});
        tally.require(rep.ok(), "gcso-disjoint structure");
        const double ref = brute_force_cso(g, p).opt_radius;
        tally.require(rep.radius <= factors::gcso_disjoint_cost_factor(p.eps) * ref + 1e-12,
                      "gcso-disjoint radius bound");
        tally.require(static_cast<int>(sol.outliers.size()) <= 2 * p.z, "gcso-disjoint |R| bound");
        tally.require(static_cast<double>(sol.centers.size()) <= (2 + p.eps) * p.k, "gcso-disjoint |C| bound");
    });
    res.seconds = seconds_since(t0);
    res.passed = tally.failures.load() == 0;
    res.detail = res.passed ? "24 gcso + 12 disjoint runs" : tally.first_failure;
    return res;
}

CriterionResult criterion6_relational_substrate() {
    CriterionResult res{6, "Yannakakis counts, rect oracles, L-infinity selection", false, 0, ""};
    const auto t0 = Clock::now();
    Tally tally;
    parallel_for(100, [&](int run) {
        SplitRng rng(6000 + static_cast<std::uint64_t>(run));
        RelationalGenOptions gopt;
        gopt.seed = 60000 + static_cast<std::uint64_t>(run);
        gopt.relations = 2 + static_cast<int>(rng.next() % 2);
        gopt.tuples_per_relation = 3 + rng.below(5);
        gopt.key_pool = 2 + rng.below(2);
        gopt.planted_bad = rng.below(2);
        auto db = gen_relational(gopt);
        if (db.total_tuples() > 60) return;
        auto tree = build_join_tree(db);
        if (!tree) {
            tally.fail("generator produced a cyclic schema");
            return;
        }
        JoinEvaluator ev(db, *tree);
        tally.require(ev.count() == nested_loop_count(db), "count differs from nested loop");

        // partition additivity over a small cube cover
        std::vector<Box> cubes;
        for (int c = 0; c < 1 + rng.below(2); ++c) {
            Point lo, hi;
            for (int a = 0; a < db.num_attrs(); ++a) {
                const double base = rng.unit() * 10.0 - 2.0;
                lo.push_back(base);
                hi.push_back(base + 1.0 + rng.unit() * 6.0);
            }
            cubes.push_back(Box::closed(lo, hi));
        }
        long long outside = 0;
        for (const Box& cell : cube_complement(cubes)) outside += count_rect(db, *tree, cell);
        long long inside = 0;
        ev.enumerate([&](const Point& q) {
            bool in = false;
            for (const auto& c : cubes) in |= c.contains(q);
            inside += in ? 1 : 0;
            return true;
        });
        tally.require(outside + inside == ev.count(), "complement counts not additive");

        // L-infinity selection vs the materialized all-pairs list
        if (ev.count() >= 2 && ev.count() <= 200) {
            auto pts = ev.materialize(200);
            std::vector<double> all;
            for (std::size_t i = 0; i < pts.size(); ++i)
                for (std::size_t j = i + 1; j < pts.size(); ++j) all.push_back(dist_linf(pts[i], pts[j]));
            std::sort(all.begin(), all.end());
            const long long ell = 1 + static_cast<long long>(rng.below(static_cast<int>(all.size())));
            tally.require(linf_kth_distance(db, *tree, ell) == all[static_cast<std::size_t>(ell - 1)],
                          "linf k-th distance mismatch");
        }
    });
    // chi-squared uniformity over a 12-result join
    {
        RelationalDatabase db;
        db.attr_names = {"A", "B"};
        db.relations.resize(2);
        db.relations[0].name = "R1";
        db.relations[0].attrs = {0};
        for (int i = 0; i < 4; ++i) db.relations[0].tuples.push_back({static_cast<double>(i)});
        db.relations[1].name = "R2";
        db.relations[1].attrs = {0, 1};
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 3; ++j)
                db.relations[1].tuples.push_back({static_cast<double>(i), static_cast<double>(j)});
        auto tree = build_join_tree(db);
        JoinEvaluator ev(db, *tree);
        SplitRng rng(777);
        std::map<std::vector<double>, int> freq;
        const int draws = 10000;
        for (int i = 0; i < draws; ++i) ++freq[ev.sample(rng)];
        const double expected = draws / 12.0;
        double chi2 = 0;
        for (const auto& [pt, f] : freq) chi2 += (f - expected) * (f - expected) / expected;
        tally.require(freq.size() == 12 && chi2 < 31.264, "sampling fails the chi-squared gate");
    }
    res.seconds = seconds_since(t0);
    res.passed = tally.failures.load() == 0;
    res.detail = res.passed ? "100 databases + chi2" : tally.first_failure;
    return res;
}

CriterionResult criterion7_rcro() {
    CriterionResult res{7, "RCRO joint success rate vs exhaustive optimum", false, 0, ""};
    const auto t0 = Clock::now();
    std::atomic<int> success{0}, runs{0};
    parallel_for(50, [&](int run) {
        SplitRng rng(7000 + static_cast<std::uint64_t>(run));
        RelationalGenOptions gopt;
        gopt.seed = 70000 + static_cast<std::uint64_t>(run);
        gopt.relations = 2;
        gopt.tuples_per_relation = 4 + rng.below(3);
        gopt.key_pool = 2;
        gopt.planted_bad = 1;
        auto db = gen_relational(gopt);
        auto tree = build_join_tree(db);
        if (!tree) return;
        JoinEvaluator ev(db, *tree);
        const long long q = ev.count();
        if (q < 5 || q > 40) return;
        // delta = z/|Q| inside [0.05, 0.25]
        const int z = std::max<long long>(1, q / 8);
        if (static_cast<double>(z) / static_cast<double>(q) < 0.05 ||
            static_cast<double>(z) / static_cast<double>(q) > 0.25)
            return;
        const int k = 1 + rng.below(2);
        runs.fetch_add(1);
        RelOptions opt;
        opt.eps = 0.3;
        opt.seed = 31 + static_cast<std::uint64_t>(run);
        auto sol = solve_rcro(db, *tree, k, z, opt);
        auto pts = ev.materialize(64);
        auto ref = exhaustive_kcenter_outliers(pts, k, z);
        const bool ok = sol.radius <= factors::rcro_cost_factor(opt.eps) * ref.radius + 1e-9 &&
                        static_cast<double>(sol.result_outliers.size()) <=
                            factors::rcro_outlier_factor(opt.eps) * z;
        if (ok) success.fetch_add(1);
    });
    res.seconds = seconds_since(t0);
    res.passed = runs.load() >= 25 && success.load() * 10 >= runs.load() * 9;
    res.detail = std::to_string(success.load()) + "/" + std::to_string(runs.load()) + " joint successes";
    return res;
}

CriterionResult criterion8_rcto1() {
    CriterionResult res{8, "RCTO1 bounds vs exhaustive relation-0 enumeration", false, 0, ""};
    const auto t0 = Clock::now();
    Tally tally;
    std::atomic<int> runs{0};
    parallel_for(16, [&](int trial) {
        SplitRng rng(8000 + static_cast<std::uint64_t>(trial));
        RelationalGenOptions gopt;
        gopt.seed = 80000 + static_cast<std::uint64_t>(trial);
        gopt.relations = 2;
        gopt.tuples_per_relation = 4 + rng.below(3);  // |R1| <= 6
        gopt.key_pool = 2;
        gopt.planted_bad = trial % 2;
        auto db = gen_relational(gopt);
        if (db.total_tuples() > 30) return;
        auto tree = build_join_tree(db);
        if (!tree) return;
        JoinEvaluator ev(db, *tree);
        if (ev.count() < 2 || ev.count() > 80) return;
        runs.fetch_add(1);
        const int k = 1 + rng.below(2), z = 1 + rng.below(2);
        RelOptions opt;
        opt.eps = 0.25;
        auto sol = solve_rcto1(db, *tree, k, z, opt);
        tally.require(static_cast<int>(sol.outliers.size()) <= 2 * z, "rcto1 |T| > 2z");
        for (const auto& t : sol.outliers) tally.require(t.relation == 0, "rcto1 outlier outside R1");
        const double ref = exhaustive_rcto1_opt(db, *tree, k, z);
        tally.require(sol.radius <= factors::rcto1_cost_factor(db.num_attrs(), opt.eps) * ref + 1e-9,
                      "rcto1 radius over the pinned product");
    });
    res.seconds = seconds_since(t0);
    res.passed = tally.failures.load() == 0 && runs.load() >= 8;
    res.detail = res.passed ? std::to_string(runs.load()) + " runs" : tally.first_failure;
    return res;
}

CriterionResult criterion9_rcto() {
    CriterionResult res{9, "RCTO FPT success rate and witness replay", false, 0, ""};
    const auto t0 = Clock::now();
    std::atomic<int> success{0}, runs{0};
    Tally tally;
    parallel_for(30, [&](int run) {
        const int inst = run / 5, seed = run % 5;
        SplitRng rng(9000 + static_cast<std::uint64_t>(inst));
        RelationalGenOptions gopt;
        gopt.seed = 90000 + static_cast<std::uint64_t>(inst);
        gopt.relations = 2;  // d = 3 attributes
        gopt.tuples_per_relation = 4 + inst % 2;
        gopt.key_pool = 2;
        gopt.planted_bad = 1;
        auto db = gen_relational(gopt);
        if (db.total_tuples() > 24) return;
        auto tree = build_join_tree(db);
        if (!tree) return;
        JoinEvaluator ev(db, *tree);
        if (ev.count() < 2) return;
        const int k = 1 + inst % 2, z = 1 + (inst / 2) % 2;
        const double ref = exhaustive_rcto_opt(db, *tree, k, z);
        runs.fetch_add(1);
        RelOptions opt;
        opt.eps = 0.2;
        opt.seed = 1000 * static_cast<std::uint64_t>(inst) + static_cast<std::uint64_t>(seed);
        auto out = solve_rcto(db, *tree, k, z, opt);
        const bool ok = out.solution.radius <= factors::rcto_cost_factor(db.num_attrs()) * ref + 1e-9 &&
                        static_cast<int>(out.solution.outliers.size()) <= db.num_relations() * z &&
                        static_cast<int>(out.solution.centers.size()) <= k;
        if (ok) success.fetch_add(1);
        if (out.best_trial >= 0) {
            for (const auto& evnt : out.trials[static_cast<std::size_t>(out.best_trial)].witnesses) {
                double best = inf();
                for (const auto& c : evnt.cube_centers) best = std::min(best, dist_linf(evnt.witness, c));
                tally.require(best > evnt.cube_radius, "witness inside a cube");
            }
        }
    });
    res.seconds = seconds_since(t0);
    res.passed = runs.load() >= 20 && success.load() * 10 >= runs.load() * 9 && tally.failures.load() == 0;
    res.detail = std::to_string(success.load()) + "/" + std::to_string(runs.load()) + " successes" +
                 (tally.failures.load() ? ", " + tally.first_failure : "");
    return res;
}

CriterionResult criterion10_hardness_sanity() {
    CriterionResult res{10, "set-cover reduction: radius 0 at z = cover opt, positive below", false, 0, ""};
    const auto t0 = Clock::now();
    Tally tally;
    std::atomic<int> used{0};
    int seed = 0;
    while (used.load() < 20 && seed < 200) {
        SplitRng rng(static_cast<std::uint64_t>(10000 + seed));
        ++seed;
        const int nx = 3 + rng.below(4);  // |X| <= 6
        std::vector<std::vector<int>> Y;
        for (int j = 0; j < 4; ++j) {
            std::vector<int> y;
            for (int x = 0; x < nx; ++x)
                if (rng.below(2) == 0) y.push_back(x);
            if (!y.empty()) Y.push_back(y);
        }
        std::vector<bool> cov(static_cast<std::size_t>(nx), false);
        for (auto& y : Y)
            for (int x : y) cov[static_cast<std::size_t>(x)] = true;
        for (int x = 0; x < nx; ++x)
            if (!cov[static_cast<std::size_t>(x)]) Y.push_back({x});
        // exhaustive minimum cover
        int opt_cover = static_cast<int>(Y.size());
        for (int mask = 1; mask < (1 << Y.size()); ++mask) {
            std::vector<bool> c(static_cast<std::size_t>(nx), false);
            for (std::size_t j = 0; j < Y.size(); ++j)
                if (mask & (1 << j))
                    for (int x : Y[j]) c[static_cast<std::size_t>(x)] = true;
            if (std::all_of(c.begin(), c.end(), [](bool b) { return b; }))
                opt_cover = std::min(opt_cover, __builtin_popcount(static_cast<unsigned>(mask)));
        }
        if (opt_cover < 2) continue;  // need z-1 >= 1 for the lower check
        used.fetch_add(1);
        const int k = std::max(1, nx / 2);
        auto g = setcover_to_cso(nx, Y, k);
        TriSolution sol = solve_cso(g, Params{k, opt_cover, 0.2});
        tally.require(sol.radius == 0.0, "reduction instance not solved to zero");
        tally.require(brute_force_cso(g, Params{k, opt_cover - 1, 0.2}).opt_radius > 0.0,
                      "radius zero below the cover optimum");
    }
    res.seconds = seconds_since(t0);
    res.passed = tally.failures.load() == 0 && used.load() >= 20;
    res.detail = res.passed ? "20 reductions" : tally.first_failure;
    return res;
}

}  // namespace

std::vector<CriterionResult> run_acceptance() {
    std::vector<CriterionResult> out;
    out.push_back(criterion1_general_cso());
    out.push_back(criterion2_disjoint_cso());
    out.push_back(criterion3_mwu_engine());
    out.push_back(criterion4_geo_indexes());
    out.push_back(criterion5_gcso());
    out.push_back(criterion6_relational_substrate());
    out.push_back(criterion7_rcro());
    out.push_back(criterion8_rcto1());
    out.push_back(criterion9_rcto());
    out.push_back(criterion10_hardness_sanity());
    return out;
}

int acceptance_main() {
    const auto results = run_acceptance();
    bool all_ok = true;
    for (const auto& r : results) {
        std::printf("[%s] criterion %2d: %s (%.1fs) %s\n", r.passed ? "PASS" : "FAIL", r.id, r.name.c_str(),
                    r.seconds, r.detail.c_str());
        all_ok = all_ok && r.passed;
    }
    return all_ok ? 0 : 1;
}

}  // namespace setout
