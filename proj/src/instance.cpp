#include "setout/instance.hpp"

#include <algorithm>

namespace setout {

GeneralInstance GeometricInstance::to_general() const {
    GeneralInstance g;
    g.n = n();
    g.metric = GeneralInstance::Metric::Euclidean;
    g.points = points;
    g.sets.resize(static_cast<std::size_t>(m()));
    for (int j = 0; j < m(); ++j) {
        for (int i = 0; i < n(); ++i)
            if (rects[static_cast<std::size_t>(j)].contains(points[static_cast<std::size_t>(i)]))
                g.sets[static_cast<std::size_t>(j)].push_back(i);
    }
    g.membership.resize(static_cast<std::size_t>(g.n));
    for (int j = 0; j < g.m(); ++j)
        for (int i : g.sets[static_cast<std::size_t>(j)]) g.membership[static_cast<std::size_t>(i)].push_back(j);
    return g;
}

namespace {

template <class DistFn>
double cost_impl(int n, DistFn&& dist, const std::vector<int>& centers, const std::vector<bool>& excluded) {
    double worst = 0.0;
    bool any_survivor = false;
    for (int i = 0; i < n; ++i) {
        if (!excluded.empty() && excluded[static_cast<std::size_t>(i)]) continue;
        any_survivor = true;
        double best = inf();
        for (int c : centers) best = std::min(best, dist(i, c));
        worst = std::max(worst, best);
    }
    if (!any_survivor) return 0.0;
    return centers.empty() ? inf() : worst;
}

}  // namespace

double clustering_cost(const GeneralInstance& inst, const std::vector<int>& centers,
                       const std::vector<bool>& excluded) {
    return cost_impl(inst.n, [&](int i, int c) { return inst.dist(i, c); }, centers, excluded);
}

double clustering_cost(const std::vector<Point>& pts, const std::vector<int>& centers,
                       const std::vector<bool>& excluded) {
    return cost_impl(static_cast<int>(pts.size()),
                     [&](int i, int c) {
                         return dist_l2(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(c)]);
                     },
                     centers, excluded);
}

std::vector<bool> excluded_mask_general(const GeneralInstance& inst, const std::vector<int>& outlier_sets) {
    std::vector<bool> out(static_cast<std::size_t>(inst.n), false);
    for (int j : outlier_sets)
        for (int i : inst.sets[static_cast<std::size_t>(j)]) out[static_cast<std::size_t>(i)] = true;
    return out;
}

std::vector<bool> excluded_mask_geometric(const GeometricInstance& inst, const std::vector<int>& outlier_rects) {
    std::vector<bool> out(static_cast<std::size_t>(inst.n()), false);
    for (int j : outlier_rects)
        for (int i = 0; i < inst.n(); ++i)
            if (inst.rects[static_cast<std::size_t>(j)].contains(inst.points[static_cast<std::size_t>(i)]))
                out[static_cast<std::size_t>(i)] = true;
    return out;
}

TriSolution make_solution(const GeneralInstance& inst, std::vector<int> centers, std::vector<int> outlier_sets,
                          BoundsClaim bounds) {
    TriSolution s;
    s.centers = std::move(centers);
    s.outliers = std::move(outlier_sets);
    s.bounds = bounds;
    s.radius = clustering_cost(inst, s.centers, excluded_mask_general(inst, s.outliers));
    return s;
}

TriSolution make_solution(const GeometricInstance& inst, std::vector<int> centers, std::vector<int> outlier_rects,
                          BoundsClaim bounds) {
    TriSolution s;
    s.centers = std::move(centers);
    s.outliers = std::move(outlier_rects);
    s.bounds = bounds;
    s.radius = clustering_cost(inst.points, s.centers, excluded_mask_geometric(inst, s.outliers));
    return s;
}

namespace {

ValidityReport validate_impl(int n, int m, const std::vector<bool>& excluded,
                             const std::vector<Point>* pts, const GeneralInstance* gen,
                             const TriSolution& sol, const Params& p, const BoundsClaim& mu) {
    ValidityReport r;
    for (int c : sol.centers)
        if (c < 0 || c >= n) {
            r.indices_ok = false;
            r.problems.push_back("center index out of range: " + std::to_string(c));
        }
    for (int j : sol.outliers)
        if (j < 0 || j >= m) {
            r.indices_ok = false;
            r.problems.push_back("outlier index out of range: " + std::to_string(j));
        }
    if (!r.indices_ok) return r;

    for (int c : sol.centers)
        if (excluded[static_cast<std::size_t>(c)]) {
            r.disjoint_ok = false;
            r.problems.push_back("center " + std::to_string(c) + " lies inside the chosen outlier union");
        }
    if (static_cast<double>(sol.centers.size()) > mu.mu_centers * p.k) {
        r.centers_within = false;
        r.problems.push_back("|C| = " + std::to_string(sol.centers.size()) + " exceeds mu1*k");
    }
    if (static_cast<double>(sol.outliers.size()) > mu.mu_outliers * p.z) {
        r.outliers_within = false;
        r.problems.push_back("|H| = " + std::to_string(sol.outliers.size()) + " exceeds mu2*z");
    }
    r.radius = gen ? clustering_cost(*gen, sol.centers, excluded)
                   : clustering_cost(*pts, sol.centers, excluded);
    return r;
}

}  // namespace

ValidityReport validate_solution(const GeneralInstance& inst, const TriSolution& sol, const Params& p,
                                 const BoundsClaim& mu) {
    std::vector<bool> excluded(static_cast<std::size_t>(inst.n), false);
    bool index_bad = false;
    for (int j : sol.outliers) {
        if (j < 0 || j >= inst.m()) {
            index_bad = true;
            continue;
        }
        for (int i : inst.sets[static_cast<std::size_t>(j)]) excluded[static_cast<std::size_t>(i)] = true;
    }
    (void)index_bad;
    return validate_impl(inst.n, inst.m(), excluded, nullptr, &inst, sol, p, mu);
}

ValidityReport validate_solution(const GeometricInstance& inst, const TriSolution& sol, const Params& p,
                                 const BoundsClaim& mu) {
    std::vector<bool> excluded(static_cast<std::size_t>(inst.n()), false);
    for (int j : sol.outliers) {
        if (j < 0 || j >= inst.m()) continue;
        for (int i = 0; i < inst.n(); ++i)
            if (inst.rects[static_cast<std::size_t>(j)].contains(inst.points[static_cast<std::size_t>(i)]))
                excluded[static_cast<std::size_t>(i)] = true;
    }
    return validate_impl(inst.n(), inst.m(), excluded, &inst.points, nullptr, sol, p, mu);
}

ValidityReport validate_solution(const Instance& inst, const TriSolution& sol, const Params& p,
                                 const BoundsClaim& mu) {
    if (std::holds_alternative<GeneralInstance>(inst))
        return validate_solution(std::get<GeneralInstance>(inst), sol, p, mu);
    return validate_solution(std::get<GeometricInstance>(inst), sol, p, mu);
}

}  // namespace setout
