#include "setout/oracle_suite.hpp"

#include <algorithm>
#include <cassert>

namespace setout {

namespace {

// all subsets of {0..n-1} with size <= kmax, by size then lexicographic
void for_each_subset(int n, int kmax, const std::function<void(const std::vector<int>&)>& fn) {
    std::vector<int> cur;
    fn(cur);
    std::function<void(int, int)> rec = [&](int start, int left) {
        if (left == 0) return;
        for (int i = start; i < n; ++i) {
            cur.push_back(i);
            fn(cur);
            rec(i + 1, left - 1);
            cur.pop_back();
        }
    };
    rec(0, std::min(kmax, n));
}

double radius_dropping_farthest(const std::vector<Point>& pts, const std::vector<int>& centers, int z) {
    std::vector<double> mind;
    mind.reserve(pts.size());
    for (const auto& p : pts) {
        double best = inf();
        for (int c : centers) best = std::min(best, dist_l2(p, pts[static_cast<std::size_t>(c)]));
        mind.push_back(best);
    }
    std::sort(mind.begin(), mind.end());
    const int keep = static_cast<int>(pts.size()) - z;
    if (keep <= 0) return 0.0;
    return mind[static_cast<std::size_t>(keep - 1)];
}

}  // namespace

KcwoOpt exhaustive_kcenter_outliers(const std::vector<Point>& pts, int k, int z) {
    KcwoOpt best;
    best.radius = inf();
    const int n = static_cast<int>(pts.size());
    if (n == 0) {
        best.radius = 0.0;
        return best;
    }
    if (z >= n) {
        best.radius = 0.0;
        for (int i = 0; i < n; ++i) best.outliers.push_back(i);
        return best;
    }
    for_each_subset(n, k, [&](const std::vector<int>& centers) {
        if (centers.empty()) return;
        const double r = radius_dropping_farthest(pts, centers, z);
        if (r < best.radius) {
            best.radius = r;
            best.centers = centers;
        }
    });
    // reconstruct the dropped points for the winning centers
    std::vector<std::pair<double, int>> mind;
    for (int i = 0; i < n; ++i) {
        double bestd = inf();
        for (int c : best.centers) bestd = std::min(bestd, dist_l2(pts[static_cast<std::size_t>(i)], pts[static_cast<std::size_t>(c)]));
        mind.push_back({bestd, i});
    }
    std::sort(mind.begin(), mind.end());
    for (int i = n - z; i < n; ++i) best.outliers.push_back(mind[static_cast<std::size_t>(i)].second);
    std::sort(best.outliers.begin(), best.outliers.end());
    return best;
}

double exhaustive_kcenter(const std::vector<Point>& pts, int k) {
    return exhaustive_kcenter_outliers(pts, k, 0).radius;
}

namespace {

double exhaustive_masked_opt(const RelationalDatabase& db, const JoinTree& tree, int k, int z,
                             const std::vector<std::pair<int, int>>& pool, long long cap) {
    double best = inf();
    std::vector<std::vector<char>> mask(static_cast<std::size_t>(db.num_relations()));
    for (int i = 0; i < db.num_relations(); ++i)
        mask[static_cast<std::size_t>(i)].assign(db.relations[static_cast<std::size_t>(i)].tuples.size(), 1);

    std::function<void(std::size_t, int)> rec = [&](std::size_t start, int left) {
        {
            JoinEvaluator ev(db, tree, Box::whole(db.num_attrs()), &mask);
            double r;
            if (ev.count() == 0) {
                r = 0.0;
            } else {
                const auto pts = ev.materialize(cap);
                r = exhaustive_kcenter(pts, k);
            }
            best = std::min(best, r);
        }
        if (left == 0) return;
        for (std::size_t i = start; i < pool.size(); ++i) {
            mask[static_cast<std::size_t>(pool[i].first)][static_cast<std::size_t>(pool[i].second)] = 0;
            rec(i + 1, left - 1);
            mask[static_cast<std::size_t>(pool[i].first)][static_cast<std::size_t>(pool[i].second)] = 1;
        }
    };
    rec(0, z);
    return best;
}

}  // namespace

double exhaustive_rcto1_opt(const RelationalDatabase& db, const JoinTree& tree, int k, int z, long long cap) {
    std::vector<std::pair<int, int>> pool;
    for (std::size_t t = 0; t < db.relations[0].tuples.size(); ++t) pool.push_back({0, static_cast<int>(t)});
    return exhaustive_masked_opt(db, tree, k, z, pool, cap);
}

double exhaustive_rcto_opt(const RelationalDatabase& db, const JoinTree& tree, int k, int z, long long cap) {
    std::vector<std::pair<int, int>> pool;
    for (int i = 0; i < db.num_relations(); ++i)
        for (std::size_t t = 0; t < db.relations[static_cast<std::size_t>(i)].tuples.size(); ++t)
            pool.push_back({i, static_cast<int>(t)});
    return exhaustive_masked_opt(db, tree, k, z, pool, cap);
}

}  // namespace setout
