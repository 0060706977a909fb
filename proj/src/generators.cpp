#include "setout/generators.hpp"

#include <algorithm>
#include <cmath>

#include "setout/metric_core.hpp"

namespace setout {

namespace {

double snap(double v) { return std::round(v * 16.0) / 16.0; }  // dyadic grid keeps files byte-stable

struct CorePoints {
    std::vector<Point> pts;
    std::vector<int> cluster_of;
    int core_count = 0;  // junk points follow the core ones
};

CorePoints make_points(SplitRng& rng, const ClusterGenOptions& opt) {
    CorePoints out;
    std::vector<Point> centers;
    for (int c = 0; c < opt.clusters; ++c) {
        Point ctr;
        for (int a = 0; a < opt.dim; ++a) ctr.push_back(snap(rng.unit() * 10.0));
        centers.push_back(ctr);
    }
    for (int c = 0; c < opt.clusters; ++c)
        for (int i = 0; i < opt.points_per_cluster; ++i) {
            Point p;
            for (int a = 0; a < opt.dim; ++a)
                p.push_back(snap(centers[static_cast<std::size_t>(c)][static_cast<std::size_t>(a)] +
                                 (rng.unit() * 2.0 - 1.0) * opt.cluster_radius));
            out.pts.push_back(std::move(p));
            out.cluster_of.push_back(c);
        }
    out.core_count = static_cast<int>(out.pts.size());
    for (int s = 0; s < opt.planted_sets; ++s)
        for (int i = 0; i < opt.junk_per_set; ++i) {
            Point p;
            for (int a = 0; a < opt.dim; ++a)
                p.push_back(snap(opt.junk_offset * (s + 1) + rng.unit() * opt.cluster_radius));
            out.pts.push_back(std::move(p));
            out.cluster_of.push_back(-1 - s);
        }
    return out;
}

}  // namespace

GeneralInstance gen_clustered_general(const ClusterGenOptions& opt) {
    SplitRng rng(opt.seed);
    CorePoints cp = make_points(rng, opt);
    GeneralInstance g;
    g.n = static_cast<int>(cp.pts.size());
    g.metric = GeneralInstance::Metric::Euclidean;
    g.points = cp.pts;
    g.sets.assign(static_cast<std::size_t>(opt.cover_sets + opt.planted_sets), {});
    for (int i = 0; i < cp.core_count; ++i) {
        g.sets[static_cast<std::size_t>(rng.below(opt.cover_sets))].push_back(i);
        for (int extra = 1; extra < opt.max_f; ++extra)
            if (rng.below(2) == 0) g.sets[static_cast<std::size_t>(rng.below(opt.cover_sets))].push_back(i);
    }
    for (int i = cp.core_count; i < g.n; ++i) {
        const int s = -1 - cp.cluster_of[static_cast<std::size_t>(i)];
        g.sets[static_cast<std::size_t>(opt.cover_sets + s)].push_back(i);
    }
    for (auto& s : g.sets) {
        std::sort(s.begin(), s.end());
        s.erase(std::unique(s.begin(), s.end()), s.end());
    }
    // drop empty cover sets so loaded instances validate
    std::vector<std::vector<int>> sets;
    for (auto& s : g.sets)
        if (!s.empty()) sets.push_back(std::move(s));
    g.sets = std::move(sets);
    g.membership.assign(static_cast<std::size_t>(g.n), {});
    for (int j = 0; j < g.m(); ++j)
        for (int i : g.sets[static_cast<std::size_t>(j)]) g.membership[static_cast<std::size_t>(i)].push_back(j);
    return g;
}

GeometricInstance gen_clustered_geometric(const ClusterGenOptions& opt) {
    SplitRng rng(opt.seed);
    CorePoints cp = make_points(rng, opt);
    GeometricInstance g;
    g.points = cp.pts;
    // one tight rectangle per junk group, then core slabs along axis 0
    const double width = 30.0 / std::max(1, opt.cover_sets);
    for (int s = 0; s < opt.cover_sets; ++s) {
        Box b = Box::whole(opt.dim);
        b.iv[0] = Interval::closed(-10.0 + s * width, -10.0 + (s + 1) * width);
        b.iv[0].hi_strict = (s + 1 < opt.cover_sets);
        if (s == 0) b.iv[0].lo_inf = true;
        if (s + 1 == opt.cover_sets) b.iv[0].hi_inf = true;
        // keep the core slabs away from the junk offsets
        b.iv[0].hi_inf = false;
        b.iv[0].hi = (s + 1 == opt.cover_sets) ? opt.junk_offset / 2.0 : -10.0 + (s + 1) * width;
        g.rects.push_back(std::move(b));
    }
    for (int s = 0; s < opt.planted_sets; ++s) {
        Point lo, hi;
        for (int a = 0; a < opt.dim; ++a) {
            lo.push_back(opt.junk_offset * (s + 1) - 2.0);
            hi.push_back(opt.junk_offset * (s + 1) + opt.cluster_radius + 2.0);
        }
        g.rects.push_back(Box::closed(lo, hi));
    }
    return g;
}

GeneralInstance gen_setcover_instance(const SetCoverGenOptions& opt) {
    SplitRng rng(opt.seed);
    std::vector<std::vector<int>> cover(static_cast<std::size_t>(opt.sets));
    for (int x = 0; x < opt.universe; ++x) {
        // every element in >= 1 set
        cover[static_cast<std::size_t>(rng.below(opt.sets))].push_back(x);
        for (int j = 0; j < opt.sets; ++j)
            if (rng.below(3) == 0) cover[static_cast<std::size_t>(j)].push_back(x);
    }
    std::vector<std::vector<int>> nonempty;
    for (auto& y : cover) {
        std::sort(y.begin(), y.end());
        y.erase(std::unique(y.begin(), y.end()), y.end());
        if (!y.empty()) nonempty.push_back(std::move(y));
    }
    return setcover_to_cso(opt.universe, nonempty, std::min(opt.k, opt.universe));
}

RelationalDatabase gen_relational(const RelationalGenOptions& opt) {
    SplitRng rng(opt.seed);
    RelationalDatabase db;
    const int g = std::max(1, opt.relations);
    for (int a = 0; a <= g; ++a) db.attr_names.push_back("A" + std::to_string(a));
    for (int i = 0; i < g; ++i) {
        Relation rel;
        rel.name = "R" + std::to_string(i + 1);
        rel.attrs = {i, i + 1};  // chain: R_i(A_{i-1}, A_i)
        db.relations.push_back(std::move(rel));
    }
    // join keys come from a small pool so tuples actually join
    auto key_val = [&](int slot) { return static_cast<double>(slot); };
    std::vector<std::vector<std::vector<double>>> tuples(static_cast<std::size_t>(g));
    for (int i = 0; i < g; ++i) {
        // key-only relations top out at key_pool^2 distinct tuples
        int attempts = 64 * opt.tuples_per_relation;
        while (static_cast<int>(tuples[static_cast<std::size_t>(i)].size()) < opt.tuples_per_relation &&
               attempts-- > 0) {
            std::vector<double> t(2);
            t[0] = i == 0 ? snap(rng.unit() * opt.value_range) : key_val(rng.below(opt.key_pool));
            t[1] = i + 1 == g ? snap(rng.unit() * opt.value_range) : key_val(rng.below(opt.key_pool));
            if (i == 0 && g == 1) t[1] = snap(rng.unit() * opt.value_range);
            if (std::find(tuples[static_cast<std::size_t>(i)].begin(), tuples[static_cast<std::size_t>(i)].end(), t) ==
                tuples[static_cast<std::size_t>(i)].end())
                tuples[static_cast<std::size_t>(i)].push_back(std::move(t));
        }
    }
    // planted bad tuples: far free values in the last relation
    for (int b = 0; b < opt.planted_bad; ++b) {
        std::vector<double> t(2);
        t[0] = key_val(rng.below(opt.key_pool));
        t[1] = snap(opt.bad_offset + rng.unit() * 2.0);
        if (g == 1) t[0] = snap(opt.bad_offset + rng.unit() * 2.0);
        auto& last = tuples[static_cast<std::size_t>(g - 1)];
        if (std::find(last.begin(), last.end(), t) == last.end()) last.push_back(std::move(t));
    }
    for (int i = 0; i < g; ++i) db.relations[static_cast<std::size_t>(i)].tuples = tuples[static_cast<std::size_t>(i)];
    return db;
}

}  // namespace setout
