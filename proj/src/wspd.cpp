#include "setout/wspd.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace setout {

namespace {

struct QtNode {
    std::vector<double> lo, hi;  // cell cube
    std::vector<int> children;
    int repr = -1;      // lowest point id in the cell
    int size = 0;
    double diag = 0.0;
};

struct Quadtree {
    const std::vector<Point>* pts;
    std::vector<QtNode> nodes;

    double coord(int id, int a) const { return (*pts)[static_cast<std::size_t>(id)][static_cast<std::size_t>(a)]; }

    int build(std::vector<int> ids, std::vector<double> lo, std::vector<double> hi) {
        const int d = static_cast<int>(lo.size());
        // compress: halve the cell while all points fit in one half
        bool shrunk = true;
        while (shrunk && ids.size() > 1) {
            shrunk = false;
            for (int a = 0; a < d; ++a) {
                const double mid = (lo[static_cast<std::size_t>(a)] + hi[static_cast<std::size_t>(a)]) / 2.0;
                if (!(mid > lo[static_cast<std::size_t>(a)] && mid < hi[static_cast<std::size_t>(a)])) continue;
                bool all_low = true, all_high = true;
                for (int id : ids) {
                    if (coord(id, a) >= mid) all_low = false;
                    if (coord(id, a) < mid) all_high = false;
                }
                if (all_low) {
                    hi[static_cast<std::size_t>(a)] = mid;
                    shrunk = true;
                } else if (all_high) {
                    lo[static_cast<std::size_t>(a)] = mid;
                    shrunk = true;
                }
            }
        }
        const int nid = static_cast<int>(nodes.size());
        nodes.emplace_back();
        nodes.back().lo = lo;
        nodes.back().hi = hi;
        nodes.back().size = static_cast<int>(ids.size());
        nodes.back().repr = *std::min_element(ids.begin(), ids.end());
        double s = 0;
        for (int a = 0; a < d; ++a) {
            const double len = hi[static_cast<std::size_t>(a)] - lo[static_cast<std::size_t>(a)];
            s += len * len;
        }
        nodes.back().diag = ids.size() == 1 ? 0.0 : std::sqrt(s);
        if (ids.size() == 1) return nid;

        // bucket points into the 2^d orthants of the cell midpoint
        std::map<unsigned, std::vector<int>> buckets;
        for (int id : ids) {
            unsigned key = 0;
            for (int a = 0; a < d; ++a) {
                const double mid = (lo[static_cast<std::size_t>(a)] + hi[static_cast<std::size_t>(a)]) / 2.0;
                if (coord(id, a) >= mid) key |= 1u << a;
            }
            buckets[key].push_back(id);
        }
        for (auto& [key, sub] : buckets) {
            std::vector<double> clo = lo, chi = hi;
            for (int a = 0; a < d; ++a) {
                const double mid = (lo[static_cast<std::size_t>(a)] + hi[static_cast<std::size_t>(a)]) / 2.0;
                if (key & (1u << a)) clo[static_cast<std::size_t>(a)] = mid;
                else chi[static_cast<std::size_t>(a)] = mid;
            }
            const int cid = build(std::move(sub), std::move(clo), std::move(chi));
            nodes[static_cast<std::size_t>(nid)].children.push_back(cid);
        }
        return nid;
    }

    double cell_gap(int u, int v) const {
        double s = 0;
        const auto& a = nodes[static_cast<std::size_t>(u)];
        const auto& b = nodes[static_cast<std::size_t>(v)];
        for (std::size_t i = 0; i < a.lo.size(); ++i) {
            double g = std::max({0.0, a.lo[i] - b.hi[i], b.lo[i] - a.hi[i]});
            s += g * g;
        }
        return std::sqrt(s);
    }
};

}  // namespace

CandidateRadii wspd_distances(const std::vector<Point>& pts, double eps) {
    std::vector<double> out;
    if (pts.size() < 2) return radii_from_distances(std::move(out), CandidateRadii::Source::Wspd);

    // distinct coordinates; duplicates contribute distance 0, already covered
    std::map<Point, int> seen;
    std::vector<int> ids;
    for (int i = 0; i < static_cast<int>(pts.size()); ++i)
        if (seen.emplace(pts[static_cast<std::size_t>(i)], i).second) ids.push_back(i);
    if (ids.size() < 2) return radii_from_distances(std::move(out), CandidateRadii::Source::Wspd);

    const int d = static_cast<int>(pts.front().size());
    std::vector<double> lo = pts[static_cast<std::size_t>(ids.front())], hi = lo;
    for (int id : ids)
        for (int a = 0; a < d; ++a) {
            lo[static_cast<std::size_t>(a)] = std::min(lo[static_cast<std::size_t>(a)], pts[static_cast<std::size_t>(id)][static_cast<std::size_t>(a)]);
            hi[static_cast<std::size_t>(a)] = std::max(hi[static_cast<std::size_t>(a)], pts[static_cast<std::size_t>(id)][static_cast<std::size_t>(a)]);
        }
    // pad to a cube so orthant splits stay proportionate
    double side = 0;
    for (int a = 0; a < d; ++a) side = std::max(side, hi[static_cast<std::size_t>(a)] - lo[static_cast<std::size_t>(a)]);
    side = std::max(side, 1e-30);
    for (int a = 0; a < d; ++a) hi[static_cast<std::size_t>(a)] = lo[static_cast<std::size_t>(a)] + side * (1 + 1e-12);

    Quadtree qt;
    qt.pts = &pts;
    const int root = qt.build(ids, lo, hi);

    const double sep = 2.0 / eps;
    std::vector<std::pair<int, int>> stack{{root, root}};
    while (!stack.empty()) {
        auto [u, v] = stack.back();
        stack.pop_back();
        const auto& a = qt.nodes[static_cast<std::size_t>(u)];
        const auto& b = qt.nodes[static_cast<std::size_t>(v)];
        if (u == v) {
            if (a.children.empty()) continue;
            for (std::size_t i = 0; i < a.children.size(); ++i)
                for (std::size_t j = i; j < a.children.size(); ++j)
                    stack.push_back({a.children[i], a.children[j]});
            continue;
        }
        if (a.size == 1 && b.size == 1) {  // exact distance, trivially (1 +- eps)
            out.push_back(dist_l2(pts[static_cast<std::size_t>(a.repr)], pts[static_cast<std::size_t>(b.repr)]));
            continue;
        }
        const double gap = qt.cell_gap(u, v);
        if (std::max(a.diag, b.diag) * sep <= gap && gap > 0) {
            out.push_back(dist_l2(pts[static_cast<std::size_t>(a.repr)], pts[static_cast<std::size_t>(b.repr)]));
            continue;
        }
        // split the node with the larger cell
        if (a.diag >= b.diag && !a.children.empty()) {
            for (int c : a.children) stack.push_back({c, v});
        } else if (!b.children.empty()) {
            for (int c : b.children) stack.push_back({u, c});
        } else if (!a.children.empty()) {
            for (int c : a.children) stack.push_back({c, v});
        }
        // two singleton leaves never reach here unseparated: gap > 0 and diag 0
    }
    return radii_from_distances(std::move(out), CandidateRadii::Source::Wspd);
}

}  // namespace setout
