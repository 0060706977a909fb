#include "setout/bbd_tree.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace setout {

namespace {

double min_dist_to_box(const Point& x, const std::vector<double>& lo, const std::vector<double>& hi) {
    double s = 0;
    for (std::size_t a = 0; a < x.size(); ++a) {
        double d = 0;
        if (x[a] < lo[a]) d = lo[a] - x[a];
        else if (x[a] > hi[a]) d = x[a] - hi[a];
        s += d * d;
    }
    return std::sqrt(s);
}

double max_dist_to_box(const Point& x, const std::vector<double>& lo, const std::vector<double>& hi) {
    double s = 0;
    for (std::size_t a = 0; a < x.size(); ++a) {
        double d = std::max(x[a] - lo[a], hi[a] - x[a]);
        s += d * d;
    }
    return std::sqrt(s);
}

}  // namespace

BbdTree::BbdTree(const std::vector<Point>& pts, double query_eps) : points_(&pts), eps_(query_eps) {
    // One leaf per distinct coordinate; duplicates share a leaf (multiset semantics).
    std::map<Point, std::vector<int>> grouped;
    for (int i = 0; i < static_cast<int>(pts.size()); ++i) grouped[pts[static_cast<std::size_t>(i)]].push_back(i);
    for (auto& [coord, ids] : grouped) groups_.push_back(Group{coord, ids});

    const int d = pts.empty() ? 0 : static_cast<int>(pts.front().size());
    std::vector<double> lo(static_cast<std::size_t>(d), 0.0), hi(static_cast<std::size_t>(d), 0.0);
    if (!groups_.empty()) {
        lo = hi = groups_.front().coord;
        for (const auto& g : groups_)
            for (int a = 0; a < d; ++a) {
                lo[static_cast<std::size_t>(a)] = std::min(lo[static_cast<std::size_t>(a)], g.coord[static_cast<std::size_t>(a)]);
                hi[static_cast<std::size_t>(a)] = std::max(hi[static_cast<std::size_t>(a)], g.coord[static_cast<std::size_t>(a)]);
            }
    }

    leaf_of_.assign(pts.size(), -1);
    std::vector<int> gidx(groups_.size());
    std::iota(gidx.begin(), gidx.end(), 0);
    if (!groups_.empty()) root_ = build(gidx, 0, static_cast<int>(gidx.size()), lo, hi, {}, {}, -1, 0);
}

int BbdTree::build(std::vector<int>& groups, int gb, int ge, std::vector<double> lo, std::vector<double> hi,
                   std::vector<double> hlo, std::vector<double> hhi, int parent, int depth) {
    const int id = static_cast<int>(nodes_.size());
    nodes_.emplace_back();
    {
        Node& nd = nodes_.back();
        nd.lo = lo;
        nd.hi = hi;
        nd.hlo = hlo;
        nd.hhi = hhi;
        nd.parent = parent;
        nd.begin = static_cast<int>(order_.size());
    }

    if (ge - gb == 1) {
        const Group& g = groups_[static_cast<std::size_t>(groups[static_cast<std::size_t>(gb)])];
        for (int pid : g.ids) {
            leaf_of_[static_cast<std::size_t>(pid)] = id;
            order_.push_back(pid);
        }
        Node& nd = nodes_[static_cast<std::size_t>(id)];
        nd.end = static_cast<int>(order_.size());
        nd.leaf = true;
        nd.count = static_cast<int>(g.ids.size());
        nd.repr = g.ids.front();
        return id;
    }

    const int d = static_cast<int>(lo.size());
    const int total = ge - gb;
    auto coord = [&](int gslot, int axis) {
        return groups_[static_cast<std::size_t>(groups[static_cast<std::size_t>(gslot)])].coord[static_cast<std::size_t>(axis)];
    };

    // 1. midpoint split of the longest side
    int split_axis = -1;
    double best_len = 0;
    for (int a = 0; a < d; ++a)
        if (hi[static_cast<std::size_t>(a)] - lo[static_cast<std::size_t>(a)] > best_len) {
            best_len = hi[static_cast<std::size_t>(a)] - lo[static_cast<std::size_t>(a)];
            split_axis = a;
        }

    enum class Mode { Plane, Shrink, Median } mode = Mode::Median;
    double plane = 0;
    std::vector<double> blo, bhi;  // shrink box

    if (split_axis >= 0) {
        plane = (lo[static_cast<std::size_t>(split_axis)] + hi[static_cast<std::size_t>(split_axis)]) / 2.0;
        int left_cnt = 0;
        for (int g = gb; g < ge; ++g)
            if (coord(g, split_axis) < plane) ++left_cnt;
        if (3 * left_cnt <= 2 * total && 3 * (total - left_cnt) <= 2 * total && left_cnt > 0 && left_cnt < total) {
            mode = Mode::Plane;
        } else {
            // 2. centroid shrink: halve toward the majority until <= 2/3 remain.
            // The shrink box must keep any existing hole inside it.
            blo = lo;
            bhi = hi;
            auto inside = [&](int g) {
                for (int a = 0; a < d; ++a) {
                    double c = coord(g, a);
                    if (c < blo[static_cast<std::size_t>(a)] || c > bhi[static_cast<std::size_t>(a)]) return false;
                }
                return true;
            };
            int in_cnt = total;
            bool progressed = false;
            while (3 * in_cnt > 2 * total) {
                int axis = -1;
                double len = 0;
                for (int a = 0; a < d; ++a)
                    if (bhi[static_cast<std::size_t>(a)] - blo[static_cast<std::size_t>(a)] > len) {
                        len = bhi[static_cast<std::size_t>(a)] - blo[static_cast<std::size_t>(a)];
                        axis = a;
                    }
                if (axis < 0) break;
                const double mid = (blo[static_cast<std::size_t>(axis)] + bhi[static_cast<std::size_t>(axis)]) / 2.0;
                if (!(mid > blo[static_cast<std::size_t>(axis)] && mid < bhi[static_cast<std::size_t>(axis)])) break;
                int low_cnt = 0, high_cnt = 0;
                for (int g = gb; g < ge; ++g) {
                    if (!inside(g)) continue;
                    if (coord(g, axis) < mid) ++low_cnt;
                    else ++high_cnt;
                }
                bool keep_low = low_cnt >= high_cnt;
                if (!hlo.empty()) {
                    const bool hole_low = hhi[static_cast<std::size_t>(axis)] <= mid;
                    const bool hole_high = hlo[static_cast<std::size_t>(axis)] >= mid;
                    if (!hole_low && !hole_high) break;  // hole straddles, stop shrinking
                    if (keep_low && !hole_low) keep_low = false;
                    if (!keep_low && !hole_high) keep_low = true;
                }
                if (keep_low) bhi[static_cast<std::size_t>(axis)] = mid;
                else blo[static_cast<std::size_t>(axis)] = mid;
                in_cnt = keep_low ? low_cnt : high_cnt;
                progressed = true;
                if (in_cnt == 0) break;
            }
            if (progressed && in_cnt > 0 && in_cnt < total) mode = Mode::Shrink;
        }
    }

    int left_id = -1, right_id = -1;
    if (mode == Mode::Plane) {
        std::vector<int> lg, rg;
        for (int g = gb; g < ge; ++g)
            (coord(g, split_axis) < plane ? lg : rg).push_back(groups[static_cast<std::size_t>(g)]);
        std::copy(lg.begin(), lg.end(), groups.begin() + gb);
        std::copy(rg.begin(), rg.end(), groups.begin() + gb + static_cast<long>(lg.size()));
        std::vector<double> lhi = hi, rlo = lo;
        lhi[static_cast<std::size_t>(split_axis)] = plane;
        rlo[static_cast<std::size_t>(split_axis)] = plane;
        // clip the hole to each side
        auto clip = [&](const std::vector<double>& l, const std::vector<double>& h, std::vector<double>& outlo,
                        std::vector<double>& outhi) {
            if (hlo.empty()) return;
            outlo = hlo;
            outhi = hhi;
            for (int a = 0; a < d; ++a) {
                outlo[static_cast<std::size_t>(a)] = std::max(outlo[static_cast<std::size_t>(a)], l[static_cast<std::size_t>(a)]);
                outhi[static_cast<std::size_t>(a)] = std::min(outhi[static_cast<std::size_t>(a)], h[static_cast<std::size_t>(a)]);
            }
            for (int a = 0; a < d; ++a)
                if (outlo[static_cast<std::size_t>(a)] >= outhi[static_cast<std::size_t>(a)]) {
                    outlo.clear();
                    outhi.clear();
                    return;
                }
        };
        std::vector<double> lhlo, lhhi, rhlo, rhhi;
        clip(lo, lhi, lhlo, lhhi);
        clip(rlo, hi, rhlo, rhhi);
        left_id = build(groups, gb, gb + static_cast<int>(lg.size()), lo, lhi, lhlo, lhhi, id, depth + 1);
        right_id = build(groups, gb + static_cast<int>(lg.size()), ge, rlo, hi, rhlo, rhhi, id, depth + 1);
    } else if (mode == Mode::Shrink) {
        std::vector<int> ing, outg;
        for (int g = gb; g < ge; ++g) {
            bool in = true;
            for (int a = 0; a < d && in; ++a) {
                double c = coord(g, a);
                in = c >= blo[static_cast<std::size_t>(a)] && c <= bhi[static_cast<std::size_t>(a)];
            }
            (in ? ing : outg).push_back(groups[static_cast<std::size_t>(g)]);
        }
        if (ing.empty() || outg.empty()) {
            mode = Mode::Median;  // boundary assignment emptied one side
        } else {
            std::copy(ing.begin(), ing.end(), groups.begin() + gb);
            std::copy(outg.begin(), outg.end(), groups.begin() + gb + static_cast<long>(ing.size()));
            left_id = build(groups, gb, gb + static_cast<int>(ing.size()), blo, bhi, hlo, hhi, id, depth + 1);
            right_id = build(groups, gb + static_cast<int>(ing.size()), ge, lo, hi, blo, bhi, id, depth + 1);
        }
    }
    if (mode == Mode::Median) {
        // median fallback on the widest point spread; guarantees progress
        int axis = 0;
        double spread = -1;
        for (int a = 0; a < d; ++a) {
            double mn = coord(gb, a), mx = coord(gb, a);
            for (int g = gb; g < ge; ++g) {
                mn = std::min(mn, coord(g, a));
                mx = std::max(mx, coord(g, a));
            }
            if (mx - mn > spread) {
                spread = mx - mn;
                axis = a;
            }
        }
        std::vector<double> vals;
        for (int g = gb; g < ge; ++g) vals.push_back(coord(g, axis));
        std::sort(vals.begin(), vals.end());
        vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
        const double v = vals[vals.size() / 2];  // >= second distinct value
        std::vector<int> lg, rg;
        for (int g = gb; g < ge; ++g) (coord(g, axis) < v ? lg : rg).push_back(groups[static_cast<std::size_t>(g)]);
        std::copy(lg.begin(), lg.end(), groups.begin() + gb);
        std::copy(rg.begin(), rg.end(), groups.begin() + gb + static_cast<long>(lg.size()));
        std::vector<double> lhi = hi, rlo = lo;
        lhi[static_cast<std::size_t>(axis)] = v;
        rlo[static_cast<std::size_t>(axis)] = v;
        std::vector<double> lhlo = hlo, lhhi = hhi, rhlo = hlo, rhhi = hhi;
        auto clamp_hole = [&](std::vector<double>& l, std::vector<double>& h, const std::vector<double>& boxlo,
                              const std::vector<double>& boxhi) {
            if (l.empty()) return;
            for (int a = 0; a < d; ++a) {
                l[static_cast<std::size_t>(a)] = std::max(l[static_cast<std::size_t>(a)], boxlo[static_cast<std::size_t>(a)]);
                h[static_cast<std::size_t>(a)] = std::min(h[static_cast<std::size_t>(a)], boxhi[static_cast<std::size_t>(a)]);
                if (l[static_cast<std::size_t>(a)] >= h[static_cast<std::size_t>(a)]) {
                    l.clear();
                    h.clear();
                    return;
                }
            }
        };
        clamp_hole(lhlo, lhhi, lo, lhi);
        clamp_hole(rhlo, rhhi, rlo, hi);
        left_id = build(groups, gb, gb + static_cast<int>(lg.size()), lo, lhi, lhlo, lhhi, id, depth + 1);
        right_id = build(groups, gb + static_cast<int>(lg.size()), ge, rlo, hi, rhlo, rhhi, id, depth + 1);
    }

    Node& nd = nodes_[static_cast<std::size_t>(id)];
    nd.left = left_id;
    nd.right = right_id;
    nd.end = static_cast<int>(order_.size());
    nd.count = nodes_[static_cast<std::size_t>(left_id)].count + nodes_[static_cast<std::size_t>(right_id)].count;
    nd.repr = std::min(nodes_[static_cast<std::size_t>(left_id)].repr, nodes_[static_cast<std::size_t>(right_id)].repr);
    return id;
}

int BbdTree::height() const {
    if (root_ < 0) return 0;
    int best = 0;
    std::vector<std::pair<int, int>> stack{{root_, 0}};
    while (!stack.empty()) {
        auto [u, h] = stack.back();
        stack.pop_back();
        best = std::max(best, h);
        const Node& nd = nodes_[static_cast<std::size_t>(u)];
        if (nd.left != -1) stack.push_back({nd.left, h + 1});
        if (nd.right != -1) stack.push_back({nd.right, h + 1});
    }
    return best;
}

std::vector<int> BbdTree::ball_query(const Point& x, double r) const { return ball_query(x, r, eps_); }

std::vector<int> BbdTree::ball_query(const Point& x, double r, double eps) const {
    std::vector<int> out;
    if (root_ < 0) return out;
    const double outer = (1.0 + eps) * r;
    std::vector<int> stack{root_};
    while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        const Node& nd = nodes_[static_cast<std::size_t>(u)];
        if (!nd.active || nd.begin == nd.end) continue;
        if (min_dist_to_box(x, nd.lo, nd.hi) > r) continue;
        if (max_dist_to_box(x, nd.lo, nd.hi) <= outer) {
            out.push_back(u);
            continue;
        }
        if (nd.leaf) {
            if (dist_l2((*points_)[static_cast<std::size_t>(order_[static_cast<std::size_t>(nd.begin)])], x) <= r)
                out.push_back(u);
            continue;
        }
        stack.push_back(nd.right);
        stack.push_back(nd.left);
    }
    return out;
}

std::vector<int> BbdTree::points_in(int node_id) const {
    const Node& nd = nodes_[static_cast<std::size_t>(node_id)];
    return std::vector<int>(order_.begin() + nd.begin, order_.begin() + nd.end);
}

void BbdTree::report_active(int node_id, std::vector<int>& out) const {
    const Node& nd = nodes_[static_cast<std::size_t>(node_id)];
    if (!nd.active) return;
    if (nd.leaf) {
        for (int i = nd.begin; i < nd.end; ++i) out.push_back(order_[static_cast<std::size_t>(i)]);
        return;
    }
    report_active(nd.left, out);
    report_active(nd.right, out);
}

std::vector<int> BbdTree::active_points() const {
    std::vector<int> out;
    if (root_ >= 0) report_active(root_, out);
    return out;
}

void BbdTree::refresh(int node_id) {
    Node& nd = nodes_[static_cast<std::size_t>(node_id)];
    if (nd.leaf) return;
    const Node& l = nodes_[static_cast<std::size_t>(nd.left)];
    const Node& r = nodes_[static_cast<std::size_t>(nd.right)];
    nd.active = l.active || r.active;
    nd.count = (l.active ? l.count : 0) + (r.active ? r.count : 0);
    if (l.active && r.active) nd.repr = std::min(l.repr, r.repr);
    else if (l.active) nd.repr = l.repr;
    else if (r.active) nd.repr = r.repr;
    else nd.repr = -1;
}

void BbdTree::deactivate(const std::vector<int>& canonical) {
    for (int u : canonical) {
        nodes_[static_cast<std::size_t>(u)].active = false;
        nodes_[static_cast<std::size_t>(u)].count = 0;
        for (int p = nodes_[static_cast<std::size_t>(u)].parent; p != -1; p = nodes_[static_cast<std::size_t>(p)].parent)
            refresh(p);
    }
}

void BbdTree::reset_accumulators() {
    for (auto& nd : nodes_) {
        nd.acc_s = 0.0;
        nd.acc_w = 0.0;
    }
}

void BbdTree::reset_active() {
    for (int u = static_cast<int>(nodes_.size()) - 1; u >= 0; --u) {
        Node& nd = nodes_[static_cast<std::size_t>(u)];
        nd.active = true;
        if (nd.leaf) {
            nd.count = nd.end - nd.begin;
            nd.repr = order_[static_cast<std::size_t>(nd.begin)];
            for (int i = nd.begin; i < nd.end; ++i)
                nd.repr = std::min(nd.repr, order_[static_cast<std::size_t>(i)]);
        } else {
            refresh(u);
        }
    }
}

}  // namespace setout
