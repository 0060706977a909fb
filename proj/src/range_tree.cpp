#include "setout/range_tree.hpp"

#include <algorithm>
#include <stdexcept>

namespace setout {

namespace {

// First index in [0,n) whose coordinate enters the interval from below.
int lower_idx(const std::vector<Point>& P, const std::vector<int>& pts, int axis, const Interval& iv) {
    if (iv.lo_inf) return 0;
    int lo = 0, hi = static_cast<int>(pts.size());
    while (lo < hi) {
        const int mid = (lo + hi) / 2;
        const double c = P[static_cast<std::size_t>(pts[static_cast<std::size_t>(mid)])][static_cast<std::size_t>(axis)];
        const bool ok = iv.lo_strict ? c > iv.lo : c >= iv.lo;
        if (ok) hi = mid;
        else lo = mid + 1;
    }
    return lo;
}

// First index whose coordinate exceeds the interval from above.
int upper_idx(const std::vector<Point>& P, const std::vector<int>& pts, int axis, const Interval& iv) {
    if (iv.hi_inf) return static_cast<int>(pts.size());
    int lo = 0, hi = static_cast<int>(pts.size());
    while (lo < hi) {
        const int mid = (lo + hi) / 2;
        const double c = P[static_cast<std::size_t>(pts[static_cast<std::size_t>(mid)])][static_cast<std::size_t>(axis)];
        const bool beyond = iv.hi_strict ? c >= iv.hi : c > iv.hi;
        if (beyond) hi = mid;
        else lo = mid + 1;
    }
    return lo;
}

}  // namespace

RangeTree::RangeTree(const std::vector<Point>& pts) : points_(&pts) {
    dim_ = pts.empty() ? 0 : static_cast<int>(pts.front().size());
    point_leaves_.assign(pts.size(), {});
    if (pts.empty()) return;
    std::vector<int> ids(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) ids[i] = static_cast<int>(i);
    if (dim_ == 1) build_last(std::move(ids));
    else build_level(0, std::move(ids));
}

int RangeTree::build_last(std::vector<int> pts) {
    const int axis = dim_ - 1;
    std::sort(pts.begin(), pts.end(), [&](int a, int b) {
        const double ca = (*points_)[static_cast<std::size_t>(a)][static_cast<std::size_t>(axis)];
        const double cb = (*points_)[static_cast<std::size_t>(b)][static_cast<std::size_t>(axis)];
        return ca != cb ? ca < cb : a < b;
    });
    const int tid = static_cast<int>(last_.size());
    last_.emplace_back();
    last_[static_cast<std::size_t>(tid)].pts = std::move(pts);
    const int n = static_cast<int>(last_[static_cast<std::size_t>(tid)].pts.size());
    last_[static_cast<std::size_t>(tid)].root = build_last_rec(tid, 0, n, -1);
    return tid;
}

int RangeTree::build_last_rec(int subtree, int b, int e, int parent) {
    const int id = static_cast<int>(lnodes_.size());
    lnodes_.emplace_back();
    lnodes_.back().parent = parent;
    lnodes_.back().begin = b;
    lnodes_.back().end = e;
    lnodes_.back().subtree = subtree;
    if (e - b == 1) {
        lnodes_[static_cast<std::size_t>(id)].leaf = true;
        const int pt = last_[static_cast<std::size_t>(subtree)].pts[static_cast<std::size_t>(b)];
        point_leaves_[static_cast<std::size_t>(pt)].push_back(id);
        return id;
    }
    const int mid = (b + e) / 2;
    const int l = build_last_rec(subtree, b, mid, id);
    const int r = build_last_rec(subtree, mid, e, id);
    lnodes_[static_cast<std::size_t>(id)].left = l;
    lnodes_[static_cast<std::size_t>(id)].right = r;
    return id;
}

int RangeTree::build_level(int axis, std::vector<int> pts) {
    std::sort(pts.begin(), pts.end(), [&](int a, int b) {
        const double ca = (*points_)[static_cast<std::size_t>(a)][static_cast<std::size_t>(axis)];
        const double cb = (*points_)[static_cast<std::size_t>(b)][static_cast<std::size_t>(axis)];
        return ca != cb ? ca < cb : a < b;
    });
    const int lid = static_cast<int>(levels_.size());
    levels_.emplace_back();
    levels_[static_cast<std::size_t>(lid)].pts = pts;

    // Children structures are built per node range; index-based access only,
    // since recursion grows the arenas.
    auto make_node = [&](auto&& self, int b, int e) -> int {
        const int nid = static_cast<int>(levels_[static_cast<std::size_t>(lid)].begin.size());
        levels_[static_cast<std::size_t>(lid)].begin.push_back(b);
        levels_[static_cast<std::size_t>(lid)].end.push_back(e);
        levels_[static_cast<std::size_t>(lid)].left.push_back(-1);
        levels_[static_cast<std::size_t>(lid)].right.push_back(-1);
        levels_[static_cast<std::size_t>(lid)].child_structure.push_back(-1);

        std::vector<int> sub(levels_[static_cast<std::size_t>(lid)].pts.begin() + b,
                             levels_[static_cast<std::size_t>(lid)].pts.begin() + e);
        const int child = (axis + 1 == dim_ - 1) ? build_last(std::move(sub)) : build_level(axis + 1, std::move(sub));
        levels_[static_cast<std::size_t>(lid)].child_structure[static_cast<std::size_t>(nid)] = child;

        if (e - b > 1) {
            const int mid = (b + e) / 2;
            const int l = self(self, b, mid);
            const int r = self(self, mid, e);
            levels_[static_cast<std::size_t>(lid)].left[static_cast<std::size_t>(nid)] = l;
            levels_[static_cast<std::size_t>(lid)].right[static_cast<std::size_t>(nid)] = r;
        }
        return nid;
    };
    levels_[static_cast<std::size_t>(lid)].root = make_node(make_node, 0, static_cast<int>(pts.size()));
    return lid;
}

void RangeTree::canonical_range(int last_tree, int L, int R, std::vector<int>& out) const {
    if (L >= R) return;
    const int root = last_[static_cast<std::size_t>(last_tree)].root;
    std::vector<int> stack{root};
    while (!stack.empty()) {
        const int u = stack.back();
        stack.pop_back();
        const LNode& nd = lnodes_[static_cast<std::size_t>(u)];
        if (nd.end <= L || nd.begin >= R) continue;
        if (L <= nd.begin && nd.end <= R) {
            out.push_back(u);
            continue;
        }
        stack.push_back(nd.right);
        stack.push_back(nd.left);
    }
}

std::vector<int> RangeTree::query(const Box& rect) const {
    if (rect.dim() != dim_) throw std::invalid_argument("range query: dimension mismatch");
    for (const auto& iv : rect.iv)
        if (iv.empty() || (!iv.lo_inf && !iv.hi_inf && iv.lo > iv.hi))
            throw std::invalid_argument("range query: empty interval");
    std::vector<int> out;
    if (points_->empty()) return out;

    // Descend level structures, narrowing one axis at a time.
    auto descend = [&](auto&& self, int axis, int structure) -> void {
        if (axis == dim_ - 1) {
            const auto& pts = last_[static_cast<std::size_t>(structure)].pts;
            const int L = lower_idx(*points_, pts, axis, rect.iv[static_cast<std::size_t>(axis)]);
            const int R = upper_idx(*points_, pts, axis, rect.iv[static_cast<std::size_t>(axis)]);
            canonical_range(structure, L, R, out);
            return;
        }
        const Level& lv = levels_[static_cast<std::size_t>(structure)];
        const int L = lower_idx(*points_, lv.pts, axis, rect.iv[static_cast<std::size_t>(axis)]);
        const int R = upper_idx(*points_, lv.pts, axis, rect.iv[static_cast<std::size_t>(axis)]);
        if (L >= R) return;
        std::vector<int> stack{lv.root};
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            const int b = lv.begin[static_cast<std::size_t>(u)], e = lv.end[static_cast<std::size_t>(u)];
            if (e <= L || b >= R) continue;
            if (L <= b && e <= R) {
                self(self, axis + 1, lv.child_structure[static_cast<std::size_t>(u)]);
                continue;
            }
            if (lv.left[static_cast<std::size_t>(u)] != -1) {
                stack.push_back(lv.right[static_cast<std::size_t>(u)]);
                stack.push_back(lv.left[static_cast<std::size_t>(u)]);
            }
        }
    };
    descend(descend, 0, dim_ == 1 ? 0 : levels_.empty() ? -1 : 0);
    return out;
}

long long RangeTree::count(const Box& rect) const {
    long long total = 0;
    for (int u : query(rect))
        total += lnodes_[static_cast<std::size_t>(u)].end - lnodes_[static_cast<std::size_t>(u)].begin;
    return total;
}

std::vector<int> RangeTree::report(const Box& rect) const {
    std::vector<int> out;
    for (int u : query(rect)) {
        const LNode& nd = lnodes_[static_cast<std::size_t>(u)];
        const auto& pts = last_[static_cast<std::size_t>(nd.subtree)].pts;
        for (int i = nd.begin; i < nd.end; ++i) out.push_back(pts[static_cast<std::size_t>(i)]);
    }
    return out;
}

std::vector<int> RangeTree::points_in_lnode(int id) const {
    const LNode& nd = lnodes_[static_cast<std::size_t>(id)];
    const auto& pts = last_[static_cast<std::size_t>(nd.subtree)].pts;
    return std::vector<int>(pts.begin() + nd.begin, pts.begin() + nd.end);
}

void RangeTree::load_sigma(const std::vector<double>& sigma) {
    for (int id = static_cast<int>(lnodes_.size()) - 1; id >= 0; --id) {
        LNode& nd = lnodes_[static_cast<std::size_t>(id)];
        if (nd.leaf) {
            const int pt = last_[static_cast<std::size_t>(nd.subtree)].pts[static_cast<std::size_t>(nd.begin)];
            nd.s = sigma[static_cast<std::size_t>(pt)];
        } else {
            nd.s = lnodes_[static_cast<std::size_t>(nd.left)].s + lnodes_[static_cast<std::size_t>(nd.right)].s;
        }
    }
}

void RangeTree::zero_w() {
    for (auto& nd : lnodes_) nd.w = 0.0;
}

void RangeTree::clear_lists() {
    for (auto& nd : lnodes_) nd.list.clear();
}

}  // namespace setout
