#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "setout/bbd_tree.hpp"
#include "setout/complement.hpp"
#include "setout/range_tree.hpp"
#include "setout/wspd.hpp"
#include "test_support.hpp"

using namespace setout;

namespace {

std::set<int> to_set(const std::vector<int>& v) { return std::set<int>(v.begin(), v.end()); }

std::set<int> bbd_points(const BbdTree& t, const std::vector<int>& canon) {
    std::set<int> out;
    for (int u : canon)
        for (int p : t.points_in(u)) out.insert(p);
    return out;
}

// linear-scan oracle: ids within radius r of x
std::set<int> scan_ball(const std::vector<Point>& pts, const Point& x, double r) {
    std::set<int> out;
    for (int i = 0; i < static_cast<int>(pts.size()); ++i)
        if (dist_l2(pts[static_cast<std::size_t>(i)], x) <= r) out.insert(i);
    return out;
}

std::set<int> scan_rect(const std::vector<Point>& pts, const Box& b) {
    std::set<int> out;
    for (int i = 0; i < static_cast<int>(pts.size()); ++i)
        if (b.contains(pts[static_cast<std::size_t>(i)])) out.insert(i);
    return out;
}

bool is_ancestor(const BbdTree& t, int anc, int node) {
    for (int u = node; u != -1; u = t.node(u).parent)
        if (u == anc) return true;
    return false;
}

}  // namespace

TEST_CASE("bbd: single point tree is a single leaf") {
    std::vector<Point> pts{{1.0, 2.0}};
    BbdTree t(pts);
    CHECK(t.size() == 1);
    CHECK(t.node(t.root()).leaf);
    CHECK(t.leaf_of(0) == t.root());
}

TEST_CASE("bbd: 1000 random points, leaf per point, every point reachable, logarithmic height") {
    testsup::Rng rng(11);
    auto pts = testsup::random_points(rng, 1000, 2);
    BbdTree t(pts);
    int leaves = 0;
    std::set<int> seen;
    for (int u = 0; u < t.size(); ++u)
        if (t.node(u).leaf) {
            ++leaves;
            for (int p : t.points_in(u)) seen.insert(p);
        }
    CHECK(leaves == 1000);
    CHECK(static_cast<int>(seen.size()) == 1000);
    // walk_up from every point reaches the root
    for (int p = 0; p < 1000; ++p) {
        int last = -1;
        t.walk_up(p, [&](int u) { last = u; });
        CHECK(last == t.root());
    }
    CHECK(t.height() <= 4 * static_cast<int>(std::log2(1000.0)) + 4);
}

TEST_CASE("bbd: duplicate coordinates accepted with multiset semantics") {
    std::vector<Point> pts{{1, 1}, {1, 1}, {2, 2}, {1, 1}};
    BbdTree t(pts);
    CHECK(t.leaf_of(0) == t.leaf_of(1));
    CHECK(t.leaf_of(0) == t.leaf_of(3));
    CHECK(t.leaf_of(0) != t.leaf_of(2));
    CHECK(t.node(t.leaf_of(0)).count == 3);
    auto canon = t.ball_query({1, 1}, 0.0, 0.1);
    CHECK(bbd_points(t, canon) == std::set<int>{0, 1, 3});
}

TEST_CASE("bbd: r=0 and r>=diameter queries") {
    testsup::Rng rng(3);
    auto pts = testsup::random_points(rng, 60, 2);
    BbdTree t(pts);
    auto at_zero = bbd_points(t, t.ball_query(pts[7], 0.0, 0.2));
    CHECK(at_zero == scan_ball(pts, pts[7], 0.0));
    auto everything = bbd_points(t, t.ball_query(pts[0], 1000.0, 0.2));
    CHECK(static_cast<int>(everything.size()) == 60);
}

TEST_CASE("bbd: 500 random queries satisfy the sandwich property vs linear scans") {
    testsup::Rng rng(21);
    for (int d = 1; d <= 3; ++d) {
        auto pts = testsup::random_points(rng, 200, d);
        BbdTree t(pts);
        for (int q = 0; q < 500 / 3; ++q) {
            Point x;
            for (int a = 0; a < d; ++a) x.push_back(rng.uniform(-2.0, 12.0));
            const double r = rng.uniform(0.0, 8.0);
            const double eps = q % 2 == 0 ? 0.1 : 0.35;
            auto canon = t.ball_query(x, r, eps);
            auto got = bbd_points(t, canon);
            auto inner = scan_ball(pts, x, r);
            auto outer = scan_ball(pts, x, (1.0 + eps) * r);
            CHECK(std::includes(got.begin(), got.end(), inner.begin(), inner.end()));
            CHECK(std::includes(outer.begin(), outer.end(), got.begin(), got.end()));
            // canonical nodes are pairwise incomparable with disjoint point ranges
            for (std::size_t a = 0; a < canon.size(); ++a)
                for (std::size_t b = a + 1; b < canon.size(); ++b) {
                    CHECK_FALSE(is_ancestor(t, canon[a], canon[b]));
                    CHECK_FALSE(is_ancestor(t, canon[b], canon[a]));
                }
        }
    }
}

TEST_CASE("bbd: smaller eps gives a subset of the point set, still a superset of the exact ball") {
    testsup::Rng rng(33);
    auto pts = testsup::random_points(rng, 150, 2);
    BbdTree t(pts);
    for (int q = 0; q < 50; ++q) {
        Point x{rng.uniform(0, 10), rng.uniform(0, 10)};
        const double r = rng.uniform(0.5, 5.0);
        auto small = bbd_points(t, t.ball_query(x, r, 0.05));
        auto big = bbd_points(t, t.ball_query(x, r, 0.4));
        CHECK(std::includes(big.begin(), big.end(), small.begin(), small.end()));
    }
}

TEST_CASE("bbd: deactivated canonical regions never reappear") {
    testsup::Rng rng(8);
    auto pts = testsup::random_points(rng, 120, 2);
    BbdTree t(pts);
    Point x{5, 5};
    auto canon = t.ball_query(x, 2.0, 0.2);
    std::set<int> removed = bbd_points(t, canon);
    t.deactivate(canon);
    for (int q = 0; q < 60; ++q) {
        Point y{rng.uniform(0, 10), rng.uniform(0, 10)};
        auto later = t.ball_query(y, rng.uniform(0, 6), 0.2);
        std::vector<int> got;
        for (int u : later) t.report_active(u, got);
        for (int p : got) CHECK_FALSE(removed.count(p));
    }
    // root count reflects the deletion
    CHECK(t.node(t.root()).count == 120 - static_cast<int>(removed.size()));
    t.reset_active();
    CHECK(t.node(t.root()).count == 120);
}

TEST_CASE("range tree: empty rectangle is a precondition error") {
    std::vector<Point> pts{{0, 0}, {1, 1}};
    RangeTree t(pts);
    Box bad = Box::closed({1, 0}, {0, 1});  // hi < lo on axis 0
    CHECK_THROWS(t.query(bad));
}

TEST_CASE("range tree: bounding box counts everything") {
    testsup::Rng rng(5);
    auto pts = testsup::random_points(rng, 77, 3);
    RangeTree t(pts);
    CHECK(t.count(Box::whole(3)) == 77);
    CHECK(t.count(Box::closed({-1, -1, -1}, {11, 11, 11})) == 77);
}

TEST_CASE("range tree: 500 random rectangles count exactly as linear scan") {
    testsup::Rng rng(19);
    for (int d = 1; d <= 3; ++d) {
        auto pts = testsup::random_points(rng, 160, d);
        RangeTree t(pts);
        for (int q = 0; q < 500 / 3; ++q) {
            Point lo, hi;
            for (int a = 0; a < d; ++a) {
                double c1 = rng.uniform(-1, 11), c2 = rng.uniform(-1, 11);
                lo.push_back(std::min(c1, c2));
                hi.push_back(std::max(c1, c2));
            }
            Box b = Box::closed(lo, hi);
            auto expect = scan_rect(pts, b);
            CHECK(t.count(b) == static_cast<long long>(expect.size()));
            CHECK(to_set(t.report(b)) == expect);
            // canonical point sets are pairwise disjoint and exact
            auto canon = t.query(b);
            std::set<int> uni;
            std::size_t total = 0;
            for (int u : canon) {
                auto ps = t.points_in_lnode(u);
                total += ps.size();
                for (int p : ps) uni.insert(p);
            }
            CHECK(total == uni.size());
            CHECK(uni == expect);
        }
    }
}

TEST_CASE("range tree: degenerate point intervals and strict bounds") {
    std::vector<Point> pts{{1, 2}, {1, 3}, {2, 2}};
    RangeTree t(pts);
    Box b = Box::whole(2);
    b.iv[0] = Interval::point(1.0);
    CHECK(t.count(b) == 2);
    b.iv[1] = Interval::point(3.0);
    CHECK(t.count(b) == 1);
    Box strict = Box::whole(2);
    strict.iv[0] = Interval::closed(1.0, 2.0);
    strict.iv[0].lo_strict = true;
    CHECK(t.count(strict) == 1);  // only the x=2 point
}

TEST_CASE("range tree: bottom-up walks see exactly the covering rectangles") {
    testsup::Rng rng(29);
    auto pts = testsup::random_points(rng, 60, 2);
    RangeTree t(pts);
    Box b = Box::closed({2, 2}, {7, 7});
    t.clear_lists();
    for (int u : t.query(b)) t.lnode(u).list.push_back(42);
    auto inside = scan_rect(pts, b);
    for (int p = 0; p < 60; ++p) {
        bool hit = false;
        t.walk_up_all(p, [&](int u) {
            if (!t.lnode(u).list.empty()) hit = true;
        });
        CHECK(hit == (inside.count(p) > 0));
    }
}

TEST_CASE("wspd: two points") {
    std::vector<Point> pts{{0, 0}, {3, 4}};
    auto radii = wspd_distances(pts, 0.2);
    bool found = false;
    for (double v : radii.values) found |= (v >= 0.8 * 5 && v <= 1.2 * 5);
    CHECK(found);
}

TEST_CASE("wspd: colinear equally spaced points covered at eps=0.1") {
    std::vector<Point> pts;
    for (int i = 0; i < 8; ++i) pts.push_back({static_cast<double>(i)});
    auto radii = wspd_distances(pts, 0.1);
    for (int i = 0; i < 8; ++i)
        for (int j = i + 1; j < 8; ++j) {
            const double d = std::abs(i - j);
            bool found = false;
            for (double v : radii.values) found |= (v >= (1 - 0.1) * d - 1e-12 && v <= (1 + 0.1) * d + 1e-12);
            CHECK(found);
        }
}

TEST_CASE("wspd: all pairs covered within (1 +- eps) on fuzzed inputs, size bounded") {
    testsup::Rng rng(41);
    for (int trial = 0; trial < 8; ++trial) {
        const int d = 1 + trial % 3;
        const int n = 20 + rng.below(40);
        auto pts = testsup::random_points(rng, n, d);
        if (trial == 0) pts.push_back(pts.front());  // coincident pair
        for (double eps : {0.05, 0.2}) {
            auto radii = wspd_distances(pts, eps);
            for (std::size_t i = 0; i < pts.size(); ++i)
                for (std::size_t j = i + 1; j < pts.size(); ++j) {
                    const double dd = dist_l2(pts[i], pts[j]);
                    auto lo = std::lower_bound(radii.values.begin(), radii.values.end(), (1 - eps) * dd - 1e-12);
                    const bool found = lo != radii.values.end() && *lo <= (1 + eps) * dd + 1e-12;
                    CHECK(found);
                }
            const double cap = 600.0 * std::pow(eps, -static_cast<double>(d)) * static_cast<double>(pts.size());
            CHECK(static_cast<double>(radii.values.size()) <= cap);
        }
    }
}

TEST_CASE("cube_complement: one interval gives the two rays") {
    std::vector<Box> cubes{Box::closed({2.0}, {5.0})};
    auto cells = cube_complement(cubes);
    REQUIRE(cells.size() == 2);
    CHECK(cells[0].iv[0].lo_inf);
    CHECK(cells[0].iv[0].hi == 2.0);
    CHECK(cells[0].iv[0].hi_strict);
    CHECK(cells[1].iv[0].lo == 5.0);
    CHECK(cells[1].iv[0].lo_strict);
    CHECK(cells[1].iv[0].hi_inf);
}

TEST_CASE("cube_complement: one square gives four slabs") {
    std::vector<Box> cubes{Box::closed({0.0, 0.0}, {1.0, 1.0})};
    auto cells = cube_complement(cubes);
    CHECK(cells.size() == 4);
}

TEST_CASE("cube_complement: exact partition on random cubes") {
    testsup::Rng rng(55);
    for (int trial = 0; trial < 6; ++trial) {
        const int d = 1 + trial % 3;
        std::vector<Box> cubes;
        const int k = 1 + rng.below(3);
        for (int c = 0; c < k; ++c) {
            Point lo, hi;
            for (int a = 0; a < d; ++a) {
                double base = rng.uniform(0, 8);
                double side = rng.uniform(0.5, 3.0);
                lo.push_back(base);
                hi.push_back(base + side);
            }
            cubes.push_back(Box::closed(lo, hi));
        }
        auto cells = cube_complement(cubes);
        CHECK(static_cast<double>(cells.size()) <= std::pow(4.0 * k + 1.0, d));
        const int samples = trial % 3 == 1 ? 10000 : 2000;
        for (int s = 0; s < samples; ++s) {
            Point x;
            for (int a = 0; a < d; ++a) x.push_back(rng.uniform(-2, 12));
            bool in_cube = false;
            for (const auto& c : cubes) in_cube |= c.contains(x);
            int in_cells = 0;
            for (const auto& cell : cells) in_cells += cell.contains(x) ? 1 : 0;
            CHECK(in_cells == (in_cube ? 0 : 1));
        }
        // cells never reach into a cube interior
        for (const auto& c : cubes) {
            Point mid;
            for (const auto& iv : c.iv) mid.push_back((iv.lo + iv.hi) / 2);
            for (const auto& cell : cells) CHECK_FALSE(cell.contains(mid));
        }
    }
}
