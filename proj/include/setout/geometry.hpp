#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace setout {

using Point = std::vector<double>;

inline double dist_l2(const Point& a, const Point& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

inline double dist_linf(const Point& a, const Point& b) {
    double s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s = std::max(s, std::abs(a[i] - b[i]));
    return s;
}

// One axis of a box. Infinite endpoints are tagged explicitly instead of
// relying on IEEE infinities, and are always open. Finite endpoints are
// closed unless the strict flag is set.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool lo_inf = false;
    bool hi_inf = false;
    bool lo_strict = false;
    bool hi_strict = false;

    static Interval all() {
        Interval iv;
        iv.lo_inf = iv.hi_inf = true;
        return iv;
    }
    static Interval closed(double a, double b) {
        Interval iv;
        iv.lo = a;
        iv.hi = b;
        return iv;
    }
    static Interval point(double v) { return closed(v, v); }

    bool contains(double v) const {
        if (!lo_inf) {
            if (lo_strict ? !(v > lo) : !(v >= lo)) return false;
        }
        if (!hi_inf) {
            if (hi_strict ? !(v < hi) : !(v <= hi)) return false;
        }
        return true;
    }
    // True when no value satisfies the interval (only possible with finite ends).
    bool empty() const {
        if (lo_inf || hi_inf) return false;
        if (lo < hi) return false;
        if (lo > hi) return true;
        return lo_strict || hi_strict;
    }
};

struct Box {
    std::vector<Interval> iv;

    Box() = default;
    explicit Box(std::vector<Interval> axes) : iv(std::move(axes)) {}
    static Box whole(int d) { return Box(std::vector<Interval>(static_cast<std::size_t>(d), Interval::all())); }
    // Closed box from corner vectors.
    static Box closed(const Point& lo, const Point& hi) {
        Box b;
        b.iv.reserve(lo.size());
        for (std::size_t i = 0; i < lo.size(); ++i) b.iv.push_back(Interval::closed(lo[i], hi[i]));
        return b;
    }
    // Closed L-infinity ball: cube of side 2r around c.
    static Box cube(const Point& c, double r) {
        Box b;
        b.iv.reserve(c.size());
        for (double x : c) b.iv.push_back(Interval::closed(x - r, x + r));
        return b;
    }

    int dim() const { return static_cast<int>(iv.size()); }
    bool contains(const Point& p) const {
        for (std::size_t i = 0; i < iv.size(); ++i)
            if (!iv[i].contains(p[i])) return false;
        return true;
    }
    bool empty() const {
        for (const auto& a : iv)
            if (a.empty()) return true;
        return false;
    }
};

inline double inf() { return std::numeric_limits<double>::infinity(); }

}  // namespace setout
