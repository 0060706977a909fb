#include "setout/complement.hpp"

#include <algorithm>
#include <stdexcept>

namespace setout {

namespace {

// Does the cube's closed interval fully contain the refined sub-interval?
// Sub-intervals are rays, breakpoint singletons or open gaps between adjacent
// breakpoints, so per cube the answer is contain-or-disjoint, never partial.
bool covers(const Interval& cube, const Interval& sub) {
    if (sub.lo_inf || sub.hi_inf) return false;  // unbounded slab never inside a finite cube
    if (sub.lo == sub.hi && !sub.lo_strict) return cube.lo <= sub.lo && sub.lo <= cube.hi;  // point slab
    return cube.lo <= sub.lo && sub.hi <= cube.hi;  // open gap
}

void sweep(int axis, int d, std::vector<Interval>& prefix, const std::vector<Box>& cubes,
           const std::vector<int>& active, std::vector<Box>& out) {
    if (active.empty()) {
        std::vector<Interval> cell = prefix;
        for (int a = axis; a < d; ++a) cell.push_back(Interval::all());
        out.emplace_back(std::move(cell));
        return;
    }
    if (axis == d) return;  // covered by every remaining active cube on all axes

    std::vector<double> brk;
    for (int c : active) {
        brk.push_back(cubes[static_cast<std::size_t>(c)].iv[static_cast<std::size_t>(axis)].lo);
        brk.push_back(cubes[static_cast<std::size_t>(c)].iv[static_cast<std::size_t>(axis)].hi);
    }
    std::sort(brk.begin(), brk.end());
    brk.erase(std::unique(brk.begin(), brk.end()), brk.end());

    // Refined slabs: rays, breakpoints, gaps. Each is homogeneous per cube.
    std::vector<Interval> subs;
    {
        Interval ray;
        ray.lo_inf = true;
        ray.hi = brk.front();
        ray.hi_strict = true;
        subs.push_back(ray);
    }
    for (std::size_t i = 0; i < brk.size(); ++i) {
        subs.push_back(Interval::point(brk[i]));
        if (i + 1 < brk.size()) {
            Interval gap = Interval::closed(brk[i], brk[i + 1]);
            gap.lo_strict = gap.hi_strict = true;
            subs.push_back(gap);
        }
    }
    {
        Interval ray;
        ray.lo = brk.back();
        ray.lo_strict = true;
        ray.hi_inf = true;
        subs.push_back(ray);
    }

    std::vector<std::vector<int>> act(subs.size());
    for (std::size_t s = 0; s < subs.size(); ++s)
        for (int c : active) {
            const Interval& civ = cubes[static_cast<std::size_t>(c)].iv[static_cast<std::size_t>(axis)];
            if (covers(civ, subs[s])) act[s].push_back(c);
        }

    // Merge adjacent slabs with identical surviving-cube sets.
    std::size_t s = 0;
    while (s < subs.size()) {
        std::size_t e = s;
        Interval merged = subs[s];
        while (e + 1 < subs.size() && act[e + 1] == act[s]) {
            ++e;
            merged.hi = subs[e].hi;
            merged.hi_inf = subs[e].hi_inf;
            merged.hi_strict = subs[e].hi_strict;
        }
        prefix.push_back(merged);
        sweep(axis + 1, d, prefix, cubes, act[s], out);
        prefix.pop_back();
        s = e + 1;
    }
}

}  // namespace

std::vector<Box> cube_complement(const std::vector<Box>& cubes) {
    if (cubes.empty()) throw std::invalid_argument("cube_complement: need at least one cube");
    const int d = cubes.front().dim();
    for (const Box& b : cubes) {
        if (b.dim() != d) throw std::invalid_argument("cube_complement: dimension mismatch");
        for (const auto& iv : b.iv)
            if (iv.lo_inf || iv.hi_inf || iv.lo > iv.hi)
                throw std::invalid_argument("cube_complement: cubes must be finite closed boxes");
    }
    std::vector<int> all(cubes.size());
    for (std::size_t i = 0; i < cubes.size(); ++i) all[i] = static_cast<int>(i);
    std::vector<Box> out;
    std::vector<Interval> prefix;
    sweep(0, d, prefix, cubes, all, out);
    return out;
}

}  // namespace setout
