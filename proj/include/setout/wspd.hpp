#pragma once

#include <vector>

#include "setout/geometry.hpp"
#include "setout/metric_core.hpp"

namespace setout {

// Well-separated pair decomposition over a compressed quadtree with
// separation 2/eps: for every pair p,q there is a list entry L with
// (1-eps) dist(p,q) <= L <= (1+eps) dist(p,q). The returned radii are
// sorted, deduplicated and include 0 (covers coincident points).
CandidateRadii wspd_distances(const std::vector<Point>& pts, double eps);

}  // namespace setout
