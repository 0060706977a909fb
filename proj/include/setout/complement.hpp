#pragma once

#include <vector>

#include "setout/geometry.hpp"

namespace setout {

// Axis-sweep decomposition of R^d minus a union of closed boxes. The output
// boxes carry open/closed side flags and, together with the input boxes,
// tile R^d exactly: every point lies in exactly one output box or in some
// input box, never both. Output size is at most (4k+1)^d before the
// adjacent-cell merge that usually brings it near (2k+1)^d.
std::vector<Box> cube_complement(const std::vector<Box>& cubes);

}  // namespace setout
