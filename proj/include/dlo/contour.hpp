#pragma once

#include <vector>

#include "dlo/geometry.hpp"
#include "dlo/raster.hpp"

namespace dlo {

/// Ordered border trace; consecutive points are 8-adjacent.
struct PixelPath {
    std::vector<PixelCoord> points;
};

/// Follow the outer border of every 8-connected component, clockwise from the
/// topmost-leftmost pixel (initial search direction west). On single-pixel-wide
/// skeletons the trace goes out and back along each branch, so pixels can
/// appear more than once. Paths are returned in component-id order.
std::vector<PixelPath> trace_borders(const BinaryMask& mask);

/// Sum of the 1 / sqrt(2) steps between consecutive points from i to j.
/// Throws std::out_of_range unless 0 <= i <= j < size.
double path_arclength(const PixelPath& path, size_t i, size_t j);

}  // namespace dlo
