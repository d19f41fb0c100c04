#pragma once

#include <vector>

#include "dlo/raster.hpp"

namespace dlo {

/// One thinned connected component. source_component is the id the pixels had
/// in the labeling of the input mask.
struct Skeleton {
    BinaryMask mask;
    int source_component = 0;
};

/// Two-subiteration parallel morphological thinning (classical neighbor-count
/// 2..6 and transition-count == 1 conditions, implicit background padding).
/// Reduces every component to a connected single-pixel-wide skeleton; stops
/// when a full pass deletes nothing.
BinaryMask thin(const BinaryMask& mask);

/// thin() then split by connected_components; one Skeleton per component.
std::vector<Skeleton> skeleton_components(const BinaryMask& mask);

}  // namespace dlo
