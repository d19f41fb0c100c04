#pragma once

#include <cstddef>
#include <vector>

#include "dlo/contour.hpp"
#include "dlo/geometry.hpp"

namespace dlo {

/// One rigid cylinder of the DLO model.
struct Segment {
    Vec2 a;
    Vec2 b;
    bool filled = false;  // synthesized during gap filling

    Vec2 midpoint() const { return (a + b) * 0.5; }
    Vec2 direction() const { return (b - a).unit(); }
    double length() const { return (b - a).norm(); }
};

/// Chain of fixed-length segments joined by passive spherical joints.
/// Segment i spans joints[i] -> joints[i+1]; a closed chain additionally wraps
/// joints.back() -> joints.front(), so it has as many segments as joints.
struct Chain {
    std::vector<Vec2> joints;
    std::vector<bool> filled_flags;  // one per segment
    bool closed = false;

    size_t segment_count() const { return filled_flags.size(); }
    Segment segment(size_t i) const {
        size_t j = (i + 1 < joints.size()) ? i + 1 : 0;
        return {joints[i], joints[j], filled_flags[i]};
    }
    void reverse();

    bool operator==(const Chain&) const = default;
};

struct FitConfig {
    double segment_length = 15.0;          // l_s, pixels
    int tip_window = 3;                    // retrace symmetry window, path steps
    double overlap_dist = 7.5;             // midpoint distance gate (l_s / 2)
    double overlap_angle = kPi / 6.0;      // acute direction gate, radians
};

enum class ChainEnd { head, tail };

/// Indices i where the path retraces itself: path[i+k] == path[i-k] for all
/// 1 <= k <= min(window, room on either side). Index 0 and the last index are
/// always included. Strictly ascending.
std::vector<size_t> detect_tips(const PixelPath& path, int window);

/// Split the path at tips, then chord-fit each piece: from the current anchor,
/// the segment ends at the first later path pixel at Euclidean distance
/// >= segment_length. Pieces yielding zero segments are dropped. A loop path
/// (no interior tips, endpoints adjacent) becomes one chain marked closed.
std::vector<Chain> fit_chains(const PixelPath& path, const FitConfig& cfg);

/// Remove duplicate segments from the out-and-back traversal: two segments
/// conflict when their midpoints are closer than overlap_dist and the acute
/// angle between their directions is under overlap_angle. The segment in the
/// currently smaller chain loses (ties: the later chain in list order, then
/// the later segment). Chains split where interior segments were removed.
std::vector<Chain> prune_overlaps(const std::vector<Chain>& chains, const FitConfig& cfg);

struct EndPose {
    Vec2 point;
    Vec2 direction;  // unit vector pointing outward, away from the chain body
};

/// Terminal joint and outward unit direction of the chosen end.
/// Throws std::invalid_argument on an empty chain.
EndPose chain_end_pose(const Chain& chain, ChainEnd end);

}  // namespace dlo
