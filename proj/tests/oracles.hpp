#pragma once

// Independent reference implementations used only by tests. Each is written
// from the textbook definition, separately from the library code it checks.

#include <cstdint>
#include <vector>

#include "dlo/chainfit.hpp"
#include "dlo/contour.hpp"
#include "dlo/geometry.hpp"
#include "dlo/merge.hpp"
#include "dlo/raster.hpp"

namespace oracle {

struct Labels {
    std::vector<std::vector<int>> grid;
    int count = 0;
};

/// Recursive 8-connected flood fill, components numbered in raster-scan order.
Labels flood_fill_labels(const dlo::BinaryMask& mask);

/// Straightforward two-subiteration thinning on a nested-vector grid; no
/// shortcuts, whole image rescanned every pass.
dlo::BinaryMask reference_thin(const dlo::BinaryMask& mask);

/// Moore-neighbor border following, one clockwise path per component starting
/// at its topmost-leftmost pixel.
std::vector<std::vector<dlo::PixelCoord>> moore_trace(const dlo::BinaryMask& mask);

/// Classic integer Bresenham line enumeration (steep/swap formulation).
std::vector<dlo::PixelCoord> bresenham_line(dlo::PixelCoord a, dlo::PixelCoord b);

/// The pruning conflict predicate, recomputed directly.
bool segments_overlap(const dlo::Segment& a, const dlo::Segment& b, double max_dist,
                      double max_angle);

/// True when no surviving segment pair conflicts (quadratic scan).
bool prune_postcondition_holds(const std::vector<dlo::Chain>& chains, const dlo::FitConfig& cfg);

struct BestMerge {
    int chain_a = -1;
    dlo::ChainEnd end_a = dlo::ChainEnd::head;
    int chain_b = -1;
    dlo::ChainEnd end_b = dlo::ChainEnd::head;
    double total = 0.0;
};

/// Exhaustive enumeration of all open-chain end pairs with costs recomputed
/// from the partial-cost definitions.
std::optional<BestMerge> best_merge_bruteforce(const std::vector<dlo::Chain>& chains,
                                               const dlo::MergeConfig& cfg);

/// Dense polyline of a circular arc from a start pose: the path turning at a
/// constant rate, integrated numerically in small steps.
std::vector<dlo::Vec2> arc_polyline(const dlo::Vec2& start, const dlo::Vec2& dir, double radius,
                                    double total_angle, int samples);

// --- fixtures ---------------------------------------------------------------

dlo::BinaryMask rect_mask(int w, int h, int x0, int y0, int rw, int rh);

/// Annulus (ring) of inner/outer radius around a center.
dlo::BinaryMask annulus_mask(int w, int h, double cx, double cy, double r_in, double r_out);

/// Smooth random stroke of the given thickness.
dlo::BinaryMask curve_mask(uint64_t seed, int w, int h, double thickness);

/// Random discs and thick strokes; exercises thinning on arbitrary shapes
/// (compact even-parity blobs can legitimately erode away entirely).
dlo::BinaryMask blob_mask(uint64_t seed, int w, int h);

/// Elongated stroke shapes only, the mask family the pipeline actually
/// thins; components survive thinning with their count preserved.
dlo::BinaryMask cable_mask(uint64_t seed, int w, int h);

/// Three-armed skeleton with arms of the given length meeting at a center.
dlo::BinaryMask y_mask(int arm);

/// Truth resampled as a detection chain: joints chord-stepped at spacing.
dlo::Chain chain_from_polyline(const std::vector<dlo::Vec2>& points, double spacing);

/// Number of enclosed background regions (4-connected holes).
int count_holes(const dlo::BinaryMask& mask);

/// Deterministic xorshift generator for test data.
class TestRng {
  public:
    explicit TestRng(uint64_t seed) : state_(seed ? seed : 0x9e3779b97f4a7c15ULL) {}
    uint64_t next() {
        state_ ^= state_ << 13;
        state_ ^= state_ >> 7;
        state_ ^= state_ << 17;
        return state_;
    }
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * ((next() >> 11) * 0x1.0p-53);
    }
    int range(int lo, int hi) {  // inclusive
        return lo + static_cast<int>(next() % static_cast<uint64_t>(hi - lo + 1));
    }

  private:
    uint64_t state_;
};

}  // namespace oracle
