#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "dlo/chainfit.hpp"
#include "dlo/geometry.hpp"

namespace dlo {

/// Partial connection costs for one end pair, plus the weighted total.
struct MergeCost {
    double euclidean = 0.0;  // pixels
    double direction = 0.0;  // radians
    double curvature = 0.0;  // radians
    double total = 0.0;      // pixels after weighting
};

struct MergeConfig {
    double w_e = 1.0;                 // weight on euclidean cost
    double w_d = 15.0;                // pixels per radian of direction cost
    double w_c = 15.0;                // pixels per radian of curvature cost
    double kappa_max = kPi / 8.0;     // max turn per segment, radians
    double max_merge_cost = std::numeric_limits<double>::infinity();
    double segment_length = 15.0;     // l_s of the chains being merged
};

/// Audit trail of one greedy iteration; ids are list positions at merge time.
struct MergeRecord {
    int chain_a = 0;
    ChainEnd end_a = ChainEnd::head;
    int chain_b = 0;
    ChainEnd end_b = ChainEnd::head;
    MergeCost cost;
    int filled_segments = 0;
    Vec2 end_point_a;
    Vec2 end_point_b;
    bool fill_feasible = true;
};

double euclidean_cost(const EndPose& a, const EndPose& b);

/// Angle between a's outward direction and the reverse of b's, in [0, pi];
/// zero when the two chains continue smoothly into each other.
double direction_cost(const EndPose& a, const EndPose& b);

/// |alpha| + |beta|: the signed turn from a's direction onto the chord plus
/// the turn from the chord onto the reverse of b's direction. Coincident end
/// points cost zero.
double curvature_cost(const EndPose& a, const EndPose& b);

MergeCost connection_cost(const Chain& chain_a, ChainEnd end_a, const Chain& chain_b,
                          ChainEnd end_b, const MergeConfig& cfg);

struct MergeCandidate {
    int chain_a;
    ChainEnd end_a;
    int chain_b;
    ChainEnd end_b;
    MergeCost cost;
};

/// Argmin of connection_cost over all unordered open-chain pairs and their
/// four end combinations. Ties go to the lower chain ids, then head before
/// tail. nullopt when no candidate is within max_merge_cost.
std::optional<MergeCandidate> best_merge(const std::vector<Chain>& chains,
                                         const MergeConfig& cfg);

struct FillResult {
    std::vector<Segment> segments;  // each exactly segment_length long, filled
    bool feasible = true;
};

/// Natural-curvature gap fill from pose a toward pose b: straight runs first,
/// then a constant-turn-rate arc (at most kappa_max per joint) that meets b's
/// point and tangent; falls back to straight-arc-straight at kappa_max, and to
/// bounded-turn steering (feasible=false when the target cannot be met). Gaps
/// shorter than half a segment return an empty fill.
FillResult fill_gap(const EndPose& a, const EndPose& b, double segment_length,
                    double kappa_max);

/// Concatenate: chain_a oriented so end_a is last, fill, then chain_b oriented
/// so end_b is first. The fill's landing joint is replaced by chain_b's first
/// joint, so the merged chain gains exactly fill.size() segments; an empty
/// fill joins the chains at the midpoint of the two end points.
Chain merge_pair(const Chain& chain_a, ChainEnd end_a, const Chain& chain_b, ChainEnd end_b,
                 const std::vector<Segment>& fill);

/// Greedy loop: repeatedly connect the cheapest end pair until one open chain
/// remains (or nothing is within max_merge_cost). Closed chains pass through.
std::pair<std::vector<Chain>, std::vector<MergeRecord>> merge_all(
    const std::vector<Chain>& chains, const MergeConfig& cfg);

}  // namespace dlo
