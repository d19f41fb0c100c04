#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "dlo/pipeline.hpp"
#include "dlo/raster.hpp"

namespace dlo {

struct SceneParams {
    int width = 1280;
    int height = 720;
    int dlo_count = 1;  // 1 or 2
    double stroke_width = 6.0;
    Rgb dlo_color{200, 30, 40};
    Rgb background_color{255, 255, 255};
    int gap_count = 0;  // 0..6
    double gap_min = 20.0;
    double gap_max = 70.0;
    bool crossing = false;
    uint64_t seed = 1;
};

/// Arclength interval of a curve hidden by an occlusion.
struct OcclusionSpan {
    double s0 = 0.0;
    double s1 = 0.0;
};

struct SceneTruth {
    std::vector<std::vector<Vec2>> centerlines;              // dense, <= 1 px spacing
    std::vector<std::vector<OcclusionSpan>> occluded_spans;  // per curve, sorted, disjoint
    std::vector<Vec2> crossings;
    std::vector<double> arclengths;  // total per curve

    /// The exact pixel set the strokes were painted with; segmentation oracle.
    BinaryMask stroke_mask;
};

class GenerationError : public std::runtime_error {
  public:
    explicit GenerationError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Deterministic per seed. Smooth seeded spline curves rendered at
/// stroke_width over the background, with gap spans erased. Throws
/// GenerationError when the params cannot be satisfied after bounded retries.
std::pair<Image, SceneTruth> generate_scene(const SceneParams& params);

/// Scoring thresholds; every value is reported alongside the results.
struct ScoreConfig {
    double tol = 5.0;                   // px, centerline / fill tolerance
    double frame_joint_factor = 2.0;    // joints must stay within factor * tol
    double merge_visible_slack = 45.0;  // px of visible truth a merge may bridge
    double occlusion_reach = 15.0;      // px a filled joint may sit outside its span
    double end_exclusion = 21.0;        // px of open-curve ends exempt from coverage
    double snap_window = 8.0;           // px, alternate-projection window at crossings
};

struct OcclusionOutcome {
    int curve = 0;
    double s0 = 0.0;
    double s1 = 0.0;
    bool correct = false;
    int filled_joints = 0;
};

struct MergeOutcome {
    bool correct = false;
    bool same_curve = false;
    double bridged_visible = 0.0;  // best visible-truth length inside the joined interval
};

struct Metrics {
    bool frame_correct = false;
    int occlusions_total = 0;
    int occlusions_correct = 0;
    int merges_total = 0;
    int merges_correct = 0;
    double time_ms = 0.0;

    double max_coverage_gap = 0.0;    // worst centerline-sample-to-chain distance
    double max_joint_deviation = 0.0; // worst joint-to-centerline distance
    std::vector<OcclusionOutcome> occlusion_details;
    std::vector<MergeOutcome> merge_details;
};

/// Table-style scoring: a merge is correct when its two end points project to
/// the same truth curve with (up to crossing ambiguity) nothing but occluded
/// or slack-length truth between them; an occlusion is correct when filled
/// joints span it and all stay within tol; a frame is correct when every
/// centerline sample away from the open ends is covered within tol and no
/// joint strays past frame_joint_factor * tol.
Metrics score_detection(const std::vector<Chain>& chains, const std::vector<MergeRecord>& records,
                        const SceneTruth& truth, const ScoreConfig& cfg);

struct FrameReport {
    uint64_t seed = 0;
    Metrics metrics;
    StageTimings timings;
    bool failed = false;
    std::string error;
};

struct BenchmarkReport {
    std::vector<FrameReport> frames;
    ScoreConfig thresholds;

    int frames_total = 0;
    int frames_correct = 0;
    double frame_accuracy = 1.0;
    int occlusions_total = 0;
    int occlusions_correct = 0;
    double occlusion_accuracy = 1.0;
    int merges_total = 0;
    int merges_correct = 0;
    double merge_accuracy = 1.0;

    double mean_ms = 0.0;
    double median_ms = 0.0;
    double stddev_ms = 0.0;
    StageTimings mean_stage_ms;
};

/// Generate, detect (timed on a single worker), and score each scene.
/// Per-frame failures are recorded, never fatal.
BenchmarkReport run_benchmark(const std::vector<SceneParams>& scenes,
                              const PipelineConfig& config, const ScoreConfig& score_cfg);

}  // namespace dlo
