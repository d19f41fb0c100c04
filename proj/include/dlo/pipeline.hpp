#pragma once

#include <vector>

#include "dlo/chainfit.hpp"
#include "dlo/merge.hpp"
#include "dlo/raster.hpp"
#include "dlo/skeletonize.hpp"

namespace dlo {

/// Every tunable of the detection pipeline, serializable as one document.
struct PipelineConfig {
    // Red band wrapping through 0 degrees.
    ColorRange color_range{345.0, 15.0, 0.35, 1.0, 0.15, 1.0};
    int min_component_area = 30;
    FitConfig fit;
    MergeConfig merge;
    Rgb overlay_chain{160, 60, 255};
    Rgb overlay_filled{255, 105, 180};
    double overlay_thickness = 3.0;
};

struct StageTimings {
    double segment_ms = 0.0;
    double components_ms = 0.0;
    double thin_ms = 0.0;
    double trace_ms = 0.0;
    double fit_ms = 0.0;
    double prune_ms = 0.0;
    double merge_ms = 0.0;
    double total_ms = 0.0;
};

struct DetectionResult {
    std::vector<Chain> chains;
    std::vector<MergeRecord> records;
    StageTimings timings;
};

/// Segmentation -> component filter -> thinning -> border tracing -> chain
/// fitting -> pruning -> merging, with per-stage wall times.
DetectionResult detect(const Image& image, const PipelineConfig& config);

/// Chains stroked over the input; filled segments in the second color.
Image render_overlay(const Image& image, const DetectionResult& result,
                     const PipelineConfig& config);

}  // namespace dlo
