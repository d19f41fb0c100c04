#include "dlo/pipeline.hpp"

#include <chrono>

#include "dlo/contour.hpp"

namespace dlo {

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

DetectionResult detect(const Image& image, const PipelineConfig& config) {
    DetectionResult result;
    auto total0 = Clock::now();

    auto t = Clock::now();
    BinaryMask mask = segment_color(image, config.color_range);
    result.timings.segment_ms = ms_since(t);

    t = Clock::now();
    BinaryMask filtered = filter_small_components(mask, config.min_component_area);
    result.timings.components_ms = ms_since(t);

    t = Clock::now();
    BinaryMask thinned = thin(filtered);
    result.timings.thin_ms = ms_since(t);

    t = Clock::now();
    std::vector<PixelPath> paths = trace_borders(thinned);
    result.timings.trace_ms = ms_since(t);

    t = Clock::now();
    std::vector<Chain> chains;
    for (const PixelPath& path : paths) {
        std::vector<Chain> fitted = fit_chains(path, config.fit);
        chains.insert(chains.end(), std::make_move_iterator(fitted.begin()),
                      std::make_move_iterator(fitted.end()));
    }
    result.timings.fit_ms = ms_since(t);

    t = Clock::now();
    std::vector<Chain> pruned = prune_overlaps(chains, config.fit);
    result.timings.prune_ms = ms_since(t);

    t = Clock::now();
    auto [merged, records] = merge_all(pruned, config.merge);
    result.timings.merge_ms = ms_since(t);

    result.chains = std::move(merged);
    result.records = std::move(records);
    result.timings.total_ms = ms_since(total0);
    return result;
}

Image render_overlay(const Image& image, const DetectionResult& result,
                     const PipelineConfig& config) {
    Image out = image;
    for (const Chain& chain : result.chains) {
        for (size_t i = 0; i < chain.segment_count(); ++i) {
            Segment seg = chain.segment(i);
            Rgb color = seg.filled ? config.overlay_filled : config.overlay_chain;
            draw_polyline_onto(out, {seg.a, seg.b}, color, config.overlay_thickness);
        }
    }
    return out;
}

}  // namespace dlo
