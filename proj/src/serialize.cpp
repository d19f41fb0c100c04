#include "dlo/serialize.hpp"

#include <cmath>

#include "json.hpp"

namespace dlo {

namespace {

using Json = nlohmann::ordered_json;

Json parse(const std::string& text, const char* what) {
    Json j = Json::parse(text, nullptr, false);
    if (j.is_discarded()) throw ParseError(std::string(what) + ": invalid JSON");
    return j;
}

Json rgb_to_json(Rgb c) { return Json::array({c.r, c.g, c.b}); }

Rgb rgb_from_json(const Json& j) {
    if (!j.is_array() || j.size() != 3) throw ParseError("color must be [r, g, b]");
    return {j[0].get<uint8_t>(), j[1].get<uint8_t>(), j[2].get<uint8_t>()};
}

const char* end_name(ChainEnd e) { return e == ChainEnd::head ? "head" : "tail"; }

ChainEnd end_from_name(const std::string& s) {
    if (s == "head") return ChainEnd::head;
    if (s == "tail") return ChainEnd::tail;
    throw ParseError("chain end must be 'head' or 'tail', got '" + s + "'");
}

Json timings_to_json(const StageTimings& t) {
    Json j;
    j["segment"] = t.segment_ms;
    j["components"] = t.components_ms;
    j["thin"] = t.thin_ms;
    j["trace"] = t.trace_ms;
    j["fit"] = t.fit_ms;
    j["prune"] = t.prune_ms;
    j["merge"] = t.merge_ms;
    j["total"] = t.total_ms;
    return j;
}

}  // namespace

std::string config_to_json(const PipelineConfig& c) {
    Json j;
    j["version"] = 1;
    j["color_range"] = {{"hue_lo", c.color_range.hue_lo},   {"hue_hi", c.color_range.hue_hi},
                        {"sat_lo", c.color_range.sat_lo},   {"sat_hi", c.color_range.sat_hi},
                        {"val_lo", c.color_range.val_lo},   {"val_hi", c.color_range.val_hi}};
    j["min_component_area"] = c.min_component_area;
    j["fit"] = {{"segment_length", c.fit.segment_length},
                {"tip_window", c.fit.tip_window},
                {"overlap_dist", c.fit.overlap_dist},
                {"overlap_angle", c.fit.overlap_angle}};
    j["merge"] = {{"w_e", c.merge.w_e},
                  {"w_d", c.merge.w_d},
                  {"w_c", c.merge.w_c},
                  {"kappa_max", c.merge.kappa_max},
                  {"max_merge_cost", std::isinf(c.merge.max_merge_cost)
                                         ? Json(nullptr)
                                         : Json(c.merge.max_merge_cost)}};
    j["overlay"] = {{"chain_color", rgb_to_json(c.overlay_chain)},
                    {"filled_color", rgb_to_json(c.overlay_filled)},
                    {"thickness", c.overlay_thickness}};
    return j.dump(2) + "\n";
}

PipelineConfig config_from_json(const std::string& text) {
    Json j = parse(text, "config");
    PipelineConfig c;
    try {
        if (j.contains("color_range")) {
            const Json& r = j["color_range"];
            c.color_range.hue_lo = r.value("hue_lo", c.color_range.hue_lo);
            c.color_range.hue_hi = r.value("hue_hi", c.color_range.hue_hi);
            c.color_range.sat_lo = r.value("sat_lo", c.color_range.sat_lo);
            c.color_range.sat_hi = r.value("sat_hi", c.color_range.sat_hi);
            c.color_range.val_lo = r.value("val_lo", c.color_range.val_lo);
            c.color_range.val_hi = r.value("val_hi", c.color_range.val_hi);
        }
        c.min_component_area = j.value("min_component_area", c.min_component_area);
        if (j.contains("fit")) {
            const Json& f = j["fit"];
            c.fit.segment_length = f.value("segment_length", c.fit.segment_length);
            c.fit.tip_window = f.value("tip_window", c.fit.tip_window);
            c.fit.overlap_dist = f.value("overlap_dist", c.fit.segment_length / 2.0);
            c.fit.overlap_angle = f.value("overlap_angle", c.fit.overlap_angle);
        }
        // Radian-to-pixel weights default to the segment length.
        c.merge.segment_length = c.fit.segment_length;
        c.merge.w_d = c.fit.segment_length;
        c.merge.w_c = c.fit.segment_length;
        if (j.contains("merge")) {
            const Json& m = j["merge"];
            c.merge.w_e = m.value("w_e", c.merge.w_e);
            c.merge.w_d = m.value("w_d", c.merge.w_d);
            c.merge.w_c = m.value("w_c", c.merge.w_c);
            c.merge.kappa_max = m.value("kappa_max", c.merge.kappa_max);
            if (m.contains("max_merge_cost") && !m["max_merge_cost"].is_null())
                c.merge.max_merge_cost = m["max_merge_cost"].get<double>();
        }
        if (j.contains("overlay")) {
            const Json& o = j["overlay"];
            if (o.contains("chain_color")) c.overlay_chain = rgb_from_json(o["chain_color"]);
            if (o.contains("filled_color")) c.overlay_filled = rgb_from_json(o["filled_color"]);
            c.overlay_thickness = o.value("thickness", c.overlay_thickness);
        }
    } catch (const Json::exception& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
    if (c.fit.segment_length <= std::sqrt(2.0))
        throw ParseError("config: segment_length must exceed sqrt(2)");
    if (c.merge.kappa_max <= 0.0 || c.merge.kappa_max >= kPi)
        throw ParseError("config: kappa_max must be in (0, pi)");
    return c;
}

std::string detection_to_json(const DetectionResult& result, double segment_length,
                              bool include_timings) {
    Json j;
    j["version"] = 1;
    j["segment_length"] = segment_length;
    Json chains = Json::array();
    for (const Chain& c : result.chains) {
        Json jc;
        Json joints = Json::array();
        for (const Vec2& p : c.joints) joints.push_back(Json::array({p.x, p.y}));
        jc["joints"] = std::move(joints);
        jc["filled"] = c.filled_flags;
        jc["closed"] = c.closed;
        chains.push_back(std::move(jc));
    }
    j["chains"] = std::move(chains);
    Json records = Json::array();
    for (const MergeRecord& r : result.records) {
        Json jr;
        jr["chain_a"] = r.chain_a;
        jr["end_a"] = end_name(r.end_a);
        jr["chain_b"] = r.chain_b;
        jr["end_b"] = end_name(r.end_b);
        jr["cost"] = {{"euclidean", r.cost.euclidean},
                      {"direction", r.cost.direction},
                      {"curvature", r.cost.curvature},
                      {"total", r.cost.total}};
        jr["filled_segments"] = r.filled_segments;
        jr["end_point_a"] = Json::array({r.end_point_a.x, r.end_point_a.y});
        jr["end_point_b"] = Json::array({r.end_point_b.x, r.end_point_b.y});
        jr["fill_feasible"] = r.fill_feasible;
        records.push_back(std::move(jr));
    }
    j["merge_records"] = std::move(records);
    if (include_timings) j["timings_ms"] = timings_to_json(result.timings);
    return j.dump(2) + "\n";
}

DetectionResult detection_from_json(const std::string& text, double* segment_length) {
    Json j = parse(text, "detection");
    DetectionResult result;
    try {
        if (j.value("version", 0) != 1) throw ParseError("detection: unsupported version");
        if (segment_length) *segment_length = j.value("segment_length", 0.0);
        for (const Json& jc : j.at("chains")) {
            Chain c;
            for (const Json& p : jc.at("joints"))
                c.joints.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
            c.filled_flags = jc.at("filled").get<std::vector<bool>>();
            c.closed = jc.value("closed", false);
            size_t expect = c.closed ? c.joints.size() : c.joints.size() - 1;
            if (c.filled_flags.size() != expect)
                throw ParseError("detection: joint/flag counts inconsistent");
            result.chains.push_back(std::move(c));
        }
        for (const Json& jr : j.at("merge_records")) {
            MergeRecord r;
            r.chain_a = jr.at("chain_a").get<int>();
            r.end_a = end_from_name(jr.at("end_a").get<std::string>());
            r.chain_b = jr.at("chain_b").get<int>();
            r.end_b = end_from_name(jr.at("end_b").get<std::string>());
            const Json& jc = jr.at("cost");
            r.cost = {jc.at("euclidean").get<double>(), jc.at("direction").get<double>(),
                      jc.at("curvature").get<double>(), jc.at("total").get<double>()};
            r.filled_segments = jr.at("filled_segments").get<int>();
            r.end_point_a = {jr.at("end_point_a").at(0).get<double>(),
                             jr.at("end_point_a").at(1).get<double>()};
            r.end_point_b = {jr.at("end_point_b").at(0).get<double>(),
                             jr.at("end_point_b").at(1).get<double>()};
            r.fill_feasible = jr.value("fill_feasible", true);
            result.records.push_back(r);
        }
        if (j.contains("timings_ms")) {
            const Json& t = j["timings_ms"];
            result.timings.segment_ms = t.value("segment", 0.0);
            result.timings.components_ms = t.value("components", 0.0);
            result.timings.thin_ms = t.value("thin", 0.0);
            result.timings.trace_ms = t.value("trace", 0.0);
            result.timings.fit_ms = t.value("fit", 0.0);
            result.timings.prune_ms = t.value("prune", 0.0);
            result.timings.merge_ms = t.value("merge", 0.0);
            result.timings.total_ms = t.value("total", 0.0);
        }
    } catch (const Json::exception& e) {
        throw ParseError(std::string("detection: ") + e.what());
    }
    return result;
}

std::string truth_to_json(const SceneTruth& truth, const SceneParams& params) {
    Json j;
    j["version"] = 1;
    j["width"] = params.width;
    j["height"] = params.height;
    j["stroke_width"] = params.stroke_width;
    j["seed"] = params.seed;
    Json lines = Json::array();
    for (const auto& line : truth.centerlines) {
        Json pts = Json::array();
        for (const Vec2& p : line) pts.push_back(Json::array({p.x, p.y}));
        lines.push_back(std::move(pts));
    }
    j["centerlines"] = std::move(lines);
    Json spans = Json::array();
    for (const auto& per_curve : truth.occluded_spans) {
        Json arr = Json::array();
        for (const OcclusionSpan& s : per_curve) arr.push_back(Json::array({s.s0, s.s1}));
        spans.push_back(std::move(arr));
    }
    j["occluded_spans"] = std::move(spans);
    Json crossings = Json::array();
    for (const Vec2& p : truth.crossings) crossings.push_back(Json::array({p.x, p.y}));
    j["crossings"] = std::move(crossings);
    j["arclengths"] = truth.arclengths;
    return j.dump(2) + "\n";
}

SceneTruth truth_from_json(const std::string& text) {
    Json j = parse(text, "truth");
    SceneTruth truth;
    try {
        if (j.value("version", 0) != 1) throw ParseError("truth: unsupported version");
        for (const Json& line : j.at("centerlines")) {
            std::vector<Vec2> pts;
            for (const Json& p : line) pts.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
            truth.centerlines.push_back(std::move(pts));
        }
        for (const Json& per_curve : j.at("occluded_spans")) {
            std::vector<OcclusionSpan> spans;
            for (const Json& s : per_curve)
                spans.push_back({s.at(0).get<double>(), s.at(1).get<double>()});
            truth.occluded_spans.push_back(std::move(spans));
        }
        for (const Json& p : j.at("crossings"))
            truth.crossings.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
        truth.arclengths = j.at("arclengths").get<std::vector<double>>();
    } catch (const Json::exception& e) {
        throw ParseError(std::string("truth: ") + e.what());
    }
    return truth;
}

namespace {

Json scene_params_to_json(const SceneParams& p) {
    Json j;
    j["seed"] = p.seed;
    j["width"] = p.width;
    j["height"] = p.height;
    j["dlo_count"] = p.dlo_count;
    j["stroke_width"] = p.stroke_width;
    j["dlo_color"] = rgb_to_json(p.dlo_color);
    j["background_color"] = rgb_to_json(p.background_color);
    j["gap_count"] = p.gap_count;
    j["gap_len"] = Json::array({p.gap_min, p.gap_max});
    j["crossing"] = p.crossing;
    return j;
}

SceneParams scene_params_from_json(const Json& j) {
    SceneParams p;
    p.seed = j.value("seed", p.seed);
    p.width = j.value("width", p.width);
    p.height = j.value("height", p.height);
    p.dlo_count = j.value("dlo_count", p.dlo_count);
    p.stroke_width = j.value("stroke_width", p.stroke_width);
    if (j.contains("dlo_color")) p.dlo_color = rgb_from_json(j["dlo_color"]);
    if (j.contains("background_color")) p.background_color = rgb_from_json(j["background_color"]);
    p.gap_count = j.value("gap_count", p.gap_count);
    if (j.contains("gap_len")) {
        const Json& g = j["gap_len"];
        if (!g.is_array() || g.size() != 2) throw ParseError("manifest: gap_len must be [min, max]");
        p.gap_min = g[0].get<double>();
        p.gap_max = g[1].get<double>();
    }
    p.crossing = j.value("crossing", p.crossing);
    return p;
}

}  // namespace

std::string manifest_to_json(const std::vector<SceneParams>& scenes) {
    Json j;
    j["version"] = 1;
    Json arr = Json::array();
    for (const SceneParams& p : scenes) arr.push_back(scene_params_to_json(p));
    j["scenes"] = std::move(arr);
    return j.dump(2) + "\n";
}

std::vector<SceneParams> manifest_from_json(const std::string& text) {
    Json j = parse(text, "manifest");
    std::vector<SceneParams> scenes;
    try {
        if (j.value("version", 0) != 1) throw ParseError("manifest: unsupported version");
        if (!j.contains("scenes") || !j["scenes"].is_array())
            throw ParseError("manifest: missing scenes array");
        for (const Json& s : j["scenes"]) scenes.push_back(scene_params_from_json(s));
    } catch (const Json::exception& e) {
        throw ParseError(std::string("manifest: ") + e.what());
    }
    return scenes;
}

std::string report_to_json(const BenchmarkReport& report, const PipelineConfig& config) {
    Json j;
    j["version"] = 1;
    j["thresholds"] = {{"tol", report.thresholds.tol},
                       {"frame_joint_factor", report.thresholds.frame_joint_factor},
                       {"merge_visible_slack", report.thresholds.merge_visible_slack},
                       {"occlusion_reach", report.thresholds.occlusion_reach},
                       {"end_exclusion", report.thresholds.end_exclusion},
                       {"snap_window", report.thresholds.snap_window}};
    j["config"] = Json::parse(config_to_json(config));
    j["frames"] = {{"total", report.frames_total},
                   {"correct", report.frames_correct},
                   {"accuracy", report.frame_accuracy}};
    j["occlusions"] = {{"total", report.occlusions_total},
                       {"correct", report.occlusions_correct},
                       {"accuracy", report.occlusion_accuracy}};
    j["merges"] = {{"total", report.merges_total},
                   {"correct", report.merges_correct},
                   {"accuracy", report.merge_accuracy}};
    j["timing_ms"] = {{"mean", report.mean_ms},
                      {"median", report.median_ms},
                      {"stddev", report.stddev_ms},
                      {"per_stage_mean", timings_to_json(report.mean_stage_ms)}};
    j["environment"] = {{"workers", 1}, {"note", "single-worker timing, wall clock"}};
    Json frames = Json::array();
    for (const FrameReport& f : report.frames) {
        Json jf;
        jf["seed"] = f.seed;
        if (f.failed) {
            jf["failed"] = true;
            jf["error"] = f.error;
        } else {
            jf["frame_correct"] = f.metrics.frame_correct;
            jf["occlusions"] = Json::array({f.metrics.occlusions_correct,
                                            f.metrics.occlusions_total});
            jf["merges"] = Json::array({f.metrics.merges_correct, f.metrics.merges_total});
            jf["time_ms"] = f.metrics.time_ms;
            jf["max_coverage_gap"] = f.metrics.max_coverage_gap;
            jf["max_joint_deviation"] = f.metrics.max_joint_deviation;
        }
        frames.push_back(std::move(jf));
    }
    j["per_frame"] = std::move(frames);
    return j.dump(2) + "\n";
}

}  // namespace dlo
