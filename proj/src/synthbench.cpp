#include "dlo/synthbench.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <random>
#include <set>

namespace dlo {

namespace {

// mt19937_64 with explicit mappings; std distributions are not pinned by the
// standard, these are.
class Rng {
  public:
    explicit Rng(uint64_t seed) : eng_(seed) {}

    double uniform(double lo, double hi) {
        double u = (eng_() >> 11) * 0x1.0p-53;
        return lo + (hi - lo) * u;
    }

    int uniform_int(int lo, int hi) {  // inclusive
        uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(static_cast<uint64_t>(
                        (static_cast<unsigned __int128>(eng_()) * span) >> 64));
    }

  private:
    std::mt19937_64 eng_;
};

// --- centripetal Catmull-Rom -------------------------------------------------

Vec2 catmull_rom_point(const Vec2& p0, const Vec2& p1, const Vec2& p2, const Vec2& p3,
                       double t) {
    auto knot = [](double acc, const Vec2& a, const Vec2& b) {
        return acc + std::sqrt((b - a).norm());
    };
    double t0 = 0.0;
    double t1 = knot(t0, p0, p1);
    double t2 = knot(t1, p1, p2);
    double t3 = knot(t2, p2, p3);
    double u = t1 + t * (t2 - t1);

    auto lerp = [](const Vec2& a, const Vec2& b, double ta, double tb, double tu) {
        if (tb - ta < 1e-12) return a;
        double w = (tu - ta) / (tb - ta);
        return a * (1.0 - w) + b * w;
    };
    Vec2 a1 = lerp(p0, p1, t0, t1, u);
    Vec2 a2 = lerp(p1, p2, t1, t2, u);
    Vec2 a3 = lerp(p2, p3, t2, t3, u);
    Vec2 b1 = lerp(a1, a2, t0, t2, u);
    Vec2 b2 = lerp(a2, a3, t1, t3, u);
    return lerp(b1, b2, t1, t2, u);
}

// Dense spline through the waypoints, resampled to 1 px arclength spacing.
std::vector<Vec2> spline_through(const std::vector<Vec2>& waypoints) {
    std::vector<Vec2> ctrl;
    ctrl.push_back(waypoints.front() * 2.0 - waypoints[1]);
    ctrl.insert(ctrl.end(), waypoints.begin(), waypoints.end());
    ctrl.push_back(waypoints.back() * 2.0 - waypoints[waypoints.size() - 2]);

    std::vector<Vec2> raw;
    constexpr int kPerSpan = 64;
    for (size_t i = 0; i + 3 < ctrl.size(); ++i) {
        for (int k = 0; k < kPerSpan; ++k) {
            raw.push_back(catmull_rom_point(ctrl[i], ctrl[i + 1], ctrl[i + 2], ctrl[i + 3],
                                            k / static_cast<double>(kPerSpan)));
        }
    }
    raw.push_back(waypoints.back());

    std::vector<Vec2> out;
    out.push_back(raw.front());
    double carried = 0.0;
    for (size_t i = 1; i < raw.size(); ++i) {
        Vec2 prev = out.back();
        Vec2 next = raw[i];
        double step = (next - prev).norm();
        while (carried + step >= 1.0) {
            double need = 1.0 - carried;
            Vec2 dir = (next - prev) / step;
            Vec2 p = prev + dir * need;
            out.push_back(p);
            prev = p;
            step -= need;
            carried = 0.0;
        }
        carried += step;
    }
    if ((raw.back() - out.back()).norm() > 1e-9) out.push_back(raw.back());
    return out;
}

std::vector<double> cumulative_arclength(const std::vector<Vec2>& pts) {
    std::vector<double> cum(pts.size(), 0.0);
    for (size_t i = 1; i < pts.size(); ++i) cum[i] = cum[i - 1] + (pts[i] - pts[i - 1]).norm();
    return cum;
}

// Turn angle over +-step samples; zero near the ends.
double local_turn(const std::vector<Vec2>& pts, size_t i, size_t step) {
    if (i < step || i + step >= pts.size()) return 0.0;
    Vec2 v1 = pts[i] - pts[i - step];
    Vec2 v2 = pts[i + step] - pts[i];
    return std::abs(signed_angle(v1, v2));
}

struct CurveGeometry {
    std::vector<Vec2> points;
    std::vector<double> cum;
    double total = 0.0;
    std::vector<double> turn5;  // |turn| over 5 px chords, per sample
};

CurveGeometry finish_curve(std::vector<Vec2> pts) {
    CurveGeometry g;
    g.points = std::move(pts);
    g.cum = cumulative_arclength(g.points);
    g.total = g.cum.back();
    g.turn5.resize(g.points.size(), 0.0);
    for (size_t i = 0; i < g.points.size(); ++i) g.turn5[i] = local_turn(g.points, i, 5);
    return g;
}

bool within_bounds(const CurveGeometry& g, const SceneParams& p) {
    double margin = 2.0 * p.stroke_width;
    for (const Vec2& v : g.points) {
        if (v.x < margin || v.x > p.width - 1 - margin) return false;
        if (v.y < margin || v.y > p.height - 1 - margin) return false;
    }
    return true;
}

bool curvature_ok(const CurveGeometry& g, double min_radius) {
    double max_turn = 5.0 / min_radius + 1e-6;
    for (double t : g.turn5)
        if (t > max_turn) return false;
    return true;
}

std::optional<Vec2> segment_intersection(const Vec2& a, const Vec2& b, const Vec2& c,
                                         const Vec2& d, double& t_ab, double& t_cd) {
    Vec2 r = b - a, s = d - c;
    double denom = cross(r, s);
    if (std::abs(denom) < 1e-12) return std::nullopt;
    double t = cross(c - a, s) / denom;
    double u = cross(c - a, r) / denom;
    if (t < 0.0 || t > 1.0 || u < 0.0 || u > 1.0) return std::nullopt;
    t_ab = t;
    t_cd = u;
    return a + r * t;
}

struct CrossingInfo {
    Vec2 point;
    int curve_a = 0;
    double s_a = 0.0;
    int curve_b = 0;
    double s_b = 0.0;
    double angle = 0.0;
};

// All transversal intersections between samples of two curves (or within one
// curve when a and b alias, skipping arclength-near pairs).
std::vector<CrossingInfo> find_crossings(const CurveGeometry& ga, int ia, const CurveGeometry& gb,
                                         int ib, double min_separation) {
    std::vector<CrossingInfo> out;
    bool self = ia == ib;
    for (size_t i = 0; i + 1 < ga.points.size(); ++i) {
        for (size_t j = self ? i + 2 : 0; j + 1 < gb.points.size(); ++j) {
            if (self && std::abs(ga.cum[i] - gb.cum[j]) < min_separation) continue;
            // Samples are ~1 px apart; distant pairs cannot intersect.
            if (std::abs(ga.points[i].x - gb.points[j].x) > 3.0 ||
                std::abs(ga.points[i].y - gb.points[j].y) > 3.0)
                continue;
            double t, u;
            auto hit = segment_intersection(ga.points[i], ga.points[i + 1], gb.points[j],
                                            gb.points[j + 1], t, u);
            if (!hit) continue;
            CrossingInfo ci;
            ci.point = *hit;
            ci.curve_a = ia;
            ci.s_a = ga.cum[i] + t * (ga.cum[i + 1] - ga.cum[i]);
            ci.curve_b = ib;
            ci.s_b = gb.cum[j] + u * (gb.cum[j + 1] - gb.cum[j]);
            Vec2 d1 = ga.points[i + 1] - ga.points[i];
            Vec2 d2 = gb.points[j + 1] - gb.points[j];
            double ang = angle_between(d1, d2);
            ci.angle = std::min(ang, kPi - ang);
            out.push_back(ci);
        }
    }
    return out;
}

// Min distance between arclength-separated parts; used to keep non-crossing
// strokes from touching. Grid-free; test-scale curves are a few thousand
// samples.
double min_self_clearance(const CurveGeometry& g, double min_separation,
                          const std::vector<Vec2>& near_points, double near_radius) {
    double best = std::numeric_limits<double>::infinity();
    const size_t stride = 2;
    for (size_t i = 0; i < g.points.size(); i += stride) {
        for (size_t j = i; j < g.points.size(); j += stride) {
            if (g.cum[j] - g.cum[i] < min_separation) continue;
            double d = (g.points[i] - g.points[j]).norm();
            if (d >= best) continue;
            bool excused = false;
            for (const Vec2& c : near_points) {
                if ((g.points[i] - c).norm() < near_radius && (g.points[j] - c).norm() < near_radius) {
                    excused = true;
                    break;
                }
            }
            if (!excused) best = d;
        }
    }
    return best;
}

double min_pair_clearance(const CurveGeometry& ga, const CurveGeometry& gb,
                          const std::vector<Vec2>& near_points, double near_radius) {
    double best = std::numeric_limits<double>::infinity();
    const size_t stride = 2;
    for (size_t i = 0; i < ga.points.size(); i += stride) {
        for (size_t j = 0; j < gb.points.size(); j += stride) {
            double d = (ga.points[i] - gb.points[j]).norm();
            if (d >= best) continue;
            bool excused = false;
            for (const Vec2& c : near_points) {
                if ((ga.points[i] - c).norm() < near_radius && (gb.points[j] - c).norm() < near_radius) {
                    excused = true;
                    break;
                }
            }
            if (!excused) best = d;
        }
    }
    return best;
}

// --- waypoint templates ------------------------------------------------------

std::vector<Vec2> sweep_waypoints(Rng& rng, const SceneParams& p, double y_lo_frac,
                                  double y_hi_frac, bool vertical) {
    constexpr int kCount = 6;
    double main_len = vertical ? p.height : p.width;
    double side_len = vertical ? p.width : p.height;
    double margin = 0.06 * main_len;

    std::vector<Vec2> wp;
    double side = rng.uniform(y_lo_frac + 0.1, y_hi_frac - 0.1) * side_len;
    for (int i = 0; i < kCount; ++i) {
        double along = margin + (main_len - 2 * margin) * i / (kCount - 1.0) +
                       rng.uniform(-0.02, 0.02) * main_len;
        side = std::clamp(side + rng.uniform(-0.16, 0.16) * side_len, y_lo_frac * side_len,
                          y_hi_frac * side_len);
        wp.push_back(vertical ? Vec2{side, along} : Vec2{along, side});
    }
    return wp;
}

std::vector<Vec2> self_crossing_waypoints(Rng& rng, const SceneParams& p) {
    // A loop-the-loop: entry tail runs under the ring and attaches at its
    // lower right, the ring is traversed the long way round, and the exit
    // tail leaves through the bottom opening, crossing the entry tail once.
    double w = p.width, h = p.height;
    Vec2 center{(0.50 + rng.uniform(-0.02, 0.02)) * w, (0.40 + rng.uniform(-0.02, 0.03)) * h};
    double radius = (0.17 + rng.uniform(-0.012, 0.012)) * h;
    double y_off = rng.uniform(-0.03, 0.04) * h;
    double jf = 0.012;
    auto jitter = [&]() { return Vec2{rng.uniform(-jf, jf) * w, rng.uniform(-jf, jf) * h}; };

    std::vector<Vec2> wp;
    wp.push_back(Vec2{0.05 * w, 0.72 * h + y_off} + jitter());
    wp.push_back(Vec2{0.25 * w, 0.66 * h + y_off} + jitter());
    wp.push_back(Vec2{0.44 * w, 0.62 * h + y_off} + jitter());
    // Ring waypoints, 75 deg down to 135 deg the long way (through the top),
    // leaving the bottom 60 deg open for the tails.
    for (double deg : {75.0, 15.0, 315.0, 255.0, 195.0, 135.0}) {
        double t = deg * kPi / 180.0;
        wp.push_back(center + Vec2{radius * std::cos(t), radius * std::sin(t)} + jitter());
    }
    wp.push_back(Vec2{0.64 * w, 0.67 * h + y_off} + jitter());
    wp.push_back(Vec2{0.92 * w, 0.60 * h + y_off} + jitter());
    return wp;
}

// --- gap placement -----------------------------------------------------------

struct PlacedGap {
    int curve;
    double s0, s1;
};

bool place_gaps(Rng& rng, const SceneParams& p, const std::vector<CurveGeometry>& curves,
                const std::vector<CrossingInfo>& crossings, std::vector<PlacedGap>& out) {
    constexpr double kEndMargin = 40.0;
    constexpr double kGapClearance = 80.0;
    constexpr double kCrossingClearance = 50.0;
    constexpr double kGentleRadius = 180.0;
    const double gentle_turn = 5.0 / kGentleRadius + 1e-6;

    out.clear();
    for (int g = 0; g < p.gap_count; ++g) {
        int curve = g % p.dlo_count;
        const CurveGeometry& geom = curves[curve];
        bool placed = false;
        for (int attempt = 0; attempt < 400 && !placed; ++attempt) {
            double len = rng.uniform(p.gap_min, p.gap_max);
            if (geom.total < 2 * kEndMargin + len + 1) return false;
            double c = rng.uniform(kEndMargin + len / 2, geom.total - kEndMargin - len / 2);
            double s0 = c - len / 2, s1 = c + len / 2;

            bool ok = true;
            for (const PlacedGap& other : out) {
                if (other.curve != curve) continue;
                if (s0 < other.s1 + kGapClearance && other.s0 < s1 + kGapClearance) ok = false;
            }
            for (const CrossingInfo& ci : crossings) {
                if (ci.curve_a == curve &&
                    s0 < ci.s_a + kCrossingClearance && ci.s_a < s1 + kCrossingClearance)
                    ok = false;
                if (ci.curve_b == curve &&
                    s0 < ci.s_b + kCrossingClearance && ci.s_b < s1 + kCrossingClearance)
                    ok = false;
            }
            if (ok) {
                // Occlusions only on gently curved stretches, so the natural
                // curvature guess is meaningful.
                size_t i0 = static_cast<size_t>(std::max(0.0, s0 - 5.0));
                size_t i1 = std::min(geom.points.size() - 1, static_cast<size_t>(s1 + 5.0));
                for (size_t i = i0; i <= i1; ++i)
                    if (geom.turn5[i] > gentle_turn) {
                        ok = false;
                        break;
                    }
            }
            if (ok) {
                out.push_back({curve, s0, s1});
                placed = true;
            }
        }
        if (!placed) return false;
    }
    return true;
}

}  // namespace

std::pair<Image, SceneTruth> generate_scene(const SceneParams& params) {
    if (params.dlo_count < 1 || params.dlo_count > 2)
        throw GenerationError("generate_scene: dlo_count must be 1 or 2");
    if (params.gap_count < 0 || params.gap_count > 6)
        throw GenerationError("generate_scene: gap_count must be 0..6");
    if (params.gap_min > params.gap_max || params.gap_min <= params.stroke_width)
        throw GenerationError("generate_scene: bad gap length range");

    Rng rng(params.seed * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL);

    for (int attempt = 0; attempt < 60; ++attempt) {
        std::vector<CurveGeometry> curves;
        bool self_cross = params.crossing && params.dlo_count == 1;

        if (params.dlo_count == 1) {
            std::vector<Vec2> wp = self_cross ? self_crossing_waypoints(rng, params)
                                              : sweep_waypoints(rng, params, 0.12, 0.88, false);
            curves.push_back(finish_curve(spline_through(wp)));
        } else {
            curves.push_back(finish_curve(
                spline_through(sweep_waypoints(rng, params, 0.10, 0.45, false))));
            if (params.crossing)
                curves.push_back(finish_curve(
                    spline_through(sweep_waypoints(rng, params, 0.25, 0.75, true))));
            else
                curves.push_back(finish_curve(
                    spline_through(sweep_waypoints(rng, params, 0.55, 0.90, false))));
        }

        bool ok = true;
        double min_radius = self_cross ? 55.0 : 90.0;
        for (const CurveGeometry& g : curves)
            if (!within_bounds(g, params) || !curvature_ok(g, min_radius)) ok = false;
        if (!ok) continue;

        // Crossing bookkeeping and stroke clearance.
        std::vector<CrossingInfo> crossings;
        if (self_cross) {
            crossings = find_crossings(curves[0], 0, curves[0], 0, 30.0);
        } else if (params.dlo_count == 2) {
            auto self_a = find_crossings(curves[0], 0, curves[0], 0, 30.0);
            auto self_b = find_crossings(curves[1], 1, curves[1], 1, 30.0);
            if (!self_a.empty() || !self_b.empty()) continue;
            if (params.crossing) crossings = find_crossings(curves[0], 0, curves[1], 1, 0.0);
        }

        if (params.crossing) {
            if (crossings.size() != 1) continue;
            if (crossings[0].angle < kPi / 6.0) continue;
        } else if (!crossings.empty()) {
            continue;
        }

        std::vector<Vec2> cross_pts;
        for (const CrossingInfo& ci : crossings) cross_pts.push_back(ci.point);
        double clearance = 2.5 * params.stroke_width;
        double near_radius = 4.0 * params.stroke_width;
        for (size_t c = 0; c < curves.size() && ok; ++c)
            if (min_self_clearance(curves[c], 30.0, cross_pts, near_radius) < clearance) ok = false;
        if (params.dlo_count == 2 && ok)
            if (min_pair_clearance(curves[0], curves[1], cross_pts, near_radius) < clearance)
                ok = false;
        if (!ok) continue;

        std::vector<PlacedGap> gaps;
        if (!place_gaps(rng, params, curves, crossings, gaps)) continue;

        // Render: gap spans erased by splitting the stroke into visible runs.
        SceneTruth truth;
        truth.stroke_mask = BinaryMask(params.width, params.height);
        for (size_t c = 0; c < curves.size(); ++c) {
            const CurveGeometry& g = curves[c];
            truth.centerlines.push_back(g.points);
            truth.arclengths.push_back(g.total);

            std::vector<OcclusionSpan> spans;
            for (const PlacedGap& gap : gaps)
                if (gap.curve == static_cast<int>(c)) spans.push_back({gap.s0, gap.s1});
            std::sort(spans.begin(), spans.end(),
                      [](const OcclusionSpan& a, const OcclusionSpan& b) { return a.s0 < b.s0; });
            truth.occluded_spans.push_back(spans);

            auto hidden = [&](double s) {
                for (const OcclusionSpan& sp : spans)
                    if (s >= sp.s0 && s <= sp.s1) return true;
                return false;
            };
            std::vector<Vec2> run;
            for (size_t i = 0; i < g.points.size(); ++i) {
                if (!hidden(g.cum[i])) {
                    run.push_back(g.points[i]);
                } else if (!run.empty()) {
                    stamp_polyline(truth.stroke_mask, run, params.stroke_width);
                    run.clear();
                }
            }
            if (!run.empty()) stamp_polyline(truth.stroke_mask, run, params.stroke_width);
        }
        for (const CrossingInfo& ci : crossings) truth.crossings.push_back(ci.point);

        Image image(params.width, params.height, params.background_color);
        for (int y = 0; y < params.height; ++y)
            for (int x = 0; x < params.width; ++x)
                if (truth.stroke_mask.get(x, y)) image.set(x, y, params.dlo_color);

        return {std::move(image), std::move(truth)};
    }
    throw GenerationError("generate_scene: params unsatisfiable after 60 attempts (seed " +
                          std::to_string(params.seed) + ")");
}

// --- scoring -----------------------------------------------------------------

namespace {

struct Projection {
    int curve;
    double s;
    double dist;
};

class TruthIndex {
  public:
    explicit TruthIndex(const SceneTruth& truth) : truth_(truth) {
        for (const auto& pts : truth.centerlines) cums_.push_back(cumulative_arclength(pts));
    }

    Projection nearest(const Vec2& p) const {
        Projection best{0, 0.0, std::numeric_limits<double>::infinity()};
        for (size_t c = 0; c < truth_.centerlines.size(); ++c) {
            const auto& pts = truth_.centerlines[c];
            for (size_t i = 0; i < pts.size(); ++i) {
                double d = (pts[i] - p).norm();
                if (d < best.dist) best = {static_cast<int>(c), cums_[c][i], d};
            }
        }
        return best;
    }

    // All plausible projections: local minima clusters within snap_window of
    // the global minimum. Near a crossing both strands qualify.
    std::vector<Projection> candidates(const Vec2& p, double snap_window) const {
        double dmin = nearest(p).dist;
        std::vector<Projection> out;
        for (size_t c = 0; c < truth_.centerlines.size(); ++c) {
            const auto& pts = truth_.centerlines[c];
            const auto& cum = cums_[c];
            bool in_run = false;
            Projection run_best{static_cast<int>(c), 0.0,
                                std::numeric_limits<double>::infinity()};
            size_t last_in = 0;
            for (size_t i = 0; i <= pts.size(); ++i) {
                bool sel = i < pts.size() && (pts[i] - p).norm() <= dmin + snap_window;
                if (sel) {
                    double d = (pts[i] - p).norm();
                    if (!in_run) {
                        in_run = true;
                        run_best = {static_cast<int>(c), cum[i], d};
                    } else if (d < run_best.dist) {
                        run_best = {static_cast<int>(c), cum[i], d};
                    }
                    last_in = i;
                } else if (in_run && (i >= pts.size() || i - last_in > 8)) {
                    out.push_back(run_best);
                    in_run = false;
                }
            }
        }
        return out;
    }

    // Arclength of [lo, hi] on `curve` not covered by its occluded spans.
    double visible_inside(int curve, double lo, double hi) const {
        double len = hi - lo;
        for (const OcclusionSpan& sp : truth_.occluded_spans[curve]) {
            double o = std::min(hi, sp.s1) - std::max(lo, sp.s0);
            if (o > 0.0) len -= o;
        }
        return std::max(0.0, len);
    }

    const SceneTruth& truth_;
    std::vector<std::vector<double>> cums_;
};

}  // namespace

Metrics score_detection(const std::vector<Chain>& chains, const std::vector<MergeRecord>& records,
                        const SceneTruth& truth, const ScoreConfig& cfg) {
    Metrics m;
    TruthIndex index(truth);

    // Flatten detection segments once.
    std::vector<Segment> segments;
    for (const Chain& chain : chains)
        for (size_t i = 0; i < chain.segment_count(); ++i) segments.push_back(chain.segment(i));

    // Merges: correct when some projection pair lands on one curve with only
    // occluded (or slack-length) truth between the joined ends.
    m.merges_total = static_cast<int>(records.size());
    for (const MergeRecord& rec : records) {
        auto cand_a = index.candidates(rec.end_point_a, cfg.snap_window);
        auto cand_b = index.candidates(rec.end_point_b, cfg.snap_window);
        MergeOutcome outcome;
        outcome.bridged_visible = std::numeric_limits<double>::infinity();
        for (const Projection& a : cand_a) {
            for (const Projection& b : cand_b) {
                if (a.curve != b.curve) continue;
                outcome.same_curve = true;
                double vis = index.visible_inside(a.curve, std::min(a.s, b.s), std::max(a.s, b.s));
                outcome.bridged_visible = std::min(outcome.bridged_visible, vis);
            }
        }
        outcome.correct = outcome.same_curve && outcome.bridged_visible <= cfg.merge_visible_slack;
        if (outcome.correct) ++m.merges_correct;
        m.merge_details.push_back(outcome);
    }

    // Occlusions: joints of filled segments, attributed to spans by their
    // global nearest projection.
    struct SpanStat {
        int count = 0;
        double worst = 0.0;
    };
    std::vector<std::vector<SpanStat>> span_stats;
    for (const auto& spans : truth.occluded_spans) span_stats.emplace_back(spans.size());

    for (const Chain& chain : chains) {
        std::vector<char> is_filled_joint(chain.joints.size(), 0);
        for (size_t i = 0; i < chain.segment_count(); ++i) {
            if (!chain.filled_flags[i]) continue;
            is_filled_joint[i] = 1;
            is_filled_joint[(i + 1) % chain.joints.size()] = 1;
        }
        for (size_t j = 0; j < chain.joints.size(); ++j) {
            if (!is_filled_joint[j]) continue;
            Projection pr = index.nearest(chain.joints[j]);
            const auto& spans = truth.occluded_spans[pr.curve];
            for (size_t k = 0; k < spans.size(); ++k) {
                if (pr.s >= spans[k].s0 - cfg.occlusion_reach &&
                    pr.s <= spans[k].s1 + cfg.occlusion_reach) {
                    span_stats[pr.curve][k].count += 1;
                    span_stats[pr.curve][k].worst = std::max(span_stats[pr.curve][k].worst, pr.dist);
                }
            }
        }
    }
    for (size_t c = 0; c < truth.occluded_spans.size(); ++c) {
        for (size_t k = 0; k < truth.occluded_spans[c].size(); ++k) {
            OcclusionOutcome oc;
            oc.curve = static_cast<int>(c);
            oc.s0 = truth.occluded_spans[c][k].s0;
            oc.s1 = truth.occluded_spans[c][k].s1;
            oc.filled_joints = span_stats[c][k].count;
            oc.correct = span_stats[c][k].count >= 1 && span_stats[c][k].worst <= cfg.tol;
            if (oc.correct) ++m.occlusions_correct;
            ++m.occlusions_total;
            m.occlusion_details.push_back(oc);
        }
    }

    // Frame: coverage of every centerline sample away from the open ends, and
    // no joint straying.
    bool covered = true;
    for (size_t c = 0; c < truth.centerlines.size(); ++c) {
        const auto& pts = truth.centerlines[c];
        const auto& cum = index.cums_[c];
        double total = truth.arclengths[c];
        for (size_t i = 0; i < pts.size(); ++i) {
            if (cum[i] < cfg.end_exclusion || cum[i] > total - cfg.end_exclusion) continue;
            double d = std::numeric_limits<double>::infinity();
            for (const Segment& s : segments)
                d = std::min(d, point_segment_distance(pts[i], s.a, s.b));
            m.max_coverage_gap = std::max(m.max_coverage_gap, d);
            if (d > cfg.tol) covered = false;
        }
    }
    bool joints_ok = true;
    for (const Chain& chain : chains) {
        for (const Vec2& j : chain.joints) {
            double d = index.nearest(j).dist;
            m.max_joint_deviation = std::max(m.max_joint_deviation, d);
            if (!(d < cfg.frame_joint_factor * cfg.tol)) joints_ok = false;
        }
    }
    m.frame_correct = covered && joints_ok && !segments.empty();
    return m;
}

BenchmarkReport run_benchmark(const std::vector<SceneParams>& scenes,
                              const PipelineConfig& config, const ScoreConfig& score_cfg) {
    using Clock = std::chrono::steady_clock;
    BenchmarkReport report;
    report.thresholds = score_cfg;
    report.frames_total = static_cast<int>(scenes.size());

    std::vector<double> times;
    StageTimings stage_sum;
    int timed = 0;

    for (const SceneParams& params : scenes) {
        FrameReport frame;
        frame.seed = params.seed;
        try {
            auto [image, truth] = generate_scene(params);
            auto t0 = Clock::now();
            DetectionResult det = detect(image, config);
            double wall = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
            frame.metrics = score_detection(det.chains, det.records, truth, score_cfg);
            frame.metrics.time_ms = wall;
            frame.timings = det.timings;

            times.push_back(wall);
            stage_sum.segment_ms += det.timings.segment_ms;
            stage_sum.components_ms += det.timings.components_ms;
            stage_sum.thin_ms += det.timings.thin_ms;
            stage_sum.trace_ms += det.timings.trace_ms;
            stage_sum.fit_ms += det.timings.fit_ms;
            stage_sum.prune_ms += det.timings.prune_ms;
            stage_sum.merge_ms += det.timings.merge_ms;
            stage_sum.total_ms += det.timings.total_ms;
            ++timed;

            if (frame.metrics.frame_correct) ++report.frames_correct;
            report.occlusions_total += frame.metrics.occlusions_total;
            report.occlusions_correct += frame.metrics.occlusions_correct;
            report.merges_total += frame.metrics.merges_total;
            report.merges_correct += frame.metrics.merges_correct;
        } catch (const std::exception& e) {
            frame.failed = true;
            frame.error = e.what();
        }
        report.frames.push_back(std::move(frame));
    }

    report.frame_accuracy =
        report.frames_total > 0 ? static_cast<double>(report.frames_correct) / report.frames_total
                                : 1.0;
    report.occlusion_accuracy = report.occlusions_total > 0
                                    ? static_cast<double>(report.occlusions_correct) /
                                          report.occlusions_total
                                    : 1.0;
    report.merge_accuracy =
        report.merges_total > 0
            ? static_cast<double>(report.merges_correct) / report.merges_total
            : 1.0;

    if (!times.empty()) {
        double sum = 0.0;
        for (double t : times) sum += t;
        report.mean_ms = sum / times.size();
        std::vector<double> sorted = times;
        std::sort(sorted.begin(), sorted.end());
        size_t n = sorted.size();
        report.median_ms = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
        double var = 0.0;
        for (double t : times) var += (t - report.mean_ms) * (t - report.mean_ms);
        report.stddev_ms = std::sqrt(var / n);

        double inv = 1.0 / timed;
        report.mean_stage_ms.segment_ms = stage_sum.segment_ms * inv;
        report.mean_stage_ms.components_ms = stage_sum.components_ms * inv;
        report.mean_stage_ms.thin_ms = stage_sum.thin_ms * inv;
        report.mean_stage_ms.trace_ms = stage_sum.trace_ms * inv;
        report.mean_stage_ms.fit_ms = stage_sum.fit_ms * inv;
        report.mean_stage_ms.prune_ms = stage_sum.prune_ms * inv;
        report.mean_stage_ms.merge_ms = stage_sum.merge_ms * inv;
        report.mean_stage_ms.total_ms = stage_sum.total_ms * inv;
    }
    return report;
}

}  // namespace dlo
