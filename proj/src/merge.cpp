#include "dlo/merge.hpp"

#include <cmath>

namespace dlo {

double euclidean_cost(const EndPose& a, const EndPose& b) {
    return (a.point - b.point).norm();
}

double direction_cost(const EndPose& a, const EndPose& b) {
    return angle_between(a.direction, -b.direction);
}

double curvature_cost(const EndPose& a, const EndPose& b) {
    Vec2 chord = b.point - a.point;
    if (chord.norm() < 1e-12) return 0.0;
    double alpha = signed_angle(a.direction, chord);
    double beta = signed_angle(chord, -b.direction);
    return std::abs(alpha) + std::abs(beta);
}

MergeCost connection_cost(const Chain& chain_a, ChainEnd end_a, const Chain& chain_b,
                          ChainEnd end_b, const MergeConfig& cfg) {
    EndPose pa = chain_end_pose(chain_a, end_a);
    EndPose pb = chain_end_pose(chain_b, end_b);
    MergeCost c;
    c.euclidean = euclidean_cost(pa, pb);
    c.direction = direction_cost(pa, pb);
    c.curvature = curvature_cost(pa, pb);
    c.total = cfg.w_e * c.euclidean + cfg.w_d * c.direction + cfg.w_c * c.curvature;
    return c;
}

std::optional<MergeCandidate> best_merge(const std::vector<Chain>& chains,
                                         const MergeConfig& cfg) {
    constexpr ChainEnd kEnds[2] = {ChainEnd::head, ChainEnd::tail};
    std::optional<MergeCandidate> best;
    for (size_t i = 0; i < chains.size(); ++i) {
        if (chains[i].closed || chains[i].segment_count() == 0) continue;
        for (size_t j = i + 1; j < chains.size(); ++j) {
            if (chains[j].closed || chains[j].segment_count() == 0) continue;
            for (ChainEnd ea : kEnds) {
                for (ChainEnd eb : kEnds) {
                    MergeCost c = connection_cost(chains[i], ea, chains[j], eb, cfg);
                    if (c.total > cfg.max_merge_cost) continue;
                    // Strict less keeps the first candidate in
                    // (i, j, head<tail) order on ties.
                    if (!best || c.total < best->cost.total)
                        best = MergeCandidate{static_cast<int>(i), ea, static_cast<int>(j), eb, c};
                }
            }
        }
    }
    return best;
}

namespace {

// Builds the fill polyline from relative headings (radians, relative to the
// start direction). Every chord is exactly segment_length long.
std::vector<Segment> build_fill(const EndPose& start, double segment_length,
                                const std::vector<double>& headings) {
    std::vector<Segment> out;
    out.reserve(headings.size());
    Vec2 p = start.point;
    for (double psi : headings) {
        Vec2 dir = rotate(start.direction, psi);
        Vec2 q = p + dir * segment_length;
        out.push_back({p, q, true});
        p = q;
    }
    return out;
}

// Headings of m1 straights, j arc chords with constant per-joint turn tau
// (half-turn lead-in and lead-out keep the chord polygon inscribed in the
// turning circle), then m2 straights at the final heading.
std::vector<double> sas_headings(int m1, int j, double tau, int m2) {
    std::vector<double> h;
    h.reserve(m1 + j + m2);
    for (int k = 0; k < m1; ++k) h.push_back(0.0);
    for (int k = 0; k < j; ++k) h.push_back((k + 0.5) * tau);
    double final_heading = j * tau;
    for (int k = 0; k < m2; ++k) h.push_back(final_heading);
    return h;
}

// Sum of j unit chords at headings (k+1/2)*tau, as a complex rotation series.
Vec2 arc_chord_sum(int j, double tau) {
    double half = 0.5 * tau;
    if (std::abs(std::sin(half)) < 1e-12) return {static_cast<double>(j), 0.0};
    double mag = std::sin(j * half) / std::sin(half);
    return {mag * std::cos(j * half), mag * std::sin(j * half)};
}

struct GapFrame {
    double dx, dy;   // target point in the start frame
    double phi;      // heading change from start direction to target direction
    double dist;
};

// Solve straight-arc-straight counts against the discrete arc displacement.
// Returns headings, or nullopt when the straight runs would be negative or
// the landing misses by more than one segment.
std::optional<std::vector<double>> solve_sas(const GapFrame& f, double delta, int j,
                                             double segment_length) {
    double tau = delta / j;
    Vec2 arc = arc_chord_sum(j, tau);
    double sin_phi = std::sin(delta);
    double cos_phi = std::cos(delta);
    if (std::abs(sin_phi) < 1e-6) return std::nullopt;

    double tx = f.dx / segment_length;
    double ty = f.dy / segment_length;
    double m2 = (ty - arc.y) / sin_phi;
    double m1 = tx - arc.x - m2 * cos_phi;
    if (m1 < -0.5 + 1e-9 || m2 < -0.5 + 1e-9) return std::nullopt;

    int m1r = std::max(0, static_cast<int>(std::lround(m1)));
    int m2r = std::max(0, static_cast<int>(std::lround(m2)));
    std::vector<double> h = sas_headings(m1r, j, tau, m2r);

    // Residual check against the discrete landing point.
    double ex = m1r + arc.x + m2r * cos_phi;
    double ey = arc.y + m2r * sin_phi;
    double residual = std::hypot(ex - tx, ey - ty) * segment_length;
    if (residual > segment_length + 1e-9) return std::nullopt;
    return h;
}

std::vector<double> steer_headings(const GapFrame& f, double segment_length, double kappa_max,
                                   bool& feasible) {
    // Bounded-turn pursuit toward the target point, blending to the target
    // heading on approach. Best effort; feasibility judged afterwards.
    double heading = 0.0;
    Vec2 pos{0.0, 0.0};
    Vec2 target{f.dx, f.dy};
    Vec2 goal_dir{std::cos(f.phi), std::sin(f.phi)};
    std::vector<double> h;
    int cap = 3 * static_cast<int>(std::ceil(f.dist / segment_length)) +
              3 * static_cast<int>(std::ceil(2.0 * kPi / kappa_max)) + 8;
    for (int step = 0; step < cap; ++step) {
        Vec2 to_target = target - pos;
        double dist = to_target.norm();
        if (dist <= segment_length) break;
        Vec2 desired = to_target.unit();
        if (dist <= 3.0 * segment_length) {
            double w = 1.0 - dist / (3.0 * segment_length);
            desired = (desired * (1.0 - w) + goal_dir * w).unit();
            if (desired.norm() == 0.0) desired = to_target.unit();
        }
        Vec2 dir{std::cos(heading), std::sin(heading)};
        double turn = std::clamp(signed_angle(dir, desired), -kappa_max, kappa_max);
        heading += turn;
        pos += Vec2{std::cos(heading), std::sin(heading)} * segment_length;
        h.push_back(heading);
    }
    double residual = (target - pos).norm();
    double end_err = h.empty() ? std::abs(f.phi)
                               : std::abs(signed_angle(Vec2{std::cos(h.back()), std::sin(h.back())},
                                                       goal_dir));
    feasible = residual <= segment_length + 1e-9 && end_err <= kappa_max + 1e-9;
    return h;
}

}  // namespace

FillResult fill_gap(const EndPose& a, const EndPose& b, double segment_length,
                    double kappa_max) {
    FillResult result;
    Vec2 delta = b.point - a.point;
    double dist = delta.norm();
    if (dist < 0.5 * segment_length) return result;  // joined directly, no fill

    Vec2 u = a.direction.unit();
    Vec2 g = (-b.direction).unit();
    GapFrame f;
    f.dx = dot(u, delta);
    f.dy = cross(u, delta);
    f.phi = signed_angle(u, g);
    f.dist = dist;

    // Near-collinear: straight segments along the chord.
    double eps_align = std::min(0.05, kappa_max);
    Vec2 chord_dir = delta / dist;
    double alpha = signed_angle(u, chord_dir);
    double beta = signed_angle(chord_dir, g);
    if (std::abs(alpha) <= eps_align && std::abs(beta) <= eps_align) {
        int n = std::max(1, static_cast<int>(std::lround(dist / segment_length)));
        std::vector<double> h(n, alpha);
        result.segments = build_fill(a, segment_length, h);
        return result;
    }

    // Straight run then a single tangent arc, when the geometry admits one.
    if (std::abs(f.phi) > 1e-6 && f.dy * f.phi > 0.0) {
        double radius = f.dy / (1.0 - std::cos(f.phi));
        double arc_len = std::abs(radius * f.phi);
        int j = std::max({1, static_cast<int>(std::lround(arc_len / segment_length)),
                          static_cast<int>(std::ceil(std::abs(f.phi) / kappa_max - 1e-9))});
        if (auto h = solve_sas(f, f.phi, j, segment_length)) {
            result.segments = build_fill(a, segment_length, *h);
            return result;
        }
    }

    // Straight-arc-straight with the arc turning at (near) kappa_max.
    if (std::abs(f.phi) > 1e-6) {
        int j = std::max(1, static_cast<int>(std::ceil(std::abs(f.phi) / kappa_max - 1e-9)));
        if (auto h = solve_sas(f, f.phi, j, segment_length)) {
            result.segments = build_fill(a, segment_length, *h);
            return result;
        }
    }

    // S-shaped and other out-of-scenario gaps: bounded-turn pursuit.
    bool feasible = false;
    std::vector<double> h = steer_headings(f, segment_length, kappa_max, feasible);
    result.segments = build_fill(a, segment_length, h);
    result.feasible = feasible;
    return result;
}

Chain merge_pair(const Chain& chain_a, ChainEnd end_a, const Chain& chain_b, ChainEnd end_b,
                 const std::vector<Segment>& fill) {
    Chain a = chain_a;
    if (end_a == ChainEnd::head) a.reverse();
    Chain b = chain_b;
    if (end_b == ChainEnd::tail) b.reverse();

    Chain out;
    if (fill.empty()) {
        Vec2 shared = (a.joints.back() + b.joints.front()) * 0.5;
        out.joints.assign(a.joints.begin(), a.joints.end() - 1);
        out.joints.push_back(shared);
        out.joints.insert(out.joints.end(), b.joints.begin() + 1, b.joints.end());
    } else {
        out.joints = a.joints;
        for (size_t k = 0; k + 1 < fill.size(); ++k) out.joints.push_back(fill[k].b);
        out.joints.insert(out.joints.end(), b.joints.begin(), b.joints.end());
    }
    out.filled_flags = a.filled_flags;
    out.filled_flags.insert(out.filled_flags.end(), fill.size(), true);
    out.filled_flags.insert(out.filled_flags.end(), b.filled_flags.begin(),
                            b.filled_flags.end());
    return out;
}

std::pair<std::vector<Chain>, std::vector<MergeRecord>> merge_all(
    const std::vector<Chain>& chains, const MergeConfig& cfg) {
    std::vector<Chain> work = chains;
    std::vector<MergeRecord> records;

    while (true) {
        std::optional<MergeCandidate> cand = best_merge(work, cfg);
        if (!cand) break;

        EndPose pa = chain_end_pose(work[cand->chain_a], cand->end_a);
        EndPose pb = chain_end_pose(work[cand->chain_b], cand->end_b);
        FillResult fill = fill_gap(pa, pb, cfg.segment_length, cfg.kappa_max);

        MergeRecord rec;
        rec.chain_a = cand->chain_a;
        rec.end_a = cand->end_a;
        rec.chain_b = cand->chain_b;
        rec.end_b = cand->end_b;
        rec.cost = cand->cost;
        rec.filled_segments = static_cast<int>(fill.segments.size());
        rec.end_point_a = pa.point;
        rec.end_point_b = pb.point;
        rec.fill_feasible = fill.feasible;
        records.push_back(rec);

        Chain merged = merge_pair(work[cand->chain_a], cand->end_a, work[cand->chain_b],
                                  cand->end_b, fill.segments);
        work[cand->chain_a] = std::move(merged);
        work.erase(work.begin() + cand->chain_b);
    }
    return {std::move(work), std::move(records)};
}

}  // namespace dlo
