#include "dlo/contour.hpp"

#include <numbers>
#include <stdexcept>

namespace dlo {

namespace {

// Clockwise direction ring: N, NE, E, SE, S, SW, W, NW.
constexpr int kDirDx[8] = {0, 1, 1, 1, 0, -1, -1, -1};
constexpr int kDirDy[8] = {-1, -1, 0, 1, 1, 1, 0, -1};
constexpr int kWest = 6;

struct TraceState {
    PixelCoord pixel;
    int backtrack_dir;  // direction from pixel to the background we came past

    bool operator==(const TraceState&) const = default;
};

// Scan clockwise around `from.pixel` starting just past the backtrack
// position; the first foreground pixel becomes the next state, with the last
// background position examined as its backtrack. Returns false for an
// isolated pixel.
bool next_border_state(const BinaryMask& mask, const TraceState& from, TraceState& out) {
    for (int k = 1; k <= 8; ++k) {
        int dir = (from.backtrack_dir + k) % 8;
        int nx = from.pixel.x + kDirDx[dir];
        int ny = from.pixel.y + kDirDy[dir];
        if (mask.get_clamped(nx, ny)) {
            int prev_dir = (from.backtrack_dir + k - 1) % 8;
            PixelCoord prev{from.pixel.x + kDirDx[prev_dir], from.pixel.y + kDirDy[prev_dir]};
            out.pixel = {nx, ny};
            // Express the backtrack relative to the new pixel.
            int bdx = prev.x - nx, bdy = prev.y - ny;
            for (int d = 0; d < 8; ++d)
                if (kDirDx[d] == bdx && kDirDy[d] == bdy) out.backtrack_dir = d;
            return true;
        }
    }
    return false;
}

PixelPath trace_component(const BinaryMask& mask, PixelCoord start) {
    PixelPath path;
    path.points.push_back(start);

    TraceState s0{start, kWest};
    TraceState first;
    if (!next_border_state(mask, s0, first)) return path;  // isolated pixel

    // Walk until the state after the start recurs, then trim the duplicate
    // return to the start pixel.
    TraceState cur = first;
    size_t cap = 4 * mask.foreground_count() + 8;
    for (size_t steps = 0; steps < cap; ++steps) {
        path.points.push_back(cur.pixel);
        TraceState nxt;
        next_border_state(mask, cur, nxt);
        if (nxt == first) break;
        cur = nxt;
    }
    if (path.points.size() > 1 && path.points.back() == start) path.points.pop_back();
    return path;
}

}  // namespace

std::vector<PixelPath> trace_borders(const BinaryMask& mask) {
    ComponentLabeling labeling = connected_components(mask);
    std::vector<PixelPath> out;
    out.reserve(labeling.count);

    // Raster scan meets each component first at its topmost-leftmost pixel,
    // and component ids are issued in that same order.
    int32_t seen = 0;
    for (int y = 0; y < mask.height && seen < labeling.count; ++y) {
        for (int x = 0; x < mask.width && seen < labeling.count; ++x) {
            int32_t l = labeling.label(x, y);
            if (l == seen + 1) {
                out.push_back(trace_component(mask, {x, y}));
                ++seen;
            }
        }
    }
    return out;
}

double path_arclength(const PixelPath& path, size_t i, size_t j) {
    if (i > j || j >= path.points.size())
        throw std::out_of_range("path_arclength: indices " + std::to_string(i) + ".." +
                                std::to_string(j) + " out of range for path of size " +
                                std::to_string(path.points.size()));
    double len = 0.0;
    for (size_t k = i; k < j; ++k) {
        const PixelCoord& a = path.points[k];
        const PixelCoord& b = path.points[k + 1];
        len += (a.x != b.x && a.y != b.y) ? std::numbers::sqrt2 : 1.0;
    }
    return len;
}

}  // namespace dlo
