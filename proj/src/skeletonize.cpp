#include "dlo/skeletonize.hpp"

namespace dlo {

namespace {

// Neighbor order around p: N, NE, E, SE, S, SW, W, NW.
constexpr int kNbrDx[8] = {0, 1, 1, 1, 0, -1, -1, -1};
constexpr int kNbrDy[8] = {-1, -1, 0, 1, 1, 1, 0, -1};

// One parallel subiteration over the working window; collects deletions
// against a snapshot, then applies them. Returns the number removed.
size_t thin_subiteration(BinaryMask& m, int phase, int x0, int y0, int x1, int y1,
                         std::vector<size_t>& to_delete) {
    to_delete.clear();
    const int w = m.width;
    for (int y = y0; y <= y1; ++y) {
        for (int x = x0; x <= x1; ++x) {
            size_t idx = static_cast<size_t>(y) * w + x;
            if (!m.bits[idx]) continue;

            uint8_t nb[8];
            int count = 0;
            for (int k = 0; k < 8; ++k) {
                nb[k] = m.get_clamped(x + kNbrDx[k], y + kNbrDy[k]) ? 1 : 0;
                count += nb[k];
            }
            if (count < 2 || count > 6) continue;

            int transitions = 0;
            for (int k = 0; k < 8; ++k)
                if (!nb[k] && nb[(k + 1) % 8]) ++transitions;
            if (transitions != 1) continue;

            // nb[0]=N nb[2]=E nb[4]=S nb[6]=W
            if (phase == 0) {
                if (nb[0] && nb[2] && nb[4]) continue;
                if (nb[2] && nb[4] && nb[6]) continue;
            } else {
                if (nb[0] && nb[2] && nb[6]) continue;
                if (nb[0] && nb[4] && nb[6]) continue;
            }
            to_delete.push_back(idx);
        }
    }
    for (size_t idx : to_delete) m.bits[idx] = 0;
    return to_delete.size();
}

}  // namespace

BinaryMask thin(const BinaryMask& mask) {
    BinaryMask out = mask;

    // Work inside the foreground bounding box only; everything outside is
    // already stable.
    int x0 = out.width, y0 = out.height, x1 = -1, y1 = -1;
    for (int y = 0; y < out.height; ++y)
        for (int x = 0; x < out.width; ++x)
            if (out.get(x, y)) {
                x0 = std::min(x0, x);
                y0 = std::min(y0, y);
                x1 = std::max(x1, x);
                y1 = std::max(y1, y);
            }
    if (x1 < 0) return out;

    std::vector<size_t> scratch;
    while (true) {
        size_t removed = thin_subiteration(out, 0, x0, y0, x1, y1, scratch);
        removed += thin_subiteration(out, 1, x0, y0, x1, y1, scratch);
        if (removed == 0) break;
    }
    return out;
}

std::vector<Skeleton> skeleton_components(const BinaryMask& mask) {
    ComponentLabeling source = connected_components(mask);
    BinaryMask thinned = thin(mask);
    ComponentLabeling parts = connected_components(thinned);

    std::vector<Skeleton> out(parts.count);
    for (int i = 0; i < parts.count; ++i) {
        out[i].mask = BinaryMask(mask.width, mask.height);
        out[i].source_component = 0;
    }
    for (int y = 0; y < mask.height; ++y) {
        for (int x = 0; x < mask.width; ++x) {
            int32_t l = parts.label(x, y);
            if (l == 0) continue;
            Skeleton& sk = out[l - 1];
            sk.mask.set(x, y, true);
            // Thinned foreground is a subset of the input, so the source
            // label is defined at every skeleton pixel.
            if (sk.source_component == 0) sk.source_component = source.label(x, y);
        }
    }
    return out;
}

}  // namespace dlo
