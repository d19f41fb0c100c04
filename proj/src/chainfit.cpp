#include "dlo/chainfit.hpp"

#include <algorithm>
#include <stdexcept>

namespace dlo {

void Chain::reverse() {
    std::reverse(joints.begin(), joints.end());
    if (!closed) {
        std::reverse(filled_flags.begin(), filled_flags.end());
        return;
    }
    // Ring: reversed segment k < n-1 is the old segment n-2-k; the wrap
    // segment stays the wrap segment.
    size_t n = filled_flags.size();
    std::vector<bool> flags(n);
    for (size_t k = 0; k + 1 < n; ++k) flags[k] = filled_flags[n - 2 - k];
    flags[n - 1] = filled_flags[n - 1];
    filled_flags = std::move(flags);
}

std::vector<size_t> detect_tips(const PixelPath& path, int window) {
    const auto& pts = path.points;
    const size_t n = pts.size();
    std::vector<size_t> tips;
    tips.push_back(0);
    for (size_t i = 1; i + 1 < n; ++i) {
        size_t room = std::min(i, n - 1 - i);
        size_t m = std::min<size_t>(static_cast<size_t>(window), room);
        bool reversal = true;
        for (size_t k = 1; k <= m; ++k) {
            if (!(pts[i + k] == pts[i - k])) {
                reversal = false;
                break;
            }
        }
        if (reversal) tips.push_back(i);
    }
    if (n > 1) tips.push_back(n - 1);
    return tips;
}

namespace {

// Chord fit over path[i0..i1]: each segment ends at the first pixel at
// Euclidean distance >= segment_length from the current anchor.
Chain fit_piece(const PixelPath& path, size_t i0, size_t i1, double segment_length) {
    Chain chain;
    Vec2 anchor = path.points[i0].to_vec();
    chain.joints.push_back(anchor);
    for (size_t i = i0 + 1; i <= i1; ++i) {
        Vec2 p = path.points[i].to_vec();
        if ((p - anchor).norm() >= segment_length) {
            chain.joints.push_back(p);
            chain.filled_flags.push_back(false);
            anchor = p;
        }
    }
    return chain;
}

}  // namespace

std::vector<Chain> fit_chains(const PixelPath& path, const FitConfig& cfg) {
    const size_t n = path.points.size();
    std::vector<Chain> out;
    if (n == 0) return out;

    std::vector<size_t> tips = detect_tips(path, cfg.tip_window);

    // A trace with no interior reversal whose ends meet again is a closed
    // loop; out-and-back traces of open curves always reverse at the far tip.
    bool loop = n >= 8 && tips.size() == 2 &&
                pixels_adjacent8(path.points.front(), path.points.back());
    if (loop) {
        Chain chain = fit_piece(path, 0, n - 1, cfg.segment_length);
        if (!chain.filled_flags.empty()) {
            chain.closed = true;
            chain.filled_flags.push_back(false);  // wrap segment
            out.push_back(std::move(chain));
        }
        return out;
    }

    for (size_t t = 0; t + 1 < tips.size(); ++t) {
        Chain chain = fit_piece(path, tips[t], tips[t + 1], cfg.segment_length);
        if (!chain.filled_flags.empty()) out.push_back(std::move(chain));
    }
    return out;
}

namespace {

struct PruneEntry {
    int chain;
    int idx;
    Vec2 mid;
    Vec2 dir;
    bool alive = true;
};

// Maximal alive run of segment idx within its (possibly ring) chain.
struct Run {
    int start;
    int length;
};

class PruneState {
  public:
    explicit PruneState(const std::vector<Chain>& chains) : chains_(chains) {
        removed_.resize(chains.size());
    }

    Run run_of(int chain, int idx) const {
        const auto& rem = removed_[chain];
        int n = static_cast<int>(chains_[chain].segment_count());
        if (!chains_[chain].closed) {
            int lo = -1, hi = n;
            for (int r : rem) {
                if (r < idx) lo = std::max(lo, r);
                if (r > idx) hi = std::min(hi, r);
            }
            return {lo + 1, hi - lo - 1};
        }
        if (rem.empty()) return {0, n};
        // Ring: nearest removed indices on either side, circularly.
        int prev = -1, best_prev_gap = n + 1;
        int next = -1, best_next_gap = n + 1;
        for (int r : rem) {
            int gp = (idx - r + n) % n;  // steps back from idx to r
            int gn = (r - idx + n) % n;  // steps forward from idx to r
            if (gp < best_prev_gap) {
                best_prev_gap = gp;
                prev = r;
            }
            if (gn < best_next_gap) {
                best_next_gap = gn;
                next = r;
            }
        }
        int start = (prev + 1) % n;
        int len = (next - start + n) % n;
        return {start, len == 0 ? n : len};
    }

    void remove(int chain, int idx) { removed_[chain].push_back(idx); }

    const std::vector<int>& removed(int chain) const { return removed_[chain]; }

  private:
    const std::vector<Chain>& chains_;
    std::vector<std::vector<int>> removed_;
};

bool segments_conflict(const PruneEntry& a, const PruneEntry& b, const FitConfig& cfg) {
    if ((a.mid - b.mid).norm() >= cfg.overlap_dist) return false;
    double c = std::abs(dot(a.dir, b.dir));
    double acute = std::acos(std::clamp(c, 0.0, 1.0));
    return acute < cfg.overlap_angle;
}

}  // namespace

std::vector<Chain> prune_overlaps(const std::vector<Chain>& chains, const FitConfig& cfg) {
    std::vector<PruneEntry> entries;
    for (size_t c = 0; c < chains.size(); ++c) {
        for (size_t s = 0; s < chains[c].segment_count(); ++s) {
            Segment seg = chains[c].segment(s);
            entries.push_back({static_cast<int>(c), static_cast<int>(s), seg.midpoint(),
                               seg.direction(), true});
        }
    }

    PruneState state(chains);

    // The conflict predicate is intrinsic to the segment pair, so removals
    // never create new conflicts; one lexicographic sweep reaches the
    // fixpoint. Which side loses depends on the live run sizes at the moment
    // the pair is visited.
    for (size_t a = 0; a < entries.size(); ++a) {
        if (!entries[a].alive) continue;
        for (size_t b = a + 1; b < entries.size(); ++b) {
            if (!entries[b].alive) continue;
            if (!segments_conflict(entries[a], entries[b], cfg)) continue;

            Run ra = state.run_of(entries[a].chain, entries[a].idx);
            Run rb = state.run_of(entries[b].chain, entries[b].idx);
            bool a_loses;
            if (ra.length != rb.length) {
                a_loses = ra.length < rb.length;
            } else if (entries[a].chain != entries[b].chain || ra.start != rb.start) {
                // Tie: the later chain in list order loses; b is later.
                a_loses = false;
            } else {
                a_loses = false;  // same run: the later segment loses
            }

            size_t loser = a_loses ? a : b;
            entries[loser].alive = false;
            state.remove(entries[loser].chain, entries[loser].idx);
            if (a_loses) break;
        }
    }

    // Rebuild: per source chain, alive index runs become chains.
    std::vector<Chain> out;
    for (size_t c = 0; c < chains.size(); ++c) {
        const Chain& src = chains[c];
        int n = static_cast<int>(src.segment_count());
        if (n == 0) continue;
        std::vector<int> rem = state.removed(static_cast<int>(c));
        std::sort(rem.begin(), rem.end());

        if (rem.empty()) {
            out.push_back(src);
            continue;
        }
        if (static_cast<int>(rem.size()) == n) continue;

        std::vector<char> alive(n, 1);
        for (int r : rem) alive[r] = 0;

        auto emit_run = [&](int start, int len) {
            Chain piece;
            piece.joints.reserve(len + 1);
            for (int k = 0; k <= len; ++k) {
                int ji = src.closed ? (start + k) % static_cast<int>(src.joints.size())
                                    : start + k;
                piece.joints.push_back(src.joints[ji]);
            }
            for (int k = 0; k < len; ++k)
                piece.filled_flags.push_back(src.filled_flags[(start + k) % n]);
            out.push_back(std::move(piece));
        };

        if (!src.closed) {
            int start = 0;
            while (start < n) {
                if (!alive[start]) {
                    ++start;
                    continue;
                }
                int end = start;
                while (end + 1 < n && alive[end + 1]) ++end;
                emit_run(start, end - start + 1);
                start = end + 1;
            }
        } else {
            // Ring with removals opens into circular runs, listed by start.
            for (int start = 0; start < n; ++start) {
                if (!alive[start] || alive[(start - 1 + n) % n]) continue;
                int len = 1;
                while (alive[(start + len) % n]) ++len;
                emit_run(start, len);
            }
        }
    }
    return out;
}

EndPose chain_end_pose(const Chain& chain, ChainEnd end) {
    if (chain.segment_count() == 0 || chain.joints.size() < 2)
        throw std::invalid_argument("chain_end_pose: empty chain");
    if (end == ChainEnd::head)
        return {chain.joints.front(), (chain.joints[0] - chain.joints[1]).unit()};
    size_t n = chain.joints.size();
    return {chain.joints.back(), (chain.joints[n - 1] - chain.joints[n - 2]).unit()};
}

}  // namespace dlo
