#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "dlo/chainfit.hpp"
#include "dlo/skeletonize.hpp"
#include "oracles.hpp"

using namespace dlo;

namespace {

PixelPath straight_path(int n) {
    PixelPath p;
    for (int x = 0; x < n; ++x) p.points.push_back({x, 0});
    return p;
}

std::vector<Chain> fit_traced(const BinaryMask& mask, const FitConfig& cfg) {
    std::vector<Chain> chains;
    for (const PixelPath& path : trace_borders(mask)) {
        auto fitted = fit_chains(path, cfg);
        chains.insert(chains.end(), fitted.begin(), fitted.end());
    }
    return chains;
}

size_t total_segments(const std::vector<Chain>& chains) {
    size_t n = 0;
    for (const Chain& c : chains) n += c.segment_count();
    return n;
}

}  // namespace

TEST_CASE("detect_tips on the out-and-back line trace") {
    BinaryMask m(9, 5);
    for (int x = 1; x <= 5; ++x) m.set(x, 2, true);
    auto paths = trace_borders(m);
    REQUIRE(paths.size() == 1);
    REQUIRE(paths[0].points.size() == 8);
    CHECK(detect_tips(paths[0], 3) == std::vector<size_t>{0, 4, 7});
}

TEST_CASE("detect_tips finds one tip per branch end of a Y skeleton") {
    BinaryMask m = oracle::y_mask(5);
    auto paths = trace_borders(m);
    REQUIRE(paths.size() == 1);
    const PixelPath& path = paths[0];

    auto tips = detect_tips(path, 3);
    REQUIRE(tips.size() == 4);  // start, two reversals, end of trace
    CHECK(tips.front() == 0);
    CHECK(tips.back() == path.points.size() - 1);

    std::set<PixelCoord> tip_pixels = {path.points[tips[0]], path.points[tips[1]],
                                       path.points[tips[2]]};
    std::set<PixelCoord> arm_ends = {{6, 1}, {1, 11}, {11, 11}};
    CHECK(tip_pixels == arm_ends);
    // The trace returns next to where it started.
    CHECK(pixels_adjacent8(path.points.front(), path.points.back()));
}

TEST_CASE("detect_tips on a closed loop finds no interior reversal") {
    BinaryMask ring = thin(oracle::annulus_mask(32, 32, 16, 16, 6, 11));
    auto paths = trace_borders(ring);
    REQUIRE(paths.size() == 1);
    auto tips = detect_tips(paths[0], 3);
    CHECK(tips == std::vector<size_t>{0, paths[0].points.size() - 1});
}

TEST_CASE("fit_chains chord-steps a straight path") {
    FitConfig cfg;
    cfg.segment_length = 20.0;
    auto chains = fit_chains(straight_path(101), cfg);
    REQUIRE(chains.size() == 1);
    const Chain& c = chains[0];
    REQUIRE(c.joints.size() == 6);
    for (int i = 0; i < 6; ++i) {
        CHECK(c.joints[i].x == doctest::Approx(20.0 * i));
        CHECK(c.joints[i].y == doctest::Approx(0.0));
    }
    CHECK_FALSE(c.closed);
}

TEST_CASE("fit_chains drops paths shorter than one segment") {
    FitConfig cfg;
    cfg.segment_length = 20.0;
    CHECK(fit_chains(straight_path(10), cfg).empty());
}

TEST_CASE("out-and-back trace fits two chains, pruning keeps one") {
    BinaryMask m(111, 5);
    for (int x = 2; x <= 102; ++x) m.set(x, 2, true);

    FitConfig cfg;
    cfg.segment_length = 20.0;
    cfg.overlap_dist = 10.0;
    auto chains = fit_traced(m, cfg);
    REQUIRE(chains.size() == 2);

    auto pruned = prune_overlaps(chains, cfg);
    REQUIRE(pruned.size() == 1);
    CHECK(pruned[0].segment_count() == 5);
    CHECK(oracle::prune_postcondition_holds(pruned, cfg));
}

TEST_CASE("a closed loop fits a single chain marked closed") {
    BinaryMask ring = thin(oracle::annulus_mask(48, 48, 24, 24, 10, 17));
    FitConfig cfg;
    cfg.segment_length = 8.0;
    auto chains = fit_traced(ring, cfg);
    REQUIRE(chains.size() == 1);
    CHECK(chains[0].closed);
    CHECK(chains[0].segment_count() == chains[0].joints.size());
}

TEST_CASE("fitted segment lengths live in the quantization band") {
    FitConfig cfg;
    cfg.segment_length = 10.0;
    const double hi = cfg.segment_length + std::sqrt(2.0);
    for (uint64_t seed = 700; seed < 730; ++seed) {
        BinaryMask m = thin(oracle::blob_mask(seed, 64, 64));
        for (const PixelPath& path : trace_borders(m)) {
            double arclen = path_arclength(path, 0, path.points.size() - 1);
            auto chains = fit_chains(path, cfg);
            CAPTURE(seed);
            double consumed = 0.0;
            for (const Chain& c : chains) {
                size_t fitted = c.closed ? c.segment_count() - 1 : c.segment_count();
                for (size_t i = 0; i < fitted; ++i) {
                    double len = c.segment(i).length();
                    CHECK(len >= cfg.segment_length);
                    CHECK(len < hi);
                }
                consumed += fitted * cfg.segment_length;
            }
            CHECK(consumed <= arclen + 1e-9);
        }
    }
}

TEST_CASE("chains never span a tip index") {
    for (uint64_t seed = 740; seed < 760; ++seed) {
        BinaryMask m = thin(oracle::blob_mask(seed, 64, 64));
        FitConfig cfg;
        cfg.segment_length = 6.0;
        for (const PixelPath& path : trace_borders(m)) {
            auto tips = detect_tips(path, cfg.tip_window);
            CHECK(std::is_sorted(tips.begin(), tips.end()));
            for (size_t i = 0; i + 1 < tips.size(); ++i) CHECK(tips[i] < tips[i + 1]);

            auto chains = fit_chains(path, cfg);
            if (chains.size() == 1 && chains[0].closed) continue;
            for (const Chain& c : chains) {
                // Each chain's joints must sit inside one inter-tip window.
                bool found = false;
                for (size_t k = 0; k + 1 < tips.size() && !found; ++k) {
                    if (!(c.joints.front() ==
                          Vec2{static_cast<double>(path.points[tips[k]].x),
                               static_cast<double>(path.points[tips[k]].y)}))
                        continue;
                    std::set<PixelCoord> window;
                    for (size_t i = tips[k]; i <= tips[k + 1]; ++i) window.insert(path.points[i]);
                    bool all_in = true;
                    for (const Vec2& j : c.joints) {
                        PixelCoord p{static_cast<int>(std::lround(j.x)),
                                     static_cast<int>(std::lround(j.y))};
                        if (!window.count(p)) all_in = false;
                    }
                    found = all_in;
                }
                CHECK(found);
            }
        }
    }
}

TEST_CASE("prune_overlaps keeps one of two identical chains") {
    Chain c;
    for (int i = 0; i <= 4; ++i) c.joints.push_back({i * 10.0, 0.0});
    c.filled_flags.assign(4, false);

    FitConfig cfg;
    cfg.segment_length = 10.0;
    cfg.overlap_dist = 5.0;
    auto pruned = prune_overlaps({c, c}, cfg);
    REQUIRE(pruned.size() == 1);
    CHECK(pruned[0] == c);
}

TEST_CASE("prune_overlaps leaves distant chains alone") {
    Chain a, b;
    for (int i = 0; i <= 3; ++i) a.joints.push_back({i * 10.0, 0.0});
    for (int i = 0; i <= 3; ++i) b.joints.push_back({i * 10.0, 50.0});
    a.filled_flags.assign(3, false);
    b.filled_flags.assign(3, false);

    FitConfig cfg;
    cfg.segment_length = 10.0;
    cfg.overlap_dist = 5.0;
    auto pruned = prune_overlaps({a, b}, cfg);
    REQUIRE(pruned.size() == 2);
    CHECK(pruned[0] == a);
    CHECK(pruned[1] == b);
}

TEST_CASE("prune_overlaps is idempotent and never grows") {
    FitConfig cfg;
    cfg.segment_length = 8.0;
    cfg.overlap_dist = 4.0;
    for (uint64_t seed = 800; seed < 830; ++seed) {
        BinaryMask m = thin(oracle::blob_mask(seed, 64, 64));
        auto chains = fit_traced(m, cfg);
        auto pruned = prune_overlaps(chains, cfg);
        CAPTURE(seed);
        CHECK(total_segments(pruned) <= total_segments(chains));
        CHECK(oracle::prune_postcondition_holds(pruned, cfg));
        CHECK(prune_overlaps(pruned, cfg) == pruned);
    }
}

TEST_CASE("chain_end_pose reports terminal joints and outward directions") {
    Chain c;
    c.joints = {{0.0, 0.0}, {20.0, 0.0}};
    c.filled_flags = {false};

    EndPose tail = chain_end_pose(c, ChainEnd::tail);
    CHECK(tail.point == Vec2{20.0, 0.0});
    CHECK(tail.direction.x == doctest::Approx(1.0));
    CHECK(tail.direction.y == doctest::Approx(0.0));

    EndPose head = chain_end_pose(c, ChainEnd::head);
    CHECK(head.point == Vec2{0.0, 0.0});
    CHECK(head.direction.x == doctest::Approx(-1.0));

    Chain bend;
    bend.joints = {{0.0, 0.0}, {10.0, 0.0}, {10.0, 10.0}};
    bend.filled_flags = {false, false};
    EndPose bend_tail = chain_end_pose(bend, ChainEnd::tail);
    CHECK(bend_tail.direction.x == doctest::Approx(0.0));
    CHECK(bend_tail.direction.y == doctest::Approx(1.0));

    CHECK_THROWS_AS(chain_end_pose(Chain{}, ChainEnd::head), std::invalid_argument);
}
