#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "dlo/skeletonize.hpp"
#include "oracles.hpp"

using namespace dlo;

namespace {

bool has_full_2x2_block(const BinaryMask& m) {
    for (int y = 0; y + 1 < m.height; ++y)
        for (int x = 0; x + 1 < m.width; ++x)
            if (m.get(x, y) && m.get(x + 1, y) && m.get(x, y + 1) && m.get(x + 1, y + 1))
                return true;
    return false;
}

bool subset_of(const BinaryMask& sub, const BinaryMask& super) {
    for (size_t i = 0; i < sub.bits.size(); ++i)
        if (sub.bits[i] && !super.bits[i]) return false;
    return true;
}

}  // namespace

TEST_CASE("thin leaves a single pixel unchanged") {
    BinaryMask m(9, 9);
    m.set(4, 4, true);
    CHECK(thin(m) == m);
}

TEST_CASE("thin leaves a 1-px curve unchanged") {
    BinaryMask m(16, 16);
    // 8-connected staircase curve.
    int xs[] = {2, 3, 4, 5, 6, 7, 8, 9, 10, 11};
    int ys[] = {3, 3, 4, 5, 5, 6, 7, 7, 8, 9};
    for (int i = 0; i < 10; ++i) m.set(xs[i], ys[i], true);
    CHECK(thin(m) == m);
}

TEST_CASE("thin reduces a 21x5 rectangle to a middle-row run") {
    BinaryMask m = oracle::rect_mask(27, 11, 3, 3, 21, 5);
    BinaryMask t = thin(m);
    CHECK(t == oracle::reference_thin(m));

    // Every surviving pixel sits on the middle row, forming one run whose
    // endpoints retract at most 3 px from the rectangle ends (the classical
    // parallel method loses one extra pixel at one end).
    int min_x = 1 << 20, max_x = -1;
    for (int y = 0; y < t.height; ++y)
        for (int x = 0; x < t.width; ++x)
            if (t.get(x, y)) {
                CHECK(y == 5);
                min_x = std::min(min_x, x);
                max_x = std::max(max_x, x);
            }
    CHECK(min_x >= 3);
    CHECK(min_x <= 6);
    CHECK(max_x <= 23);
    CHECK(max_x >= 20);
    for (int x = min_x; x <= max_x; ++x) CHECK(t.get(x, 5));
}

TEST_CASE("thin matches the reference implementation bit-exactly") {
    for (uint64_t seed = 1; seed <= 40; ++seed) {
        BinaryMask m = oracle::blob_mask(seed, 64, 64);
        CHECK(thin(m) == oracle::reference_thin(m));
    }
    CHECK(thin(oracle::annulus_mask(48, 48, 24, 24, 8, 14)) ==
          oracle::reference_thin(oracle::annulus_mask(48, 48, 24, 24, 8, 14)));
    CHECK(thin(oracle::curve_mask(5, 96, 64, 5.0)) ==
          oracle::reference_thin(oracle::curve_mask(5, 96, 64, 5.0)));
}

TEST_CASE("thinning properties on random blobby masks") {
    for (uint64_t seed = 100; seed < 160; ++seed) {
        BinaryMask m = oracle::blob_mask(seed, 64, 64);
        BinaryMask t = thin(m);

        CAPTURE(seed);
        CHECK(thin(t) == t);                     // idempotent
        CHECK(subset_of(t, m));                  // never adds pixels
        CHECK_FALSE(has_full_2x2_block(t));      // single-pixel width
    }
}

TEST_CASE("thinning preserves the component count of cable-like masks") {
    // Compact even-parity blobs can erode away entirely under the classical
    // parallel method; elongated strokes, the shapes this pipeline feeds it,
    // keep every component.
    for (uint64_t seed = 100; seed < 160; ++seed) {
        BinaryMask m = oracle::cable_mask(seed, 64, 64);
        BinaryMask t = thin(m);
        CAPTURE(seed);
        CHECK(connected_components(t).count == connected_components(m).count);
        CHECK(thin(t) == t);
        CHECK(subset_of(t, m));
        CHECK_FALSE(has_full_2x2_block(t));
    }
}

TEST_CASE("thinning an annulus keeps a single closed loop") {
    BinaryMask ring = oracle::annulus_mask(64, 64, 32, 30, 10, 17);
    REQUIRE(connected_components(ring).count == 1);
    REQUIRE(oracle::count_holes(ring) == 1);

    BinaryMask t = thin(ring);
    CHECK(connected_components(t).count == 1);
    CHECK(oracle::count_holes(t) == 1);  // Euler characteristic preserved
    CHECK_FALSE(has_full_2x2_block(t));
}

TEST_CASE("skeleton_components on an empty mask") {
    CHECK(skeleton_components(BinaryMask(32, 32)).empty());
}

TEST_CASE("skeleton_components splits disjoint blobs") {
    BinaryMask m(48, 24);
    for (int y = 6; y < 14; ++y)
        for (int x = 4; x < 16; ++x) m.set(x, y, true);
    for (int y = 8; y < 18; ++y)
        for (int x = 28; x < 42; ++x) m.set(x, y, true);

    auto skels = skeleton_components(m);
    REQUIRE(skels.size() == 2);
    CHECK(skels[0].source_component == 1);
    CHECK(skels[1].source_component == 2);
    for (const Skeleton& s : skels) {
        CHECK(connected_components(s.mask).count == 1);
        CHECK(s.mask.foreground_count() > 0);
    }
}

TEST_CASE("skeleton_components preserves component count on random masks") {
    for (uint64_t seed = 300; seed < 345; ++seed) {
        BinaryMask m = oracle::cable_mask(seed, 64, 64);
        auto skels = skeleton_components(m);
        CAPTURE(seed);
        CHECK(static_cast<int>(skels.size()) == connected_components(m).count);
        for (const Skeleton& s : skels) CHECK(connected_components(s.mask).count == 1);
    }
}
