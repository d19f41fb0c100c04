#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <map>
#include <numbers>

#include "dlo/contour.hpp"
#include "dlo/skeletonize.hpp"
#include "oracles.hpp"

using namespace dlo;

namespace {

std::map<PixelCoord, int> multiset_of(const std::vector<PixelCoord>& pts) {
    std::map<PixelCoord, int> m;
    for (const PixelCoord& p : pts) ++m[p];
    return m;
}

}  // namespace

TEST_CASE("single pixel traces to a one-point path") {
    BinaryMask m(8, 8);
    m.set(5, 3, true);
    auto paths = trace_borders(m);
    REQUIRE(paths.size() == 1);
    REQUIRE(paths[0].points.size() == 1);
    CHECK(paths[0].points[0] == PixelCoord{5, 3});
}

TEST_CASE("3x3 square traces its 8 perimeter pixels clockwise") {
    BinaryMask m = oracle::rect_mask(9, 9, 2, 2, 3, 3);
    auto paths = trace_borders(m);
    REQUIRE(paths.size() == 1);
    std::vector<PixelCoord> expect = {{2, 2}, {3, 2}, {4, 2}, {4, 3},
                                      {4, 4}, {3, 4}, {2, 4}, {2, 3}};
    CHECK(paths[0].points == expect);
}

TEST_CASE("1x5 line traces out and back in 8 entries") {
    BinaryMask m(9, 5);
    for (int x = 1; x <= 5; ++x) m.set(x, 2, true);
    auto paths = trace_borders(m);
    REQUIRE(paths.size() == 1);
    std::vector<PixelCoord> expect = {{1, 2}, {2, 2}, {3, 2}, {4, 2},
                                      {5, 2}, {4, 2}, {3, 2}, {2, 2}};
    CHECK(paths[0].points == expect);
}

TEST_CASE("closed 1-px loop traces each pixel exactly once") {
    BinaryMask ring = thin(oracle::annulus_mask(32, 32, 16, 16, 6, 11));
    REQUIRE(oracle::count_holes(ring) == 1);
    auto paths = trace_borders(ring);
    REQUIRE(paths.size() == 1);
    CHECK(paths[0].points.size() == ring.foreground_count());
    auto counts = multiset_of(paths[0].points);
    for (const auto& [p, n] : counts) CHECK(n == 1);
    CHECK(pixels_adjacent8(paths[0].points.front(), paths[0].points.back()));
}

TEST_CASE("traces match the Moore-neighbor oracle on thinned masks") {
    for (uint64_t seed = 500; seed < 550; ++seed) {
        BinaryMask m = thin(oracle::blob_mask(seed, 64, 64));
        auto got = trace_borders(m);
        auto want = oracle::moore_trace(m);
        CAPTURE(seed);
        REQUIRE(got.size() == want.size());
        for (size_t i = 0; i < got.size(); ++i) {
            CHECK(got[i].points == want[i]);  // same sequence, not just multiset
        }
    }
}

namespace {

// The outer border proper: foreground pixels 4-adjacent to the unbounded
// background (8-connected foreground pairs with 4-connected background).
// Pixels whose only background contact is an enclosed hole, or a diagonal
// touch into a concave pocket, are not on the outer border and a border
// trace never visits them.
std::set<PixelCoord> outer_border_pixels(const BinaryMask& m) {
    std::vector<char> outer(static_cast<size_t>(m.width) * m.height, 0);
    std::vector<PixelCoord> stack;
    auto push = [&](int x, int y) {
        if (x < 0 || x >= m.width || y < 0 || y >= m.height) return;
        size_t i = static_cast<size_t>(y) * m.width + x;
        if (m.get(x, y) || outer[i]) return;
        outer[i] = 1;
        stack.push_back({x, y});
    };
    for (int x = 0; x < m.width; ++x) {
        push(x, 0);
        push(x, m.height - 1);
    }
    for (int y = 0; y < m.height; ++y) {
        push(0, y);
        push(m.width - 1, y);
    }
    while (!stack.empty()) {
        PixelCoord p = stack.back();
        stack.pop_back();
        push(p.x + 1, p.y);
        push(p.x - 1, p.y);
        push(p.x, p.y + 1);
        push(p.x, p.y - 1);
    }

    auto outer_bg = [&](int x, int y) {
        if (x < 0 || x >= m.width || y < 0 || y >= m.height) return true;  // frame edge
        return !m.get(x, y) && outer[static_cast<size_t>(y) * m.width + x] != 0;
    };
    std::set<PixelCoord> result;
    for (int y = 0; y < m.height; ++y)
        for (int x = 0; x < m.width; ++x)
            if (m.get(x, y) && (outer_bg(x + 1, y) || outer_bg(x - 1, y) || outer_bg(x, y + 1) ||
                                outer_bg(x, y - 1)))
                result.insert({x, y});
    return result;
}

void check_trace_properties(const BinaryMask& m) {
    ComponentLabeling labeling = connected_components(m);
    auto paths = trace_borders(m);
    REQUIRE(static_cast<int>(paths.size()) == labeling.count);

    // The trace visits exactly the outer border, each pixel at least once.
    std::set<PixelCoord> visited;
    for (const auto& p : paths)
        for (const PixelCoord& pt : p.points) visited.insert(pt);
    CHECK(visited == outer_border_pixels(m));

    for (const auto& p : paths) {
        REQUIRE_FALSE(p.points.empty());
        CHECK(pixels_adjacent8(p.points.front(), p.points.back()));
        for (size_t i = 0; i + 1 < p.points.size(); ++i)
            CHECK(pixels_adjacent8(p.points[i], p.points[i + 1]));
    }
}

}  // namespace

TEST_CASE("trace properties: coverage, closure, count") {
    for (uint64_t seed = 600; seed < 640; ++seed) {
        CAPTURE(seed);
        check_trace_properties(thin(oracle::blob_mask(seed, 64, 64)));
    }
    for (uint64_t seed = 650; seed < 690; ++seed) {
        CAPTURE(seed);
        check_trace_properties(thin(oracle::cable_mask(seed, 64, 64)));
    }
}

TEST_CASE("hole-free cable skeletons are covered completely") {
    int fully_covered_masks = 0;
    for (uint64_t seed = 650; seed < 690; ++seed) {
        BinaryMask m = thin(oracle::cable_mask(seed, 64, 64));
        if (outer_border_pixels(m).size() != m.foreground_count()) continue;  // hairpin slit
        ++fully_covered_masks;

        ComponentLabeling labeling = connected_components(m);
        auto paths = trace_borders(m);
        REQUIRE(static_cast<int>(paths.size()) == labeling.count);
        std::vector<std::map<PixelCoord, int>> seen;
        for (const auto& p : paths) seen.push_back(multiset_of(p.points));
        CAPTURE(seed);
        for (int y = 0; y < m.height; ++y)
            for (int x = 0; x < m.width; ++x)
                if (m.get(x, y)) CHECK(seen[labeling.label(x, y) - 1].count({x, y}) == 1);
    }
    CHECK(fully_covered_masks >= 30);  // the typical case, not a rare one
}

TEST_CASE("path_arclength counts unit and diagonal steps") {
    PixelPath path;
    SUBCASE("single point") {
        path.points = {{4, 4}};
        CHECK(path_arclength(path, 0, 0) == 0.0);
    }
    SUBCASE("collinear horizontal") {
        for (int x = 0; x < 5; ++x) path.points.push_back({x, 2});
        CHECK(path_arclength(path, 0, 4) == doctest::Approx(4.0));
        CHECK(path_arclength(path, 1, 3) == doctest::Approx(2.0));
    }
    SUBCASE("pure diagonal") {
        for (int i = 0; i < 5; ++i) path.points.push_back({i, i});
        CHECK(path_arclength(path, 0, 4) == doctest::Approx(4.0 * std::numbers::sqrt2));
    }
    SUBCASE("bad indices throw") {
        path.points = {{0, 0}, {1, 0}};
        CHECK_THROWS_AS(path_arclength(path, 1, 5), std::out_of_range);
        CHECK_THROWS_AS(path_arclength(path, 2, 2), std::out_of_range);
    }
}
