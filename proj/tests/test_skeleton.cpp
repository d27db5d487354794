#include "support.hpp"
#include "wss/skeleton.hpp"

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include <cmath>

using namespace wss;
using wss::testing::polygon;
using wss::testing::rect;

namespace {

double total_area(const std::vector<std::vector<Point2>>& loops) {
    double a = 0.0;
    for (const auto& l : loops) {
        a += loop_area(l);
    }
    return a;
}

} // namespace

TEST(Offsets, SquareShrinks) {
    const auto r = compute_skeleton(polygon({rect(0, 0, 1, 1)}));
    const auto offs = extract_offsets(r.skeleton, {0.0, 0.25, 0.4, 1.0});
    ASSERT_EQ(offs.size(), 4u);
    ASSERT_EQ(offs[0].size(), 1u);
    EXPECT_NEAR(loop_area(offs[0][0]), 1.0, 1e-12);
    ASSERT_EQ(offs[1].size(), 1u);
    EXPECT_EQ(offs[1][0].size(), 4u);
    EXPECT_NEAR(loop_area(offs[1][0]), 0.25, 1e-12);
    for (const auto& p : offs[1][0]) {
        EXPECT_NEAR(std::abs(p.x - 0.5), 0.25, 1e-12);
        EXPECT_NEAR(std::abs(p.y - 0.5), 0.25, 1e-12);
    }
    ASSERT_EQ(offs[2].size(), 1u);
    EXPECT_NEAR(loop_area(offs[2][0]), 0.04, 1e-12);
    EXPECT_TRUE(offs[3].empty());
}

TEST(Offsets, CourtyardKeepsHole) {
    const auto r = compute_skeleton(polygon({rect(0, 0, 10, 10), wss::testing::reversed(rect(4, 4, 6, 6))}));
    const auto offs = extract_offsets(r.skeleton, {1.0});
    ASSERT_EQ(offs[0].size(), 2u);
    EXPECT_NEAR(total_area(offs[0]), 64.0 - 16.0, 1e-9);
}

TEST(Offsets, ReflexSplitGivesTwoLoops) {
    const auto r = compute_skeleton(polygon({{{0, 0}, {8, 0}, {8, 3}, {3, 2}, {3, 8}, {0, 8}}}));
    EXPECT_EQ(extract_offsets(r.skeleton, {0.5})[0].size(), 1u);
    EXPECT_EQ(extract_offsets(r.skeleton, {1.2})[0].size(), 2u);
}

TEST(Offsets, WeightedEdgeMovesFaster) {
    const auto r = compute_skeleton(polygon({rect(0, 0, 4, 4)}, {WeightSchedule::constant(2.0)}));
    const auto offs = extract_offsets(r.skeleton, {0.5});
    ASSERT_EQ(offs[0].size(), 1u);
    EXPECT_NEAR(loop_area(offs[0][0]), 3.0 * 2.5, 1e-12);
}

TEST(Offsets, StopTimeAndBeyond) {
    EngineOptions options;
    options.stop_time = 0.25;
    const auto r = compute_skeleton(polygon({rect(0, 0, 1, 1)}), options);
    const auto offs = extract_offsets(r.skeleton, {0.1, 0.25, 0.3});
    ASSERT_EQ(offs[0].size(), 1u);
    EXPECT_NEAR(loop_area(offs[0][0]), 0.64, 1e-12);
    ASSERT_EQ(offs[1].size(), 1u);
    EXPECT_NEAR(loop_area(offs[1][0]), 0.25, 1e-12);
    EXPECT_TRUE(offs[2].empty());
}

TEST(Connectivity, EmptyAndConnected) {
    EXPECT_EQ(connectivity(Skeleton{}), 0);
    const auto r = compute_skeleton(polygon({rect(0, 0, 10, 10), wss::testing::reversed(rect(4, 4, 6, 6))}));
    EXPECT_EQ(connectivity(r.skeleton), 1);
}

TEST(Crossings, DetectsInjectedArc) {
    auto sk = compute_skeleton(polygon({rect(0, 0, 1, 1)})).skeleton;
    EXPECT_EQ(check_crossing_free(sk).violations, 0);
    const int a = static_cast<int>(sk.nodes.size());
    sk.nodes.push_back({{0.1, 0.3}, 0.1});
    sk.nodes.push_back({{0.3, 0.1}, 0.1});
    sk.arcs.push_back({a, a + 1, -1, -1});
    const auto report = check_crossing_free(sk);
    EXPECT_EQ(report.violations, 1);
    ASSERT_EQ(report.violating_pairs.size(), 1u);
}

TEST(Faces, SquareFacesAreTriangles) {
    const auto r = compute_skeleton(polygon({rect(0, 0, 1, 1)}));
    ASSERT_EQ(r.skeleton.faces.size(), 4u);
    for (const auto& f : r.skeleton.faces) {
        ASSERT_EQ(f.cycles.size(), 1u);
        EXPECT_EQ(f.cycles[0].size(), 3u);
        EXPECT_EQ(f.arcs.size(), 2u);
    }
}

TEST(Faces, UnweightedFacesAreMonotone) {
    const auto r = compute_skeleton(polygon({{{0, 0}, {8, 0}, {8, 3}, {3, 2}, {3, 8}, {0, 8}}}));
    for (const auto& f : face_monotone_report(r.skeleton)) {
        EXPECT_TRUE(f.monotone) << "face " << f.face;
    }
}

TEST(Json, SkeletonShape) {
    const auto r = compute_skeleton(polygon({rect(0, 0, 4, 2)}));
    const auto j = nlohmann::json::parse(skeleton_to_json(r.skeleton));
    ASSERT_EQ(j.at("nodes").size(), r.skeleton.nodes.size());
    ASSERT_EQ(j.at("arcs").size(), 5u);
    EXPECT_EQ(j.at("nodes")[0].size(), 3u);
    EXPECT_EQ(j.at("arcs")[0].size(), 4u);
    EXPECT_EQ(j.at("faces").size(), 4u);
    bool ridge = false;
    for (const auto& n : j.at("nodes")) {
        ridge = ridge || (n[0] == 1.0 && n[1] == 1.0 && n[2] == 1.0);
    }
    EXPECT_TRUE(ridge);
}

TEST(Json, OffsetsShape) {
    const auto r = compute_skeleton(polygon({rect(0, 0, 1, 1)}));
    const std::vector<double> times{0.25};
    const auto j = nlohmann::json::parse(offsets_to_json(times, extract_offsets(r.skeleton, times)));
    ASSERT_EQ(j.size(), 1u);
    EXPECT_EQ(j[0].at("t"), 0.25);
    ASSERT_EQ(j[0].at("polygons").size(), 1u);
    EXPECT_EQ(j[0].at("polygons")[0].size(), 4u);
}
