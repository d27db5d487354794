#include "support.hpp"
#include "wss/wavefront.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace wss;
using wss::testing::polygon;
using wss::testing::rect;

TEST(VertexVelocity, PerpendicularUnitSpeeds) {
    const auto v = vertex_velocity({1, 0}, 1.0, {0, 1}, 1.0);
    EXPECT_NEAR(v.x, 1.0, 1e-15);
    EXPECT_NEAR(v.y, 1.0, 1e-15);
}

TEST(VertexVelocity, Examples) {
    const auto a = vertex_velocity({0, 1}, 1.0, {-1, 0}, 1.0);
    EXPECT_NEAR(a.x, -1.0, 1e-15);
    EXPECT_NEAR(a.y, 1.0, 1e-15);
    const auto b = vertex_velocity({0, 1}, 0.0, {-1, 0}, 1.0);
    EXPECT_NEAR(b.x, -1.0, 1e-15);
    EXPECT_NEAR(b.y, 0.0, 1e-15);
    const auto c = vertex_velocity({0, 1}, 0.0, {-1, 0}, 0.0);
    EXPECT_EQ(c, (Vector2{0, 0}));
}

TEST(VertexVelocity, WeightedSpeeds) {
    const auto v = vertex_velocity({1, 0}, 2.0, {0, 1}, 0.5);
    EXPECT_NEAR(v.x, 2.0, 1e-15);
    EXPECT_NEAR(v.y, 0.5, 1e-15);
}

TEST(VertexVelocity, ParallelNormals) {
    const auto v = vertex_velocity({0, 1}, 2.0, {0, 1}, 2.0);
    EXPECT_NEAR(v.y, 2.0, 1e-15);
    EXPECT_THROW(vertex_velocity({0, 1}, 1.0, {0, 1}, 2.0), ParallelConflict);
    EXPECT_THROW(vertex_velocity({0, 1}, 1.0, {0, -1}, 1.0), ParallelConflict);
}

TEST(Reflex, TurnDirection) {
    EXPECT_FALSE(is_reflex_turn({1, 0}, {0, 1}));
    EXPECT_TRUE(is_reflex_turn({1, 0}, {0, -1}));
    EXPECT_FALSE(is_reflex_turn({1, 0}, {1, 0}));
}

TEST(InitialWavefront, SquareVelocities) {
    const auto wf = initial_wavefront(polygon({rect(0, 0, 1, 1)}));
    ASSERT_EQ(wf.chains().size(), 1u);
    EXPECT_EQ(wf.alive_vertex_count(), 4u);
    for (const auto& v : wf.vertices) {
        EXPECT_NEAR(norm(v.velocity), std::sqrt(2.0), 1e-12);
        EXPECT_FALSE(v.reflex);
        const Point2 inside = v.position(0.1);
        EXPECT_GT(inside.x, 0.0);
        EXPECT_LT(inside.x, 1.0);
        EXPECT_GT(inside.y, 0.0);
        EXPECT_LT(inside.y, 1.0);
    }
}

TEST(InitialWavefront, DelayedSidesStartAtRest) {
    const auto d = WeightSchedule::from_weights(1.0, 1.0);
    const auto wf = initial_wavefront(polygon({rect(0, 0, 1, 1)}, {d, d, d, d}));
    for (const auto& v : wf.vertices) {
        EXPECT_EQ(v.velocity, (Vector2{0, 0}));
    }
}

TEST(InitialWavefront, ReflexVertexOfLShape) {
    const auto in = polygon({{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}});
    const auto wf = initial_wavefront(in);
    int reflex = 0;
    for (std::size_t i = 0; i < wf.vertices.size(); ++i) {
        if (wf.vertices[i].reflex) {
            ++reflex;
            EXPECT_EQ(wf.vertices[i].anchor, (Point2{1, 1}));
            EXPECT_TRUE(is_reflex_at(wf, static_cast<int>(i)));
        }
    }
    EXPECT_EQ(reflex, 1);
}

TEST(InitialWavefront, HoleChainRunsClockwise) {
    const auto in = polygon({rect(0, 0, 10, 10), wss::testing::reversed(rect(4, 4, 6, 6))});
    const auto wf = initial_wavefront(in);
    const auto polys = wf.polygons_at(0.5);
    ASSERT_EQ(polys.size(), 2u);
    double areas[2] = {loop_area(polys[0]), loop_area(polys[1])};
    if (areas[0] < areas[1]) {
        std::swap(areas[0], areas[1]);
    }
    EXPECT_NEAR(areas[0], 81.0, 1e-9);
    EXPECT_NEAR(areas[1], -9.0, 1e-9);
}

TEST(InitialWavefront, SegmentPslgHasFourVertices) {
    const auto in = parse_input(R"({"kind":"pslg","vertices":[[0,0],[2,0]],"edges":[{"v":[0,1]}]})");
    const auto sides = build_sides(in);
    ASSERT_EQ(sides.size(), 4u);
    EXPECT_TRUE(sides[2].is_cap);
    EXPECT_TRUE(sides[3].is_cap);
    const auto wf = initial_wavefront(in);
    EXPECT_EQ(wf.alive_vertex_count(), 4u);
    ASSERT_EQ(wf.chains().size(), 1u);
    const auto poly = wf.polygons_at(1.0).front();
    EXPECT_NEAR(std::abs(loop_area(poly)), 8.0, 1e-9);
}

TEST(KineticVertex, PositionAtRejectsPast) {
    KineticVertex v;
    v.anchor = {1, 1};
    v.anchor_time = 2.0;
    v.velocity = {1, 0};
    EXPECT_EQ(v.position_at(3.0), (Point2{2, 1}));
    EXPECT_THROW(v.position_at(1.0), OutOfWindow);
}

TEST(Sides, MovedLine) {
    const auto sides = build_sides(polygon({rect(0, 0, 4, 2)}, {WeightSchedule({{0, 0}, {1, 2}})}));
    EXPECT_DOUBLE_EQ(sides[0].moved_line(0.5).offset, 0.0);
    EXPECT_DOUBLE_EQ(sides[0].moved_line(2.0).offset, 2.0);
    EXPECT_DOUBLE_EQ(sides[0].speed_at(1.0), 2.0);
}
