#include "support.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace wss;
using wss::testing::polygon;
using wss::testing::rect;

namespace {

const char* kSquare = R"({"vertices":[[0,0],[1,0],[1,1],[0,1]],
  "edges":[{"v":[0,1]},{"v":[1,2]},{"v":[2,3]},{"v":[3,0]}]})";

}

TEST(Schedule, DefaultIsUnitSpeed) {
    const WeightSchedule s;
    ASSERT_EQ(s.pieces().size(), 1u);
    EXPECT_EQ(s.pieces()[0], (SchedulePiece{0.0, 1.0}));
    EXPECT_DOUBLE_EQ(s.displacement(3.0), 3.0);
}

TEST(Schedule, FromWeights) {
    const auto s = WeightSchedule::from_weights(2.0, 0.5);
    ASSERT_EQ(s.pieces().size(), 2u);
    EXPECT_EQ(s.pieces()[0], (SchedulePiece{0.0, 0.0}));
    EXPECT_EQ(s.pieces()[1], (SchedulePiece{2.0, 0.5}));
    EXPECT_DOUBLE_EQ(s.first_moving_time(), 2.0);
}

TEST(Schedule, Displacement) {
    const WeightSchedule s({{0, 0}, {1, 2}, {3, 0}});
    EXPECT_DOUBLE_EQ(s.displacement(0.5), 0.0);
    EXPECT_DOUBLE_EQ(s.displacement(2.0), 2.0);
    EXPECT_DOUBLE_EQ(s.displacement(5.0), 4.0);
    EXPECT_DOUBLE_EQ(s.speed_at(1.0), 2.0);
    EXPECT_EQ(s.piece_index(3.0), 2);
    EXPECT_FALSE(s.eventually_moves());
}

TEST(Schedule, InverseDisplacement) {
    const WeightSchedule s({{0, 0}, {1, 2}, {3, 1}});
    EXPECT_DOUBLE_EQ(s.inverse_displacement(0.0), 0.0);
    EXPECT_DOUBLE_EQ(s.inverse_displacement(2.0), 2.0);
    EXPECT_DOUBLE_EQ(s.inverse_displacement(6.0), 5.0);
    const WeightSchedule stops({{0, 1}, {1, 0}});
    EXPECT_TRUE(std::isinf(stops.inverse_displacement(2.0)));
}

TEST(Schedule, Breakpoints) {
    const WeightSchedule s({{0, 0}, {1, 2}, {3, 1}});
    EXPECT_EQ(s.breakpoints(), (std::vector<double>{1.0, 3.0}));
}

TEST(Schedule, RejectsBadPieces) {
    EXPECT_THROW(WeightSchedule({{0, -1}}), ValidationError);
    EXPECT_THROW(WeightSchedule({{1, 1}, {0, 2}}), ValidationError);
    EXPECT_THROW(WeightSchedule(std::vector<SchedulePiece>{}), ValidationError);
    EXPECT_THROW(WeightSchedule::from_weights(0.0, -1.0), ValidationError);
}

TEST(Schedule, NormalizedMergesEqualSpeeds) {
    const WeightSchedule s({{0, 1}, {2, 1}, {3, 2}});
    const auto n = s.normalized();
    ASSERT_EQ(n.pieces().size(), 2u);
    EXPECT_EQ(n.pieces()[1], (SchedulePiece{3.0, 2.0}));
}

TEST(Parse, DefaultsToUnitWeights) {
    const auto in = parse_input(kSquare);
    EXPECT_EQ(in.kind, InputKind::SimplePolygon);
    ASSERT_EQ(in.edges.size(), 4u);
    for (const auto& e : in.edges) {
        ASSERT_TRUE(e.left);
        EXPECT_EQ(*e.left, WeightSchedule{});
        EXPECT_FALSE(e.right);
    }
}

TEST(Parse, DeltaSigma) {
    const auto in = parse_input(R"({"vertices":[[0,0],[1,0],[1,1],[0,1]],
      "edges":[{"v":[0,1],"left":{"delta":2,"sigma":0.5}},{"v":[1,2]},{"v":[2,3]},{"v":[3,0]}]})");
    EXPECT_EQ(*in.edges[0].left, WeightSchedule({{0, 0}, {2, 0.5}}));
}

TEST(Parse, ExplicitSchedule) {
    const auto in = parse_input(R"({"vertices":[[0,0],[1,0],[1,1],[0,1]],
      "edges":[{"v":[0,1],"left":{"schedule":[[0,1],[0.5,3]]}},{"v":[1,2]},{"v":[2,3]},{"v":[3,0]}]})");
    EXPECT_EQ(*in.edges[0].left, WeightSchedule({{0, 1}, {0.5, 3}}));
}

TEST(Parse, MalformedDocuments) {
    EXPECT_THROW(parse_input("{"), ParseError);
    EXPECT_THROW(parse_input("[]"), ParseError);
    EXPECT_THROW(parse_input(R"({"vertices":[[0,0]]})"), ParseError);
    EXPECT_THROW(parse_input(R"({"kind":"mesh","vertices":[],"edges":[]})"), ParseError);
    EXPECT_THROW(parse_input(R"({"vertices":[[0,0],[1,0],[0,1]],
      "edges":[{"v":[0,1],"right":{}},{"v":[1,2]},{"v":[2,0]}]})"),
                 ParseError);
}

TEST(Validate, SelfCrossingPolygon) {
    EXPECT_THROW(parse_input(R"({"vertices":[[0,0],[1,1],[1,0],[0,1]],
      "edges":[{"v":[0,1]},{"v":[1,2]},{"v":[2,3]},{"v":[3,0]}]})"),
                 ValidationError);
}

TEST(Validate, ClockwiseOuterLoop) {
    EXPECT_THROW(polygon({wss::testing::reversed(rect(0, 0, 1, 1))}), ValidationError);
}

TEST(Validate, BadIndicesAndDuplicates) {
    EXPECT_THROW(parse_input(R"({"vertices":[[0,0],[1,0],[0,1]],
      "edges":[{"v":[0,1]},{"v":[1,5]},{"v":[2,0]}]})"),
                 ValidationError);
    EXPECT_THROW(parse_input(R"({"vertices":[[0,0],[1,0],[0,1]],
      "edges":[{"v":[0,1]},{"v":[1,1]},{"v":[2,0]}]})"),
                 ValidationError);
    EXPECT_THROW(parse_input(R"({"vertices":[[0,0],[1,0],[0,1],[0,0]],
      "edges":[{"v":[0,1]},{"v":[1,2]},{"v":[2,3]},{"v":[3,0]}]})"),
                 ValidationError);
}

TEST(Validate, HoleMakesPolygonWithHoles) {
    const auto in = polygon({rect(0, 0, 10, 10), wss::testing::reversed(rect(4, 4, 6, 6))});
    EXPECT_EQ(in.kind, InputKind::PolygonWithHoles);
    EXPECT_EQ(footprint_loops(in).size(), 2u);
    EXPECT_TRUE(point_in_loops({1, 1}, footprint_loops(in)));
    EXPECT_FALSE(point_in_loops({5, 5}, footprint_loops(in)));
}

TEST(Validate, PslgSegment) {
    const auto in = parse_input(R"({"kind":"pslg","vertices":[[0,0],[2,0]],"edges":[{"v":[0,1]}]})");
    EXPECT_EQ(in.kind, InputKind::Pslg);
    ASSERT_TRUE(in.edges[0].left && in.edges[0].right);
}

TEST(Normalize, ShiftsByMostNegativeStart) {
    auto in = polygon({{{0, 0}, {1, 0}, {0, 1}}},
                      {WeightSchedule({{-1, 1}}), WeightSchedule({{0, 1}}), WeightSchedule({{2, 1}})});
    const auto n = normalize_schedules(in);
    EXPECT_DOUBLE_EQ(n.time_shift, 1.0);
    EXPECT_DOUBLE_EQ(n.input.edges[0].left->first_moving_time(), 0.0);
    EXPECT_DOUBLE_EQ(n.input.edges[1].left->first_moving_time(), 1.0);
    EXPECT_DOUBLE_EQ(n.input.edges[2].left->first_moving_time(), 3.0);
}

TEST(Normalize, NonNegativeStartsUnchanged) {
    const auto in = polygon({rect(0, 0, 1, 1)}, {WeightSchedule::from_weights(0.5, 1.0)});
    const auto n = normalize_schedules(in);
    EXPECT_DOUBLE_EQ(n.time_shift, 0.0);
    EXPECT_EQ(*n.input.edges[0].left, *in.edges[0].left);
}

TEST(MergeCollinear, RemovesStraightVertexWithEqualWeights) {
    const auto in = polygon({{{0, 0}, {1, 0}, {2, 0}, {2, 1}, {0, 1}}});
    const auto m = merge_collinear(in);
    EXPECT_EQ(m.edges.size(), 4u);
    EXPECT_EQ(m.vertices.size(), 4u);
}

TEST(MergeCollinear, RejectsStraightVertexWithDifferentWeights) {
    const auto in = polygon({{{0, 0}, {1, 0}, {2, 0}, {2, 1}, {0, 1}}}, {WeightSchedule{}, WeightSchedule::constant(2.0)});
    EXPECT_THROW(merge_collinear(in), CollinearWeightMismatch);
}

TEST(MergeCollinear, KeepsCorners) {
    const auto in = polygon({rect(0, 0, 2, 1)});
    EXPECT_EQ(merge_collinear(in), in);
}

TEST(Serialize, RoundTrip) {
    const auto in = parse_input(R"({"vertices":[[0,0],[3,0],[3,2],[0,2]],
      "edges":[{"v":[0,1],"left":{"delta":1,"sigma":2}},{"v":[1,2],"left":{"schedule":[[-0.5,0],[1,4]]}},
               {"v":[2,3]},{"v":[3,0]}]})");
    EXPECT_EQ(parse_input(serialize_input(in)), in);
}

TEST(Serialize, RoundTripPslg) {
    const auto in = parse_input(R"({"kind":"pslg","vertices":[[0,0],[2,0],[1,1]],
      "edges":[{"v":[0,1],"right":{"delta":1}},{"v":[1,2]}]})");
    EXPECT_EQ(parse_input(serialize_input(in)), in);
}

TEST(LoopArea, Orientation) {
    EXPECT_DOUBLE_EQ(loop_area(rect(0, 0, 2, 3)), 6.0);
    EXPECT_DOUBLE_EQ(loop_area(wss::testing::reversed(rect(0, 0, 2, 3))), -6.0);
}
