#include "support.hpp"
#include "wss/oracle.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>

using namespace wss;
using wss::testing::polygon;
using wss::testing::rect;

TEST(ConvexHeight, UnitWeights) {
    EXPECT_DOUBLE_EQ(convex_height(polygon({rect(0, 0, 4, 4)}), {1, 2}), 1.0);
    EXPECT_DOUBLE_EQ(convex_height(polygon({rect(0, 0, 4, 2)}), {2, 1}), 1.0);
}

TEST(ConvexHeight, FastEdge) {
    const auto in = polygon({rect(0, 0, 4, 4)}, {WeightSchedule::from_weights(0.0, 2.0)});
    EXPECT_DOUBLE_EQ(convex_height(in, {2, 1}), 0.5);
}

TEST(ConvexHeight, DelayedEdge) {
    const auto in = polygon({rect(0, 0, 4, 4)}, {WeightSchedule::from_weights(1.5, 1.0)});
    EXPECT_DOUBLE_EQ(convex_height(in, {2, 1}), 2.0);
    EXPECT_DOUBLE_EQ(convex_height(in, {1, 0.5}), 1.0);
}

TEST(ConvexHeight, Errors) {
    EXPECT_THROW(convex_height(polygon({rect(0, 0, 4, 4)}), {5, 1}), OutsidePolygon);
    EXPECT_THROW(convex_height(polygon({{{0, 0}, {2, 0}, {2, 1}, {1, 1}, {1, 2}, {0, 2}}}), {0.5, 0.5}),
                 ValidationError);
}

TEST(ConvexHeight, ConcaveAlongChords) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> delta(0.0, 2.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int it = 0; it < 20; ++it) {
        const auto loop = wss::testing::random_convex(rng, 3 + static_cast<int>(rng() % 8));
        std::vector<WeightSchedule> w;
        for (std::size_t i = 0; i < loop.size(); ++i) {
            w.push_back(WeightSchedule::from_weights(delta(rng), 1.0));
        }
        const auto in = polygon({loop}, w);
        for (int k = 0; k < 20; ++k) {
            const Point2& a0 = loop[rng() % loop.size()];
            const Point2& b0 = loop[rng() % loop.size()];
            const Point2 c = (loop[0] + loop[1] + loop[2]) / 3.0;
            const Point2 a = c + (a0 - c) * (0.9 * unit(rng));
            const Point2 b = c + (b0 - c) * (0.9 * unit(rng));
            const double s = unit(rng);
            const double mid = convex_height(in, a + (b - a) * s);
            EXPECT_GE(mid, (1.0 - s) * convex_height(in, a) + s * convex_height(in, b) - 1e-12);
        }
    }
}

TEST(TimeStep, UnitSquare) {
    const auto report = time_step_simulate(polygon({rect(0, 0, 1, 1)}), {0.25, 0.6});
    ASSERT_FALSE(report.event_times.empty());
    EXPECT_NEAR(report.event_times.back(), 0.5, 1e-9);
    ASSERT_EQ(report.snapshots[0].size(), 1u);
    EXPECT_NEAR(loop_area(report.snapshots[0][0]), 0.25, 1e-12);
    EXPECT_TRUE(report.snapshots[1].empty());
}

TEST(TimeStep, MatchesEngineOnLShape) {
    const auto in = polygon({{{0, 0}, {8, 0}, {8, 3}, {3, 2}, {3, 8}, {0, 8}}});
    const std::vector<double> times{0.5, 0.95, 1.2, 1.45};
    const auto report = time_step_simulate(in, times);
    const auto engine = compute_skeleton(in);
    const auto offsets = extract_offsets(engine.skeleton, times);
    for (std::size_t i = 0; i < times.size(); ++i) {
        EXPECT_LE(hausdorff_distance(offsets[i], report.snapshots[i]), 1e-9) << "t=" << times[i];
    }
    std::vector<double> ev;
    for (const auto& e : engine.events) {
        ev.push_back(e.time);
    }
    ASSERT_EQ(ev.size(), report.event_times.size());
    std::sort(ev.begin(), ev.end());
    for (std::size_t i = 0; i < ev.size(); ++i) {
        EXPECT_NEAR(ev[i], report.event_times[i], 1e-9);
    }
}

TEST(TimeStep, GableCollapsesAtTwo) {
    const auto g = WeightSchedule::from_weights(3, 1);
    const auto report = time_step_simulate(polygon({rect(0, 0, 4, 2)}, {g, {}, g, {}}), {1.0});
    ASSERT_FALSE(report.event_times.empty());
    EXPECT_NEAR(report.event_times.back(), 2.0, 1e-9);
    ASSERT_EQ(report.snapshots[0].size(), 1u);
    EXPECT_NEAR(loop_area(report.snapshots[0][0]), 4.0, 1e-12);
}

TEST(TimeStep, CourtyardWithHole) {
    const auto report =
        time_step_simulate(polygon({rect(0, 0, 10, 10), wss::testing::reversed(rect(4, 4, 6, 6))}), {1.0, 2.5});
    ASSERT_EQ(report.snapshots[0].size(), 2u);
    EXPECT_TRUE(report.snapshots[1].empty());
}

TEST(Hausdorff, Basics) {
    const std::vector<std::vector<Point2>> a{rect(0, 0, 1, 1)};
    const std::vector<std::vector<Point2>> b{rect(0, 0, 1, 1.1)};
    EXPECT_NEAR(hausdorff_distance(a, b), 0.1, 1e-12);
    EXPECT_DOUBLE_EQ(hausdorff_distance(a, a), 0.0);
    EXPECT_DOUBLE_EQ(hausdorff_distance({}, {}), 0.0);
    EXPECT_EQ(hausdorff_distance(a, {}), std::numeric_limits<double>::infinity());
}
