#pragma once

#include "wss/engine.hpp"
#include "wss/input.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace wss::testing {

/// Validated polygon input from loops; the first loop is the outer boundary.
inline WeightedInput polygon(const std::vector<std::vector<Point2>>& loops,
                             const std::vector<WeightSchedule>& schedules = {}) {
    WeightedInput in;
    std::size_t k = 0;
    for (const auto& loop : loops) {
        const int base = static_cast<int>(in.vertices.size());
        const int m = static_cast<int>(loop.size());
        for (const auto& p : loop) {
            in.vertices.push_back(p);
        }
        for (int i = 0; i < m; ++i, ++k) {
            InputEdge e;
            e.from = base + i;
            e.to = base + (i + 1) % m;
            e.left = k < schedules.size() ? schedules[k] : WeightSchedule{};
            in.edges.push_back(e);
        }
    }
    validate_input(in);
    return in;
}

inline std::vector<Point2> rect(double x0, double y0, double x1, double y1) {
    return {{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}};
}

inline std::vector<Point2> reversed(std::vector<Point2> loop) {
    std::reverse(loop.begin(), loop.end());
    return loop;
}

/// Random star-shaped polygon around the origin with n vertices.
inline std::vector<Point2> random_star(std::mt19937_64& rng, int n, double rmin = 0.4, double rmax = 1.0) {
    std::uniform_real_distribution<double> radius(rmin, rmax);
    std::uniform_real_distribution<double> jitter(-0.35, 0.35);
    std::vector<Point2> out;
    for (int i = 0; i < n; ++i) {
        const double a = (i + 0.5 + jitter(rng)) * 2.0 * 3.14159265358979323846 / n;
        const double r = radius(rng);
        out.push_back({r * std::cos(a), r * std::sin(a)});
    }
    return out;
}

/// Random convex polygon: sorted angles on an ellipse-like curve.
inline std::vector<Point2> random_convex(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> angles;
    for (int i = 0; i < n; ++i) {
        angles.push_back(unit(rng) * 2.0 * 3.14159265358979323846);
    }
    std::sort(angles.begin(), angles.end());
    const double ax = 0.5 + unit(rng);
    const double ay = 0.5 + unit(rng);
    std::vector<Point2> out;
    for (double a : angles) {
        out.push_back({ax * std::cos(a), ay * std::sin(a)});
    }
    return out;
}

} // namespace wss::testing
