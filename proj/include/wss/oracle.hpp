#pragma once

#include "wss/geometry.hpp"
#include "wss/input.hpp"

#include <vector>

namespace wss {

class OutsidePolygon : public Error {
public:
    using Error::Error;
};

class StepTooCoarse : public Error {
public:
    using Error::Error;
};

/// Arrival time of the wavefront of a convex polygon at p: the earliest time
/// at which some edge, moving by its own schedule, reaches p. Times are in
/// the input's own frame.
double convex_height(const WeightedInput& convex_polygon, Point2 p);

struct StepOptions {
    double step = 0.0;       ///< coarse step; 0 picks scale / 256
    double end_time = 0.0;   ///< simulate up to here; 0 runs until collapse
    double time_tol = 1e-12; ///< bisection tolerance of event times
    int max_steps = 2000000;
};

struct OracleReport {
    std::vector<double> event_times;                          ///< one entry per topological change
    std::vector<std::vector<std::vector<Point2>>> snapshots; ///< wavefront at each requested time
};

/// Brute-force wavefront simulation of a polygon (holes allowed). Sample and
/// event times are in the input's own frame. Vertices are recomputed as intersections of moving
/// supporting lines and events are found by sign changes over fixed steps
/// refined by bisection.
OracleReport time_step_simulate(const WeightedInput& polygon, const std::vector<double>& sample_times,
                                const StepOptions& options = {});

/// Symmetric Hausdorff distance between two sets of closed polylines,
/// sampled at `samples_per_edge` points along every edge.
double hausdorff_distance(const std::vector<std::vector<Point2>>& a, const std::vector<std::vector<Point2>>& b,
                          int samples_per_edge = 32);

} // namespace wss
