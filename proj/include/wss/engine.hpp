#pragma once

#include "wss/geometry.hpp"
#include "wss/input.hpp"
#include "wss/skeleton.hpp"
#include "wss/wavefront.hpp"

#include <cstdint>
#include <optional>
#include <queue>
#include <vector>

namespace wss {

class NonTermination : public Error {
public:
    using Error::Error;
};

/// Ordering rank of simultaneous events: speed changes first so that every
/// geometric event sees current velocities.
enum class EventKind { SpeedChange = 0, EdgeCollapse = 1, ParallelMerge = 2, Split = 3 };

const char* to_string(EventKind kind);

struct Event {
    double time = 0.0;
    EventKind kind = EventKind::EdgeCollapse;
    Point2 location;
    /// EdgeCollapse: a = edge. Split: a = vertex, b = target side.
    /// SpeedChange: b = side. ParallelMerge: a, b = the two sides.
    int a = -1;
    int b = -1;
    std::uint32_t stamp = 0; ///< stamp of participant `a` when the event was predicted
};

/// Min-queue ordered by (time, kind rank, x, y); stale entries are skipped by
/// the consumer.
class EventQueue {
public:
    void push(const Event& e) { heap_.push(e); }
    bool empty() const { return heap_.empty(); }
    std::size_t size() const { return heap_.size(); }
    const Event& top() const { return heap_.top(); }
    Event pop() {
        Event e = heap_.top();
        heap_.pop();
        return e;
    }

private:
    struct Later {
        bool operator()(const Event& l, const Event& r) const;
    };
    std::priority_queue<Event, std::vector<Event>, Later> heap_;
};

struct EngineOptions {
    Tolerance tol;
    double guard_factor = 64.0; ///< abort after guard_factor * n^2 processed events
    std::optional<double> stop_time;
};

struct EngineStats {
    std::size_t collapse_events = 0;
    std::size_t split_events = 0;
    std::size_t speed_change_events = 0;
    std::size_t merge_events = 0;
    std::size_t stale_events = 0;
    std::size_t extent_misses = 0;
    std::size_t max_queue = 0;
    /// Vertices whose velocity actually changed at a schedule breakpoint.
    std::size_t speed_change_incidences = 0;
    std::size_t processed() const { return collapse_events + split_events + speed_change_events + merge_events; }
};

struct ProcessedEvent {
    double time = 0.0;
    EventKind kind = EventKind::EdgeCollapse;
    Point2 location;
};

struct PropagationResult {
    Skeleton skeleton;
    std::vector<std::vector<Point2>> final_wavefront; ///< wavefront at the stop time
    std::vector<ProcessedEvent> events;
    EngineStats stats;
};

/// Earliest t >= from at which the edge between `tail` and `head` reaches
/// zero length, given constant vertex velocities; nullopt if never.
std::optional<double> collapse_time(const KineticVertex& tail, const KineticVertex& head, Vector2 edge_direction,
                                    double from, double length_tol);

/// Earliest t >= from at which a vertex on the trajectory anchor + (t - t0) v
/// reaches the moving supporting line of `side`, solved piecewise over the
/// side's schedule; nullopt if it never does or starts behind the line.
std::optional<double> split_time(Point2 anchor, double anchor_time, Vector2 velocity, const EdgeSideInfo& side,
                                 double from, double tol);

/// Earliest t >= from at which two antiparallel sides meet on a common line.
std::optional<double> merge_time(const EdgeSideInfo& s, const EdgeSideInfo& t, double from, double tol);

/// One event per schedule breakpoint after time 0, for every side.
std::vector<Event> speed_change_events(const std::vector<EdgeSideInfo>& sides);

/// Runs the wavefront simulation on validated, normalized input.
PropagationResult propagate(const WeightedInput& input, const EngineOptions& options = {});

/// Normalizes schedules, merges straight vertices and propagates. Node times
/// are reported in the normalized frame; Skeleton::time_shift records the shift.
PropagationResult compute_skeleton(const WeightedInput& input, const EngineOptions& options = {});

} // namespace wss
