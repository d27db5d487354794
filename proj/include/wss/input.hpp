#pragma once

#include "wss/geometry.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace wss {

class ParseError : public Error {
public:
    using Error::Error;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class CollinearWeightMismatch : public ValidationError {
public:
    using ValidationError::ValidationError;
};

struct SchedulePiece {
    double start = 0.0;
    double speed = 0.0;
    bool operator==(const SchedulePiece&) const = default;
};

/// Piecewise-constant, nonnegative speed function of one edge side.
///
/// Piece i applies on [start_i, start_{i+1}); the last piece extends to
/// infinity. Before the first piece the side is at rest. After
/// normalization the first piece starts at 0 and adjacent pieces carry
/// distinct speeds.
class WeightSchedule {
public:
    WeightSchedule() : pieces_{{0.0, 1.0}} {}
    explicit WeightSchedule(std::vector<SchedulePiece> pieces);

    /// Additive weight delta (start delay) and multiplicative weight sigma.
    static WeightSchedule from_weights(double delta, double sigma);
    static WeightSchedule constant(double speed) { return WeightSchedule({{0.0, speed}}); }

    const std::vector<SchedulePiece>& pieces() const { return pieces_; }
    double first_start() const { return pieces_.front().start; }

    /// Speed in effect just after time t (right-continuous).
    double speed_at(double t) const;
    /// Index of the piece in effect just after t, or -1 before the first piece.
    int piece_index(double t) const;
    /// Distance travelled since time 0: the integral of the speed.
    double displacement(double t) const;
    /// Earliest t >= 0 with displacement(t) >= d; +inf if never reached.
    double inverse_displacement(double d) const;
    /// Earliest start time of a piece with positive speed; +inf if none.
    double first_moving_time() const;
    bool eventually_moves() const { return pieces_.back().speed > 0.0; }
    /// Breakpoints strictly after time 0.
    std::vector<double> breakpoints() const;

    WeightSchedule shifted(double dt) const;
    /// Prepends a rest piece at 0 when needed and merges equal speeds.
    WeightSchedule normalized() const;

    static WeightSchedule pointwise_max(const WeightSchedule& a, const WeightSchedule& b);

    bool operator==(const WeightSchedule&) const = default;

private:
    std::vector<SchedulePiece> pieces_;
};

enum class Side { Left, Right };

struct InputEdge {
    int from = 0;
    int to = 0;
    std::optional<WeightSchedule> left;
    std::optional<WeightSchedule> right;
    bool operator==(const InputEdge&) const = default;
};

enum class InputKind { SimplePolygon, PolygonWithHoles, Pslg };

struct WeightedInput {
    std::vector<Point2> vertices;
    std::vector<InputEdge> edges;
    InputKind kind = InputKind::SimplePolygon;
    /// Edge indices of the enclosing loop of a PSLG, when one is supplied.
    std::vector<int> boundary;

    bool is_polygon() const { return kind != InputKind::Pslg; }
    /// Largest coordinate magnitude, at least 1.
    double scale() const;
    bool operator==(const WeightedInput&) const = default;
};

WeightedInput parse_input(std::string_view json_text, double eps = 1e-9);
std::string serialize_input(const WeightedInput& input);

/// Structural checks: indices, duplicate vertices, crossings, loop shape.
/// Also sets the polygon kind from the loop count.
void validate_input(WeightedInput& input, double eps = 1e-9);

struct NormalizedInput {
    WeightedInput input;
    double time_shift = 0.0;
};

/// Shifts every schedule by the most negative start time (if any) so that
/// propagation begins at 0, and normalizes each schedule.
NormalizedInput normalize_schedules(const WeightedInput& input);

/// Removes straight (180 degree) degree-2 vertices whose two edges carry the
/// same schedules on corresponding sides.
WeightedInput merge_collinear(const WeightedInput& input, double eps = 1e-9);

/// Signed area of a closed vertex loop (positive for counterclockwise).
double loop_area(const std::vector<Point2>& loop);

/// Even-odd point containment against a set of closed loops.
bool point_in_loops(Point2 p, const std::vector<std::vector<Point2>>& loops);

/// Closed loops formed by the one-sided edges: the footprint of a polygon or
/// the enclosing loop of a PSLG.
std::vector<std::vector<Point2>> footprint_loops(const WeightedInput& input);

} // namespace wss
