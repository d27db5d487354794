#pragma once

#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>

namespace wss {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class DegenerateEdge : public Error {
public:
    using Error::Error;
};

struct Vector2 {
    double x = 0.0;
    double y = 0.0;

    constexpr Vector2 operator+(Vector2 o) const { return {x + o.x, y + o.y}; }
    constexpr Vector2 operator-(Vector2 o) const { return {x - o.x, y - o.y}; }
    constexpr Vector2 operator-() const { return {-x, -y}; }
    constexpr Vector2 operator*(double s) const { return {x * s, y * s}; }
    constexpr Vector2 operator/(double s) const { return {x / s, y / s}; }
    constexpr bool operator==(const Vector2&) const = default;
};

constexpr Vector2 operator*(double s, Vector2 v) { return v * s; }

/// Points and vectors share one representation; the alias documents intent.
using Point2 = Vector2;

constexpr double dot(Vector2 a, Vector2 b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(Vector2 a, Vector2 b) { return a.x * b.y - a.y * b.x; }
inline double norm(Vector2 v) { return std::hypot(v.x, v.y); }
inline double distance(Point2 a, Point2 b) { return norm(b - a); }

/// Left-hand perpendicular (counterclockwise rotation by 90 degrees).
constexpr Vector2 perp_left(Vector2 v) { return {-v.y, v.x}; }
/// Right-hand perpendicular (clockwise rotation by 90 degrees).
constexpr Vector2 perp_right(Vector2 v) { return {v.y, -v.x}; }

inline Vector2 normalized(Vector2 v) {
    const double n = norm(v);
    return n > 0.0 ? v / n : Vector2{};
}

inline bool is_finite(Point2 p) { return std::isfinite(p.x) && std::isfinite(p.y); }

/// Library-wide tolerance. Comparisons against coordinates are scaled by the
/// magnitude of the data involved.
struct Tolerance {
    double geom = 1e-9;
    double time = 1e-9;
};

enum class Orientation { Left, Right, Collinear };

inline double signed_area2(Point2 a, Point2 b, Point2 c) { return cross(b - a, c - a); }

Orientation orientation(Point2 a, Point2 b, Point2 c, double eps = 1e-9);

/// Oriented supporting line {p : <normal, p> = offset}. The normal is the
/// inward (left) unit normal; travel direction is the normal rotated by -90.
struct DirectedLine {
    Vector2 normal{0.0, 1.0};
    double offset = 0.0;

    Vector2 direction() const { return perp_right(normal); }
    /// The line translated by `distance` along its normal.
    DirectedLine moved(double distance) const { return {normal, offset + distance}; }
};

/// Supporting line of p->q with the normal on the left of the direction.
DirectedLine line_from_edge(Point2 p, Point2 q, double eps = 1e-9);

/// Intersection of two lines, or nullopt when they are parallel.
std::optional<Point2> intersect_lines(const DirectedLine& l1, const DirectedLine& l2,
                                      double eps = 1e-9);

/// Positive on the side the normal points to.
inline double signed_distance(const DirectedLine& l, Point2 p) {
    return dot(l.normal, p) - l.offset;
}

/// Closest distance from p to the segment [a, b].
double point_segment_distance(Point2 p, Point2 a, Point2 b);

/// True when the closed segments [a,b] and [c,d] share a point.
bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d, double eps);

/// True when the segments cross at a single point interior to both.
bool segments_cross_properly(Point2 a, Point2 b, Point2 c, Point2 d, double eps);

} // namespace wss
