#include "wss/geometry.hpp"

#include <algorithm>

namespace wss {

Orientation orientation(Point2 a, Point2 b, Point2 c, double eps) {
    const double scale = std::max({1.0, std::abs(a.x), std::abs(a.y), std::abs(b.x),
                                   std::abs(b.y), std::abs(c.x), std::abs(c.y)});
    const double area = signed_area2(a, b, c);
    if (std::abs(area) <= eps * scale * scale) {
        return Orientation::Collinear;
    }
    return area > 0.0 ? Orientation::Left : Orientation::Right;
}

DirectedLine line_from_edge(Point2 p, Point2 q, double eps) {
    const double scale = std::max({1.0, std::abs(p.x), std::abs(p.y), std::abs(q.x), std::abs(q.y)});
    const Vector2 d = q - p;
    const double len = norm(d);
    if (len <= eps * scale) {
        throw DegenerateEdge("zero-length edge");
    }
    const Vector2 n = perp_left(d / len);
    return {n, dot(n, p)};
}

std::optional<Point2> intersect_lines(const DirectedLine& l1, const DirectedLine& l2, double eps) {
    const double det = cross(l1.normal, l2.normal);
    if (std::abs(det) <= eps) {
        return std::nullopt;
    }
    // Cramer's rule on [n1; n2] p = [c1; c2].
    return Point2{(l1.offset * l2.normal.y - l2.offset * l1.normal.y) / det,
                  (l1.normal.x * l2.offset - l2.normal.x * l1.offset) / det};
}

double point_segment_distance(Point2 p, Point2 a, Point2 b) {
    const Vector2 ab = b - a;
    const double len2 = dot(ab, ab);
    if (len2 == 0.0) {
        return distance(p, a);
    }
    const double s = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    return distance(p, a + ab * s);
}

bool segments_intersect(Point2 a, Point2 b, Point2 c, Point2 d, double eps) {
    if (segments_cross_properly(a, b, c, d, eps)) {
        return true;
    }
    const double scale = std::max({1.0, norm(a), norm(b), norm(c), norm(d)});
    const double tol = eps * scale;
    return point_segment_distance(a, c, d) <= tol || point_segment_distance(b, c, d) <= tol ||
           point_segment_distance(c, a, b) <= tol || point_segment_distance(d, a, b) <= tol;
}

bool segments_cross_properly(Point2 a, Point2 b, Point2 c, Point2 d, double eps) {
    const Orientation o1 = orientation(a, b, c, eps);
    const Orientation o2 = orientation(a, b, d, eps);
    const Orientation o3 = orientation(c, d, a, eps);
    const Orientation o4 = orientation(c, d, b, eps);
    if (o1 == Orientation::Collinear || o2 == Orientation::Collinear ||
        o3 == Orientation::Collinear || o4 == Orientation::Collinear) {
        return false;
    }
    return o1 != o2 && o3 != o4;
}

} // namespace wss
