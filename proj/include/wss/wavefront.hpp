#pragma once

#include "wss/geometry.hpp"
#include "wss/input.hpp"

#include <cstdint>
#include <vector>

namespace wss {

class ParallelConflict : public Error {
public:
    using Error::Error;
};

class OutOfWindow : public Error {
public:
    using Error::Error;
};

/// One propagating edge side: an input edge side, or the implicit cap edge
/// that closes the wavefront around a degree-1 PSLG vertex.
struct EdgeSideInfo {
    int input_edge = -1;
    Side side = Side::Left;
    bool is_cap = false;
    int cap_vertex = -1; ///< terminal input vertex for caps
    int from_vertex = -1; ///< input vertex at the start of the side's direction
    int to_vertex = -1;
    DirectedLine line;    ///< supporting line at time 0, normal toward propagation
    WeightSchedule schedule;

    DirectedLine moved_line(double t) const { return line.moved(schedule.displacement(t)); }
    double speed_at(double t) const { return schedule.speed_at(t); }
};

/// Sides of every input edge (left then right, in edge order) followed by the
/// cap sides of degree-1 vertices.
std::vector<EdgeSideInfo> build_sides(const WeightedInput& input, double eps = 1e-9);

struct KineticVertex {
    Point2 anchor;
    double anchor_time = 0.0;
    Vector2 velocity;
    int in_edge = -1;  ///< wavefront edge ending here
    int out_edge = -1; ///< wavefront edge starting here
    int node = -1;     ///< skeleton node where the current trajectory piece starts
    bool alive = true;
    bool reflex = false;
    std::uint32_t stamp = 0;

    Point2 position(double t) const { return anchor + velocity * (t - anchor_time); }
    /// Position with a validity check: t may not precede the anchor time.
    Point2 position_at(double t, double eps = 1e-9) const;
};

struct WavefrontEdge {
    int side = -1;
    int start = -1; ///< vertex at the tail (unswept region on the left)
    int end = -1;
    bool alive = true;
    double alive_since = 0.0;
    std::uint32_t stamp = 0;
};

/// Doubly linked closed chains of kinetic vertices and wavefront edges.
struct Wavefront {
    std::vector<EdgeSideInfo> sides;
    std::vector<KineticVertex> vertices;
    std::vector<WavefrontEdge> edges;
    double current_time = 0.0;

    /// Alive vertex ids of every chain, in chain order.
    std::vector<std::vector<int>> chains() const;
    std::vector<std::vector<Point2>> polygons_at(double t) const;
    std::size_t alive_vertex_count() const;
};

/// Wavefront at time 0: one closed chain per boundary cycle of the input.
/// Vertex node ids are the input vertex indices. Velocities are those valid
/// just after time 0.
Wavefront initial_wavefront(const WeightedInput& input, double eps = 1e-9);

/// Velocity v with <n_a, v> = speed_a and <n_b, v> = speed_b.
/// Parallel normals with equal speeds yield speed * n; anything else that is
/// parallel raises ParallelConflict.
Vector2 vertex_velocity(Vector2 normal_a, double speed_a, Vector2 normal_b, double speed_b,
                        double eps = 1e-12);

/// Reflex test from the directions of the incoming and outgoing edge: the
/// unswept region lies on the left, so a right turn is reflex.
bool is_reflex_turn(Vector2 dir_in, Vector2 dir_out, double eps = 1e-12);

/// Reflex test of a vertex in a wavefront.
bool is_reflex_at(const Wavefront& wf, int vertex);

/// Velocity of the vertex between two wavefront edges for the speeds in effect
/// just after time t.
Vector2 vertex_velocity(const Wavefront& wf, int edge_in, int edge_out, double t);

} // namespace wss
