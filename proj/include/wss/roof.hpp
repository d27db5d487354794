#pragma once

#include "wss/skeleton.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace wss {

struct Point3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;
    bool operator==(const Point3&) const = default;
};

/// Planar roof polygon. Heights are in the input's own time frame.
struct RoofFacet {
    int face = -1;          ///< source face (edge side); -1 for flat caps
    int piece = -1;         ///< schedule piece of the source side
    double speed = 0.0;     ///< propagation speed of the source side on this facet
    bool vertical = false;  ///< the side was at rest: a wall in the plane of its edge
    bool cap = false;       ///< horizontal cap at the stop time
    std::vector<Point3> vertices;
    Point3 normal; ///< Newell normal (not normalized)
};

struct RoofMesh {
    std::vector<RoofFacet> facets;
    std::vector<std::vector<Point2>> footprint;
    double scale = 1.0;
};

struct RoofOptions {
    bool cap_flat = false; ///< close a roof cut at a stop time with flat caps
};

/// Lifts every face to height = arrival time and cuts it at the breakpoints of
/// its schedule, so each facet has one constant slope.
RoofMesh build_roof(const Skeleton& skeleton, const RoofOptions& options = {});

/// Wavefront OBJ text; vertices are deduplicated, polygons are emitted as-is
/// or as triangles.
std::string export_obj(const RoofMesh& mesh, bool triangulate = false);

/// Per-facet attributes, in OBJ face order (facets, or their triangles).
std::string facets_to_json(const RoofMesh& mesh, bool triangulate = false);

/// Triangles of a planar facet polygon by ear clipping.
std::vector<std::array<int, 3>> triangulate_facet(const RoofFacet& facet);

/// Height of the sloped roof above p; nullopt outside its projection.
std::optional<double> roof_height(const RoofMesh& mesh, Point2 p);

/// |grad z| of a non-vertical facet.
double facet_gradient(const RoofFacet& facet);

struct MonotoneReport {
    int samples = 0;
    int violations = 0; ///< sample points covered by zero or several sloped facets
};

/// Samples random points of the footprint and checks that exactly one sloped
/// facet lies above each.
MonotoneReport z_monotone_check(const RoofMesh& mesh, int samples, std::uint64_t seed);

struct RaindropReport {
    int descents = 0;
    int failures = 0; ///< descents that stalled inside the footprint
};

/// Steepest-descent walks from random footprint points; every walk must
/// reach the footprint boundary while its height strictly decreases.
RaindropReport raindrop_check(const RoofMesh& mesh, int descents, std::uint64_t seed);

} // namespace wss
