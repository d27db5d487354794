#pragma once

#include "wss/geometry.hpp"
#include "wss/input.hpp"
#include "wss/wavefront.hpp"

#include <optional>
#include <string>
#include <vector>

namespace wss {

enum class NodeKind { Input, Event, SpeedChange, Stop };

struct SkeletonNode {
    Point2 position;
    double time = 0.0; ///< birth time; the height in the roof model
    int degree = 0;
    NodeKind kind = NodeKind::Event;
    int trigger_side = -1; ///< side whose speed change created the node
};

/// Straight arc between two nodes. Looking from start to end, the face of
/// `left_face` lies to the left.
struct SkeletonArc {
    int start = -1;
    int end = -1;
    int left_face = -1;
    int right_face = -1;
};

/// Directed boundary piece of a face, oriented with the face on its left
/// (in the xy projection). `arc` is -1 for input edges and for the final
/// wavefront at a stop time.
struct BoundaryPiece {
    int face = -1;
    int from = -1;
    int to = -1;
    int arc = -1;
};

struct SkeletonFace {
    int side = -1;
    std::vector<int> arcs;                ///< arcs bounding the face, in cycle order
    std::vector<std::vector<int>> cycles; ///< closed node cycles, face on the left
};

struct Skeleton {
    std::vector<SkeletonNode> nodes;
    std::vector<SkeletonArc> arcs;
    std::vector<SkeletonFace> faces; ///< one per propagating side, indexed by side id
    std::vector<EdgeSideInfo> sides;
    std::vector<BoundaryPiece> pieces;
    std::vector<std::vector<Point2>> initial_wavefront;
    std::optional<double> stop_time;
    /// Normalization shift: original-frame time = node time - time_shift.
    double time_shift = 0.0;
    double scale = 1.0;
    InputKind kind = InputKind::SimplePolygon;
};

/// Builds the face boundary pieces and cycles from the arcs. The engine
/// calls this; it is exposed for skeletons assembled by hand.
void assemble_faces(Skeleton& skeleton, const std::vector<BoundaryPiece>& extra_pieces);

/// Mitered offsets at each requested time: the level sets of the lifted
/// faces, stitched into closed loops across arcs.
std::vector<std::vector<std::vector<Point2>>> extract_offsets(const Skeleton& skeleton,
                                                              const std::vector<double>& times);

/// Connected components of the node/arc graph (isolated nodes included).
int connectivity(const Skeleton& skeleton);

struct CrossingReport {
    int violations = 0;      ///< transversal crossings
    int benign_overlaps = 0; ///< collinear overlaps (backtracking arcs)
    std::vector<std::pair<int, int>> violating_pairs;
};

CrossingReport check_crossing_free(const Skeleton& skeleton, double eps = 1e-9);

struct FaceMonotonicity {
    int face = -1;
    bool has_interior = false;
    bool monotone = true;
};

/// Monotonicity of each face with respect to the direction of its source edge.
std::vector<FaceMonotonicity> face_monotone_report(const Skeleton& skeleton, double eps = 1e-9);

std::string skeleton_to_json(const Skeleton& skeleton);
std::string offsets_to_json(const std::vector<double>& times,
                            const std::vector<std::vector<std::vector<Point2>>>& offsets);

/// Recomputes node degrees from the arcs (self loops ignored).
void recount_degrees(Skeleton& skeleton);

} // namespace wss
