#include "wss/skeleton.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace wss {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Angle of `dir`, measured clockwise from `ref`, in (0, 2pi].
double clockwise_angle(Vector2 ref, Vector2 dir) {
    double a = std::atan2(cross(dir, ref), dot(dir, ref));
    if (a <= 0.0) {
        a += 2.0 * kPi;
    }
    return a;
}

struct Crossing {
    Point2 p;
    double along = 0.0;
    int arc = -1;
};

} // namespace

void recount_degrees(Skeleton& sk) {
    for (auto& n : sk.nodes) {
        n.degree = 0;
    }
    for (const auto& a : sk.arcs) {
        if (a.start != a.end) {
            ++sk.nodes[a.start].degree;
            ++sk.nodes[a.end].degree;
        }
    }
}

void assemble_faces(Skeleton& sk, const std::vector<BoundaryPiece>& extra) {
    sk.faces.assign(sk.sides.size(), {});
    for (std::size_t s = 0; s < sk.faces.size(); ++s) {
        sk.faces[s].side = static_cast<int>(s);
    }
    sk.pieces.clear();
    for (const auto& p : extra) {
        if (p.from != p.to && p.face >= 0) {
            sk.pieces.push_back(p);
        }
    }
    for (std::size_t i = 0; i < sk.arcs.size(); ++i) {
        const auto& a = sk.arcs[i];
        if (a.start == a.end) {
            continue;
        }
        if (a.left_face >= 0) {
            sk.pieces.push_back({a.left_face, a.start, a.end, static_cast<int>(i)});
        }
        if (a.right_face >= 0) {
            sk.pieces.push_back({a.right_face, a.end, a.start, static_cast<int>(i)});
        }
    }

    std::vector<std::vector<int>> by_face(sk.faces.size());
    for (std::size_t i = 0; i < sk.pieces.size(); ++i) {
        by_face[sk.pieces[i].face].push_back(static_cast<int>(i));
    }
    for (std::size_t f = 0; f < sk.faces.size(); ++f) {
        std::multimap<int, int> outgoing;
        for (int i : by_face[f]) {
            outgoing.emplace(sk.pieces[i].from, i);
        }
        std::vector<bool> used(sk.pieces.size(), false);
        auto& face = sk.faces[f];
        for (int first : by_face[f]) {
            if (used[first]) {
                continue;
            }
            std::vector<int> cycle;
            int cur = first;
            while (cur >= 0 && !used[cur]) {
                used[cur] = true;
                const auto& piece = sk.pieces[cur];
                cycle.push_back(piece.from);
                if (piece.arc >= 0) {
                    face.arcs.push_back(piece.arc);
                }
                const Vector2 back = sk.nodes[piece.from].position - sk.nodes[piece.to].position;
                int next = -1;
                double best = 1e300;
                auto [lo, hi] = outgoing.equal_range(piece.to);
                for (auto it = lo; it != hi; ++it) {
                    if (used[it->second]) {
                        continue;
                    }
                    const auto& cand = sk.pieces[it->second];
                    const Vector2 dir = sk.nodes[cand.to].position - sk.nodes[cand.from].position;
                    const double angle = (norm(dir) == 0.0 || norm(back) == 0.0) ? 0.0 : clockwise_angle(back, dir);
                    if (angle < best) {
                        best = angle;
                        next = it->second;
                    }
                }
                cur = next;
            }
            face.cycles.push_back(std::move(cycle));
        }
    }
}

namespace {

std::vector<std::vector<Point2>> stop_loops(const Skeleton& sk) {
    // The final wavefront: top pieces run against the wavefront direction.
    std::map<int, int> next;
    for (const auto& p : sk.pieces) {
        if (p.arc < 0 && sk.nodes[p.from].kind == NodeKind::Stop) {
            next[p.to] = p.from;
        }
    }
    std::vector<std::vector<Point2>> loops;
    std::map<int, bool> seen;
    for (const auto& [start, unused] : next) {
        if (seen[start]) {
            continue;
        }
        std::vector<Point2> loop;
        int cur = start;
        while (!seen[cur]) {
            seen[cur] = true;
            loop.push_back(sk.nodes[cur].position);
            auto it = next.find(cur);
            if (it == next.end()) {
                break;
            }
            cur = it->second;
        }
        loops.push_back(std::move(loop));
    }
    return loops;
}

std::vector<std::vector<Point2>> level_set(const Skeleton& sk, double t) {
    const double tol = 1e-9 * sk.scale;
    std::vector<std::vector<int>> by_face(sk.faces.size());
    for (std::size_t i = 0; i < sk.pieces.size(); ++i) {
        by_face[sk.pieces[i].face].push_back(static_cast<int>(i));
    }
    struct Fragment {
        Point2 from;
        int from_arc;
        int to_arc;
    };
    std::vector<Fragment> fragments;
    for (std::size_t f = 0; f < sk.faces.size(); ++f) {
        const Vector2 d = sk.sides[f].line.direction();
        std::vector<Crossing> hits;
        for (int i : by_face[f]) {
            const auto& piece = sk.pieces[i];
            // Use the arc's own orientation so that both faces get the same point.
            int a = piece.from;
            int b = piece.to;
            if (piece.arc >= 0) {
                a = sk.arcs[piece.arc].start;
                b = sk.arcs[piece.arc].end;
            }
            const auto& na = sk.nodes[a];
            const auto& nb = sk.nodes[b];
            const double zmin = std::min(na.time, nb.time);
            const double zmax = std::max(na.time, nb.time);
            if (!(zmin < t && t <= zmax)) {
                continue;
            }
            const double u = (t - na.time) / (nb.time - na.time);
            const Point2 p = na.position + (nb.position - na.position) * u;
            hits.push_back({p, dot(p, d), piece.arc});
        }
        std::sort(hits.begin(), hits.end(), [](const Crossing& l, const Crossing& r) { return l.along < r.along; });
        for (std::size_t k = 0; k + 1 < hits.size(); k += 2) {
            fragments.push_back({hits[k].p, hits[k].arc, hits[k + 1].arc});
        }
    }
    std::multimap<int, int> starting;
    for (std::size_t i = 0; i < fragments.size(); ++i) {
        starting.emplace(fragments[i].from_arc, static_cast<int>(i));
    }
    std::vector<bool> used(fragments.size(), false);
    std::vector<std::vector<Point2>> loops;
    for (std::size_t i0 = 0; i0 < fragments.size(); ++i0) {
        if (used[i0]) {
            continue;
        }
        std::vector<Point2> loop;
        int cur = static_cast<int>(i0);
        bool closed = false;
        while (true) {
            used[cur] = true;
            const Point2 p = fragments[cur].from;
            if (loop.empty() || distance(loop.back(), p) > tol) {
                loop.push_back(p);
            }
            int next = -1;
            auto [lo, hi] = starting.equal_range(fragments[cur].to_arc);
            for (auto it = lo; it != hi; ++it) {
                if (it->second == static_cast<int>(i0)) {
                    closed = true;
                }
                if (!used[it->second]) {
                    next = it->second;
                }
            }
            if (closed || next < 0) {
                break;
            }
            cur = next;
        }
        while (loop.size() > 1 && distance(loop.front(), loop.back()) <= tol) {
            loop.pop_back();
        }
        if (closed && loop.size() >= 3 && std::abs(loop_area(loop)) > tol * sk.scale) {
            loops.push_back(std::move(loop));
        }
    }
    return loops;
}

} // namespace

std::vector<std::vector<std::vector<Point2>>> extract_offsets(const Skeleton& sk, const std::vector<double>& times) {
    std::vector<std::vector<std::vector<Point2>>> out;
    const double tol = 1e-12 * std::max(1.0, sk.scale);
    for (double t0 : times) {
        const double t = t0 + sk.time_shift;
        if (t <= 0.0) {
            out.push_back(sk.initial_wavefront);
        } else if (sk.stop_time && t > *sk.stop_time + tol) {
            out.emplace_back();
        } else if (sk.stop_time && t >= *sk.stop_time - tol) {
            out.push_back(stop_loops(sk));
        } else {
            out.push_back(level_set(sk, t));
        }
    }
    return out;
}

int connectivity(const Skeleton& sk) {
    std::vector<int> parent(sk.nodes.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    int components = static_cast<int>(sk.nodes.size());
    for (const auto& a : sk.arcs) {
        const int ra = find(a.start);
        const int rb = find(a.end);
        if (ra != rb) {
            parent[ra] = rb;
            --components;
        }
    }
    return components;
}

CrossingReport check_crossing_free(const Skeleton& sk, double eps) {
    CrossingReport report;
    const double tol = eps * sk.scale;
    for (std::size_t i = 0; i < sk.arcs.size(); ++i) {
        const Point2 a = sk.nodes[sk.arcs[i].start].position;
        const Point2 b = sk.nodes[sk.arcs[i].end].position;
        if (distance(a, b) <= tol) {
            continue;
        }
        for (std::size_t j = i + 1; j < sk.arcs.size(); ++j) {
            const Point2 c = sk.nodes[sk.arcs[j].start].position;
            const Point2 d = sk.nodes[sk.arcs[j].end].position;
            if (distance(c, d) <= tol) {
                continue;
            }
            if (segments_cross_properly(a, b, c, d, eps)) {
                ++report.violations;
                report.violating_pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
                continue;
            }
            const bool collinear = orientation(a, b, c, eps) == Orientation::Collinear &&
                                   orientation(a, b, d, eps) == Orientation::Collinear;
            if (collinear) {
                const Vector2 u = normalized(b - a);
                const double lo = std::max(0.0, std::min(dot(c - a, u), dot(d - a, u)));
                const double hi = std::min(distance(a, b), std::max(dot(c - a, u), dot(d - a, u)));
                if (hi - lo > tol) {
                    ++report.benign_overlaps;
                }
            }
        }
    }
    return report;
}

std::vector<FaceMonotonicity> face_monotone_report(const Skeleton& sk, double eps) {
    std::vector<FaceMonotonicity> out;
    const double tol = eps * sk.scale;
    for (std::size_t f = 0; f < sk.faces.size(); ++f) {
        FaceMonotonicity m;
        m.face = static_cast<int>(f);
        const Vector2 d = sk.sides[f].line.direction();
        for (const auto& cycle : sk.faces[f].cycles) {
            std::vector<Point2> poly;
            for (int n : cycle) {
                poly.push_back(sk.nodes[n].position);
            }
            if (std::abs(loop_area(poly)) <= tol * sk.scale) {
                continue;
            }
            m.has_interior = true;
            // Count direction reversals of the projection onto d.
            std::vector<int> signs;
            for (std::size_t i = 0; i < poly.size(); ++i) {
                const double step = dot(poly[(i + 1) % poly.size()] - poly[i], d);
                if (std::abs(step) > tol) {
                    signs.push_back(step > 0 ? 1 : -1);
                }
            }
            int changes = 0;
            for (std::size_t i = 0; i < signs.size(); ++i) {
                if (signs[i] != signs[(i + 1) % signs.size()]) {
                    ++changes;
                }
            }
            if (changes > 2) {
                m.monotone = false;
            }
        }
        out.push_back(m);
    }
    return out;
}

std::string skeleton_to_json(const Skeleton& sk) {
    nlohmann::json j;
    j["nodes"] = nlohmann::json::array();
    for (const auto& n : sk.nodes) {
        j["nodes"].push_back({n.position.x, n.position.y, n.time - sk.time_shift});
    }
    j["arcs"] = nlohmann::json::array();
    for (const auto& a : sk.arcs) {
        j["arcs"].push_back({a.start, a.end, a.left_face, a.right_face});
    }
    j["faces"] = nlohmann::json::array();
    for (const auto& f : sk.faces) {
        j["faces"].push_back({{"side", f.side}, {"arcs", f.arcs}});
    }
    return j.dump() + "\n";
}

std::string offsets_to_json(const std::vector<double>& times,
                            const std::vector<std::vector<std::vector<Point2>>>& offsets) {
    nlohmann::json j = nlohmann::json::array();
    for (std::size_t i = 0; i < times.size(); ++i) {
        nlohmann::json polys = nlohmann::json::array();
        for (const auto& loop : offsets[i]) {
            nlohmann::json pts = nlohmann::json::array();
            for (const auto& p : loop) {
                pts.push_back({p.x, p.y});
            }
            polys.push_back(std::move(pts));
        }
        j.push_back({{"t", times[i]}, {"polygons", std::move(polys)}});
    }
    return j.dump() + "\n";
}

} // namespace wss
