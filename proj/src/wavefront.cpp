#include "wss/wavefront.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace wss {

std::vector<EdgeSideInfo> build_sides(const WeightedInput& in, double eps) {
    std::vector<EdgeSideInfo> sides;
    std::vector<int> degree(in.vertices.size(), 0);
    for (std::size_t k = 0; k < in.edges.size(); ++k) {
        const auto& e = in.edges[k];
        ++degree[e.from];
        ++degree[e.to];
        const Point2 p = in.vertices[e.from];
        const Point2 q = in.vertices[e.to];
        if (e.left) {
            sides.push_back({static_cast<int>(k), Side::Left, false, -1, e.from, e.to,
                             line_from_edge(p, q, eps), *e.left});
        }
        if (e.right) {
            sides.push_back({static_cast<int>(k), Side::Right, false, -1, e.to, e.from,
                             line_from_edge(q, p, eps), *e.right});
        }
    }
    for (std::size_t k = 0; k < in.edges.size(); ++k) {
        const auto& e = in.edges[k];
        for (int terminal : {e.from, e.to}) {
            if (degree[terminal] != 1) {
                continue;
            }
            if (!e.left || !e.right) {
                throw ValidationError("edge " + std::to_string(k) +
                                      " ends in a free vertex and must propagate on both sides");
            }
            const int other = terminal == e.from ? e.to : e.from;
            const Vector2 u = normalized(in.vertices[terminal] - in.vertices[other]);
            EdgeSideInfo cap;
            cap.input_edge = static_cast<int>(k);
            cap.is_cap = true;
            cap.cap_vertex = terminal;
            cap.from_vertex = terminal;
            cap.to_vertex = terminal;
            cap.line = {u, dot(u, in.vertices[terminal])};
            cap.schedule = WeightSchedule::pointwise_max(*e.left, *e.right);
            sides.push_back(cap);
        }
    }
    return sides;
}

Point2 KineticVertex::position_at(double t, double eps) const {
    if (t < anchor_time - eps * std::max(1.0, std::abs(anchor_time))) {
        throw OutOfWindow("time precedes the vertex trajectory");
    }
    return position(t);
}

Vector2 vertex_velocity(Vector2 na, double sa, Vector2 nb, double sb, double eps) {
    const double det = cross(na, nb);
    if (std::abs(det) <= eps) {
        if (dot(na, nb) > 0.0 && sa == sb) {
            return na * sa;
        }
        throw ParallelConflict("parallel wavefront edges with conflicting speeds");
    }
    return {(sa * nb.y - sb * na.y) / det, (na.x * sb - nb.x * sa) / det};
}

bool is_reflex_turn(Vector2 dir_in, Vector2 dir_out, double eps) { return cross(dir_in, dir_out) < -eps; }

bool is_reflex_at(const Wavefront& wf, int v) {
    const auto& kv = wf.vertices[v];
    return is_reflex_turn(wf.sides[wf.edges[kv.in_edge].side].line.direction(),
                          wf.sides[wf.edges[kv.out_edge].side].line.direction());
}

Vector2 vertex_velocity(const Wavefront& wf, int edge_in, int edge_out, double t) {
    const auto& a = wf.sides[wf.edges[edge_in].side];
    const auto& b = wf.sides[wf.edges[edge_out].side];
    const double sa = a.speed_at(t);
    const double sb = b.speed_at(t);
    if (std::abs(cross(a.line.normal, b.line.normal)) <= 1e-12) {
        if (dot(a.line.normal, b.line.normal) > 0.0) {
            // Straight vertex between collinear neighbours; with unequal speeds
            // the mean keeps the vertex between the two lines.
            return a.line.normal * (0.5 * (sa + sb));
        }
        return {}; // antiparallel: resolved by the engine as a merge
    }
    return vertex_velocity(a.line.normal, sa, b.line.normal, sb);
}

Wavefront initial_wavefront(const WeightedInput& in, double eps) {
    Wavefront wf;
    wf.sides = build_sides(in, eps);

    std::map<std::pair<int, Side>, int> half_side;
    std::vector<int> cap_side(in.vertices.size(), -1);
    for (std::size_t s = 0; s < wf.sides.size(); ++s) {
        const auto& info = wf.sides[s];
        if (info.is_cap) {
            cap_side[info.cap_vertex] = static_cast<int>(s);
        } else {
            half_side[{info.input_edge, info.side}] = static_cast<int>(s);
        }
    }
    // Incident edges of every vertex, counterclockwise by direction angle.
    std::vector<std::vector<int>> incident(in.vertices.size());
    for (std::size_t k = 0; k < in.edges.size(); ++k) {
        incident[in.edges[k].from].push_back(static_cast<int>(k));
        incident[in.edges[k].to].push_back(static_cast<int>(k));
    }
    auto other_end = [&](int k, int v) { return in.edges[k].from == v ? in.edges[k].to : in.edges[k].from; };
    for (std::size_t v = 0; v < in.vertices.size(); ++v) {
        auto& list = incident[v];
        std::sort(list.begin(), list.end(), [&](int a, int b) {
            const Vector2 da = in.vertices[other_end(a, static_cast<int>(v))] - in.vertices[v];
            const Vector2 db = in.vertices[other_end(b, static_cast<int>(v))] - in.vertices[v];
            return std::atan2(da.y, da.x) < std::atan2(db.y, db.x);
        });
    }
    auto outgoing = [&](int k, int v) {
        const Side s = in.edges[k].from == v ? Side::Left : Side::Right;
        auto it = half_side.find({k, s});
        if (it == half_side.end()) {
            throw ValidationError("edge " + std::to_string(k) +
                                  " has no propagating side facing the region it bounds");
        }
        return it->second;
    };
    auto next_side = [&](int s) {
        const auto& info = wf.sides[s];
        if (info.is_cap) {
            return outgoing(info.input_edge, info.cap_vertex);
        }
        const int b = info.to_vertex;
        const auto& list = incident[b];
        if (list.size() == 1) {
            return cap_side[b];
        }
        const auto pos = std::find(list.begin(), list.end(), info.input_edge) - list.begin();
        const int k = list[(pos + list.size() - 1) % list.size()];
        return outgoing(k, b);
    };

    std::vector<bool> visited(wf.sides.size(), false);
    for (std::size_t s0 = 0; s0 < wf.sides.size(); ++s0) {
        if (visited[s0] || wf.sides[s0].is_cap) {
            continue;
        }
        std::vector<int> cycle;
        int s = static_cast<int>(s0);
        while (!visited[s]) {
            visited[s] = true;
            cycle.push_back(s);
            s = next_side(s);
        }
        if (s != static_cast<int>(s0)) {
            throw ValidationError("wavefront boundary does not close");
        }
        const int first_edge = static_cast<int>(wf.edges.size());
        for (int side : cycle) {
            wf.edges.push_back({side, -1, -1, true, 0.0, 0});
        }
        const int m = static_cast<int>(cycle.size());
        for (int i = 0; i < m; ++i) {
            const int ein = first_edge + i;
            const int eout = first_edge + (i + 1) % m;
            const int at_vertex = wf.sides[cycle[i]].to_vertex;
            KineticVertex kv;
            kv.anchor = in.vertices[at_vertex];
            kv.in_edge = ein;
            kv.out_edge = eout;
            kv.node = at_vertex;
            const int id = static_cast<int>(wf.vertices.size());
            wf.vertices.push_back(kv);
            wf.edges[ein].end = id;
            wf.edges[eout].start = id;
        }
    }
    for (std::size_t v = 0; v < wf.vertices.size(); ++v) {
        auto& kv = wf.vertices[v];
        kv.velocity = vertex_velocity(wf, kv.in_edge, kv.out_edge, 0.0);
        kv.reflex = is_reflex_at(wf, static_cast<int>(v));
    }
    return wf;
}

std::vector<std::vector<int>> Wavefront::chains() const {
    std::vector<std::vector<int>> out;
    std::vector<bool> seen(edges.size(), false);
    for (std::size_t e0 = 0; e0 < edges.size(); ++e0) {
        if (!edges[e0].alive || seen[e0]) {
            continue;
        }
        std::vector<int> chain;
        int e = static_cast<int>(e0);
        while (e >= 0 && !seen[e]) {
            seen[e] = true;
            const int v = edges[e].end;
            if (v < 0) {
                break;
            }
            chain.push_back(v);
            e = vertices[v].out_edge;
        }
        out.push_back(std::move(chain));
    }
    return out;
}

std::vector<std::vector<Point2>> Wavefront::polygons_at(double t) const {
    std::vector<std::vector<Point2>> out;
    for (const auto& chain : chains()) {
        std::vector<Point2> poly;
        for (int v : chain) {
            poly.push_back(vertices[v].position(t));
        }
        out.push_back(std::move(poly));
    }
    return out;
}

std::size_t Wavefront::alive_vertex_count() const {
    return static_cast<std::size_t>(
        std::count_if(vertices.begin(), vertices.end(), [](const KineticVertex& v) { return v.alive; }));
}

} // namespace wss
