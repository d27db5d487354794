#include "wss/input.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>

namespace wss {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string at(std::string_view path, std::size_t i) {
    return std::string(path) + "[" + std::to_string(i) + "]";
}

double number_field(const json& j, const std::string& path) {
    if (!j.is_number()) {
        throw ParseError(path + ": expected a number");
    }
    const double v = j.get<double>();
    if (!std::isfinite(v)) {
        throw ParseError(path + ": value is not finite");
    }
    return v;
}

WeightSchedule parse_weight(const json& w, const std::string& path) {
    if (!w.is_object()) {
        throw ParseError(path + ": expected an object");
    }
    if (w.contains("schedule")) {
        if (w.contains("delta") || w.contains("sigma")) {
            throw ParseError(path + ": 'schedule' cannot be combined with delta/sigma");
        }
        const json& s = w.at("schedule");
        if (!s.is_array() || s.empty()) {
            throw ParseError(path + ".schedule: expected a non-empty array");
        }
        std::vector<SchedulePiece> pieces;
        for (std::size_t i = 0; i < s.size(); ++i) {
            const std::string p = at(path + ".schedule", i);
            if (!s[i].is_array() || s[i].size() != 2) {
                throw ParseError(p + ": expected [time, speed]");
            }
            pieces.push_back({number_field(s[i][0], p + "[0]"), number_field(s[i][1], p + "[1]")});
        }
        try {
            return WeightSchedule(std::move(pieces));
        } catch (const ValidationError& e) {
            throw ValidationError(path + ".schedule: " + e.what());
        }
    }
    const double delta = w.contains("delta") ? number_field(w.at("delta"), path + ".delta") : 0.0;
    const double sigma = w.contains("sigma") ? number_field(w.at("sigma"), path + ".sigma") : 1.0;
    try {
        return WeightSchedule::from_weights(delta, sigma);
    } catch (const ValidationError& e) {
        throw ValidationError(path + ": " + e.what());
    }
}

json schedule_json(const WeightSchedule& s) {
    json pieces = json::array();
    for (const auto& p : s.pieces()) {
        pieces.push_back({p.start, p.speed});
    }
    return json{{"schedule", pieces}};
}

// Successor map over directed one-sided edges, traced into closed loops of
// vertex indices. Throws when the edges do not form closed loops.
std::vector<std::vector<int>> trace_loops(const std::vector<std::pair<int, int>>& directed,
                                          std::size_t vertex_count) {
    std::vector<int> next(vertex_count, -1);
    std::vector<int> indeg(vertex_count, 0);
    for (const auto& [a, b] : directed) {
        if (next[a] != -1) {
            throw ValidationError("vertex " + std::to_string(a) + " has more than one outgoing boundary edge");
        }
        next[a] = b;
        ++indeg[b];
    }
    for (std::size_t v = 0; v < vertex_count; ++v) {
        if ((next[v] != -1) != (indeg[v] == 1) || indeg[v] > 1) {
            throw ValidationError("boundary loop through vertex " + std::to_string(v) + " is not closed");
        }
    }
    std::vector<std::vector<int>> loops;
    std::vector<bool> seen(vertex_count, false);
    for (const auto& [a, b] : directed) {
        if (seen[a]) {
            continue;
        }
        std::vector<int> loop;
        int v = a;
        while (!seen[v]) {
            seen[v] = true;
            loop.push_back(v);
            v = next[v];
        }
        if (v != a) {
            throw ValidationError("boundary edges do not form closed loops");
        }
        loops.push_back(std::move(loop));
    }
    return loops;
}

std::vector<std::pair<int, int>> one_sided_directed(const WeightedInput& in) {
    std::vector<std::pair<int, int>> directed;
    for (const auto& e : in.edges) {
        if (e.left && !e.right) {
            directed.emplace_back(e.from, e.to);
        } else if (e.right && !e.left) {
            directed.emplace_back(e.to, e.from);
        }
    }
    return directed;
}

std::vector<Point2> loop_points(const WeightedInput& in, const std::vector<int>& loop) {
    std::vector<Point2> pts;
    pts.reserve(loop.size());
    for (int v : loop) {
        pts.push_back(in.vertices[v]);
    }
    return pts;
}

} // namespace

// ---------------------------------------------------------------- schedule

WeightSchedule::WeightSchedule(std::vector<SchedulePiece> pieces) : pieces_(std::move(pieces)) {
    if (pieces_.empty()) {
        throw ValidationError("schedule has no pieces");
    }
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const auto& p = pieces_[i];
        if (!std::isfinite(p.start) || !std::isfinite(p.speed)) {
            throw ValidationError("schedule values must be finite");
        }
        if (p.speed < 0.0) {
            throw ValidationError("negative speeds are not permitted");
        }
        if (i > 0 && !(p.start > pieces_[i - 1].start)) {
            throw ValidationError("schedule start times must be strictly increasing");
        }
    }
}

WeightSchedule WeightSchedule::from_weights(double delta, double sigma) {
    if (!(sigma >= 0.0)) {
        throw ValidationError("multiplicative weight must be nonnegative");
    }
    if (delta > 0.0) {
        return WeightSchedule({{0.0, 0.0}, {delta, sigma}});
    }
    return WeightSchedule({{delta, sigma}});
}

int WeightSchedule::piece_index(double t) const {
    int idx = -1;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        if (pieces_[i].start <= t) {
            idx = static_cast<int>(i);
        } else {
            break;
        }
    }
    return idx;
}

double WeightSchedule::speed_at(double t) const {
    const int i = piece_index(t);
    return i < 0 ? 0.0 : pieces_[i].speed;
}

double WeightSchedule::displacement(double t) const {
    double d = 0.0;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const double lo = std::max(pieces_[i].start, 0.0);
        const double hi = i + 1 < pieces_.size() ? std::min(pieces_[i + 1].start, t) : t;
        if (hi > lo) {
            d += pieces_[i].speed * (hi - lo);
        }
    }
    return d;
}

double WeightSchedule::inverse_displacement(double d) const {
    if (d <= 0.0) {
        return 0.0;
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const double lo = std::max(pieces_[i].start, 0.0);
        const double hi = i + 1 < pieces_.size() ? pieces_[i + 1].start : kInf;
        if (hi <= lo) {
            continue;
        }
        const double s = pieces_[i].speed;
        if (s > 0.0) {
            const double reach = acc + s * (hi - lo);
            if (reach >= d) {
                return lo + (d - acc) / s;
            }
            acc = reach;
        }
    }
    return kInf;
}

double WeightSchedule::first_moving_time() const {
    for (const auto& p : pieces_) {
        if (p.speed > 0.0) {
            return p.start;
        }
    }
    return kInf;
}

std::vector<double> WeightSchedule::breakpoints() const {
    std::vector<double> out;
    for (const auto& p : pieces_) {
        if (p.start > 0.0) {
            out.push_back(p.start);
        }
    }
    return out;
}

WeightSchedule WeightSchedule::shifted(double dt) const {
    auto pieces = pieces_;
    for (auto& p : pieces) {
        p.start += dt;
    }
    return WeightSchedule(std::move(pieces));
}

WeightSchedule WeightSchedule::normalized() const {
    std::vector<SchedulePiece> raw;
    if (pieces_.front().start > 0.0) {
        raw.push_back({0.0, 0.0});
    }
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        const double next = i + 1 < pieces_.size() ? pieces_[i + 1].start : kInf;
        if (next <= 0.0) {
            continue; // entirely before time 0
        }
        raw.push_back({std::max(pieces_[i].start, 0.0), pieces_[i].speed});
    }
    std::vector<SchedulePiece> merged;
    for (const auto& p : raw) {
        if (!merged.empty() && merged.back().speed == p.speed) {
            continue;
        }
        merged.push_back(p);
    }
    return WeightSchedule(std::move(merged));
}

WeightSchedule WeightSchedule::pointwise_max(const WeightSchedule& a, const WeightSchedule& b) {
    std::set<double> starts;
    for (const auto& p : a.pieces_) {
        starts.insert(p.start);
    }
    for (const auto& p : b.pieces_) {
        starts.insert(p.start);
    }
    std::vector<SchedulePiece> pieces;
    for (double t : starts) {
        pieces.push_back({t, std::max(a.speed_at(t), b.speed_at(t))});
    }
    return WeightSchedule(std::move(pieces)).normalized();
}

// ---------------------------------------------------------------- input

double WeightedInput::scale() const {
    double s = 1.0;
    for (const auto& p : vertices) {
        s = std::max({s, std::abs(p.x), std::abs(p.y)});
    }
    return s;
}

double loop_area(const std::vector<Point2>& loop) {
    double a = 0.0;
    for (std::size_t i = 0; i < loop.size(); ++i) {
        a += cross(loop[i], loop[(i + 1) % loop.size()]);
    }
    return 0.5 * a;
}

bool point_in_loops(Point2 p, const std::vector<std::vector<Point2>>& loops) {
    bool inside = false;
    for (const auto& loop : loops) {
        const std::size_t n = loop.size();
        for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
            const Point2 a = loop[i];
            const Point2 b = loop[j];
            if ((a.y > p.y) != (b.y > p.y)) {
                const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
                if (p.x < x) {
                    inside = !inside;
                }
            }
        }
    }
    return inside;
}

std::vector<std::vector<Point2>> footprint_loops(const WeightedInput& input) {
    std::vector<std::vector<Point2>> out;
    for (const auto& loop : trace_loops(one_sided_directed(input), input.vertices.size())) {
        out.push_back(loop_points(input, loop));
    }
    return out;
}

void validate_input(WeightedInput& in, double eps) {
    const std::size_t nv = in.vertices.size();
    const double tol = eps * in.scale();
    for (std::size_t i = 0; i < nv; ++i) {
        if (!is_finite(in.vertices[i])) {
            throw ValidationError(at("vertices", i) + ": coordinate is not finite");
        }
    }
    std::vector<int> degree(nv, 0);
    std::set<std::pair<int, int>> seen_pairs;
    for (std::size_t k = 0; k < in.edges.size(); ++k) {
        const auto& e = in.edges[k];
        if (e.from < 0 || e.to < 0 || static_cast<std::size_t>(e.from) >= nv ||
            static_cast<std::size_t>(e.to) >= nv) {
            throw ValidationError(at("edges", k) + ": vertex index out of range");
        }
        if (e.from == e.to) {
            throw ValidationError(at("edges", k) + ": edge joins a vertex to itself");
        }
        if (!e.left && !e.right) {
            throw ValidationError(at("edges", k) + ": edge has no propagating side");
        }
        if (!seen_pairs.insert(std::minmax(e.from, e.to)).second) {
            throw ValidationError(at("edges", k) + ": duplicate edge");
        }
        ++degree[e.from];
        ++degree[e.to];
    }
    for (std::size_t i = 0; i < nv; ++i) {
        if (degree[i] == 0) {
            throw ValidationError(at("vertices", i) + ": isolated vertex");
        }
        for (std::size_t j = i + 1; j < nv; ++j) {
            if (distance(in.vertices[i], in.vertices[j]) <= tol) {
                throw ValidationError("duplicate vertices " + std::to_string(i) + " and " + std::to_string(j));
            }
        }
    }
    // Pairwise crossing test; edges sharing a vertex may only touch there.
    for (std::size_t a = 0; a < in.edges.size(); ++a) {
        const auto& ea = in.edges[a];
        const Point2 p = in.vertices[ea.from];
        const Point2 q = in.vertices[ea.to];
        for (std::size_t b = a + 1; b < in.edges.size(); ++b) {
            const auto& eb = in.edges[b];
            const Point2 r = in.vertices[eb.from];
            const Point2 s = in.vertices[eb.to];
            const bool shared = ea.from == eb.from || ea.from == eb.to || ea.to == eb.from || ea.to == eb.to;
            bool bad = false;
            if (!shared) {
                bad = segments_intersect(p, q, r, s, eps);
            } else {
                // Only the unshared endpoints can create an overlap.
                if (eb.from != ea.from && eb.from != ea.to) {
                    bad = bad || point_segment_distance(r, p, q) <= tol;
                }
                if (eb.to != ea.from && eb.to != ea.to) {
                    bad = bad || point_segment_distance(s, p, q) <= tol;
                }
                if (ea.from != eb.from && ea.from != eb.to) {
                    bad = bad || point_segment_distance(p, r, s) <= tol;
                }
                if (ea.to != eb.from && ea.to != eb.to) {
                    bad = bad || point_segment_distance(q, r, s) <= tol;
                }
            }
            if (bad) {
                throw ValidationError("edges " + std::to_string(a) + " and " + std::to_string(b) + " intersect");
            }
        }
    }

    if (in.is_polygon()) {
        for (std::size_t k = 0; k < in.edges.size(); ++k) {
            if (!in.edges[k].left || in.edges[k].right) {
                throw ValidationError(at("edges", k) + ": polygon edges propagate on the left side only");
            }
        }
        if (!in.boundary.empty()) {
            throw ValidationError("'boundary' is only meaningful for PSLG input");
        }
        const auto loops = trace_loops(one_sided_directed(in), nv);
        std::vector<std::vector<Point2>> pts;
        for (const auto& l : loops) {
            pts.push_back(loop_points(in, l));
        }
        for (std::size_t i = 0; i < loops.size(); ++i) {
            const double area = loop_area(pts[i]);
            // Nesting depth decides whether a loop must be an outer boundary or a hole.
            const Point2 probe = (pts[i][0] + pts[i][1]) * 0.5;
            int depth = 0;
            for (std::size_t j = 0; j < loops.size(); ++j) {
                if (j != i && point_in_loops(probe, {pts[j]})) {
                    ++depth;
                }
            }
            const bool want_ccw = depth % 2 == 0;
            if ((area > 0.0) != want_ccw) {
                throw ValidationError(want_ccw ? "outer polygon loops must be counterclockwise"
                                               : "hole loops must be clockwise");
            }
        }
        in.kind = loops.size() == 1 ? InputKind::SimplePolygon : InputKind::PolygonWithHoles;
        return;
    }

    // PSLG: the optional boundary is a counterclockwise loop of one-sided edges
    // enclosing every other vertex.
    std::set<int> boundary(in.boundary.begin(), in.boundary.end());
    for (std::size_t k = 0; k < in.edges.size(); ++k) {
        const bool one_sided = !(in.edges[k].left && in.edges[k].right);
        if (one_sided != (boundary.count(static_cast<int>(k)) > 0)) {
            throw ValidationError(at("edges", k) +
                                  ": only enclosing-loop edges may be one-sided, and those must be");
        }
    }
    if (!boundary.empty()) {
        for (int k : boundary) {
            if (k < 0 || static_cast<std::size_t>(k) >= in.edges.size()) {
                throw ValidationError("boundary references a missing edge");
            }
        }
        const auto loops = trace_loops(one_sided_directed(in), nv);
        if (loops.size() != 1) {
            throw ValidationError("the enclosing loop must be a single closed loop");
        }
        const auto pts = loop_points(in, loops[0]);
        if (loop_area(pts) <= 0.0) {
            throw ValidationError("the enclosing loop must be counterclockwise");
        }
        std::set<int> on_loop(loops[0].begin(), loops[0].end());
        for (std::size_t v = 0; v < nv; ++v) {
            if (!on_loop.count(static_cast<int>(v)) && !point_in_loops(in.vertices[v], {pts})) {
                throw ValidationError(at("vertices", v) + ": lies outside the enclosing loop");
            }
        }
    }
}

WeightedInput parse_input(std::string_view text, double eps) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) {
        throw ParseError("document: expected an object");
    }
    WeightedInput in;
    const std::string kind = doc.contains("kind") ? (doc.at("kind").is_string() ? doc.at("kind").get<std::string>() : "")
                                                  : "polygon";
    if (kind == "polygon") {
        in.kind = InputKind::SimplePolygon;
    } else if (kind == "pslg") {
        in.kind = InputKind::Pslg;
    } else {
        throw ParseError("kind: expected \"polygon\" or \"pslg\"");
    }
    if (!doc.contains("vertices") || !doc.at("vertices").is_array()) {
        throw ParseError("vertices: expected an array");
    }
    const json& verts = doc.at("vertices");
    for (std::size_t i = 0; i < verts.size(); ++i) {
        const std::string p = at("vertices", i);
        if (!verts[i].is_array() || verts[i].size() != 2) {
            throw ParseError(p + ": expected [x, y]");
        }
        in.vertices.push_back({number_field(verts[i][0], p + "[0]"), number_field(verts[i][1], p + "[1]")});
    }
    if (doc.contains("boundary")) {
        if (in.kind != InputKind::Pslg) {
            throw ParseError("boundary: only permitted for kind \"pslg\"");
        }
        const json& b = doc.at("boundary");
        if (!b.is_array()) {
            throw ParseError("boundary: expected an array of edge indices");
        }
        for (std::size_t i = 0; i < b.size(); ++i) {
            if (!b[i].is_number_integer()) {
                throw ParseError(at("boundary", i) + ": expected an integer");
            }
            in.boundary.push_back(b[i].get<int>());
        }
    }
    const std::set<int> boundary(in.boundary.begin(), in.boundary.end());
    if (!doc.contains("edges") || !doc.at("edges").is_array()) {
        throw ParseError("edges: expected an array");
    }
    const json& edges = doc.at("edges");
    for (std::size_t k = 0; k < edges.size(); ++k) {
        const std::string p = at("edges", k);
        const json& e = edges[k];
        if (!e.is_object() || !e.contains("v") || !e.at("v").is_array() || e.at("v").size() != 2 ||
            !e.at("v")[0].is_number_integer() || !e.at("v")[1].is_number_integer()) {
            throw ParseError(p + ".v: expected [i, j]");
        }
        InputEdge edge;
        edge.from = e.at("v")[0].get<int>();
        edge.to = e.at("v")[1].get<int>();
        edge.left = e.contains("left") ? parse_weight(e.at("left"), p + ".left") : WeightSchedule();
        const bool on_boundary = boundary.count(static_cast<int>(k)) > 0;
        if (e.contains("right")) {
            if (in.kind != InputKind::Pslg) {
                throw ParseError(p + ".right: only permitted for kind \"pslg\"");
            }
            if (on_boundary) {
                throw ParseError(p + ".right: enclosing-loop edges propagate inward only");
            }
            edge.right = parse_weight(e.at("right"), p + ".right");
        } else if (in.kind == InputKind::Pslg && !on_boundary) {
            edge.right = WeightSchedule();
        }
        in.edges.push_back(std::move(edge));
    }
    validate_input(in, eps);
    return in;
}

std::string serialize_input(const WeightedInput& in) {
    json doc;
    doc["kind"] = in.is_polygon() ? "polygon" : "pslg";
    json verts = json::array();
    for (const auto& p : in.vertices) {
        verts.push_back({p.x, p.y});
    }
    doc["vertices"] = verts;
    json edges = json::array();
    for (const auto& e : in.edges) {
        json je{{"v", {e.from, e.to}}};
        if (e.left) {
            je["left"] = schedule_json(*e.left);
        }
        if (e.right) {
            je["right"] = schedule_json(*e.right);
        }
        edges.push_back(je);
    }
    doc["edges"] = edges;
    if (!in.boundary.empty()) {
        doc["boundary"] = in.boundary;
    }
    return doc.dump();
}

NormalizedInput normalize_schedules(const WeightedInput& input) {
    double earliest = 0.0;
    for (const auto& e : input.edges) {
        for (const auto* s : {&e.left, &e.right}) {
            if (*s) {
                earliest = std::min(earliest, (*s)->first_start());
            }
        }
    }
    NormalizedInput out{input, -earliest};
    for (auto& e : out.input.edges) {
        for (auto* s : {&e.left, &e.right}) {
            if (*s) {
                **s = (*s)->shifted(out.time_shift).normalized();
            }
        }
    }
    return out;
}

WeightedInput merge_collinear(const WeightedInput& input, double eps) {
    WeightedInput in = input;
    std::set<int> boundary(in.boundary.begin(), in.boundary.end());
    std::vector<bool> edge_alive(in.edges.size(), true);
    std::vector<bool> vertex_alive(in.vertices.size(), true);

    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<std::vector<int>> incident(in.vertices.size());
        for (std::size_t k = 0; k < in.edges.size(); ++k) {
            if (edge_alive[k]) {
                incident[in.edges[k].from].push_back(static_cast<int>(k));
                incident[in.edges[k].to].push_back(static_cast<int>(k));
            }
        }
        for (std::size_t v = 0; v < in.vertices.size() && !changed; ++v) {
            if (!vertex_alive[v] || incident[v].size() != 2) {
                continue;
            }
            const int k1 = incident[v][0];
            const int k2 = incident[v][1];
            const auto& e1 = in.edges[k1];
            const auto& e2 = in.edges[k2];
            const int a = e1.from == static_cast<int>(v) ? e1.to : e1.from;
            const int b = e2.from == static_cast<int>(v) ? e2.to : e2.from;
            const Point2 pa = in.vertices[a];
            const Point2 pv = in.vertices[v];
            const Point2 pb = in.vertices[b];
            if (a == b || orientation(pa, pv, pb, eps) != Orientation::Collinear || dot(pv - pa, pb - pv) <= 0.0) {
                continue;
            }
            // Sides expressed relative to the path a -> v -> b.
            const bool e1_forward = e1.to == static_cast<int>(v);
            const bool e2_forward = e2.from == static_cast<int>(v);
            const auto& l1 = e1_forward ? e1.left : e1.right;
            const auto& r1 = e1_forward ? e1.right : e1.left;
            const auto& l2 = e2_forward ? e2.left : e2.right;
            const auto& r2 = e2_forward ? e2.right : e2.left;
            if (l1 != l2 || r1 != r2) {
                throw CollinearWeightMismatch("straight vertex " + std::to_string(v) +
                                              " joins collinear edges with different weights");
            }
            InputEdge merged{a, b, l1, r1};
            in.edges[k1] = merged;
            edge_alive[k2] = false;
            vertex_alive[v] = false;
            if (boundary.count(k2)) {
                boundary.erase(k2);
                boundary.insert(k1);
            }
            changed = true;
        }
    }

    WeightedInput out;
    out.kind = in.kind;
    std::vector<int> remap(in.vertices.size(), -1);
    for (std::size_t v = 0; v < in.vertices.size(); ++v) {
        if (vertex_alive[v]) {
            remap[v] = static_cast<int>(out.vertices.size());
            out.vertices.push_back(in.vertices[v]);
        }
    }
    for (std::size_t k = 0; k < in.edges.size(); ++k) {
        if (!edge_alive[k]) {
            continue;
        }
        InputEdge e = in.edges[k];
        e.from = remap[e.from];
        e.to = remap[e.to];
        if (boundary.count(static_cast<int>(k))) {
            out.boundary.push_back(static_cast<int>(out.edges.size()));
        }
        out.edges.push_back(std::move(e));
    }
    return out;
}

} // namespace wss
