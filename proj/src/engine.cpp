#include "wss/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <tuple>

namespace wss {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool antiparallel(Vector2 a, Vector2 b) { return dot(a, b) < 0.0 && std::abs(cross(a, b)) <= 1e-12; }

} // namespace

const char* to_string(EventKind kind) {
    switch (kind) {
    case EventKind::SpeedChange:
        return "speed-change";
    case EventKind::EdgeCollapse:
        return "edge-collapse";
    case EventKind::ParallelMerge:
        return "parallel-merge";
    case EventKind::Split:
        return "split";
    }
    return "?";
}

bool EventQueue::Later::operator()(const Event& l, const Event& r) const {
    return std::make_tuple(l.time, static_cast<int>(l.kind), l.location.x, l.location.y, l.a, l.b) >
           std::make_tuple(r.time, static_cast<int>(r.kind), r.location.x, r.location.y, r.a, r.b);
}

std::optional<double> collapse_time(const KineticVertex& tail, const KineticVertex& head, Vector2 d, double from,
                                    double length_tol) {
    const double length = dot(head.position(from) - tail.position(from), d);
    const double rate = dot(head.velocity - tail.velocity, d);
    if (rate < -1e-14) {
        return from + std::max(length, 0.0) / -rate;
    }
    if (length < -length_tol) {
        return from; // already inverted: resolve immediately
    }
    return std::nullopt;
}

std::optional<double> split_time(Point2 anchor, double t0, Vector2 velocity, const EdgeSideInfo& side, double from,
                                 double tol) {
    const Vector2 n = side.line.normal;
    const double approach = dot(n, velocity);
    auto gap = [&](double t) {
        return dot(n, anchor) + (t - t0) * approach - side.line.offset - side.schedule.displacement(t);
    };
    if (gap(from) <= tol) {
        return std::nullopt;
    }
    const auto& pieces = side.schedule.pieces();
    for (std::size_t i = 0; i < pieces.size(); ++i) {
        const double hi = i + 1 < pieces.size() ? pieces[i + 1].start : kInf;
        if (hi <= from) {
            continue;
        }
        const double lo = std::max(pieces[i].start, from);
        const double slope = approach - pieces[i].speed;
        if (slope < 0.0) {
            const double root = lo + gap(lo) / -slope;
            if (root <= hi) {
                return std::max(root, from);
            }
        }
    }
    return std::nullopt;
}

std::optional<double> merge_time(const EdgeSideInfo& s, const EdgeSideInfo& t, double from, double tol) {
    if (!antiparallel(s.line.normal, t.line.normal)) {
        return std::nullopt;
    }
    auto gap = [&](double time) {
        return s.line.offset + s.schedule.displacement(time) + t.line.offset + t.schedule.displacement(time);
    };
    if (gap(from) >= -tol) {
        return std::nullopt;
    }
    std::set<double> cuts{from};
    for (const auto* side : {&s, &t}) {
        for (double b : side->schedule.breakpoints()) {
            if (b > from) {
                cuts.insert(b);
            }
        }
    }
    std::vector<double> bounds(cuts.begin(), cuts.end());
    for (std::size_t i = 0; i < bounds.size(); ++i) {
        const double lo = bounds[i];
        const double hi = i + 1 < bounds.size() ? bounds[i + 1] : kInf;
        const double rate = s.speed_at(lo) + t.speed_at(lo);
        if (rate > 0.0) {
            const double root = lo - gap(lo) / rate;
            if (root <= hi) {
                return root;
            }
        }
    }
    return std::nullopt;
}

std::vector<Event> speed_change_events(const std::vector<EdgeSideInfo>& sides) {
    std::vector<Event> out;
    for (std::size_t s = 0; s < sides.size(); ++s) {
        for (double b : sides[s].schedule.breakpoints()) {
            Event e;
            e.time = b;
            e.kind = EventKind::SpeedChange;
            e.b = static_cast<int>(s);
            out.push_back(e);
        }
    }
    return out;
}

namespace {

class Engine {
public:
    Engine(const WeightedInput& input, const EngineOptions& options, double idle)
        : input_(input), opt_(options), idle_(idle) {
        scale_ = input.scale();
        tol_len_ = opt_.tol.geom * scale_;
        tol_time_ = opt_.tol.time * scale_;
        if (opt_.stop_time) {
            stop_ = std::max(0.0, *opt_.stop_time - idle_);
        }
    }

    PropagationResult run();

private:
    const WeightedInput& input_;
    EngineOptions opt_;
    double idle_ = 0.0;
    double scale_ = 1.0;
    double tol_len_ = 1e-9;
    double tol_time_ = 1e-9;
    double stop_ = kInf;
    double now_ = 0.0;

    Wavefront wf_;
    Skeleton sk_;
    EventQueue queue_;
    EngineStats stats_;
    std::vector<ProcessedEvent> log_;
    std::vector<std::vector<int>> fragments_;
    std::vector<int> recent_nodes_;
    double recent_time_ = -kInf;

    Point2 pos(int v, double t) const { return wf_.vertices[v].position(t); }
    int side_of(int e) const { return wf_.edges[e].side; }
    const EdgeSideInfo& side_info(int e) const { return wf_.sides[wf_.edges[e].side]; }

    int make_node(Point2 p, NodeKind kind, int trigger = -1) {
        if (kind == NodeKind::Event) {
            if (now_ > recent_time_ + tol_time_) {
                recent_nodes_.clear();
                recent_time_ = now_;
            }
            for (int id : recent_nodes_) {
                if (distance(sk_.nodes[id].position, p) <= tol_len_) {
                    return id;
                }
            }
        }
        SkeletonNode node;
        node.position = p;
        node.time = now_;
        node.kind = kind;
        node.trigger_side = trigger;
        sk_.nodes.push_back(node);
        const int id = static_cast<int>(sk_.nodes.size()) - 1;
        if (kind == NodeKind::Event) {
            recent_nodes_.push_back(id);
        }
        return id;
    }

    void add_arc(int from, int to, int left, int right) {
        if (from != to) {
            sk_.arcs.push_back({from, to, left, right});
        }
    }

    void end_vertex(int v, int node) {
        auto& kv = wf_.vertices[v];
        if (!kv.alive) {
            return;
        }
        add_arc(kv.node, node, side_of(kv.in_edge), side_of(kv.out_edge));
        kv.alive = false;
        ++kv.stamp;
    }

    int new_edge(int side) {
        WavefrontEdge e;
        e.side = side;
        e.alive_since = now_;
        wf_.edges.push_back(e);
        const int id = static_cast<int>(wf_.edges.size()) - 1;
        fragments_[side].push_back(id);
        return id;
    }

    void remove_edge(int e) {
        auto& edge = wf_.edges[e];
        if (!edge.alive) {
            return;
        }
        edge.alive = false;
        ++edge.stamp;
        auto& list = fragments_[edge.side];
        list.erase(std::remove(list.begin(), list.end(), e), list.end());
    }

    void push(const Event& ev) {
        queue_.push(ev);
        stats_.max_queue = std::max(stats_.max_queue, queue_.size());
    }

    void schedule_collapse(int e) {
        const auto& edge = wf_.edges[e];
        if (!edge.alive || edge.start < 0 || edge.end < 0) {
            return;
        }
        const auto& tail = wf_.vertices[edge.start];
        const auto& head = wf_.vertices[edge.end];
        const auto t = collapse_time(tail, head, side_info(e).line.direction(), now_, tol_len_);
        if (t && *t <= stop_) {
            Event ev;
            ev.time = *t;
            ev.kind = EventKind::EdgeCollapse;
            ev.location = (tail.position(*t) + head.position(*t)) * 0.5;
            ev.a = e;
            ev.stamp = edge.stamp;
            push(ev);
        }
    }

    void touch_edge(int e) {
        ++wf_.edges[e].stamp;
        schedule_collapse(e);
    }

    void schedule_splits(int v) {
        const auto& kv = wf_.vertices[v];
        const int own_a = side_of(kv.in_edge);
        const int own_b = side_of(kv.out_edge);
        for (std::size_t s = 0; s < wf_.sides.size(); ++s) {
            if (static_cast<int>(s) == own_a || static_cast<int>(s) == own_b) {
                continue;
            }
            const auto t = split_time(kv.anchor, kv.anchor_time, kv.velocity, wf_.sides[s], now_, tol_len_);
            if (t && *t <= stop_) {
                Event ev;
                ev.time = *t;
                ev.kind = EventKind::Split;
                ev.location = kv.position(*t);
                ev.a = v;
                ev.b = static_cast<int>(s);
                ev.stamp = kv.stamp;
                push(ev);
            }
        }
    }

    bool is_spike(int in_edge, int out_edge) const {
        const auto& a = side_info(in_edge);
        const auto& b = side_info(out_edge);
        return antiparallel(a.line.normal, b.line.normal) && a.speed_at(now_) + b.speed_at(now_) > 0.0;
    }

    void join(int in_edge, int out_edge, Point2 p, int node);
    void zip(int v);
    void split_surgery(int v, int target, Point2 p);
    void merge_coincident(int e, int f);
    void handle_collapse(const Event& ev);
    void handle_split(const Event& ev);
    void handle_speed_change(const Event& ev);
    void handle_merge(const Event& ev);
    void finish(std::vector<BoundaryPiece>& tops, std::vector<std::vector<Point2>>& final_wavefront);
};

void Engine::join(int in_edge, int out_edge, Point2 p, int node) {
    if (!wf_.edges[in_edge].alive || !wf_.edges[out_edge].alive) {
        return;
    }
    if (in_edge == out_edge) {
        // A lone edge whose endpoints are already gone.
        remove_edge(in_edge);
        return;
    }
    const int w = wf_.edges[in_edge].start;
    if (w >= 0 && wf_.vertices[w].alive && wf_.vertices[w].in_edge == out_edge) {
        // Two-edge chain: both edges span the same two loci and close off.
        const int nw = make_node(pos(w, now_), NodeKind::Event);
        add_arc(node, nw, side_of(in_edge), side_of(out_edge));
        end_vertex(w, nw);
        remove_edge(in_edge);
        remove_edge(out_edge);
        return;
    }
    KineticVertex kv;
    kv.anchor = p;
    kv.anchor_time = now_;
    kv.in_edge = in_edge;
    kv.out_edge = out_edge;
    kv.node = node;
    wf_.vertices.push_back(kv);
    const int z = static_cast<int>(wf_.vertices.size()) - 1;
    wf_.edges[in_edge].end = z;
    wf_.edges[out_edge].start = z;
    ++wf_.edges[in_edge].stamp;
    ++wf_.edges[out_edge].stamp;
    if (is_spike(in_edge, out_edge)) {
        zip(z);
        return;
    }
    auto& nv = wf_.vertices[z];
    nv.velocity = vertex_velocity(wf_, in_edge, out_edge, now_);
    nv.reflex = is_reflex_at(wf_, z);
    schedule_collapse(in_edge);
    schedule_collapse(out_edge);
    if (nv.reflex) {
        schedule_splits(z);
    }
}

// Vertex between two antiparallel edges on a common line: the shorter edge is
// consumed and the common portion becomes an arc.
void Engine::zip(int v) {
    const int a = wf_.vertices[v].in_edge;
    const int b = wf_.vertices[v].out_edge;
    const int a0 = wf_.edges[a].start;
    const int b1 = wf_.edges[b].end;
    const Point2 pv = pos(v, now_);
    if (a0 == b1) {
        const int n = make_node(pos(a0, now_), NodeKind::Event);
        end_vertex(v, n);
        end_vertex(a0, n);
        remove_edge(a);
        remove_edge(b);
        return;
    }
    const Point2 pa = pos(a0, now_);
    const Point2 pb = pos(b1, now_);
    const double la = distance(pv, pa);
    const double lb = distance(pv, pb);
    if (std::abs(la - lb) <= tol_len_) {
        const Point2 m = (pa + pb) * 0.5;
        const int n = make_node(m, NodeKind::Event);
        const int before = wf_.vertices[a0].in_edge;
        const int after = wf_.vertices[b1].out_edge;
        end_vertex(v, n);
        end_vertex(a0, n);
        end_vertex(b1, n);
        remove_edge(a);
        remove_edge(b);
        join(before, after, m, n);
    } else if (la < lb) {
        const int n = make_node(pa, NodeKind::Event);
        const int before = wf_.vertices[a0].in_edge;
        end_vertex(v, n);
        end_vertex(a0, n);
        remove_edge(a);
        join(before, b, pa, n);
    } else {
        const int n = make_node(pb, NodeKind::Event);
        const int after = wf_.vertices[b1].out_edge;
        end_vertex(v, n);
        end_vertex(b1, n);
        remove_edge(b);
        join(a, after, pb, n);
    }
}

void Engine::split_surgery(int v, int target, Point2 p) {
    const int node = make_node(p, NodeKind::Event);
    const int a = wf_.vertices[v].in_edge;
    const int b = wf_.vertices[v].out_edge;
    end_vertex(v, node);
    const int x = wf_.edges[target].start;
    const int y = wf_.edges[target].end;
    const int side = wf_.edges[target].side;
    remove_edge(target);
    const int e1 = new_edge(side);
    wf_.edges[e1].start = x;
    wf_.vertices[x].out_edge = e1;
    const int e2 = new_edge(side);
    wf_.edges[e2].end = y;
    wf_.vertices[y].in_edge = e2;
    join(a, e2, p, node);
    join(e1, b, p, node);
}

// Two antiparallel edges covering the same segment: both vanish and leave a
// single arc between their merged endpoints.
void Engine::merge_coincident(int e, int f) {
    const int u = wf_.edges[e].start;
    const int w = wf_.edges[e].end;
    const int x = wf_.edges[f].start;
    const int y = wf_.edges[f].end;
    const int pe = wf_.vertices[u].in_edge;
    const int qe = wf_.vertices[w].out_edge;
    const int rf = wf_.vertices[x].in_edge;
    const int sf = wf_.vertices[y].out_edge;
    const Point2 pa = (pos(u, now_) + pos(y, now_)) * 0.5;
    const Point2 pb = (pos(w, now_) + pos(x, now_)) * 0.5;
    const int na = make_node(pa, NodeKind::Event);
    const int nb = make_node(pb, NodeKind::Event);
    end_vertex(u, na);
    end_vertex(y, na);
    end_vertex(w, nb);
    end_vertex(x, nb);
    add_arc(na, nb, side_of(f), side_of(e));
    remove_edge(e);
    remove_edge(f);
    join(pe, sf, pa, na);
    join(rf, qe, pb, nb);
}

void Engine::handle_collapse(const Event& ev) {
    const auto& edge = wf_.edges[ev.a];
    if (!edge.alive || edge.stamp != ev.stamp) {
        ++stats_.stale_events;
        return;
    }
    ++stats_.collapse_events;
    const int u = edge.start;
    const int w = edge.end;
    if (u == w) {
        const int n = make_node(pos(u, now_), NodeKind::Event);
        end_vertex(u, n);
        remove_edge(ev.a);
        return;
    }
    const Point2 p = (pos(u, now_) + pos(w, now_)) * 0.5;
    log_.push_back({now_, EventKind::EdgeCollapse, p});
    const int n = make_node(p, NodeKind::Event);
    const int before = wf_.vertices[u].in_edge;
    const int after = wf_.vertices[w].out_edge;
    end_vertex(u, n);
    end_vertex(w, n);
    remove_edge(ev.a);
    join(before, after, p, n);
}

void Engine::handle_split(const Event& ev) {
    const auto& kv = wf_.vertices[ev.a];
    if (!kv.alive || kv.stamp != ev.stamp) {
        ++stats_.stale_events;
        return;
    }
    const Point2 p = kv.position(now_);
    const int a = kv.in_edge;
    const int b = kv.out_edge;
    const auto& side = wf_.sides[ev.b];
    const Vector2 d = side.line.direction();
    const double lateral = std::abs(signed_distance(side.moved_line(now_), p));
    if (lateral > 100.0 * tol_len_) {
        ++stats_.extent_misses;
        return;
    }
    int best = -1;
    double best_margin = -kInf;
    for (int e : fragments_[ev.b]) {
        const auto& edge = wf_.edges[e];
        if (e == a || e == b || edge.end == wf_.edges[a].start || edge.start == wf_.edges[b].end) {
            continue;
        }
        const Point2 ps = pos(edge.start, now_);
        const double len = dot(pos(edge.end, now_) - ps, d);
        const double s = dot(p - ps, d);
        if (len < -tol_len_ || s < -tol_len_ || s > len + tol_len_) {
            continue;
        }
        const double margin = std::min(s, len - s);
        if (margin > best_margin) {
            best_margin = margin;
            best = e;
        }
    }
    if (best < 0) {
        ++stats_.extent_misses;
        return;
    }
    ++stats_.split_events;
    log_.push_back({now_, EventKind::Split, p});
    split_surgery(ev.a, best, p);
}

void Engine::handle_speed_change(const Event& ev) {
    ++stats_.speed_change_events;
    std::set<int> done;
    const std::vector<int> edges = fragments_[ev.b];
    for (int e : edges) {
        for (int v : {wf_.edges[e].start, wf_.edges[e].end}) {
            if (v < 0 || !wf_.vertices[v].alive || !done.insert(v).second) {
                continue;
            }
            auto& kv = wf_.vertices[v];
            const int a = kv.in_edge;
            const int b = kv.out_edge;
            if (is_spike(a, b)) {
                kv.anchor = kv.position(now_);
                kv.anchor_time = now_;
                zip(v);
                continue;
            }
            const Vector2 vel = vertex_velocity(wf_, a, b, now_);
            if (norm(vel - kv.velocity) <= 1e-12 * (1.0 + norm(vel))) {
                continue;
            }
            const Point2 p = kv.position(now_);
            const int n = make_node(p, NodeKind::SpeedChange, ev.b);
            add_arc(kv.node, n, side_of(a), side_of(b));
            kv.node = n;
            kv.anchor = p;
            kv.anchor_time = now_;
            kv.velocity = vel;
            ++kv.stamp;
            ++stats_.speed_change_incidences;
            touch_edge(a);
            touch_edge(b);
            if (kv.reflex) {
                schedule_splits(v);
            }
        }
    }
}

void Engine::handle_merge(const Event& ev) {
    const auto& s = wf_.sides[ev.a];
    const Vector2 d = s.line.direction();
    const DirectedLine line = s.moved_line(now_);
    bool any = false;
    for (int guard = 0; guard < 64; ++guard) {
        int vertex = -1;
        int target = -1;
        int other = -1;
        for (int e : fragments_[ev.a]) {
            const auto& E = wf_.edges[e];
            const double e0 = dot(pos(E.start, now_), d);
            const double e1 = dot(pos(E.end, now_), d);
            for (int f : fragments_[ev.b]) {
                const auto& F = wf_.edges[f];
                if (std::abs(signed_distance(line, pos(F.start, now_))) > 100.0 * tol_len_) {
                    continue;
                }
                const double f0 = dot(pos(F.start, now_), d); // F runs against d
                const double f1 = dot(pos(F.end, now_), d);
                if (std::min(e1, f0) - std::max(e0, f1) <= tol_len_) {
                    continue;
                }
                auto inside = [&](double x, double lo, double hi) { return x > lo + tol_len_ && x < hi - tol_len_; };
                if (inside(f0, e0, e1)) {
                    vertex = F.start, target = e;
                } else if (inside(f1, e0, e1)) {
                    vertex = F.end, target = e;
                } else if (inside(e0, f1, f0)) {
                    vertex = E.start, target = f;
                } else if (inside(e1, f1, f0)) {
                    vertex = E.end, target = f;
                } else if (std::abs(e0 - f1) <= tol_len_ && std::abs(e1 - f0) <= tol_len_) {
                    vertex = -2, target = e, other = f;
                } else {
                    continue;
                }
                break;
            }
            if (vertex != -1) {
                break;
            }
        }
        if (vertex == -1) {
            break;
        }
        if (vertex == -2) {
            if (!any) {
                ++stats_.merge_events;
                log_.push_back({now_, EventKind::ParallelMerge, pos(wf_.edges[target].start, now_)});
            }
            any = true;
            merge_coincident(target, other);
            continue;
        }
        if (!any) {
            ++stats_.merge_events;
            log_.push_back({now_, EventKind::ParallelMerge, pos(vertex, now_)});
        }
        any = true;
        split_surgery(vertex, target, pos(vertex, now_));
    }
    if (!any) {
        ++stats_.stale_events;
    }
}

void Engine::finish(std::vector<BoundaryPiece>& tops, std::vector<std::vector<Point2>>& final_wavefront) {
    if (std::isfinite(stop_)) {
        now_ = stop_;
        final_wavefront = wf_.polygons_at(now_);
        std::vector<int> stop_node(wf_.vertices.size(), -1);
        for (std::size_t v = 0; v < wf_.vertices.size(); ++v) {
            if (wf_.vertices[v].alive) {
                stop_node[v] = make_node(pos(static_cast<int>(v), now_), NodeKind::Stop);
            }
        }
        for (std::size_t e = 0; e < wf_.edges.size(); ++e) {
            const auto& edge = wf_.edges[e];
            if (edge.alive) {
                tops.push_back({edge.side, stop_node[edge.end], stop_node[edge.start], -1});
            }
        }
        for (std::size_t v = 0; v < wf_.vertices.size(); ++v) {
            if (wf_.vertices[v].alive) {
                end_vertex(static_cast<int>(v), stop_node[v]);
            }
        }
        return;
    }
    // Chains left over without pending events must be degenerate slivers.
    for (const auto& chain : wf_.chains()) {
        Point2 centroid;
        for (int v : chain) {
            centroid = centroid + pos(v, now_);
        }
        centroid = centroid / static_cast<double>(chain.size());
        double spread = 0.0;
        for (int v : chain) {
            spread = std::max(spread, distance(pos(v, now_), centroid));
        }
        if (spread > 1e3 * tol_len_) {
            throw Error("wavefront did not collapse: a chain of " + std::to_string(chain.size()) +
                        " vertices remains without pending events");
        }
        const int n = make_node(centroid, NodeKind::Event);
        for (int v : chain) {
            const int e = wf_.vertices[v].out_edge;
            end_vertex(v, n);
            remove_edge(e);
        }
    }
}

PropagationResult Engine::run() {
    wf_ = initial_wavefront(input_, opt_.tol.geom);
    fragments_.assign(wf_.sides.size(), {});
    for (std::size_t e = 0; e < wf_.edges.size(); ++e) {
        fragments_[wf_.edges[e].side].push_back(static_cast<int>(e));
    }
    sk_.scale = scale_;
    sk_.kind = input_.kind;
    for (const auto& p : input_.vertices) {
        SkeletonNode n;
        n.position = p;
        n.kind = NodeKind::Input;
        sk_.nodes.push_back(n);
    }
    sk_.initial_wavefront = wf_.polygons_at(0.0);

    // With a leading idle period, the engine starts at the first moving time;
    // every vertex that moves from there on gets a node at its rest position.
    if (idle_ > 0.0) {
        std::vector<int> start_node(input_.vertices.size(), -1);
        for (auto& kv : wf_.vertices) {
            if (norm(kv.velocity) == 0.0) {
                continue;
            }
            const int input_vertex = kv.node;
            if (start_node[input_vertex] < 0) {
                SkeletonNode n;
                n.position = input_.vertices[input_vertex];
                n.kind = NodeKind::SpeedChange;
                sk_.nodes.push_back(n);
                start_node[input_vertex] = static_cast<int>(sk_.nodes.size()) - 1;
            }
            add_arc(input_vertex, start_node[input_vertex], side_of(kv.in_edge), side_of(kv.out_edge));
            kv.node = start_node[input_vertex];
            ++stats_.speed_change_incidences;
        }
    }

    const std::size_t n = std::max<std::size_t>(wf_.vertices.size(), 4);
    const double guard = opt_.guard_factor * static_cast<double>(n) * static_cast<double>(n);

    for (std::size_t e = 0; e < wf_.edges.size(); ++e) {
        schedule_collapse(static_cast<int>(e));
    }
    for (std::size_t v = 0; v < wf_.vertices.size(); ++v) {
        if (wf_.vertices[v].reflex) {
            schedule_splits(static_cast<int>(v));
        }
    }
    for (std::size_t s = 0; s < wf_.sides.size(); ++s) {
        for (std::size_t t = s + 1; t < wf_.sides.size(); ++t) {
            if (const auto m = merge_time(wf_.sides[s], wf_.sides[t], 0.0, tol_len_); m && *m <= stop_) {
                Event ev;
                ev.time = *m;
                ev.kind = EventKind::ParallelMerge;
                ev.a = static_cast<int>(s);
                ev.b = static_cast<int>(t);
                push(ev);
            }
        }
    }
    for (const auto& ev : speed_change_events(wf_.sides)) {
        if (ev.time <= stop_) {
            push(ev);
        }
    }

    while (!queue_.empty()) {
        if (queue_.top().time > stop_) {
            break;
        }
        const Event ev = queue_.pop();
        now_ = std::max(now_, ev.time);
        switch (ev.kind) {
        case EventKind::EdgeCollapse:
            handle_collapse(ev);
            break;
        case EventKind::Split:
            handle_split(ev);
            break;
        case EventKind::SpeedChange:
            handle_speed_change(ev);
            break;
        case EventKind::ParallelMerge:
            handle_merge(ev);
            break;
        }
        if (static_cast<double>(stats_.processed()) > guard) {
            throw NonTermination("event count exceeded " + std::to_string(static_cast<long long>(guard)) +
                                 " after " + std::to_string(stats_.processed()) + " events at t=" +
                                 std::to_string(now_ + idle_));
        }
    }

    std::vector<BoundaryPiece> extra;
    PropagationResult result;
    finish(extra, result.final_wavefront);

    // Report every time in the normalized input frame.
    for (std::size_t i = input_.vertices.size(); i < sk_.nodes.size(); ++i) {
        sk_.nodes[i].time += idle_;
    }
    for (auto& e : log_) {
        e.time += idle_;
    }
    if (opt_.stop_time) {
        sk_.stop_time = now_ + idle_;
    }
    sk_.sides = build_sides(input_, opt_.tol.geom);
    for (std::size_t s = 0; s < sk_.sides.size(); ++s) {
        const auto& info = sk_.sides[s];
        if (!info.is_cap) {
            extra.push_back({static_cast<int>(s), info.from_vertex, info.to_vertex, -1});
        }
    }
    assemble_faces(sk_, extra);
    recount_degrees(sk_);
    result.skeleton = std::move(sk_);
    result.events = std::move(log_);
    result.stats = stats_;
    return result;
}

} // namespace

PropagationResult propagate(const WeightedInput& input, const EngineOptions& options) {
    if (input.kind == InputKind::Pslg && input.boundary.empty() && !options.stop_time) {
        throw ValidationError("a PSLG without an enclosing loop needs a stop time");
    }
    double idle = kInf;
    for (const auto& e : input.edges) {
        for (const auto* s : {&e.left, &e.right}) {
            if (!*s) {
                continue;
            }
            if (!(*s)->eventually_moves() && !options.stop_time) {
                throw ValidationError("every edge side must eventually move unless a stop time is given");
            }
            idle = std::min(idle, (*s)->first_moving_time());
        }
    }
    if (!std::isfinite(idle)) {
        idle = 0.0;
    }
    if (options.stop_time) {
        idle = std::min(idle, std::max(0.0, *options.stop_time));
    }
    WeightedInput shifted = input;
    if (idle > 0.0) {
        for (auto& e : shifted.edges) {
            for (auto* s : {&e.left, &e.right}) {
                if (*s) {
                    **s = (*s)->shifted(-idle).normalized();
                }
            }
        }
    }
    Engine engine(shifted, options, idle);
    auto result = engine.run();
    // Faces and roofs use the schedules of the unshifted frame.
    result.skeleton.sides = build_sides(input, options.tol.geom);
    return result;
}

PropagationResult compute_skeleton(const WeightedInput& input, const EngineOptions& options) {
    auto normalized = normalize_schedules(input);
    const WeightedInput merged = merge_collinear(normalized.input, options.tol.geom);
    EngineOptions opts = options;
    if (opts.stop_time) {
        *opts.stop_time += normalized.time_shift;
    }
    auto result = propagate(merged, opts);
    result.skeleton.time_shift = normalized.time_shift;
    return result;
}

} // namespace wss
