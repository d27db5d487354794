#include "wss/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <set>

namespace wss {

double convex_height(const WeightedInput& polygon, Point2 p) {
    if (!polygon.is_polygon() || polygon.kind != InputKind::SimplePolygon) {
        throw ValidationError("convex height needs a simple polygon");
    }
    const auto loops = footprint_loops(polygon);
    if (!point_in_loops(p, loops)) {
        throw OutsidePolygon("query point lies outside the polygon");
    }
    const auto& loop = loops.front();
    for (std::size_t i = 0; i < loop.size(); ++i) {
        const Point2 a = loop[i];
        const Point2 b = loop[(i + 1) % loop.size()];
        const Point2 c = loop[(i + 2) % loop.size()];
        if (signed_area2(a, b, c) < 0.0) {
            throw ValidationError("convex height needs a convex polygon");
        }
    }
    const auto frame = normalize_schedules(polygon);
    double best = std::numeric_limits<double>::infinity();
    for (const auto& e : frame.input.edges) {
        const Point2 a = frame.input.vertices[e.from];
        const Point2 b = frame.input.vertices[e.to];
        const Vector2 n = perp_left(normalized(b - a));
        best = std::min(best, e.left->inverse_displacement(dot(n, p - a)));
    }
    return best - frame.time_shift;
}

namespace {

struct MovingLine {
    Vector2 n;
    Vector2 d;
    double c = 0.0;
    WeightSchedule schedule;
};

enum class Kind { Collapse, Split };

struct Candidate {
    double time;
    Kind kind;
    int chain;
    int index;
    int target_chain = -1;
    int target_edge = -1;
};

class Simulator {
public:
    Simulator(const WeightedInput& in, const StepOptions& opt) : opt_(opt) {
        tol_ = 1e-9 * in.scale();
        scale_ = in.scale();
        for (const auto& e : in.edges) {
            const Point2 a = in.vertices[e.from];
            const Point2 b = in.vertices[e.to];
            MovingLine l;
            l.d = normalized(b - a);
            l.n = perp_left(l.d);
            l.c = dot(l.n, a);
            l.schedule = *e.left;
            lines_.push_back(l);
            for (double bp : l.schedule.breakpoints()) {
                breakpoints_.insert(bp);
            }
        }
        std::vector<int> out_edge(in.vertices.size(), -1);
        for (std::size_t k = 0; k < in.edges.size(); ++k) {
            out_edge[in.edges[k].from] = static_cast<int>(k);
        }
        std::vector<bool> seen(in.edges.size(), false);
        for (std::size_t k0 = 0; k0 < in.edges.size(); ++k0) {
            if (seen[k0]) {
                continue;
            }
            std::vector<int> chain;
            int k = static_cast<int>(k0);
            while (!seen[k]) {
                seen[k] = true;
                chain.push_back(k);
                k = out_edge[in.edges[k].to];
            }
            chains_.push_back(chain);
        }
    }

    OracleReport run(const std::vector<double>& samples);

private:
    StepOptions opt_;
    double tol_ = 1e-9;
    double scale_ = 1.0;
    std::vector<MovingLine> lines_;
    std::set<double> breakpoints_;
    std::vector<std::vector<int>> chains_;
    std::vector<double> events_;
    /// Vertices between collinear sides of equal direction, keyed by the side pair.
    std::map<std::pair<int, int>, std::pair<Point2, double>> straight_;

    DirectedLine line(int side, double t) const {
        return {lines_[side].n, lines_[side].c + lines_[side].schedule.displacement(t)};
    }

    static int wrap(int i, int m) { return ((i % m) + m) % m; }

    // Vertex i of a chain sits between sides i and i + 1.
    Point2 vertex(const std::vector<int>& chain, int i, double t) const {
        const int m = static_cast<int>(chain.size());
        const int a = chain[wrap(i, m)];
        const int b = chain[wrap(i + 1, m)];
        if (same_direction(a, b)) {
            const auto it = straight_.find({a, b});
            if (it != straight_.end()) {
                const auto& [p0, t0] = it->second;
                const auto travel = [&](int s) {
                    return lines_[s].schedule.displacement(t) - lines_[s].schedule.displacement(t0);
                };
                return p0 + lines_[a].n * (0.5 * (travel(a) + travel(b)));
            }
        }
        const auto p = intersect_lines(line(a, t), line(b, t), 1e-14);
        if (!p) {
            throw Error("oracle: adjacent wavefront edges are parallel");
        }
        return *p;
    }

    double edge_length(const std::vector<int>& chain, int i, double t) const {
        return dot(vertex(chain, i, t) - vertex(chain, i - 1, t), lines_[chain[wrap(i, static_cast<int>(chain.size()))]].d);
    }

    bool same_direction(int a, int b) const {
        return dot(lines_[a].n, lines_[b].n) > 0.0 && std::abs(cross(lines_[a].n, lines_[b].n)) <= 1e-12;
    }

    bool antiparallel(int a, int b) const {
        return dot(lines_[a].n, lines_[b].n) < 0.0 && std::abs(cross(lines_[a].n, lines_[b].n)) <= 1e-12;
    }

    std::optional<Candidate> earliest(double t0, double t1) const;
    std::optional<Candidate> immediate(double t) const;
    void apply(const Candidate& c, double t);
    void settle(int chain, int index, Point2 p, double t);
    void cleanup();
    std::vector<std::vector<Point2>> snapshot(double t) const;
};

std::vector<std::vector<Point2>> Simulator::snapshot(double t) const {
    std::vector<std::vector<Point2>> out;
    for (const auto& chain : chains_) {
        std::vector<Point2> poly;
        for (int i = 0; i < static_cast<int>(chain.size()); ++i) {
            poly.push_back(vertex(chain, i, t));
        }
        out.push_back(std::move(poly));
    }
    return out;
}

std::optional<Candidate> Simulator::earliest(double t0, double t1) const {
    std::optional<Candidate> best;
    auto offer = [&](const Candidate& c) {
        if (!best || c.time < best->time || (c.time == best->time && c.kind < best->kind)) {
            best = c;
        }
    };
    for (int a = 0; a < static_cast<int>(chains_.size()); ++a) {
        const auto& chain = chains_[a];
        const int m = static_cast<int>(chain.size());
        for (int i = 0; i < m; ++i) {
            const double l0 = edge_length(chain, i, t0);
            const double l1 = edge_length(chain, i, t1);
            if (l0 > 0.0 && l1 <= 0.0) {
                offer({t0 + (t1 - t0) * l0 / (l0 - l1), Kind::Collapse, a, i});
            }
        }
        for (int i = 0; i < m; ++i) {
            const Point2 p0 = vertex(chain, i, t0);
            const Point2 p1 = vertex(chain, i, t1);
            for (int b = 0; b < static_cast<int>(chains_.size()); ++b) {
                const auto& other = chains_[b];
                const int k = static_cast<int>(other.size());
                for (int j = 0; j < k; ++j) {
                    if (a == b && (j == i || j == wrap(i + 1, m) || j == wrap(i - 1, m) || j == wrap(i + 2, m))) {
                        continue;
                    }
                    const double d0 = signed_distance(line(other[j], t0), p0);
                    const double d1 = signed_distance(line(other[j], t1), p1);
                    if (!(d0 > tol_ && d1 <= 0.0)) {
                        continue;
                    }
                    const double t = t0 + (t1 - t0) * d0 / (d0 - d1);
                    const Point2 p = vertex(chain, i, t);
                    const Point2 s0 = vertex(other, j - 1, t);
                    const double len = edge_length(other, j, t);
                    const double s = dot(p - s0, lines_[other[j]].d);
                    if (len > -tol_ && s >= -tol_ && s <= len + tol_) {
                        offer({t, Kind::Split, a, i, b, j});
                    }
                }
            }
        }
    }
    return best;
}

std::optional<Candidate> Simulator::immediate(double t) const {
    for (int a = 0; a < static_cast<int>(chains_.size()); ++a) {
        const auto& chain = chains_[a];
        for (int i = 0; i < static_cast<int>(chain.size()); ++i) {
            if (edge_length(chain, i, t) <= tol_) {
                return Candidate{t, Kind::Collapse, a, i};
            }
        }
    }
    return std::nullopt;
}

// A vertex at p between antiparallel sides closes up like a zipper: the
// shorter of its two edges vanishes.
void Simulator::settle(int c, int i, Point2 p, double t) {
    auto& chain = chains_[c];
    const int m = static_cast<int>(chain.size());
    if (m <= 2) {
        return;
    }
    const int a = chain[wrap(i, m)];
    const int b = chain[wrap(i + 1, m)];
    if (same_direction(a, b)) {
        straight_[{a, b}] = {p, t};
        return;
    }
    if (!antiparallel(a, b)) {
        return;
    }
    if (lines_[a].schedule.speed_at(t) + lines_[b].schedule.speed_at(t) <= 0.0) {
        throw Error("oracle: stationary spike");
    }
    const Point2 pa = vertex(chain, i - 1, t);
    const Point2 pb = vertex(chain, i + 1, t);
    const double la = distance(p, pa);
    const double lb = distance(p, pb);
    if (std::abs(la - lb) <= tol_) {
        const int ia = wrap(i, m);
        const int ib = wrap(i + 1, m);
        chain.erase(chain.begin() + std::max(ia, ib));
        chain.erase(chain.begin() + std::min(ia, ib));
        const int mm = static_cast<int>(chain.size());
        if (mm > 2) {
            settle(c, wrap(std::min(ia, ib) - 1, mm), (pa + pb) * 0.5, t);
        }
    } else if (la < lb) {
        const int ia = wrap(i, m);
        chain.erase(chain.begin() + ia);
        const int mm = static_cast<int>(chain.size());
        if (mm > 2) {
            settle(c, wrap(ia - 1, mm), pa, t);
        }
    } else {
        const int ib = wrap(i + 1, m);
        chain.erase(chain.begin() + ib);
        const int mm = static_cast<int>(chain.size());
        if (mm > 2) {
            settle(c, wrap(ib - 1, mm), pb, t);
        }
    }
}

void Simulator::apply(const Candidate& ev, double t) {
    events_.push_back(t);
    if (ev.kind == Kind::Collapse) {
        auto& chain = chains_[ev.chain];
        const int m = static_cast<int>(chain.size());
        const Point2 p = (vertex(chain, ev.index - 1, t) + vertex(chain, ev.index, t)) * 0.5;
        chain.erase(chain.begin() + ev.index);
        const int mm = static_cast<int>(chain.size());
        if (mm > 2) {
            settle(ev.chain, wrap(ev.index - 1, mm), p, t);
        }
        (void)m;
        cleanup();
        return;
    }
    const Point2 p = vertex(chains_[ev.chain], ev.index, t);
    const auto l1 = chains_[ev.chain];
    const int m = static_cast<int>(l1.size());
    const int i = ev.index;
    const int j = ev.target_edge;
    if (ev.chain == ev.target_chain) {
        std::vector<int> first; // sides i+1 .. j
        for (int k = wrap(i + 1, m);; k = wrap(k + 1, m)) {
            first.push_back(l1[k]);
            if (k == j) {
                break;
            }
        }
        std::vector<int> second; // sides j .. i
        for (int k = j;; k = wrap(k + 1, m)) {
            second.push_back(l1[k]);
            if (k == wrap(i, m)) {
                break;
            }
        }
        chains_[ev.chain] = first;
        chains_.push_back(second);
        const int c2 = static_cast<int>(chains_.size()) - 1;
        settle(ev.chain, static_cast<int>(first.size()) - 1, p, t);
        settle(c2, static_cast<int>(second.size()) - 1, p, t);
    } else {
        const auto l2 = chains_[ev.target_chain];
        const int k2 = static_cast<int>(l2.size());
        std::vector<int> merged;
        for (int k = 0; k < m; ++k) {
            merged.push_back(l1[wrap(i + 1 + k, m)]);
        }
        for (int k = 0; k <= k2; ++k) {
            merged.push_back(l2[wrap(j + k, k2)]);
        }
        const int lo = std::min(ev.chain, ev.target_chain);
        const int hi = std::max(ev.chain, ev.target_chain);
        chains_.erase(chains_.begin() + hi);
        chains_.erase(chains_.begin() + lo);
        chains_.push_back(merged);
        const int c = static_cast<int>(chains_.size()) - 1;
        // The two new vertices: after l1[i] (index m - 1) and after the
        // second copy of the target side (index m + k2, the last one).
        settle(c, static_cast<int>(merged.size()) - 1, p, t);
        const int mm = static_cast<int>(chains_[c].size());
        const auto& now = chains_[c];
        for (int k = 0; k < mm; ++k) {
            if (now[k] == l2[j] && now[wrap(k - 1, mm)] == l1[wrap(i, m)]) {
                settle(c, wrap(k - 1, mm), p, t);
                break;
            }
        }
    }
    cleanup();
}

void Simulator::cleanup() {
    chains_.erase(std::remove_if(chains_.begin(), chains_.end(), [](const auto& c) { return c.size() <= 2; }),
                  chains_.end());
}

OracleReport Simulator::run(const std::vector<double>& samples) {
    OracleReport report;
    report.snapshots.resize(samples.size());
    std::vector<std::size_t> order(samples.size());
    for (std::size_t i = 0; i < order.size(); ++i) {
        order[i] = i;
    }
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return samples[a] < samples[b]; });
    std::size_t next_sample = 0;

    const double step = opt_.step > 0.0 ? opt_.step : scale_ / 256.0;
    double t = 0.0;
    int steps = 0;
    auto take_samples_up_to = [&](double limit, bool inclusive) {
        while (next_sample < order.size()) {
            const double s = samples[order[next_sample]];
            if (s > limit || (!inclusive && s == limit)) {
                break;
            }
            report.snapshots[order[next_sample]] = snapshot(std::max(s, 0.0));
            ++next_sample;
        }
    };
    while (!chains_.empty()) {
        if (opt_.end_time > 0.0 && t >= opt_.end_time) {
            break;
        }
        if (++steps > opt_.max_steps) {
            throw StepTooCoarse("oracle: step limit reached before the wavefront vanished");
        }
        if (auto now = immediate(t)) {
            apply(*now, t);
            continue;
        }
        double t1 = t + step;
        if (auto it = breakpoints_.upper_bound(t); it != breakpoints_.end()) {
            t1 = std::min(t1, *it);
        }
        if (opt_.end_time > 0.0) {
            t1 = std::min(t1, opt_.end_time);
        }
        if (auto ev = earliest(t, t1)) {
            const double te = std::max(ev->time, t);
            take_samples_up_to(te, false);
            t = te;
            apply(*ev, t);
        } else {
            take_samples_up_to(t1, true);
            t = t1;
        }
    }
    take_samples_up_to(std::numeric_limits<double>::infinity(), true);
    report.event_times = events_;
    return report;
}

} // namespace

OracleReport time_step_simulate(const WeightedInput& polygon, const std::vector<double>& samples,
                                const StepOptions& options) {
    if (!polygon.is_polygon()) {
        throw ValidationError("the step oracle handles polygons only");
    }
    if (!(options.step >= 0.0) || !(options.time_tol > 0.0)) {
        throw StepTooCoarse("oracle: invalid step settings");
    }
    for (const auto& e : polygon.edges) {
        if (!e.left->eventually_moves() && options.end_time <= 0.0) {
            throw ValidationError("the step oracle needs every edge to move or an end time");
        }
    }
    const auto frame = normalize_schedules(polygon);
    StepOptions opts = options;
    if (opts.end_time > 0.0) {
        opts.end_time += frame.time_shift;
    }
    std::vector<double> shifted = samples;
    for (double& s : shifted) {
        s += frame.time_shift;
    }
    Simulator sim(frame.input, opts);
    auto report = sim.run(shifted);
    for (double& t : report.event_times) {
        t -= frame.time_shift;
    }
    return report;
}

double hausdorff_distance(const std::vector<std::vector<Point2>>& a, const std::vector<std::vector<Point2>>& b,
                          int samples_per_edge) {
    auto directed = [&](const auto& from, const auto& to) {
        double worst = 0.0;
        for (const auto& loop : from) {
            for (std::size_t i = 0; i < loop.size(); ++i) {
                const Point2 p = loop[i];
                const Point2 q = loop[(i + 1) % loop.size()];
                for (int s = 0; s < samples_per_edge; ++s) {
                    const Point2 x = p + (q - p) * (static_cast<double>(s) / samples_per_edge);
                    double best = std::numeric_limits<double>::infinity();
                    for (const auto& other : to) {
                        for (std::size_t j = 0; j < other.size(); ++j) {
                            best = std::min(best, point_segment_distance(x, other[j], other[(j + 1) % other.size()]));
                        }
                    }
                    worst = std::max(worst, best);
                }
            }
        }
        return worst;
    };
    if (a.empty() && b.empty()) {
        return 0.0;
    }
    if (a.empty() || b.empty()) {
        return std::numeric_limits<double>::infinity();
    }
    return std::max(directed(a, b), directed(b, a));
}

} // namespace wss
