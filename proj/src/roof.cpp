#include "wss/roof.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <random>
#include <tuple>

namespace wss {

namespace {

Point3 newell(const std::vector<Point3>& poly) {
    Point3 n;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point3& a = poly[i];
        const Point3& b = poly[(i + 1) % poly.size()];
        n.x += (a.y - b.y) * (a.z + b.z);
        n.y += (a.z - b.z) * (a.x + b.x);
        n.z += (a.x - b.x) * (a.y + b.y);
    }
    return n;
}

double length3(Point3 v) { return std::sqrt(v.x * v.x + v.y * v.y + v.z * v.z); }

// Sutherland-Hodgman against the half-space sign * (z - level) >= 0.
std::vector<Point3> clip_z(const std::vector<Point3>& poly, double level, double sign) {
    std::vector<Point3> out;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point3& a = poly[i];
        const Point3& b = poly[(i + 1) % poly.size()];
        const double da = sign * (a.z - level);
        const double db = sign * (b.z - level);
        if (da >= 0.0) {
            out.push_back(a);
        }
        if ((da < 0.0 && db > 0.0) || (da > 0.0 && db < 0.0)) {
            const double u = da / (da - db);
            out.push_back({a.x + (b.x - a.x) * u, a.y + (b.y - a.y) * u, level});
        }
    }
    return out;
}

std::vector<Point3> drop_duplicates(const std::vector<Point3>& poly, double tol) {
    std::vector<Point3> out;
    for (const auto& p : poly) {
        if (out.empty() || length3({p.x - out.back().x, p.y - out.back().y, p.z - out.back().z}) > tol) {
            out.push_back(p);
        }
    }
    while (out.size() > 1 && length3({out.front().x - out.back().x, out.front().y - out.back().y,
                                      out.front().z - out.back().z}) <= tol) {
        out.pop_back();
    }
    return out;
}

bool inside_xy(const std::vector<Point3>& poly, Point2 p) {
    bool in = false;
    for (std::size_t i = 0, j = poly.size() - 1; i < poly.size(); j = i++) {
        const Point3& a = poly[i];
        const Point3& b = poly[j];
        if ((a.y > p.y) != (b.y > p.y) && p.x < (b.x - a.x) * (p.y - a.y) / (b.y - a.y) + a.x) {
            in = !in;
        }
    }
    return in;
}

double plane_height(const RoofFacet& f, Point2 p) {
    const Point3& o = f.vertices.front();
    return o.z - (f.normal.x * (p.x - o.x) + f.normal.y * (p.y - o.y)) / f.normal.z;
}

bool sloped(const RoofFacet& f) { return !f.vertical && !f.cap; }

// Connects holes (clockwise) to their outer loop (counterclockwise) along
// segments that cross no loop edge.
std::vector<Point2> keyhole(std::vector<Point2> outer, std::vector<std::vector<Point2>> holes) {
    auto blocked = [&](Point2 a, Point2 b) {
        auto hits = [&](const std::vector<Point2>& loop) {
            for (std::size_t i = 0; i < loop.size(); ++i) {
                if (segments_cross_properly(a, b, loop[i], loop[(i + 1) % loop.size()], 1e-12)) {
                    return true;
                }
            }
            return false;
        };
        if (hits(outer)) {
            return true;
        }
        return std::any_of(holes.begin(), holes.end(), hits);
    };
    while (!holes.empty()) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bh = 0, bi = 0, bo = 0;
        for (std::size_t h = 0; h < holes.size(); ++h) {
            for (std::size_t i = 0; i < holes[h].size(); ++i) {
                for (std::size_t o = 0; o < outer.size(); ++o) {
                    const double d = distance(holes[h][i], outer[o]);
                    if (d < best && !blocked(holes[h][i], outer[o])) {
                        best = d, bh = h, bi = i, bo = o;
                    }
                }
            }
        }
        if (!std::isfinite(best)) {
            break;
        }
        const auto& hole = holes[bh];
        std::vector<Point2> merged(outer.begin(), outer.begin() + static_cast<long>(bo) + 1);
        for (std::size_t k = 0; k <= hole.size(); ++k) {
            merged.push_back(hole[(bi + k) % hole.size()]);
        }
        merged.push_back(outer[bo]);
        merged.insert(merged.end(), outer.begin() + static_cast<long>(bo) + 1, outer.end());
        outer = std::move(merged);
        holes.erase(holes.begin() + static_cast<long>(bh));
    }
    return outer;
}

} // namespace

double facet_gradient(const RoofFacet& f) { return std::hypot(f.normal.x, f.normal.y) / std::abs(f.normal.z); }

RoofMesh build_roof(const Skeleton& sk, const RoofOptions& options) {
    RoofMesh mesh;
    mesh.scale = sk.scale;
    const double tol = 1e-9 * sk.scale;
    for (const auto& loop : sk.initial_wavefront) {
        mesh.footprint.push_back(loop);
    }
    for (std::size_t f = 0; f < sk.faces.size(); ++f) {
        const auto& pieces = sk.sides[f].schedule.pieces();
        for (const auto& cycle : sk.faces[f].cycles) {
            std::vector<Point3> poly;
            for (int n : cycle) {
                poly.push_back({sk.nodes[n].position.x, sk.nodes[n].position.y, sk.nodes[n].time});
            }
            for (std::size_t i = 0; i < pieces.size(); ++i) {
                auto part = clip_z(poly, pieces[i].start, 1.0);
                if (i + 1 < pieces.size()) {
                    part = clip_z(part, pieces[i + 1].start, -1.0);
                }
                part = drop_duplicates(part, tol);
                if (part.size() < 3) {
                    continue;
                }
                const Point3 normal = newell(part);
                if (length3(normal) <= tol * sk.scale) {
                    continue;
                }
                RoofFacet facet;
                facet.face = static_cast<int>(f);
                facet.piece = static_cast<int>(i);
                facet.speed = pieces[i].speed;
                facet.vertical = pieces[i].speed == 0.0;
                for (auto& p : part) {
                    p.z -= sk.time_shift;
                }
                facet.vertices = std::move(part);
                facet.normal = normal;
                mesh.facets.push_back(std::move(facet));
            }
        }
    }
    if (options.cap_flat && sk.stop_time) {
        const double z = *sk.stop_time - sk.time_shift;
        const auto loops = extract_offsets(sk, {z}).front();
        std::vector<std::vector<Point2>> outers, holes;
        for (const auto& loop : loops) {
            (loop_area(loop) > 0.0 ? outers : holes).push_back(loop);
        }
        std::vector<std::vector<std::vector<Point2>>> owned(outers.size());
        for (const auto& hole : holes) {
            int best = -1;
            for (std::size_t o = 0; o < outers.size(); ++o) {
                if (point_in_loops(hole.front(), {outers[o]}) &&
                    (best < 0 || loop_area(outers[o]) < loop_area(outers[best]))) {
                    best = static_cast<int>(o);
                }
            }
            if (best >= 0) {
                owned[best].push_back(hole);
            }
        }
        for (std::size_t o = 0; o < outers.size(); ++o) {
            RoofFacet cap;
            cap.cap = true;
            for (const auto& p : keyhole(outers[o], owned[o])) {
                cap.vertices.push_back({p.x, p.y, z});
            }
            cap.normal = newell(cap.vertices);
            mesh.facets.push_back(std::move(cap));
        }
    }
    return mesh;
}

std::vector<std::array<int, 3>> triangulate_facet(const RoofFacet& facet) {
    const auto& v = facet.vertices;
    const int n = static_cast<int>(v.size());
    std::vector<std::array<int, 3>> out;
    if (n < 3) {
        return out;
    }
    // Project onto the coordinate plane most aligned with the facet.
    const double ax = std::abs(facet.normal.x), ay = std::abs(facet.normal.y), az = std::abs(facet.normal.z);
    auto proj = [&](int i) -> Point2 {
        if (az >= ax && az >= ay) {
            return {v[i].x, v[i].y};
        }
        if (ax >= ay) {
            return {v[i].y, v[i].z};
        }
        return {v[i].z, v[i].x};
    };
    std::vector<int> idx(n);
    for (int i = 0; i < n; ++i) {
        idx[i] = i;
    }
    double area = 0.0;
    for (int i = 0; i < n; ++i) {
        area += cross(proj(i), proj((i + 1) % n));
    }
    const bool flip = area < 0.0;
    if (flip) {
        std::reverse(idx.begin(), idx.end());
    }
    auto is_ear = [&](std::size_t k) {
        const std::size_t m = idx.size();
        const Point2 a = proj(idx[(k + m - 1) % m]);
        const Point2 b = proj(idx[k]);
        const Point2 c = proj(idx[(k + 1) % m]);
        if (signed_area2(a, b, c) <= 0.0) {
            return false;
        }
        for (std::size_t j = 0; j < m; ++j) {
            if (j == k || j == (k + m - 1) % m || j == (k + 1) % m) {
                continue;
            }
            const Point2 p = proj(idx[j]);
            if (p == a || p == b || p == c) {
                continue;
            }
            if (signed_area2(a, b, p) >= 0.0 && signed_area2(b, c, p) >= 0.0 && signed_area2(c, a, p) >= 0.0) {
                return false;
            }
        }
        return true;
    };
    while (idx.size() > 3) {
        const std::size_t m = idx.size();
        std::size_t k = 0;
        while (k < m && !is_ear(k)) {
            ++k;
        }
        if (k == m) {
            k = 0; // degenerate remainder: cut anywhere
        }
        out.push_back({idx[(k + m - 1) % m], idx[k], idx[(k + 1) % m]});
        idx.erase(idx.begin() + static_cast<long>(k));
    }
    out.push_back({idx[0], idx[1], idx[2]});
    if (flip) {
        for (auto& t : out) {
            std::swap(t[1], t[2]);
        }
    }
    return out;
}

std::string export_obj(const RoofMesh& mesh, bool triangulate) {
    using Key = std::tuple<double, double, double>;
    std::map<Key, int> index;
    for (const auto& f : mesh.facets) {
        for (const auto& p : f.vertices) {
            index.emplace(Key{p.x, p.y, p.z}, 0);
        }
    }
    std::string out = "# weighted straight skeleton roof\n";
    char buf[128];
    int next = 1;
    for (auto& [key, id] : index) {
        id = next++;
        std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", std::get<0>(key), std::get<1>(key), std::get<2>(key));
        out += buf;
    }
    auto id_of = [&](const Point3& p) { return index.at(Key{p.x, p.y, p.z}); };
    for (const auto& f : mesh.facets) {
        if (triangulate) {
            for (const auto& t : triangulate_facet(f)) {
                out += "f " + std::to_string(id_of(f.vertices[t[0]])) + " " + std::to_string(id_of(f.vertices[t[1]])) +
                       " " + std::to_string(id_of(f.vertices[t[2]])) + "\n";
            }
        } else {
            out += "f";
            for (const auto& p : f.vertices) {
                out += " " + std::to_string(id_of(p));
            }
            out += "\n";
        }
    }
    return out;
}

std::string facets_to_json(const RoofMesh& mesh, bool triangulate) {
    nlohmann::json j = nlohmann::json::array();
    for (const auto& f : mesh.facets) {
        const nlohmann::json entry = {
            {"face", f.face}, {"piece", f.piece}, {"speed", f.speed}, {"vertical", f.vertical}, {"cap", f.cap}};
        const std::size_t copies = triangulate ? triangulate_facet(f).size() : 1;
        for (std::size_t k = 0; k < copies; ++k) {
            j.push_back(entry);
        }
    }
    return j.dump() + "\n";
}

std::optional<double> roof_height(const RoofMesh& mesh, Point2 p) {
    for (const auto& f : mesh.facets) {
        if (sloped(f) && inside_xy(f.vertices, p)) {
            return plane_height(f, p);
        }
    }
    return std::nullopt;
}

namespace {

Point2 random_footprint_point(const RoofMesh& mesh, std::mt19937_64& rng) {
    double x0 = std::numeric_limits<double>::infinity(), y0 = x0, x1 = -x0, y1 = -x0;
    for (const auto& loop : mesh.footprint) {
        for (const auto& p : loop) {
            x0 = std::min(x0, p.x), y0 = std::min(y0, p.y), x1 = std::max(x1, p.x), y1 = std::max(y1, p.y);
        }
    }
    std::uniform_real_distribution<double> ux(x0, x1), uy(y0, y1);
    for (int tries = 0; tries < 1000000; ++tries) {
        const Point2 p{ux(rng), uy(rng)};
        if (point_in_loops(p, mesh.footprint)) {
            return p;
        }
    }
    throw Error("footprint has no interior");
}

} // namespace

MonotoneReport z_monotone_check(const RoofMesh& mesh, int samples, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    MonotoneReport report;
    for (int s = 0; s < samples; ++s) {
        const Point2 p = random_footprint_point(mesh, rng);
        int cover = 0;
        for (const auto& f : mesh.facets) {
            if (!f.vertical && inside_xy(f.vertices, p)) {
                ++cover;
            }
        }
        ++report.samples;
        if (cover != 1) {
            ++report.violations;
        }
    }
    return report;
}

RaindropReport raindrop_check(const RoofMesh& mesh, int descents, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    RaindropReport report;
    const double h0 = 0.05 * mesh.scale;
    const double hmin = 1e-13 * mesh.scale;
    const double hslide = 1e-7 * mesh.scale;
    for (int d = 0; d < descents; ++d) {
        ++report.descents;
        Point2 p = random_footprint_point(mesh, rng);
        bool reached = false;
        double h = h0;
        for (int step = 0; step < 100000; ++step) {
            const RoofFacet* under = nullptr;
            for (const auto& f : mesh.facets) {
                if (sloped(f) && inside_xy(f.vertices, p)) {
                    under = &f;
                    break;
                }
            }
            if (!under) {
                reached = !point_in_loops(p, mesh.footprint);
                break;
            }
            const double z = plane_height(*under, p);
            const Vector2 down = normalized(Vector2{under->normal.x, under->normal.y} / under->normal.z);
            // Returns true when a step of length len along dir leaves the
            // footprint or lowers the drop.
            auto attempt = [&](Vector2 dir, double len) {
                const Point2 q = p + dir * len;
                if (!point_in_loops(q, mesh.footprint)) {
                    reached = true;
                    return true;
                }
                const auto zq = roof_height(mesh, q);
                if (zq && *zq < z) {
                    p = q;
                    return true;
                }
                return false;
            };
            if (h >= hslide) {
                if (attempt(down, h)) {
                    h = std::min(2.0 * h, h0);
                } else {
                    h *= 0.5;
                }
            } else {
                // Blocked by a wall: slide along the nearest facet edge.
                const auto& v = under->vertices;
                double best = std::numeric_limits<double>::infinity();
                Vector2 along;
                for (std::size_t i = 0; i < v.size(); ++i) {
                    const Point2 a{v[i].x, v[i].y};
                    const Point2 b{v[(i + 1) % v.size()].x, v[(i + 1) % v.size()].y};
                    const double dist = point_segment_distance(p, a, b);
                    if (dist < best && distance(a, b) > 0.0) {
                        best = dist;
                        along = normalized(b - a);
                    }
                }
                if (dot(along, down) < 0.0) {
                    along = -along;
                }
                bool moved = false;
                if (dot(along, down) > 0.0) {
                    for (double len = h0; len >= hmin && !moved; len *= 0.5) {
                        moved = attempt(along, len);
                    }
                }
                if (!moved) {
                    break;
                }
                h = h0;
            }
            if (reached) {
                break;
            }
        }
        if (!reached) {
            ++report.failures;
        }
    }
    return report;
}

} // namespace wss
