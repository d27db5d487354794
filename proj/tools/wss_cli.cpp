#include "wss/engine.hpp"
#include "wss/oracle.hpp"
#include "wss/roof.hpp"
#include "wss/skeleton.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

namespace {

enum Exit { Ok = 0, Invalid = 1, VerifyFailed = 2, Internal = 3 };

class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw IoError("cannot read " + path);
    }
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write " + path);
    }
    out << text;
}

std::vector<double> parse_times(const std::string& list) {
    std::vector<double> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double t = 0.0;
        try {
            t = std::stod(item, &used);
        } catch (const std::logic_error&) {
            used = 0;
        }
        if (used == 0 || used != item.size() || !std::isfinite(t)) {
            throw wss::ValidationError("bad offset time '" + item + "'");
        }
        out.push_back(t);
    }
    if (out.empty()) {
        throw wss::ValidationError("no offset times given");
    }
    return out;
}

struct Settings {
    std::string input;
    std::string skeleton_path;
    std::vector<std::string> offsets;
    std::string roof_path;
    std::string facets_path;
    bool triangulate = false;
    std::optional<double> stop_time;
    bool cap_flat = false;
    double eps = 1e-9;
    bool verify = false;
    int samples = 1000;
    std::uint64_t seed = 1;
};

// Returns false when any check fails.
bool verify(const Settings& s, const wss::WeightedInput& input, const wss::PropagationResult& result,
            const wss::RoofMesh& roof) {
    bool ok = true;
    const auto& sk = result.skeleton;
    const auto crossings = wss::check_crossing_free(sk, s.eps);
    std::printf("crossings %d (benign overlaps %d)\n", crossings.violations, crossings.benign_overlaps);
    ok = ok && crossings.violations == 0;
    if (input.is_polygon()) {
        const int components = wss::connectivity(sk);
        std::printf("components %d\n", components);
        ok = ok && components == 1;
    }
    if (!sk.stop_time && input.is_polygon()) {
        const auto mono = wss::z_monotone_check(roof, s.samples, s.seed);
        std::printf("zMonotoneViolations %d of %d\n", mono.violations, mono.samples);
        ok = ok && mono.violations == 0;
    }
    if (input.kind == wss::InputKind::SimplePolygon && !sk.stop_time) {
        bool convex = true;
        std::mt19937_64 rng(s.seed);
        const auto loops = wss::footprint_loops(input);
        double x0 = 1e300, y0 = 1e300, x1 = -1e300, y1 = -1e300;
        for (const auto& p : loops.front()) {
            x0 = std::min(x0, p.x), y0 = std::min(y0, p.y), x1 = std::max(x1, p.x), y1 = std::max(y1, p.y);
        }
        std::uniform_real_distribution<double> ux(x0, x1), uy(y0, y1);
        double worst = 0.0;
        for (int k = 0; k < s.samples && convex;) {
            const wss::Point2 p{ux(rng), uy(rng)};
            if (!wss::point_in_loops(p, loops)) {
                continue;
            }
            ++k;
            try {
                const double expected = wss::convex_height(input, p);
                const auto got = wss::roof_height(roof, p);
                const double err = got ? std::abs(*got - expected) / std::max(1.0, std::abs(expected)) : 1.0;
                worst = std::max(worst, err);
            } catch (const wss::OutsidePolygon&) {
                continue;
            } catch (const wss::ValidationError&) {
                convex = false;
            }
        }
        if (convex) {
            std::printf("maxRelError %.3e\n", worst);
            ok = ok && worst <= 1e-7;
        } else if (input.edges.size() <= 16) {
            double tmax = 0.0;
            for (const auto& n : sk.nodes) {
                tmax = std::max(tmax, n.time - sk.time_shift);
            }
            std::vector<double> times;
            for (int k = 1; k <= 8; ++k) {
                times.push_back(tmax * k / 9.0);
            }
            const auto oracle = wss::time_step_simulate(input, times);
            const auto offsets = wss::extract_offsets(sk, times);
            double hd = 0.0;
            for (std::size_t i = 0; i < times.size(); ++i) {
                hd = std::max(hd, wss::hausdorff_distance(offsets[i], oracle.snapshots[i]));
            }
            std::printf("offsetHausdorff %.3e\n", hd);
            ok = ok && hd <= 1e-5;
        }
    }
    return ok;
}

int run(const Settings& s) {
    wss::WeightedInput input;
    wss::PropagationResult result;
    try {
        input = wss::parse_input(read_file(s.input), s.eps);
        wss::EngineOptions options;
        options.tol.geom = s.eps;
        options.stop_time = s.stop_time;
        result = wss::compute_skeleton(input, options);
    } catch (const wss::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Invalid;
    } catch (const wss::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Invalid;
    } catch (const wss::NonTermination& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return Internal;
    }

    if (!s.skeleton_path.empty()) {
        write_file(s.skeleton_path, wss::skeleton_to_json(result.skeleton));
    }
    if (!s.offsets.empty()) {
        const auto times = parse_times(s.offsets[0]);
        write_file(s.offsets[1], wss::offsets_to_json(times, wss::extract_offsets(result.skeleton, times)));
    }
    wss::RoofMesh roof;
    if (!s.roof_path.empty() || !s.facets_path.empty() || s.verify) {
        roof = wss::build_roof(result.skeleton, {s.cap_flat});
    }
    if (!s.roof_path.empty()) {
        write_file(s.roof_path, wss::export_obj(roof, s.triangulate));
    }
    if (!s.facets_path.empty()) {
        write_file(s.facets_path, wss::facets_to_json(roof, s.triangulate));
    }
    std::printf("nodes %zu arcs %zu events %zu\n", result.skeleton.nodes.size(), result.skeleton.arcs.size(),
                result.stats.processed());
    if (s.verify && !verify(s, input, result, roof)) {
        std::cerr << "verification failed\n";
        return VerifyFailed;
    }
    return Ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weighted straight skeletons, offsets and roofs"};
    app.require_subcommand(1);
    Settings s;
    auto* compute = app.add_subcommand("compute", "Compute the skeleton of a JSON input");
    compute->add_option("input", s.input, "Input JSON file")->required();
    compute->add_option("--skeleton", s.skeleton_path, "Write skeleton JSON");
    compute->add_option("--offsets", s.offsets, "Comma-separated times and output path")->expected(2);
    compute->add_option("--roof", s.roof_path, "Write roof OBJ");
    compute->add_option("--facets", s.facets_path, "Write per-facet JSON matching the OBJ faces");
    compute->add_flag("--triangulate", s.triangulate, "Triangulate roof facets");
    compute->add_option("--stop-time", s.stop_time, "Stop the propagation at this time");
    compute->add_flag("--cap-flat", s.cap_flat, "Close the roof with flat caps at the stop time");
    compute->add_option("--eps", s.eps, "Geometric tolerance")->check(CLI::PositiveNumber);
    compute->add_flag("--verify", s.verify, "Run the built-in checks");
    compute->add_option("--samples", s.samples, "Sample points for --verify")->check(CLI::PositiveNumber);
    compute->add_option("--seed", s.seed, "Random seed for --verify");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? Ok : Invalid;
    }
    try {
        return run(s);
    } catch (const wss::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Invalid;
    } catch (const IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return Invalid;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return Internal;
    }
}
