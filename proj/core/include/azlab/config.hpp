#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "azlab/maps.hpp"

namespace azlab {

enum class Command { sweep, orbit, lyapunov, boxdim, hypothesis, horseshoe, trellis, bifurcation };

std::string_view command_name(Command c);
std::optional<Command> parse_command(std::string_view name);

struct Schedule {
    std::string param;
    double start = 0.0;
    double stop = 0.0;
    double step = 1.0;

    bool active() const { return !param.empty(); }
    /// start, start + step, ... up to stop (inclusive, 1e-9 relative slack).
    std::vector<double> values() const;
};

/// Everything a CLI run needs. Unknown keys that are not knobs become map
/// parameters, so the map family decides whether they are valid.
struct RunConfig {
    Command command = Command::orbit;
    MapSpec map;
    Schedule schedule;

    long n_transient = 10'000;
    long n_keep = 100'000;
    long lyap_n = 100'000;
    int box_scales = 8;
    int max_period = 64;
    int width = 1024;
    int height = 1024;
    std::optional<std::vector<double>> x0;
    std::uint64_t seed = 1;
    int jobs = 0;
    std::string out_dir = "out";

    /// bifurcation: "norm" or "x<k>" (1-based); samples kept per value.
    std::string projection = "norm";
    long bif_samples = 256;

    // hypothesis
    double search_radius = 8.0;
    int grid = 512;
    double ez_tol = 1e-12;

    // horseshoe / trellis
    std::vector<double> box;     // lo1, lo2, hi1, hi2
    std::vector<double> frame;   // a11, a12, a21, a22; empty: align to a detected saddle
    std::vector<double> offset;  // b1, b2
    double region_scale = 0.1;
    int k_max = 1;
    int saddle_period = 1;
    int sampling = 96;
    double arc_budget = 200.0;
    double manifold_tol = 2e-3;

    void validate() const;
};

/// Parses flat `key = value` text with `#` comments. Throws Error(config)
/// naming the line on any problem.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

}  // namespace azlab
