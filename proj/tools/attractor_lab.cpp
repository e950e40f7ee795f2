// attractor-lab <command> --config <path> [--out <dir>] [--jobs N] [--literal-eq10]

#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "azlab/config.hpp"
#include "azlab/error.hpp"
#include "azlab/runner.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Iterate asymptotically-zero maps and write attractor data"};
    std::string command, config_path, out_dir;
    int jobs = -1;
    bool literal = false;
    app.add_option("command", command, "sweep | orbit | lyapunov | boxdim | hypothesis | horseshoe | trellis | bifurcation")
        ->required();
    app.add_option("--config", config_path, "key = value run configuration")->required();
    app.add_option("--out", out_dir, "output directory (overrides 'out')");
    app.add_option("--jobs", jobs, "worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
    app.add_flag("--literal-eq10", literal, "gauss_rotation: degenerate variant with equal components");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        auto cmd = azlab::parse_command(command);
        if (!cmd) azlab::throw_config("unknown command '" + command + "'");
        azlab::RunConfig cfg = azlab::load_config(config_path);
        cfg.command = *cmd;
        if (!out_dir.empty()) cfg.out_dir = out_dir;
        if (jobs >= 0) cfg.jobs = jobs;
        if (literal) cfg.map.literal_eq10 = true;
        if (const char* env = std::getenv("ATTRACTORLAB_SEED")) {
            char* end = nullptr;
            const unsigned long long s = std::strtoull(env, &end, 10);
            if (!*env || *end) azlab::throw_config("ATTRACTORLAB_SEED must be a nonnegative integer");
            cfg.seed = s;
        }
        const auto res = azlab::run_command(cfg);
        for (const auto& w : res.warnings) std::cerr << "warning: " << w << '\n';
        for (const auto& a : res.artifacts) std::cout << a << '\n';
        return res.exit_code;
    } catch (const azlab::Error& e) {
        std::cerr << "attractor-lab: " << e.what() << '\n';
        return azlab::exit_code(e.kind());
    } catch (const std::exception& e) {
        std::cerr << "attractor-lab: " << e.what() << '\n';
        return 2;
    }
}
