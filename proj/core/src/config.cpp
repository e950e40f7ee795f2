#include "azlab/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include "azlab/error.hpp"

namespace azlab {

namespace {

constexpr std::pair<Command, std::string_view> kCommands[] = {
    {Command::sweep, "sweep"},         {Command::orbit, "orbit"},         {Command::lyapunov, "lyapunov"},
    {Command::boxdim, "boxdim"},       {Command::hypothesis, "hypothesis"}, {Command::horseshoe, "horseshoe"},
    {Command::trellis, "trellis"},     {Command::bifurcation, "bifurcation"},
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v, int line) {
    if (key == "theta" || key.rfind("theta", 0) == 0) {
        if (v == "golden" || v == "phi") return kGoldenMean;
        if (v == "e") return kEuler;
    }
    std::size_t used = 0;
    double out;
    try {
        out = std::stod(v, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != v.size() || v.empty())
        throw_config("line " + std::to_string(line) + ": '" + key + "' expects a number, got '" + v + "'");
    if (!std::isfinite(out)) throw_config("line " + std::to_string(line) + ": '" + key + "' is not finite");
    return out;
}

long to_long(const std::string& key, const std::string& v, int line) {
    const double d = to_double(key, v, line);
    if (d != std::floor(d) || std::abs(d) > 9e15)
        throw_config("line " + std::to_string(line) + ": '" + key + "' expects an integer");
    return static_cast<long>(d);
}

std::vector<double> to_list(const std::string& key, const std::string& v, int line) {
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(to_double(key, trim(item), line));
    return out;
}

bool to_bool(const std::string& key, const std::string& v, int line) {
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw_config("line " + std::to_string(line) + ": '" + key + "' expects true or false");
}

}  // namespace

std::string_view command_name(Command c) {
    for (const auto& [cmd, name] : kCommands)
        if (cmd == c) return name;
    return "unknown";
}

std::optional<Command> parse_command(std::string_view name) {
    for (const auto& [cmd, n] : kCommands)
        if (n == name) return cmd;
    return std::nullopt;
}

std::vector<double> Schedule::values() const {
    if (!active()) return {};
    const double span = (stop - start) / step;
    const long n = static_cast<long>(std::floor(span + 1e-9 * std::max(1.0, std::abs(span)))) + 1;
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) {
        // Round away accumulated binary error at 12 significant decimals.
        const double v = start + static_cast<double>(i) * step;
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.12g", v);
        out.push_back(std::strtod(buf, nullptr));
    }
    return out;
}

void RunConfig::validate() const {
    if (schedule.active()) {
        if (!(schedule.step > 0.0)) throw_config("step must be > 0");
        if (!(schedule.stop >= schedule.start)) throw_config("stop must be >= start");
        if (schedule.values().size() > 1'000'000) throw_config("schedule has more than 10^6 values");
    }
    if (n_transient < 0) throw_config("n_transient must be >= 0");
    if (n_keep <= 0 || lyap_n <= 0 || box_scales <= 0 || max_period <= 0 || width <= 0 || height <= 0 ||
        bif_samples <= 0 || grid <= 0 || k_max <= 0 || saddle_period <= 0 || sampling <= 0)
        throw_config("count knobs must be positive");
    if (!(search_radius > 0.0) || !(ez_tol > 0.0) || !(region_scale > 0.0) || !(arc_budget > 0.0) ||
        !(manifold_tol > 0.0))
        throw_config("numeric knobs must be positive");
    if (jobs < 0) throw_config("jobs must be >= 0 (0 = all cores)");
    if (width > 8192 || height > 8192) throw_config("raster resolution is limited to 8192 per side");
    if (x0 && static_cast<int>(x0->size()) != map.dim) throw_config("x0 must have dim entries");
    if (!box.empty() && box.size() != 4) throw_config("box needs lo1, lo2, hi1, hi2");
    if (!frame.empty() && frame.size() != 4) throw_config("frame needs a11, a12, a21, a22");
    if (!offset.empty() && offset.size() != 2) throw_config("offset needs b1, b2");
    if (projection != "norm") {
        if (projection.size() < 2 || projection[0] != 'x') throw_config("projection must be norm or x<k>");
        const int k = std::atoi(projection.c_str() + 1);
        if (k < 1 || k > map.dim) throw_config("projection coordinate out of range");
    }
}

RunConfig parse_config(const std::string& text) {
    RunConfig cfg;
    std::istringstream is(text);
    std::string raw;
    std::set<std::string> seen;
    bool have_map = false;
    int line = 0;
    std::vector<std::pair<std::string, std::pair<std::string, int>>> params;
    while (std::getline(is, raw)) {
        ++line;
        const auto hash = raw.find('#');
        const std::string body = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) throw_config("line " + std::to_string(line) + ": expected key = value");
        const std::string key = trim(body.substr(0, eq));
        const std::string v = trim(body.substr(eq + 1));
        if (key.empty()) throw_config("line " + std::to_string(line) + ": empty key");
        if (!seen.insert(key).second) throw_config("line " + std::to_string(line) + ": duplicate key '" + key + "'");

        if (key == "map") {
            auto fam = parse_family(v);
            if (!fam) throw_config("line " + std::to_string(line) + ": unknown map family '" + v + "'");
            cfg.map.family = *fam;
            have_map = true;
        } else if (key == "dim") {
            cfg.map.dim = static_cast<int>(to_long(key, v, line));
        } else if (key == "literal_eq10") {
            cfg.map.literal_eq10 = to_bool(key, v, line);
        } else if (key == "command") {
            auto c = parse_command(v);
            if (!c) throw_config("line " + std::to_string(line) + ": unknown command '" + v + "'");
            cfg.command = *c;
        } else if (key == "param") {
            cfg.schedule.param = v;
        } else if (key == "start") {
            cfg.schedule.start = to_double(key, v, line);
        } else if (key == "stop") {
            cfg.schedule.stop = to_double(key, v, line);
        } else if (key == "step") {
            cfg.schedule.step = to_double(key, v, line);
        } else if (key == "n_transient") {
            cfg.n_transient = to_long(key, v, line);
        } else if (key == "n_keep") {
            cfg.n_keep = to_long(key, v, line);
        } else if (key == "lyap_n") {
            cfg.lyap_n = to_long(key, v, line);
        } else if (key == "box_scales") {
            cfg.box_scales = static_cast<int>(to_long(key, v, line));
        } else if (key == "max_period") {
            cfg.max_period = static_cast<int>(to_long(key, v, line));
        } else if (key == "width") {
            cfg.width = static_cast<int>(to_long(key, v, line));
        } else if (key == "height") {
            cfg.height = static_cast<int>(to_long(key, v, line));
        } else if (key == "x0") {
            cfg.x0 = to_list(key, v, line);
        } else if (key == "seed") {
            const long s = to_long(key, v, line);
            if (s < 0) throw_config("line " + std::to_string(line) + ": seed must be >= 0");
            cfg.seed = static_cast<std::uint64_t>(s);
        } else if (key == "jobs") {
            cfg.jobs = static_cast<int>(to_long(key, v, line));
        } else if (key == "out") {
            cfg.out_dir = v;
        } else if (key == "projection") {
            cfg.projection = v;
        } else if (key == "bif_samples") {
            cfg.bif_samples = to_long(key, v, line);
        } else if (key == "search_radius") {
            cfg.search_radius = to_double(key, v, line);
        } else if (key == "grid") {
            cfg.grid = static_cast<int>(to_long(key, v, line));
        } else if (key == "ez_tol") {
            cfg.ez_tol = to_double(key, v, line);
        } else if (key == "box") {
            cfg.box = to_list(key, v, line);
        } else if (key == "frame") {
            cfg.frame = to_list(key, v, line);
        } else if (key == "offset") {
            cfg.offset = to_list(key, v, line);
        } else if (key == "region_scale") {
            cfg.region_scale = to_double(key, v, line);
        } else if (key == "k_max") {
            cfg.k_max = static_cast<int>(to_long(key, v, line));
        } else if (key == "saddle_period") {
            cfg.saddle_period = static_cast<int>(to_long(key, v, line));
        } else if (key == "sampling") {
            cfg.sampling = static_cast<int>(to_long(key, v, line));
        } else if (key == "arc_budget") {
            cfg.arc_budget = to_double(key, v, line);
        } else if (key == "manifold_tol") {
            cfg.manifold_tol = to_double(key, v, line);
        } else {
            params.push_back({key, {v, line}});
        }
    }
    if (!have_map) throw_config("config needs a 'map' key");
    for (const auto& [key, vl] : params) cfg.map.set(key, to_double(key, vl.first, vl.second));
    cfg.validate();
    return cfg;
}

RunConfig load_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw_io("cannot read config " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return parse_config(ss.str());
}

}  // namespace azlab
