#include "azlab/runner.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include "azlab/chaos.hpp"
#include "azlab/dynamics.hpp"
#include "azlab/error.hpp"
#include "azlab/horseshoe.hpp"
#include "azlab/hypothesis.hpp"
#include "azlab/raster.hpp"

namespace fs = std::filesystem;

namespace azlab {

std::string format_number(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw_io("cannot open " + path + " for writing");
    return os;
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) throw_io("cannot create output directory " + dir);
    // Probe writability up front so a sweep fails before doing work.
    const auto probe = (fs::path(dir) / ".azlab_probe").string();
    {
        std::ofstream os(probe);
        if (!os) throw_io("output directory " + dir + " is not writable");
    }
    fs::remove(probe, ec);
}

std::string join(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

std::string indexed(const std::string& stem, std::size_t i, const std::string& ext) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%s_%03zu.%s", stem.c_str(), i, ext.c_str());
    return buf;
}

int worker_count(const RunConfig& cfg, std::size_t tasks) {
    int jobs = cfg.jobs > 0 ? cfg.jobs : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    return static_cast<int>(std::max<std::size_t>(1, std::min<std::size_t>(jobs, tasks)));
}

/// Runs task(i) for i in [0, n) on a small pool; results go to caller-owned slots.
template <class Task>
void parallel_for(std::size_t n, int jobs, Task task) {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < n; i = next++) task(i);
    };
    if (jobs <= 1) {
        worker();
        return;
    }
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
}

MapSpec spec_at(const RunConfig& cfg, double value) {
    MapSpec spec = cfg.map;
    if (cfg.schedule.active()) spec.set(cfg.schedule.param, value);
    return spec;
}

/// Initial point: the configured x0, or a seeded draw in (0.05, 1]^m.
Vec start_point(const RunConfig& cfg, std::size_t index) {
    Vec x(cfg.map.dim);
    if (cfg.x0) {
        for (int k = 0; k < cfg.map.dim; ++k) x(k) = (*cfg.x0)[k];
        return x;
    }
    std::mt19937_64 rng(cfg.seed * 0x9e3779b97f4a7c15ULL + index);
    std::uniform_real_distribution<double> u(0.05, 1.0);
    for (int k = 0; k < cfg.map.dim; ++k) x(k) = u(rng);
    return x;
}

}  // namespace

void write_cloud_csv(const PointCloud& cloud, const std::string& path) {
    auto os = open_out(path);
    os << 'i';
    for (int k = 1; k <= cloud.dim(); ++k) os << ",x" << k;
    if (cloud.has_labels()) os << ",label";
    os << '\n';
    std::string line;
    for (std::size_t i = 0; i < cloud.size(); ++i) {
        line = std::to_string(i);
        for (int k = 0; k < cloud.dim(); ++k) {
            line += ',';
            line += format_number(cloud.coord(i, k));
        }
        if (cloud.has_labels()) line += ',' + std::to_string(cloud.label(i));
        line += '\n';
        os << line;
    }
    if (!os) throw_io("failed writing " + path);
}

RunResult run_sweep(const RunConfig& cfg) {
    cfg.validate();
    std::vector<double> values = cfg.schedule.active() ? cfg.schedule.values() : std::vector<double>{0.0};
    const std::string param = cfg.schedule.active() ? cfg.schedule.param : "none";
    // Reject a bad map before any work.
    build_map(spec_at(cfg, values.front()));
    ensure_dir(cfg.out_dir);

    struct Row {
        std::string period = "NA", normsum = "NA", qr = "NA", boxdim = "NA", r2 = "NA", status = "ok";
        double seconds = 0.0;
        std::string warning;
    };
    std::vector<Row> rows(values.size());
    std::vector<std::string> io_errors(values.size());

    parallel_for(values.size(), worker_count(cfg, values.size()), [&](std::size_t i) {
        Row& row = rows[i];
        const auto t0 = std::chrono::steady_clock::now();
        try {
            const MapHandle map = build_map(spec_at(cfg, values[i]));
            const Vec x0 = start_point(cfg, i);
            PointCloud cloud = orbit(map, x0, cfg.n_transient, cfg.n_keep);
            write_cloud_csv(cloud, join(cfg.out_dir, indexed("cloud", i, "csv")));
            const Raster r = render_raster(cloud, cloud_bounds(cloud), cfg.width, cfg.height,
                                           join(cfg.out_dir, indexed("cloud", i, "pgm")));
            if (r.empty_cloud) row.warning = "empty cloud at " + format_number(values[i]);
            if (cloud.size() >= 3 * static_cast<std::size_t>(cfg.max_period)) {
                const auto per = detect_period(cloud, cfg.max_period);
                row.period = per ? std::to_string(*per) : "aperiodic";
            }
            const Vec xl = cloud.point(cloud.size() - 1);
            row.normsum = format_number(max_lyapunov_norm_sum(map, xl, std::max(100L, cfg.lyap_n), 0).max_exponent);
            row.qr = format_number(lyapunov_spectrum_qr(map, xl, std::max(100L, cfg.lyap_n), 0).max_exponent);
            if (cloud.size() >= 1000) {
                const auto bc = box_counting_dimension(cloud, std::max(5, cfg.box_scales));
                row.boxdim = format_number(bc.dimension);
                row.r2 = format_number(bc.r2);
            }
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::io) io_errors[i] = e.what();
            std::string msg = e.what();
            std::replace(msg.begin(), msg.end(), ',', ';');
            std::replace(msg.begin(), msg.end(), '\n', ' ');
            row.status = std::string(e.kind() == ErrorKind::io ? "io_error: " : "error: ") + msg;
        } catch (const std::exception& e) {
            std::string msg = e.what();
            std::replace(msg.begin(), msg.end(), ',', ';');
            row.status = "error: " + msg;
        }
        row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    });

    RunResult res;
    {
        const std::string path = join(cfg.out_dir, "summary.csv");
        auto os = open_out(path);
        os << "param,period,lyap_normsum,lyap_qr_max,boxdim,boxdim_r2,status,seconds\n";
        for (std::size_t i = 0; i < values.size(); ++i) {
            const Row& r = rows[i];
            os << format_number(values[i]) << ',' << r.period << ',' << r.normsum << ',' << r.qr << ',' << r.boxdim
               << ',' << r.r2 << ',' << r.status << ',' << format_number(r.seconds) << '\n';
            if (r.status != "ok") res.exit_code = 2;
            if (!r.warning.empty()) res.warnings.push_back(r.warning);
        }
        if (!os) throw_io("failed writing " + path);
        res.artifacts.push_back(path);
    }
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (rows[i].status == "ok") {
            res.artifacts.push_back(join(cfg.out_dir, indexed("cloud", i, "csv")));
            res.artifacts.push_back(join(cfg.out_dir, indexed("cloud", i, "pgm")));
        } else {
            res.warnings.push_back(param + " = " + format_number(values[i]) + ": " + rows[i].status);
        }
    }
    for (const auto& e : io_errors)
        if (!e.empty()) res.exit_code = 3;
    return res;
}

RunResult bifurcation_scan(const RunConfig& cfg) {
    cfg.validate();
    if (!cfg.schedule.active()) throw_config("bifurcation scans need a schedule (param, start, stop, step)");
    const auto values = cfg.schedule.values();
    if (values.size() < 100) throw_config("bifurcation scans need at least 100 schedule values");
    build_map(spec_at(cfg, values.front()));
    ensure_dir(cfg.out_dir);
    const int coord = cfg.projection == "norm" ? -1 : std::atoi(cfg.projection.c_str() + 1) - 1;

    std::vector<std::string> blocks(values.size()), periods(values.size()), failures(values.size());
    parallel_for(values.size(), worker_count(cfg, values.size()), [&](std::size_t i) {
        try {
            const MapHandle map = build_map(spec_at(cfg, values[i]));
            const long keep = std::max<long>(cfg.bif_samples, 3L * cfg.max_period);
            const PointCloud cloud = orbit(map, start_point(cfg, i), cfg.n_transient, keep);
            const auto per = detect_period(cloud, cfg.max_period);
            periods[i] = per ? std::to_string(*per) : "aperiodic";
            std::string out;
            const std::string p = format_number(values[i]);
            for (std::size_t j = cloud.size() - static_cast<std::size_t>(cfg.bif_samples); j < cloud.size(); ++j) {
                const double v = coord < 0 ? cloud.point(j).norm() : cloud.coord(j, coord);
                out += p + ',' + format_number(v) + '\n';
            }
            blocks[i] = std::move(out);
        } catch (const Error& e) {
            std::string msg = e.what();
            std::replace(msg.begin(), msg.end(), ',', ';');
            failures[i] = msg;
            periods[i] = "NA";
        }
    });

    RunResult res;
    const std::string path = join(cfg.out_dir, "bifurcation.csv");
    {
        auto os = open_out(path);
        os << "param,value\n";
        for (const auto& b : blocks) os << b;
        if (!os) throw_io("failed writing " + path);
    }
    const std::string ppath = join(cfg.out_dir, "bifurcation_periods.csv");
    {
        auto os = open_out(ppath);
        os << "param,period,status\n";
        for (std::size_t i = 0; i < values.size(); ++i) {
            os << format_number(values[i]) << ',' << periods[i] << ','
               << (failures[i].empty() ? "ok" : "error: " + failures[i]) << '\n';
            if (!failures[i].empty()) res.exit_code = 2;
        }
        if (!os) throw_io("failed writing " + ppath);
    }
    res.artifacts = {path, ppath};
    return res;
}

namespace {

RunResult run_orbit(const RunConfig& cfg) {
    const MapHandle map = build_map(spec_at(cfg, cfg.schedule.active() ? cfg.schedule.start : 0.0));
    ensure_dir(cfg.out_dir);
    const PointCloud cloud = orbit(map, start_point(cfg, 0), cfg.n_transient, cfg.n_keep);
    RunResult res;
    const auto csv = join(cfg.out_dir, "orbit.csv");
    const auto pgm = join(cfg.out_dir, "orbit.pgm");
    write_cloud_csv(cloud, csv);
    if (cloud.dim() >= 2 && render_raster(cloud, cloud_bounds(cloud), cfg.width, cfg.height, pgm).empty_cloud)
        res.warnings.push_back("empty cloud");
    res.artifacts = {csv};
    if (cloud.dim() >= 2) res.artifacts.push_back(pgm);
    return res;
}

RunResult run_lyapunov(const RunConfig& cfg) {
    const MapHandle map = build_map(spec_at(cfg, cfg.schedule.active() ? cfg.schedule.start : 0.0));
    ensure_dir(cfg.out_dir);
    const Vec x0 = start_point(cfg, 0);
    const auto ns = max_lyapunov_norm_sum(map, x0, std::max(100L, cfg.lyap_n), cfg.n_transient);
    const auto qr = lyapunov_spectrum_qr(map, x0, std::max(100L, cfg.lyap_n), cfg.n_transient);
    const auto path = join(cfg.out_dir, "lyapunov.csv");
    auto os = open_out(path);
    os << "method,index,exponent\n";
    os << "norm_sum,0," << format_number(ns.max_exponent) << '\n';
    for (std::size_t i = 0; i < qr.spectrum.size(); ++i)
        os << "qr_spectrum," << i << ',' << format_number(qr.spectrum[i]) << '\n';
    const auto tpath = join(cfg.out_dir, "lyapunov_trace.csv");
    auto ts = open_out(tpath);
    ts << "step,norm_sum,qr_max\n";
    for (std::size_t i = 0; i < std::min(ns.convergence_trace.size(), qr.convergence_trace.size()); ++i)
        ts << (i + 1) * 100 << ',' << format_number(ns.convergence_trace[i]) << ','
           << format_number(qr.convergence_trace[i]) << '\n';
    RunResult res;
    res.artifacts = {path, tpath};
    if (ns.degenerate || qr.degenerate) res.warnings.push_back("degenerate Jacobian along the orbit");
    return res;
}

RunResult run_boxdim(const RunConfig& cfg) {
    const MapHandle map = build_map(spec_at(cfg, cfg.schedule.active() ? cfg.schedule.start : 0.0));
    ensure_dir(cfg.out_dir);
    const PointCloud cloud = orbit(map, start_point(cfg, 0), cfg.n_transient, cfg.n_keep);
    const auto bc = box_counting_dimension(cloud, cfg.box_scales);
    const auto path = join(cfg.out_dir, "boxdim.csv");
    auto os = open_out(path);
    os << "scale,count,used\n";
    for (std::size_t i = 0; i < bc.scales.size(); ++i)
        os << format_number(bc.scales[i]) << ',' << bc.counts[i] << ','
           << (static_cast<int>(i) >= bc.window_begin && static_cast<int>(i) < bc.window_end ? 1 : 0) << '\n';
    os << "# dimension=" << format_number(bc.dimension) << " raw_slope=" << format_number(bc.raw_slope)
       << " r2=" << format_number(bc.r2) << '\n';
    RunResult res;
    res.artifacts = {path};
    if (bc.degenerate) res.warnings.push_back("all points identical; dimension 0");
    return res;
}

RunResult run_hypothesis(const RunConfig& cfg) {
    const MapHandle map = build_map(spec_at(cfg, cfg.schedule.active() ? cfg.schedule.start : 0.0));
    ensure_dir(cfg.out_dir);
    HypothesisOptions opt;
    opt.search_radius = cfg.search_radius;
    opt.grid = cfg.grid;
    opt.ez_tol = cfg.ez_tol;
    const auto rep = check_hypotheses(map, opt);
    const auto path = join(cfg.out_dir, "hypothesis.txt");
    auto os = open_out(path);
    os << rep.to_text();
    RunResult res;
    res.artifacts = {path};
    return res;
}

Vec box_lo(const RunConfig& cfg, const MapHandle& map) {
    Vec v(map.dim());
    if (cfg.box.size() == 4) {
        v << cfg.box[0], cfg.box[1];
    } else {
        v.setConstant(map.domain() == Domain::nonnegative_orthant ? 0.0 : -cfg.search_radius);
    }
    return v;
}

Vec box_hi(const RunConfig& cfg, const MapHandle& map) {
    Vec v(map.dim());
    if (cfg.box.size() == 4)
        v << cfg.box[2], cfg.box[3];
    else
        v.setConstant(cfg.search_radius);
    return v;
}

/// First saddle of the requested period with one real expanding direction,
/// preferring points off the coordinate axes.
std::optional<Cycle> pick_saddle(const std::vector<Cycle>& cycles, int period) {
    std::optional<Cycle> fallback;
    for (const auto& c : cycles) {
        if (c.period != period || c.stability != Stability::saddle || c.unstable_dir.size() == 0) continue;
        int expanding = 0;
        for (auto mu : c.multipliers) expanding += std::abs(mu) > 1.0 + kHyperbolicMargin;
        if (expanding != 1) continue;
        bool interior = true;
        for (const auto& p : c.points) interior = interior && p.cwiseAbs().minCoeff() > 1e-6;
        if (interior) return c;
        if (!fallback) fallback = c;
    }
    return fallback;
}

void write_cycles(const std::vector<Cycle>& cycles, const std::string& path) {
    auto os = open_out(path);
    os << "cycle,period,point,x1,x2,class,mult1_re,mult1_im,mult2_re,mult2_im\n";
    for (std::size_t c = 0; c < cycles.size(); ++c) {
        const auto& cy = cycles[c];
        for (std::size_t j = 0; j < cy.points.size(); ++j) {
            os << c << ',' << cy.period << ',' << j;
            for (int k = 0; k < cy.points[j].size(); ++k) os << ',' << format_number(cy.points[j](k));
            os << ',' << stability_name(cy.stability);
            for (const auto& mu : cy.multipliers) os << ',' << format_number(mu.real()) << ',' << format_number(mu.imag());
            os << '\n';
        }
    }
}

RunResult run_horseshoe(const RunConfig& cfg) {
    const MapHandle map = build_map(spec_at(cfg, cfg.schedule.active() ? cfg.schedule.start : 0.0));
    if (map.dim() != 2) throw_config("horseshoe command needs a planar map");
    ensure_dir(cfg.out_dir);
    RunResult res;
    HorseshoeRegion region;
    if (cfg.frame.size() == 4) {
        Mat a(2, 2);
        a << cfg.frame[0], cfg.frame[1], cfg.frame[2], cfg.frame[3];
        Vec b = Vec::Zero(2);
        if (cfg.offset.size() == 2) b << cfg.offset[0], cfg.offset[1];
        region = HorseshoeRegion(a, b);
    } else if (map.spec().family == MapFamily::affine_horseshoe) {
        region = HorseshoeRegion();
    } else {
        const auto cycles = find_saddles(map, box_lo(cfg, map), box_hi(cfg, map), 1);
        const auto path = join(cfg.out_dir, "saddles.csv");
        write_cycles(cycles, path);
        res.artifacts.push_back(path);
        const auto s = pick_saddle(cycles, 1);
        if (!s) throw_numeric("no saddle fixed point found in the search box to place a region");
        region = HorseshoeRegion::aligned(s->points[0], s->stable_dir, s->unstable_dir, cfg.region_scale);
    }
    const AHReport rep = verify_ah(map, region, cfg.sampling);
    const auto path = join(cfg.out_dir, "ah_report.txt");
    auto os = open_out(path);
    os << "# frame " << format_number(region.frame()(0, 0)) << ' ' << format_number(region.frame()(0, 1)) << ' '
       << format_number(region.frame()(1, 0)) << ' ' << format_number(region.frame()(1, 1)) << " offset "
       << format_number(region.offset()(0)) << ' ' << format_number(region.offset()(1)) << '\n';
    os << rep.checks.to_text();
    res.artifacts.push_back(path);
    return res;
}

RunResult run_trellis(const RunConfig& cfg) {
    const MapHandle map = build_map(spec_at(cfg, cfg.schedule.active() ? cfg.schedule.start : 0.0));
    ensure_dir(cfg.out_dir);
    RunResult res;
    const auto cycles = find_saddles(map, box_lo(cfg, map), box_hi(cfg, map), std::max(cfg.k_max, cfg.saddle_period));
    const auto spath = join(cfg.out_dir, "saddles.csv");
    write_cycles(cycles, spath);
    res.artifacts.push_back(spath);
    const auto s = pick_saddle(cycles, cfg.saddle_period);
    if (!s) throw_numeric("no saddle cycle of period " + std::to_string(cfg.saddle_period) + " in the search box");
    const auto tr = trellis(map, *s, cfg.arc_budget, cfg.manifold_tol);
    if (tr.truncated) res.warnings.push_back(tr.diagnostic);
    const auto csv = join(cfg.out_dir, "trellis.csv");
    const auto pgm = join(cfg.out_dir, "trellis.pgm");
    write_cloud_csv(tr.cloud, csv);
    render_raster(tr.cloud, cloud_bounds(tr.cloud), cfg.width, cfg.height, pgm);
    res.artifacts.push_back(csv);
    res.artifacts.push_back(pgm);
    if (tr.cloud.size() >= 1000) {
        const auto bc = box_counting_dimension(tr.cloud, cfg.box_scales);
        const auto path = join(cfg.out_dir, "trellis_summary.csv");
        auto os = open_out(path);
        os << "points,arc_length,boxdim,boxdim_r2,truncated\n"
           << tr.cloud.size() << ',' << format_number(tr.arc_length) << ',' << format_number(bc.dimension) << ','
           << format_number(bc.r2) << ',' << (tr.truncated ? 1 : 0) << '\n';
        res.artifacts.push_back(path);
    }
    return res;
}

}  // namespace

RunResult run_command(const RunConfig& cfg) {
    cfg.validate();
    switch (cfg.command) {
    case Command::sweep: return run_sweep(cfg);
    case Command::bifurcation: return bifurcation_scan(cfg);
    case Command::orbit: return run_orbit(cfg);
    case Command::lyapunov: return run_lyapunov(cfg);
    case Command::boxdim: return run_boxdim(cfg);
    case Command::hypothesis: return run_hypothesis(cfg);
    case Command::horseshoe: return run_horseshoe(cfg);
    case Command::trellis: return run_trellis(cfg);
    }
    throw_config("unknown command");
}

}  // namespace azlab
