#include "azlab/hypothesis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "azlab/dynamics.hpp"
#include "azlab/error.hpp"

namespace azlab {

std::string_view status_name(CheckStatus s) {
    switch (s) {
    case CheckStatus::pass: return "pass";
    case CheckStatus::fail: return "fail";
    case CheckStatus::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

std::optional<CheckStatus> parse_status(std::string_view s) {
    if (s == "pass") return CheckStatus::pass;
    if (s == "fail") return CheckStatus::fail;
    if (s == "inconclusive") return CheckStatus::inconclusive;
    return std::nullopt;
}

const Check* HypothesisReport::find(std::string_view name) const {
    for (const auto& c : checks)
        if (c.name == name) return &c;
    return nullptr;
}

bool HypothesisReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.status == CheckStatus::pass; });
}

namespace {

std::string clean(std::string s) {
    for (char& ch : s)
        if (ch == '\t' || ch == '\n' || ch == '\r') ch = ' ';
    return s;
}

std::string num17(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

std::string point_str(const Vec& x) {
    std::string s = "(";
    for (int k = 0; k < x.size(); ++k) {
        if (k) s += ", ";
        s += num17(x(k));
    }
    return s + ")";
}

}  // namespace

std::string HypothesisReport::to_text() const {
    std::string out = "name\tstatus\twitness\ttolerance\tcondition\n";
    for (const auto& c : checks) {
        out += clean(c.name) + '\t' + std::string(status_name(c.status)) + '\t' + clean(c.witness) + '\t' +
               num17(c.tolerance) + '\t' + clean(c.condition) + '\n';
    }
    return out;
}

HypothesisReport HypothesisReport::parse(const std::string& text) {
    HypothesisReport rep;
    std::istringstream is(text);
    std::string line;
    bool header = true;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        if (header) {
            header = false;
            if (line.rfind("name\t", 0) == 0) continue;
        }
        std::vector<std::string> f;
        std::size_t pos = 0;
        while (true) {
            const auto tab = line.find('\t', pos);
            f.push_back(line.substr(pos, tab - pos));
            if (tab == std::string::npos) break;
            pos = tab + 1;
        }
        if (f.size() != 5) throw_config("report line needs 5 tab-separated fields: " + line);
        Check c;
        c.name = f[0];
        auto st = parse_status(f[1]);
        if (!st) throw_config("unknown check status '" + f[1] + "'");
        c.status = *st;
        c.witness = f[2];
        try {
            c.tolerance = std::stod(f[3]);
        } catch (const std::exception&) {
            throw_config("bad tolerance '" + f[3] + "'");
        }
        c.condition = f[4];
        rep.checks.push_back(std::move(c));
    }
    return rep;
}

namespace {

bool orthant(const MapHandle& map) { return map.domain() == Domain::nonnegative_orthant; }

// Unit directions: evenly spaced angles in the plane, seeded Gaussian
// samples otherwise. Orthant maps get directions in the closed orthant.
std::vector<Vec> directions(const MapHandle& map, int n) {
    const int m = map.dim();
    std::vector<Vec> out;
    out.reserve(n);
    if (m == 1) {
        Vec u(1);
        u << 1.0;
        out.push_back(u);
        if (!orthant(map)) out.push_back(-u);
        return out;
    }
    if (m == 2) {
        for (int i = 0; i < n; ++i) {
            const double t = orthant(map) ? 0.5 * kPi * i / std::max(1, n - 1) : 2.0 * kPi * i / n;
            Vec u(2);
            u << std::cos(t), std::sin(t);
            out.push_back(u);
        }
        return out;
    }
    std::mt19937_64 rng(0x5eed);
    std::normal_distribution<double> g;
    for (int i = 0; i < n; ++i) {
        Vec u(m);
        for (int k = 0; k < m; ++k) u(k) = orthant(map) ? std::abs(g(rng)) : g(rng);
        out.push_back(u.normalized());
    }
    return out;
}

double golden_max(const std::function<double(double)>& g, double a, double b) {
    const double r = 0.5 * (std::sqrt(5.0) - 1.0);
    double c = b - r * (b - a), d = a + r * (b - a);
    double gc = g(c), gd = g(d);
    while (b - a > 1e-13 * std::max(1.0, std::abs(a) + std::abs(b))) {
        if (gc >= gd) {
            b = d;
            d = c;
            gd = gc;
            c = b - r * (b - a);
            gc = g(c);
        } else {
            a = c;
            c = d;
            gc = gd;
            d = a + r * (b - a);
            gd = g(d);
        }
    }
    return 0.5 * (a + b);
}

}  // namespace

SupNorm estimate_sup_norm(const MapHandle& map, double search_radius, int grid) {
    if (!(search_radius > 0.0) || grid < 3) throw_config("sup-norm search needs a positive radius and grid >= 3");
    const int m = map.dim();
    const bool pos = orthant(map);
    int n = std::min(grid, std::max(3, static_cast<int>(std::pow(2.0e6, 1.0 / m))));
    if (!pos && n % 2 == 0) ++n;  // odd, so the grid contains the origin and the axes
    const double lo = pos ? 0.0 : -search_radius;
    const double step = (search_radius - lo) / (n - 1);

    long long total = 1;
    for (int k = 0; k < m; ++k) total *= n;
    std::vector<double> val(static_cast<std::size_t>(total));
    double boundary_max = 0.0;
    Vec x(m);
    int idx[kMaxDim];
    for (long long c = 0; c < total; ++c) {
        long long rem = c;
        bool on_boundary = false;
        for (int k = 0; k < m; ++k) {
            idx[k] = static_cast<int>(rem % n);
            rem /= n;
            x(k) = lo + step * idx[k];
            if (idx[k] == n - 1 || (!pos && idx[k] == 0)) on_boundary = true;
        }
        const double v = map(x).norm();
        val[c] = std::isfinite(v) ? v : 0.0;
        if (on_boundary) boundary_max = std::max(boundary_max, val[c]);
    }

    // Local maxima among axis neighbors, best first.
    std::vector<long long> cand;
    const double best_grid = *std::max_element(val.begin(), val.end());
    for (long long c = 0; c < total; ++c) {
        if (val[c] < 0.5 * best_grid) continue;
        long long stride = 1;
        bool is_max = true;
        long long rem = c;
        for (int k = 0; k < m && is_max; ++k) {
            const int i = static_cast<int>(rem % n);
            rem /= n;
            if (i > 0 && val[c - stride] > val[c]) is_max = false;
            if (i < n - 1 && val[c + stride] > val[c]) is_max = false;
            stride *= n;
        }
        if (is_max) cand.push_back(c);
    }
    std::stable_sort(cand.begin(), cand.end(), [&](long long a, long long b) { return val[a] > val[b]; });
    if (cand.size() > 64) cand.resize(64);

    SupNorm out;
    std::vector<std::pair<double, Vec>> refined;
    for (long long c : cand) {
        long long rem = c;
        for (int k = 0; k < m; ++k) {
            x(k) = lo + step * static_cast<double>(rem % n);
            rem /= n;
        }
        for (int pass = 0; pass < 4; ++pass) {
            for (int k = 0; k < m; ++k) {
                const double a = pos ? std::max(0.0, x(k) - step) : x(k) - step;
                const double b = x(k) + step;
                Vec y = x;
                auto g = [&](double t) {
                    y(k) = t;
                    return map(y).norm();
                };
                const double t = golden_max(g, a, b);
                Vec trial = x;
                trial(k) = t;
                if (map(trial).norm() >= map(x).norm()) x = trial;
            }
        }
        refined.emplace_back(map(x).norm(), x);
    }
    for (const auto& [v, p] : refined) {
        if (v > out.M) {
            out.M = v;
            out.argmax = p;
        }
    }
    for (const auto& [v, p] : refined)
        if (v >= out.M * (1.0 - 1e-6)) out.R_M = std::max(out.R_M, p.norm());
    if (out.argmax.size() == 0) out.argmax = Vec::Zero(m);
    if (!(boundary_max < out.M / 10.0)) {
        out.conclusive = false;
        std::ostringstream os;
        os << "|f| reaches " << boundary_max << " on the search boundary (M = " << out.M
           << "); enlarge the search radius";
        out.diagnostic = os.str();
    }
    return out;
}

DecayProfile az_decay_profile(const MapHandle& map, const std::vector<double>& radii, double M, int n_directions) {
    if (radii.empty()) throw_config("decay profile needs radii");
    for (std::size_t i = 1; i < radii.size(); ++i)
        if (!(radii[i] > radii[i - 1])) throw_config("decay profile radii must increase");
    const auto dirs = directions(map, n_directions);
    DecayProfile prof;
    prof.radii = radii;
    for (double r : radii) {
        double best = 0.0;
        for (const Vec& u : dirs) {
            const double v = map(Vec(r * u)).norm();
            best = std::max(best, std::isfinite(v) ? v : std::numeric_limits<double>::infinity());
        }
        prof.values.push_back(best);
    }
    const auto peak = std::max_element(prof.values.begin(), prof.values.end()) - prof.values.begin();
    const double scale = M > 0.0 ? M : prof.values[peak];
    prof.verdict = CheckStatus::pass;
    for (std::size_t i = peak + 1; i < prof.values.size(); ++i) {
        if (prof.values[i] > prof.values[i - 1]) {
            prof.verdict = CheckStatus::fail;
            prof.witness = "profile increases from " + num17(prof.values[i - 1]) + " to " + num17(prof.values[i]) +
                           " at r = " + num17(radii[i]);
            return prof;
        }
    }
    if (!(prof.values.back() < 1e-9 * scale)) {
        prof.verdict = CheckStatus::fail;
        prof.witness = "max |f| at r = " + num17(radii.back()) + " is " + num17(prof.values.back()) +
                       ", not below 1e-9 * " + num17(scale);
    } else {
        prof.witness = "max |f| at r = " + num17(radii.back()) + " is " + num17(prof.values.back());
    }
    return prof;
}

EzResult ez_check(const MapHandle& map, std::vector<double> R_candidates, double tol, int n_directions) {
    if (!(tol > 0.0)) throw_config("EZ tolerance must be positive");
    std::sort(R_candidates.begin(), R_candidates.end());
    const auto dirs = directions(map, n_directions);
    EzResult out;
    for (double R : R_candidates) {
        if (!(R > 0.0)) throw_config("EZ candidate radii must be positive");
        double sup = 0.0;
        // Shell samples from R out to 4R.
        for (int k = 0; k <= 60; ++k) {
            const double r = R * (1.0 + 0.05 * k);
            // stableNorm: squaring tiny components would underflow to an exact zero.
            for (const Vec& u : dirs) sup = std::max(sup, map(Vec(r * u)).stableNorm());
        }
        out.shell_sup.push_back(sup);
        if (!out.strict_radius && sup == 0.0) out.strict_radius = R;
        if (!out.numeric_radius && sup <= tol) out.numeric_radius = R;
    }
    return out;
}

ContractionVerdict origin_contraction_check(const MapHandle& map, double R_M, int grid) {
    if (!(R_M > 0.0)) throw_config("origin contraction check needs R_M > 0");
    const Vec zero = Vec::Zero(map.dim());
    const double f0 = map(zero).norm();
    if (!(f0 <= 1e-12)) throw_config("origin contraction check not applicable: |f(0)| = " + num17(f0));
    const auto dirs = directions(map, std::max(8, grid / 2));
    std::vector<double> radii;
    for (int k = 0; k < 40; ++k) radii.push_back(R_M * std::pow(10.0, -8.0 + 8.0 * k / 40.0));
    for (int k = 1; k <= grid; ++k) radii.push_back(R_M * k / grid);
    ContractionVerdict out;
    out.max_ratio = -1.0;
    for (double r : radii) {
        for (const Vec& u : dirs) {
            const Vec x = r * u;
            const double ratio = map(x).norm() / r;
            if (ratio > out.max_ratio) {
                out.max_ratio = ratio;
                out.witness = x;
            }
        }
    }
    if (out.max_ratio < 1.0 - 1e-9)
        out.status = CheckStatus::pass;
    else if (out.max_ratio > 1.0 + 1e-9)
        out.status = CheckStatus::fail;
    else
        out.status = CheckStatus::inconclusive;
    return out;
}

PointCloud attracting_set_sample(const MapHandle& map, long n_iterates, double M, int grid) {
    if (n_iterates < 0) throw_config("n_iterates must be nonnegative");
    if (!(M > 0.0) || grid < 2) throw_config("attracting-set sampling needs M > 0 and grid >= 2");
    const int m = map.dim();
    const bool pos = orthant(map);
    int n = grid;
    if (!pos && n % 2 == 0) ++n;
    const double lo = pos ? 0.0 : -M;
    const double step = (M - lo) / (n - 1);
    long long total = 1;
    for (int k = 0; k < m; ++k) total *= n;
    PointCloud cloud(m, false);
    cloud.meta.map_name = map.name();
    cloud.meta.spec = map.spec();
    cloud.meta.n_transient = n_iterates;
    Vec x(m);
    for (long long c = 0; c < total; ++c) {
        long long rem = c;
        for (int k = 0; k < m; ++k) {
            x(k) = lo + step * static_cast<double>(rem % n);
            rem /= n;
        }
        if (x.norm() > M) continue;
        Vec y = x;
        for (long i = 0; i < n_iterates; ++i) y = map(y);
        if (y.allFinite()) cloud.push_back(y);
    }
    return cloud;
}

HypothesisReport check_hypotheses(const MapHandle& map, const HypothesisOptions& opt) {
    HypothesisReport rep;
    const SupNorm sup = estimate_sup_norm(map, opt.search_radius, opt.grid);
    {
        Check c{"sup_norm", sup.conclusive ? CheckStatus::pass : CheckStatus::inconclusive,
                "M = " + num17(sup.M) + " at " + point_str(sup.argmax) + ", R_M = " + num17(sup.R_M) +
                    (sup.conclusive ? "" : "; " + sup.diagnostic),
                0.1, "|f| attains a finite maximum M inside the search box (boundary values below M/10)"};
        rep.checks.push_back(std::move(c));
    }
    {
        std::vector<double> radii;
        const double r_hi = std::max(10.0, 2.0 * opt.search_radius);
        for (int k = 0; k < 48; ++k) radii.push_back(0.25 * std::pow(r_hi / 0.25, k / 47.0));
        const auto prof = az_decay_profile(map, radii, sup.M);
        rep.checks.push_back({"decay_at_infinity", prof.verdict, prof.witness, 1e-9,
                              "max |f| over spheres eventually decreases and drops below 1e-9 M"});
    }
    {
        std::vector<double> cands;
        for (int k = 1; k <= 40; ++k) cands.push_back(0.5 * k);
        const auto ez = ez_check(map, cands, opt.ez_tol);
        rep.checks.push_back({"vanishes_outside_ball", ez.strict_radius ? CheckStatus::pass : CheckStatus::fail,
                              ez.strict_radius ? "f == 0 for sampled |x| >= " + num17(*ez.strict_radius)
                                               : "sampled |f| beyond r = 20 is " + num17(ez.shell_sup.back()),
                              0.0, "f is exactly zero outside some ball"});
        rep.checks.push_back({"numerically_vanishes_outside_ball",
                              ez.numeric_radius ? CheckStatus::pass : CheckStatus::fail,
                              ez.numeric_radius ? "|f| <= tol for sampled |x| >= " + num17(*ez.numeric_radius)
                                                : "sampled |f| beyond r = 20 is " + num17(ez.shell_sup.back()),
                              opt.ez_tol, "|f| is below the tolerance outside some ball"});
    }
    const Vec zero = Vec::Zero(map.dim());
    const double f0 = map(zero).norm();
    rep.checks.push_back({"origin_fixed", f0 <= 1e-12 ? CheckStatus::pass : CheckStatus::fail,
                          "|f(0)| = " + num17(f0), 1e-12, "the origin is a fixed point"});
    if (f0 <= 1e-12 && sup.R_M > 0.0) {
        const auto v = origin_contraction_check(map, sup.R_M, std::min(opt.grid, 256));
        rep.checks.push_back({"origin_contracts_on_ball", v.status,
                              "max |f(x)|/|x| = " + num17(v.max_ratio) + " at " + point_str(v.witness), 1e-9,
                              "|f(x)| < |x| for 0 < |x| <= R_M, making the origin globally attracting"});
    }
    {
        // Fixed points from a seed grid must lie in the ball of radius M.
        const int m = map.dim();
        const bool pos = orthant(map);
        const int s = m <= 2 ? 9 : 3;
        long long total = 1;
        for (int k = 0; k < m; ++k) total *= s;
        double worst = 0.0;
        Vec worst_p = zero;
        int found = 0;
        for (long long c = 0; c < total; ++c) {
            Vec seed(m);
            long long rem = c;
            for (int k = 0; k < m; ++k) {
                const double t = static_cast<double>(rem % s) / (s - 1);
                rem /= s;
                seed(k) = pos ? t * sup.M : (2.0 * t - 1.0) * sup.M;
            }
            try {
                const Cycle cyc = find_cycle(map, 1, seed);
                ++found;
                if (cyc.points[0].norm() > worst) {
                    worst = cyc.points[0].norm();
                    worst_p = cyc.points[0];
                }
            } catch (const Error&) {
            }
        }
        const bool ok = worst <= sup.M + 1e-9;
        rep.checks.push_back({"fixed_points_in_ball", ok ? CheckStatus::pass : CheckStatus::fail,
                              std::to_string(found) + " Newton roots; largest |p| = " + num17(worst) + " at " +
                                  point_str(worst_p),
                              1e-9, "every fixed point lies in the closed ball of radius M"});
    }
    {
        // One step lands in the ball of radius M from anywhere.
        std::mt19937_64 rng(0xba11);
        std::uniform_real_distribution<double> u(-50.0, 50.0);
        double worst = 0.0;
        Vec wx = zero;
        for (int i = 0; i < 4096; ++i) {
            Vec x(map.dim());
            for (int k = 0; k < map.dim(); ++k) x(k) = orthant(map) ? std::abs(u(rng)) : u(rng);
            if (i < 2048) x *= 0.02;  // half the samples near the origin
            const double v = map(x).norm();
            if (v > worst) {
                worst = v;
                wx = x;
            }
        }
        rep.checks.push_back({"image_in_ball", worst <= sup.M + 1e-9 ? CheckStatus::pass : CheckStatus::fail,
                              "max sampled |f(x)| = " + num17(worst) + " at " + point_str(wx), 1e-9,
                              "f maps everything into the closed ball of radius M"});
    }
    return rep;
}

}  // namespace azlab
