#include "azlab/radial.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ostream>
#include <random>
#include <sstream>
#include <thread>

#include "azlab/error.hpp"

namespace azlab {

namespace {

constexpr double kTwoPi = 2.0 * kPi;
constexpr double kBisectTol = 1e-12;

double wrap_angle(double u) {
    double w = std::fmod(u, kTwoPi);
    if (w < 0.0) w += kTwoPi;
    return w;
}

AngleProfile constant_profile(double v) {
    return [v](double) { return v; };
}

}  // namespace

ShellSpec ShellSpec::constant(double alpha, double beta, double zeta, double lambda, double mu, double alpha0) {
    ShellSpec s;
    s.mode = alpha0 > 0.0 ? ShellMode::sink_origin : ShellMode::source_origin;
    if (alpha0 > 0.0) s.alpha0 = constant_profile(alpha0);
    s.alpha = constant_profile(alpha);
    s.beta = constant_profile(beta);
    s.zeta = constant_profile(zeta);
    s.lambda = lambda;
    s.mu = mu;
    return s;
}

double ShellSpec::inner(double u) const {
    return mode == ShellMode::sink_origin && alpha0 ? alpha0(u) : 0.0;
}

double ShellSpec::m_small(int n_angles) const {
    double v = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n_angles; ++i) v = std::min(v, alpha(kTwoPi * i / n_angles));
    return v;
}

double ShellSpec::m_big(int n_angles) const {
    double v = 0.0;
    for (int i = 0; i < n_angles; ++i) v = std::max(v, beta(kTwoPi * i / n_angles));
    return v;
}

std::vector<std::string> ShellSpec::violations(int n_angles) const {
    std::vector<std::string> out;
    if (!alpha || !beta || !zeta) {
        out.push_back("alpha, beta and zeta profiles are required");
        return out;
    }
    if (mode == ShellMode::sink_origin && !alpha0) out.push_back("sink mode requires an alpha0 profile");
    for (int i = 0; i < n_angles; ++i) {
        const double u = kTwoPi * i / n_angles;
        const double a = alpha(u), b = beta(u), z = zeta(u);
        std::ostringstream os;
        os << "at angle " << u << ": ";
        if (!(a > 0.0 && a <= b && b < z)) {
            os << "need 0 < alpha <= beta < zeta (alpha " << a << ", beta " << b << ", zeta " << z << ")";
            out.push_back(os.str());
        } else if (!(b - a > 0.0 && b - a < z)) {
            os << "need 0 < beta - alpha < zeta";
            out.push_back(os.str());
        } else if (mode == ShellMode::sink_origin && alpha0 && !(alpha0(u) >= 0.0 && alpha0(u) < a)) {
            os << "need 0 <= alpha0 < alpha";
            out.push_back(os.str());
        }
        if (out.size() > 8) break;
    }
    const double ratio = m_big(n_angles) / m_small(n_angles);
    if (!(ratio < lambda)) {
        std::ostringstream os;
        os << "need max beta / min alpha < lambda (ratio " << ratio << ", lambda " << lambda << ")";
        out.push_back(os.str());
    }
    if (!(lambda <= mu)) out.push_back("need lambda <= mu");
    return out;
}

ShellSpec radial_tent_shells(const MapSpec& spec) {
    if (spec.family != MapFamily::radial_tent) throw_config("radial_tent_shells needs a radial_tent spec");
    const RadialProfile p = radial_tent_profile(spec);
    return ShellSpec::constant(p.alpha(), p.beta(), p.zeta, std::min(p.slope_in, p.slope_out),
                               std::max(p.slope_in, p.slope_out), p.alpha0);
}

double radial_derivative(const MapHandle& map, const Vec& x) {
    const double r = x.norm();
    if (r == 0.0) throw_numeric("radial derivative undefined at the origin");
    const Vec fx = map.eval(x);
    const double nf = fx.norm();
    if (nf == 0.0) throw_numeric("radial derivative undefined where f vanishes");
    const Vec grad = map.jacobian(x).transpose() * fx / nf;
    return grad.dot(x) / r;
}

RadialBounds estimate_radial_bounds(const MapHandle& map, const ShellSpec& shells, int n_angles, int n_radii) {
    if (map.dim() != 2) throw_config("radial bounds are implemented for planar maps");
    if (n_angles < 1 || n_radii < 1) throw_config("radial sampling grid must be positive");
    RadialBounds out;
    out.lambda_hat = std::numeric_limits<double>::infinity();
    out.mu_hat = 0.0;
    auto sample = [&](double u, double r, bool inner_region) {
        Vec x(2);
        x << r * std::cos(u), r * std::sin(u);
        double d;
        try {
            d = radial_derivative(map, x);
        } catch (const Error&) {
            out.violations.push_back({x, 0.0, "radial derivative undefined"});
            return;
        }
        ++out.samples;
        out.lambda_hat = std::min(out.lambda_hat, std::abs(d));
        out.mu_hat = std::max(out.mu_hat, std::abs(d));
        if (inner_region && !(d > 0.0)) out.violations.push_back({x, d, "nonpositive in the inner region"});
        if (!inner_region && !(d < 0.0)) out.violations.push_back({x, d, "nonnegative in the outer region"});
    };
    for (int i = 0; i < n_angles; ++i) {
        const double u = kTwoPi * i / n_angles;
        const double r0 = shells.inner(u), a = shells.alpha(u), b = shells.beta(u), z = shells.zeta(u);
        for (int j = 0; j < n_radii; ++j) {
            sample(u, r0 + (a - r0) * (j + 1) / n_radii, true);
            sample(u, b + (z - b) * j / n_radii, false);
        }
    }
    if (out.samples == 0) out.lambda_hat = 0.0;
    const double ratio = shells.m_big(n_angles) / shells.m_small(n_angles);
    if (!(ratio < out.lambda_hat)) {
        std::ostringstream os;
        os << "max beta / min alpha = " << ratio << " is not below the sampled lower slope " << out.lambda_hat;
        out.violations.push_back({Vec::Zero(2), ratio, os.str()});
    }
    return out;
}

RadialReturnMap radial_return_map(const MapHandle& map) {
    if (map.dim() != 2) throw_config("radial return maps are implemented for planar maps");
    RadialReturnMap rm;
    rm.radius = [map](double u, double r) {
        Vec x(2);
        x << r * std::cos(u), r * std::sin(u);
        return map(x).norm();
    };
    rm.angle = [map](double u, double r) {
        Vec x(2);
        x << r * std::cos(u), r * std::sin(u);
        const Vec y = map(x);
        return wrap_angle(std::atan2(y(1), y(0)));
    };
    return rm;
}

RadialReturnMap radial_tent_return_map(const MapSpec& spec) {
    if (spec.family != MapFamily::radial_tent) throw_config("radial_tent_return_map needs a radial_tent spec");
    const RadialProfile p = radial_tent_profile(spec);
    const double turn = kTwoPi * spec.param_or("theta", 0.0);
    RadialReturnMap rm;
    rm.radius = [p](double, double r) { return p.radius(r); };
    rm.angle = [turn](double u, double) { return wrap_angle(u + turn); };
    return rm;
}

const double* ShellPartition::at(int level, std::uint64_t address, int a) const {
    if (level < 1 || level > depth_) throw_config("partition level out of range");
    if (address >> level) throw_config("partition address out of range");
    return &levels_[level - 1][(address * angles_.size() + a) * 2];
}

void ShellPartition::interval(int level, std::uint64_t address, double angle, double& lo, double& hi) const {
    const int n = n_angles();
    const double pos = wrap_angle(angle) / kTwoPi * n;
    int a0 = static_cast<int>(std::floor(pos));
    const double w = pos - a0;
    a0 %= n;
    const int a1 = (a0 + 1) % n;
    const double* c0 = at(level, address, a0);
    const double* c1 = at(level, address, a1);
    lo = (1.0 - w) * c0[0] + w * c1[0];
    hi = (1.0 - w) * c0[1] + w * c1[1];
}

bool ShellPartition::check_nesting(double tol, std::string* witness) const {
    for (int level = 2; level <= depth_; ++level) {
        const std::uint64_t count = std::uint64_t{1} << level;
        for (std::uint64_t s = 0; s < count; ++s) {
            for (int a = 0; a < n_angles(); ++a) {
                const double* c = at(level, s, a);
                const double* p = at(level - 1, s >> 1, a);
                if (c[0] < p[0] - tol || c[1] > p[1] + tol || c[0] > c[1]) {
                    if (witness) {
                        std::ostringstream os;
                        os << "level " << level << " address " << s << " angle " << angles_[a] << ": child ["
                           << c[0] << ", " << c[1] << "] parent [" << p[0] << ", " << p[1] << "]";
                        *witness = os.str();
                    }
                    return false;
                }
            }
        }
    }
    return true;
}

bool ShellPartition::check_disjoint(std::string* witness) const {
    for (int level = 1; level <= depth_; ++level) {
        const std::uint64_t count = std::uint64_t{1} << level;
        for (std::uint64_t s = 0; s < count; s += 2) {
            for (int a = 0; a < n_angles(); ++a) {
                const double* c0 = at(level, s, a);
                const double* c1 = at(level, s + 1, a);
                if (!(c0[1] < c1[0] || c1[1] < c0[0])) {
                    if (witness) {
                        std::ostringstream os;
                        os << "level " << level << " siblings " << s << "/" << s + 1 << " overlap at angle "
                           << angles_[a];
                        *witness = os.str();
                    }
                    return false;
                }
            }
        }
    }
    return true;
}

void ShellPartition::write_csv(std::ostream& os, int max_level) const {
    if (max_level < 0 || max_level > depth_) max_level = depth_;
    os << "angle,address,inner,outer\n";
    char buf[64];
    auto num = [&](double v) {
        auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
        os.write(buf, res.ptr - buf);
    };
    for (int level = 1; level <= max_level; ++level) {
        const std::uint64_t count = std::uint64_t{1} << level;
        for (std::uint64_t s = 0; s < count; ++s) {
            std::string addr(level, '0');
            for (int k = 0; k < level; ++k)
                if ((s >> (level - 1 - k)) & 1u) addr[k] = '1';
            for (int a = 0; a < n_angles(); ++a) {
                const double* c = at(level, s, a);
                num(angles_[a]);
                os << ',' << addr << ',';
                num(c[0]);
                os << ',';
                num(c[1]);
                os << '\n';
            }
        }
    }
}

namespace {

// Root of g on [lo, hi] by bisection; the ends may touch zero within tolerance.
template <class G>
bool bisect(const G& g, double lo, double hi, double& root) {
    double glo = g(lo), ghi = g(hi);
    if (std::abs(glo) <= kBisectTol) {
        root = lo;
        return true;
    }
    if (std::abs(ghi) <= kBisectTol) {
        root = hi;
        return true;
    }
    if ((glo > 0.0) == (ghi > 0.0)) return false;
    while (hi - lo > kBisectTol) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if (gm == 0.0) {
            root = mid;
            return true;
        }
        if ((gm > 0.0) == (glo > 0.0)) {
            lo = mid;
            glo = gm;
        } else {
            hi = mid;
        }
    }
    root = 0.5 * (lo + hi);
    return true;
}

}  // namespace

ShellPartition cantor_shells(const RadialReturnMap& return_map, const ShellSpec& shells, int depth,
                             int angle_grid, int jobs) {
    if (depth < 1 || depth > 30) throw_config("partition depth must be in [1, 30]");
    if (angle_grid < 1) throw_config("angle grid must be positive");
    if (auto v = shells.violations(angle_grid); !v.empty()) throw_config("invalid shells: " + v.front());
    const double bytes = std::ldexp(1.0, depth + 1) * angle_grid * 2.0 * sizeof(double);
    if (bytes > 2.0 * 1024 * 1024 * 1024)
        throw_config("partition would need " + std::to_string(bytes / 1e9) + " GB; lower depth or angle grid");

    ShellPartition part;
    part.depth_ = depth;
    const int n = angle_grid;
    for (int a = 0; a < n; ++a) part.angles_.push_back(kTwoPi * a / n);
    part.levels_.resize(depth);

    // Branch domains: [inner, alpha] rising, [beta, zeta] falling.
    std::vector<double> b0lo(n), b0hi(n), b1lo(n), b1hi(n);
    auto& first = part.levels_[0];
    first.resize(2 * n * 2);
    for (int a = 0; a < n; ++a) {
        const double u = part.angles_[a];
        b0lo[a] = shells.inner(u);
        b0hi[a] = shells.alpha(u);
        b1lo[a] = shells.beta(u);
        b1hi[a] = shells.zeta(u);
        first[(0 * n + a) * 2 + 0] = b0lo[a];
        first[(0 * n + a) * 2 + 1] = b0hi[a];
        first[(1 * n + a) * 2 + 0] = b1lo[a];
        first[(1 * n + a) * 2 + 1] = b1hi[a];
    }

    if (jobs <= 0) jobs = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    jobs = std::min(jobs, n);

    for (int level = 2; level <= depth; ++level) {
        const int prev = level - 1;
        const std::uint64_t prev_count = std::uint64_t{1} << prev;
        auto& cur = part.levels_[level - 1];
        cur.assign((prev_count * 2) * n * 2, 0.0);
        std::vector<std::string> errors(jobs);

        auto work = [&](int job) {
            for (int a = job; a < n; a += jobs) {
                const double u = part.angles_[a];
                for (int branch = 0; branch < 2 && errors[job].empty(); ++branch) {
                    const double lo = branch ? b1lo[a] : b0lo[a];
                    const double hi = branch ? b1hi[a] : b0hi[a];
                    // When the image angle does not depend on the radius (rigid
                    // rotation), the interpolation weights are fixed per branch.
                    const double ang_lo = return_map.angle(u, lo);
                    const double ang_mid = return_map.angle(u, 0.5 * (lo + hi));
                    const double ang_hi = return_map.angle(u, hi);
                    const bool rigid = ang_lo == ang_mid && ang_lo == ang_hi;
                    const double pos = ang_lo / kTwoPi * n;
                    const int i0 = static_cast<int>(std::floor(pos)) % n;
                    const int i1 = (i0 + 1) % n;
                    const double w = pos - std::floor(pos);
                    const auto& prev_cells = part.levels_[prev - 1];
                    for (std::uint64_t t = 0; t < prev_count; ++t) {
                        double ends[2];
                        for (int side = 0; side < 2; ++side) {
                            const double target = (1.0 - w) * prev_cells[(t * n + i0) * 2 + side] +
                                                  w * prev_cells[(t * n + i1) * 2 + side];
                            auto g = [&](double r) {
                                if (rigid) return return_map.radius(u, r) - target;
                                double blo, bhi;
                                part.interval(prev, t, return_map.angle(u, r), blo, bhi);
                                return return_map.radius(u, r) - (side ? bhi : blo);
                            };
                            if (!bisect(g, lo, hi, ends[side])) {
                                std::ostringstream os;
                                os << "bisection bracket failure at angle " << u << ", level " << level
                                   << ", branch " << branch << ", address " << t;
                                errors[job] = os.str();
                                return;
                            }
                        }
                        const std::uint64_t child = (static_cast<std::uint64_t>(branch) << prev) | t;
                        double* c = &cur[(child * n + a) * 2];
                        c[0] = std::min(ends[0], ends[1]);
                        c[1] = std::max(ends[0], ends[1]);
                    }
                }
            }
        };
        if (jobs == 1) {
            work(0);
        } else {
            std::vector<std::thread> pool;
            for (int j = 0; j < jobs; ++j) pool.emplace_back(work, j);
            for (auto& th : pool) th.join();
        }
        for (const auto& e : errors)
            if (!e.empty()) throw_numeric(e);
    }
    return part;
}

PointCloud sample_partition(const ShellPartition& partition, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    const int level = partition.depth();
    const std::uint64_t leaves = std::uint64_t{1} << level;
    std::uniform_int_distribution<std::uint64_t> pick(0, leaves - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    PointCloud cloud(2, false);
    cloud.reserve(n);
    Vec x(2);
    for (std::size_t i = 0; i < n; ++i) {
        const std::uint64_t leaf = pick(rng);
        const double u = kTwoPi * unit(rng);
        double lo, hi;
        partition.interval(level, leaf, u, lo, hi);
        const double r = lo + (hi - lo) * unit(rng);
        x << r * std::cos(u), r * std::sin(u);
        cloud.push_back(x);
    }
    return cloud;
}

DimensionBounds hausdorff_bounds(double lambda, double mu, int m) {
    if (!(lambda > 0.0)) throw_config("hausdorff_bounds needs lambda > 0");
    if (!(lambda <= mu)) throw_config("hausdorff_bounds needs lambda <= mu");
    if (m < 1) throw_config("dimension must be >= 1");
    return {m - 1 + std::log(2.0) / std::log(1.0 + mu), m - 1 + std::log(2.0) / std::log(1.0 + lambda)};
}

}  // namespace azlab
