#include "azlab/dynamics.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "azlab/error.hpp"

namespace azlab {

std::string_view stability_name(Stability s) {
    switch (s) {
    case Stability::sink: return "sink";
    case Stability::source: return "source";
    case Stability::saddle: return "saddle";
    case Stability::nonhyperbolic: return "nonhyperbolic";
    }
    return "unknown";
}

PointCloud orbit(const MapHandle& map, const Vec& x0, long n_transient, long n_keep) {
    if (n_transient < 0 || n_keep < 0) throw_config("orbit counts must be nonnegative");
    if (x0.size() != map.dim() || !x0.allFinite()) throw_config("orbit seed must be finite with matching dimension");
    PointCloud cloud(map.dim(), true);
    cloud.meta.map_name = map.name();
    cloud.meta.spec = map.spec();
    cloud.meta.x0 = x0;
    cloud.meta.n_transient = n_transient;
    cloud.meta.n_keep = n_keep;
    Vec x = x0;
    for (long i = 0; i < n_transient; ++i) {
        x = map(x);
        if (!x.allFinite()) throw_numeric("orbit of " + map.name() + " left the finite range at step " + std::to_string(i + 1));
    }
    cloud.reserve(static_cast<std::size_t>(n_keep));
    for (long i = 0; i < n_keep; ++i) {
        x = map(x);
        if (!x.allFinite())
            throw_numeric("orbit of " + map.name() + " left the finite range at step " +
                          std::to_string(n_transient + i + 1));
        cloud.push_back(x);
    }
    return cloud;
}

Mat cycle_jacobian(const MapHandle& map, const Vec& x, int k) {
    Vec y = x;
    Mat j = Mat::Identity(x.size(), x.size());
    for (int i = 0; i < k; ++i) {
        j = map.jacobian_unchecked(y) * j;
        y = map(y);
    }
    return j;
}

namespace {

double residual_norm(const MapHandle& map, const Vec& x, int k) {
    const Vec r = iterate(map, x, k) - x;
    return r.allFinite() ? r.norm() : std::numeric_limits<double>::infinity();
}

}  // namespace

Cycle find_cycle(const MapHandle& map, int period, const Vec& seed, const NewtonOptions& opt) {
    if (period < 1) throw_config("cycle period must be >= 1");
    if (seed.size() != map.dim() || !seed.allFinite()) throw_config("cycle seed must be finite with matching dimension");
    const int m = map.dim();
    Vec x = seed;
    double res = residual_norm(map, x, period);
    int steps = 0;
    while (!(res <= opt.tol)) {
        if (steps >= opt.max_steps || !std::isfinite(res)) {
            std::ostringstream os;
            os << "Newton for a " << period << "-cycle of " << map.name() << " did not converge in "
               << steps << " steps (residual " << res << ")";
            throw_numeric(os.str());
        }
        const Vec fx = iterate(map, x, period);
        const Mat a = cycle_jacobian(map, x, period) - Mat::Identity(m, m);
        Eigen::FullPivLU<Mat> lu(a);
        const double rcond = lu.rcond();
        if (!lu.isInvertible() || !(rcond > 1e-14)) {
            std::ostringstream os;
            os << "singular Newton matrix for a " << period << "-cycle of " << map.name()
               << " (reciprocal condition estimate " << rcond << ")";
            throw_numeric(os.str());
        }
        const Vec dx = lu.solve(-(fx - x));
        // Backtracking keeps Newton from jumping out of the basin on steep maps.
        double t = 1.0;
        Vec trial = x + dx;
        double trial_res = residual_norm(map, trial, period);
        while (!(trial_res < res) && t > 1.0 / 1024.0) {
            t *= 0.5;
            trial = x + t * dx;
            trial_res = residual_norm(map, trial, period);
        }
        x = trial;
        res = trial_res;
        ++steps;
    }

    // Minimal-period reduction over divisors of the requested period.
    int minimal = period;
    for (int j = 1; j < period; ++j) {
        if (period % j) continue;
        if (residual_norm(map, x, j) <= 1e-9) {
            minimal = j;
            break;
        }
    }
    Cycle c;
    c.period = minimal;
    c.newton_steps = steps;
    c.residual = res;
    Vec y = x;
    for (int i = 0; i < minimal; ++i) {
        c.points.push_back(y);
        y = map(y);
    }
    classify_cycle(map, c);
    return c;
}

Stability classify_multipliers(const std::vector<std::complex<double>>& multipliers, double margin) {
    bool all_in = true, all_out = true, any_in = false, any_out = false;
    for (const auto& mu : multipliers) {
        const double r = std::abs(mu);
        const bool in = r < 1.0 - margin;
        const bool out = r > 1.0 + margin;
        all_in = all_in && in;
        all_out = all_out && out;
        any_in = any_in || in;
        any_out = any_out || out;
    }
    if (all_in) return Stability::sink;
    if (all_out) return Stability::source;
    if (any_in && any_out && !std::any_of(multipliers.begin(), multipliers.end(), [&](auto mu) {
            return std::abs(std::abs(mu) - 1.0) <= margin;
        }))
        return Stability::saddle;
    return Stability::nonhyperbolic;
}

Stability classify_cycle(const MapHandle& map, Cycle& cycle) {
    if (cycle.points.empty()) throw_config("empty cycle");
    cycle.period = static_cast<int>(cycle.points.size());
    const Mat j = cycle_jacobian(map, cycle.points[0], cycle.period);
    Eigen::EigenSolver<Mat> es(j, true);
    const auto vals = es.eigenvalues();
    cycle.multipliers.assign(vals.data(), vals.data() + vals.size());
    std::sort(cycle.multipliers.begin(), cycle.multipliers.end(),
              [](auto a, auto b) { return std::abs(a) > std::abs(b); });
    cycle.stability = classify_multipliers(cycle.multipliers);
    cycle.unstable_dir = Vec();
    cycle.stable_dir = Vec();
    if (cycle.stability == Stability::saddle) {
        const auto vecs = es.eigenvectors();
        int iu = 0, is = 0;
        for (int i = 0; i < vals.size(); ++i) {
            if (std::abs(vals(i)) > std::abs(vals(iu))) iu = i;
            if (std::abs(vals(i)) < std::abs(vals(is))) is = i;
        }
        if (std::abs(vals(iu).imag()) < 1e-12 && std::abs(vals(is).imag()) < 1e-12) {
            cycle.unstable_dir = vecs.col(iu).real().normalized();
            cycle.stable_dir = vecs.col(is).real().normalized();
        }
    }
    return cycle.stability;
}

std::optional<int> detect_period(const PointCloud& cloud, int max_period, double tol) {
    if (max_period < 1) throw_config("max_period must be >= 1");
    const std::size_t n = cloud.size();
    if (n < 3 * static_cast<std::size_t>(max_period))
        throw_config("cloud too short for period detection (need " + std::to_string(3 * max_period) + " points)");
    const std::size_t window = 2 * static_cast<std::size_t>(max_period);
    const std::size_t first = n - window;
    for (int k = 1; k <= max_period; ++k) {
        bool ok = true;
        for (std::size_t i = first; i + k < n && ok; ++i)
            ok = (cloud.point(i + k) - cloud.point(i)).norm() <= tol;
        // The window must also match the k points just before it.
        for (std::size_t i = first - k; i < first && ok; ++i)
            ok = (cloud.point(i + k) - cloud.point(i)).norm() <= tol;
        if (ok) return k;
    }
    return std::nullopt;
}

}  // namespace azlab
