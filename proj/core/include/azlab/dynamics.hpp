#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "azlab/maps.hpp"
#include "azlab/point_cloud.hpp"

namespace azlab {

enum class Stability { sink, source, saddle, nonhyperbolic };

std::string_view stability_name(Stability s);

/// Hyperbolicity margin: |mu| < 1 - margin counts as contracting.
inline constexpr double kHyperbolicMargin = 1e-3;

struct Cycle {
    std::vector<Vec> points;
    int period = 0;
    std::vector<std::complex<double>> multipliers;
    Stability stability = Stability::nonhyperbolic;
    /// Unit eigenvectors of D f^k at points[0] (real saddles only).
    Vec unstable_dir;
    Vec stable_dir;
    int newton_steps = 0;
    double residual = 0.0;
};

/// f^{n0+1}(x0) ... f^{n0+n}(x0). Throws Error(numeric) on a non-finite iterate.
PointCloud orbit(const MapHandle& map, const Vec& x0, long n_transient, long n_keep);

struct NewtonOptions {
    int max_steps = 100;
    double tol = 1e-10;
};

/// Newton on f^k(x) - x. Reports the minimal period of the root.
Cycle find_cycle(const MapHandle& map, int period, const Vec& seed, const NewtonOptions& opt = {});

/// Jacobian of f^k at x by the chain rule.
Mat cycle_jacobian(const MapHandle& map, const Vec& x, int k);

/// Fills multipliers, stability and (for saddles) eigen-directions from the
/// cycle points; returns the stability class.
Stability classify_cycle(const MapHandle& map, Cycle& cycle);

/// Class from multiplier moduli alone.
Stability classify_multipliers(const std::vector<std::complex<double>>& multipliers,
                               double margin = kHyperbolicMargin);

/// Smallest k <= max_period with |x_{i+k} - x_i| <= tol over the final 2 max_period
/// indices; nullopt means aperiodic. Throws when the cloud is shorter than 3 max_period.
std::optional<int> detect_period(const PointCloud& cloud, int max_period, double tol = 1e-6);

}  // namespace azlab
