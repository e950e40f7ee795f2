#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "azlab/maps.hpp"
#include "azlab/point_cloud.hpp"

namespace azlab {

enum class ShellMode {
    source_origin,  // origin repels; cells start at radius 0
    sink_origin,    // origin attracts the disk of radius alpha0
};

using AngleProfile = std::function<double(double)>;

/// Shell geometry in the plane: radius profiles over the polar angle and the
/// slope bounds (lambda, mu) of the radial derivative.
struct ShellSpec {
    ShellMode mode = ShellMode::source_origin;
    AngleProfile alpha0;  // sink mode only
    AngleProfile alpha;
    AngleProfile beta;
    AngleProfile zeta;
    double lambda = 0.0;
    double mu = 0.0;

    static ShellSpec constant(double alpha, double beta, double zeta, double lambda, double mu,
                              double alpha0 = 0.0);

    /// Inner radius of the construction at angle u: 0 or alpha0(u).
    double inner(double u) const;
    /// min alpha and max beta over `n_angles` sampled angles.
    double m_small(int n_angles = 256) const;
    double m_big(int n_angles = 256) const;

    /// Human-readable list of broken invariants; empty when valid.
    std::vector<std::string> violations(int n_angles = 256) const;
};

/// Shells matching a radial_tent spec exactly.
ShellSpec radial_tent_shells(const MapSpec& spec);

/// <grad |f|(x), x/|x|>. Throws Error(numeric) at x = 0 or f(x) = 0.
double radial_derivative(const MapHandle& map, const Vec& x);

struct RadialSample {
    Vec x;
    double value = 0.0;
    std::string reason;
};

struct RadialBounds {
    double lambda_hat = 0.0;
    double mu_hat = 0.0;
    long samples = 0;
    std::vector<RadialSample> violations;
};

/// Samples the radial derivative on 0 < r <= alpha (or alpha0 < r <= alpha)
/// and beta <= r < zeta, n_angles x n_radii points per region.
RadialBounds estimate_radial_bounds(const MapHandle& map, const ShellSpec& shells, int n_angles = 256,
                                    int n_radii = 64);

/// Radius and polar angle of f(r u(angle)), used per angle by the shell builder.
struct RadialReturnMap {
    std::function<double(double, double)> radius;
    std::function<double(double, double)> angle;
};

RadialReturnMap radial_return_map(const MapHandle& map);
/// Closed-form return map of a radial_tent spec (no vector arithmetic).
RadialReturnMap radial_tent_return_map(const MapSpec& spec);

/// Nested radial cells for every binary address up to `depth`, sampled on a
/// uniform angle grid. The address index at level L reads s(1) as its most
/// significant bit.
class ShellPartition {
public:
    int depth() const noexcept { return depth_; }
    int n_angles() const noexcept { return static_cast<int>(angles_.size()); }
    double angle(int a) const { return angles_[a]; }

    double inner(int level, std::uint64_t address, int a) const { return at(level, address, a)[0]; }
    double outer(int level, std::uint64_t address, int a) const { return at(level, address, a)[1]; }
    /// Boundaries at an arbitrary angle (periodic linear interpolation).
    void interval(int level, std::uint64_t address, double angle, double& lo, double& hi) const;

    /// Children inside parents (slack `tol`) at every level and angle.
    bool check_nesting(double tol, std::string* witness = nullptr) const;
    /// Siblings strictly disjoint at every level and angle.
    bool check_disjoint(std::string* witness = nullptr) const;

    /// angle,address,inner,outer rows for levels 1..max_level (default: all).
    void write_csv(std::ostream& os, int max_level = -1) const;

private:
    friend ShellPartition cantor_shells(const RadialReturnMap&, const ShellSpec&, int, int, int);
    const double* at(int level, std::uint64_t address, int a) const;

    int depth_ = 0;
    std::vector<double> angles_;
    /// levels_[L-1] holds 2^L * n_angles (inner, outer) pairs, address-major.
    std::vector<std::vector<double>> levels_;
};

/// Builds the partition by bisecting preimages of each level under the two
/// monotone branches. Throws Error(numeric) on a bracket failure.
ShellPartition cantor_shells(const RadialReturnMap& return_map, const ShellSpec& shells, int depth,
                             int angle_grid = 256, int jobs = 0);

/// n points: uniform leaf, uniform angle, uniform radius within the leaf.
PointCloud sample_partition(const ShellPartition& partition, std::size_t n, std::uint64_t seed);

struct DimensionBounds {
    double lower;
    double upper;
};

/// m - 1 + log 2 / log(1 + mu) and m - 1 + log 2 / log(1 + lambda).
DimensionBounds hausdorff_bounds(double lambda, double mu, int m);

}  // namespace azlab
