#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "azlab/types.hpp"

namespace azlab {

enum class MapFamily {
    gauss_rotation,        // a e^{-|x|^2} R(2 pi theta) x
    pioneer_climax_full,   // two-species pioneer/climax model, both exponents coupled
    pioneer_climax_mixed,  // same, first species self-limited only
    user_table,            // affine map x -> A x + b from a coefficient table
    radial_tent,           // piecewise-linear radial return map, rotated; EZ by construction
    affine_horseshoe,      // piecewise-affine attracting horseshoe on the model stadium
    custom,                // caller-supplied functions (not constructible from a spec)
};

enum class JacobianKind { analytic, finite_difference };

/// Region on which a family is studied. Population models are only meaningful
/// (and only asymptotically zero) on the closed nonnegative orthant, whose
/// boundary they leave invariant.
enum class Domain { whole_space, nonnegative_orthant };

std::string_view family_name(MapFamily family);
std::optional<MapFamily> parse_family(std::string_view name);

struct MapSpec {
    MapFamily family = MapFamily::gauss_rotation;
    std::vector<std::pair<std::string, double>> params;
    int dim = 2;
    /// gauss_rotation only: the degenerate variant whose two components
    /// coincide, instead of the proper rotation.
    bool literal_eq10 = false;

    std::optional<double> param(std::string_view name) const;
    double param_or(std::string_view name, double fallback) const;
    MapSpec& set(std::string name, double value);
};

MapSpec gauss_rotation_spec(double a, double theta);
MapSpec pioneer_climax_full_spec(double a, double b);
MapSpec pioneer_climax_mixed_spec(double a, double b);
/// x -> A x + b. `matrix` is row-major with dim*dim entries; `offset` may be empty.
MapSpec user_table_spec(int dim, const std::vector<double>& matrix, const std::vector<double>& offset = {});
/// Radial tent with inner slope `slope_in`, outer slope `slope_out`, extinction
/// radius `zeta`, basin radius `alpha0` (0 = origin is a source) and rotation `theta`.
MapSpec radial_tent_spec(double slope_in, double slope_out, double zeta, double alpha0 = 0.0,
                         double theta = 0.0);
MapSpec affine_horseshoe_spec(double contraction = 0.2, double expansion = 4.0);

using EvalFn = std::function<Vec(const Vec&)>;
using JacFn = std::function<Mat(const Vec&)>;

/// An evaluatable map with its Jacobian. Immutable once built; copies share
/// nothing mutable, so a handle can be used from any number of threads.
class MapHandle {
public:
    /// Wraps arbitrary functions. Without `jac`, central finite differences are used.
    static MapHandle custom(std::string name, int dim, EvalFn eval, JacFn jac = nullptr,
                            Domain domain = Domain::whole_space);

    const MapSpec& spec() const noexcept { return spec_; }
    const std::string& name() const noexcept { return name_; }
    int dim() const noexcept { return spec_.dim; }
    JacobianKind jac_kind() const noexcept { return jac_kind_; }
    Domain domain() const noexcept { return domain_; }

    /// Evaluates without input validation; for hot loops whose inputs are
    /// known finite.
    Vec operator()(const Vec& x) const { return eval_(x); }
    Mat jacobian_unchecked(const Vec& x) const { return jac_(x); }

    /// Evaluates with validation; throws on non-finite input.
    Vec eval(const Vec& x) const;
    Mat jacobian(const Vec& x) const;

private:
    friend MapHandle build_map(const MapSpec& spec);

    MapSpec spec_;
    std::string name_;
    EvalFn eval_;
    JacFn jac_;
    JacobianKind jac_kind_ = JacobianKind::analytic;
    Domain domain_ = Domain::whole_space;
};

/// Validates the spec and dispatches to the family formula. Throws
/// Error(config) on unknown family, missing/extra/non-finite parameters.
MapHandle build_map(const MapSpec& spec);

Vec eval_map(const MapHandle& map, const Vec& x);
Mat jacobian(const MapHandle& map, const Vec& x);

/// Central differences with step h = max(1e-6, 1e-6 |x|).
Mat finite_difference_jacobian(const EvalFn& f, const Vec& x);

/// The k-th iterate f^k as a map, with the chain-rule Jacobian.
MapHandle iterate_map(const MapHandle& map, int k);

/// Applies f n times.
Vec iterate(const MapHandle& map, Vec x, long n);

/// Radial profile of a radial_tent map: |f(x)| as a function of |x|, and its derivative.
struct RadialProfile {
    double slope_in;
    double slope_out;
    double zeta;
    double alpha0;

    double radius(double r) const;
    double derivative(double r) const;
    /// Boundary of the inner expanding region.
    double alpha() const;
    /// Inner boundary of the outer folding region.
    double beta() const;
    /// Radius beyond which the map vanishes identically.
    double cutoff() const;
};

RadialProfile radial_tent_profile(const MapSpec& spec);

/// Model-space horseshoe map for the affine_horseshoe family (stadium around
/// the segment x1 = -2, -1 <= x2 <= 9, radius 4) and its inverse on f(H).
/// The inverse returns a point far outside H for inputs not in f(H).
Vec affine_horseshoe_eval(double contraction, double expansion, const Vec& x);
Vec affine_horseshoe_inverse(double contraction, double expansion, const Vec& y);

}  // namespace azlab
