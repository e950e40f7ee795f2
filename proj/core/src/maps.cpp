#include "azlab/maps.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "azlab/error.hpp"

namespace azlab {

namespace {

struct FamilyInfo {
    MapFamily family;
    std::string_view name;
};

constexpr FamilyInfo kFamilies[] = {
    {MapFamily::gauss_rotation, "gauss_rotation"},
    {MapFamily::pioneer_climax_full, "pioneer_climax_full"},
    {MapFamily::pioneer_climax_mixed, "pioneer_climax_mixed"},
    {MapFamily::user_table, "user_table"},
    {MapFamily::radial_tent, "radial_tent"},
    {MapFamily::affine_horseshoe, "affine_horseshoe"},
    {MapFamily::custom, "custom"},
};

std::string table_name(char prefix, int i, int j = -1) {
    std::ostringstream os;
    os << prefix << (i + 1);
    if (j >= 0) os << (j + 1);
    return os.str();
}

// Required and optional parameter names per family.
void parameter_names(const MapSpec& spec, std::vector<std::string>& required,
                     std::vector<std::string>& optional) {
    switch (spec.family) {
    case MapFamily::gauss_rotation:
        required = {"a", "theta"};
        break;
    case MapFamily::pioneer_climax_full:
    case MapFamily::pioneer_climax_mixed:
        required = {"a", "b"};
        break;
    case MapFamily::user_table:
        for (int i = 0; i < spec.dim; ++i) {
            for (int j = 0; j < spec.dim; ++j) required.push_back(table_name('A', i, j));
            optional.push_back(table_name('b', i));
        }
        break;
    case MapFamily::radial_tent:
        required = {"slope_in", "slope_out", "zeta"};
        optional = {"alpha0", "theta"};
        break;
    case MapFamily::affine_horseshoe:
        optional = {"contraction", "expansion"};
        break;
    case MapFamily::custom:
        throw_config("custom maps cannot be built from a spec");
    }
}

void validate(const MapSpec& spec) {
    if (spec.family == MapFamily::user_table) {
        if (spec.dim < 1 || spec.dim > kMaxDim)
            throw_config("user_table dimension must be in [1, " + std::to_string(kMaxDim) + "]");
    } else if (spec.dim != 2) {
        throw_config(std::string(family_name(spec.family)) + " is two-dimensional; got dim = " +
                     std::to_string(spec.dim));
    }
    std::vector<std::string> required, optional;
    parameter_names(spec, required, optional);
    std::set<std::string> seen;
    for (const auto& [name, value] : spec.params) {
        if (!seen.insert(name).second) throw_config("duplicate parameter '" + name + "'");
        const bool known = std::find(required.begin(), required.end(), name) != required.end() ||
                           std::find(optional.begin(), optional.end(), name) != optional.end();
        if (!known)
            throw_config("unexpected parameter '" + name + "' for " +
                         std::string(family_name(spec.family)));
        if (!std::isfinite(value)) throw_config("parameter '" + name + "' is not finite");
    }
    for (const auto& name : required)
        if (!seen.count(name))
            throw_config("missing parameter '" + name + "' for " + std::string(family_name(spec.family)));

    if (spec.family == MapFamily::gauss_rotation && !(spec.param_or("a", 0.0) > 0.0))
        throw_config("gauss_rotation requires a > 0");
    if (spec.family == MapFamily::radial_tent) {
        const auto p = radial_tent_profile(spec);
        if (!(p.slope_in > 1.0) || !(p.slope_out > 1.0))
            throw_config("radial_tent slopes must exceed 1");
        if (!(p.zeta > 0.0) || p.alpha0 < 0.0 || !(p.alpha0 < p.zeta))
            throw_config("radial_tent requires 0 <= alpha0 < zeta");
        if (!(p.alpha() < p.beta()))
            throw_config("radial_tent slopes leave no deleted band (need 1/slope_in + 1/slope_out < 1)");
    }
    if (spec.family == MapFamily::affine_horseshoe) {
        const double c = spec.param_or("contraction", 0.2);
        const double e = spec.param_or("expansion", 4.0);
        if (!(c > 0.0 && c <= 0.2)) throw_config("affine_horseshoe contraction must be in (0, 0.2]");
        if (!(e >= 3.0 && e <= 4.0)) throw_config("affine_horseshoe expansion must be in [3, 4]");
    }
}

Mat rotation(double angle) {
    Mat r(2, 2);
    const double c = std::cos(angle), s = std::sin(angle);
    r << c, -s, s, c;
    return r;
}

void make_gauss_rotation(const MapSpec& spec, EvalFn& eval, JacFn& jac) {
    const double a = *spec.param("a");
    const double angle = 2.0 * kPi * *spec.param("theta");
    const double c = std::cos(angle), s = std::sin(angle);
    if (spec.literal_eq10) {
        // Both components equal x1 cos - x2 sin.
        eval = [a, c, s](const Vec& x) {
            const double g = a * std::exp(-x.squaredNorm());
            const double u = x(0) * c - x(1) * s;
            Vec y(2);
            y << g * u, g * u;
            return y;
        };
        jac = [a, c, s](const Vec& x) {
            const double g = a * std::exp(-x.squaredNorm());
            const double u = x(0) * c - x(1) * s;
            Mat j(2, 2);
            const double d0 = g * (c - 2.0 * x(0) * u);
            const double d1 = g * (-s - 2.0 * x(1) * u);
            j << d0, d1, d0, d1;
            return j;
        };
        return;
    }
    eval = [a, c, s](const Vec& x) {
        const double g = a * std::exp(-x.squaredNorm());
        Vec y(2);
        y << g * (x(0) * c - x(1) * s), g * (x(0) * s + x(1) * c);
        return y;
    };
    jac = [a, c, s](const Vec& x) {
        // d/dx [g(x) R x] = g R - 2 g (R x) x^T
        const double g = a * std::exp(-x.squaredNorm());
        Mat r(2, 2);
        r << c, -s, s, c;
        const Vec rx = r * x;
        Mat j = g * r - 2.0 * g * rx * x.transpose();
        return j;
    };
}

void make_pioneer_climax(const MapSpec& spec, bool full, EvalFn& eval, JacFn& jac) {
    const double a = *spec.param("a");
    const double b = *spec.param("b");
    const double c12 = full ? 0.2 : 0.0;  // cross term in the first exponent
    eval = [a, b, c12](const Vec& x) {
        const double w = 0.2 * x(0) + 0.8 * x(1);
        Vec y(2);
        y << x(0) * std::exp(a - 0.8 * x(0) - c12 * x(1)), x(1) * w * std::exp(b - w);
        return y;
    };
    jac = [a, b, c12](const Vec& x) {
        const double e1 = std::exp(a - 0.8 * x(0) - c12 * x(1));
        const double w = 0.2 * x(0) + 0.8 * x(1);
        const double e2 = std::exp(b - w);
        Mat j(2, 2);
        j << e1 * (1.0 - 0.8 * x(0)), -c12 * x(0) * e1,
            x(1) * e2 * 0.2 * (1.0 - w), e2 * (w + 0.8 * x(1) * (1.0 - w));
        return j;
    };
}

void make_user_table(const MapSpec& spec, EvalFn& eval) {
    const int m = spec.dim;
    Mat A(m, m);
    Vec b(m);
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) A(i, j) = *spec.param(table_name('A', i, j));
        b(i) = spec.param_or(table_name('b', i), 0.0);
    }
    eval = [A, b](const Vec& x) { return Vec(A * x + b); };
}

void make_radial_tent(const MapSpec& spec, EvalFn& eval, JacFn& jac) {
    const RadialProfile prof = radial_tent_profile(spec);
    const Mat rot = rotation(2.0 * kPi * spec.param_or("theta", 0.0));
    eval = [prof, rot](const Vec& x) {
        const double r = x.norm();
        if (r == 0.0) return Vec(Vec::Zero(2));
        return Vec(rot * x * (prof.radius(r) / r));
    };
    jac = [prof, rot](const Vec& x) {
        const double r = x.norm();
        if (r == 0.0) return Mat(prof.alpha0 > 0.0 ? Mat(Mat::Zero(2, 2)) : Mat(prof.slope_in * rot));
        const Vec u = x / r;
        const Mat uu = u * u.transpose();
        const Mat id = Mat::Identity(2, 2);
        return Mat(rot * (prof.derivative(r) * uu + (prof.radius(r) / r) * (id - uu)));
    };
}

// Model-space horseshoe pieces. Z is split by x2 into S0 [-1,3], S_half (3,5), S1 [5,9].
constexpr double kHalfScale = 0.05;
constexpr double kCapScale = 0.1;
const double kSinkQ[2] = {-1.8, -2.5};    // attracting fixed point in C0
const double kCap1Target[2] = {-1.8, -3.8};
const double kCap1Center[2] = {-2.0, 11.0};
const double kS1Column = -3.2;

enum class HorseshoePiece { c0, s0, s_half, s1, c1 };

HorseshoePiece horseshoe_piece(const Vec& x) {
    if (x(1) < -1.0) return HorseshoePiece::c0;
    if (x(1) <= 3.0) return HorseshoePiece::s0;
    if (x(1) < 5.0) return HorseshoePiece::s_half;
    if (x(1) <= 9.0) return HorseshoePiece::s1;
    return HorseshoePiece::c1;
}

Vec horseshoe_piece_eval(HorseshoePiece piece, double c, double e, const Vec& x) {
    Vec y(2);
    switch (piece) {
    case HorseshoePiece::s0: y << c * x(0), e * x(1); break;
    case HorseshoePiece::s1: y << kS1Column - c * (x(0) + 2.0), e * (8.0 - x(1)); break;
    case HorseshoePiece::s_half:
        y << -2.0 + kHalfScale * (x(0) + 2.0), 11.0 + kHalfScale * (x(1) - 4.0);
        break;
    case HorseshoePiece::c0:
        y << kSinkQ[0] + kCapScale * (x(0) - kSinkQ[0]), kSinkQ[1] + kCapScale * (x(1) - kSinkQ[1]);
        break;
    case HorseshoePiece::c1:
        y << kCap1Target[0] + kCapScale * (x(0) - kCap1Center[0]),
            kCap1Target[1] + kCapScale * (x(1) - kCap1Center[1]);
        break;
    }
    return y;
}

Mat horseshoe_piece_jac(HorseshoePiece piece, double c, double e) {
    Mat j = Mat::Zero(2, 2);
    switch (piece) {
    case HorseshoePiece::s0: j(0, 0) = c; j(1, 1) = e; break;
    case HorseshoePiece::s1: j(0, 0) = -c; j(1, 1) = -e; break;
    case HorseshoePiece::s_half: j(0, 0) = j(1, 1) = kHalfScale; break;
    case HorseshoePiece::c0:
    case HorseshoePiece::c1: j(0, 0) = j(1, 1) = kCapScale; break;
    }
    return j;
}

Vec horseshoe_piece_inverse(HorseshoePiece piece, double c, double e, const Vec& y) {
    Vec x(2);
    switch (piece) {
    case HorseshoePiece::s0: x << y(0) / c, y(1) / e; break;
    case HorseshoePiece::s1: x << -2.0 - (y(0) - kS1Column) / c, 8.0 - y(1) / e; break;
    case HorseshoePiece::s_half:
        x << -2.0 + (y(0) + 2.0) / kHalfScale, 4.0 + (y(1) - 11.0) / kHalfScale;
        break;
    case HorseshoePiece::c0:
        x << kSinkQ[0] + (y(0) - kSinkQ[0]) / kCapScale, kSinkQ[1] + (y(1) - kSinkQ[1]) / kCapScale;
        break;
    case HorseshoePiece::c1:
        x << kCap1Center[0] + (y(0) - kCap1Target[0]) / kCapScale,
            kCap1Center[1] + (y(1) - kCap1Target[1]) / kCapScale;
        break;
    }
    return x;
}

bool in_model_stadium(const Vec& x, double slack) {
    const double x2 = std::clamp(x(1), -1.0, 9.0);
    const double dx = x(0) + 2.0, dy = x(1) - x2;
    return std::sqrt(dx * dx + dy * dy) <= 4.0 + slack;
}

}  // namespace

std::string_view family_name(MapFamily family) {
    for (const auto& f : kFamilies)
        if (f.family == family) return f.name;
    return "unknown";
}

std::optional<MapFamily> parse_family(std::string_view name) {
    for (const auto& f : kFamilies)
        if (f.name == name && f.family != MapFamily::custom) return f.family;
    return std::nullopt;
}

std::optional<double> MapSpec::param(std::string_view name) const {
    for (const auto& [key, value] : params)
        if (key == name) return value;
    return std::nullopt;
}

double MapSpec::param_or(std::string_view name, double fallback) const {
    return param(name).value_or(fallback);
}

MapSpec& MapSpec::set(std::string name, double value) {
    for (auto& [key, v] : params) {
        if (key == name) {
            v = value;
            return *this;
        }
    }
    params.emplace_back(std::move(name), value);
    return *this;
}

MapSpec gauss_rotation_spec(double a, double theta) {
    MapSpec s;
    s.family = MapFamily::gauss_rotation;
    s.params = {{"a", a}, {"theta", theta}};
    return s;
}

MapSpec pioneer_climax_full_spec(double a, double b) {
    MapSpec s;
    s.family = MapFamily::pioneer_climax_full;
    s.params = {{"a", a}, {"b", b}};
    return s;
}

MapSpec pioneer_climax_mixed_spec(double a, double b) {
    MapSpec s;
    s.family = MapFamily::pioneer_climax_mixed;
    s.params = {{"a", a}, {"b", b}};
    return s;
}

MapSpec user_table_spec(int dim, const std::vector<double>& matrix, const std::vector<double>& offset) {
    if (dim < 1 || static_cast<int>(matrix.size()) != dim * dim)
        throw_config("user_table matrix must have dim*dim entries");
    if (!offset.empty() && static_cast<int>(offset.size()) != dim)
        throw_config("user_table offset must have dim entries");
    MapSpec s;
    s.family = MapFamily::user_table;
    s.dim = dim;
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) s.params.emplace_back(table_name('A', i, j), matrix[i * dim + j]);
    for (std::size_t i = 0; i < offset.size(); ++i)
        s.params.emplace_back(table_name('b', static_cast<int>(i)), offset[i]);
    return s;
}

MapSpec radial_tent_spec(double slope_in, double slope_out, double zeta, double alpha0, double theta) {
    MapSpec s;
    s.family = MapFamily::radial_tent;
    s.params = {{"slope_in", slope_in}, {"slope_out", slope_out}, {"zeta", zeta},
                {"alpha0", alpha0},     {"theta", theta}};
    return s;
}

MapSpec affine_horseshoe_spec(double contraction, double expansion) {
    MapSpec s;
    s.family = MapFamily::affine_horseshoe;
    s.params = {{"contraction", contraction}, {"expansion", expansion}};
    return s;
}

double RadialProfile::radius(double r) const {
    if (alpha0 > 0.0 && r < alpha0) return r * r / alpha0;
    const double rise = alpha0 + slope_in * (r - alpha0);
    const double fall = alpha0 + slope_out * (zeta - r);
    return std::max(0.0, std::min(rise, fall));
}

double RadialProfile::derivative(double r) const {
    if (alpha0 > 0.0 && r < alpha0) return 2.0 * r / alpha0;
    const double rise = alpha0 + slope_in * (r - alpha0);
    const double fall = alpha0 + slope_out * (zeta - r);
    if (rise <= fall) return slope_in;
    if (fall > 0.0) return -slope_out;
    return 0.0;
}

double RadialProfile::alpha() const { return alpha0 + (zeta - alpha0) / slope_in; }
double RadialProfile::beta() const { return zeta - (zeta - alpha0) / slope_out; }
double RadialProfile::cutoff() const { return zeta + alpha0 / slope_out; }

RadialProfile radial_tent_profile(const MapSpec& spec) {
    return RadialProfile{spec.param_or("slope_in", 0.0), spec.param_or("slope_out", 0.0),
                         spec.param_or("zeta", 0.0), spec.param_or("alpha0", 0.0)};
}

Vec affine_horseshoe_eval(double contraction, double expansion, const Vec& x) {
    return horseshoe_piece_eval(horseshoe_piece(x), contraction, expansion, x);
}

Vec affine_horseshoe_inverse(double contraction, double expansion, const Vec& y) {
    for (auto piece : {HorseshoePiece::s0, HorseshoePiece::s1, HorseshoePiece::s_half,
                       HorseshoePiece::c0, HorseshoePiece::c1}) {
        const Vec x = horseshoe_piece_inverse(piece, contraction, expansion, y);
        if (horseshoe_piece(x) == piece && in_model_stadium(x, 1e-12)) return x;
    }
    Vec far(2);
    far << 1e6, 1e6;
    return far;
}

Vec MapHandle::eval(const Vec& x) const {
    if (x.size() != dim()) throw_config("input dimension mismatch");
    if (!x.allFinite()) throw_config("non-finite input to " + name_);
    return eval_(x);
}

Mat MapHandle::jacobian(const Vec& x) const {
    if (x.size() != dim()) throw_config("input dimension mismatch");
    if (!x.allFinite()) throw_config("non-finite input to jacobian of " + name_);
    return jac_(x);
}

MapHandle MapHandle::custom(std::string name, int dim, EvalFn eval, JacFn jac, Domain domain) {
    if (dim < 1 || dim > kMaxDim) throw_config("custom map dimension out of range");
    MapHandle h;
    h.spec_.family = MapFamily::custom;
    h.spec_.dim = dim;
    h.name_ = std::move(name);
    h.eval_ = std::move(eval);
    h.domain_ = domain;
    if (jac) {
        h.jac_ = std::move(jac);
        h.jac_kind_ = JacobianKind::analytic;
    } else {
        h.jac_ = [f = h.eval_](const Vec& x) { return finite_difference_jacobian(f, x); };
        h.jac_kind_ = JacobianKind::finite_difference;
    }
    return h;
}

MapHandle build_map(const MapSpec& spec) {
    validate(spec);
    MapHandle h;
    h.spec_ = spec;
    h.name_ = std::string(family_name(spec.family));
    switch (spec.family) {
    case MapFamily::gauss_rotation: make_gauss_rotation(spec, h.eval_, h.jac_); break;
    case MapFamily::pioneer_climax_full: make_pioneer_climax(spec, true, h.eval_, h.jac_); break;
    case MapFamily::pioneer_climax_mixed: make_pioneer_climax(spec, false, h.eval_, h.jac_); break;
    case MapFamily::user_table:
        make_user_table(spec, h.eval_);
        h.jac_ = [f = h.eval_](const Vec& x) { return finite_difference_jacobian(f, x); };
        h.jac_kind_ = JacobianKind::finite_difference;
        break;
    case MapFamily::radial_tent: make_radial_tent(spec, h.eval_, h.jac_); break;
    case MapFamily::affine_horseshoe: {
        const double c = spec.param_or("contraction", 0.2);
        const double e = spec.param_or("expansion", 4.0);
        h.eval_ = [c, e](const Vec& x) { return affine_horseshoe_eval(c, e, x); };
        h.jac_ = [c, e](const Vec& x) { return horseshoe_piece_jac(horseshoe_piece(x), c, e); };
        break;
    }
    case MapFamily::custom: throw_config("custom maps cannot be built from a spec");
    }
    if (spec.family == MapFamily::pioneer_climax_full || spec.family == MapFamily::pioneer_climax_mixed)
        h.domain_ = Domain::nonnegative_orthant;
    return h;
}

Vec eval_map(const MapHandle& map, const Vec& x) { return map.eval(x); }

Mat jacobian(const MapHandle& map, const Vec& x) { return map.jacobian(x); }

Mat finite_difference_jacobian(const EvalFn& f, const Vec& x) {
    const int m = static_cast<int>(x.size());
    const double h = std::max(1e-6, 1e-6 * x.norm());
    Mat j(m, m);
    Vec xp = x, xm = x;
    for (int k = 0; k < m; ++k) {
        xp(k) = x(k) + h;
        xm(k) = x(k) - h;
        j.col(k) = (f(xp) - f(xm)) / (2.0 * h);
        xp(k) = xm(k) = x(k);
    }
    return j;
}

MapHandle iterate_map(const MapHandle& map, int k) {
    if (k < 1) throw_config("iterate_map requires k >= 1");
    if (k == 1) return map;
    auto eval = [map, k](const Vec& x) { return iterate(map, x, k); };
    auto jac = [map, k](const Vec& x) {
        Vec y = x;
        Mat j = Mat::Identity(x.size(), x.size());
        for (int i = 0; i < k; ++i) {
            j = map.jacobian_unchecked(y) * j;
            y = map(y);
        }
        return j;
    };
    return MapHandle::custom(map.name() + "^" + std::to_string(k), map.dim(), eval, jac, map.domain());
}

Vec iterate(const MapHandle& map, Vec x, long n) {
    for (long i = 0; i < n; ++i) x = map(x);
    return x;
}

}  // namespace azlab
