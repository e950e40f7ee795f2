#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/LU>

#include "azlab/error.hpp"
#include "azlab/maps.hpp"

using namespace azlab;

namespace {

Vec v2(double a, double b) {
    Vec x(2);
    x << a, b;
    return x;
}

double rel_jac_error(const MapHandle& m, const Vec& x) {
    const Mat ja = m.jacobian(x);
    const Mat jf = finite_difference_jacobian([&](const Vec& y) { return m(y); }, x);
    const double scale = ja.cwiseAbs().maxCoeff();
    return scale == 0.0 ? (ja - jf).cwiseAbs().maxCoeff() : (ja - jf).cwiseAbs().maxCoeff() / scale;
}

}  // namespace

TEST_CASE("gauss rotation fixes the origin") {
    const auto m = build_map(gauss_rotation_spec(5.4, kGoldenMean));
    CHECK(m.eval(v2(0, 0)).norm() == 0.0);
    CHECK(m.jac_kind() == JacobianKind::analytic);
}

TEST_CASE("gauss rotation magnitude at unit radius is 1/e") {
    const auto m = build_map(gauss_rotation_spec(1.0, 0.3));
    for (double t : {0.0, 0.7, 2.0, 4.0}) {
        const Vec y = m.eval(v2(std::cos(t), std::sin(t)));
        CHECK(y.norm() == doctest::Approx(0.367879441171).epsilon(1e-11));
    }
}

TEST_CASE("pioneer full has the axis fixed point a/0.8") {
    const auto m = build_map(pioneer_climax_full_spec(3, 3));
    const Vec y = m.eval(v2(3.75, 0));
    CHECK(y(0) == doctest::Approx(3.75).epsilon(1e-14));
    CHECK(y(1) == 0.0);
}

TEST_CASE("pioneer mixed fixes the origin") {
    const auto m = build_map(pioneer_climax_mixed_spec(3, 3));
    CHECK(m.eval(v2(0, 0)).norm() == 0.0);
}

TEST_CASE("gauss rotation is tiny at radius 10") {
    const auto m = build_map(gauss_rotation_spec(5.4, kGoldenMean));
    const Vec y = m.eval(v2(6, 8));
    CHECK(y.norm() < 1e-40);
    CHECK(y.norm() == doctest::Approx(5.4 * 10 * std::exp(-100.0)).epsilon(1e-12));
}

TEST_CASE("pioneer full at (1,1) with a=2.4, b=2.5") {
    const auto m = build_map(pioneer_climax_full_spec(2.4, 2.5));
    const Vec y = m.eval(v2(1, 1));
    CHECK(y(0) == doctest::Approx(4.0551999668).epsilon(1e-9));
    CHECK(y(1) == doctest::Approx(4.4816890703).epsilon(1e-9));
}

TEST_CASE("gauss jacobian at the origin is a R") {
    const double a = 2.5, theta = kGoldenMean;
    const auto m = build_map(gauss_rotation_spec(a, theta));
    const Mat j = m.jacobian(v2(0, 0));
    const double c = std::cos(2 * kPi * theta), s = std::sin(2 * kPi * theta);
    CHECK(j(0, 0) == doctest::Approx(a * c));
    CHECK(j(0, 1) == doctest::Approx(-a * s));
    CHECK(j(1, 0) == doctest::Approx(a * s));
    CHECK(j(1, 1) == doctest::Approx(a * c));
}

TEST_CASE("pioneer jacobian upper-left at the axis fixed point is 1 - a") {
    for (double a : {2.0, 3.0, 4.5}) {
        const auto m = build_map(pioneer_climax_full_spec(a, 3));
        const Mat j = m.jacobian(v2(a / 0.8, 0));
        CHECK(j(0, 0) == doctest::Approx(1 - a).epsilon(1e-12));
        CHECK(rel_jac_error(m, v2(a / 0.8, 0)) < 1e-6);
    }
}

TEST_CASE("analytic jacobians agree with central differences") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-5, 5);
    const MapHandle maps[] = {build_map(gauss_rotation_spec(5.4, kGoldenMean)),
                              build_map(gauss_rotation_spec(2.7, kEuler)),
                              build_map(pioneer_climax_full_spec(3, 3)),
                              build_map(pioneer_climax_mixed_spec(3, 3))};
    for (const auto& m : maps) {
        double worst = 0;
        for (int i = 0; i < 1000; ++i) worst = std::max(worst, rel_jac_error(m, v2(u(rng), u(rng))));
        CHECK(worst <= 1e-5);
    }
}

TEST_CASE("norm equivariance of the gauss rotation") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-3, 3);
    const double a = 4.2;
    const auto m = build_map(gauss_rotation_spec(a, kEuler));
    for (int i = 0; i < 1000; ++i) {
        const Vec x = v2(u(rng), u(rng));
        const double r = x.norm();
        CHECK(m(x).norm() == doctest::Approx(a * r * std::exp(-r * r)).epsilon(1e-12));
    }
}

TEST_CASE("sampled decay at infinity") {
    auto profile = [](const MapHandle& m, double r, bool orthant) {
        double best = 0;
        for (int i = 0; i < 1000; ++i) {
            const double t = orthant ? 0.5 * kPi * i / 999.0 : 2 * kPi * i / 1000.0;
            best = std::max(best, m(v2(r * std::cos(t), r * std::sin(t))).norm());
        }
        return best;
    };
    SUBCASE("gauss rotation: decreasing from r = 2 and below 1e-12 at r = 10") {
        for (double a : {0.5, 5.4, 10.0}) {
            const auto m = build_map(gauss_rotation_spec(a, kGoldenMean));
            double prev = profile(m, 2.0, false);
            for (double r = 2.25; r <= 10.0; r += 0.25) {
                const double v = profile(m, r, false);
                CHECK(v < prev);
                prev = v;
            }
            CHECK(prev < 1e-12);
        }
    }
    SUBCASE("pioneer full on the orthant: decreasing from r = 4, below 1e-12 by r = 250") {
        for (const auto& spec : {pioneer_climax_full_spec(3, 3), pioneer_climax_full_spec(10, 10)}) {
            const auto m = build_map(spec);
            double prev = profile(m, 4.0, true);
            for (double r = 5.0; r <= 250.0; r += 1.0) {
                const double v = profile(m, r, true);
                CHECK(v < prev);
                prev = v;
            }
            CHECK(prev < 1e-12);
        }
    }
    SUBCASE("pioneer mixed does not decay: the first component ignores x2") {
        const auto m = build_map(pioneer_climax_mixed_spec(3, 3));
        const double plateau = std::exp(3.0 - 1.0) / 0.8;
        CHECK(m(v2(1.25, 1e6))(0) == doctest::Approx(plateau).epsilon(1e-12));
        CHECK(profile(m, 100.0, true) > 0.9 * plateau);
    }
}

TEST_CASE("pioneer maps leave the coordinate axes invariant") {
    for (const auto& spec : {pioneer_climax_full_spec(3, 3), pioneer_climax_mixed_spec(2.4, 2.5)}) {
        const auto m = build_map(spec);
        for (double t : {0.1, 1.0, 3.0, 7.5}) {
            CHECK(m(v2(t, 0))(1) == 0.0);
            CHECK(m(v2(0, t))(0) == 0.0);
        }
    }
}

TEST_CASE("degenerate gauss variant has coinciding components") {
    auto spec = gauss_rotation_spec(3.0, kGoldenMean);
    spec.literal_eq10 = true;
    const auto m = build_map(spec);
    const Vec y = m(v2(0.4, -0.3));
    CHECK(y(0) == y(1));
    CHECK(std::abs(m.jacobian(v2(0, 0)).determinant()) < 1e-12);
    CHECK(rel_jac_error(m, v2(0.4, -0.3)) < 1e-6);
}

TEST_CASE("user table is affine with a difference jacobian") {
    const auto m = build_map(user_table_spec(2, {2, 0, 0, 0.5}, {1, -1}));
    CHECK(m.jac_kind() == JacobianKind::finite_difference);
    const Vec y = m(v2(1, 2));
    CHECK(y(0) == doctest::Approx(3));
    CHECK(y(1) == doctest::Approx(0));
    const Mat j = m.jacobian(v2(1, 2));
    CHECK(j(0, 0) == doctest::Approx(2).epsilon(1e-9));
    CHECK(j(1, 1) == doctest::Approx(0.5).epsilon(1e-9));
    const auto m3 = build_map(user_table_spec(3, {1, 0, 0, 0, 1, 0, 0, 0, 1}));
    CHECK(m3.dim() == 3);
}

TEST_CASE("radial tent profile and cutoff") {
    const auto spec = radial_tent_spec(3, 4, 1.0);
    const auto m = build_map(spec);
    const auto p = radial_tent_profile(spec);
    CHECK(p.alpha() == doctest::Approx(1.0 / 3));
    CHECK(p.beta() == doctest::Approx(0.75));
    CHECK(m(v2(0.1, 0)).norm() == doctest::Approx(0.3));
    CHECK(m(v2(0, 0.9)).norm() == doctest::Approx(0.4));
    CHECK(m(v2(1.0, 0.2)).norm() == 0.0);
    const auto sink = radial_tent_profile(radial_tent_spec(3, 3, 1.0, 0.1));
    CHECK(sink.radius(0.05) == doctest::Approx(0.025));
    CHECK(sink.radius(sink.alpha()) == doctest::Approx(1.0));
    CHECK(sink.radius(1.0) == doctest::Approx(0.1));
    CHECK(rel_jac_error(m, v2(0.2, 0.1)) < 1e-6);
    CHECK(rel_jac_error(m, v2(0.6, 0.5)) < 1e-6);
}

TEST_CASE("affine horseshoe inverse undoes the map on f(H)") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> ux(-6, 2), uy(-5, 13);
    int checked = 0;
    for (int i = 0; i < 2000; ++i) {
        const Vec x = v2(ux(rng), uy(rng));
        const double x2 = std::clamp(x(1), -1.0, 9.0);
        if (std::hypot(x(0) + 2, x(1) - x2) > 4) continue;
        const Vec y = affine_horseshoe_eval(0.2, 4, x);
        CHECK((affine_horseshoe_inverse(0.2, 4, y) - x).norm() < 1e-9);
        ++checked;
    }
    CHECK(checked > 1000);
    CHECK(affine_horseshoe_inverse(0.2, 4, v2(1.5, 1.0)).norm() > 1e5);
}

TEST_CASE("spec errors are config errors") {
    auto kind = [](const MapSpec& s) {
        try {
            build_map(s);
        } catch (const Error& e) {
            return e.kind();
        }
        return ErrorKind::numeric;
    };
    MapSpec missing = gauss_rotation_spec(1, 0.5);
    missing.params.pop_back();
    CHECK(kind(missing) == ErrorKind::config);
    MapSpec extra = pioneer_climax_full_spec(3, 3);
    extra.set("theta", 1);
    CHECK(kind(extra) == ErrorKind::config);
    CHECK(kind(gauss_rotation_spec(NAN, 0.5)) == ErrorKind::config);
    CHECK(kind(gauss_rotation_spec(-1, 0.5)) == ErrorKind::config);
    MapSpec wrong_dim = gauss_rotation_spec(1, 0.5);
    wrong_dim.dim = 3;
    CHECK(kind(wrong_dim) == ErrorKind::config);
    CHECK_FALSE(parse_family("henon").has_value());
    CHECK(parse_family("pioneer_climax_mixed") == MapFamily::pioneer_climax_mixed);
    const auto m = build_map(gauss_rotation_spec(1, 0.5));
    CHECK_THROWS_AS(m.eval(v2(INFINITY, 0)), Error);
    CHECK_THROWS_AS(m.jacobian(v2(0, NAN)), Error);
}

TEST_CASE("iterate_map composes with the chain rule") {
    const auto m = build_map(pioneer_climax_full_spec(2.4, 2.5));
    const auto m3 = iterate_map(m, 3);
    const Vec x = v2(1.2, 0.7);
    CHECK((m3(x) - m(m(m(x)))).norm() < 1e-12);
    CHECK(rel_jac_error(m3, x) < 1e-5);
}
