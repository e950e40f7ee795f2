#include <doctest.h>

#include <cmath>

#include "azlab/dynamics.hpp"
#include "azlab/error.hpp"

using namespace azlab;

namespace {

Vec v2(double a, double b) {
    Vec x(2);
    x << a, b;
    return x;
}

}  // namespace

TEST_CASE("orbit keeps n points after the transient") {
    const auto m = build_map(gauss_rotation_spec(2.7, kGoldenMean));
    const auto c = orbit(m, v2(0.3, 0.2), 100, 500);
    CHECK(c.size() == 500);
    CHECK(c.dim() == 2);
    Vec x = v2(0.3, 0.2);
    for (int i = 0; i < 101; ++i) x = m(x);
    CHECK((c.point(0) - x).norm() == 0.0);
    CHECK(c.meta.n_transient == 100);
}

TEST_CASE("orbit rejects non-finite iterates") {
    const auto m = build_map(user_table_spec(2, {1e200, 0, 0, 1}));
    CHECK_THROWS_AS(orbit(m, v2(1e200, 0), 0, 10), Error);
}

TEST_CASE("small amplitude gauss map contracts to the origin") {
    const auto m = build_map(gauss_rotation_spec(0.5, kGoldenMean));
    const auto c = orbit(m, v2(0.8, -0.4), 0, 2000);
    CHECK(c.point(c.size() - 1).norm() < 1e-100);
    const auto cyc = find_cycle(m, 1, v2(0.01, 0.01));
    CHECK(cyc.stability == Stability::sink);
    CHECK(std::abs(cyc.multipliers[0]) == doctest::Approx(0.5));
}

TEST_CASE("axis fixed point of the pioneer map") {
    const auto m = build_map(pioneer_climax_full_spec(3, 3));
    const auto cyc = find_cycle(m, 1, v2(3.5, 0.0));
    CHECK(cyc.period == 1);
    CHECK(cyc.points[0](0) == doctest::Approx(3.75).epsilon(1e-10));
    CHECK(std::abs(cyc.points[0](1)) < 1e-12);
    CHECK(cyc.residual < 1e-10);
    // 0.75 e^{2.25} across the axis, 1 - a = -2 along it
    CHECK(std::abs(cyc.multipliers[0]) == doctest::Approx(0.75 * std::exp(2.25)).epsilon(1e-9));
    CHECK(cyc.multipliers[1].real() == doctest::Approx(-2.0).epsilon(1e-9));
    CHECK(cyc.stability == Stability::source);
}

TEST_CASE("newton reports the minimal period") {
    const auto m = build_map(pioneer_climax_full_spec(3, 3));
    const auto cyc = find_cycle(m, 4, v2(3.7, 0.0));
    CHECK(cyc.period == 1);
}

TEST_CASE("period six sink of the pioneer map") {
    const auto m = build_map(pioneer_climax_full_spec(2.398, 2.498));
    const auto c = orbit(m, v2(1, 1), 20000, 2000);
    const auto p = detect_period(c, 64);
    REQUIRE(p.has_value());
    CHECK(*p == 6);
    const auto cyc = find_cycle(m, 6, c.point(c.size() - 1));
    CHECK(cyc.period == 6);
    CHECK(cyc.stability == Stability::sink);
    CHECK(std::abs(cyc.multipliers[0]) < 1.0);
}

TEST_CASE("period two on the diagonal at a = b = 2") {
    const auto m = build_map(pioneer_climax_full_spec(2.0, 2.0));
    const auto c = orbit(m, v2(1, 1), 20000, 2000);
    CHECK(detect_period(c, 64) == 2);
}

TEST_CASE("chaotic orbit has no period") {
    const auto m = build_map(gauss_rotation_spec(5.4, kGoldenMean));
    const auto c = orbit(m, v2(0.3, 0.2), 10000, 1000);
    CHECK_FALSE(detect_period(c, 64).has_value());
}

TEST_CASE("detect_period needs three windows of data") {
    const auto m = build_map(gauss_rotation_spec(0.5, 0.1));
    const auto c = orbit(m, v2(0.3, 0.2), 0, 100);
    CHECK_THROWS_AS(detect_period(c, 64), Error);
}

TEST_CASE("classification from multipliers") {
    using C = std::complex<double>;
    CHECK(classify_multipliers({C(0.5), C(0.2)}) == Stability::sink);
    CHECK(classify_multipliers({C(3.0), C(1.5)}) == Stability::source);
    CHECK(classify_multipliers({C(-2.0), C(0.3)}) == Stability::saddle);
    CHECK(classify_multipliers({C(1.0005), C(0.3)}) == Stability::nonhyperbolic);
    CHECK(classify_multipliers({C(0.0, 0.9995), C(0.0, -0.9995)}) == Stability::nonhyperbolic);
}

TEST_CASE("linear saddle directions") {
    const auto m = build_map(user_table_spec(2, {3, 0, 0, 0.25}));
    const auto cyc = find_cycle(m, 1, v2(0.2, -0.1));
    CHECK(cyc.stability == Stability::saddle);
    CHECK(std::abs(cyc.unstable_dir(0)) == doctest::Approx(1.0));
    CHECK(std::abs(cyc.stable_dir(1)) == doctest::Approx(1.0));
}

TEST_CASE("cycle jacobian is the product along the orbit") {
    const auto m = build_map(pioneer_climax_full_spec(2.4, 2.5));
    const Vec x = v2(1.1, 0.9);
    const Mat j = cycle_jacobian(m, x, 2);
    const Mat expect = m.jacobian(m(x)) * m.jacobian(x);
    CHECK((j - expect).norm() < 1e-12 * expect.norm());
}
