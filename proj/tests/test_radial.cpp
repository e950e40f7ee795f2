#include <doctest.h>

#include <cmath>
#include <sstream>

#include "azlab/error.hpp"
#include "azlab/radial.hpp"

using namespace azlab;

namespace {

Vec v2(double a, double b) {
    Vec x(2);
    x << a, b;
    return x;
}

}  // namespace

TEST_CASE("radial derivative of the gauss map") {
    const double a = 2.0;
    const auto m = build_map(gauss_rotation_spec(a, 0.3));
    for (double r : {0.2, 0.5, 1.0, 1.7}) {
        const Vec x = v2(r * std::cos(1.1), r * std::sin(1.1));
        CHECK(radial_derivative(m, x) == doctest::Approx(a * std::exp(-r * r) * (1 - 2 * r * r)).epsilon(1e-9));
    }
    CHECK_THROWS_AS(radial_derivative(m, v2(0, 0)), Error);
}

TEST_CASE("tent slopes are recovered by sampling") {
    const auto spec = radial_tent_spec(3, 4, 1.0, 0.0, 0.17);
    const auto m = build_map(spec);
    const auto shells = radial_tent_shells(spec);
    CHECK(shells.violations().empty());
    const auto b = estimate_radial_bounds(m, shells, 64, 32);
    CHECK(b.lambda_hat == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(b.mu_hat == doctest::Approx(4.0).epsilon(1e-6));
    CHECK(b.violations.empty());
    CHECK(b.samples == 2 * 64 * 32);
}

TEST_CASE("shell invariants are reported") {
    CHECK(ShellSpec::constant(0.4, 0.6, 1.0, 2, 3).violations().empty());
    CHECK_FALSE(ShellSpec::constant(0.7, 0.6, 1.0, 2, 3).violations().empty());
    CHECK_FALSE(ShellSpec::constant(0.4, 0.6, 1.0, 0.5, 3).violations().empty());
    CHECK_FALSE(ShellSpec::constant(0.4, 0.6, 1.0, 2, 3, 0.5).violations().empty());
}

TEST_CASE("tent partition nests and siblings are disjoint") {
    const auto spec = radial_tent_spec(3, 4, 1.0);
    const auto part = cantor_shells(radial_tent_return_map(spec), radial_tent_shells(spec), 8, 16);
    CHECK(part.depth() == 8);
    CHECK(part.n_angles() == 16);
    std::string w;
    CHECK_MESSAGE(part.check_nesting(1e-11, &w), w);
    CHECK_MESSAGE(part.check_disjoint(&w), w);
    // level 1 with slopes 3 and 4: [0, 1/3] maps onto [0, 1] and [3/4, 1] maps onto [1, 0]
    CHECK(part.inner(1, 0, 0) == doctest::Approx(0.0));
    CHECK(part.outer(1, 0, 0) == doctest::Approx(1.0 / 3).epsilon(1e-10));
    CHECK(part.inner(1, 1, 0) == doctest::Approx(0.75).epsilon(1e-10));
    CHECK(part.outer(1, 1, 0) == doctest::Approx(1.0).epsilon(1e-10));
    // cell widths shrink by the branch slopes
    CHECK(part.outer(2, 0, 3) - part.inner(2, 0, 3) == doctest::Approx(1.0 / 9).epsilon(1e-9));
    CHECK(part.outer(2, 3, 3) - part.inner(2, 3, 3) == doctest::Approx(1.0 / 16).epsilon(1e-9));
}

TEST_CASE("generic partition from a rotated tent") {
    const auto spec = radial_tent_spec(3, 3, 1.0, 0.0, 0.1);
    const auto part = cantor_shells(radial_return_map(build_map(spec)), radial_tent_shells(spec), 5, 32);
    const auto fast = cantor_shells(radial_tent_return_map(spec), radial_tent_shells(spec), 5, 32);
    for (int a = 0; a < 32; ++a)
        for (std::uint64_t s = 0; s < 32; ++s) {
            CHECK(part.inner(5, s, a) == doctest::Approx(fast.inner(5, s, a)).epsilon(1e-9));
            CHECK(part.outer(5, s, a) == doctest::Approx(fast.outer(5, s, a)).epsilon(1e-9));
        }
}

TEST_CASE("sink mode partition starts at alpha0") {
    const auto spec = radial_tent_spec(3, 3, 1.0, 0.1);
    const auto shells = radial_tent_shells(spec);
    CHECK(shells.mode == ShellMode::sink_origin);
    const auto part = cantor_shells(radial_tent_return_map(spec), shells, 6, 8);
    CHECK(part.check_nesting(1e-11));
    CHECK(part.check_disjoint());
    CHECK(part.inner(1, 0, 0) >= 0.1 - 1e-12);
}

TEST_CASE("samples stay inside their shells") {
    const auto spec = radial_tent_spec(3, 3, 1.0);
    const auto part = cantor_shells(radial_tent_return_map(spec), radial_tent_shells(spec), 6, 16);
    const auto c = sample_partition(part, 5000, 3);
    CHECK(c.size() == 5000);
    CHECK(c.max_norm() <= 1.0 + 1e-12);
    const auto c2 = sample_partition(part, 5000, 3);
    CHECK(c.raw() == c2.raw());
    std::ostringstream os;
    part.write_csv(os, 2);
    CHECK(os.str().rfind("angle,address,inner,outer\n", 0) == 0);
}

TEST_CASE("dimension bounds") {
    const auto b = hausdorff_bounds(2, 2, 2);
    CHECK(b.lower == doctest::Approx(1 + std::log(2.0) / std::log(3.0)));
    CHECK(b.upper == b.lower);
    const auto c = hausdorff_bounds(3, 4, 2);
    CHECK(c.lower < c.upper);
    CHECK_THROWS_AS(hausdorff_bounds(0.0, 2, 2), Error);
    CHECK_THROWS_AS(hausdorff_bounds(3, 2, 2), Error);
}
