#include "doctest.h"

#include "pc/errors.hpp"
#include "pc/potentials.hpp"
#include "pc/quadrature.hpp"

#include <cmath>

using namespace pc;

namespace {

Body square() {
    BodySpec s;
    s.shape = PolygonShape{{Point{-1.0, -1.0}, Point{1.0, -1.0}, Point{1.0, 1.0}, Point{-1.0, 1.0}}};
    return Body::build(s);
}

}  // namespace

TEST_CASE("Neumaier sum keeps small terms") {
    NeumaierSum s;
    s.add(1.0);
    s.add(1e100);
    s.add(1.0);
    s.add(-1e100);
    CHECK(s.value() == 2.0);
}

TEST_CASE("polar and grid routes agree on a constant kernel") {
    const Body b = square();
    const RadialKernel k = radial_kernel(Custom{}, 2);
    QuadratureOptions polar;
    polar.route = Route::Polar;
    QuadratureOptions grid;
    grid.route = Route::Grid;
    const Point x{0.3, -0.2};
    CHECK(integrate_kernel_over_body(b, k, x, 0.0, polar).value == doctest::Approx(4.0).epsilon(1e-12));
    const QuadratureResult g = integrate_kernel_over_body(b, k, x, 0.0, grid);
    CHECK(g.value == doctest::Approx(4.0).epsilon(1e-3));
}

TEST_CASE("complement integrals are consistent with body integrals") {
    const Body b = square();
    const RadialKernel k = radial_kernel(Heat{0.05}, 2);
    const Point x{0.2, 0.1};
    const double in = integrate_kernel_over_body(b, k, x, 0.0).value;
    const double out = integrate_kernel_over_complement(b, k, x).value;
    CHECK(in + out == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(out == doctest::Approx(1.0 - 0.99176895825972325).epsilon(1e-8));
}

TEST_CASE("Monte Carlo oracle brackets the Poisson integral") {
    const Body b = square();
    const RadialKernel k = radial_kernel(Poisson{0.5}, 2);
    const QuadratureResult mc = monte_carlo_oracle(b, k, Point{0.2, 0.1}, 0.0, 42, 400000);
    CHECK(std::abs(mc.value - 0.58151433860200392) < 4.0 * mc.estimated_error + 1e-4);
    const QuadratureResult again = monte_carlo_oracle(b, k, Point{0.2, 0.1}, 0.0, 42, 400000);
    CHECK(again.value == mc.value);
    CHECK_THROWS_AS(monte_carlo_oracle(b, k, Point{0.0, 0.0}, 0.0, 1, 10), Error);
}

TEST_CASE("non-integrable kernel without exclusion is rejected") {
    const Body b = square();
    const RadialKernel k = radial_kernel(Renormalized{-1.0}, 2);
    try {
        integrate_kernel_over_body(b, k, Point{0.0, 0.0}, 0.0);
        FAIL("expected SingularKernel");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::SingularKernel);
    }
}

TEST_CASE("route resolution") {
    const Body b = square();
    CHECK(resolve_route(b, Route::Auto) == Route::Polar);
    CHECK(resolve_route(b.voxelized(32), Route::Auto) == Route::Grid);
}
