#include "doctest.h"

#include "pc/conebound.hpp"
#include "pc/errors.hpp"
#include "pc/geometry.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>

using namespace pc;

namespace {

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return ErrorCode::IoError;
}

}  // namespace

TEST_CASE("half-space R~ constant") {
    EParams p;
    const RTilde r = r_tilde(p, 1e-12);
    CHECK(r.r_tilde == doctest::Approx(0.34783081407692331).epsilon(1e-10));
    CHECK(closed_form_root(6.0, 1.0, 2) == doctest::Approx(0.34783081407692331).epsilon(1e-12));
    CHECK(r.r_tilde > 1.0 / kPi);
    CHECK(lower_bound_r_tilde(1.0, 2) == doctest::Approx(1.0 / kPi));
    CHECK(lower_bound_r_tilde(1.0, 3) == doctest::Approx(0.25));
    CHECK(linearized_lower_bound(6.0, 1.0, 2) == doctest::Approx(12.0 / (11.0 * kPi)));
    CHECK_FALSE(r.theta_min_numeric);
}

TEST_CASE("closed form agrees with the cone integral") {
    for (int m : {2, 3}) {
        for (double R : {0.1, 0.3, 0.8}) {
            const ClosedFormE cf = halfspace_E_closed_form(R, 6.0, 1.0, m);
            CHECK(E(R, EParams{-1.0, kPi, kInf, 6.0, 1.0, m}).value == doctest::Approx(cf.E).epsilon(1e-9));
        }
    }
    // f'' by central differences of f'.
    const double R = 0.4, h = 1e-5;
    const double d2 =
        (halfspace_E_closed_form(R + h, 6.0, 1.0, 3).f_prime - halfspace_E_closed_form(R - h, 6.0, 1.0, 3).f_prime) /
        (2 * h);
    CHECK(halfspace_E_closed_form(R, 6.0, 1.0, 3).f_second == doctest::Approx(d2).epsilon(1e-6));
}

TEST_CASE("cone integral against direct Cartesian quadrature") {
    // m = 2, kappa = pi/2, delta = 0.5, R = 0.3, D = 3, alpha = -1; integrate over the cone in (x, y).
    using boost::math::quadrature::gauss_kronrod;
    const double R = 0.3, D = 3.0, delta = 0.5, half = kPi / 4;
    auto inner = [&](double phi) {
        auto g = [&](double rho) {
            const double x = R + rho * std::cos(phi), y = rho * std::sin(phi);
            const double r2 = x * x + y * y;
            return r2 <= D * D ? std::pow(r2, -1.5) * rho : 0.0;
        };
        return gauss_kronrod<double, 61>::integrate(g, 0.0, delta, 15, 1e-13);
    };
    const double ref = gauss_kronrod<double, 61>::integrate(inner, -half, half, 15, 1e-12);
    CHECK(cone_ball_integral({-1.0, kPi / 2, delta, 0.0, R, D, 2}) == doctest::Approx(ref).epsilon(1e-9));
}

TEST_CASE("rotation sweeps") {
    const RotationReport r2 = verify_rotation_minimality({-1.0, kPi / 2, 0.5, 0.0, 0.3, 3.0, 2}, 16);
    CHECK(r2.minimal_at_zero);
    CHECK(r2.thetas.size() == 16);
    CHECK(r2.thetas.back() == doctest::Approx(kPi / 4));
    const RotationReport r3 = verify_rotation_minimality({-1.0, kPi / 2, 5.0, 0.0, 0.3, 3.0, 3}, 8);
    CHECK(r3.minimal_at_zero);
    // delta = D - R exactly is inside the proven range.
    CHECK_NOTHROW(verify_rotation_minimality({-1.0, kPi / 2, 2.7, 0.0, 0.3, 3.0, 2}, 4));
    CHECK(code_of([] { verify_rotation_minimality({-1.0, kPi / 2, 2.8, 0.0, 0.3, 3.0, 2}, 4); }) ==
          ErrorCode::HypothesisViolated);
    CHECK(code_of([] { verify_rotation_minimality({-1.0, kPi / 2, 0.5, 0.0, 0.3, 3.0, 4}, 4); }) ==
          ErrorCode::UnsupportedDimension);
}

TEST_CASE("E profile is strictly decreasing and brackets R~") {
    const EProfile prof = e_profile(EParams{}, 50);
    CHECK(prof.strictly_decreasing);
    CHECK(prof.R_samples.size() == 50);
    CHECK(prof.bracket_lo <= prof.r_tilde);
    CHECK(prof.r_tilde <= prof.bracket_hi);
    CHECK(prof.bracket_hi - prof.bracket_lo <= 1e-6);
}

TEST_CASE("R~ of the test bodies") {
    CHECK(r_tilde({-1.0, kPi / 2, 1.0, 2.0 * std::sqrt(10.0), 1.0, 2}).r_tilde == doctest::Approx(0.12497).epsilon(2e-4));
    CHECK(r_tilde({-1.0, kPi / 2, 0.5, 6.0, 1.0, 2}).r_tilde == doctest::Approx(0.1084).epsilon(1e-3));
    CHECK(r_tilde({-1.0, kPi, kInf, 2.0, 1.0, 2}).r_tilde == doctest::Approx(0.4345).epsilon(1e-3));
    CHECK(r_tilde({0.0, kPi, kInf, 2.0, 1.0, 2}).r_tilde == doctest::Approx(0.2727).epsilon(1e-3));
    CHECK(r_tilde({-1.0, kPi, kInf, 6.0, 1.0, 3}).r_tilde == doctest::Approx(0.273293).epsilon(1e-5));
}

TEST_CASE("middle delta range uses the numeric theta minimum") {
    const EValue e = E(0.3, {-1.0, kPi / 2, 2.8, 3.0, 1.0, 2});
    CHECK(e.theta_min_numeric);
    CHECK_FALSE(E(0.3, {-1.0, kPi / 2, 0.5, 3.0, 1.0, 2}).theta_min_numeric);
}

TEST_CASE("input validation") {
    CHECK(code_of([] { cone_ball_integral({0.5, kPi, kInf, 0.0, 0.3, 3.0, 2}); }) == ErrorCode::InvalidRange);
    CHECK(code_of([] { cone_ball_integral({-1.0, 4.0, kInf, 0.0, 0.3, 3.0, 2}); }) == ErrorCode::InvalidRange);
    CHECK(code_of([] { cone_ball_integral({-1.0, kPi / 2, 1.0, 1.0, 0.3, 3.0, 2}); }) == ErrorCode::InvalidRange);
    CHECK(code_of([] { cone_ball_integral({-1.0, kPi / 2, 1.0, 0.1, 0.3, 3.0, 4}); }) ==
          ErrorCode::UnsupportedDimension);
    CHECK(code_of([] { E(4.0, EParams{-1.0, kPi, kInf, 3.0, 1.0, 2}); }) == ErrorCode::InvalidRange);
}
