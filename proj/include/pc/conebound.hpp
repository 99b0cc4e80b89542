#pragma once

#include <vector>

namespace pc {

/// Cone C_theta(R e1) = Rot(theta) C(0; kappa, delta) + R e1 intersected with B_D(0), kernel |xi|^{alpha-m}.
struct ConeIntegralParams {
    double alpha = -1.0;
    double kappa = 3.14159265358979323846;
    double delta = 1.0 / 0.0;
    double theta = 0.0;
    double R = 0.5;
    double D = 3.0;
    int m = 2;
};

double cone_ball_integral(const ConeIntegralParams& p);

/// True when delta <= D - R or delta >= sqrt(D^2 - R^2), the range where theta = 0 is proven minimal.
bool rotation_hypothesis_holds(double delta, double R, double D);

struct RotationReport {
    std::vector<double> thetas;
    std::vector<double> values;
    double value_at_zero = 0.0;
    double min_value = 0.0;
    double tolerance = 0.0;
    bool minimal_at_zero = false;
};

/// Sweeps theta over [0, (pi - kappa)/2] (params.theta is ignored).
RotationReport verify_rotation_minimality(const ConeIntegralParams& params, int theta_samples);

struct EParams {
    double alpha = -1.0;
    double kappa = 3.14159265358979323846;
    double delta = 1.0 / 0.0;
    double D = 6.0;
    double R0 = 1.0;
    int m = 2;
};

struct EValue {
    double value = 0.0;
    /// Set when the rotation hypothesis fails and the minimum comes from a 32-point theta grid.
    bool theta_min_numeric = false;
    double theta_at_min = 0.0;
};

/// Cone integral (minimized over rotations) minus the annulus integral over B_D \ B_R0.
EValue E(double R, const EParams& p);

/// Integral of |xi|^{alpha-m} over B_D(0) \ B_R0(0).
double annulus_term(const EParams& p);

struct RTilde {
    double r_tilde = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    double tolerance = 0.0;
    bool theta_min_numeric = false;
};

/// Unique zero of E on (0, R0) by bisection; tolerance <= 0 means 1e-6 R0.
RTilde r_tilde(const EParams& p, double tolerance = 0.0);

struct EProfile {
    std::vector<double> R_samples;
    std::vector<double> E_values;
    double r_tilde = 0.0;
    double bracket_lo = 0.0;
    double bracket_hi = 0.0;
    double tolerance = 0.0;
    bool theta_min_numeric = false;
    bool strictly_decreasing = false;
};

/// E sampled at R_j = j R_max / samples, R_max = min(1.5 R0, 0.999 D), plus the zero.
EProfile e_profile(const EParams& p, int samples = 50, double tolerance = 0.0);

struct ClosedFormE {
    double E = 0.0;
    double f = 0.0;
    double f_prime = 0.0;
    double f_second = 0.0;
};

/// Closed form for alpha = -1, kappa = pi, delta = inf.
ClosedFormE halfspace_E_closed_form(double R, double D, double R0, int m);

/// Zero of the closed-form f on (0, R0).
double closed_form_root(double D, double R0, int m, double tolerance = 1e-14);

/// -f(0)/f'(0).
double linearized_lower_bound(double D, double R0, int m);

/// R0 / (2 (m-1) int_0^{pi/2} sin^{m-2}).
double lower_bound_r_tilde(double R0, int m);

}  // namespace pc
