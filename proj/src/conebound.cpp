#include "pc/conebound.hpp"

#include "pc/errors.hpp"
#include "pc/geometry.hpp"
#include "pc/parallel.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pc {

namespace {

using boost::math::quadrature::gauss_kronrod;

std::string num(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

void validate(const ConeIntegralParams& p) {
    if (p.m < 2 || p.m > kMaxDim) throw Error(ErrorCode::UnsupportedDimension, "m must lie in [2, 8]");
    if (!(p.alpha <= 0.0)) throw Error(ErrorCode::InvalidRange, "alpha must be <= 0, got " + num(p.alpha));
    if (!(p.kappa > 0.0 && p.kappa <= kPi)) {
        throw Error(ErrorCode::InvalidRange, "kappa must lie in (0, pi], got " + num(p.kappa));
    }
    if (!(p.delta > 0.0)) throw Error(ErrorCode::InvalidRange, "delta must be positive");
    if (!(p.R > 0.0 && p.D > 0.0 && p.R < p.D)) throw Error(ErrorCode::InvalidRange, "need 0 < R < D");
    const double tmax = 0.5 * (kPi - p.kappa);
    if (!(p.theta >= 0.0 && p.theta <= tmax + 1e-12)) {
        throw Error(ErrorCode::InvalidRange, "theta must lie in [0, (pi - kappa)/2], got " + num(p.theta));
    }
    if (p.theta > 0.0 && p.m > 3) {
        throw Error(ErrorCode::UnsupportedDimension, "rotated cone integrals are implemented for m in {2, 3}");
    }
}

/// int_0^{min(delta, rho_D(c))} (rho^2 + R^2 + 2 rho R c)^{(alpha-m)/2} rho^{m-1} d rho.
double radial(const ConeIntegralParams& p, double c) {
    const double rho_d = -p.R * c + std::sqrt(std::max(0.0, p.D * p.D - p.R * p.R * (1.0 - c * c)));
    const double top = std::min(p.delta, rho_d);
    if (!(top > 0.0)) return 0.0;
    const double e = 0.5 * (p.alpha - p.m);
    auto f = [&](double rho) {
        return std::pow(rho * rho + p.R * p.R + 2.0 * rho * p.R * c, e) * std::pow(rho, p.m - 1);
    };
    return gauss_kronrod<double, 31>::integrate(f, 0.0, top, 10, 1e-13);
}

/// Cosine at which rho_D equals delta, or nan when delta is infinite.
double critical_cosine(const ConeIntegralParams& p) {
    if (!std::isfinite(p.delta)) return std::nan("");
    return (p.D * p.D - p.R * p.R - p.delta * p.delta) / (2.0 * p.R * p.delta);
}

template <class F>
double integrate_with_breaks(F&& f, std::vector<double> breaks, double tol) {
    std::sort(breaks.begin(), breaks.end());
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        if (breaks[i + 1] > breaks[i]) s += gauss_kronrod<double, 31>::integrate(f, breaks[i], breaks[i + 1], 10, tol);
    }
    return s;
}

}  // namespace

double cone_ball_integral(const ConeIntegralParams& p) {
    validate(p);
    const double half = 0.5 * p.kappa;
    const double cstar = critical_cosine(p);
    if (p.theta == 0.0 || p.m > 3) {
        auto f = [&](double a) {
            const double w = p.m == 2 ? 1.0 : std::pow(std::sin(a), p.m - 2);
            return w * radial(p, std::cos(a));
        };
        std::vector<double> br = {0.0, half};
        if (std::isfinite(cstar) && cstar > std::cos(half) && cstar < 1.0) br.push_back(std::acos(cstar));
        return sphere_measure(p.m - 2) * integrate_with_breaks(f, br, 1e-12);
    }
    if (p.m == 2) {
        auto f = [&](double phi) { return radial(p, std::cos(phi + p.theta)); };
        std::vector<double> br = {-half, half};
        if (std::isfinite(cstar) && std::abs(cstar) < 1.0) {
            for (double s : {std::acos(cstar) - p.theta, -std::acos(cstar) - p.theta}) {
                if (s > -half && s < half) br.push_back(s);
            }
        }
        return integrate_with_breaks(f, br, 1e-12);
    }
    // m = 3: polar angle a about the rotated axis and azimuth b.
    const double ct = std::cos(p.theta), st = std::sin(p.theta);
    auto outer = [&](double a) {
        const double ca = std::cos(a), sa = std::sin(a);
        auto inner = [&](double b) { return radial(p, ct * ca - st * sa * std::sin(b)); };
        std::vector<double> br = {0.0, 2.0 * kPi};
        if (std::isfinite(cstar) && sa > 0.0) {
            const double s = (ct * ca - cstar) / (st * sa);
            if (std::abs(s) < 1.0) {
                double b1 = std::asin(s), b2 = kPi - std::asin(s);
                if (b1 < 0.0) b1 += 2.0 * kPi;
                br.push_back(b1);
                br.push_back(b2);
            }
        }
        return sa * integrate_with_breaks(inner, br, 1e-11);
    };
    return gauss_kronrod<double, 31>::integrate(outer, 0.0, half, 10, 1e-11);
}

bool rotation_hypothesis_holds(double delta, double R, double D) {
    return delta <= D - R || delta >= std::sqrt(D * D - R * R);
}

RotationReport verify_rotation_minimality(const ConeIntegralParams& params, int theta_samples) {
    if (params.m != 2 && params.m != 3) {
        throw Error(ErrorCode::UnsupportedDimension, "rotation sweeps are implemented for m in {2, 3}");
    }
    if (theta_samples < 2) throw Error(ErrorCode::InvalidRange, "theta_samples must be at least 2");
    if (!rotation_hypothesis_holds(params.delta, params.R, params.D)) {
        throw Error(ErrorCode::HypothesisViolated,
                    "delta = " + num(params.delta) + " lies strictly between D - R = " + num(params.D - params.R) +
                        " and sqrt(D^2 - R^2) = " + num(std::sqrt(params.D * params.D - params.R * params.R)));
    }
    RotationReport rep;
    const double tmax = 0.5 * (kPi - params.kappa);
    rep.thetas.resize(static_cast<std::size_t>(theta_samples));
    rep.values.resize(rep.thetas.size());
    for (int j = 0; j < theta_samples; ++j) rep.thetas[static_cast<std::size_t>(j)] = tmax * j / (theta_samples - 1);
    parallel_for(rep.thetas.size(), [&](std::size_t j) {
        ConeIntegralParams q = params;
        q.theta = rep.thetas[j];
        rep.values[j] = cone_ball_integral(q);
    });
    rep.value_at_zero = rep.values.front();
    rep.min_value = *std::min_element(rep.values.begin(), rep.values.end());
    rep.tolerance = 1e-9 * std::abs(rep.value_at_zero) + 1e-12;
    rep.minimal_at_zero = rep.value_at_zero <= rep.min_value + rep.tolerance;
    return rep;
}

double annulus_term(const EParams& p) {
    const double sigma = sphere_measure(p.m - 1);
    if (p.alpha == 0.0) return sigma * std::log(p.D / p.R0);
    return sigma * (std::pow(p.D, p.alpha) - std::pow(p.R0, p.alpha)) / p.alpha;
}

EValue E(double R, const EParams& p) {
    if (!(R > 0.0 && R < p.D)) throw Error(ErrorCode::InvalidRange, "E needs 0 < R < D, got R = " + num(R));
    if (!(p.R0 > 0.0 && p.R0 <= p.D)) throw Error(ErrorCode::InvalidRange, "E needs 0 < R0 <= D");
    ConeIntegralParams c{p.alpha, p.kappa, p.delta, 0.0, R, p.D, p.m};
    EValue out;
    const double tmax = 0.5 * (kPi - p.kappa);
    double cone = 0.0;
    if (rotation_hypothesis_holds(p.delta, R, p.D) || tmax <= 0.0) {
        cone = cone_ball_integral(c);
    } else {
        if (p.m > 3) {
            throw Error(ErrorCode::UnsupportedDimension, "the rotation minimum outside the proven range needs m in {2, 3}");
        }
        out.theta_min_numeric = true;
        cone = kInf;
        for (int j = 0; j < 32; ++j) {
            c.theta = tmax * j / 31.0;
            const double v = cone_ball_integral(c);
            if (v < cone) {
                cone = v;
                out.theta_at_min = c.theta;
            }
        }
    }
    out.value = cone - annulus_term(p);
    return out;
}

RTilde r_tilde(const EParams& p, double tolerance) {
    if (!(p.R0 > 0.0 && p.R0 <= p.D)) throw Error(ErrorCode::InvalidRange, "r_tilde needs 0 < R0 <= D");
    RTilde out;
    out.tolerance = tolerance > 0.0 ? tolerance : 1e-6 * p.R0;
    const double hi_start = std::min(p.R0, std::nextafter(p.D, 0.0));
    EValue ehi = E(hi_start, p);
    out.theta_min_numeric = ehi.theta_min_numeric;
    if (!(ehi.value <= 0.0)) {
        throw Error(ErrorCode::BracketingFailed, "E(R0) = " + num(ehi.value) + " is not negative");
    }
    double lo = 0.5 * p.R0;
    double hi = hi_start;
    while (true) {
        const EValue e = E(lo, p);
        out.theta_min_numeric = out.theta_min_numeric || e.theta_min_numeric;
        if (e.value > 0.0) break;
        hi = lo;
        lo *= 0.5;
        if (lo < 1e-6 * p.R0) {
            throw Error(ErrorCode::BracketingFailed, "E stays nonpositive down to R = 1e-6 R0");
        }
    }
    while (hi - lo > out.tolerance) {
        const double mid = 0.5 * (lo + hi);
        const EValue e = E(mid, p);
        out.theta_min_numeric = out.theta_min_numeric || e.theta_min_numeric;
        if (e.value > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    out.lo = lo;
    out.hi = hi;
    out.r_tilde = 0.5 * (lo + hi);
    return out;
}

EProfile e_profile(const EParams& p, int samples, double tolerance) {
    if (samples < 2) throw Error(ErrorCode::InvalidRange, "need at least 2 samples");
    EProfile prof;
    const double rmax = std::min(1.5 * p.R0, 0.999 * p.D);
    prof.R_samples.resize(static_cast<std::size_t>(samples));
    prof.E_values.resize(prof.R_samples.size());
    std::vector<char> flags(prof.R_samples.size(), 0);
    for (int j = 0; j < samples; ++j) prof.R_samples[static_cast<std::size_t>(j)] = rmax * (j + 1) / samples;
    parallel_for(prof.R_samples.size(), [&](std::size_t j) {
        const EValue e = E(prof.R_samples[j], p);
        prof.E_values[j] = e.value;
        flags[j] = e.theta_min_numeric;
    });
    prof.strictly_decreasing = true;
    for (std::size_t j = 1; j < prof.E_values.size(); ++j) {
        if (!(prof.E_values[j] < prof.E_values[j - 1])) prof.strictly_decreasing = false;
    }
    const RTilde rt = r_tilde(p, tolerance);
    prof.r_tilde = rt.r_tilde;
    prof.bracket_lo = rt.lo;
    prof.bracket_hi = rt.hi;
    prof.tolerance = rt.tolerance;
    prof.theta_min_numeric = rt.theta_min_numeric || std::any_of(flags.begin(), flags.end(), [](char c) { return c; });
    return prof;
}

ClosedFormE halfspace_E_closed_form(double R, double D, double R0, int m) {
    if (m < 2 || m > kMaxDim) throw Error(ErrorCode::UnsupportedDimension, "m must lie in [2, 8]");
    if (!(R > 0.0 && R < D)) throw Error(ErrorCode::InvalidRange, "closed form needs 0 < R < D");
    if (!(R0 > 0.0 && R0 <= D)) throw Error(ErrorCode::InvalidRange, "closed form needs 0 < R0 <= D");
    const double phi = std::acos(R / D);
    const double tail = sin_power_integral(m - 2, phi, kPi);
    const double full = sin_power_integral(m - 2, 0.0, kPi);
    ClosedFormE out;
    out.f = std::pow(std::sin(phi), m - 1) / (m - 1) + (R / D) * tail - (R / R0) * full;
    out.f_prime = tail / D - full / R0;
    out.f_second = std::pow(std::sin(phi), m - 2) / (D * std::sqrt(D * D - R * R));
    out.E = sphere_measure(m - 2) * out.f / R;
    return out;
}

double closed_form_root(double D, double R0, int m, double tolerance) {
    double lo = 1e-12 * R0, hi = std::min(R0, std::nextafter(D, 0.0));
    if (!(halfspace_E_closed_form(hi, D, R0, m).f < 0.0)) {
        throw Error(ErrorCode::BracketingFailed, "closed-form f(R0) is not negative");
    }
    while (hi - lo > tolerance * R0) {
        const double mid = 0.5 * (lo + hi);
        if (halfspace_E_closed_form(mid, D, R0, m).f > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double linearized_lower_bound(double D, double R0, int m) {
    const double f0 = 1.0 / (m - 1);
    const double fp0 = sin_power_integral(m - 2, 0.5 * kPi, kPi) / D - sin_power_integral(m - 2, 0.0, kPi) / R0;
    return -f0 / fp0;
}

double lower_bound_r_tilde(double R0, int m) {
    if (m < 2) throw Error(ErrorCode::UnsupportedDimension, "m must be at least 2");
    return R0 / (2.0 * (m - 1) * sin_power_integral(m - 2, 0.0, 0.5 * kPi));
}

}  // namespace pc
