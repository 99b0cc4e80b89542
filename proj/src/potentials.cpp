#include "pc/potentials.hpp"

#include "pc/errors.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pc {

namespace {

std::string num(double v) {
    std::ostringstream os;
    os.precision(6);
    os << v;
    return os.str();
}

/// int_0^b cos^n v dv.
double cos_power_integral(int n, double b) {
    double even = b;
    double odd = std::sin(b);
    if (n == 0) return even;
    if (n == 1) return odd;
    const double s = std::sin(b), c = std::cos(b);
    double result = (n % 2 == 0) ? even : odd;
    for (int k = (n % 2 == 0) ? 2 : 3; k <= n; k += 2) {
        result = std::pow(c, k - 1) * s / k + (k - 1.0) / k * result;
    }
    return result;
}

RadialKernel power_kernel(double c, double p, int m) {
    // c r^p with shell c r^{p+m}/(p+m), or c log r when p = -m.
    RadialKernel k;
    k.k = [c, p](double r) { return c * std::pow(r, p); };
    const double q = p + m;
    if (q == 0.0) {
        k.shell = [c](double r) { return c * std::log(r); };
    } else {
        k.shell = [c, q](double r) { return c * std::pow(r, q) / q; };
    }
    k.singular_at_zero = p < 0.0;
    k.integrable_at_zero = q > 0.0;
    return k;
}

RadialKernel solid_angle_kernel(double h, int m, double scale) {
    RadialKernel k;
    k.k = [h, m, scale](double r) { return scale * h * std::pow(r * r + h * h, -0.5 * (m + 1)); };
    k.shell = [h, m, scale](double r) {
        if (!std::isfinite(r)) return scale * cos_power_integral(m - 1, 0.5 * kPi);
        return scale * sin_power_integral(m - 1, 0.0, std::atan2(r, h));
    };
    k.tail = [h, m, scale](double r) {
        if (!std::isfinite(r)) return 0.0;
        return scale * cos_power_integral(m - 1, std::atan2(h, r));
    };
    return k;
}

RadialKernel heat_kernel(double t, int m) {
    RadialKernel k;
    const double norm = std::pow(4.0 * kPi * t, -0.5 * m);
    const double sigma = sphere_measure(m - 1);
    k.k = [norm, t](double r) { return norm * std::exp(-r * r / (4.0 * t)); };
    k.shell = [t, m, sigma](double r) {
        if (!std::isfinite(r)) return 1.0 / sigma;
        return boost::math::gamma_p(0.5 * m, r * r / (4.0 * t)) / sigma;
    };
    k.tail = [t, m, sigma](double r) {
        if (!std::isfinite(r)) return 0.0;
        return boost::math::gamma_q(0.5 * m, r * r / (4.0 * t)) / sigma;
    };
    // exp(-36) relative tail beyond this radius.
    k.cutoff = 12.0 * std::sqrt(t);
    return k;
}

RadialKernel custom_kernel(const Custom& c, int m) {
    if (c.k) {
        RadialKernel k;
        auto fn = c.k;
        k.k = fn;
        k.shell = [fn, m](double r) {
            if (r <= 0.0) return 0.0;
            thread_local boost::math::quadrature::tanh_sinh<double> ts(10);
            return ts.integrate([&](double s) { return fn(s) * std::pow(s, m - 1); }, 0.0, r, 1e-12);
        };
        k.singular_at_zero = !std::isfinite(fn(0.0));
        k.integrable_at_zero = true;
        return k;
    }
    if (c.form == "constant") return power_kernel(c.c, 0.0, m);
    if (c.form == "power") return power_kernel(c.c, c.p, m);
    throw Error(ErrorCode::ConfigError, "Custom.form must be 'constant' or 'power', got '" + c.form + "'");
}

PotentialValue from_quadrature(const QuadratureResult& q, LocationClass loc) {
    PotentialValue v;
    v.value = q.value;
    v.estimated_error = q.estimated_error;
    v.location_class = loc;
    return v;
}

LocationClass classify(const Body& body, const Point& x) {
    return body.signed_distance(x) > 0.0 ? LocationClass::Interior : LocationClass::Exterior;
}

}  // namespace

std::string kernel_name(const KernelSpec& kernel) {
    return std::visit(
        [](const auto& k) -> std::string {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, Riesz>) return "riesz";
            if constexpr (std::is_same_v<T, Renormalized>) return "renormalized";
            if constexpr (std::is_same_v<T, Poisson>) return "poisson";
            if constexpr (std::is_same_v<T, Heat>) return "heat";
            return "custom";
        },
        kernel);
}

void validate_kernel(const KernelSpec& kernel, int m) {
    std::visit(
        [m](const auto& k) {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, Riesz>) {
                if (!(k.alpha > 0.0 && k.alpha < m)) {
                    throw Error(ErrorCode::AlphaOutOfRange,
                                "Riesz.alpha must lie in (0, m) = (0, " + std::to_string(m) + "), got " + num(k.alpha));
                }
            } else if constexpr (std::is_same_v<T, Renormalized>) {
                if (!(k.alpha <= 0.0) || !std::isfinite(k.alpha)) {
                    throw Error(ErrorCode::AlphaOutOfRange, "Renormalized.alpha must be <= 0, got " + num(k.alpha));
                }
            } else if constexpr (std::is_same_v<T, Poisson>) {
                if (!(k.h > 0.0) || !std::isfinite(k.h)) {
                    throw Error(ErrorCode::NonpositiveHeight, "Poisson.h must be positive, got " + num(k.h));
                }
            } else if constexpr (std::is_same_v<T, Heat>) {
                if (!(k.t > 0.0) || !std::isfinite(k.t)) {
                    throw Error(ErrorCode::NonpositiveTime, "Heat.t must be positive, got " + num(k.t));
                }
            }
        },
        kernel);
}

RadialKernel radial_kernel(const KernelSpec& kernel, int m) {
    validate_kernel(kernel, m);
    return std::visit(
        [m](const auto& k) -> RadialKernel {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, Riesz> || std::is_same_v<T, Renormalized>) {
                return power_kernel(1.0, k.alpha - m, m);
            } else if constexpr (std::is_same_v<T, Poisson>) {
                return solid_angle_kernel(k.h, m, 2.0 / sphere_measure(m));
            } else if constexpr (std::is_same_v<T, Heat>) {
                return heat_kernel(k.t, m);
            } else {
                return custom_kernel(k, m);
            }
        },
        kernel);
}

const char* to_string(LocationClass c) { return c == LocationClass::Interior ? "interior" : "exterior"; }

double boundary_tolerance(const Body& body, const QuadratureOptions& options) {
    if (resolve_route(body, options.route) == Route::Grid) {
        double cell = body.cell_size();
        if (options.grid_resolution > 0 && body.analytic()) {
            cell = body.bounding_box().longest_edge() / options.grid_resolution;
        }
        return 1.5 * cell * std::sqrt(double(body.dim()));
    }
    return 1e-9 * body.diameter();
}

PotentialValue riesz_potential(const Body& body, double alpha, const Point& x, const EvalOptions& o) {
    const RadialKernel k = radial_kernel(Riesz{alpha}, body.dim());
    return from_quadrature(integrate_kernel_over_body(body, k, x, 0.0, o.quadrature), classify(body, x));
}

PotentialValue renormalized_potential(const Body& body, double alpha, const Point& x, const EvalOptions& o) {
    const int m = body.dim();
    const RadialKernel k = radial_kernel(Renormalized{alpha}, m);
    const double sd = body.signed_distance(x);
    const double tol = boundary_tolerance(body, o.quadrature);
    if (std::abs(sd) < tol) {
        std::ostringstream os;
        os << "query point is within " << num(tol) << " of the boundary (signed distance " << num(sd) << ")";
        throw Error(ErrorCode::BoundaryPoint, os.str());
    }
    if (sd < 0.0) {
        return from_quadrature(integrate_kernel_over_body(body, k, x, 0.0, o.quadrature), LocationClass::Exterior);
    }
    if (!(o.epsilon_fraction > 0.0 && o.epsilon_fraction < 1.0)) {
        throw Error(ErrorCode::InvalidRange, "epsilon_fraction must lie in (0, 1)");
    }
    const double eps = o.epsilon_fraction * sd;
    const QuadratureResult q = integrate_kernel_over_body(body, k, x, eps, o.quadrature);
    const double sigma = sphere_measure(m - 1);
    PotentialValue v = from_quadrature(q, LocationClass::Interior);
    v.renormalization_epsilon = eps;
    if (alpha == 0.0) {
        v.value = q.value - sigma * std::log(1.0 / eps);
    } else {
        v.value = q.value - sigma * std::pow(eps, alpha) / (-alpha);
    }
    return v;
}

PotentialValue solid_angle(const Body& body, const Point& x, double h, const EvalOptions& o) {
    validate_kernel(Poisson{h}, body.dim());
    const RadialKernel k = solid_angle_kernel(h, body.dim(), 1.0);
    PotentialValue v = from_quadrature(integrate_kernel_over_body(body, k, x, 0.0, o.quadrature), classify(body, x));
    if (o.with_complement && body.analytic()) {
        v.complement = integrate_kernel_over_complement(body, k, x, o.quadrature).value;
    }
    return v;
}

PotentialValue poisson_integral(const Body& body, const Point& x, double h, const EvalOptions& o) {
    validate_kernel(Poisson{h}, body.dim());
    const RadialKernel k = radial_kernel(Poisson{h}, body.dim());
    PotentialValue v = from_quadrature(integrate_kernel_over_body(body, k, x, 0.0, o.quadrature), classify(body, x));
    if (o.with_complement && body.analytic()) {
        v.complement = integrate_kernel_over_complement(body, k, x, o.quadrature).value;
    }
    return v;
}

PotentialValue heat_potential(const Body& body, const Point& x, double t, const EvalOptions& o) {
    const RadialKernel k = radial_kernel(Heat{t}, body.dim());
    PotentialValue v = from_quadrature(integrate_kernel_over_body(body, k, x, 0.0, o.quadrature), classify(body, x));
    if (o.with_complement && body.analytic()) {
        v.complement = integrate_kernel_over_complement(body, k, x, o.quadrature).value;
    }
    return v;
}

PotentialValue custom_potential(const Body& body, const Custom& c, const Point& x, const EvalOptions& o) {
    const RadialKernel k = radial_kernel(c, body.dim());
    return from_quadrature(integrate_kernel_over_body(body, k, x, 0.0, o.quadrature), classify(body, x));
}

PotentialValue evaluate(const Body& body, const KernelSpec& kernel, const Point& x, const EvalOptions& o) {
    return std::visit(
        [&](const auto& k) -> PotentialValue {
            using T = std::decay_t<decltype(k)>;
            if constexpr (std::is_same_v<T, Riesz>) return riesz_potential(body, k.alpha, x, o);
            if constexpr (std::is_same_v<T, Renormalized>) return renormalized_potential(body, k.alpha, x, o);
            if constexpr (std::is_same_v<T, Poisson>) return poisson_integral(body, x, k.h, o);
            if constexpr (std::is_same_v<T, Heat>) return heat_potential(body, x, k.t, o);
            if constexpr (std::is_same_v<T, Custom>) return custom_potential(body, k, x, o);
        },
        kernel);
}

KernelFamily poisson_family(int m) {
    KernelFamily f;
    f.name = "poisson";
    f.dim = m;
    const double c = 2.0 / sphere_measure(m);
    f.k = [c, m](double r, double h) { return c * h * std::pow(r * r + h * h, -0.5 * (m + 1)); };
    f.shell = [c, m](double r, double h) {
        if (!std::isfinite(r)) return c * cos_power_integral(m - 1, 0.5 * kPi);
        return c * sin_power_integral(m - 1, 0.0, std::atan2(r, h));
    };
    f.psi = [c](double h) { return c * h; };
    f.alpha = -1.0;
    f.beta = m + 1.0;
    return f;
}

KernelFamily heat_family(int m) {
    KernelFamily f;
    f.name = "heat";
    f.dim = m;
    const double sigma = sphere_measure(m - 1);
    f.k = [m](double r, double t) { return std::pow(4.0 * kPi * t, -0.5 * m) * std::exp(-r * r / (4.0 * t)); };
    f.shell = [m, sigma](double r, double t) {
        if (!std::isfinite(r)) return 1.0 / sigma;
        return boost::math::gamma_p(0.5 * m, r * r / (4.0 * t)) / sigma;
    };
    f.psi = [m](double t) { return std::pow(4.0 * kPi * t, -0.5 * m); };
    f.beta = m + 1.0;
    return f;
}

KernelFamily constant_family(int m, double c) {
    KernelFamily f;
    f.name = "constant";
    f.dim = m;
    f.k = [c](double, double) { return c; };
    f.shell = [c, m](double r, double) { return c * std::pow(r, m) / m; };
    f.beta = m + 1.0;
    return f;
}

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::Pass: return "pass";
        case Verdict::Fail: return "fail";
        case Verdict::NotApplicable: return "not_applicable";
    }
    return "fail";
}

bool SummabilityReport::all_pass() const {
    auto ok = [](const ConditionResult& c) { return c.verdict == Verdict::Pass; };
    return ok(decreasing) && ok(pointwise) && ok(unit_mass) && ok(concentration);
}

SummabilityReport check_summability(const KernelFamily& family, double probe_radius,
                                    const std::vector<double>& parameters, const SummabilityOptions& o) {
    if (parameters.empty()) throw Error(ErrorCode::InvalidRange, "parameter sequence must be nonempty");
    for (std::size_t i = 0; i < parameters.size(); ++i) {
        if (!(parameters[i] > 0.0)) throw Error(ErrorCode::InvalidRange, "parameters must be positive");
        if (i > 0 && !(parameters[i] < parameters[i - 1])) {
            throw Error(ErrorCode::NonDecreasingParameters, "parameters must be strictly decreasing");
        }
    }
    if (!(probe_radius > 0.0)) throw Error(ErrorCode::NegativeRadius, "probe radius must be positive");
    const int m = family.dim;
    const double sigma = sphere_measure(m - 1);
    SummabilityReport rep;
    rep.family = family.name;
    rep.probe_radius = probe_radius;

    // (3) unit mass and (4) concentration.
    bool mass_ok = true, outside_monotone = true;
    double worst_mass = 0.0;
    for (double t : parameters) {
        const double total = sigma * family.shell(kInf, t);
        const double inside = sigma * family.shell(probe_radius, t);
        const double outside = std::isfinite(total) ? total - inside : kInf;
        if (!rep.rows.empty() && !(outside <= rep.rows.back().outside_mass)) outside_monotone = false;
        rep.rows.push_back({t, total, outside});
        const double dev = std::abs(total - 1.0);
        worst_mass = std::max(worst_mass, std::isfinite(dev) ? dev : kInf);
        if (!(dev <= o.mass_tolerance)) mass_ok = false;
    }
    rep.unit_mass.verdict = mass_ok ? Verdict::Pass : Verdict::Fail;
    rep.unit_mass.detail = "max |mass - 1| = " + num(worst_mass);
    const double last_out = rep.rows.back().outside_mass;
    rep.concentration.verdict =
        (outside_monotone && last_out < o.outside_tolerance) ? Verdict::Pass : Verdict::Fail;
    rep.concentration.detail = "outside mass at smallest parameter = " + num(last_out) +
                               (outside_monotone ? "" : " (not monotone)");

    // (1) strict decrease in r, plus the small-r growth bound.
    bool decreasing = true;
    bool growth_ok = true;
    for (double t : parameters) {
        double prev = kInf;
        for (int i = 0; i <= 64; ++i) {
            const double r = probe_radius * std::pow(10.0, -3.0 + 4.0 * i / 64.0);
            const double v = family.k(r, t);
            if (!(v < prev)) decreasing = false;
            prev = v;
        }
        auto scaled = [&](double r) {
            const double v = family.k(r, t);
            if (family.beta < m) return v * std::pow(r, m - family.beta);
            if (family.beta == m) return v / std::abs(std::log(r));
            return v;
        };
        // Bounded growth: the scaled kernel has settled by the smallest probed scales.
        const double ref = std::max(scaled(1e-6 * probe_radius), 1e-300);
        for (int j = 7; j <= 8; ++j) {
            const double g = scaled(std::pow(10.0, -j) * probe_radius);
            if (!std::isfinite(g) || g > 10.0 * ref) growth_ok = false;
        }
    }
    rep.decreasing.verdict = decreasing && growth_ok ? Verdict::Pass : Verdict::Fail;
    rep.decreasing.detail = std::string(decreasing ? "strictly decreasing" : "not strictly decreasing") +
                            (growth_ok ? "; growth bound holds" : "; growth bound violated");

    // (2) k / psi -> r^{alpha - m}.
    if (!family.psi || !family.alpha) {
        rep.pointwise.verdict = Verdict::NotApplicable;
        rep.pointwise.detail = "no (psi, alpha) pair assigned to this family";
    } else {
        const double a = *family.alpha;
        double last = 0.0;
        bool monotone = true;
        double prev = kInf;
        for (double t : parameters) {
            double worst = 0.0;
            for (double f : {0.5, 1.0, 2.0}) {
                const double r = f * probe_radius;
                const double target = std::pow(r, a - m);
                worst = std::max(worst, std::abs(family.k(r, t) / family.psi(t) - target) / target);
            }
            if (worst > prev * (1.0 + 1e-12)) monotone = false;
            prev = worst;
            last = worst;
        }
        rep.pointwise.verdict = (monotone && last < o.pointwise_tolerance) ? Verdict::Pass : Verdict::Fail;
        rep.pointwise.detail = "relative deviation from r^(alpha-m) at smallest parameter = " + num(last);
    }
    return rep;
}

}  // namespace pc
