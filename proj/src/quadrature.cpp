// tanh_sinh asserts on endpoint rounding; the integrands here are finite at the endpoints.
#define BOOST_DISABLE_ASSERTS
#include "pc/quadrature.hpp"

#include "pc/errors.hpp"
#include "pc/parallel.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

namespace pc {

namespace {

using boost::math::quadrature::gauss_kronrod;
using boost::math::quadrature::gauss;
using boost::math::quadrature::tanh_sinh;

tanh_sinh<double>& tanh_sinh_instance() {
    thread_local tanh_sinh<double> integrator(12);
    return integrator;
}

struct Accumulator {
    double value = 0.0;
    double error = 0.0;
    long long evaluations = 0;
};

/// Integrates f over [a, b], adding the result to acc.
template <class F>
void integrate_segment(F&& f, double a, double b, double tol, Accumulator& acc) {
    if (!(b > a)) return;
    if (b - a < 1e-6) {
        // tanh-sinh abscissae collapse onto the endpoints on tiny segments.
        acc.value += gauss<double, 10>::integrate(f, a, b);
        acc.evaluations += 10;
        return;
    }
    double err = 0.0, l1 = 0.0;
    std::size_t levels = 0;
    long long calls = 0;
    auto counted = [&](double t) {
        ++calls;
        return f(t);
    };
    const double v = tanh_sinh_instance().integrate(counted, a, b, tol, &err, &l1, &levels);
    acc.value += v;
    acc.error += err + 1e-15 * l1;
    acc.evaluations += calls;
}

/// Ray functional: shell differences over the in-body runs beyond the exclusion radius.
struct RayFunctional {
    const Body& body;
    const RadialKernel& kernel;
    const Point& x;
    double eps;
    double shell_eps;

    double operator()(const Point& u) const {
        thread_local std::vector<Interval> runs;
        body.ray_intervals(x, u, runs);
        double s = 0.0;
        for (const auto& r : runs) {
            if (r.t1 <= eps) continue;
            const double lo = r.t0 > eps ? kernel.shell(r.t0) : shell_eps;
            s += kernel.shell(r.t1) - lo;
        }
        return s;
    }
};

/// Complement functional: tail mass over the gaps between runs and beyond the last run.
struct ComplementFunctional {
    const Body& body;
    const RadialKernel& kernel;
    const Point& x;
    double tail0;

    double operator()(const Point& u) const {
        thread_local std::vector<Interval> runs;
        body.ray_intervals(x, u, runs);
        if (runs.empty()) return tail0;
        double s = 0.0;
        if (runs.front().t0 > 0.0) s += tail0 - kernel.tail(runs.front().t0);
        for (std::size_t i = 0; i + 1 < runs.size(); ++i) {
            s += kernel.tail(runs[i].t1) - kernel.tail(runs[i + 1].t0);
        }
        s += kernel.tail(runs.back().t1);
        return s;
    }
};

/// Integral over S^{m-1} of g(u) for the body at hand, splitting the angular domain where the
/// ray structure changes.
template <class G>
Accumulator sphere_integral(const Body& body, const Point& x, G&& g, double tol) {
    Accumulator acc;
    const int m = body.dim();
    const ShapeKind kind = body.kind();
    if (kind == ShapeKind::Ball || kind == ShapeKind::Annulus) {
        Point c;
        std::vector<double> radii;
        if (kind == ShapeKind::Ball) {
            const auto& s = std::get<BallShape>(body.spec().shape);
            c = s.center;
            radii = {s.radius};
        } else {
            const auto& s = std::get<AnnulusShape>(body.spec().shape);
            c = s.center;
            radii = {s.r_in, s.r_out};
        }
        const double L = distance(c, x);
        if (L <= 1e-14 * body.diameter()) {
            acc.value = sphere_measure(m - 1) * g(Point::unit(m, 0));
            acc.evaluations = 1;
            return acc;
        }
        const Point a = (c - x) * (1.0 / L);
        const Point b = orthogonal_unit(a);
        const double weight = sphere_measure(m - 2);
        auto f = [&](double th) {
            const double w = m == 2 ? 1.0 : std::pow(std::sin(th), m - 2);
            return weight * w * g(std::cos(th) * a + std::sin(th) * b);
        };
        std::vector<double> breaks = {0.0, kPi};
        for (double r : radii) {
            if (L > r) breaks.push_back(std::asin(r / L));
        }
        std::sort(breaks.begin(), breaks.end());
        for (std::size_t i = 0; i + 1 < breaks.size(); ++i) integrate_segment(f, breaks[i], breaks[i + 1], tol, acc);
        return acc;
    }
    if (m == 2) {
        auto angles = body.critical_angles(x);
        auto f = [&](double phi) { return g(Point{std::cos(phi), std::sin(phi)}); };
        if (angles.empty()) {
            integrate_segment(f, 0.0, 2.0 * kPi, tol, acc);
            return acc;
        }
        for (std::size_t i = 0; i + 1 < angles.size(); ++i) integrate_segment(f, angles[i], angles[i + 1], tol, acc);
        integrate_segment(f, angles.back(), angles.front() + 2.0 * kPi, tol, acc);
        return acc;
    }
    if (m == 3) {
        // Nested adaptive Gauss-Kronrod in spherical coordinates about e1.
        long long calls = 0;
        double outer_err = 0.0;
        const double inner_tol = std::max(tol, 1e-10);
        auto inner = [&](double th) {
            const double st = std::sin(th), ct = std::cos(th);
            auto h = [&](double ph) {
                ++calls;
                return g(Point{ct, st * std::cos(ph), st * std::sin(ph)});
            };
            double e = 0.0;
            const double v = gauss_kronrod<double, 21>::integrate(h, 0.0, 2.0 * kPi, 12, inner_tol, &e);
            return st * v;
        };
        acc.value = gauss_kronrod<double, 21>::integrate(inner, 0.0, kPi, 12, inner_tol, &outer_err);
        acc.error = outer_err + 1e-12 * std::abs(acc.value);
        acc.evaluations = calls;
        return acc;
    }
    throw Error(ErrorCode::UnsupportedDimension, "polar quadrature for this shape needs m in {2, 3}");
}

bool non_integrable_at(const Body& body, const RadialKernel& kernel, const Point& x, double eps) {
    if (eps > 0.0 || !kernel.singular_at_zero || kernel.integrable_at_zero) return false;
    return body.signed_distance(x) >= -1e-12 * body.diameter();
}

struct GridSpec {
    Point origin;
    double h;
    std::array<int, 3> dims{1, 1, 1};
};

GridSpec make_grid(const Body& body, int resolution) {
    const int m = body.dim();
    GridSpec g;
    const Box b = body.bounding_box();
    g.h = b.longest_edge() / resolution;
    g.origin = b.lo;
    for (int a = 0; a < m; ++a) g.dims[a] = std::max(1, static_cast<int>(std::ceil((b.hi[a] - b.lo[a]) / g.h - 1e-9)));
    return g;
}

/// Midpoint rule over the cells of g. occupancy(c, h) returns the inside fraction of the cell
/// centered at c (voxel bodies) or a negative value to request point membership tests.
template <class Occ>
Accumulator midpoint_rule(const Body& body, const RadialKernel& kernel, const Point& x, double eps,
                          const GridSpec& g, Occ&& occupancy, bool singular_refine) {
    const int m = body.dim();
    const double h = g.h;
    const double hd = 0.5 * h * std::sqrt(double(m));
    const double cellvol = std::pow(h, m);
    const int slabs = m == 3 ? g.dims[2] : g.dims[1];
    std::vector<double> partial(static_cast<std::size_t>(slabs), 0.0);
    std::vector<long long> counts(static_cast<std::size_t>(slabs), 0);
    const bool analytic = body.analytic();

    parallel_for(static_cast<std::size_t>(slabs), [&](std::size_t slab) {
        NeumaierSum sum;
        long long evals = 0;
        Point c(m), s(m);
        const int jn = m == 3 ? g.dims[1] : 1;
        for (int j = 0; j < jn; ++j) {
            for (int i = 0; i < g.dims[0]; ++i) {
                c[0] = g.origin[0] + (i + 0.5) * h;
                if (m == 3) {
                    c[1] = g.origin[1] + (j + 0.5) * h;
                    c[2] = g.origin[2] + (static_cast<int>(slab) + 0.5) * h;
                } else {
                    c[1] = g.origin[1] + (static_cast<int>(slab) + 0.5) * h;
                }
                const double rc = distance(c, x);
                if (eps > 0.0 && rc + hd < eps) continue;
                if (rc - hd > kernel.cutoff) continue;
                double frac = occupancy(c, h);
                int depth = 0;
                if (eps > 0.0 && std::abs(rc - eps) < hd) {
                    depth = 4;
                } else if (eps > 0.0 && rc < 3.0 * eps + hd) {
                    depth = 1;
                } else if (singular_refine && rc < 3.0 * h) {
                    depth = 4;
                }
                if (analytic && depth < 2 && std::abs(body.signed_distance(c)) < hd) depth = 2;
                if (depth == 0) {
                    const double w = frac >= 0.0 ? frac : (body.contains(c) ? 1.0 : 0.0);
                    if (w > 0.0 && rc >= eps && rc > 0.0) {
                        sum.add(w * kernel.k(rc) * cellvol);
                        ++evals;
                    }
                    continue;
                }
                const int n = 1 << depth;
                const double sh = h / n;
                const double subvol = std::pow(sh, m);
                const int nz = m == 3 ? n : 1;
                for (int kk = 0; kk < nz; ++kk) {
                    for (int jj = 0; jj < n; ++jj) {
                        for (int ii = 0; ii < n; ++ii) {
                            s[0] = c[0] - 0.5 * h + (ii + 0.5) * sh;
                            s[1] = c[1] - 0.5 * h + (jj + 0.5) * sh;
                            if (m == 3) s[2] = c[2] - 0.5 * h + (kk + 0.5) * sh;
                            const double r = distance(s, x);
                            if (r < eps || r <= 0.0) continue;
                            const double w = frac >= 0.0 ? frac : (body.contains(s) ? 1.0 : 0.0);
                            if (w > 0.0) {
                                sum.add(w * kernel.k(r) * subvol);
                                ++evals;
                            }
                        }
                    }
                }
            }
        }
        partial[slab] = sum.value();
        counts[slab] = evals;
    });
    Accumulator acc;
    NeumaierSum total;
    for (std::size_t i = 0; i < partial.size(); ++i) {
        total.add(partial[i]);
        acc.evaluations += counts[i];
    }
    acc.value = total.value();
    return acc;
}

Accumulator grid_value(const Body& body, const RadialKernel& kernel, const Point& x, double eps, int level) {
    // level 0 = full resolution, 1 = half resolution.
    const int m = body.dim();
    if (m > 3) throw Error(ErrorCode::UnsupportedDimension, "grid quadrature needs m in {2, 3}");
    double eps_eff = eps;
    double correction = 0.0;
    bool singular_refine = false;
    GridSpec g;
    if (body.kind() == ShapeKind::Voxel) {
        const auto& v = std::get<VoxelShape>(body.spec().shape);
        g.origin = v.origin;
        g.h = v.cell;
        g.dims = v.dims;
        if (level == 1) {
            g.h *= 2.0;
            for (int a = 0; a < m; ++a) g.dims[a] = (g.dims[a] + 1) / 2;
        }
    } else {
        g = make_grid(body, level == 0 ? body.spec().grid_resolution : body.spec().grid_resolution / 2);
    }
    if (eps == 0.0 && kernel.singular_at_zero && kernel.integrable_at_zero) {
        if (body.signed_distance(x) > 2.0 * g.h) {
            eps_eff = g.h;
            correction = sphere_measure(m - 1) * (kernel.shell(g.h) - kernel.shell(0.0));
        } else {
            singular_refine = true;
        }
    }
    Accumulator acc;
    if (body.kind() == ShapeKind::Voxel) {
        const auto& v = std::get<VoxelShape>(body.spec().shape);
        const double fine = v.cell;
        const int per = level == 1 ? 2 : 1;
        auto occ = [&](const Point& c, double h) {
            if (per == 1) return body.contains(c) ? 1.0 : 0.0;
            int in = 0, total = 0;
            Point s(m);
            const int nz = m == 3 ? 2 : 1;
            for (int k = 0; k < nz; ++k) {
                for (int j = 0; j < 2; ++j) {
                    for (int i = 0; i < 2; ++i) {
                        s[0] = c[0] - 0.5 * h + (i + 0.5) * fine;
                        s[1] = c[1] - 0.5 * h + (j + 0.5) * fine;
                        if (m == 3) s[2] = c[2] - 0.5 * h + (k + 0.5) * fine;
                        in += body.contains(s) ? 1 : 0;
                        ++total;
                    }
                }
            }
            return double(in) / total;
        };
        acc = midpoint_rule(body, kernel, x, eps_eff, g, occ, singular_refine);
    } else {
        auto occ = [](const Point&, double) { return -1.0; };
        acc = midpoint_rule(body, kernel, x, eps_eff, g, occ, singular_refine);
    }
    acc.value += correction;
    return acc;
}

}  // namespace

Route resolve_route(const Body& body, Route requested) {
    if (body.kind() == ShapeKind::Voxel) return Route::Grid;
    if (requested == Route::Auto) return Route::Polar;
    return requested;
}

QuadratureResult integrate_kernel_over_body(const Body& body, const RadialKernel& kernel, const Point& x,
                                            double exclusion_radius, const QuadratureOptions& options) {
    if (x.dim() != body.dim() || !x.finite()) {
        throw Error(ErrorCode::InvalidRange, "query point must be finite with the body's dimension");
    }
    if (exclusion_radius < 0.0) throw Error(ErrorCode::NegativeRadius, "exclusion radius must be >= 0");
    if (non_integrable_at(body, kernel, x, exclusion_radius)) {
        throw Error(ErrorCode::SingularKernel, "kernel is not integrable at the query point without exclusion");
    }
    QuadratureResult out;
    if (resolve_route(body, options.route) == Route::Polar) {
        const double shell_eps = exclusion_radius > 0.0 ? kernel.shell(exclusion_radius) : kernel.shell(0.0);
        RayFunctional g{body, kernel, x, exclusion_radius, shell_eps};
        const Accumulator acc = sphere_integral(body, x, g, options.tolerance);
        out.value = acc.value;
        out.estimated_error = acc.error;
        out.evaluations = std::max<long long>(acc.evaluations, 1);
        return out;
    }
    BodySpec spec = body.spec();
    const Body* target = &body;
    Body resized = body;
    if (options.grid_resolution > 0 && options.grid_resolution != spec.grid_resolution && body.analytic()) {
        spec.grid_resolution = options.grid_resolution;
        spec.validate_cone = false;
        resized = Body::build(spec);
        target = &resized;
    }
    const Accumulator fine = grid_value(*target, kernel, x, exclusion_radius, 0);
    const Accumulator coarse = grid_value(*target, kernel, x, exclusion_radius, 1);
    out.value = fine.value;
    out.estimated_error = std::abs(fine.value - coarse.value);
    out.evaluations = std::max<long long>(fine.evaluations + coarse.evaluations, 1);
    return out;
}

QuadratureResult integrate_kernel_over_complement(const Body& body, const RadialKernel& kernel,
                                                  const Point& x, const QuadratureOptions& options) {
    if (!kernel.tail) throw Error(ErrorCode::InvalidRange, "complement integration needs the kernel tail");
    if (!body.analytic()) throw Error(ErrorCode::InvalidShape, "complement integration needs an analytic body");
    ComplementFunctional g{body, kernel, x, kernel.tail(0.0)};
    const Accumulator acc = sphere_integral(body, x, g, options.tolerance);
    QuadratureResult out;
    out.value = acc.value;
    out.estimated_error = acc.error;
    out.evaluations = std::max<long long>(acc.evaluations, 1);
    return out;
}

QuadratureResult monte_carlo_oracle(const Body& body, const RadialKernel& kernel, const Point& x,
                                    double exclusion_radius, std::uint64_t seed, long long samples) {
    if (samples < 10000) throw Error(ErrorCode::InvalidRange, "Monte Carlo oracle needs at least 1e4 samples");
    if (exclusion_radius < 0.0) throw Error(ErrorCode::NegativeRadius, "exclusion radius must be >= 0");
    if (non_integrable_at(body, kernel, x, exclusion_radius)) {
        throw Error(ErrorCode::SingularKernel, "kernel is not integrable at the query point without exclusion");
    }
    const int m = body.dim();
    const Box b = body.bounding_box();
    std::mt19937_64 rng(seed);
    auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    long long accepted = 0;
    double mean = 0.0, m2 = 0.0;
    Point p(m);
    for (long long n = 1; n <= samples; ++n) {
        for (int a = 0; a < m; ++a) p[a] = b.lo[a] + (b.hi[a] - b.lo[a]) * uniform();
        double v = 0.0;
        const double r = distance(p, x);
        if (r >= exclusion_radius && r > 0.0 && body.contains(p)) {
            v = kernel.k(r);
            ++accepted;
        }
        const double d = v - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (v - mean);
    }
    if (static_cast<double>(accepted) < 1e-3 * static_cast<double>(samples)) {
        throw Error(ErrorCode::EmptyRegion, "fewer than 1e-3 of the samples fall in the integration region");
    }
    const double vol = b.volume();
    QuadratureResult out;
    out.value = vol * mean;
    out.estimated_error = vol * std::sqrt(m2 / static_cast<double>(samples - 1) / static_cast<double>(samples));
    out.evaluations = samples;
    return out;
}

}  // namespace pc
