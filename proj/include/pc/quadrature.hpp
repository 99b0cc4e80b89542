#pragma once

#include "pc/body.hpp"

#include <cstdint>
#include <functional>

namespace pc {

struct QuadratureResult {
    double value = 0.0;
    double estimated_error = 0.0;
    long long evaluations = 0;
};

/// Radial kernel k(r) on R^m together with its shell antiderivative G(r) = int^r k(s) s^{m-1} ds,
/// which the polar route integrates along rays.
struct RadialKernel {
    std::function<double(double)> k;
    std::function<double(double)> shell;
    /// Optional int_r^inf k(s) s^{m-1} ds, used to integrate over the complement without cancellation.
    std::function<double(double)> tail;
    bool singular_at_zero = false;
    bool integrable_at_zero = true;
    /// Radius beyond which the grid route may drop cells.
    double cutoff = kInf;
};

enum class Route {
    Auto,   ///< polar rays for analytic bodies, grid for voxels
    Polar,  ///< exact ray intervals plus adaptive angular quadrature
    Grid,   ///< midpoint rule on the body grid with local subdivision
};

struct QuadratureOptions {
    Route route = Route::Auto;
    double tolerance = 1e-12;
    /// Cells along the longest bounding-box edge for the grid route; 0 uses the body's setting.
    int grid_resolution = 0;
};

Route resolve_route(const Body& body, Route requested);

/// int over body minus B_eps(x) of k(|x - xi|) d xi.
QuadratureResult integrate_kernel_over_body(const Body& body, const RadialKernel& kernel, const Point& x,
                                            double exclusion_radius, const QuadratureOptions& options = {});

/// int over the complement of the body of k(|x - xi|) d xi (polar route; needs kernel.tail).
QuadratureResult integrate_kernel_over_complement(const Body& body, const RadialKernel& kernel,
                                                  const Point& x, const QuadratureOptions& options = {});

/// Hit-or-miss estimate from uniform samples of the bounding box; deterministic for a seed.
QuadratureResult monte_carlo_oracle(const Body& body, const RadialKernel& kernel, const Point& x,
                                    double exclusion_radius, std::uint64_t seed, long long samples);

/// Compensated (Neumaier) running sum.
class NeumaierSum {
public:
    void add(double v) noexcept {
        const double t = sum_ + v;
        if (std::abs(sum_) >= std::abs(v)) {
            c_ += (sum_ - t) + v;
        } else {
            c_ += (v - t) + sum_;
        }
        sum_ = t;
    }
    double value() const noexcept { return sum_ + c_; }

private:
    double sum_ = 0.0;
    double c_ = 0.0;
};

}  // namespace pc
