#pragma once

#include "pc/body.hpp"
#include "pc/potentials.hpp"
#include "pc/unfolded.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace pc {

/// Plateau of near-maximizers on a lattice of spacing `resolution` anchored at the bounding-box center.
struct CenterSet {
    std::vector<Point> points;
    /// Potential values at `points` (for Poisson and heat recovered as 1 - complement).
    std::vector<double> values;
    double max_value = 0.0;
    double plateau_tolerance = 0.0;
    KernelSpec potential = Renormalized{-1.0};
    std::string search_region;
    double resolution = 0.0;
    Point argmax;
    double estimated_error = 0.0;
    /// True when the search ranked points by the complement integral instead of the value.
    bool ranked_by_complement = false;
    std::int64_t evaluations = 0;
};

struct CenterOptions {
    /// Finest lattice spacing; 0 picks diam/128 (m = 2), diam/32 (m = 3).
    double resolution = 0.0;
    /// Negative picks 10 x error at the maximizer + half the largest deficit of its axis neighbors.
    double plateau_tolerance = -1.0;
    EvalOptions eval;
    /// Extra admissibility constraint intersected with the default region.
    std::function<bool(const Point&)> constraint;
    std::string constraint_name;
};

double default_resolution(const Body& body);

/// Coarse-to-fine search with lattice factors 16, 4, 1.
CenterSet find_centers(const Body& body, const KernelSpec& kernel, const CenterOptions& options = {});

/// Single-level search over every admissible lattice point.
CenterSet find_centers_exhaustive(const Body& body, const KernelSpec& kernel, const CenterOptions& options = {});

/// Lattice argmax of the distance to the complement, as a one-point set.
CenterSet incenter_reference(const Body& body, double resolution = 0.0);

double hausdorff_distance(const std::vector<Point>& a, const std::vector<Point>& b);

/// Point on the ray from `from` along `direction` whose signed distance equals `depth`.
Point plant_point_at_depth(const Body& body, const Point& from, const Point& direction, double depth);

struct ContainmentEntry {
    Point point;
    double signed_distance = 0.0;
    /// max_i (x.v_i - l_i); at most one cell for membership.
    double uf_excess = 0.0;
    bool in_uf = false;
    bool in_inner_parallel = false;
};

struct ContainmentReport {
    std::vector<ContainmentEntry> entries;
    double r_tilde = 0.0;
    double b = 1.0;
    /// R~ for renormalized kernels, b R~ otherwise.
    double radius = 0.0;
    double uf_slack = 0.0;
    bool pass = false;
};

ContainmentReport containment_report(const Body& body, const CenterSet& centers, const UnfoldedRegion& uf, double b,
                                     double r_tilde);

/// R~ from the body's cone, diameter and inradius.
double body_r_tilde(const Body& body, double alpha);

enum class ParametricFamily { Poisson, Heat };
const char* to_string(ParametricFamily f);
KernelSpec family_kernel(ParametricFamily f, double parameter);

struct ConvergenceRecord {
    double parameter = 0.0;
    CenterSet center_set;
    double hausdorff_to_reference = 0.0;
};

std::vector<ConvergenceRecord> convergence_experiment(const Body& body, ParametricFamily family,
                                                      const std::vector<double>& parameters,
                                                      const CenterSet& reference, const CenterOptions& options = {});

struct ConcavityOptions {
    int trials = 200;
    std::uint64_t seed = 1;
    /// d(Omega, Omega'); 0 picks a quarter of the inradius.
    double inner_distance = 0.0;
    /// Optional further restriction of Omega' to an unfolded region.
    const UnfoldedRegion* uf = nullptr;
    EvalOptions eval;
    /// Spacing of the plateau search used for the single-cluster check; 0 picks diam/64.
    double cluster_resolution = 0.0;
};

struct ConcavityReport {
    int trials = 0;
    int violations = 0;
    double max_violation = 0.0;
    double inner_distance = 0.0;
    /// k(r) r^{m-1} non-increasing on [inner_distance, diam].
    bool monotone_precondition = false;
    std::string precondition_detail;
    /// Poisson only: h <= sqrt((m-1)/2) d.
    std::optional<bool> poisson_height_bound;
    int cluster_count = 0;
    bool single_cluster = false;
    std::uint64_t seed = 0;
};

/// Seeded midpoint-concavity test on Omega' = {dist >= d}. Throws PreconditionFailed for non-convex bodies.
ConcavityReport concavity_probe(const Body& body, const KernelSpec& kernel, const ConcavityOptions& options = {});

struct GapOptions {
    int samples = 64;
    std::uint64_t seed = 7;
    /// 0 computes R~ of Y with alpha = -1 (Poisson); required for the heat family.
    double r_tilde = 0.0;
    EvalOptions eval;
};

struct GapReport {
    int x_samples = 0;
    int interior_band_samples = 0;
    int exterior_samples = 0;
    double r_tilde = 0.0;
    double band = 0.0;
    double min_x_value = 0.0;
    double max_y_value = 0.0;
    /// min over pairs of K_X(x) - K_Y(y), taken from complements when available.
    double margin = 0.0;
    bool holds = false;
};

/// Compares deep points of X (dist >= R0) against points within b R~ of the complement of Y.
GapReport small_parameter_gap_check(const Body& X, const Body& Y, double R0, double b, const KernelSpec& kernel,
                                    const GapOptions& options = {});

}  // namespace pc
