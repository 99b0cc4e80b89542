#pragma once

#include "pc/body.hpp"
#include "pc/quadrature.hpp"

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace pc {

struct Riesz {
    double alpha;
};
/// Hadamard finite part of the divergent r^{alpha-m} potential, alpha <= 0.
struct Renormalized {
    double alpha;
};
/// Poisson integral of the upper half-space at height h.
struct Poisson {
    double h;
};
struct Heat {
    double t;
};
/// User kernel k(r). "constant" is c, "power" is c r^p; any other function needs a numeric shell.
struct Custom {
    std::string form = "constant";
    double c = 1.0;
    double p = 0.0;
    double beta = 1.0;
    std::function<double(double)> k;
};

using KernelSpec = std::variant<Riesz, Renormalized, Poisson, Heat, Custom>;

std::string kernel_name(const KernelSpec& kernel);
/// Throws AlphaOutOfRange, NonpositiveHeight or NonpositiveTime on invalid parameters.
void validate_kernel(const KernelSpec& kernel, int m);

/// The radial kernel whose body integral is the potential (Poisson and heat normalized).
RadialKernel radial_kernel(const KernelSpec& kernel, int m);

enum class LocationClass { Interior, Exterior };
const char* to_string(LocationClass c);

struct PotentialValue {
    double value = 0.0;
    double renormalization_epsilon = 0.0;
    LocationClass location_class = LocationClass::Interior;
    double estimated_error = 0.0;
    /// 1 - value computed directly from the complement (normalized kernels, when requested).
    std::optional<double> complement;
};

struct EvalOptions {
    QuadratureOptions quadrature;
    /// Renormalization radius as a fraction of dist(x, complement).
    double epsilon_fraction = 0.5;
    bool with_complement = false;
};

/// Distance from the boundary below which the renormalized potential refuses to evaluate.
double boundary_tolerance(const Body& body, const QuadratureOptions& options = {});

PotentialValue riesz_potential(const Body& body, double alpha, const Point& x, const EvalOptions& o = {});
PotentialValue renormalized_potential(const Body& body, double alpha, const Point& x, const EvalOptions& o = {});
/// h int (|x - xi|^2 + h^2)^{-(m+1)/2} d xi.
PotentialValue solid_angle(const Body& body, const Point& x, double h, const EvalOptions& o = {});
PotentialValue poisson_integral(const Body& body, const Point& x, double h, const EvalOptions& o = {});
PotentialValue heat_potential(const Body& body, const Point& x, double t, const EvalOptions& o = {});
PotentialValue custom_potential(const Body& body, const Custom& kernel, const Point& x, const EvalOptions& o = {});

PotentialValue evaluate(const Body& body, const KernelSpec& kernel, const Point& x, const EvalOptions& o = {});

/// One-parameter kernel family k(r, t) on R^m for the summability checks.
struct KernelFamily {
    std::string name;
    int dim = 2;
    std::function<double(double, double)> k;
    /// Radial mass int_0^r k(s, t) s^{m-1} ds; may return inf.
    std::function<double(double, double)> shell;
    std::function<double(double)> psi;
    std::optional<double> alpha;
    double beta = 1.0;
};

KernelFamily poisson_family(int m);
KernelFamily heat_family(int m);
KernelFamily constant_family(int m, double c = 1.0);

enum class Verdict { Pass, Fail, NotApplicable };
const char* to_string(Verdict v);

struct ConditionResult {
    Verdict verdict = Verdict::Fail;
    std::string detail;
};

struct SummabilityRow {
    double parameter;
    double total_mass;
    double outside_mass;
};

struct SummabilityReport {
    std::string family;
    double probe_radius = 1.0;
    ConditionResult decreasing;   // condition (1)
    ConditionResult pointwise;    // condition (2)
    ConditionResult unit_mass;    // condition (3)
    ConditionResult concentration;// condition (4)
    std::vector<SummabilityRow> rows;
    bool all_pass() const;
};

struct SummabilityOptions {
    double mass_tolerance = 1e-6;
    double outside_tolerance = 1e-3;
    double pointwise_tolerance = 1e-3;
};

SummabilityReport check_summability(const KernelFamily& family, double probe_radius,
                                    const std::vector<double>& parameters, const SummabilityOptions& o = {});

}  // namespace pc
