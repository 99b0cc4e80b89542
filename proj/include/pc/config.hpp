#pragma once

#include "pc/body.hpp"
#include "pc/potentials.hpp"

#include "json.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pc {

struct BodyConfig {
    BodySpec spec;
    /// Voxel bodies are read from this file instead of `spec`.
    std::string voxel_path;
};

struct ConeboundConfig {
    double alpha = -1.0;
    double kappa = kPi;
    double delta = kInf;
    double D = 6.0;
    double R0 = 1.0;
    int m = 2;
    /// Take kappa, delta, D = diam and R0 = inradius from the body (alpha from the kernel).
    bool from_body = false;
    int samples = 50;
    double tolerance = 0.0;
    /// When set, also sweep the rotation angle at this R.
    std::optional<double> rotation_R;
    int theta_samples = 16;
};

struct ConvergeConfig {
    std::string family = "poisson";
    std::vector<double> parameters;
    /// "renormalized" (alpha = -1) or "incenter".
    std::string reference = "renormalized";
};

struct ContainConfig {
    double b = 0.9;
    double r_tilde = 0.0;
    bool planted = true;
};

struct ConcavityConfig {
    int trials = 200;
    double inner_distance = 0.0;
    double cluster_resolution = 0.0;
};

struct SummabilityConfig {
    std::string family = "poisson";
    int m = 2;
    double probe_radius = 1.0;
    std::vector<double> parameters;
};

struct GapConfig {
    std::optional<BodyConfig> X;
    double R0 = 0.9;
    double b = 0.5;
    int samples = 64;
    double r_tilde = 0.0;
};

struct ExperimentConfig {
    std::string experiment = "centers";
    BodyConfig body;
    KernelSpec kernel = Renormalized{-1.0};
    double resolution = 0.0;
    double plateau_tolerance = -1.0;
    bool exhaustive = false;
    QuadratureOptions quadrature;
    double epsilon_fraction = 0.5;
    std::uint64_t seed = 1;
    std::vector<Point> points;
    int uf_directions = 0;
    ConeboundConfig conebound;
    ConvergeConfig converge;
    ContainConfig contain;
    ConcavityConfig concavity;
    SummabilityConfig summability;
    GapConfig gap;
};

const std::vector<std::string>& experiment_names();

/// Throws ConfigError on malformed input; module preconditions are checked when the experiment runs.
ExperimentConfig parse_config(const nlohmann::json& j);

/// Reads a config file. A previous JSON output is accepted too (its embedded "config" is used).
ExperimentConfig load_config(const std::string& path);

/// Fully resolved config with every default filled in.
nlohmann::json to_json(const ExperimentConfig& c);

nlohmann::json body_to_json(const BodyConfig& b);
BodyConfig parse_body(const nlohmann::json& j);
nlohmann::json kernel_to_json(const KernelSpec& k);
KernelSpec parse_kernel(const nlohmann::json& j);

Body build_body(const BodyConfig& b);

}  // namespace pc
