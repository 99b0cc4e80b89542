#include "pc/config.hpp"

#include "pc/errors.hpp"

#include <cmath>
#include <fstream>
#include <set>

namespace pc {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& msg) { throw Error(ErrorCode::ConfigError, msg); }

void allow_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
    if (!j.is_object()) fail(where + " must be an object");
    std::set<std::string> ok(keys.begin(), keys.end());
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!ok.count(it.key())) fail("unknown key '" + it.key() + "' in " + where);
    }
}

/// Numbers, or the strings "inf" / "-inf".
double as_number(const json& v, const std::string& where) {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
        const auto s = v.get<std::string>();
        if (s == "inf" || s == "infinity") return kInf;
        if (s == "-inf") return -kInf;
    }
    fail(where + " must be a number");
}

double num_or(const json& j, const char* key, double fallback, const std::string& where) {
    return j.contains(key) ? as_number(j[key], where + "." + key) : fallback;
}

int int_or(const json& j, const char* key, int fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number_integer()) fail(where + "." + key + " must be an integer");
    return j[key].get<int>();
}

bool bool_or(const json& j, const char* key, bool fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_boolean()) fail(where + "." + key + " must be a boolean");
    return j[key].get<bool>();
}

std::string str_or(const json& j, const char* key, const std::string& fallback, const std::string& where) {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_string()) fail(where + "." + key + " must be a string");
    return j[key].get<std::string>();
}

Point as_point(const json& v, const std::string& where) {
    if (!v.is_array() || v.empty() || v.size() > kMaxDim) fail(where + " must be a coordinate array");
    std::vector<double> c;
    for (const auto& e : v) c.push_back(as_number(e, where));
    return Point(std::span<const double>(c));
}

std::vector<double> numbers(const json& j, const char* key, const std::string& where) {
    std::vector<double> out;
    if (!j.contains(key)) return out;
    if (!j[key].is_array()) fail(where + "." + key + " must be an array");
    for (const auto& e : j[key]) out.push_back(as_number(e, where + "." + key));
    return out;
}

json jnum(double v) {
    if (std::isinf(v)) return v > 0 ? json("inf") : json("-inf");
    return v;
}

json jpoint(const Point& p) {
    json a = json::array();
    for (int i = 0; i < p.dim(); ++i) a.push_back(p[i]);
    return a;
}

json jnumbers(const std::vector<double>& v) {
    json a = json::array();
    for (double x : v) a.push_back(jnum(x));
    return a;
}

}  // namespace

const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names = {"eval",     "centers",   "unfolded",    "conebound", "converge",
                                                   "contain",  "concavity", "summability", "gap"};
    return names;
}

BodyConfig parse_body(const json& j) {
    const std::string w = "body";
    allow_keys(j, w, {"dim", "shape", "center", "radius", "r_in", "r_out", "epsilon", "vertices", "path", "cone",
                      "grid_resolution", "validate_cone"});
    BodyConfig b;
    BodySpec& s = b.spec;
    s.dim = int_or(j, "dim", 2, w);
    s.grid_resolution = int_or(j, "grid_resolution", 512, w);
    s.validate_cone = bool_or(j, "validate_cone", true, w);
    const std::string shape = str_or(j, "shape", "ball", w);
    auto center = [&]() { return j.contains("center") ? as_point(j["center"], w + ".center") : Point::zero(s.dim); };
    if (shape == "ball") {
        s.shape = BallShape{center(), num_or(j, "radius", 1.0, w)};
    } else if (shape == "annulus") {
        s.shape = AnnulusShape{center(), num_or(j, "r_in", 1.0, w), num_or(j, "r_out", 3.0, w)};
    } else if (shape == "dumbbell") {
        s.shape = DumbbellShape{num_or(j, "epsilon", 0.2, w)};
    } else if (shape == "polygon") {
        if (!j.contains("vertices") || !j["vertices"].is_array()) fail("body.vertices must be an array of points");
        PolygonShape p;
        for (const auto& v : j["vertices"]) p.vertices.push_back(as_point(v, "body.vertices"));
        s.shape = p;
    } else if (shape == "voxel") {
        b.voxel_path = str_or(j, "path", "", w);
        if (b.voxel_path.empty()) fail("body.path is required for voxel bodies");
        s.shape = VoxelShape{};
    } else {
        fail("body.shape must be one of ball, annulus, dumbbell, polygon, voxel; got '" + shape + "'");
    }
    if (j.contains("cone") && !j["cone"].is_null()) {
        allow_keys(j["cone"], "body.cone", {"kappa", "delta"});
        s.cone = ConeSpec{num_or(j["cone"], "kappa", kPi, "ConeSpec"), num_or(j["cone"], "delta", kInf, "ConeSpec")};
    }
    return b;
}

json body_to_json(const BodyConfig& b) {
    const BodySpec& s = b.spec;
    json j;
    j["dim"] = s.dim;
    std::visit(
        [&](const auto& sh) {
            using T = std::decay_t<decltype(sh)>;
            if constexpr (std::is_same_v<T, BallShape>) {
                j["shape"] = "ball";
                j["center"] = jpoint(sh.center);
                j["radius"] = sh.radius;
            } else if constexpr (std::is_same_v<T, AnnulusShape>) {
                j["shape"] = "annulus";
                j["center"] = jpoint(sh.center);
                j["r_in"] = sh.r_in;
                j["r_out"] = sh.r_out;
            } else if constexpr (std::is_same_v<T, DumbbellShape>) {
                j["shape"] = "dumbbell";
                j["epsilon"] = sh.epsilon;
            } else if constexpr (std::is_same_v<T, PolygonShape>) {
                j["shape"] = "polygon";
                j["vertices"] = json::array();
                for (const auto& v : sh.vertices) j["vertices"].push_back(jpoint(v));
            } else {
                j["shape"] = "voxel";
                j["path"] = b.voxel_path;
            }
        },
        s.shape);
    if (s.cone) {
        j["cone"] = {{"kappa", s.cone->kappa}, {"delta", jnum(s.cone->delta)}};
    } else {
        j["cone"] = nullptr;
    }
    j["grid_resolution"] = s.grid_resolution;
    j["validate_cone"] = s.validate_cone;
    return j;
}

KernelSpec parse_kernel(const json& j) {
    const std::string w = "kernel";
    allow_keys(j, w, {"type", "alpha", "h", "t", "form", "c", "p", "beta"});
    const std::string type = str_or(j, "type", "renormalized", w);
    if (type == "renormalized") return Renormalized{num_or(j, "alpha", -1.0, "Renormalized")};
    if (type == "riesz") return Riesz{num_or(j, "alpha", 1.0, "Riesz")};
    if (type == "poisson") return Poisson{num_or(j, "h", 0.1, "Poisson")};
    if (type == "heat") return Heat{num_or(j, "t", 0.01, "Heat")};
    if (type == "custom") {
        Custom c;
        c.form = str_or(j, "form", "constant", w);
        c.c = num_or(j, "c", 1.0, "Custom");
        c.p = num_or(j, "p", 0.0, "Custom");
        c.beta = num_or(j, "beta", 1.0, "Custom");
        if (c.form != "constant" && c.form != "power") fail("Custom.form must be 'constant' or 'power'");
        return c;
    }
    fail("kernel.type must be one of renormalized, riesz, poisson, heat, custom; got '" + type + "'");
}

json kernel_to_json(const KernelSpec& k) {
    return std::visit(
        [](const auto& v) -> json {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Renormalized>) return {{"type", "renormalized"}, {"alpha", v.alpha}};
            if constexpr (std::is_same_v<T, Riesz>) return {{"type", "riesz"}, {"alpha", v.alpha}};
            if constexpr (std::is_same_v<T, Poisson>) return {{"type", "poisson"}, {"h", v.h}};
            if constexpr (std::is_same_v<T, Heat>) return {{"type", "heat"}, {"t", v.t}};
            if constexpr (std::is_same_v<T, Custom>) {
                return {{"type", "custom"}, {"form", v.form}, {"c", v.c}, {"p", v.p}, {"beta", v.beta}};
            }
        },
        k);
}

ExperimentConfig parse_config(const json& j) {
    allow_keys(j, "config",
               {"experiment", "body", "kernel", "resolution", "plateau_tolerance", "exhaustive", "quadrature",
                "epsilon_fraction", "seed", "points", "uf_directions", "conebound", "converge", "contain",
                "concavity", "summability", "gap"});
    ExperimentConfig c;
    c.experiment = str_or(j, "experiment", "centers", "config");
    bool known = false;
    for (const auto& n : experiment_names()) known = known || n == c.experiment;
    if (!known) fail("experiment '" + c.experiment + "' is not recognized");
    c.body = parse_body(j.contains("body") ? j["body"] : json::object());
    if (j.contains("kernel")) c.kernel = parse_kernel(j["kernel"]);
    c.resolution = num_or(j, "resolution", 0.0, "config");
    c.plateau_tolerance = num_or(j, "plateau_tolerance", -1.0, "config");
    c.exhaustive = bool_or(j, "exhaustive", false, "config");
    c.epsilon_fraction = num_or(j, "epsilon_fraction", 0.5, "config");
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) fail("config.seed must be a nonnegative integer");
        c.seed = j["seed"].get<std::uint64_t>();
    }
    c.uf_directions = int_or(j, "uf_directions", 0, "config");
    if (j.contains("quadrature")) {
        const json& q = j["quadrature"];
        allow_keys(q, "quadrature", {"route", "tolerance", "grid_resolution"});
        const std::string r = str_or(q, "route", "auto", "quadrature");
        if (r == "auto") {
            c.quadrature.route = Route::Auto;
        } else if (r == "polar") {
            c.quadrature.route = Route::Polar;
        } else if (r == "grid") {
            c.quadrature.route = Route::Grid;
        } else {
            fail("quadrature.route must be auto, polar or grid");
        }
        c.quadrature.tolerance = num_or(q, "tolerance", c.quadrature.tolerance, "quadrature");
        c.quadrature.grid_resolution = int_or(q, "grid_resolution", 0, "quadrature");
    }
    if (j.contains("points")) {
        if (!j["points"].is_array()) fail("config.points must be an array of points");
        for (const auto& p : j["points"]) c.points.push_back(as_point(p, "config.points"));
    }
    if (j.contains("conebound")) {
        const json& s = j["conebound"];
        const std::string w = "conebound";
        allow_keys(s, w, {"alpha", "kappa", "delta", "D", "R0", "m", "from_body", "samples", "tolerance",
                          "rotation_R", "theta_samples"});
        auto& cb = c.conebound;
        cb.alpha = num_or(s, "alpha", cb.alpha, w);
        cb.kappa = num_or(s, "kappa", cb.kappa, w);
        cb.delta = num_or(s, "delta", cb.delta, w);
        cb.D = num_or(s, "D", cb.D, w);
        cb.R0 = num_or(s, "R0", cb.R0, w);
        cb.m = int_or(s, "m", cb.m, w);
        cb.from_body = bool_or(s, "from_body", false, w);
        cb.samples = int_or(s, "samples", cb.samples, w);
        cb.tolerance = num_or(s, "tolerance", 0.0, w);
        if (s.contains("rotation_R") && !s["rotation_R"].is_null()) cb.rotation_R = as_number(s["rotation_R"], w);
        cb.theta_samples = int_or(s, "theta_samples", cb.theta_samples, w);
    }
    if (j.contains("converge")) {
        const json& s = j["converge"];
        allow_keys(s, "converge", {"family", "parameters", "reference"});
        c.converge.family = str_or(s, "family", "poisson", "converge");
        c.converge.parameters = numbers(s, "parameters", "converge");
        c.converge.reference = str_or(s, "reference", "renormalized", "converge");
    }
    if (j.contains("contain")) {
        const json& s = j["contain"];
        allow_keys(s, "contain", {"b", "r_tilde", "planted"});
        c.contain.b = num_or(s, "b", c.contain.b, "contain");
        c.contain.r_tilde = num_or(s, "r_tilde", 0.0, "contain");
        c.contain.planted = bool_or(s, "planted", true, "contain");
    }
    if (j.contains("concavity")) {
        const json& s = j["concavity"];
        allow_keys(s, "concavity", {"trials", "inner_distance", "cluster_resolution"});
        c.concavity.trials = int_or(s, "trials", 200, "concavity");
        c.concavity.inner_distance = num_or(s, "inner_distance", 0.0, "concavity");
        c.concavity.cluster_resolution = num_or(s, "cluster_resolution", 0.0, "concavity");
    }
    if (j.contains("summability")) {
        const json& s = j["summability"];
        allow_keys(s, "summability", {"family", "m", "probe_radius", "parameters"});
        c.summability.family = str_or(s, "family", "poisson", "summability");
        c.summability.m = int_or(s, "m", 2, "summability");
        c.summability.probe_radius = num_or(s, "probe_radius", 1.0, "summability");
        c.summability.parameters = numbers(s, "parameters", "summability");
    }
    if (j.contains("gap")) {
        const json& s = j["gap"];
        allow_keys(s, "gap", {"X", "R0", "b", "samples", "r_tilde"});
        if (s.contains("X") && !s["X"].is_null()) c.gap.X = parse_body(s["X"]);
        c.gap.R0 = num_or(s, "R0", c.gap.R0, "gap");
        c.gap.b = num_or(s, "b", c.gap.b, "gap");
        c.gap.samples = int_or(s, "samples", c.gap.samples, "gap");
        c.gap.r_tilde = num_or(s, "r_tilde", 0.0, "gap");
    }
    if (c.uf_directions == 0) c.uf_directions = c.body.spec.dim == 2 ? 256 : 200;
    if (c.converge.parameters.empty()) {
        const double start = c.converge.family == "heat" ? 0.1 : 1.0;
        for (int k = 0; k <= 6; ++k) c.converge.parameters.push_back(std::ldexp(start, -k));
    }
    if (c.summability.parameters.empty()) c.summability.parameters = {1.0, 0.1, 0.01, 0.001};
    return c;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error(ErrorCode::IoError, "cannot open config " + path);
    json j;
    try {
        j = json::parse(f);
    } catch (const json::parse_error& e) {
        fail("cannot parse " + path + ": " + e.what());
    }
    if (j.is_object() && j.contains("config") && j.contains("result")) j = j["config"];
    return parse_config(j);
}

json to_json(const ExperimentConfig& c) {
    json j;
    j["experiment"] = c.experiment;
    j["body"] = body_to_json(c.body);
    j["kernel"] = kernel_to_json(c.kernel);
    j["resolution"] = c.resolution;
    j["plateau_tolerance"] = c.plateau_tolerance;
    j["exhaustive"] = c.exhaustive;
    const char* route = c.quadrature.route == Route::Polar ? "polar" : c.quadrature.route == Route::Grid ? "grid" : "auto";
    j["quadrature"] = {{"route", route}, {"tolerance", c.quadrature.tolerance},
                       {"grid_resolution", c.quadrature.grid_resolution}};
    j["epsilon_fraction"] = c.epsilon_fraction;
    j["seed"] = c.seed;
    j["points"] = json::array();
    for (const auto& p : c.points) j["points"].push_back(jpoint(p));
    j["uf_directions"] = c.uf_directions;
    const auto& cb = c.conebound;
    j["conebound"] = {{"alpha", cb.alpha},     {"kappa", cb.kappa},         {"delta", jnum(cb.delta)},
                      {"D", cb.D},             {"R0", cb.R0},               {"m", cb.m},
                      {"from_body", cb.from_body}, {"samples", cb.samples}, {"tolerance", cb.tolerance},
                      {"rotation_R", cb.rotation_R ? json(*cb.rotation_R) : json(nullptr)},
                      {"theta_samples", cb.theta_samples}};
    j["converge"] = {{"family", c.converge.family},
                     {"parameters", jnumbers(c.converge.parameters)},
                     {"reference", c.converge.reference}};
    j["contain"] = {{"b", c.contain.b}, {"r_tilde", c.contain.r_tilde}, {"planted", c.contain.planted}};
    j["concavity"] = {{"trials", c.concavity.trials},
                      {"inner_distance", c.concavity.inner_distance},
                      {"cluster_resolution", c.concavity.cluster_resolution}};
    j["summability"] = {{"family", c.summability.family},
                        {"m", c.summability.m},
                        {"probe_radius", c.summability.probe_radius},
                        {"parameters", jnumbers(c.summability.parameters)}};
    j["gap"] = {{"X", c.gap.X ? body_to_json(*c.gap.X) : json(nullptr)},
                {"R0", c.gap.R0},
                {"b", c.gap.b},
                {"samples", c.gap.samples},
                {"r_tilde", c.gap.r_tilde}};
    return j;
}

Body build_body(const BodyConfig& b) {
    if (std::holds_alternative<VoxelShape>(b.spec.shape)) return read_voxels(b.voxel_path, b.spec.cone);
    return Body::build(b.spec);
}

}  // namespace pc
