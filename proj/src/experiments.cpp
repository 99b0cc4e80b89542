#include "pc/experiments.hpp"

#include "pc/centers.hpp"
#include "pc/conebound.hpp"
#include "pc/errors.hpp"
#include "pc/format.hpp"
#include "pc/svg.hpp"
#include "pc/unfolded.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

namespace pc {

using nlohmann::json;

namespace {

json jnum(double v) {
    if (std::isfinite(v)) return v;
    return v > 0 ? json("inf") : v < 0 ? json("-inf") : json("nan");
}

json jpoint(const Point& p) {
    json a = json::array();
    for (int i = 0; i < p.dim(); ++i) a.push_back(p[i]);
    return a;
}

std::string coord_header(int m) {
    std::string s;
    for (int i = 0; i < m; ++i) s += "x" + std::to_string(i + 1) + ",";
    return s;
}

std::string coords(const Point& p) {
    std::string s;
    for (int i = 0; i < p.dim(); ++i) s += fmt17(p[i]) + ",";
    return s;
}

EvalOptions eval_options(const ExperimentConfig& c) {
    EvalOptions o;
    o.quadrature = c.quadrature;
    o.epsilon_fraction = c.epsilon_fraction;
    return o;
}

CenterOptions center_options(const ExperimentConfig& c) {
    CenterOptions o;
    o.resolution = c.resolution;
    o.plateau_tolerance = c.plateau_tolerance;
    o.eval = eval_options(c);
    return o;
}

json center_json(const CenterSet& cs) {
    json pts = json::array();
    for (const auto& p : cs.points) pts.push_back(jpoint(p));
    return {{"count", cs.points.size()},
            {"max_value", jnum(cs.max_value)},
            {"plateau_tolerance", cs.plateau_tolerance},
            {"resolution", cs.resolution},
            {"search_region", cs.search_region},
            {"argmax", jpoint(cs.argmax)},
            {"estimated_error", cs.estimated_error},
            {"ranked_by_complement", cs.ranked_by_complement},
            {"evaluations", cs.evaluations},
            {"points", pts}};
}

std::string centers_csv(const CenterSet& cs, int m) {
    std::ostringstream os;
    os << coord_header(m) << "value\n";
    for (std::size_t i = 0; i < cs.points.size(); ++i) os << coords(cs.points[i]) << fmt17(cs.values[i]) << "\n";
    return os.str();
}

SvgScene base_scene(const Body& body, const UnfoldedRegion* uf) {
    SvgScene s;
    s.outlines = body.outlines();
    if (uf) {
        Box clip = body.bounding_box();
        s.uf = uf_polygon(*uf, clip);
    }
    return s;
}

double kernel_alpha_for_bound(const KernelSpec& k) {
    if (const auto* r = std::get_if<Renormalized>(&k)) return r->alpha;
    if (std::holds_alternative<Poisson>(k)) return -1.0;
    throw Error(ErrorCode::ConfigError, "this kernel has no alpha for the R~ bound; set contain.r_tilde");
}

ParametricFamily parse_family(const std::string& name) {
    if (name == "poisson") return ParametricFamily::Poisson;
    if (name == "heat") return ParametricFamily::Heat;
    throw Error(ErrorCode::ConfigError, "converge.family must be poisson or heat, got '" + name + "'");
}

struct Output {
    json result;
    std::string csv;
    std::optional<SvgScene> scene;
};

Output run_eval(const ExperimentConfig& c, bool) {
    const Body body = build_body(c.body);
    const int m = body.dim();
    std::vector<Point> pts = c.points;
    if (pts.empty()) pts.push_back(body.centroid());
    EvalOptions o = eval_options(c);
    o.with_complement = true;
    Output out;
    std::ostringstream os;
    os << coord_header(m) << "value,estimated_error,location_class,renormalization_epsilon,complement\n";
    json rows = json::array();
    for (const auto& p : pts) {
        if (p.dim() != m) throw Error(ErrorCode::ConfigError, "config.points must have the body dimension");
        const PotentialValue v = evaluate(body, c.kernel, p, o);
        os << coords(p) << fmt17(v.value) << "," << fmt17(v.estimated_error) << "," << to_string(v.location_class) << ","
           << fmt17(v.renormalization_epsilon) << "," << (v.complement ? fmt17(*v.complement) : std::string()) << "\n";
        rows.push_back({{"point", jpoint(p)},
                        {"value", jnum(v.value)},
                        {"estimated_error", v.estimated_error},
                        {"location_class", to_string(v.location_class)},
                        {"renormalization_epsilon", v.renormalization_epsilon},
                        {"complement", v.complement ? json(*v.complement) : json(nullptr)}});
    }
    out.result = {{"kernel", kernel_name(c.kernel)}, {"values", rows}};
    out.csv = os.str();
    return out;
}

Output run_centers(const ExperimentConfig& c, bool svg) {
    const Body body = build_body(c.body);
    const CenterOptions co = center_options(c);
    const CenterSet cs = c.exhaustive ? find_centers_exhaustive(body, c.kernel, co) : find_centers(body, c.kernel, co);
    Output out;
    out.result = center_json(cs);
    out.result["kernel"] = kernel_name(c.kernel);
    out.result["method"] = c.exhaustive ? "exhaustive" : "coarse-to-fine";
    out.csv = centers_csv(cs, body.dim());
    if (svg && body.dim() == 2) {
        const UnfoldedRegion uf = unfolded_region(body, c.uf_directions);
        out.scene = base_scene(body, &uf);
        out.scene->center_sets.push_back(cs.points);
    }
    return out;
}

Output run_unfolded(const ExperimentConfig& c, bool svg) {
    const Body body = build_body(c.body);
    const UnfoldedRegion uf = unfolded_region(body, c.uf_directions);
    Output out;
    out.csv = uf_csv(uf);
    out.result = {{"direction_count", uf.direction_count}, {"margin", uf.margin}};
    if (body.dim() == 2) {
        json poly = json::array();
        for (const auto& p : uf_polygon(uf, body.bounding_box())) poly.push_back(jpoint(p));
        out.result["polygon"] = poly;
        if (svg) out.scene = base_scene(body, &uf);
    }
    return out;
}

Output run_conebound(const ExperimentConfig& c, bool) {
    const auto& cb = c.conebound;
    EParams p{cb.alpha, cb.kappa, cb.delta, cb.D, cb.R0, cb.m};
    if (cb.from_body) {
        const Body body = build_body(c.body);
        const ConeSpec cone = body.cone();
        p = {kernel_alpha_for_bound(c.kernel), cone.kappa, cone.delta, body.diameter(), body.inradius(), body.dim()};
    }
    validate_cone_spec(ConeSpec{p.kappa, p.delta});
    const EProfile prof = e_profile(p, cb.samples, cb.tolerance);
    Output out;
    std::ostringstream os;
    os << "R,E\n";
    for (std::size_t i = 0; i < prof.R_samples.size(); ++i) os << fmt17(prof.R_samples[i]) << "," << fmt17(prof.E_values[i]) << "\n";
    out.csv = os.str();
    out.result = {{"alpha", p.alpha},
                  {"kappa", p.kappa},
                  {"delta", jnum(p.delta)},
                  {"D", p.D},
                  {"R0", p.R0},
                  {"m", p.m},
                  {"r_tilde", prof.r_tilde},
                  {"bracket", {prof.bracket_lo, prof.bracket_hi}},
                  {"tolerance", prof.tolerance},
                  {"strictly_decreasing", prof.strictly_decreasing},
                  {"theta_min_numeric", prof.theta_min_numeric},
                  {"lower_bound", lower_bound_r_tilde(p.R0, p.m)}};
    if (p.alpha == -1.0 && p.kappa == kPi && std::isinf(p.delta)) {
        out.result["closed_form_root"] = closed_form_root(p.D, p.R0, p.m);
        out.result["linearized_lower_bound"] = linearized_lower_bound(p.D, p.R0, p.m);
    }
    if (cb.rotation_R) {
        const RotationReport rep =
            verify_rotation_minimality({p.alpha, p.kappa, p.delta, 0.0, *cb.rotation_R, p.D, p.m}, cb.theta_samples);
        json vals = json::array();
        for (std::size_t i = 0; i < rep.thetas.size(); ++i) vals.push_back({rep.thetas[i], rep.values[i]});
        out.result["rotation"] = {{"R", *cb.rotation_R},
                                  {"minimal_at_zero", rep.minimal_at_zero},
                                  {"value_at_zero", rep.value_at_zero},
                                  {"min_value", rep.min_value},
                                  {"tolerance", rep.tolerance},
                                  {"theta_value", vals}};
    }
    return out;
}

Output run_converge(const ExperimentConfig& c, bool svg) {
    const Body body = build_body(c.body);
    const ParametricFamily fam = parse_family(c.converge.family);
    const CenterOptions co = center_options(c);
    CenterSet ref;
    if (c.converge.reference == "renormalized") {
        ref = find_centers(body, Renormalized{-1.0}, co);
    } else if (c.converge.reference == "incenter") {
        ref = incenter_reference(body, c.resolution);
    } else {
        throw Error(ErrorCode::ConfigError, "converge.reference must be renormalized or incenter");
    }
    const auto recs = convergence_experiment(body, fam, c.converge.parameters, ref, co);
    Output out;
    std::ostringstream os;
    os << "parameter,hausdorff,count," << coord_header(body.dim()) << "max_value\n";
    json rows = json::array();
    for (const auto& r : recs) {
        os << fmt17(r.parameter) << "," << fmt17(r.hausdorff_to_reference) << "," << r.center_set.points.size() << ","
           << coords(r.center_set.argmax) << fmt17(r.center_set.max_value) << "\n";
        rows.push_back({{"parameter", r.parameter},
                        {"hausdorff_to_reference", r.hausdorff_to_reference},
                        {"center_set", center_json(r.center_set)}});
    }
    out.csv = os.str();
    out.result = {{"family", to_string(fam)}, {"reference", center_json(ref)}, {"records", rows}};
    if (svg && body.dim() == 2) {
        out.scene = base_scene(body, nullptr);
        out.scene->center_sets.push_back(ref.points);
        out.scene->center_sets.push_back(recs.back().center_set.points);
    }
    return out;
}

Output run_contain(const ExperimentConfig& c, bool svg) {
    const Body body = build_body(c.body);
    const CenterSet cs = find_centers(body, c.kernel, center_options(c));
    const UnfoldedRegion uf = unfolded_region(body, c.uf_directions);
    const double rt = c.contain.r_tilde > 0.0 ? c.contain.r_tilde : body_r_tilde(body, kernel_alpha_for_bound(c.kernel));
    const ContainmentReport rep = containment_report(body, cs, uf, c.contain.b, rt);
    std::vector<Point> planted;
    ContainmentReport control;
    bool controls_fail = true;
    if (c.contain.planted) {
        const double depth = 0.5 * rep.radius;
        if (body.signed_distance(cs.argmax) > depth) {
            planted.push_back(plant_point_at_depth(body, cs.argmax, Point::unit(body.dim(), 0), depth));
            CenterSet fake = cs;
            fake.points = planted;
            control = containment_report(body, fake, uf, c.contain.b, rt);
            controls_fail = !control.pass;
        }
    }
    Output out;
    std::ostringstream os;
    os << coord_header(body.dim()) << "signed_distance,uf_excess,in_uf,in_inner_parallel,planted\n";
    json rows = json::array();
    auto emit = [&](const ContainmentEntry& e, bool fake) {
        os << coords(e.point) << fmt17(e.signed_distance) << "," << fmt17(e.uf_excess) << "," << int(e.in_uf) << ","
           << int(e.in_inner_parallel) << "," << int(fake) << "\n";
        rows.push_back({{"point", jpoint(e.point)},
                        {"signed_distance", e.signed_distance},
                        {"uf_excess", e.uf_excess},
                        {"in_uf", e.in_uf},
                        {"in_inner_parallel", e.in_inner_parallel},
                        {"planted", fake}});
    };
    for (const auto& e : rep.entries) emit(e, false);
    for (const auto& e : control.entries) emit(e, true);
    out.csv = os.str();
    out.result = {{"r_tilde", rt},
                  {"b", rep.b},
                  {"radius", rep.radius},
                  {"uf_slack", rep.uf_slack},
                  {"centers_pass", rep.pass},
                  {"controls_fail", controls_fail},
                  {"pass", rep.pass && controls_fail},
                  {"entries", rows},
                  {"centers", center_json(cs)}};
    if (svg && body.dim() == 2) {
        out.scene = base_scene(body, &uf);
        out.scene->center_sets.push_back(cs.points);
        out.scene->controls = planted;
    }
    return out;
}

Output run_concavity(const ExperimentConfig& c, bool) {
    const Body body = build_body(c.body);
    ConcavityOptions o;
    o.trials = c.concavity.trials;
    o.seed = c.seed;
    o.inner_distance = c.concavity.inner_distance;
    o.cluster_resolution = c.concavity.cluster_resolution;
    o.eval = eval_options(c);
    const ConcavityReport rep = concavity_probe(body, c.kernel, o);
    Output out;
    std::ostringstream os;
    os << "trials,violations,max_violation,inner_distance,monotone_precondition,cluster_count\n";
    os << rep.trials << "," << rep.violations << "," << fmt17(rep.max_violation) << "," << fmt17(rep.inner_distance)
       << "," << int(rep.monotone_precondition) << "," << rep.cluster_count << "\n";
    out.csv = os.str();
    out.result = {{"trials", rep.trials},
                  {"violations", rep.violations},
                  {"max_violation", rep.max_violation},
                  {"inner_distance", rep.inner_distance},
                  {"monotone_precondition", rep.monotone_precondition},
                  {"precondition_detail", rep.precondition_detail},
                  {"poisson_height_bound",
                   rep.poisson_height_bound ? json(*rep.poisson_height_bound) : json(nullptr)},
                  {"cluster_count", rep.cluster_count},
                  {"single_cluster", rep.single_cluster},
                  {"seed", rep.seed}};
    return out;
}

Output run_summability(const ExperimentConfig& c, bool) {
    const auto& s = c.summability;
    KernelFamily fam;
    if (s.family == "poisson") {
        fam = poisson_family(s.m);
    } else if (s.family == "heat") {
        fam = heat_family(s.m);
    } else if (s.family == "constant") {
        fam = constant_family(s.m);
    } else {
        throw Error(ErrorCode::ConfigError, "summability.family must be poisson, heat or constant");
    }
    const SummabilityReport rep = check_summability(fam, s.probe_radius, s.parameters);
    Output out;
    std::ostringstream os;
    os << "parameter,total_mass,outside_mass\n";
    for (const auto& r : rep.rows) os << fmt17(r.parameter) << "," << fmt17(r.total_mass) << "," << fmt17(r.outside_mass) << "\n";
    out.csv = os.str();
    auto cond = [](const ConditionResult& r) { return json{{"verdict", to_string(r.verdict)}, {"detail", r.detail}}; };
    out.result = {{"family", rep.family},
                  {"probe_radius", rep.probe_radius},
                  {"decreasing", cond(rep.decreasing)},
                  {"pointwise", cond(rep.pointwise)},
                  {"unit_mass", cond(rep.unit_mass)},
                  {"concentration", cond(rep.concentration)},
                  {"all_pass", rep.all_pass()}};
    return out;
}

Output run_gap(const ExperimentConfig& c, bool) {
    const Body Y = build_body(c.body);
    const Body X = c.gap.X ? build_body(*c.gap.X) : Y;
    GapOptions o;
    o.samples = c.gap.samples;
    o.seed = c.seed;
    o.r_tilde = c.gap.r_tilde;
    o.eval = eval_options(c);
    const GapReport rep = small_parameter_gap_check(X, Y, c.gap.R0, c.gap.b, c.kernel, o);
    Output out;
    std::ostringstream os;
    os << "x_samples,interior_band_samples,exterior_samples,r_tilde,band,min_x_value,max_y_value,margin,holds\n";
    os << rep.x_samples << "," << rep.interior_band_samples << "," << rep.exterior_samples << "," << fmt17(rep.r_tilde)
       << "," << fmt17(rep.band) << "," << fmt17(rep.min_x_value) << "," << fmt17(rep.max_y_value) << ","
       << fmt17(rep.margin) << "," << int(rep.holds) << "\n";
    out.csv = os.str();
    out.result = {{"x_samples", rep.x_samples},
                  {"interior_band_samples", rep.interior_band_samples},
                  {"exterior_samples", rep.exterior_samples},
                  {"r_tilde", rep.r_tilde},
                  {"band", rep.band},
                  {"min_x_value", rep.min_x_value},
                  {"max_y_value", rep.max_y_value},
                  {"margin", rep.margin},
                  {"holds", rep.holds}};
    return out;
}

void write_file(const std::filesystem::path& p, const std::string& text) {
    std::ofstream f(p, std::ios::binary);
    if (!f) throw Error(ErrorCode::IoError, "cannot write " + p.string());
    f << text;
}

}  // namespace

RunResult run(const ExperimentConfig& config, const std::string& out_dir, bool svg) {
    const std::string& e = config.experiment;
    Output out;
    if (e == "eval") {
        out = run_eval(config, svg);
    } else if (e == "centers") {
        out = run_centers(config, svg);
    } else if (e == "unfolded") {
        out = run_unfolded(config, svg);
    } else if (e == "conebound") {
        out = run_conebound(config, svg);
    } else if (e == "converge") {
        out = run_converge(config, svg);
    } else if (e == "contain") {
        out = run_contain(config, svg);
    } else if (e == "concavity") {
        out = run_concavity(config, svg);
    } else if (e == "summability") {
        out = run_summability(config, svg);
    } else if (e == "gap") {
        out = run_gap(config, svg);
    } else {
        throw Error(ErrorCode::ConfigError, "experiment '" + e + "' is not recognized");
    }
    if (svg && !out.scene) {
        if (config.body.spec.dim != 2) throw Error(ErrorCode::UnsupportedDimension, "SVG output needs m = 2");
        out.scene = base_scene(build_body(config.body), nullptr);
    }
    namespace fs = std::filesystem;
    const fs::path dir(out_dir.empty() ? "." : out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create " + dir.string());
    RunResult rr;
    rr.result = out.result;
    rr.csv = out.csv;
    const json doc = {{"experiment", e}, {"config", to_json(config)}, {"result", out.result}};
    std::string csv_text = "# config: " + to_json(config).dump() + "\n" + out.csv;
    write_file(dir / (e + ".csv"), csv_text);
    rr.files.push_back((dir / (e + ".csv")).string());
    write_file(dir / (e + ".json"), doc.dump(2) + "\n");
    rr.files.push_back((dir / (e + ".json")).string());
    if (out.scene) {
        emit_svg(*out.scene, (dir / (e + ".svg")).string());
        rr.files.push_back((dir / (e + ".svg")).string());
    }
    return rr;
}

}  // namespace pc
