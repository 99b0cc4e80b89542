// Prints one PASS/FAIL line per acceptance criterion; exits nonzero when any fails.
#include "pc/centers.hpp"
#include "pc/conebound.hpp"
#include "pc/errors.hpp"
#include "pc/potentials.hpp"
#include "pc/unfolded.hpp"

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

using namespace pc;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
    void note(const std::string& what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof(buf), f, args...);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Body ball(int m, double radius) {
    BodySpec s;
    s.dim = m;
    s.shape = BallShape{Point::zero(m), radius};
    return Body::build(s);
}

Body annulus() {
    BodySpec s;
    s.shape = AnnulusShape{Point{0.0, 0.0}, 1.0, 3.0};
    return Body::build(s);
}

Body dumbbell(double eps) {
    BodySpec s;
    s.shape = DumbbellShape{eps};
    return Body::build(s);
}

Body triangle() {
    BodySpec s;
    s.shape = PolygonShape{{Point{0.0, 0.0}, Point{4.0, 0.0}, Point{1.0, 1.0}}};
    s.cone = ConeSpec{kPi / 2, 0.3};
    return Body::build(s);
}

Body square() {
    BodySpec s;
    s.shape = PolygonShape{{Point{-1.0, -1.0}, Point{1.0, -1.0}, Point{1.0, 1.0}, Point{-1.0, 1.0}}};
    return Body::build(s);
}

struct Named {
    std::string name;
    Body body;
};

std::vector<Named> test_bodies() {
    return {{"ball", ball(2, 1.0)}, {"annulus", annulus()}, {"dumbbell(0.2)", dumbbell(0.2)}, {"triangle", triangle()}};
}

std::vector<Point> mirrored(const std::vector<Point>& pts) {
    std::vector<Point> out;
    for (const auto& p : pts) out.push_back(Point{-p[0], p[1]});
    return out;
}

double bound_alpha(const KernelSpec& k) {
    if (const auto* r = std::get_if<Renormalized>(&k)) return r->alpha;
    return -1.0;
}

Outcome ball_closed_forms() {
    Outcome o;
    const double rho = 1.5;
    double worst_rel = 0.0, worst_dt = 0.0;
    for (int m : {2, 3}) {
        const Body b = ball(m, rho);
        const double sigma = m == 2 ? 2.0 * kPi : 4.0 * kPi;
        const Point x = Point::zero(m);
        struct Case {
            KernelSpec k;
            double exact;
            const char* name;
        };
        const Case cases[] = {{Renormalized{-1.0}, -sigma / rho, "a=-1"},
                              {Renormalized{0.0}, sigma * std::log(rho), "a=0"},
                              {Riesz{1.0}, sigma * rho, "a=1"}};
        for (const auto& c : cases) {
            const auto t0 = std::chrono::steady_clock::now();
            const double v = evaluate(b, c.k, x).value;
            const double dt = seconds_since(t0);
            const double rel = std::abs(v - c.exact) / std::abs(c.exact);
            o.require(rel < 1e-3, fmt("m=%d %s rel=%.2e", m, c.name, rel));
            o.require(dt < 10.0, fmt("m=%d %s took %.1fs", m, c.name, dt));
            worst_rel = std::max(worst_rel, rel);
            worst_dt = std::max(worst_dt, dt);
        }
    }
    o.note(fmt("max rel error %.2e, max case time %.3fs", worst_rel, worst_dt));
    return o;
}

Outcome halfspace_constant() {
    Outcome o;
    const EParams p;
    const RTilde rt = r_tilde(p);
    const double root = closed_form_root(p.D, p.R0, p.m);
    const EProfile prof = e_profile(p, 50);
    o.require(rt.r_tilde > 1.0 / kPi && rt.r_tilde < 1.0, fmt("r_tilde=%.10f outside (1/pi, 1)", rt.r_tilde));
    o.require(std::abs(rt.r_tilde - root) < 1e-4, fmt("|r_tilde - root|=%.2e", std::abs(rt.r_tilde - root)));
    o.require(prof.strictly_decreasing, "E(R) not strictly decreasing over 50 samples");
    o.note(fmt("r_tilde=%.10f closed-form root=%.10f", rt.r_tilde, root));
    return o;
}

Outcome rotation_minimality() {
    Outcome o;
    const double inf = kInf;
    const ConeIntegralParams sets[] = {
        {-1.0, kPi / 2, 1.0, 0.0, 0.5, 3.0, 2},      {0.0, kPi / 2, 1.0, 0.0, 0.5, 3.0, 2},
        {-1.0, kPi / 3, 0.5, 0.0, 1.0, 4.0, 2},      {-0.5, 2 * kPi / 3, 2.0, 0.0, 0.3, 3.0, 2},
        {-1.0, kPi / 4, 10.0, 0.0, 1.0, 3.0, 2},     {0.0, kPi / 2, inf, 0.0, 0.8, 2.0, 2},
        {-2.0, kPi / 2, 0.4, 0.0, 0.2, 2.0, 2},      {-1.0, 5 * kPi / 6, 1.5, 0.0, 0.5, 6.0, 2},
        {-1.0, kPi / 2, 1.0, 0.0, 0.5, 3.0, 3},      {0.0, kPi / 3, inf, 0.0, 0.5, 2.0, 3},
        {-1.0, 2 * kPi / 3, 0.5, 0.0, 0.3, 2.0, 3},  {-0.5, kPi / 2, 5.0, 0.0, 1.0, 3.0, 3}};
    const auto t0 = std::chrono::steady_clock::now();
    int i = 0;
    for (const auto& s : sets) {
        ++i;
        if (!rotation_hypothesis_holds(s.delta, s.R, s.D)) {
            o.require(false, fmt("set %d violates the hypothesis", i));
            continue;
        }
        const RotationReport rep = verify_rotation_minimality(s, 16);
        o.require(rep.minimal_at_zero, fmt("set %d: min %.6g below theta=0 value %.6g", i, rep.min_value, rep.value_at_zero));
    }
    const double dt = seconds_since(t0);
    o.require(dt < 120.0, fmt("took %.1fs", dt));
    o.note(fmt("12 sets in %.2fs", dt));
    return o;
}

Outcome containment_suite() {
    Outcome o;
    const KernelSpec kernels[] = {Renormalized{-1.0}, Renormalized{0.0}, Poisson{0.05}, Poisson{0.02}};
    int controls = 0;
    for (const auto& [name, body] : test_bodies()) {
        const UnfoldedRegion uf = unfolded_region(body, 256);
        for (const auto& k : kernels) {
            const std::string tag = name + "/" + kernel_name(k);
            const CenterSet cs = find_centers(body, k);
            const double rt = body_r_tilde(body, bound_alpha(k));
            const ContainmentReport rep = containment_report(body, cs, uf, 0.9, rt);
            o.require(rep.pass, tag + " centers outside Uf or the inner parallel body");
            const double depth = 0.5 * rep.radius;
            if (body.signed_distance(cs.argmax) <= depth) continue;
            CenterSet control = cs;
            control.points = {plant_point_at_depth(body, cs.argmax, Point::unit(2, 0), depth)};
            control.values = {0.0};
            const ContainmentReport bad = containment_report(body, control, uf, 0.9, rt);
            o.require(!bad.pass && !bad.entries.front().in_inner_parallel, tag + " planted control passed");
            ++controls;
        }
    }
    o.note(fmt("16 center sets, %d planted controls", controls));
    return o;
}

Outcome multiplicity() {
    Outcome o;
    const double eps = 0.1;
    const Body db = dumbbell(eps);
    const double rt = body_r_tilde(db, -1.0);
    o.require(eps < rt, fmt("epsilon %.3f not below R~ %.4f", eps, rt));
    for (const KernelSpec& k : {KernelSpec{Renormalized{-1.0}}, KernelSpec{Poisson{0.02}}}) {
        const CenterSet cs = find_centers(db, k);
        const double asym = hausdorff_distance(cs.points, mirrored(cs.points));
        o.require(cs.points.size() >= 2, kernel_name(k) + fmt(" found %zu centers", cs.points.size()));
        o.require(asym <= cs.resolution, kernel_name(k) + fmt(" asymmetry %.3g", asym));
        o.note(kernel_name(k) + fmt(": %zu centers", cs.points.size()));
    }
    const Body an = annulus();
    const CenterSet ring = find_centers(an, Renormalized{-1.0});
    const double ra = norm(ring.argmax);
    const double rt_an = body_r_tilde(an, -1.0);
    double spread = 0.0;
    for (const auto& p : ring.points) spread = std::max(spread, std::abs(norm(p) - ra));
    o.require(ring.points.size() >= 2, "annulus plateau is a single point");
    o.require(spread <= ring.resolution, fmt("annulus radii spread %.3g", spread));
    o.require(ra >= 1.0 + rt_an && ra <= 2.0, fmt("annulus radius %.4f outside [%.4f, 2]", ra, 1.0 + rt_an));
    o.note(fmt("annulus: %zu points at radius %.4f", ring.points.size(), ra));
    return o;
}

Outcome convergence() {
    Outcome o;
    std::vector<double> hs;
    for (int k = 0; k <= 6; ++k) hs.push_back(std::ldexp(1.0, -k));
    for (const Named& nb : {Named{"triangle", triangle()}, Named{"square", square()}}) {
        const CenterSet ref = find_centers(nb.body, Renormalized{-1.0});
        const auto recs = convergence_experiment(nb.body, ParametricFamily::Poisson, hs, ref);
        std::string trace;
        for (const auto& r : recs) trace += fmt("%.3g ", r.hausdorff_to_reference);
        for (std::size_t k = 2; k + 1 < recs.size(); ++k)
            o.require(recs[k + 1].hausdorff_to_reference <= recs[k].hausdorff_to_reference,
                      nb.name + fmt(" H increases at k=%zu", k + 1));
        o.require(recs.back().hausdorff_to_reference < 2.0 * ref.resolution,
                  nb.name + fmt(" final H %.3g not below %.3g", recs.back().hausdorff_to_reference, 2.0 * ref.resolution));
        o.note(nb.name + " H: " + trace);
    }
    const Body tri = triangle();
    const CenterSet inc = incenter_reference(tri);
    std::vector<double> ts;
    for (int k = 0; k <= 6; ++k) ts.push_back(0.1 * std::ldexp(1.0, -k));
    const auto heat = convergence_experiment(tri, ParametricFamily::Heat, ts, inc);
    o.require(heat.back().hausdorff_to_reference < heat.front().hausdorff_to_reference, "heat trend not toward the incenter");
    o.note(fmt("heat H: %.3g -> %.3g", heat.front().hausdorff_to_reference, heat.back().hausdorff_to_reference));
    return o;
}

Outcome concavity() {
    Outcome o;
    for (const Named& nb : {Named{"ball", ball(2, 1.0)}, Named{"square", square()}}) {
        const double d = 0.25 * nb.body.inradius();
        const double h = 0.8 * std::sqrt(0.5) * d;
        for (const KernelSpec& k :
             {KernelSpec{Renormalized{-1.0}}, KernelSpec{Renormalized{0.0}}, KernelSpec{Riesz{0.99}}, KernelSpec{Poisson{h}}}) {
            ConcavityOptions opt;
            opt.trials = 200;
            const ConcavityReport rep = concavity_probe(nb.body, k, opt);
            const std::string tag = nb.name + "/" + kernel_name(k);
            o.require(rep.violations == 0, tag + fmt(" %d violations (max %.3g)", rep.violations, rep.max_violation));
            if (rep.poisson_height_bound) o.require(*rep.poisson_height_bound, tag + " above the height bound");
        }
    }
    o.note("8 probes x 200 pairs");
    return o;
}

Outcome summability() {
    Outcome o;
    const SummabilityReport rep = check_summability(poisson_family(2), 1.0, {1.0, 0.1, 0.01, 0.001});
    o.require(rep.decreasing.verdict == Verdict::Pass, "decreasing: " + rep.decreasing.detail);
    o.require(rep.pointwise.verdict == Verdict::Pass, "pointwise: " + rep.pointwise.detail);
    o.require(rep.unit_mass.verdict == Verdict::Pass, "unit mass: " + rep.unit_mass.detail);
    o.require(rep.concentration.verdict == Verdict::Pass, "concentration: " + rep.concentration.detail);
    for (const auto& r : rep.rows) {
        o.require(std::abs(r.total_mass - 1.0) < 1e-6, fmt("mass %.9f at h=%g", r.total_mass, r.parameter));
        if (r.parameter == 0.001) o.require(r.outside_mass < 1e-3, fmt("outside mass %.3g at h=1e-3", r.outside_mass));
    }
    o.note(fmt("outside mass at h=1e-3: %.3g", rep.rows.back().outside_mass));
    return o;
}

Outcome oracle_equivalence() {
    Outcome o;
    for (const auto& [name, body] : test_bodies()) {
        for (const KernelSpec& k : {KernelSpec{Renormalized{-1.0}}, KernelSpec{Poisson{0.05}}}) {
            const CenterSet fast = find_centers(body, k);
            const CenterSet full = find_centers_exhaustive(body, k);
            const double h = hausdorff_distance(fast.points, full.points);
            o.require(h <= 1e-9 * body.diameter() && fast.points.size() == full.points.size(),
                      name + "/" + kernel_name(k) + fmt(" H=%.3g sizes %zu vs %zu", h, fast.points.size(), full.points.size()));
        }
    }
    o.note("8 body/kernel pairs");
    return o;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

Outcome reproducibility() {
    Outcome o;
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / ("pc_acceptance_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    std::ofstream(dir / "cfg.json") << R"({"body": {"shape": "polygon", "vertices": [[0,0],[4,0],[1,1]],
        "cone": {"kappa": 1.5707963267948966, "delta": 0.3}}, "kernel": {"type": "poisson", "h": 0.05}})";
    for (const char* run : {"a", "b"}) {
        const std::string cmd = std::string("PC_THREADS=1 '") + PC_BINARY + "' centers find --config '" +
                                (dir / "cfg.json").string() + "' --out '" + (dir / run).string() + "' > /dev/null";
        const int st = std::system(cmd.c_str());
        o.require(WIFEXITED(st) && WEXITSTATUS(st) == 0, std::string("run ") + run + " failed");
    }
    const std::string a = slurp(dir / "a" / "centers.csv"), b = slurp(dir / "b" / "centers.csv");
    o.require(!a.empty() && a == b, "CSV bytes differ");
    o.note(fmt("%zu identical bytes", a.size()));
    fs::remove_all(dir);
    return o;
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<Outcome()>> criteria[] = {
        {"ball closed forms", ball_closed_forms},
        {"half-space R~ constant", halfspace_constant},
        {"rotation minimality", rotation_minimality},
        {"containment suite", containment_suite},
        {"multiplicity", multiplicity},
        {"convergence", convergence},
        {"concavity probes", concavity},
        {"summability report", summability},
        {"oracle equivalence", oracle_equivalence},
        {"reproducibility", reproducibility},
    };
    int failed = 0, n = 0;
    for (const auto& [name, fn] : criteria) {
        ++n;
        const auto t0 = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = fn();
        } catch (const Error& e) {
            out = {false, std::string(to_string(e.code())) + ": " + e.what()};
        } catch (const std::exception& e) {
            out = {false, e.what()};
        }
        failed += out.pass ? 0 : 1;
        std::printf("%s %2d %s (%.1fs): %s\n", out.pass ? "PASS" : "FAIL", n, name, seconds_since(t0), out.detail.c_str());
        std::fflush(stdout);
    }
    std::printf("%d/%d criteria passed\n", n - failed, n);
    return failed == 0 ? 0 : 1;
}
