#include "pc/centers.hpp"

#include "pc/conebound.hpp"
#include "pc/errors.hpp"
#include "pc/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <sstream>

namespace pc {

namespace {

using Key = std::array<int, kMaxDim>;

struct Sample {
    bool admissible = false;
    double objective = 0.0;
    double value = 0.0;
    double error = 0.0;
};

bool is_renormalized(const KernelSpec& k) { return std::holds_alternative<Renormalized>(k); }
bool is_normalized(const KernelSpec& k) {
    return std::holds_alternative<Poisson>(k) || std::holds_alternative<Heat>(k);
}

/// Finest lattice around the bounding-box center, with objective evaluations cached by key.
class Lattice {
public:
    Lattice(const Body& body, const KernelSpec& kernel, const CenterOptions& o)
        : body_(body), kernel_(kernel), opts_(o), m_(body.dim()) {
        validate_kernel(kernel, m_);
        h_ = o.resolution > 0.0 ? o.resolution : default_resolution(body);
        if (!(h_ > 0.0) || !std::isfinite(h_)) throw Error(ErrorCode::InvalidRange, "resolution must be positive");
        const Box box = body.bounding_box();
        center_ = box.center();
        for (int i = 0; i < m_; ++i) {
            const double half = 0.5 * (box.hi[i] - box.lo[i]);
            const double n = std::ceil(half / h_ - 1e-9);
            if (n > 1e6) throw Error(ErrorCode::InvalidRange, "resolution is too fine for this body");
            extent_[static_cast<std::size_t>(i)] = static_cast<int>(n);
        }
        complement_ = is_normalized(kernel) && body.analytic();
        if (complement_) rk_ = radial_kernel(kernel, m_);
        renorm_tol_ = boundary_tolerance(body, o.eval.quadrature);
    }

    int dim() const { return m_; }
    double spacing() const { return h_; }
    int extent(int i) const { return extent_[static_cast<std::size_t>(i)]; }
    bool complement() const { return complement_; }

    bool in_range(const Key& k) const {
        for (int i = 0; i < m_; ++i) {
            if (std::abs(k[static_cast<std::size_t>(i)]) > extent(i)) return false;
        }
        return true;
    }

    Point point(const Key& k) const {
        Point p = center_;
        for (int i = 0; i < m_; ++i) p[i] += h_ * k[static_cast<std::size_t>(i)];
        return p;
    }

    /// Evaluates all keys not yet cached, concurrently.
    void ensure(const std::vector<Key>& keys) {
        std::vector<Key> todo;
        for (const auto& k : keys) {
            if (in_range(k) && !cache_.count(k)) todo.push_back(k);
        }
        std::sort(todo.begin(), todo.end());
        todo.erase(std::unique(todo.begin(), todo.end()), todo.end());
        std::vector<Sample> out(todo.size());
        parallel_for(todo.size(), [&](std::size_t i) { out[i] = sample(point(todo[i])); });
        for (std::size_t i = 0; i < todo.size(); ++i) cache_.emplace(todo[i], out[i]);
    }

    const Sample* find(const Key& k) const {
        auto it = cache_.find(k);
        return it == cache_.end() ? nullptr : &it->second;
    }

    const std::map<Key, Sample>& cache() const { return cache_; }

    std::string region_name() const {
        std::string s = is_renormalized(kernel_) ? "interior (dist > boundary tolerance)" : "convex hull";
        if (opts_.constraint) s += " & " + (opts_.constraint_name.empty() ? std::string("constraint") : opts_.constraint_name);
        return s;
    }

private:
    bool admissible(const Point& x) const {
        if (is_renormalized(kernel_)) {
            if (!(body_.signed_distance(x) > renorm_tol_)) return false;
        } else if (!body_.in_convex_hull(x)) {
            return false;
        }
        return !opts_.constraint || opts_.constraint(x);
    }

    Sample sample(const Point& x) const {
        Sample s;
        if (!admissible(x)) return s;
        s.admissible = true;
        if (complement_) {
            const QuadratureResult q = integrate_kernel_over_complement(body_, rk_, x, opts_.eval.quadrature);
            s.objective = -q.value;
            s.value = 1.0 - q.value;
            s.error = q.estimated_error;
        } else {
            const PotentialValue v = evaluate(body_, kernel_, x, opts_.eval);
            s.objective = v.value;
            s.value = v.value;
            s.error = v.estimated_error;
        }
        return s;
    }

    const Body& body_;
    const KernelSpec& kernel_;
    const CenterOptions& opts_;
    int m_;
    double h_ = 0.0;
    Point center_;
    Key extent_{};
    bool complement_ = false;
    RadialKernel rk_;
    double renorm_tol_ = 0.0;
    std::map<Key, Sample> cache_;
};

/// All keys k with k_i in {c_i + j step : |j step| <= radius}, step dividing the coordinates.
void window(const Lattice& lat, const Key& c, int step, int radius, std::vector<Key>& out) {
    const int m = lat.dim();
    const int n = 2 * (radius / step) + 1;
    std::int64_t total = 1;
    for (int i = 0; i < m; ++i) total *= n;
    for (std::int64_t idx = 0; idx < total; ++idx) {
        Key k = c;
        std::int64_t r = idx;
        for (int i = 0; i < m; ++i) {
            k[static_cast<std::size_t>(i)] += static_cast<int>((r % n) - radius / step) * step;
            r /= n;
        }
        if (lat.in_range(k)) out.push_back(k);
    }
}

/// Every key whose coordinates are multiples of `step`.
std::vector<Key> full_level(const Lattice& lat, int step) {
    const int m = lat.dim();
    std::vector<int> lo(static_cast<std::size_t>(m)), n(static_cast<std::size_t>(m));
    std::int64_t total = 1;
    for (int i = 0; i < m; ++i) {
        const int e = lat.extent(i) / step;
        lo[static_cast<std::size_t>(i)] = -e;
        n[static_cast<std::size_t>(i)] = 2 * e + 1;
        total *= n[static_cast<std::size_t>(i)];
    }
    if (total > 50'000'000) throw Error(ErrorCode::InvalidRange, "lattice has too many points");
    std::vector<Key> keys;
    keys.reserve(static_cast<std::size_t>(total));
    for (std::int64_t idx = 0; idx < total; ++idx) {
        Key k{};
        std::int64_t r = idx;
        for (int i = 0; i < m; ++i) {
            k[static_cast<std::size_t>(i)] = (lo[static_cast<std::size_t>(i)] + static_cast<int>(r % n[static_cast<std::size_t>(i)])) * step;
            r /= n[static_cast<std::size_t>(i)];
        }
        keys.push_back(k);
    }
    return keys;
}

struct Best {
    Key key{};
    double objective = -kInf;
    bool found = false;
};

Best best_of(const Lattice& lat, const std::vector<Key>& keys) {
    Best b;
    for (const auto& k : keys) {
        const Sample* s = lat.find(k);
        if (s && s->admissible && s->objective > b.objective) {
            b = {k, s->objective, true};
        }
    }
    return b;
}

std::vector<Key> axis_neighbors(const Lattice& lat, const Key& k, int step) {
    std::vector<Key> out;
    for (int i = 0; i < lat.dim(); ++i) {
        for (int sgn : {-1, 1}) {
            Key q = k;
            q[static_cast<std::size_t>(i)] += sgn * step;
            if (lat.in_range(q)) out.push_back(q);
        }
    }
    return out;
}

CenterSet assemble(Lattice& lat, const KernelSpec& kernel, const CenterOptions& o, const std::vector<Key>& finest) {
    const Best best = best_of(lat, finest);
    if (!best.found) throw Error(ErrorCode::EmptyAdmissibleRegion, "no admissible lattice point in " + lat.region_name());
    const Sample& top = *lat.find(best.key);
    double tol = o.plateau_tolerance;
    if (tol < 0.0) {
        const auto nb = axis_neighbors(lat, best.key, 1);
        lat.ensure(nb);
        double deficit = 0.0;
        for (const auto& q : nb) {
            const Sample* s = lat.find(q);
            if (s && s->admissible) deficit = std::max(deficit, top.objective - s->objective);
        }
        tol = 10.0 * top.error + 0.5 * deficit;
    }
    CenterSet cs;
    cs.potential = kernel;
    cs.search_region = lat.region_name();
    cs.resolution = lat.spacing();
    cs.plateau_tolerance = tol;
    cs.ranked_by_complement = lat.complement();
    cs.argmax = lat.point(best.key);
    cs.max_value = top.value;
    cs.estimated_error = top.error;
    for (const auto& [k, s] : lat.cache()) {
        if (s.admissible && s.objective >= best.objective - tol) {
            cs.points.push_back(lat.point(k));
            cs.values.push_back(s.value);
        }
    }
    for (const auto& kv : lat.cache()) cs.evaluations += kv.second.admissible;
    return cs;
}

std::string num(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

Point sample_box(const Box& box, std::mt19937_64& rng) {
    Point p(box.dim());
    for (int i = 0; i < box.dim(); ++i) {
        const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        p[i] = box.lo[i] + u * (box.hi[i] - box.lo[i]);
    }
    return p;
}

}  // namespace

double default_resolution(const Body& body) {
    const int m = body.dim();
    return body.diameter() / (m == 2 ? 128.0 : m == 3 ? 32.0 : 12.0);
}

CenterSet find_centers(const Body& body, const KernelSpec& kernel, const CenterOptions& options) {
    Lattice lat(body, kernel, options);
    constexpr int factors[] = {16, 4, 1};
    std::vector<Key> level;
    int li = 0;
    // Start at the coarsest level that has an admissible point.
    for (; li < 3; ++li) {
        level = full_level(lat, factors[li]);
        lat.ensure(level);
        if (best_of(lat, level).found) break;
    }
    if (li == 3) throw Error(ErrorCode::EmptyAdmissibleRegion, "no admissible lattice point in " + lat.region_name());
    for (; li < 2; ++li) {
        const int f = factors[li];
        const Best best = best_of(lat, level);
        std::vector<Key> next;
        for (const auto& k : level) {
            const Sample* s = lat.find(k);
            if (!s || !s->admissible) continue;
            double osc = 0.0;
            bool any = false;
            for (const auto& q : axis_neighbors(lat, k, f)) {
                const Sample* t = lat.find(q);
                if (t && t->admissible) {
                    osc = std::max(osc, std::abs(s->objective - t->objective));
                    any = true;
                }
            }
            if (!any) osc = kInf;
            if (s->objective + osc + 10.0 * s->error >= best.objective) window(lat, k, factors[li + 1], f, next);
        }
        std::sort(next.begin(), next.end());
        next.erase(std::unique(next.begin(), next.end()), next.end());
        lat.ensure(next);
        level = std::move(next);
    }
    return assemble(lat, kernel, options, level);
}

CenterSet find_centers_exhaustive(const Body& body, const KernelSpec& kernel, const CenterOptions& options) {
    Lattice lat(body, kernel, options);
    const auto keys = full_level(lat, 1);
    lat.ensure(keys);
    return assemble(lat, kernel, options, keys);
}

CenterSet incenter_reference(const Body& body, double resolution) {
    const double h = resolution > 0.0 ? resolution : default_resolution(body);
    const Box box = body.bounding_box();
    const Point c = box.center();
    const int m = body.dim();
    std::array<int, kMaxDim> ext{};
    std::int64_t total = 1;
    for (int i = 0; i < m; ++i) {
        ext[static_cast<std::size_t>(i)] = static_cast<int>(std::ceil(0.5 * (box.hi[i] - box.lo[i]) / h - 1e-9));
        total *= 2 * ext[static_cast<std::size_t>(i)] + 1;
    }
    if (total > 50'000'000) throw Error(ErrorCode::InvalidRange, "lattice has too many points");
    std::vector<double> sd(static_cast<std::size_t>(total));
    auto point = [&](std::int64_t idx) {
        Point p = c;
        for (int i = 0; i < m; ++i) {
            const int n = 2 * ext[static_cast<std::size_t>(i)] + 1;
            p[i] += h * (static_cast<int>(idx % n) - ext[static_cast<std::size_t>(i)]);
            idx /= n;
        }
        return p;
    };
    parallel_for(sd.size(), [&](std::size_t i) { sd[i] = body.signed_distance(point(static_cast<std::int64_t>(i))); });
    const auto it = std::max_element(sd.begin(), sd.end());
    CenterSet cs;
    cs.potential = Renormalized{-1.0};
    cs.search_region = "lattice argmax of the distance to the complement";
    cs.resolution = h;
    cs.argmax = point(it - sd.begin());
    cs.points = {cs.argmax};
    cs.values = {*it};
    cs.max_value = *it;
    cs.evaluations = total;
    return cs;
}

double hausdorff_distance(const std::vector<Point>& a, const std::vector<Point>& b) {
    if (a.empty() || b.empty()) throw Error(ErrorCode::EmptySet, "Hausdorff distance needs two nonempty sets");
    auto directed = [](const std::vector<Point>& p, const std::vector<Point>& q) {
        double worst = 0.0;
        for (const auto& x : p) {
            double best = kInf;
            for (const auto& y : q) best = std::min(best, distance(x, y));
            worst = std::max(worst, best);
        }
        return worst;
    };
    return std::max(directed(a, b), directed(b, a));
}

Point plant_point_at_depth(const Body& body, const Point& from, const Point& direction, double depth) {
    const Point u = normalized(direction);
    if (!(body.signed_distance(from) > depth)) {
        throw Error(ErrorCode::InvalidRange, "start point must be deeper than the requested depth");
    }
    double lo = 0.0, hi = body.diameter();
    while (body.signed_distance(from + hi * u) > depth) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-14 * body.diameter(); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (body.signed_distance(from + mid * u) > depth) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return from + lo * u;
}

ContainmentReport containment_report(const Body& body, const CenterSet& centers, const UnfoldedRegion& uf, double b,
                                     double r_tilde) {
    ContainmentReport rep;
    rep.r_tilde = r_tilde;
    rep.b = b;
    rep.radius = is_renormalized(centers.potential) ? r_tilde : b * r_tilde;
    rep.uf_slack = centers.resolution > 0.0 ? centers.resolution : default_resolution(body);
    rep.pass = true;
    for (const auto& x : centers.points) {
        ContainmentEntry e;
        e.point = x;
        e.signed_distance = body.signed_distance(x);
        e.uf_excess = -kInf;
        for (std::size_t i = 0; i < uf.directions.size(); ++i) {
            e.uf_excess = std::max(e.uf_excess, dot(x, uf.directions[i]) - uf.thresholds[i]);
        }
        e.in_uf = uf_contains(uf, x, rep.uf_slack);
        e.in_inner_parallel = e.signed_distance >= rep.radius;
        rep.pass = rep.pass && e.in_uf && e.in_inner_parallel;
        rep.entries.push_back(e);
    }
    return rep;
}

double body_r_tilde(const Body& body, double alpha) {
    const ConeSpec cone = body.cone();
    EParams p{alpha, cone.kappa, cone.delta, body.diameter(), body.inradius(), body.dim()};
    return r_tilde(p).r_tilde;
}

const char* to_string(ParametricFamily f) { return f == ParametricFamily::Poisson ? "poisson" : "heat"; }

KernelSpec family_kernel(ParametricFamily f, double parameter) {
    if (f == ParametricFamily::Poisson) return Poisson{parameter};
    return Heat{parameter};
}

std::vector<ConvergenceRecord> convergence_experiment(const Body& body, ParametricFamily family,
                                                      const std::vector<double>& parameters,
                                                      const CenterSet& reference, const CenterOptions& options) {
    if (parameters.empty()) throw Error(ErrorCode::NonDecreasingParameters, "parameter list is empty");
    for (std::size_t i = 0; i < parameters.size(); ++i) {
        if (!(parameters[i] > 0.0)) throw Error(ErrorCode::InvalidRange, "parameters must be positive");
        if (i > 0 && !(parameters[i] < parameters[i - 1])) {
            throw Error(ErrorCode::NonDecreasingParameters,
                        "parameters must be strictly decreasing, got " + num(parameters[i - 1]) + " then " +
                            num(parameters[i]));
        }
    }
    std::vector<ConvergenceRecord> out;
    for (double t : parameters) {
        ConvergenceRecord r;
        r.parameter = t;
        r.center_set = find_centers(body, family_kernel(family, t), options);
        r.hausdorff_to_reference = hausdorff_distance(r.center_set.points, reference.points);
        out.push_back(std::move(r));
    }
    return out;
}

ConcavityReport concavity_probe(const Body& body, const KernelSpec& kernel, const ConcavityOptions& o) {
    if (!body.is_convex()) throw Error(ErrorCode::PreconditionFailed, "concavity probes need a convex body");
    if (o.trials < 1) throw Error(ErrorCode::InvalidRange, "trials must be positive");
    const int m = body.dim();
    validate_kernel(kernel, m);
    ConcavityReport rep;
    rep.trials = o.trials;
    rep.seed = o.seed;
    rep.inner_distance = o.inner_distance > 0.0 ? o.inner_distance : 0.25 * body.inradius();
    const double d = rep.inner_distance;
    if (!(d < body.inradius())) throw Error(ErrorCode::InvalidRange, "inner distance must be below the inradius");

    const RadialKernel rk = radial_kernel(kernel, m);
    const double diam = body.diameter();
    rep.monotone_precondition = true;
    double prev = kInf;
    constexpr int kProbe = 2000;
    for (int i = 0; i <= kProbe; ++i) {
        const double r = d + (diam - d) * i / kProbe;
        const double g = rk.k(r) * std::pow(r, m - 1);
        if (g > prev * (1.0 + 1e-12)) {
            rep.monotone_precondition = false;
            rep.precondition_detail = "k(r) r^(m-1) increases near r = " + num(r);
            break;
        }
        prev = g;
    }
    if (rep.monotone_precondition) rep.precondition_detail = "k(r) r^(m-1) non-increasing on [" + num(d) + ", " + num(diam) + "]";
    if (const auto* p = std::get_if<Poisson>(&kernel)) rep.poisson_height_bound = p->h <= std::sqrt((m - 1) / 2.0) * d;

    std::mt19937_64 rng(o.seed);
    const Box box = body.bounding_box();
    auto draw = [&]() {
        for (int tries = 0; tries < 1'000'000; ++tries) {
            const Point p = sample_box(box, rng);
            if (body.signed_distance(p) >= d && (!o.uf || uf_contains(*o.uf, p, 0.0))) return p;
        }
        throw Error(ErrorCode::NoSamplePoints, "no sample point found in the probe region");
    };
    std::vector<std::array<Point, 3>> triples(static_cast<std::size_t>(o.trials));
    for (auto& t : triples) {
        t[0] = draw();
        t[1] = draw();
        t[2] = 0.5 * (t[0] + t[1]);
    }
    std::vector<double> slack(triples.size());
    parallel_for(triples.size(), [&](std::size_t i) {
        const PotentialValue a = evaluate(body, kernel, triples[i][0], o.eval);
        const PotentialValue b = evaluate(body, kernel, triples[i][1], o.eval);
        const PotentialValue c = evaluate(body, kernel, triples[i][2], o.eval);
        const double tol = c.estimated_error + 0.5 * (a.estimated_error + b.estimated_error) +
                           1e-12 * std::max({std::abs(a.value), std::abs(b.value), std::abs(c.value), 1.0});
        slack[i] = c.value - 0.5 * (a.value + b.value) + tol;
    });
    for (double s : slack) {
        if (s < 0.0) {
            ++rep.violations;
            rep.max_violation = std::max(rep.max_violation, -s);
        }
    }

    CenterOptions co;
    co.eval = o.eval;
    co.resolution = o.cluster_resolution > 0.0 ? o.cluster_resolution : diam / 64.0;
    const CenterSet cs = find_centers(body, kernel, co);
    // Connected components under lattice adjacency (diagonals included).
    const double link = 1.01 * std::sqrt(double(m)) * cs.resolution;
    std::vector<int> comp(cs.points.size(), -1);
    for (std::size_t s = 0; s < cs.points.size(); ++s) {
        if (comp[s] >= 0) continue;
        comp[s] = rep.cluster_count;
        std::vector<std::size_t> stack{s};
        while (!stack.empty()) {
            const std::size_t i = stack.back();
            stack.pop_back();
            for (std::size_t j = 0; j < cs.points.size(); ++j) {
                if (comp[j] < 0 && distance(cs.points[i], cs.points[j]) <= link) {
                    comp[j] = rep.cluster_count;
                    stack.push_back(j);
                }
            }
        }
        ++rep.cluster_count;
    }
    rep.single_cluster = rep.cluster_count == 1;
    return rep;
}

GapReport small_parameter_gap_check(const Body& X, const Body& Y, double R0, double b, const KernelSpec& kernel,
                                    const GapOptions& o) {
    if (X.dim() != Y.dim()) throw Error(ErrorCode::InvalidRange, "X and Y must share a dimension");
    if (!(b > 0.0 && b < 1.0)) throw Error(ErrorCode::InvalidRange, "b must lie in (0, 1), got " + num(b));
    if (!(R0 > 0.0)) throw Error(ErrorCode::InvalidRange, "R0 must be positive");
    if (o.samples < 1) throw Error(ErrorCode::InvalidRange, "samples must be positive");
    if (!is_normalized(kernel)) throw Error(ErrorCode::InvalidRange, "gap checks take a Poisson or heat kernel");
    const int m = X.dim();
    validate_kernel(kernel, m);
    GapReport rep;
    if (o.r_tilde > 0.0) {
        rep.r_tilde = o.r_tilde;
    } else if (std::holds_alternative<Poisson>(kernel)) {
        rep.r_tilde = body_r_tilde(Y, -1.0);
    } else {
        throw Error(ErrorCode::InvalidRange, "the heat family has no alpha; pass r_tilde explicitly");
    }
    rep.band = b * rep.r_tilde;

    std::mt19937_64 rng(o.seed);
    auto collect = [&](const Box& box, auto&& accept, int want) {
        std::vector<Point> pts;
        for (int tries = 0; tries < 2'000'000 && static_cast<int>(pts.size()) < want; ++tries) {
            const Point p = sample_box(box, rng);
            if (accept(p)) pts.push_back(p);
        }
        return pts;
    };
    const std::vector<Point> xs =
        collect(X.bounding_box(), [&](const Point& p) { return X.signed_distance(p) >= R0; }, o.samples);
    Box yb = Y.bounding_box();
    for (int i = 0; i < m; ++i) {
        yb.lo[i] -= 0.5 * Y.diameter();
        yb.hi[i] += 0.5 * Y.diameter();
    }
    const std::vector<Point> band = collect(Y.bounding_box(), [&](const Point& p) {
        const double s = Y.signed_distance(p);
        return s > 0.0 && s <= rep.band;
    }, o.samples);
    const std::vector<Point> ext = collect(yb, [&](const Point& p) { return Y.signed_distance(p) <= 0.0; }, o.samples);
    if (xs.empty()) throw Error(ErrorCode::NoSamplePoints, "no point of X lies at distance >= R0 from its complement");
    if (band.empty() && ext.empty()) throw Error(ErrorCode::NoSamplePoints, "no point of Y within the boundary band");
    rep.x_samples = static_cast<int>(xs.size());
    rep.interior_band_samples = static_cast<int>(band.size());
    rep.exterior_samples = static_cast<int>(ext.size());

    std::vector<Point> ys = band;
    ys.insert(ys.end(), ext.begin(), ext.end());
    const RadialKernel rk = radial_kernel(kernel, m);
    auto comp = [&](const Body& B, const Point& p, double& value) {
        if (B.analytic()) {
            const double c = integrate_kernel_over_complement(B, rk, p, o.eval.quadrature).value;
            value = 1.0 - c;
            return c;
        }
        value = evaluate(B, kernel, p, o.eval).value;
        return 1.0 - value;
    };
    std::vector<double> cx(xs.size()), vx(xs.size()), cy(ys.size()), vy(ys.size());
    parallel_for(xs.size(), [&](std::size_t i) { cx[i] = comp(X, xs[i], vx[i]); });
    parallel_for(ys.size(), [&](std::size_t i) { cy[i] = comp(Y, ys[i], vy[i]); });
    rep.min_x_value = *std::min_element(vx.begin(), vx.end());
    rep.max_y_value = *std::max_element(vy.begin(), vy.end());
    rep.margin = *std::min_element(cy.begin(), cy.end()) - *std::max_element(cx.begin(), cx.end());
    rep.holds = rep.margin > 0.0;
    return rep;
}

}  // namespace pc
