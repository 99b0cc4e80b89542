#include "pc/body.hpp"

#include "pc/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>

namespace pc {

namespace {

double cross2(const Point& a, const Point& b) { return a[0] * b[1] - a[1] * b[0]; }

Point p2(double x, double y) { return Point{x, y}; }

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

[[noreturn]] void invalid_shape(const std::string& field, const std::string& why) {
    throw Error(ErrorCode::InvalidShape, field + " " + why);
}

double segment_distance(const Point& x, const Point& a, const Point& b) {
    const Point e = b - a;
    const double len2 = dot(e, e);
    double s = len2 > 0.0 ? dot(x - a, e) / len2 : 0.0;
    s = std::clamp(s, 0.0, 1.0);
    return distance(x, a + s * e);
}

double polygon_boundary_distance(const std::vector<Point>& poly, const Point& x) {
    double d = kInf;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        d = std::min(d, segment_distance(x, poly[i], poly[(i + 1) % n]));
    }
    return d;
}

bool polygon_crossing_inside(const std::vector<Point>& poly, const Point& x) {
    bool inside = false;
    const std::size_t n = poly.size();
    for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
        const Point& a = poly[i];
        const Point& b = poly[j];
        if ((a[1] > x[1]) != (b[1] > x[1])) {
            const double xc = (b[0] - a[0]) * (x[1] - a[1]) / (b[1] - a[1]) + a[0];
            if (x[0] < xc) inside = !inside;
        }
    }
    return inside;
}

double polygon_signed_distance(const std::vector<Point>& poly, const Point& x) {
    const double d = polygon_boundary_distance(poly, x);
    return polygon_crossing_inside(poly, x) ? d : -d;
}

double polygon_area(const std::vector<Point>& poly) {
    double a = 0.0;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) a += cross2(poly[i], poly[(i + 1) % n]);
    return 0.5 * a;
}

bool segments_intersect(const Point& a, const Point& b, const Point& c, const Point& d) {
    const double d1 = cross2(b - a, c - a);
    const double d2 = cross2(b - a, d - a);
    const double d3 = cross2(d - c, a - c);
    const double d4 = cross2(d - c, b - c);
    if (((d1 > 0 && d2 < 0) || (d1 < 0 && d2 > 0)) && ((d3 > 0 && d4 < 0) || (d3 < 0 && d4 > 0))) {
        return true;
    }
    auto on_segment = [](const Point& p, const Point& q, const Point& r) {
        return std::min(p[0], q[0]) <= r[0] && r[0] <= std::max(p[0], q[0]) &&
               std::min(p[1], q[1]) <= r[1] && r[1] <= std::max(p[1], q[1]);
    };
    if (d1 == 0 && on_segment(a, b, c)) return true;
    if (d2 == 0 && on_segment(a, b, d)) return true;
    if (d3 == 0 && on_segment(c, d, a)) return true;
    if (d4 == 0 && on_segment(c, d, b)) return true;
    return false;
}

std::vector<Point> convex_hull(std::vector<Point> pts) {
    std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) {
        return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
    });
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    if (pts.size() < 3) return pts;
    std::vector<Point> hull(2 * pts.size());
    std::size_t k = 0;
    for (const auto& p : pts) {
        while (k >= 2 && cross2(hull[k - 1] - hull[k - 2], p - hull[k - 2]) <= 0) --k;
        hull[k++] = p;
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
        while (k >= t && cross2(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

bool in_convex_polygon(const std::vector<Point>& hull, const Point& x, double tol) {
    const std::size_t n = hull.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point e = hull[(i + 1) % n] - hull[i];
        const double len = norm(e);
        if (len == 0.0) continue;
        if (cross2(e, x - hull[i]) / len < -tol) return false;
    }
    return true;
}

void merge_intervals(std::vector<Interval>& iv) {
    std::sort(iv.begin(), iv.end(), [](const Interval& a, const Interval& b) { return a.t0 < b.t0; });
    std::size_t k = 0;
    for (std::size_t i = 0; i < iv.size(); ++i) {
        if (iv[i].t1 <= iv[i].t0) continue;
        if (k > 0 && iv[i].t0 <= iv[k - 1].t1 + 1e-13) {
            iv[k - 1].t1 = std::max(iv[k - 1].t1, iv[i].t1);
        } else {
            iv[k++] = iv[i];
        }
    }
    iv.resize(k);
}

/// Parameter range of the ray inside the closed ball; false when the ray misses it.
bool ray_ball(const Point& x, const Point& u, const Point& c, double r, double& t0, double& t1) {
    const Point w = x - c;
    const double b = dot(w, u);
    const double cc = dot(w, w) - r * r;
    const double disc = b * b - cc;
    if (disc <= 0.0) return false;
    const double s = std::sqrt(disc);
    // Stable roots of t^2 + 2bt + cc = 0.
    const double q = b > 0 ? -(b + s) : -(b - s);
    double a0 = q, a1 = q != 0.0 ? cc / q : -b;
    if (a0 > a1) std::swap(a0, a1);
    t0 = a0;
    t1 = a1;
    return t1 > 0.0;
}

void ray_polygon(const std::vector<Point>& poly, const Point& x, const Point& u,
                 std::vector<Interval>& out) {
    thread_local std::vector<double> ts;
    ts.clear();
    ts.push_back(0.0);
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = poly[i];
        const Point e = poly[(i + 1) % n] - a;
        const double den = cross2(u, e);
        if (std::abs(den) < 1e-300) continue;
        const Point ap = a - x;
        const double t = cross2(ap, e) / den;
        const double s = cross2(ap, u) / den;
        if (s < -1e-12 || s > 1.0 + 1e-12 || t <= 0.0) continue;
        ts.push_back(t);
    }
    std::sort(ts.begin(), ts.end());
    out.clear();
    for (std::size_t k = 0; k + 1 < ts.size(); ++k) {
        const double ta = ts[k], tb = ts[k + 1];
        if (tb - ta <= 1e-14 * (1.0 + tb)) continue;
        const Point mid = x + (0.5 * (ta + tb)) * u;
        if (polygon_crossing_inside(poly, mid)) {
            if (!out.empty() && out.back().t1 >= ta - 1e-14 * (1.0 + ta)) {
                out.back().t1 = tb;
            } else {
                out.push_back({ta, tb});
            }
        }
    }
}

std::vector<Point> dumbbell_profile(double eps) {
    std::vector<Point> v = {p2(-3, -1), p2(-1, -1), p2(-1, -eps), p2(1, -eps), p2(1, -1), p2(3, -1),
                            p2(3, 1),   p2(1, 1),   p2(1, eps),   p2(-1, eps), p2(-1, 1), p2(-3, 1)};
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

/// Squared Euclidean distance transform of a 1D sampled function (lower envelope of parabolas).
void edt_1d(const double* f, double* d, int n, std::vector<int>& v, std::vector<double>& z) {
    v.assign(static_cast<std::size_t>(n), 0);
    z.assign(static_cast<std::size_t>(n) + 1, 0.0);
    int k = 0;
    v[0] = 0;
    z[0] = -kInf;
    z[1] = kInf;
    for (int q = 1; q < n; ++q) {
        if (!std::isfinite(f[q])) continue;
        if (!std::isfinite(f[v[static_cast<std::size_t>(k)]])) {
            v[static_cast<std::size_t>(k)] = q;
            continue;
        }
        double s;
        while (true) {
            const int p = v[static_cast<std::size_t>(k)];
            s = ((f[q] + double(q) * q) - (f[p] + double(p) * p)) / (2.0 * (q - p));
            if (s <= z[static_cast<std::size_t>(k)] && k > 0) {
                --k;
            } else {
                break;
            }
        }
        ++k;
        v[static_cast<std::size_t>(k)] = q;
        z[static_cast<std::size_t>(k)] = s;
        z[static_cast<std::size_t>(k) + 1] = kInf;
    }
    if (!std::isfinite(f[v[0]])) {
        for (int q = 0; q < n; ++q) d[q] = kInf;
        return;
    }
    k = 0;
    for (int q = 0; q < n; ++q) {
        while (z[static_cast<std::size_t>(k) + 1] < q) ++k;
        const int p = v[static_cast<std::size_t>(k)];
        d[q] = (q - p) * double(q - p) + f[p];
    }
}

/// Squared distance (in cells) from every cell to the nearest cell where target is true.
std::vector<double> edt(const std::vector<std::uint8_t>& target, const std::array<int, 3>& n) {
    const std::size_t total = static_cast<std::size_t>(n[0]) * n[1] * n[2];
    std::vector<double> g(total);
    for (std::size_t i = 0; i < total; ++i) g[i] = target[i] ? 0.0 : kInf;
    std::vector<int> v;
    std::vector<double> z;
    const int longest = std::max({n[0], n[1], n[2]});
    std::vector<double> f(static_cast<std::size_t>(longest)), d(static_cast<std::size_t>(longest));
    const std::array<std::size_t, 3> stride = {1, static_cast<std::size_t>(n[0]),
                                               static_cast<std::size_t>(n[0]) * n[1]};
    for (int axis = 0; axis < 3; ++axis) {
        if (n[axis] == 1) continue;
        const int a1 = (axis + 1) % 3, a2 = (axis + 2) % 3;
        for (int i1 = 0; i1 < n[a1]; ++i1) {
            for (int i2 = 0; i2 < n[a2]; ++i2) {
                const std::size_t base = i1 * stride[a1] + i2 * stride[a2];
                for (int q = 0; q < n[axis]; ++q) f[q] = g[base + q * stride[axis]];
                edt_1d(f.data(), d.data(), n[axis], v, z);
                for (int q = 0; q < n[axis]; ++q) g[base + q * stride[axis]] = d[q];
            }
        }
    }
    return g;
}

}  // namespace

const char* to_string(ShapeKind kind) {
    switch (kind) {
        case ShapeKind::Ball: return "ball";
        case ShapeKind::Annulus: return "annulus";
        case ShapeKind::Dumbbell: return "dumbbell";
        case ShapeKind::Polygon: return "polygon";
        case ShapeKind::Voxel: return "voxel";
    }
    return "unknown";
}

void validate_cone_spec(const ConeSpec& cone) {
    if (!(cone.kappa > 0.0 && cone.kappa <= kPi)) {
        throw Error(ErrorCode::InvalidCone, "ConeSpec.kappa must lie in (0, pi], got " + fmt(cone.kappa));
    }
    if (!(cone.delta > 0.0)) {
        throw Error(ErrorCode::InvalidCone, "ConeSpec.delta must be positive, got " + fmt(cone.delta));
    }
}

struct Body::Impl {
    BodySpec spec;
    ShapeKind kind = ShapeKind::Ball;
    ConeSpec cone;
    bool has_cone = false;
    bool cone_default = false;
    double diam = 0.0;
    double inrad = 0.0;
    double vol = 0.0;
    Box bbox;
    double cell = 0.0;
    bool convex = false;
    Point centroid;
    std::vector<Point> poly;  // polygon, or dumbbell meridian profile
    std::vector<Point> hull;  // planar convex hull (polygons, planar voxels)
    // voxel data
    Point vox_origin;
    double vox_cell = 0.0;
    std::array<int, 3> vox_dims{1, 1, 1};
    std::vector<std::uint8_t> occ;
    std::vector<float> sdf;
    Box vox_box;

    std::size_t vox_index(int i, int j, int k) const {
        return static_cast<std::size_t>(i) +
               static_cast<std::size_t>(vox_dims[0]) *
                   (static_cast<std::size_t>(j) + static_cast<std::size_t>(vox_dims[1]) * k);
    }
    bool vox_cell_of(const Point& x, std::array<int, 3>& idx) const {
        bool in = true;
        for (int a = 0; a < 3; ++a) {
            if (a >= spec.dim) {
                idx[a] = 0;
                continue;
            }
            const double f = std::floor((x[a] - vox_origin[a]) / vox_cell);
            if (f < 0 || f >= vox_dims[a]) in = false;
            idx[a] = static_cast<int>(std::clamp(f, 0.0, double(vox_dims[a] - 1)));
        }
        return in;
    }
    Point vox_center(const std::array<int, 3>& idx) const {
        Point c(spec.dim);
        for (int a = 0; a < spec.dim; ++a) c[a] = vox_origin[a] + (idx[a] + 0.5) * vox_cell;
        return c;
    }

    bool contains(const Point& x) const;
    double signed_distance(const Point& x) const;
    void ray_intervals(const Point& x, const Point& u, std::vector<Interval>& out) const;
    void init_voxel_sdf();
};

bool Body::Impl::contains(const Point& x) const {
    const int m = spec.dim;
    switch (kind) {
        case ShapeKind::Ball: {
            const auto& s = std::get<BallShape>(spec.shape);
            return distance(x, s.center) <= s.radius;
        }
        case ShapeKind::Annulus: {
            const auto& s = std::get<AnnulusShape>(spec.shape);
            const double r = distance(x, s.center);
            return r >= s.r_in && r <= s.r_out;
        }
        case ShapeKind::Dumbbell: {
            const double eps = std::get<DumbbellShape>(spec.shape).epsilon;
            const double ax = std::abs(x[0]);
            if (ax > 3.0) return false;
            double rho2 = 0.0;
            for (int i = 1; i < m; ++i) rho2 += x[i] * x[i];
            const double r = ax >= 1.0 ? 1.0 : eps;
            return rho2 <= r * r;
        }
        case ShapeKind::Polygon:
            return polygon_crossing_inside(poly, x) || polygon_boundary_distance(poly, x) <= 1e-13 * diam;
        case ShapeKind::Voxel: {
            std::array<int, 3> idx{};
            if (!vox_cell_of(x, idx)) return false;
            return occ[vox_index(idx[0], idx[1], idx[2])] != 0;
        }
    }
    return false;
}

double Body::Impl::signed_distance(const Point& x) const {
    const int m = spec.dim;
    switch (kind) {
        case ShapeKind::Ball: {
            const auto& s = std::get<BallShape>(spec.shape);
            return s.radius - distance(x, s.center);
        }
        case ShapeKind::Annulus: {
            const auto& s = std::get<AnnulusShape>(spec.shape);
            const double r = distance(x, s.center);
            if (r < s.r_in) return r - s.r_in;
            if (r > s.r_out) return s.r_out - r;
            return std::min(r - s.r_in, s.r_out - r);
        }
        case ShapeKind::Dumbbell: {
            double rho2 = 0.0;
            for (int i = 1; i < m; ++i) rho2 += x[i] * x[i];
            const double rho = m == 2 ? x[1] : std::sqrt(rho2);
            return polygon_signed_distance(poly, p2(x[0], rho));
        }
        case ShapeKind::Polygon:
            return polygon_signed_distance(poly, x);
        case ShapeKind::Voxel: {
            std::array<int, 3> idx{};
            const bool in = vox_cell_of(x, idx);
            const double s = sdf[vox_index(idx[0], idx[1], idx[2])];
            if (in) return s;
            Point clamped = x;
            for (int a = 0; a < m; ++a) {
                clamped[a] = std::clamp(x[a], vox_origin[a], vox_origin[a] + vox_dims[a] * vox_cell);
            }
            return std::min(s, 0.0) - distance(x, clamped);
        }
    }
    return 0.0;
}

void Body::Impl::ray_intervals(const Point& x, const Point& u, std::vector<Interval>& out) const {
    out.clear();
    const int m = spec.dim;
    switch (kind) {
        case ShapeKind::Ball: {
            const auto& s = std::get<BallShape>(spec.shape);
            double t0, t1;
            if (ray_ball(x, u, s.center, s.radius, t0, t1)) out.push_back({std::max(t0, 0.0), t1});
            return;
        }
        case ShapeKind::Annulus: {
            const auto& s = std::get<AnnulusShape>(spec.shape);
            double a0, a1;
            if (!ray_ball(x, u, s.center, s.r_out, a0, a1)) return;
            a0 = std::max(a0, 0.0);
            double b0, b1;
            if (ray_ball(x, u, s.center, s.r_in, b0, b1)) {
                b0 = std::max(b0, 0.0);
                if (b0 > a0) out.push_back({a0, b0});
                if (a1 > b1) out.push_back({std::max(b1, a0), a1});
            } else {
                out.push_back({a0, a1});
            }
            return;
        }
        case ShapeKind::Dumbbell: {
            if (m == 2) {
                ray_polygon(poly, x, u, out);
                return;
            }
            const double eps = std::get<DumbbellShape>(spec.shape).epsilon;
            const double pieces[3][3] = {{-3, -1, 1}, {-1, 1, eps}, {1, 3, 1}};
            double a = 0.0, b = 0.0, c = 0.0;
            for (int i = 1; i < m; ++i) {
                a += u[i] * u[i];
                b += 2.0 * x[i] * u[i];
                c += x[i] * x[i];
            }
            for (const auto& pc : pieces) {
                double lo = 0.0, hi = kInf;
                if (std::abs(u[0]) < 1e-300) {
                    if (x[0] < pc[0] || x[0] > pc[1]) continue;
                } else {
                    double s0 = (pc[0] - x[0]) / u[0], s1 = (pc[1] - x[0]) / u[0];
                    if (s0 > s1) std::swap(s0, s1);
                    lo = std::max(lo, s0);
                    hi = std::min(hi, s1);
                }
                const double cc = c - pc[2] * pc[2];
                if (a < 1e-300) {
                    if (cc > 0.0) continue;
                } else {
                    const double disc = b * b - 4.0 * a * cc;
                    if (disc <= 0.0) continue;
                    const double sq = std::sqrt(disc);
                    lo = std::max(lo, (-b - sq) / (2.0 * a));
                    hi = std::min(hi, (-b + sq) / (2.0 * a));
                }
                if (hi > lo) out.push_back({lo, hi});
            }
            merge_intervals(out);
            return;
        }
        case ShapeKind::Polygon:
            ray_polygon(poly, x, u, out);
            return;
        case ShapeKind::Voxel: {
            // March the ray through the grid box at a quarter cell.
            double lo = 0.0, hi = kInf;
            for (int i = 0; i < m; ++i) {
                const double bl = vox_origin[i], bh = vox_origin[i] + vox_dims[i] * vox_cell;
                if (std::abs(u[i]) < 1e-300) {
                    if (x[i] < bl || x[i] > bh) return;
                    continue;
                }
                double s0 = (bl - x[i]) / u[i], s1 = (bh - x[i]) / u[i];
                if (s0 > s1) std::swap(s0, s1);
                lo = std::max(lo, s0);
                hi = std::min(hi, s1);
            }
            if (!(hi > lo)) return;
            const double step = 0.25 * vox_cell;
            bool inside = false;
            double start = 0.0;
            for (double t = lo; t <= hi + step; t += step) {
                const double tt = std::min(t, hi);
                const bool now = t <= hi && contains(x + tt * u);
                if (now && !inside) start = tt;
                if (!now && inside) out.push_back({start, tt});
                inside = now;
                if (t > hi) break;
            }
            if (inside) out.push_back({start, hi});
            return;
        }
    }
}

void Body::Impl::init_voxel_sdf() {
    // Pad by one empty cell so the grid border counts as exterior.
    std::array<int, 3> pd = vox_dims;
    const int m = spec.dim;
    for (int a = 0; a < m; ++a) pd[a] += 2;
    const std::size_t total = static_cast<std::size_t>(pd[0]) * pd[1] * pd[2];
    std::vector<std::uint8_t> in(total, 0), out(total, 1);
    const int off2 = m == 3 ? 1 : 0;
    for (int k = 0; k < vox_dims[2]; ++k) {
        for (int j = 0; j < vox_dims[1]; ++j) {
            for (int i = 0; i < vox_dims[0]; ++i) {
                const std::size_t p = static_cast<std::size_t>(i + 1) +
                                      static_cast<std::size_t>(pd[0]) *
                                          (static_cast<std::size_t>(j + 1) +
                                           static_cast<std::size_t>(pd[1]) * (k + off2));
                const bool o = occ[vox_index(i, j, k)] != 0;
                in[p] = o;
                out[p] = !o;
            }
        }
    }
    const auto d_out = edt(out, pd);
    const auto d_in = edt(in, pd);
    sdf.assign(occ.size(), 0.0f);
    for (int k = 0; k < vox_dims[2]; ++k) {
        for (int j = 0; j < vox_dims[1]; ++j) {
            for (int i = 0; i < vox_dims[0]; ++i) {
                const std::size_t p = static_cast<std::size_t>(i + 1) +
                                      static_cast<std::size_t>(pd[0]) *
                                          (static_cast<std::size_t>(j + 1) +
                                           static_cast<std::size_t>(pd[1]) * (k + off2));
                const std::size_t q = vox_index(i, j, k);
                sdf[q] = occ[q] ? static_cast<float>((std::sqrt(d_out[p]) - 0.5) * vox_cell)
                                : static_cast<float>(-(std::sqrt(d_in[p]) - 0.5) * vox_cell);
            }
        }
    }
}

namespace {

void check_point(const Point& p, int dim, const std::string& field) {
    if (p.dim() != dim) invalid_shape(field, "must have dimension " + std::to_string(dim));
    if (!p.finite()) invalid_shape(field, "must be finite");
}

double polygon_inradius(const Body::Impl& impl) {
    // Seed a pattern search from the best points of a coarse grid.
    const Box& b = impl.bbox;
    const int n = 96;
    std::vector<std::pair<double, Point>> seeds;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const Point x = p2(b.lo[0] + (i + 0.5) * (b.hi[0] - b.lo[0]) / n,
                               b.lo[1] + (j + 0.5) * (b.hi[1] - b.lo[1]) / n);
            seeds.emplace_back(impl.signed_distance(x), x);
        }
    }
    std::partial_sort(seeds.begin(), seeds.begin() + 8, seeds.end(),
                      [](const auto& a, const auto& c) { return a.first > c.first; });
    double best = 0.0;
    Point best_point = seeds[0].second;
    for (int s = 0; s < 8; ++s) {
        Point x = seeds[static_cast<std::size_t>(s)].second;
        double fx = seeds[static_cast<std::size_t>(s)].first;
        double step = b.longest_edge() / n;
        while (step > 1e-13 * b.longest_edge()) {
            bool moved = false;
            for (int d = 0; d < 8; ++d) {
                const double ang = d * kPi / 4.0;
                const Point y = x + step * p2(std::cos(ang), std::sin(ang));
                const double fy = impl.signed_distance(y);
                if (fy > fx) {
                    x = y;
                    fx = fy;
                    moved = true;
                }
            }
            if (!moved) step *= 0.5;
        }
        if (fx > best) {
            best = fx;
            best_point = x;
        }
    }
    return best;
}

std::vector<Point> boundary_samples(const Body::Impl& impl, int target) {
    std::vector<Point> pts;
    const int m = impl.spec.dim;
    auto sphere = [&](const Point& c, double r, int count) {
        if (m == 2) {
            for (int i = 0; i < count; ++i) {
                const double t = 2.0 * kPi * i / count;
                pts.push_back(c + r * p2(std::cos(t), std::sin(t)));
            }
        } else if (m == 3) {
            for (const auto& d : sample_directions(3, count)) pts.push_back(c + r * d);
        } else {
            // Coordinate-plane circles are enough to exercise the rotationally symmetric shapes.
            for (int a = 0; a < m; ++a) {
                for (int i = 0; i < count / m; ++i) {
                    const double t = 2.0 * kPi * i / (count / m);
                    Point p = c;
                    p[a] += r * std::cos(t);
                    p[(a + 1) % m] += r * std::sin(t);
                    pts.push_back(p);
                }
            }
        }
    };
    auto polyline = [](const std::vector<Point>& poly, double spacing) {
        std::vector<Point> out;
        const std::size_t n = poly.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Point a = poly[i], e = poly[(i + 1) % n] - a;
            const int k = std::max(2, static_cast<int>(std::ceil(norm(e) / spacing)));
            for (int s = 0; s < k; ++s) out.push_back(a + (double(s) / k) * e);
        }
        return out;
    };
    switch (impl.kind) {
        case ShapeKind::Ball: {
            const auto& s = std::get<BallShape>(impl.spec.shape);
            sphere(s.center, s.radius, target);
            break;
        }
        case ShapeKind::Annulus: {
            const auto& s = std::get<AnnulusShape>(impl.spec.shape);
            sphere(s.center, s.r_in, target / 2);
            sphere(s.center, s.r_out, target / 2);
            break;
        }
        case ShapeKind::Polygon:
            pts = polyline(impl.poly, impl.diam / target * 4.0);
            break;
        case ShapeKind::Dumbbell: {
            if (m == 2) {
                pts = polyline(impl.poly, impl.diam / target * 4.0);
                break;
            }
            // Rotate the upper half of the meridian profile about the x1 axis.
            const int az = 16;
            for (const auto& q : polyline(impl.poly, impl.diam / 64.0)) {
                if (q[1] < 0.0) continue;
                for (int k = 0; k < az; ++k) {
                    const double t = 2.0 * kPi * (k + 0.5 * (q[0] > 0)) / az;
                    pts.push_back(Point{q[0], q[1] * std::cos(t), q[1] * std::sin(t)});
                }
            }
            break;
        }
        case ShapeKind::Voxel:
            break;
    }
    return pts;
}

std::vector<Point> candidate_axes(int m, const Point& normal) {
    std::vector<Point> axes;
    if (m == 2) {
        const double base = std::atan2(normal[1], normal[0]);
        axes.push_back(normal);
        for (int k = 1; k <= 360; ++k) {
            for (int sgn : {1, -1}) {
                const double t = base + sgn * k * kPi / 360.0;
                axes.push_back(p2(std::cos(t), std::sin(t)));
            }
        }
        return axes;
    }
    const Point t1 = orthogonal_unit(normal);
    Point t2(m);
    if (m == 3) {
        t2 = Point{normal[1] * t1[2] - normal[2] * t1[1], normal[2] * t1[0] - normal[0] * t1[2],
                   normal[0] * t1[1] - normal[1] * t1[0]};
    } else {
        Point e = Point::unit(m, 0);
        if (std::abs(dot(e, normal)) > 0.9 || std::abs(dot(e, t1)) > 0.9) e = Point::unit(m, 1);
        if (std::abs(dot(e, normal)) > 0.9 || std::abs(dot(e, t1)) > 0.9) e = Point::unit(m, 2);
        t2 = normalized(e - dot(e, normal) * normal - dot(e, t1) * t1);
    }
    axes.push_back(normal);
    for (int tilt = 1; tilt <= 18; ++tilt) {
        const double tau = tilt * 5.0 * kPi / 180.0;
        for (int k = 0; k < 32; ++k) {
            const double psi = 2.0 * kPi * k / 32.0;
            axes.push_back(std::cos(tau) * normal +
                           std::sin(tau) * (std::cos(psi) * t1 + std::sin(psi) * t2));
        }
    }
    if (m == 3) {
        for (const auto& d : sample_directions(3, 400)) axes.push_back(d);
    }
    return axes;
}

bool cone_outside(const Body::Impl& impl, const Point& p, const Point& axis, double half, double height) {
    const int m = impl.spec.dim;
    static const double radii[] = {1e-4, 1e-3, 1e-2, 0.0625, 0.125, 0.1875, 0.25, 0.3125, 0.375,
                                   0.4375, 0.5, 0.5625, 0.625, 0.6875, 0.75, 0.8125, 0.875, 0.9375, 1.0};
    std::vector<Point> dirs;
    if (m == 2) {
        for (int s = -4; s <= 4; ++s) {
            const double a = half * s / 4.0;
            const double c = std::cos(a), sn = std::sin(a);
            dirs.push_back(p2(c * axis[0] - sn * axis[1], sn * axis[0] + c * axis[1]));
        }
    } else {
        const Point t1 = orthogonal_unit(axis);
        Point t2(m);
        if (m == 3) {
            t2 = Point{axis[1] * t1[2] - axis[2] * t1[1], axis[2] * t1[0] - axis[0] * t1[2],
                       axis[0] * t1[1] - axis[1] * t1[0]};
        } else {
            t2 = orthogonal_unit(t1);
            t2 = normalized(t2 - dot(t2, axis) * axis);
        }
        dirs.push_back(axis);
        for (double frac : {0.5, 1.0}) {
            for (int k = 0; k < 8; ++k) {
                const double psi = 2.0 * kPi * k / 8.0;
                dirs.push_back(std::cos(frac * half) * axis +
                               std::sin(frac * half) * (std::cos(psi) * t1 + std::sin(psi) * t2));
            }
        }
    }
    for (const auto& d : dirs) {
        for (double r : radii) {
            if (impl.contains(p + (r * height) * d)) return false;
        }
    }
    return true;
}

ConeValidation validate_cone_impl(const Body::Impl& impl, const ConeSpec& cone) {
    ConeValidation result;
    const int m = impl.spec.dim;
    const double shrink = m == 2 ? 0.95 : 0.85;
    const double half = 0.5 * cone.kappa * shrink;
    const double height = std::min(cone.delta, 2.0 * impl.diam);
    const auto pts = boundary_samples(impl, m == 2 ? 720 : 600);
    result.boundary_samples = static_cast<int>(pts.size());
    const double h = 1e-7 * impl.diam;
    for (const auto& p : pts) {
        Point grad(m);
        for (int a = 0; a < m; ++a) {
            Point e = Point::unit(m, a);
            grad[a] = impl.signed_distance(p + h * e) - impl.signed_distance(p - h * e);
        }
        Point normal = norm(grad) > 0 ? normalized(-grad) : Point::unit(m, 0);
        bool ok = false;
        for (const auto& axis : candidate_axes(m, normal)) {
            if (cone_outside(impl, p, axis, half, height)) {
                ok = true;
                break;
            }
        }
        if (!ok) {
            if (result.failures == 0) result.worst_point = p;
            ++result.failures;
        }
    }
    result.ok = result.failures == 0;
    return result;
}

}  // namespace

std::optional<ConeSpec> default_cone(const BodySpec& spec) {
    return std::visit(
        [&](const auto& s) -> std::optional<ConeSpec> {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, BallShape>) {
                return ConeSpec{kPi, kInf};
            } else if constexpr (std::is_same_v<T, AnnulusShape>) {
                return ConeSpec{kPi / 2.0, s.r_in / 2.0};
            } else if constexpr (std::is_same_v<T, DumbbellShape>) {
                return ConeSpec{kPi / 2.0, 1.0};
            } else if constexpr (std::is_same_v<T, PolygonShape>) {
                // Convex polygons admit the half-space cone at every boundary point.
                const auto& v = s.vertices;
                const std::size_t n = v.size();
                if (n < 3) return std::nullopt;
                int sign = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    const double c = cross2(v[(i + 1) % n] - v[i], v[(i + 2) % n] - v[(i + 1) % n]);
                    if (std::abs(c) < 1e-14) continue;
                    const int sg = c > 0 ? 1 : -1;
                    if (sign == 0) sign = sg;
                    if (sg != sign) return std::nullopt;
                }
                return ConeSpec{kPi, kInf};
            } else {
                return std::nullopt;
            }
        },
        spec.shape);
}

Body Body::build(const BodySpec& spec_in) {
    auto impl = std::make_shared<Impl>();
    impl->spec = spec_in;
    BodySpec& spec = impl->spec;
    const int m = spec.dim;
    if (m < 2 || m > kMaxDim) {
        throw Error(ErrorCode::UnsupportedDimension,
                    "Body.dimension must lie in [2, " + std::to_string(kMaxDim) + "], got " + std::to_string(m));
    }
    if (spec.grid_resolution < 4) invalid_shape("grid_resolution", "must be at least 4");

    std::visit(
        [&](auto& s) {
            using T = std::decay_t<decltype(s)>;
            if constexpr (std::is_same_v<T, BallShape>) {
                impl->kind = ShapeKind::Ball;
                if (s.center.dim() == 0) s.center = Point(m);
                check_point(s.center, m, "Ball.center");
                if (!(s.radius > 0.0) || !std::isfinite(s.radius)) invalid_shape("Ball.radius", "must be positive");
                impl->diam = 2.0 * s.radius;
                impl->inrad = s.radius;
                impl->vol = ball_volume(m) * std::pow(s.radius, m);
                impl->centroid = s.center;
                Point r(m);
                for (int i = 0; i < m; ++i) r[i] = s.radius;
                impl->bbox = {s.center - r, s.center + r};
                impl->convex = true;
            } else if constexpr (std::is_same_v<T, AnnulusShape>) {
                impl->kind = ShapeKind::Annulus;
                if (s.center.dim() == 0) s.center = Point(m);
                check_point(s.center, m, "Annulus.center");
                if (!(s.r_in > 0.0)) invalid_shape("Annulus.r_in", "must be positive");
                if (!(s.r_out > s.r_in) || !std::isfinite(s.r_out)) invalid_shape("Annulus.r_out", "must exceed r_in");
                impl->diam = 2.0 * s.r_out;
                impl->inrad = 0.5 * (s.r_out - s.r_in);
                impl->vol = ball_volume(m) * (std::pow(s.r_out, m) - std::pow(s.r_in, m));
                impl->centroid = s.center;
                Point r(m);
                for (int i = 0; i < m; ++i) r[i] = s.r_out;
                impl->bbox = {s.center - r, s.center + r};
            } else if constexpr (std::is_same_v<T, DumbbellShape>) {
                impl->kind = ShapeKind::Dumbbell;
                if (m > 3) throw Error(ErrorCode::UnsupportedDimension, "Dumbbell requires m in {2, 3}");
                if (!(s.epsilon > 0.0 && s.epsilon <= 1.0)) invalid_shape("Dumbbell.epsilon", "must lie in (0, 1]");
                impl->poly = dumbbell_profile(s.epsilon);
                impl->diam = 2.0 * std::sqrt(10.0);
                impl->inrad = 1.0;
                impl->vol = ball_volume(m - 1) * (4.0 + 2.0 * std::pow(s.epsilon, m - 1));
                impl->centroid = Point(m);
                Point lo(m), hi(m);
                lo[0] = -3.0;
                hi[0] = 3.0;
                for (int i = 1; i < m; ++i) {
                    lo[i] = -1.0;
                    hi[i] = 1.0;
                }
                impl->bbox = {lo, hi};
                impl->convex = s.epsilon == 1.0;
            } else if constexpr (std::is_same_v<T, PolygonShape>) {
                impl->kind = ShapeKind::Polygon;
                if (m != 2) throw Error(ErrorCode::UnsupportedDimension, "Polygon requires m = 2");
                auto& v = s.vertices;
                if (v.size() < 3) invalid_shape("Polygon.vertices", "needs at least 3 vertices");
                for (const auto& p : v) check_point(p, 2, "Polygon.vertices");
                const std::size_t n = v.size();
                for (std::size_t i = 0; i < n; ++i) {
                    if (v[i] == v[(i + 1) % n]) invalid_shape("Polygon.vertices", "contain a repeated vertex");
                    for (std::size_t j = i + 1; j < n; ++j) {
                        if (j == i + 1 || (i == 0 && j == n - 1)) continue;
                        if (segments_intersect(v[i], v[(i + 1) % n], v[j], v[(j + 1) % n])) {
                            invalid_shape("Polygon.vertices", "do not form a simple polygon");
                        }
                    }
                }
                double area = polygon_area(v);
                if (std::abs(area) < 1e-14) invalid_shape("Polygon.vertices", "enclose zero area");
                if (area < 0) {
                    std::reverse(v.begin(), v.end());
                    area = -area;
                }
                impl->poly = v;
                impl->vol = area;
                Point c(2);
                for (std::size_t i = 0; i < n; ++i) {
                    const double w = cross2(v[i], v[(i + 1) % n]);
                    c += (w / (6.0 * area)) * (v[i] + v[(i + 1) % n]);
                }
                impl->centroid = c;
                Point lo = v[0], hi = v[0];
                double diam = 0.0;
                for (const auto& p : v) {
                    for (int a = 0; a < 2; ++a) {
                        lo[a] = std::min(lo[a], p[a]);
                        hi[a] = std::max(hi[a], p[a]);
                    }
                    for (const auto& q : v) diam = std::max(diam, distance(p, q));
                }
                impl->bbox = {lo, hi};
                impl->diam = diam;
                impl->hull = convex_hull(v);
                impl->convex = default_cone(spec).has_value();
            } else {
                impl->kind = ShapeKind::Voxel;
                if (m > 3) throw Error(ErrorCode::UnsupportedDimension, "VoxelGrid requires m in {2, 3}");
                check_point(s.origin, m, "VoxelGrid.origin");
                if (!(s.cell > 0.0)) invalid_shape("VoxelGrid.cell_size", "must be positive");
                if (m == 2) s.dims[2] = 1;
                for (int a = 0; a < 3; ++a) {
                    if (s.dims[a] < 1) invalid_shape("VoxelGrid.dims", "must be positive");
                }
                const std::size_t total = static_cast<std::size_t>(s.dims[0]) * s.dims[1] * s.dims[2];
                if (s.occupancy.size() != total) invalid_shape("VoxelGrid.occupancy", "size does not match dims");
                impl->vox_origin = s.origin;
                impl->vox_cell = s.cell;
                impl->vox_dims = s.dims;
                impl->occ = s.occupancy;
                std::size_t count = 0;
                Point lo(m), hi(m), csum(m);
                for (int a = 0; a < m; ++a) {
                    lo[a] = kInf;
                    hi[a] = -kInf;
                }
                std::vector<Point> corners;
                for (int k = 0; k < s.dims[2]; ++k) {
                    for (int j = 0; j < s.dims[1]; ++j) {
                        for (int i = 0; i < s.dims[0]; ++i) {
                            if (!impl->occ[impl->vox_index(i, j, k)]) continue;
                            ++count;
                            const Point c = impl->vox_center({i, j, k});
                            csum += c;
                            for (int a = 0; a < m; ++a) {
                                lo[a] = std::min(lo[a], c[a] - 0.5 * s.cell);
                                hi[a] = std::max(hi[a], c[a] + 0.5 * s.cell);
                            }
                            if (m == 2) {
                                for (int cx = 0; cx < 2; ++cx) {
                                    for (int cy = 0; cy < 2; ++cy) {
                                        corners.push_back(p2(c[0] + (cx - 0.5) * s.cell, c[1] + (cy - 0.5) * s.cell));
                                    }
                                }
                            }
                        }
                    }
                }
                if (count == 0) invalid_shape("VoxelGrid.occupancy", "must not be empty");
                impl->vol = count * std::pow(s.cell, m);
                impl->centroid = csum * (1.0 / count);
                impl->bbox = {lo, hi};
                impl->vox_box = impl->bbox;
                impl->init_voxel_sdf();
                double inrad = 0.0;
                for (float v : impl->sdf) inrad = std::max(inrad, double(v));
                impl->inrad = inrad;
                if (m == 2) {
                    impl->hull = convex_hull(corners);
                    double d = 0.0;
                    for (const auto& p : impl->hull) {
                        for (const auto& q : impl->hull) d = std::max(d, distance(p, q));
                    }
                    impl->diam = d;
                } else {
                    // Extreme occupied cells along many directions, then a pair search among them.
                    std::vector<Point> extreme;
                    for (const auto& dir : sample_directions(3, 2000)) {
                        double best = -kInf;
                        Point arg;
                        for (int k = 0; k < s.dims[2]; ++k) {
                            for (int j = 0; j < s.dims[1]; ++j) {
                                for (int i = 0; i < s.dims[0]; ++i) {
                                    if (!impl->occ[impl->vox_index(i, j, k)]) continue;
                                    const Point c = impl->vox_center({i, j, k});
                                    const double v = dot(c, dir);
                                    if (v > best) {
                                        best = v;
                                        arg = c;
                                    }
                                }
                            }
                        }
                        extreme.push_back(arg);
                    }
                    double d = 0.0;
                    for (const auto& p : extreme) {
                        for (const auto& q : extreme) d = std::max(d, distance(p, q));
                    }
                    impl->diam = d + std::sqrt(3.0) * s.cell;
                }
                if (impl->inrad <= 0.0) invalid_shape("VoxelGrid.occupancy", "has zero inradius");
            }
        },
        spec.shape);

    impl->cell = impl->kind == ShapeKind::Voxel ? impl->vox_cell
                                                : impl->bbox.longest_edge() / spec.grid_resolution;
    if (impl->kind == ShapeKind::Polygon) impl->inrad = polygon_inradius(*impl);

    if (spec.cone) {
        validate_cone_spec(*spec.cone);
        impl->cone = *spec.cone;
        impl->has_cone = true;
    } else if (auto def = default_cone(spec)) {
        impl->cone = *def;
        impl->has_cone = true;
        impl->cone_default = true;
    }
    if (impl->has_cone && spec.validate_cone && impl->kind != ShapeKind::Voxel) {
        const auto report = validate_cone_impl(*impl, impl->cone);
        if (!report.ok) {
            std::ostringstream os;
            os << "ConeSpec (kappa=" << fmt(impl->cone.kappa) << ", delta=" << fmt(impl->cone.delta)
               << ") fails the exterior cone check at " << report.failures << " of "
               << report.boundary_samples << " boundary samples";
            throw Error(ErrorCode::InvalidCone, os.str());
        }
    }
    return Body(std::move(impl));
}

int Body::dim() const noexcept { return impl_->spec.dim; }
ShapeKind Body::kind() const noexcept { return impl_->kind; }
const BodySpec& Body::spec() const noexcept { return impl_->spec; }
bool Body::has_cone() const noexcept { return impl_->has_cone; }
const ConeSpec& Body::cone() const {
    if (!impl_->has_cone) {
        throw Error(ErrorCode::InvalidCone, "body has no cone guarantee; supply ConeSpec explicitly");
    }
    return impl_->cone;
}
bool Body::cone_is_default() const noexcept { return impl_->cone_default; }
bool Body::contains(const Point& x) const { return impl_->contains(x); }
double Body::signed_distance(const Point& x) const { return impl_->signed_distance(x); }
double Body::inradius() const noexcept { return impl_->inrad; }
double Body::diameter() const noexcept { return impl_->diam; }
double Body::volume() const noexcept { return impl_->vol; }
Point Body::centroid() const { return impl_->centroid; }
Box Body::bounding_box() const { return impl_->bbox; }
bool Body::is_convex() const noexcept { return impl_->convex; }
double Body::cell_size() const noexcept { return impl_->cell; }
double Body::cell_diagonal() const noexcept { return impl_->cell * std::sqrt(double(dim())); }

bool Body::inner_parallel_contains(double rho, const Point& x) const {
    if (rho < 0.0) throw Error(ErrorCode::NegativeRadius, "inner-parallel radius must be >= 0");
    return signed_distance(x) >= rho;
}

bool Body::in_convex_hull(const Point& x) const {
    const int m = dim();
    const double tol = 1e-12 * impl_->diam;
    switch (impl_->kind) {
        case ShapeKind::Ball:
            return contains(x);
        case ShapeKind::Annulus: {
            const auto& s = std::get<AnnulusShape>(impl_->spec.shape);
            return distance(x, s.center) <= s.r_out + tol;
        }
        case ShapeKind::Dumbbell: {
            double rho2 = 0.0;
            for (int i = 1; i < m; ++i) rho2 += x[i] * x[i];
            return std::abs(x[0]) <= 3.0 + tol && rho2 <= 1.0 + tol;
        }
        case ShapeKind::Polygon:
            return in_convex_polygon(impl_->hull, x, tol);
        case ShapeKind::Voxel:
            if (m == 2) return in_convex_polygon(impl_->hull, x, tol);
            return impl_->vox_box.contains(x);
    }
    return false;
}

void Body::ray_intervals(const Point& x, const Point& u, std::vector<Interval>& out) const {
    impl_->ray_intervals(x, u, out);
}

std::vector<double> Body::critical_angles(const Point& x) const {
    std::vector<double> angles;
    if (dim() != 2) return angles;
    auto circle = [&](const Point& c, double r) {
        const Point d = c - x;
        const double L = norm(d);
        if (L <= r) return;
        const double base = std::atan2(d[1], d[0]);
        const double w = std::asin(std::min(1.0, r / L));
        angles.push_back(base - w);
        angles.push_back(base + w);
        angles.push_back(base);
    };
    switch (impl_->kind) {
        case ShapeKind::Ball: {
            const auto& s = std::get<BallShape>(impl_->spec.shape);
            circle(s.center, s.radius);
            break;
        }
        case ShapeKind::Annulus: {
            const auto& s = std::get<AnnulusShape>(impl_->spec.shape);
            circle(s.center, s.r_in);
            circle(s.center, s.r_out);
            break;
        }
        case ShapeKind::Dumbbell:
        case ShapeKind::Polygon:
            for (const auto& v : impl_->poly) {
                const Point d = v - x;
                if (norm(d) > 0.0) angles.push_back(std::atan2(d[1], d[0]));
            }
            break;
        case ShapeKind::Voxel:
            break;
    }
    for (auto& a : angles) {
        a = std::fmod(a, 2.0 * kPi);
        if (a < 0) a += 2.0 * kPi;
    }
    std::sort(angles.begin(), angles.end());
    angles.erase(std::unique(angles.begin(), angles.end(),
                             [](double a, double b) { return std::abs(a - b) < 1e-12; }),
                 angles.end());
    return angles;
}

std::vector<std::vector<Point>> Body::outlines() const {
    if (dim() != 2) throw Error(ErrorCode::UnsupportedDimension, "outlines require m = 2");
    std::vector<std::vector<Point>> out;
    auto circle = [&](const Point& c, double r) {
        std::vector<Point> v;
        for (int i = 0; i < 256; ++i) {
            const double t = 2.0 * kPi * i / 256.0;
            v.push_back(c + r * p2(std::cos(t), std::sin(t)));
        }
        out.push_back(std::move(v));
    };
    switch (impl_->kind) {
        case ShapeKind::Ball: {
            const auto& s = std::get<BallShape>(impl_->spec.shape);
            circle(s.center, s.radius);
            break;
        }
        case ShapeKind::Annulus: {
            const auto& s = std::get<AnnulusShape>(impl_->spec.shape);
            circle(s.center, s.r_out);
            circle(s.center, s.r_in);
            break;
        }
        case ShapeKind::Dumbbell:
        case ShapeKind::Polygon:
            out.push_back(impl_->poly);
            break;
        case ShapeKind::Voxel:
            out.push_back(impl_->hull);
            break;
    }
    return out;
}

ConeValidation Body::check_cone(const ConeSpec& cone) const {
    validate_cone_spec(cone);
    if (impl_->kind == ShapeKind::Voxel) {
        throw Error(ErrorCode::InvalidShape, "cone checks need an analytic body");
    }
    return validate_cone_impl(*impl_, cone);
}

Body Body::voxelized(int resolution) const {
    const int m = dim();
    if (m > 3) throw Error(ErrorCode::UnsupportedDimension, "voxel grids require m in {2, 3}");
    if (resolution < 4) invalid_shape("grid_resolution", "must be at least 4");
    const Box b = bounding_box();
    const double cell = b.longest_edge() / resolution;
    VoxelShape v;
    v.cell = cell;
    v.origin = Point(m);
    for (int a = 0; a < 3; ++a) {
        if (a < m) {
            v.dims[a] = static_cast<int>(std::ceil((b.hi[a] - b.lo[a]) / cell - 1e-9)) + 2;
            v.origin[a] = 0.5 * (b.lo[a] + b.hi[a]) - 0.5 * v.dims[a] * cell;
        } else {
            v.dims[a] = 1;
        }
    }
    v.occupancy.assign(static_cast<std::size_t>(v.dims[0]) * v.dims[1] * v.dims[2], 0);
    Point c(m);
    for (int k = 0; k < v.dims[2]; ++k) {
        for (int j = 0; j < v.dims[1]; ++j) {
            for (int i = 0; i < v.dims[0]; ++i) {
                const int idx[3] = {i, j, k};
                for (int a = 0; a < m; ++a) c[a] = v.origin[a] + (idx[a] + 0.5) * cell;
                v.occupancy[static_cast<std::size_t>(i) +
                            static_cast<std::size_t>(v.dims[0]) * (j + static_cast<std::size_t>(v.dims[1]) * k)] =
                    contains(c) ? 1 : 0;
            }
        }
    }
    BodySpec spec;
    spec.dim = m;
    spec.shape = std::move(v);
    if (has_cone()) spec.cone = cone();
    spec.grid_resolution = resolution;
    return Body::build(spec);
}

namespace {

void put_u16(std::ostream& os, std::uint16_t v) {
    const char b[2] = {static_cast<char>(v & 0xff), static_cast<char>(v >> 8)};
    os.write(b, 2);
}

void put_f32(std::ostream& os, float f) {
    std::uint32_t u;
    std::memcpy(&u, &f, 4);
    const char b[4] = {static_cast<char>(u & 0xff), static_cast<char>((u >> 8) & 0xff),
                       static_cast<char>((u >> 16) & 0xff), static_cast<char>(u >> 24)};
    os.write(b, 4);
}

std::uint16_t get_u16(const unsigned char* p) { return static_cast<std::uint16_t>(p[0] | (p[1] << 8)); }

float get_f32(const unsigned char* p) {
    const std::uint32_t u = static_cast<std::uint32_t>(p[0]) | (static_cast<std::uint32_t>(p[1]) << 8) |
                            (static_cast<std::uint32_t>(p[2]) << 16) | (static_cast<std::uint32_t>(p[3]) << 24);
    float f;
    std::memcpy(&f, &u, 4);
    return f;
}

}  // namespace

void write_voxels(const Body& body, const std::string& path) {
    if (body.kind() != ShapeKind::Voxel) {
        throw Error(ErrorCode::InvalidShape, "write_voxels needs a voxel body; call voxelized() first");
    }
    const auto& v = std::get<VoxelShape>(body.spec().shape);
    for (int a = 0; a < 3; ++a) {
        if (v.dims[a] > 65535) throw Error(ErrorCode::IoError, "voxel dims exceed the 16-bit header field");
    }
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error(ErrorCode::IoError, "cannot open " + path + " for writing");
    os.write("PCBODY01", 8);
    os.put(static_cast<char>(body.dim()));
    os.put(0);
    for (int a = 0; a < 3; ++a) put_u16(os, static_cast<std::uint16_t>(v.dims[a]));
    for (int a = 0; a < 3; ++a) put_f32(os, a < body.dim() ? static_cast<float>(v.origin[a]) : 0.0f);
    put_f32(os, static_cast<float>(v.cell));
    std::vector<char> bits((v.occupancy.size() + 7) / 8, 0);
    for (std::size_t i = 0; i < v.occupancy.size(); ++i) {
        if (v.occupancy[i]) bits[i / 8] = static_cast<char>(bits[i / 8] | (1 << (i % 8)));
    }
    os.write(bits.data(), static_cast<std::streamsize>(bits.size()));
    if (!os) throw Error(ErrorCode::IoError, "failed writing " + path);
}

Body read_voxels(const std::string& path, std::optional<ConeSpec> cone) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error(ErrorCode::IoError, "cannot open " + path);
    std::vector<unsigned char> data((std::istreambuf_iterator<char>(is)), std::istreambuf_iterator<char>());
    if (data.size() < 32 || std::memcmp(data.data(), "PCBODY01", 8) != 0) {
        throw Error(ErrorCode::IoError, path + " is not a PCBODY01 voxel file");
    }
    VoxelShape v;
    const int m = data[8];
    if (m < 2 || m > 3) throw Error(ErrorCode::IoError, path + " declares unsupported dimension");
    for (int a = 0; a < 3; ++a) v.dims[a] = get_u16(&data[10 + 2 * a]);
    v.origin = Point(m);
    for (int a = 0; a < m; ++a) v.origin[a] = get_f32(&data[16 + 4 * a]);
    v.cell = get_f32(&data[28]);
    const std::size_t total = static_cast<std::size_t>(v.dims[0]) * v.dims[1] * v.dims[2];
    if (data.size() < 32 + (total + 7) / 8) throw Error(ErrorCode::IoError, path + " is truncated");
    v.occupancy.resize(total);
    for (std::size_t i = 0; i < total; ++i) v.occupancy[i] = (data[32 + i / 8] >> (i % 8)) & 1;
    BodySpec spec;
    spec.dim = m;
    spec.shape = std::move(v);
    spec.cone = cone;
    return Body::build(spec);
}

}  // namespace pc
