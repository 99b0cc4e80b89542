#include "pc/unfolded.hpp"

#include "pc/errors.hpp"
#include "pc/format.hpp"
#include "pc/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace pc {

namespace {

std::vector<Point> box_corners(const Box& b) {
    const int m = b.dim();
    std::vector<Point> corners;
    for (int mask = 0; mask < (1 << m); ++mask) {
        Point c(m);
        for (int a = 0; a < m; ++a) c[a] = (mask >> a) & 1 ? b.hi[a] : b.lo[a];
        corners.push_back(c);
    }
    return corners;
}

}  // namespace

double folding_threshold(const Body& body, const Point& v, const FoldingOptions& options) {
    const int m = body.dim();
    if (v.dim() != m || std::abs(norm(v) - 1.0) > 1e-9) {
        throw Error(ErrorCode::NonUnitDirection, "folding direction must be a unit vector of R^m");
    }
    if (m > 3) throw Error(ErrorCode::UnsupportedDimension, "folding thresholds need m in {2, 3}");
    const double spacing =
        options.line_spacing > 0.0 ? options.line_spacing : body.diameter() / (m == 2 ? 1024.0 : 96.0);

    // Orthonormal basis of the complement of v.
    std::vector<Point> basis;
    basis.push_back(orthogonal_unit(v));
    if (m == 3) {
        const Point& a = basis[0];
        basis.push_back(Point{v[1] * a[2] - v[2] * a[1], v[2] * a[0] - v[0] * a[2], v[0] * a[1] - v[1] * a[0]});
    }
    const auto corners = box_corners(body.bounding_box());
    double smin = kInf;
    std::vector<double> wlo(basis.size(), kInf), whi(basis.size(), -kInf);
    for (const auto& c : corners) {
        smin = std::min(smin, dot(c, v));
        for (std::size_t i = 0; i < basis.size(); ++i) {
            wlo[i] = std::min(wlo[i], dot(c, basis[i]));
            whi[i] = std::max(whi[i], dot(c, basis[i]));
        }
    }
    const double start = smin - 1.0;
    std::vector<int> counts;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        counts.push_back(static_cast<int>(std::ceil((whi[i] - wlo[i]) / spacing)) + 1);
    }
    double best = -kInf;
    std::vector<Interval> runs;
    const int n1 = counts.size() > 1 ? counts[1] : 1;
    for (int i = 0; i < counts[0]; ++i) {
        for (int j = 0; j < n1; ++j) {
            Point p = start * v + std::min(wlo[0] + i * spacing, whi[0]) * basis[0];
            if (m == 3) p += std::min(wlo[1] + j * spacing, whi[1]) * basis[1];
            body.ray_intervals(p, v, runs);
            for (const auto& r : runs) best = std::max(best, start + 0.5 * (r.t0 + r.t1));
        }
    }
    if (!std::isfinite(best)) throw Error(ErrorCode::EmptyRegion, "no probe line meets the body");
    return best + 0.5 * spacing;
}

UnfoldedRegion unfolded_region(const Body& body, int direction_count, const FoldingOptions& options) {
    const int m = body.dim();
    const int min_count = m == 2 ? 16 : 128;
    if (m > 3) throw Error(ErrorCode::UnsupportedDimension, "unfolded regions need m in {2, 3}");
    if (direction_count < min_count) {
        throw Error(ErrorCode::InvalidRange,
                    "direction_count must be at least " + std::to_string(min_count) + " in dimension " + std::to_string(m));
    }
    UnfoldedRegion region;
    region.dim = m;
    region.direction_count = direction_count;
    region.directions = sample_directions(m, direction_count);
    region.thresholds.assign(region.directions.size(), 0.0);
    region.margin =
        0.5 * (options.line_spacing > 0.0 ? options.line_spacing : body.diameter() / (m == 2 ? 1024.0 : 96.0));
    parallel_for(region.directions.size(), [&](std::size_t i) {
        region.thresholds[i] = folding_threshold(body, region.directions[i], options);
    });
    return region;
}

bool uf_contains(const UnfoldedRegion& region, const Point& x, double slack) {
    if (slack < 0.0) throw Error(ErrorCode::InvalidRange, "slack must be >= 0");
    for (std::size_t i = 0; i < region.directions.size(); ++i) {
        if (dot(x, region.directions[i]) > region.thresholds[i] + slack) return false;
    }
    return true;
}

std::vector<Point> uf_polygon(const UnfoldedRegion& region, const Box& clip) {
    if (region.dim != 2) throw Error(ErrorCode::UnsupportedDimension, "uf_polygon needs m = 2");
    std::vector<Point> poly = {Point{clip.lo[0], clip.lo[1]}, Point{clip.hi[0], clip.lo[1]},
                               Point{clip.hi[0], clip.hi[1]}, Point{clip.lo[0], clip.hi[1]}};
    for (std::size_t i = 0; i < region.directions.size() && !poly.empty(); ++i) {
        const Point& v = region.directions[i];
        const double l = region.thresholds[i];
        std::vector<Point> next;
        for (std::size_t k = 0; k < poly.size(); ++k) {
            const Point& a = poly[k];
            const Point& b = poly[(k + 1) % poly.size()];
            const double fa = dot(a, v) - l, fb = dot(b, v) - l;
            if (fa <= 0.0) next.push_back(a);
            if ((fa < 0.0 && fb > 0.0) || (fa > 0.0 && fb < 0.0)) {
                next.push_back(a + (fa / (fa - fb)) * (b - a));
            }
        }
        poly = std::move(next);
    }
    return poly;
}

std::string uf_csv(const UnfoldedRegion& region) {
    std::ostringstream os;
    for (int a = 0; a < region.dim; ++a) os << "v" << (a + 1) << ",";
    os << "l\n";
    for (std::size_t i = 0; i < region.directions.size(); ++i) {
        for (int a = 0; a < region.dim; ++a) os << fmt17(region.directions[i][a]) << ",";
        os << fmt17(region.thresholds[i]) << "\n";
    }
    return os.str();
}

}  // namespace pc
