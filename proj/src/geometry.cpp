#include "pc/geometry.hpp"

#include "pc/errors.hpp"

#include <algorithm>
#include <string>

namespace pc {

namespace {

void check_dim(int dim) {
    if (dim < 1 || dim > kMaxDim) {
        throw Error(ErrorCode::UnsupportedDimension,
                    "dimension " + std::to_string(dim) + " outside [1, " +
                        std::to_string(kMaxDim) + "]");
    }
}

}  // namespace

Point::Point(int dim) : dim_(dim) { check_dim(dim); }

Point::Point(std::initializer_list<double> coords) : dim_(static_cast<int>(coords.size())) {
    check_dim(dim_);
    std::copy(coords.begin(), coords.end(), c_.begin());
}

Point::Point(std::span<const double> coords) : dim_(static_cast<int>(coords.size())) {
    check_dim(dim_);
    std::copy(coords.begin(), coords.end(), c_.begin());
}

Point Point::unit(int dim, int axis) {
    Point p(dim);
    p[axis] = 1.0;
    return p;
}

bool Point::finite() const noexcept {
    for (int i = 0; i < dim_; ++i) {
        if (!std::isfinite(c_[static_cast<std::size_t>(i)])) return false;
    }
    return true;
}

Point& Point::operator+=(const Point& o) noexcept {
    for (int i = 0; i < dim_; ++i) (*this)[i] += o[i];
    return *this;
}

Point& Point::operator-=(const Point& o) noexcept {
    for (int i = 0; i < dim_; ++i) (*this)[i] -= o[i];
    return *this;
}

Point& Point::operator*=(double s) noexcept {
    for (int i = 0; i < dim_; ++i) (*this)[i] *= s;
    return *this;
}

bool operator==(const Point& a, const Point& b) noexcept {
    if (a.dim_ != b.dim_) return false;
    for (int i = 0; i < a.dim_; ++i) {
        if (a[i] != b[i]) return false;
    }
    return true;
}

double dot(const Point& a, const Point& b) noexcept {
    double s = 0.0;
    for (int i = 0; i < a.dim(); ++i) s += a[i] * b[i];
    return s;
}

double norm(const Point& a) noexcept { return std::sqrt(dot(a, a)); }

double distance(const Point& a, const Point& b) noexcept { return norm(a - b); }

Point normalized(const Point& a) {
    const double n = norm(a);
    if (!(n > 0.0)) throw Error(ErrorCode::NonUnitDirection, "cannot normalize a zero vector");
    return a * (1.0 / n);
}

Point reflect(const Point& x, const Point& v, double b) noexcept {
    return x - (2.0 * (dot(x, v) - b)) * v;
}

Point orthogonal_unit(const Point& a) {
    // Gram-Schmidt against the coordinate axis least aligned with a.
    int best = 0;
    for (int i = 1; i < a.dim(); ++i) {
        if (std::abs(a[i]) < std::abs(a[best])) best = i;
    }
    Point e = Point::unit(a.dim(), best);
    return normalized(e - dot(e, a) * a);
}

double sphere_measure(int n) {
    if (n < 0) throw Error(ErrorCode::InvalidRange, "sphere dimension must be >= 0");
    const double k = 0.5 * (n + 1);
    return 2.0 * std::pow(kPi, k) / std::tgamma(k);
}

double ball_volume(int m) { return sphere_measure(m - 1) / m; }

double sin_power_integral(int n, double a, double b) {
    if (n < 0) throw Error(ErrorCode::InvalidRange, "sin power must be >= 0");
    // I_n = -sin^{n-1} cos / n |_a^b + (n-1)/n I_{n-2}
    double even = b - a;                    // I_0
    double odd = std::cos(a) - std::cos(b); // I_1
    if (n == 0) return even;
    if (n == 1) return odd;
    const double sa = std::sin(a), sb = std::sin(b), ca = std::cos(a), cb = std::cos(b);
    double result = (n % 2 == 0) ? even : odd;
    for (int k = (n % 2 == 0) ? 2 : 3; k <= n; k += 2) {
        const double boundary = -(std::pow(sb, k - 1) * cb - std::pow(sa, k - 1) * ca) / k;
        result = boundary + (k - 1.0) / k * result;
    }
    return result;
}

std::vector<Point> sample_directions(int dim, int count) {
    std::vector<Point> dirs;
    dirs.reserve(static_cast<std::size_t>(count));
    if (dim == 2) {
        for (int i = 0; i < count; ++i) {
            const double t = 2.0 * kPi * i / count;
            dirs.push_back(Point{std::cos(t), std::sin(t)});
        }
    } else if (dim == 3) {
        const double golden = kPi * (3.0 - std::sqrt(5.0));
        for (int i = 0; i < count; ++i) {
            const double z = 1.0 - (2.0 * i + 1.0) / count;
            const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            const double t = golden * i;
            dirs.push_back(Point{r * std::cos(t), r * std::sin(t), z});
        }
    } else {
        throw Error(ErrorCode::UnsupportedDimension, "direction sampling needs m in {2, 3}");
    }
    return dirs;
}

double Box::longest_edge() const {
    double e = 0.0;
    for (int i = 0; i < dim(); ++i) e = std::max(e, hi[i] - lo[i]);
    return e;
}

bool Box::contains(const Point& x) const noexcept {
    for (int i = 0; i < dim(); ++i) {
        if (x[i] < lo[i] || x[i] > hi[i]) return false;
    }
    return true;
}

double Box::volume() const {
    double v = 1.0;
    for (int i = 0; i < dim(); ++i) v *= hi[i] - lo[i];
    return v;
}

}  // namespace pc
