#pragma once

#include <array>
#include <cmath>
#include <initializer_list>
#include <limits>
#include <span>
#include <vector>

namespace pc {

inline constexpr int kMaxDim = 8;
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// A point or vector of R^m, m <= kMaxDim, stored inline so that hot loops never allocate.
class Point {
public:
    Point() = default;
    explicit Point(int dim);
    Point(std::initializer_list<double> coords);
    explicit Point(std::span<const double> coords);

    static Point zero(int dim) { return Point(dim); }
    static Point unit(int dim, int axis);

    int dim() const noexcept { return dim_; }
    double& operator[](int i) noexcept { return c_[static_cast<std::size_t>(i)]; }
    double operator[](int i) const noexcept { return c_[static_cast<std::size_t>(i)]; }
    std::span<const double> coords() const noexcept {
        return {c_.data(), static_cast<std::size_t>(dim_)};
    }
    std::vector<double> to_vector() const { return {c_.begin(), c_.begin() + dim_}; }

    bool finite() const noexcept;

    Point& operator+=(const Point& o) noexcept;
    Point& operator-=(const Point& o) noexcept;
    Point& operator*=(double s) noexcept;

    friend Point operator+(Point a, const Point& b) noexcept { return a += b; }
    friend Point operator-(Point a, const Point& b) noexcept { return a -= b; }
    friend Point operator*(Point a, double s) noexcept { return a *= s; }
    friend Point operator*(double s, Point a) noexcept { return a *= s; }
    friend Point operator-(Point a) noexcept { return a *= -1.0; }
    friend bool operator==(const Point& a, const Point& b) noexcept;

private:
    std::array<double, kMaxDim> c_{};
    int dim_ = 0;
};

double dot(const Point& a, const Point& b) noexcept;
double norm(const Point& a) noexcept;
double distance(const Point& a, const Point& b) noexcept;
Point normalized(const Point& a);

/// Reflection of x in the hyperplane {z : z.v = b}, |v| = 1.
Point reflect(const Point& x, const Point& v, double b) noexcept;

/// Any unit vector orthogonal to the unit vector a.
Point orthogonal_unit(const Point& a);

/// sigma_n(S^n): n-dimensional measure of the unit sphere in R^{n+1}; sigma_0(S^0) = 2.
double sphere_measure(int n);

/// Lebesgue measure of the unit ball of R^m.
double ball_volume(int m);

/// Closed form of the integral of sin^n over [a, b], by the usual reduction formula.
double sin_power_integral(int n, double a, double b);

/// Unit directions used to sample S^{m-1}: equal angles on the circle, a Fibonacci lattice on S^2.
std::vector<Point> sample_directions(int dim, int count);

struct Box {
    Point lo;
    Point hi;

    int dim() const noexcept { return lo.dim(); }
    Point center() const { return 0.5 * (lo + hi); }
    double longest_edge() const;
    bool contains(const Point& x) const noexcept;
    double volume() const;
};

}  // namespace pc
