#pragma once

#include "pc/geometry.hpp"

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace pc {

/// Exterior cone guarantee: aperture kappa in (0, pi], height delta in (0, inf].
struct ConeSpec {
    double kappa = kPi;
    double delta = kInf;
};

void validate_cone_spec(const ConeSpec& cone);

struct BallShape {
    Point center;
    double radius = 1.0;
};

struct AnnulusShape {
    Point center;
    double r_in = 1.0;
    double r_out = 3.0;
};

/// ([-3,-1] x B) u ([-1,1] x epsilon B) u ([1,3] x B), with B the unit ball of R^{m-1}.
struct DumbbellShape {
    double epsilon = 0.2;
};

/// Simple polygon in the plane; orientation is normalized to counter-clockwise.
struct PolygonShape {
    std::vector<Point> vertices;
};

/// Occupancy grid with x fastest; dims[2] == 1 for m = 2.
struct VoxelShape {
    Point origin;
    double cell = 0.0;
    std::array<int, 3> dims{1, 1, 1};
    std::vector<std::uint8_t> occupancy;
};

using ShapeSpec = std::variant<BallShape, AnnulusShape, DumbbellShape, PolygonShape, VoxelShape>;

enum class ShapeKind { Ball, Annulus, Dumbbell, Polygon, Voxel };

const char* to_string(ShapeKind kind);

struct BodySpec {
    int dim = 2;
    ShapeSpec shape = BallShape{};
    std::optional<ConeSpec> cone;
    int grid_resolution = 512;
    /// Check the cone guarantee by sampling the boundary when the body is built.
    bool validate_cone = true;
};

/// Parameter interval [t0, t1] of the ray x + t u, t >= 0, lying in the body.
struct Interval {
    double t0;
    double t1;
};

struct ConeValidation {
    bool ok = true;
    int boundary_samples = 0;
    int failures = 0;
    Point worst_point;
};

/// Compact body of R^m. Immutable after construction; copies share state and all queries are
/// safe to call concurrently.
class Body {
public:
    static Body build(const BodySpec& spec);

    int dim() const noexcept;
    ShapeKind kind() const noexcept;
    const BodySpec& spec() const noexcept;
    bool has_cone() const noexcept;
    const ConeSpec& cone() const;
    bool cone_is_default() const noexcept;
    bool analytic() const noexcept { return kind() != ShapeKind::Voxel; }

    bool contains(const Point& x) const;
    /// dist(x, complement) inside, -dist(x, body) outside.
    double signed_distance(const Point& x) const;
    double inradius() const noexcept;
    double diameter() const noexcept;
    double volume() const noexcept;
    Point centroid() const;
    Box bounding_box() const;
    bool inner_parallel_contains(double rho, const Point& x) const;
    bool in_convex_hull(const Point& x) const;
    bool is_convex() const noexcept;

    /// Grid cell size along the longest bounding-box edge (the voxel size for voxel bodies).
    double cell_size() const noexcept;
    double cell_diagonal() const noexcept;

    /// Sorted, disjoint in-body parameter intervals along x + t u, t >= 0 (|u| = 1).
    void ray_intervals(const Point& x, const Point& u, std::vector<Interval>& out) const;

    /// Angles (m = 2) at which the ray interval structure seen from x can change.
    std::vector<double> critical_angles(const Point& x) const;

    /// Closed outline polygons used for plotting (m = 2).
    std::vector<std::vector<Point>> outlines() const;

    /// Occupancy grid sampled at cell centers, cells = resolution along the longest edge.
    Body voxelized(int resolution) const;

    ConeValidation check_cone(const ConeSpec& cone) const;

    struct Impl;

private:
    explicit Body(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

/// Default cone for a shape, or nullopt when none is known (non-convex polygons, voxels).
std::optional<ConeSpec> default_cone(const BodySpec& spec);

void write_voxels(const Body& body, const std::string& path);
Body read_voxels(const std::string& path, std::optional<ConeSpec> cone = std::nullopt);

}  // namespace pc
