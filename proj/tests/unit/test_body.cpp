#include "doctest.h"

#include "pc/body.hpp"
#include "pc/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

using namespace pc;

namespace {

Body disc(double r = 1.0) {
    BodySpec s;
    s.shape = BallShape{Point{0.0, 0.0}, r};
    return Body::build(s);
}

Body triangle() {
    BodySpec s;
    s.shape = PolygonShape{{Point{0.0, 0.0}, Point{4.0, 0.0}, Point{1.0, 1.0}}};
    s.cone = ConeSpec{kPi / 2, 0.3};
    return Body::build(s);
}

Body dumbbell(double eps, int m = 2) {
    BodySpec s;
    s.dim = m;
    s.shape = DumbbellShape{eps};
    return Body::build(s);
}

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return ErrorCode::IoError;
}

}  // namespace

TEST_CASE("unit disc geometry") {
    const Body b = disc();
    CHECK(b.diameter() == doctest::Approx(2.0));
    CHECK(b.inradius() == doctest::Approx(1.0));
    CHECK(b.volume() == doctest::Approx(kPi));
    CHECK(b.is_convex());
    CHECK(b.contains(Point{0.5, 0.5}));
    CHECK_FALSE(b.contains(Point{0.8, 0.8}));
    CHECK(b.signed_distance(Point{0.25, 0.0}) == doctest::Approx(0.75));
    CHECK(b.signed_distance(Point{2.0, 0.0}) == doctest::Approx(-1.0));
    CHECK(b.cone_is_default());
    CHECK(b.cone().kappa == doctest::Approx(kPi));
    CHECK(std::isinf(b.cone().delta));
    CHECK(b.inner_parallel_contains(0.5, Point{0.4, 0.0}));
    CHECK_FALSE(b.inner_parallel_contains(0.5, Point{0.6, 0.0}));
    CHECK(code_of([&] { b.inner_parallel_contains(-0.1, Point{0.0, 0.0}); }) == ErrorCode::NegativeRadius);
}

TEST_CASE("3D ball") {
    BodySpec s;
    s.dim = 3;
    s.shape = BallShape{Point{1.0, 0.0, 0.0}, 2.0};
    const Body b = Body::build(s);
    CHECK(b.volume() == doctest::Approx(32.0 * kPi / 3.0));
    CHECK(b.signed_distance(Point{1.0, 0.0, 0.5}) == doctest::Approx(1.5));
    CHECK(code_of([&] { b.outlines(); }) == ErrorCode::UnsupportedDimension);
}

TEST_CASE("annulus distances and default cone") {
    BodySpec s;
    s.shape = AnnulusShape{Point{0.0, 0.0}, 1.0, 3.0};
    const Body b = Body::build(s);
    CHECK(b.signed_distance(Point{2.0, 0.0}) == doctest::Approx(1.0));
    CHECK(b.signed_distance(Point{0.5, 0.0}) == doctest::Approx(-0.5));
    CHECK(b.inradius() == doctest::Approx(1.0));
    CHECK(b.diameter() == doctest::Approx(6.0));
    CHECK_FALSE(b.is_convex());
    CHECK(b.cone().kappa == doctest::Approx(kPi / 2));
    CHECK(b.cone().delta == doctest::Approx(0.5));
    CHECK(b.in_convex_hull(Point{0.0, 0.0}));
}

TEST_CASE("obtuse triangle inradius and hull") {
    const Body b = triangle();
    CHECK(b.inradius() == doctest::Approx(4.0 / (4.0 + std::sqrt(2.0) + std::sqrt(10.0))).epsilon(1e-8));
    CHECK(b.diameter() == doctest::Approx(4.0));
    CHECK(b.volume() == doctest::Approx(2.0));
    CHECK(b.is_convex());
    const Point c = b.centroid();
    CHECK(c[0] == doctest::Approx(5.0 / 3.0));
    CHECK(c[1] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("dumbbell geometry") {
    const Body b = dumbbell(0.2);
    CHECK(b.diameter() == doctest::Approx(2.0 * std::sqrt(10.0)));
    CHECK(b.inradius() == doctest::Approx(1.0));
    CHECK_FALSE(b.is_convex());
    CHECK(b.in_convex_hull(Point{0.0, 0.9}));
    CHECK_FALSE(b.contains(Point{0.0, 0.9}));
    CHECK(b.cone().kappa == doctest::Approx(kPi / 2));
    CHECK(b.cone().delta == doctest::Approx(1.0));
    std::vector<Interval> runs;
    b.ray_intervals(Point{-2.0, 0.0}, Point{1.0, 0.0}, runs);
    REQUIRE(runs.size() == 1);
    CHECK(runs[0].t1 == doctest::Approx(5.0));
    b.ray_intervals(Point{0.0, -2.0}, Point{0.0, 1.0}, runs);
    REQUIRE(runs.size() == 1);
    CHECK(runs[0].t0 == doctest::Approx(1.8));
    CHECK(runs[0].t1 == doctest::Approx(2.2));
    b.ray_intervals(Point{2.0, 0.5}, Point{-1.0, 0.0}, runs);
    REQUIRE(runs.size() == 2);
    CHECK(runs[0].t1 == doctest::Approx(1.0));
    CHECK(runs[1].t0 == doctest::Approx(3.0));
    CHECK(runs[1].t1 == doctest::Approx(5.0));
}

TEST_CASE("3D dumbbell") {
    const Body b = dumbbell(0.2, 3);
    CHECK(b.signed_distance(Point{2.0, 0.0, 0.0}) == doctest::Approx(1.0));
    CHECK(b.signed_distance(Point{0.0, 0.0, 0.1}) == doctest::Approx(0.1));
    CHECK(b.volume() == doctest::Approx(2.0 * 2.0 * kPi + 2.0 * kPi * 0.04));
}

TEST_CASE("cone validation and errors") {
    BodySpec s;
    s.shape = BallShape{Point{0.0, 0.0}, 1.0};
    s.cone = ConeSpec{2.0 * kPi, 1.0};
    try {
        Body::build(s);
        FAIL("expected InvalidCone");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::InvalidCone);
        CHECK(std::string(e.what()).find("ConeSpec.kappa") != std::string::npos);
    }
    BodySpec t;
    t.shape = PolygonShape{{Point{0.0, 0.0}, Point{1.0, 1.0}, Point{1.0, 0.0}, Point{0.0, 1.0}}};
    CHECK(code_of([&] { Body::build(t); }) == ErrorCode::InvalidShape);
    BodySpec u;
    u.shape = BallShape{Point{0.0, 0.0}, -1.0};
    CHECK(code_of([&] { Body::build(u); }) == ErrorCode::InvalidShape);
    BodySpec v;
    v.shape = PolygonShape{{Point{0.0, 0.0}, Point{2.0, 0.0}, Point{2.0, 2.0}, Point{1.0, 0.5}, Point{0.0, 2.0}}};
    const Body nc = Body::build(v);
    CHECK_FALSE(nc.has_cone());
    CHECK(code_of([&] { nc.cone(); }) == ErrorCode::InvalidCone);
    // Convex bodies carry the half-space cone.
    BodySpec w;
    w.shape = PolygonShape{{Point{0.0, 0.0}, Point{4.0, 0.0}, Point{1.0, 1.0}}};
    w.cone = ConeSpec{kPi, kInf};
    CHECK_NOTHROW(Body::build(w));
    CHECK(triangle().check_cone(ConeSpec{kPi, 10.0}).ok);
}

TEST_CASE("voxel round trip") {
    const Body v = disc().voxelized(64);
    CHECK(v.kind() == ShapeKind::Voxel);
    CHECK(v.volume() == doctest::Approx(kPi).epsilon(0.01));
    CHECK(v.has_cone());
    const std::string path = "test_body_voxels.pcb";
    write_voxels(v, path);
    {
        std::ifstream f(path, std::ios::binary);
        char magic[8];
        f.read(magic, 8);
        CHECK(std::string(magic, 8) == "PCBODY01");
    }
    const Body r = read_voxels(path, ConeSpec{kPi, kInf});
    CHECK(r.volume() == doctest::Approx(v.volume()));
    CHECK(r.has_cone());
    CHECK(r.signed_distance(Point{0.0, 0.0}) == doctest::Approx(1.0).epsilon(0.05));
    CHECK(r.contains(Point{0.5, 0.0}));
    CHECK_FALSE(r.contains(Point{0.0, 1.1}));
    CHECK_FALSE(read_voxels(path).has_cone());
    std::remove(path.c_str());
    CHECK(code_of([] { read_voxels("does_not_exist.pcb"); }) == ErrorCode::IoError);
}
