#include "doctest.h"

#include "pc/errors.hpp"
#include "pc/unfolded.hpp"

#include <cmath>

using namespace pc;

namespace {

Body triangle() {
    BodySpec s;
    s.shape = PolygonShape{{Point{0.0, 0.0}, Point{4.0, 0.0}, Point{1.0, 1.0}}};
    s.cone = ConeSpec{kPi / 2, 0.3};
    return Body::build(s);
}

/// Uf of the obtuse triangle: bounded by y = 0, x = 2 and the angle bisectors at (4,0) and (1,1).
bool triangle_uf_contains(const Point& p, double slack) {
    const double tb = std::tan(0.5 * std::atan2(1.0, 3.0));
    const bool below_b = p[1] <= tb * (4.0 - p[0]) + slack;
    // Bisector at C = (1,1) between the edge directions to A and to B.
    const double ca = 1.0 / std::sqrt(2.0), cb = 1.0 / std::sqrt(10.0);
    const Point d = normalized(Point{-ca + 3.0 * cb, -ca - cb});
    const Point n{d[1], -d[0]};
    const double side = dot(Point{2.0, 0.0} - Point{1.0, 1.0}, n) > 0.0 ? 1.0 : -1.0;
    const bool right_of_c = side * dot(p - Point{1.0, 1.0}, n) >= -slack;
    return p[1] >= -slack && p[0] <= 2.0 + slack && below_b && right_of_c;
}

}  // namespace

TEST_CASE("disc folding thresholds pass through the center") {
    BodySpec s;
    s.shape = BallShape{Point{0.5, -0.25}, 1.0};
    const Body b = Body::build(s);
    for (double a : {0.0, 0.7, 2.0, 4.5}) {
        const Point v{std::cos(a), std::sin(a)};
        CHECK(folding_threshold(b, v) == doctest::Approx(dot(Point{0.5, -0.25}, v)).epsilon(0.005));
    }
    CHECK_THROWS_AS(folding_threshold(b, Point{1.0, 1.0}), Error);
}

TEST_CASE("dumbbell unfolded region is the segment (-2, 2) on the axis") {
    BodySpec s;
    s.shape = DumbbellShape{0.2};
    const Body b = Body::build(s);
    CHECK(folding_threshold(b, Point{1.0, 0.0}) == doctest::Approx(2.0).epsilon(0.005));
    CHECK(folding_threshold(b, Point{0.0, 1.0}) == doctest::Approx(0.0).epsilon(0.01));
    const UnfoldedRegion uf = unfolded_region(b, 64);
    CHECK(uf_contains(uf, Point{1.5, 0.0}, 0.0));
    CHECK(uf_contains(uf, Point{-1.9, 0.0}, 0.0));
    CHECK_FALSE(uf_contains(uf, Point{2.5, 0.0}, 0.0));
    CHECK_FALSE(uf_contains(uf, Point{0.0, 0.3}, 0.0));
}

TEST_CASE("annulus unfolded region is the inner disc of radius 2") {
    BodySpec s;
    s.shape = AnnulusShape{Point{0.0, 0.0}, 1.0, 3.0};
    const Body b = Body::build(s);
    CHECK(folding_threshold(b, Point{0.0, 1.0}) == doctest::Approx(2.0).epsilon(0.005));
}

TEST_CASE("obtuse triangle region matches the analytic quadrilateral") {
    const Body b = triangle();
    const UnfoldedRegion uf = unfolded_region(b, 1024);
    const double slack = 2.0 * uf.margin + 0.01;
    int checked = 0;
    for (int i = 0; i <= 80; ++i) {
        for (int j = 0; j <= 20; ++j) {
            const Point p{4.0 * i / 80.0, 1.0 * j / 20.0};
            if (!b.contains(p)) continue;
            ++checked;
            if (triangle_uf_contains(p, -slack)) CHECK(uf_contains(uf, p, 0.0));
            if (!triangle_uf_contains(p, slack)) CHECK_FALSE(uf_contains(uf, p, 0.0));
        }
    }
    CHECK(checked > 500);
    CHECK(uf_contains(uf, Point{5.0 / 3.0, 1.0 / 3.0}, 0.0));
    const auto poly = uf_polygon(uf, b.bounding_box());
    CHECK(poly.size() >= 4);
}

TEST_CASE("direction count floor and CSV") {
    const Body b = triangle();
    CHECK_THROWS_AS(unfolded_region(b, 8), Error);
    const UnfoldedRegion uf = unfolded_region(b, 16);
    const std::string csv = uf_csv(uf);
    CHECK(csv.rfind("v1,v2,l\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 17);
}
