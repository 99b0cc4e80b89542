#include "doctest.h"

#include "pc/errors.hpp"
#include "pc/format.hpp"
#include "pc/geometry.hpp"
#include "pc/parallel.hpp"

#include <atomic>
#include <cmath>

using namespace pc;

TEST_CASE("sphere measures") {
    CHECK(sphere_measure(0) == doctest::Approx(2.0));
    CHECK(sphere_measure(1) == doctest::Approx(2.0 * kPi));
    CHECK(sphere_measure(2) == doctest::Approx(4.0 * kPi));
    CHECK(sphere_measure(3) == doctest::Approx(2.0 * kPi * kPi));
    CHECK(ball_volume(2) == doctest::Approx(kPi));
    CHECK(ball_volume(3) == doctest::Approx(4.0 * kPi / 3.0));
}

TEST_CASE("sine power integrals") {
    CHECK(sin_power_integral(0, 0.3, 1.2) == doctest::Approx(0.9));
    CHECK(sin_power_integral(1, 0.0, kPi) == doctest::Approx(2.0));
    CHECK(sin_power_integral(2, 0.0, kPi) == doctest::Approx(kPi / 2.0));
    CHECK(sin_power_integral(3, 0.0, kPi / 2.0) == doctest::Approx(2.0 / 3.0));
    CHECK(sin_power_integral(5, 0.2, 1.1) == doctest::Approx(-sin_power_integral(5, 1.1, 0.2)));
}

TEST_CASE("point arithmetic and reflections") {
    Point a{1.0, 2.0}, b{3.0, -1.0};
    CHECK(dot(a, b) == doctest::Approx(1.0));
    CHECK(distance(a, b) == doctest::Approx(std::sqrt(13.0)));
    const Point r = reflect(Point{3.0, 1.0}, Point{1.0, 0.0}, 1.0);
    CHECK(r[0] == doctest::Approx(-1.0));
    CHECK(r[1] == doctest::Approx(1.0));
    CHECK_THROWS_AS(normalized(Point{0.0, 0.0}), Error);
    CHECK_THROWS_AS(Point(kMaxDim + 1), Error);
    const Point o = orthogonal_unit(Point{0.6, 0.8});
    CHECK(std::abs(dot(o, Point{0.6, 0.8})) < 1e-15);
    CHECK(norm(o) == doctest::Approx(1.0));
}

TEST_CASE("direction samples are unit vectors") {
    for (int m : {2, 3}) {
        const auto dirs = sample_directions(m, 100);
        REQUIRE(dirs.size() == 100);
        for (const auto& d : dirs) CHECK(norm(d) == doctest::Approx(1.0));
    }
}

TEST_CASE("fmt17 round-trips") {
    CHECK(fmt17(0.1) == "0.10000000000000001");
    CHECK(fmt17(kInf) == "inf");
    CHECK(fmt17(-kInf) == "-inf");
    CHECK(fmt17(std::nan("")) == "nan");
    CHECK(std::stod(fmt17(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("parallel_for visits every index once and rethrows") {
    std::vector<std::atomic<int>> seen(1000);
    parallel_for(seen.size(), [&](std::size_t i) { seen[i]++; });
    for (auto& s : seen) CHECK(s.load() == 1);
    CHECK_THROWS_AS(parallel_for(10, [](std::size_t i) {
                        if (i == 7) throw Error(ErrorCode::InvalidRange, "boom");
                    }),
                    Error);
}

TEST_CASE("error codes") {
    CHECK(std::string(to_string(ErrorCode::BracketingFailed)) == "BracketingFailed");
    CHECK(is_numerical(ErrorCode::BracketingFailed));
    CHECK(is_numerical(ErrorCode::NoSamplePoints));
    CHECK_FALSE(is_numerical(ErrorCode::InvalidCone));
    const Error e(ErrorCode::EmptySet, "x");
    CHECK(std::string(e.what()) == "EmptySet: x");
}
