#include "doctest.h"

#include "pc/config.hpp"
#include "pc/errors.hpp"
#include "pc/svg.hpp"

#include <cmath>

using namespace pc;
using nlohmann::json;

namespace {

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

TEST_CASE("defaults are filled in and round-trip") {
    const ExperimentConfig c = parse_config(json::parse(R"({"experiment": "centers"})"));
    CHECK(c.experiment == "centers");
    CHECK(std::holds_alternative<Renormalized>(c.kernel));
    CHECK(c.uf_directions == 256);
    CHECK(c.converge.parameters.size() == 7);
    CHECK(c.converge.parameters.back() == doctest::Approx(1.0 / 64));
    const json j = to_json(c);
    const ExperimentConfig again = parse_config(j);
    CHECK(to_json(again) == j);
}

TEST_CASE("bodies and kernels parse") {
    const json j = json::parse(R"({
        "experiment": "eval",
        "body": {"dim": 2, "shape": "polygon", "vertices": [[0,0],[4,0],[1,1]],
                 "cone": {"kappa": 1.5707963267948966, "delta": 0.3}},
        "kernel": {"type": "poisson", "h": 0.02},
        "points": [[1.5, 0.3]],
        "conebound": {"delta": "inf"}
    })");
    const ExperimentConfig c = parse_config(j);
    const Body b = build_body(c.body);
    CHECK(b.volume() == doctest::Approx(2.0));
    CHECK(b.cone().delta == doctest::Approx(0.3));
    CHECK(std::get<Poisson>(c.kernel).h == doctest::Approx(0.02));
    CHECK(std::isinf(c.conebound.delta));
    CHECK(to_json(c)["conebound"]["delta"] == "inf");
    REQUIRE(c.points.size() == 1);
}

TEST_CASE("malformed configs are rejected") {
    CHECK(code_of([] { parse_config(json::parse(R"({"experiment": "nope"})")); }) == ErrorCode::ConfigError);
    CHECK(code_of([] { parse_config(json::parse(R"({"bogus": 1})")); }) == ErrorCode::ConfigError);
    CHECK(code_of([] { parse_config(json::parse(R"({"kernel": {"type": "yukawa"}})")); }) == ErrorCode::ConfigError);
    CHECK(code_of([] { parse_config(json::parse(R"({"body": {"shape": "ball", "radius": "big"}})")); }) ==
          ErrorCode::ConfigError);
    // Cone values are checked when the body is built.
    const ExperimentConfig c = parse_config(json::parse(R"({"body": {"shape": "ball", "cone": {"kappa": 6.3}}})"));
    CHECK(code_of([&] { build_body(c.body); }) == ErrorCode::InvalidCone);
    CHECK(code_of([] { load_config("missing-config.json"); }) == ErrorCode::IoError);
}

TEST_CASE("SVG output is deterministic") {
    SvgScene s;
    s.outlines = {{Point{0.0, 0.0}, Point{1.0, 0.0}, Point{1.0, 1.0}}};
    s.center_sets = {{Point{0.5, 0.2}, Point{0.6, 0.3}}};
    const std::string a = render_svg(s), b = render_svg(s);
    CHECK(a == b);
    std::size_t n = 0;
    for (std::size_t pos = a.find("class=\"center\""); pos != std::string::npos; pos = a.find("class=\"center\"", pos + 1)) ++n;
    CHECK(n == 2);
    SvgScene empty;
    empty.outlines = s.outlines;
    CHECK(render_svg(empty).find("class=\"center\"") == std::string::npos);
    SvgScene bad;
    bad.center_sets = {{Point{0.0, 0.0, 0.0}}};
    CHECK(code_of([&] { render_svg(bad); }) == ErrorCode::UnsupportedDimension);
}
