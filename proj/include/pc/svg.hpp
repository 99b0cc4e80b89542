#pragma once

#include "pc/geometry.hpp"

#include <string>
#include <vector>

namespace pc {

struct SvgScene {
    std::vector<std::vector<Point>> outlines;
    /// Unfolded-region polygon; empty to omit.
    std::vector<Point> uf;
    std::vector<std::vector<Point>> center_sets;
    /// Optional extra markers drawn as crosses (planted controls and the like).
    std::vector<Point> controls;
};

/// Deterministic SVG text; every point must be planar (UnsupportedDimension otherwise).
std::string render_svg(const SvgScene& scene);

void emit_svg(const SvgScene& scene, const std::string& path);

}  // namespace pc
