#pragma once

#include "pc/body.hpp"

#include <string>
#include <vector>

namespace pc {

/// Intersection of the half-spaces {z : z.v_i <= l(v_i)}.
struct UnfoldedRegion {
    int dim = 2;
    std::vector<Point> directions;
    std::vector<double> thresholds;
    int direction_count = 0;
    /// Safety margin already added to every threshold (half the line spacing).
    double margin = 0.0;
};

struct FoldingOptions {
    /// Spacing of the parallel probe lines; 0 picks diam/1024 (m = 2) or diam/96 (m = 3).
    double line_spacing = 0.0;
};

/// Smallest a such that reflecting the cap {x.v > b} across {x.v = b} stays inside the body for
/// every b >= a. Computed as the largest midpoint of the in-body runs on lines parallel to v.
double folding_threshold(const Body& body, const Point& v, const FoldingOptions& options = {});

UnfoldedRegion unfolded_region(const Body& body, int direction_count, const FoldingOptions& options = {});

bool uf_contains(const UnfoldedRegion& region, const Point& x, double slack);

/// Vertices (counter-clockwise) of the region clipped to the box (m = 2).
std::vector<Point> uf_polygon(const UnfoldedRegion& region, const Box& clip);

/// CSV rows "v_1,...,v_m,l" with a header line.
std::string uf_csv(const UnfoldedRegion& region);

}  // namespace pc
