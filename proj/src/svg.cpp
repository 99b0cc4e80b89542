#include "pc/svg.hpp"

#include "pc/errors.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace pc {

namespace {

constexpr double kSize = 800.0;
constexpr double kPad = 20.0;

/// Fixed-precision coordinates so output bytes do not depend on formatting state.
std::string f4(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

void check_planar(const std::vector<Point>& pts) {
    for (const auto& p : pts) {
        if (p.dim() != 2) throw Error(ErrorCode::UnsupportedDimension, "SVG output needs m = 2");
    }
}

struct View {
    double x0 = -1, y0 = -1, scale = 1;
    std::string x(double v) const { return f4(kPad + (v - x0) * scale); }
    std::string y(double v) const { return f4(kSize - kPad - (v - y0) * scale); }
};

std::string path_of(const View& view, const std::vector<Point>& poly) {
    std::ostringstream os;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        os << (i == 0 ? "M" : " L") << view.x(poly[i][0]) << "," << view.y(poly[i][1]);
    }
    os << " Z";
    return os.str();
}

}  // namespace

std::string render_svg(const SvgScene& scene) {
    double lo[2] = {kInf, kInf}, hi[2] = {-kInf, -kInf};
    auto grow = [&](const std::vector<Point>& pts) {
        check_planar(pts);
        for (const auto& p : pts) {
            for (int i = 0; i < 2; ++i) {
                lo[i] = std::min(lo[i], p[i]);
                hi[i] = std::max(hi[i], p[i]);
            }
        }
    };
    for (const auto& o : scene.outlines) grow(o);
    grow(scene.uf);
    for (const auto& c : scene.center_sets) grow(c);
    grow(scene.controls);
    View view;
    if (lo[0] <= hi[0]) {
        const double span = std::max({hi[0] - lo[0], hi[1] - lo[1], 1e-12});
        view.scale = (kSize - 2 * kPad) / span;
        view.x0 = lo[0] - 0.5 * (span - (hi[0] - lo[0]));
        view.y0 = lo[1] - 0.5 * (span - (hi[1] - lo[1]));
    }
    std::ostringstream os;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"800\" height=\"800\" viewBox=\"0 0 800 800\">\n";
    os << "<rect width=\"800\" height=\"800\" fill=\"white\"/>\n";
    os << "<g id=\"body\" fill=\"#dde6f0\" stroke=\"#234\" stroke-width=\"1.5\" fill-rule=\"evenodd\">\n";
    if (!scene.outlines.empty()) {
        os << "<path d=\"";
        for (std::size_t i = 0; i < scene.outlines.size(); ++i) os << (i ? " " : "") << path_of(view, scene.outlines[i]);
        os << "\"/>\n";
    }
    os << "</g>\n";
    if (!scene.uf.empty()) {
        os << "<g id=\"uf\" fill=\"#f5c04a\" fill-opacity=\"0.45\" stroke=\"#b07800\" stroke-width=\"1\">\n";
        os << "<path d=\"" << path_of(view, scene.uf) << "\"/>\n</g>\n";
    }
    static const char* colors[] = {"#c0392b", "#2471a3", "#1e8449", "#7d3c98"};
    for (std::size_t s = 0; s < scene.center_sets.size(); ++s) {
        os << "<g class=\"centers\" fill=\"" << colors[s % 4] << "\">\n";
        for (const auto& p : scene.center_sets[s]) {
            os << "<circle class=\"center\" cx=\"" << view.x(p[0]) << "\" cy=\"" << view.y(p[1]) << "\" r=\"3\"/>\n";
        }
        os << "</g>\n";
    }
    if (!scene.controls.empty()) {
        os << "<g class=\"controls\" stroke=\"black\" stroke-width=\"1.5\">\n";
        for (const auto& p : scene.controls) {
            const double cx = kPad + (p[0] - view.x0) * view.scale, cy = kSize - kPad - (p[1] - view.y0) * view.scale;
            os << "<path d=\"M" << f4(cx - 4) << "," << f4(cy - 4) << " L" << f4(cx + 4) << "," << f4(cy + 4) << " M"
               << f4(cx - 4) << "," << f4(cy + 4) << " L" << f4(cx + 4) << "," << f4(cy - 4) << "\"/>\n";
        }
        os << "</g>\n";
    }
    os << "</svg>\n";
    return os.str();
}

void emit_svg(const SvgScene& scene, const std::string& path) {
    const std::string text = render_svg(scene);
    std::ofstream f(path, std::ios::binary);
    if (!f) throw Error(ErrorCode::IoError, "cannot write " + path);
    f << text;
}

}  // namespace pc
