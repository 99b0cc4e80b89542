#include "pc/centers.hpp"
#include "pc/conebound.hpp"
#include "pc/config.hpp"
#include "pc/errors.hpp"
#include "pc/experiments.hpp"
#include "pc/potentials.hpp"
#include "pc/unfolded.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using nlohmann::json;

namespace {

pc::Point to_point(const std::vector<double>& v) { return pc::Point(std::span<const double>(v)); }

std::vector<std::vector<double>> to_lists(const std::vector<pc::Point>& pts) {
    std::vector<std::vector<double>> out;
    for (const auto& p : pts) out.push_back(p.to_vector());
    return out;
}

pc::Body body_from_json(const std::string& text) { return pc::build_body(pc::parse_body(json::parse(text))); }

pc::KernelSpec kernel_from_json(const std::string& text) { return pc::parse_kernel(json::parse(text)); }

}  // namespace

PYBIND11_MODULE(_potcenter, m) {
    m.doc() = "Potential centers: potentials, unfolded regions, cone bounds and center searches";

    py::register_exception<pc::Error>(m, "PotcenterError");
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const json::exception& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        }
    });

    py::class_<pc::Body>(m, "Body")
        .def_static("from_json", &body_from_json, py::arg("spec"))
        .def_property_readonly("dim", &pc::Body::dim)
        .def_property_readonly("kind", [](const pc::Body& b) { return std::string(pc::to_string(b.kind())); })
        .def_property_readonly("diameter", &pc::Body::diameter)
        .def_property_readonly("inradius", &pc::Body::inradius)
        .def_property_readonly("volume", &pc::Body::volume)
        .def_property_readonly("is_convex", &pc::Body::is_convex)
        .def_property_readonly("cone",
                               [](const pc::Body& b) -> py::object {
                                   if (!b.has_cone()) return py::none();
                                   return py::make_tuple(b.cone().kappa, b.cone().delta);
                               })
        .def("contains", [](const pc::Body& b, const std::vector<double>& x) { return b.contains(to_point(x)); })
        .def("signed_distance",
             [](const pc::Body& b, const std::vector<double>& x) { return b.signed_distance(to_point(x)); });

    m.def(
        "evaluate",
        [](const pc::Body& b, const std::string& kernel, const std::vector<double>& x, bool with_complement) {
            pc::EvalOptions o;
            o.with_complement = with_complement;
            const pc::KernelSpec k = kernel_from_json(kernel);
            const pc::Point p = to_point(x);
            pc::PotentialValue v;
            {
                py::gil_scoped_release release;
                v = pc::evaluate(b, k, p, o);
            }
            py::dict d;
            d["value"] = v.value;
            d["estimated_error"] = v.estimated_error;
            d["location_class"] = std::string(pc::to_string(v.location_class));
            d["renormalization_epsilon"] = v.renormalization_epsilon;
            d["complement"] = v.complement ? py::object(py::float_(*v.complement)) : py::object(py::none());
            return d;
        },
        py::arg("body"), py::arg("kernel"), py::arg("x"), py::arg("with_complement") = false);

    m.def(
        "find_centers",
        [](const pc::Body& b, const std::string& kernel, double resolution, bool exhaustive) {
            pc::CenterOptions o;
            o.resolution = resolution;
            const pc::KernelSpec k = kernel_from_json(kernel);
            pc::CenterSet cs;
            {
                py::gil_scoped_release release;
                cs = exhaustive ? pc::find_centers_exhaustive(b, k, o) : pc::find_centers(b, k, o);
            }
            py::dict d;
            d["points"] = to_lists(cs.points);
            d["values"] = cs.values;
            d["max_value"] = cs.max_value;
            d["plateau_tolerance"] = cs.plateau_tolerance;
            d["resolution"] = cs.resolution;
            d["argmax"] = cs.argmax.to_vector();
            d["search_region"] = cs.search_region;
            return d;
        },
        py::arg("body"), py::arg("kernel"), py::arg("resolution") = 0.0, py::arg("exhaustive") = false);

    m.def(
        "unfolded_region",
        [](const pc::Body& b, int count) {
            const pc::UnfoldedRegion uf = pc::unfolded_region(b, count);
            py::dict d;
            d["directions"] = to_lists(uf.directions);
            d["thresholds"] = uf.thresholds;
            d["margin"] = uf.margin;
            if (b.dim() == 2) d["polygon"] = to_lists(pc::uf_polygon(uf, b.bounding_box()));
            return d;
        },
        py::arg("body"), py::arg("direction_count") = 256);

    m.def(
        "r_tilde",
        [](double alpha, double kappa, double delta, double D, double R0, int dim) {
            return pc::r_tilde(pc::EParams{alpha, kappa, delta, D, R0, dim}).r_tilde;
        },
        py::arg("alpha"), py::arg("kappa"), py::arg("delta"), py::arg("D"), py::arg("R0"), py::arg("dim"));
    m.def("closed_form_root", &pc::closed_form_root, py::arg("D"), py::arg("R0"), py::arg("dim"),
          py::arg("tolerance") = 1e-14);
    m.def("lower_bound_r_tilde", &pc::lower_bound_r_tilde, py::arg("R0"), py::arg("dim"));
    m.def(
        "hausdorff_distance",
        [](const std::vector<std::vector<double>>& a, const std::vector<std::vector<double>>& b) {
            std::vector<pc::Point> pa, pb;
            for (const auto& v : a) pa.push_back(to_point(v));
            for (const auto& v : b) pb.push_back(to_point(v));
            return pc::hausdorff_distance(pa, pb);
        },
        py::arg("a"), py::arg("b"));

    m.def(
        "run_config",
        [](const std::string& config, const std::string& out_dir, bool svg) {
            const pc::ExperimentConfig cfg = pc::parse_config(json::parse(config));
            pc::RunResult r;
            {
                py::gil_scoped_release release;
                r = pc::run(cfg, out_dir, svg);
            }
            return py::make_tuple(r.result.dump(), r.files);
        },
        py::arg("config"), py::arg("out_dir"), py::arg("svg") = false);
}
