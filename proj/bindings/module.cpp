#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "thickthin/dynamics.hpp"
#include "thickthin/geometry.hpp"
#include "thickthin/params.hpp"
#include "thickthin/render.hpp"
#include "thickthin/verify.hpp"

namespace py = pybind11;
using namespace thickthin;

PYBIND11_MODULE(_core, m) {
    m.doc() = "non-autonomous quadratic iteration toolkit";

    py::class_<ParameterSequence>(m, "ParameterSequence")
        .def_property_readonly("depth", &ParameterSequence::depth)
        .def_property_readonly("total_time", &ParameterSequence::total_time)
        .def("b", &ParameterSequence::b, py::arg("k"))
        .def("a", &ParameterSequence::a, py::arg("k"))
        .def("block_exponent", &ParameterSequence::block_exponent, py::arg("k"))
        .def("checkpoint", &ParameterSequence::checkpoint, py::arg("k"))
        .def("coefficient_at", &ParameterSequence::coefficient_at, py::arg("t"))
        .def_property_readonly("advisories", &ParameterSequence::advisories);

    m.def(
        "build_sequence",
        [](const std::vector<double>& b, const std::vector<int>& overrides) {
            PlanPolicy policy;
            policy.exponent_override = overrides;
            return build_sequence(b, policy);
        },
        py::arg("b"), py::arg("m_override") = std::vector<int>{});
    m.def("derive_a", &derive_a, py::arg("b"));
    m.def("min_block_exponent", &min_block_exponent, py::arg("k"), py::arg("b"));

    m.def(
        "compose",
        [](const ParameterSequence& seq, long m, long n, Complex z) {
            const OrbitPoint p = compose(seq, m, n, z);
            return py::make_tuple(p.value, p.overflow);
        },
        py::arg("seq"), py::arg("m"), py::arg("n"), py::arg("z"));

    m.def(
        "classify",
        [](const ParameterSequence& seq, Complex z, long m, int horizon) {
            const Classification c = classify(seq, z, m, horizon);
            std::string itin;
            for (Side s : c.itinerary) itin += s == Side::G ? 'G' : 'H';
            py::dict d;
            d["survived"] = c.survived();
            d["escape_stage"] = c.escape_stage;
            d["itinerary"] = itin;
            d["first_stage"] = c.first_stage;
            d["anomaly"] = c.anomaly;
            d["survived_depth"] = c.survived_depth;
            return d;
        },
        py::arg("seq"), py::arg("z"), py::arg("m"), py::arg("horizon"));
    m.def("survival_depth", &survival_depth, py::arg("seq"), py::arg("z"), py::arg("m"),
          py::arg("kmax"));

    m.def(
        "radii",
        [](double b) {
            const Radii r = radii(b);
            return py::make_tuple(r.r, r.s, r.t, r.u);
        },
        py::arg("b"));
    m.def("forward_image_radius", &forward_image_radius, py::arg("b"), py::arg("R"));
    m.def(
        "annulus_modulus",
        [](const ParameterSequence& seq, int k) { return annulus_A(seq, k).modulus(); },
        py::arg("seq"), py::arg("k"));
    m.def("branch_derivative", &branch_derivative, py::arg("seq"), py::arg("m"), py::arg("k"),
          py::arg("z"), py::arg("code"));
    m.def("diameter_bound", &diameter_bound, py::arg("seq"), py::arg("m"), py::arg("k"));
    m.def(
        "pull_back_annulus",
        [](const ParameterSequence& seq, long m, int k, const std::string& code) {
            const PulledBackAnnulus ann = pull_back_annulus(seq, m, k, code);
            py::dict d;
            d["stage"] = ann.stage;
            d["code"] = ann.code;
            d["modulus"] = ann.modulus;
            d["measured_diameter"] = ann.measured_diameter;
            d["max_gap"] = ann.max_gap;
            d["inner"] = ann.inner;
            d["outer"] = ann.outer;
            return d;
        },
        py::arg("seq"), py::arg("m"), py::arg("k"), py::arg("code"));

    m.def(
        "run_checks",
        [](const ParameterSequence& seq, std::uint64_t seed, const std::string& only) {
            py::list out;
            for (const CheckReport& r : run_all(seq, seed, only)) {
                py::dict d;
                d["name"] = r.name;
                d["status"] = CheckReport::status_name(r.status);
                d["margin"] = r.margin;
                d["samples"] = r.samples;
                out.append(d);
            }
            return out;
        },
        py::arg("seq"), py::arg("seed") = 1, py::arg("only") = std::string{});
}
