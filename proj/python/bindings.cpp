#include "biloc/correlators.hpp"
#include "biloc/feasibility.hpp"
#include "biloc/inequalities.hpp"
#include "biloc/json_io.hpp"
#include "biloc/quantum.hpp"
#include "biloc/simulators.hpp"
#include "biloc/trilocality.hpp"

#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace biloc;

namespace {

Correlation from_json_text(const std::string& s) { return correlation_from_json(parse_json_text(s)); }

}  // namespace

PYBIND11_MODULE(_biloc, m)
{
    m.doc() = "Bilocality toolkit core";
    m.attr("__version__") = BILOC_VERSION;

    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);

    py::class_<Correlation>(m, "Correlation")
        .def_property_readonly("scenario", [](const Correlation& c) { return c.scenario().name(); })
        .def_property_readonly("data", [](const Correlation& c) { return c.data(); })
        .def("__call__", [](const Correlation& c, int x, int y, int z, int a, int b, int cc) { return c(x, y, z, a, b, cc); })
        .def("to_json", [](const Correlation& c) { return to_json(c).dump(); })
        .def_static("from_json", &from_json_text)
        .def("max_abs_diff", &Correlation::max_abs_diff);

    m.def("closed_form", [](const std::string& kind, double V) { return closed_form(closed_form_from_string(kind), V); },
          py::arg("kind"), py::arg("V") = 1.0);
    m.def("quantum_correlation", [](const std::string& kind) { return generate_correlation(standard_setup(closed_form_from_string(kind))); },
          "Closed-form setup evaluated through the density-matrix kernel");
    m.def("nonmaxent_correlation", [](double t1, double t2) { return generate_correlation(nonmaxent_setup(t1, t2).setup); });
    m.def("detection_family", &detection_family, py::arg("eta"), py::arg("V"));
    m.def("tradeoff_correlation", &tradeoff_correlation, py::arg("xi"), py::arg("V"));
    m.def("detection_vbiloc", &detection_vbiloc);

    m.def("ij", [](const Correlation& c) {
        IJValue v = ij(c);
        return py::dict(py::arg("scenario") = v.scenario, py::arg("I") = v.I, py::arg("J") = v.J,
                        py::arg("bilocal_lhs") = v.biloc_lhs());
    });
    m.def("bilocal_violated", [](const Correlation& c) { return bilocal_test(ij(c)).violated; });
    m.def("is_non_signaling", [](const Correlation& c) { return is_non_signaling(c).non_signaling; });
    m.def("ac_product_check", [](const Correlation& c) { return ac_product_check(c); });
    m.def("chsh_conditioned", &chsh_conditioned);

    m.def("heuristic_search", [](const Correlation& c, int restarts, std::uint64_t seed) {
        SearchConfig cfg;
        cfg.restarts = restarts;
        cfg.seed = seed;
        return to_json(heuristic_search(c, cfg)).dump();
    }, py::arg("correlation"), py::arg("restarts") = 64, py::arg("seed") = 0,
       "Certificate as a JSON string");
    m.def("certify", [](const Correlation& c, int depth) {
        RelaxConfig rc;
        rc.depth = depth;
        return to_json(certify_nonbilocal(c, rc)).dump();
    }, py::arg("correlation"), py::arg("depth") = RelaxConfig{}.depth);
    m.def("visibility_threshold", [](const std::function<Correlation(double)>& family, int restarts, double width) {
        ThresholdConfig tc;
        tc.search.restarts = restarts;
        tc.width = width;
        auto r = visibility_threshold(family, tc);
        return std::make_pair(r.lower, r.upper);
    }, py::arg("family"), py::arg("restarts") = 8, py::arg("width") = 1e-3);
    m.def("is_local", [](const Correlation& c) { return local_membership(c).local; });

    m.def("table_decomposition", [](const std::string& id, const py::dict& params) {
        TableParams p;
        for (auto [k, v] : params) {
            std::string key = py::str(k);
            double val = v.cast<double>();
            if (key == "I") p.I = val;
            else if (key == "J") p.J = val;
            else if (key == "K") p.K = val;
            else if (key == "L") p.L = val;
            else if (key == "M") p.M = val;
            else if (key == "eta") p.eta = val;
            else if (key == "V") p.V = val;
            else if (key == "xi") p.xi = val;
            else throw DomainError("unknown table parameter: " + key);
        }
        return to_json(table_decomposition(table_from_string(id), p)).dump();
    });

    m.def("simulate", [](const std::string& protocol, std::uint64_t n, std::uint64_t seed, BlochVector a, BlochVector c) {
        SimConfig cfg;
        cfg.samples = n;
        cfg.seed = seed;
        cfg.a = a;
        cfg.c = c;
        SimEstimate e = simulate(protocol_from_string(protocol), cfg);
        VisibilityEstimate v = estimate_visibility(e, a, c);
        return py::dict(py::arg("estimate") = to_json(e).dump(), py::arg("V_hat") = v.V_hat, py::arg("stderr") = v.stderr_);
    }, py::arg("protocol"), py::arg("n") = 1000000, py::arg("seed") = 0, py::arg("a") = BlochVector{0, 0, 1},
       py::arg("c") = BlochVector{0, 0, 1});

    m.def("triloc_demo", [] {
        BipartiteConditional c = four_to_conditional(example_quantum_fourpartite());
        return py::dict(py::arg("chsh") = conditional_chsh(c), py::arg("local") = bool(bipartite_local_model(c)));
    });
}
