// Python bindings for the main operations: codebook handling, the OFDM/CFO
// pieces, analytic BER evaluation, and full sweeps.

#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "scmaofdm/harness.hpp"
#include "scmaofdm/specfun.hpp"

namespace py = pybind11;
using namespace scmaofdm;

PYBIND11_MODULE(_scmaofdm, m) {
    m.doc() = "SCMA-OFDM link simulator and analytic BER evaluator";

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<NumericsError>(m, "NumericsError", PyExc_ArithmeticError);

    m.def("ici_coefficient", &ici_coefficient_diff, py::arg("diff"), py::arg("eps"),
          py::arg("n_sc"), "ICI leakage coefficient for subcarrier distance `diff`");
    m.def("awgn_ici_variance", &awgn_ici_variance, py::arg("eps"), py::arg("n_sc"),
          py::arg("users"), py::arg("res"),
          "residual ICI power per subcarrier over the Gaussian channel");
    m.def("q_function", &q_function, py::arg("x"));
    m.def("kummer_u", &kummer_u, py::arg("a"), py::arg("b"), py::arg("x"),
          "confluent hypergeometric function of the second kind");
    m.def("whittaker_w", &whittaker_w, py::arg("kappa"), py::arg("mu"), py::arg("x"));

    py::class_<ScmaSystem>(m, "ScmaSystem")
        .def_static("default_system", &ScmaSystem::default_system)
        .def_static("load_file", &ScmaSystem::load_file)
        .def("users", [](const ScmaSystem& s) { return s.config().users; })
        .def("res", [](const ScmaSystem& s) { return s.config().res; })
        .def("cb_size", [](const ScmaSystem& s) { return s.config().cb_size; })
        .def("codeword", &ScmaSystem::codeword, py::arg("user"), py::arg("index"))
        .def("superimpose", &ScmaSystem::superimpose, py::arg("indices"));

    py::class_<Scenario>(m, "Scenario")
        .def_static("preset", &Scenario::preset, py::arg("name"))
        .def_static("parse_file", &Scenario::parse_file, py::arg("path"))
        .def_static("parse_text",
                    [](const std::string& text) {
                        std::istringstream in(text);
                        return Scenario::parse(in);
                    })
        .def_readwrite("eps_list", &Scenario::eps_list)
        .def_readwrite("snr_db", &Scenario::snr_db)
        .def_readwrite("master_seed", &Scenario::master_seed)
        .def_readwrite("workers", &Scenario::workers)
        .def_readwrite("min_bit_errors", &Scenario::min_bit_errors)
        .def_readwrite("max_frames", &Scenario::max_frames)
        .def_readwrite("record_timing", &Scenario::record_timing)
        .def("save_text", [](const Scenario& sc) {
            std::ostringstream out;
            sc.save(out);
            return out.str();
        });

    py::class_<SweepRow>(m, "SweepRow")
        .def_readonly("eps", &SweepRow::eps)
        .def_readonly("snr_db", &SweepRow::snr_db)
        .def_readonly("method", &SweepRow::method)
        .def_readonly("ber", &SweepRow::ber)
        .def_readonly("errors", &SweepRow::errors)
        .def_readonly("bits", &SweepRow::bits)
        .def_readonly("flag", &SweepRow::stderr_or_flag);

    m.def(
        "run_sweep",
        [](const Scenario& sc) {
            std::ostringstream csv;
            auto rows = run_sweep(sc, csv);
            return py::make_tuple(rows, csv.str());
        },
        py::arg("scenario"), "run a sweep; returns (rows, csv_text)");

    m.def(
        "union_bound_ber",
        [](const Scenario& sc, double eps, double snr_db, const std::string& method) {
            SimContext ctx(sc);
            UnionBoundOptions opts;
            opts.method = ber_method_from_string(method);
            opts.series = sc.series;
            opts.mc_samples = sc.pep_mc_samples;
            const PowerDelayProfile* pdp =
                sc.channel == ChannelKind::rayleigh ? &sc.pdp : nullptr;
            return union_bound_ber(ctx.system(), sc.n_sc, eps,
                                   ctx.sigma0_for_snr_db(snr_db), pdp, opts)
                .ber;
        },
        py::arg("scenario"), py::arg("eps"), py::arg("snr_db"),
        py::arg("method") = "series", "analytic union-bound BER at one grid point");

    m.def("render_plot_svg", [](const std::string& csv_text, const std::string& kind,
                                const std::string& title) {
        PlotSpec spec;
        spec.kind = kind == "ber_vs_eps" ? PlotSpec::Kind::ber_vs_eps
                                         : PlotSpec::Kind::ber_vs_snr;
        spec.title = title;
        return render_plot_svg(csv_text, spec);
    });
}
