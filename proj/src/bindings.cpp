// Python bindings for the main operations: potentials, Agmon constants,
// spectra, WKB comparison, and the splitting routes.

#include "fluxlab/agmon.hpp"
#include "fluxlab/errors.hpp"
#include "fluxlab/interaction.hpp"
#include "fluxlab/potential.hpp"
#include "fluxlab/spectral.hpp"
#include "fluxlab/sweep.hpp"
#include "fluxlab/wkb.hpp"

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

namespace py = pybind11;
using namespace fluxlab;

namespace {

py::dict validation_to_dict(const ValidationReport& r) {
    py::list checks;
    for (const auto& c : r.checks) {
        py::dict d;
        d["name"] = c.name;
        d["residual"] = c.residual;
        d["tolerance"] = c.tolerance;
        d["passed"] = c.passed;
        checks.append(d);
    }
    py::dict out;
    out["passed"] = r.passed;
    out["checks"] = checks;
    return out;
}

py::dict splitting_to_dict(const SplittingResult& r) {
    py::dict d;
    d["h"] = r.h;
    d["xi0"] = r.xi0;
    d["gap_direct"] = r.gap_direct;
    d["gap_wronskian"] = r.gap_wronskian;
    d["gap_leading"] = r.gap_leading;
    d["log10_gap_leading"] = r.log10_gap_leading;
    d["w_up_log10"] = r.w_up_log10;
    d["w_down_log10"] = r.w_down_log10;
    d["phase_up"] = r.phase_up;
    d["phase_down"] = r.phase_down;
    d["lambda1"] = r.lambda1;
    d["lambda2"] = r.lambda2;
    d["lambda_single_well"] = r.lambda_single_well;
    d["direct_below_floor"] = r.direct_below_floor;
    d["flags"] = r.flags_joined();
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "semiclassical double-well spectra and flux-resolved tunneling gaps on the circle";

    py::register_exception<ValidationError>(m, "ValidationError");
    py::register_exception<PrecisionError>(m, "PrecisionError");
    py::register_exception<ParameterError>(m, "ParameterError");

    py::class_<PotentialSpec>(m, "Potential")
        .def(py::init([](const std::string& name, const std::vector<double>& params) {
                 return builtin_potential(name, params);
             }),
             py::arg("name"), py::arg("params") = std::vector<double>{})
        .def_static("from_csv", &load_potential_csv, py::arg("path"))
        .def_static(
            "from_samples",
            [](std::vector<double> s, std::vector<double> v, const std::string& name) {
                return potential_from_samples(std::move(s), std::move(v), name);
            },
            py::arg("s"), py::arg("v"), py::arg("name") = "tabulated")
        .def_readonly("name", &PotentialSpec::name)
        .def_readonly("is_even", &PotentialSpec::is_even)
        .def("__call__", [](const PotentialSpec& p, double s) { return p.eval(s); })
        .def("deriv1", [](const PotentialSpec& p, double s) { return p.deriv1(s); })
        .def("deriv2", [](const PotentialSpec& p, double s) { return p.deriv2(s); })
        .def("__repr__", [](const PotentialSpec& p) {
            return "<fluxlab.Potential '" + p.name + "'>";
        });

    m.def(
        "validate",
        [](const PotentialSpec& spec, double tol) {
            return validation_to_dict(validate_double_well(spec, tol));
        },
        py::arg("spec"), py::arg("tol") = 1e-9,
        "grid checks of the double-well requirements");

    m.def("kappa", &kappa, py::arg("spec"), "well curvature constant sqrt(V''(0)/2)");

    py::class_<AgmonConstants>(m, "AgmonConstants")
        .def_readonly("kappa", &AgmonConstants::kappa)
        .def_readonly("S_u", &AgmonConstants::S_u)
        .def_readonly("S_d", &AgmonConstants::S_d)
        .def_readonly("S", &AgmonConstants::S)
        .def_readonly("A_u", &AgmonConstants::A_u)
        .def_readonly("A_d", &AgmonConstants::A_d)
        .def_readonly("V_half_up", &AgmonConstants::V_half_up)
        .def_readonly("V_half_down", &AgmonConstants::V_half_down)
        .def_readonly("is_even", &AgmonConstants::is_even)
        .def("to_json", &AgmonConstants::to_json)
        .def("__repr__", [](const AgmonConstants& c) {
            std::ostringstream os;
            os << "<fluxlab.AgmonConstants kappa=" << c.kappa << " S_u=" << c.S_u
               << " S_d=" << c.S_d << ">";
            return os.str();
        });

    m.def("agmon_constants", &agmon_constants, py::arg("spec"), py::arg("quad_tol") = 1e-12);

    m.def(
        "phase_profile",
        [](const PotentialSpec& spec, double s, const std::string& well) {
            return phase_profile(spec, s, well == "left" ? Well::left : Well::right);
        },
        py::arg("spec"), py::arg("s"), py::arg("well") = "right",
        "Agmon distance to the chosen well");

    m.def("transport_amplitude", &transport_amplitude, py::arg("spec"), py::arg("s"),
          "leading WKB amplitude a0(s)");

    m.def(
        "leading_interaction",
        [](const AgmonConstants& c, double h, double xi0) {
            const GapPrediction p = leading_interaction(c, h, xi0);
            py::dict d;
            d["w0"] = p.w0_value;
            d["gap_leading"] = p.gap_leading;
            d["gap_leading_log"] = p.gap_leading_log;
            d["remainder_scale"] = p.remainder_scale;
            return d;
        },
        py::arg("constants"), py::arg("h"), py::arg("xi0"));

    m.def("predicted_gap_even", &predicted_gap_even, py::arg("constants"), py::arg("h"),
          py::arg("xi0"));

    m.def(
        "circle_eigenvalues",
        [](const PotentialSpec& spec, double h, double xi0, int K, int m_count) {
            const CircleOperator op =
                assemble_circle(spec, h, xi0, K > 0 ? K : default_fourier_modes(h));
            return hermitian_eigs(op.matrix, m_count).eigenvalues;
        },
        py::arg("spec"), py::arg("h"), py::arg("xi0") = 0.0, py::arg("K") = -1,
        py::arg("m") = 6, "lowest eigenvalues of the full circle operator");

    m.def(
        "circle_gap",
        [](const PotentialSpec& spec, double h, double xi0, int K) {
            const CircleGap g = circle_gap(spec, h, xi0, K);
            py::dict d;
            d["lambda1"] = g.lambda1;
            d["lambda2"] = g.lambda2;
            d["lambda3"] = g.lambda3;
            d["gap"] = g.gap;
            d["below_floor"] = g.below_floor;
            return d;
        },
        py::arg("spec"), py::arg("h"), py::arg("xi0") = 0.0, py::arg("K") = -1);

    m.def(
        "dirichlet_ground",
        [](const PotentialSpec& spec, double h, double eta, int n) {
            const DirichletOperator op = assemble_dirichlet(spec, h, eta, n);
            const EigenSolution sol = ground_state_single_well(op);
            py::dict d;
            d["eigenvalue"] = sol.eigenvalues[0];
            d["eigenvalue_extrapolated"] = sol.eigenvalues_extrapolated[0];
            return d;
        },
        py::arg("spec"), py::arg("h"), py::arg("eta") = 0.3, py::arg("n") = 4097,
        "one-well Dirichlet ground energy (order-2 raw, order-4 extrapolated)");

    m.def(
        "splitting",
        [](const PotentialSpec& spec, double h, double xi0, int K, int n, double eta,
           const std::string& routes) {
            SplittingConfig cfg;
            cfg.K = K;
            cfg.n = n;
            cfg.eta = eta;
            cfg.route_direct = routes.find("direct") != std::string::npos;
            cfg.route_wronskian = routes.find("wronskian") != std::string::npos;
            cfg.route_leading = routes.find("leading") != std::string::npos;
            return splitting_to_dict(splitting_estimate(spec, h, xi0, cfg));
        },
        py::arg("spec"), py::arg("h"), py::arg("xi0") = 0.0, py::arg("K") = -1,
        py::arg("n") = 4097, py::arg("eta") = 0.3,
        py::arg("routes") = "direct,wronskian,leading",
        "all requested gap routes at one (h, xi0) point");

    m.def(
        "sweep",
        [](const std::string& config_text) {
            const SweepConfig cfg = SweepConfig::parse(config_text);
            py::list out;
            for (const auto& r : run_sweep(cfg)) out.append(splitting_to_dict(r));
            return out;
        },
        py::arg("config_text"), "run a sweep from flat key = value config text");

    m.def(
        "sweep_csv",
        [](const std::string& config_text) {
            const SweepConfig cfg = SweepConfig::parse(config_text);
            std::ostringstream os;
            write_sweep_csv(run_sweep(cfg), os);
            return os.str();
        },
        py::arg("config_text"), "run a sweep and return the CSV text");

    m.def(
        "wkb_compare",
        [](const PotentialSpec& spec, double h, double k_lo, double k_hi, double eta, int n) {
            const CutoffSpec cutoff = build_cutoff(eta);
            const double resid = wkb_residual(spec, h, cutoff, k_lo, k_hi);
            const WkbComparison cmp = wkb_vs_numeric(spec, h, k_lo, k_hi, 201, n);
            py::dict d;
            d["residual_sup"] = resid;
            d["sup_err_value"] = cmp.sup_err_value;
            d["sup_err_deriv"] = cmp.sup_err_deriv;
            d["scale_value"] = cmp.scale_value;
            return d;
        },
        py::arg("spec"), py::arg("h"), py::arg("k_lo") = -1.8, py::arg("k_hi") = 1.8,
        py::arg("eta") = 0.3, py::arg("n") = 4097);

#ifdef FLUXLAB_VERSION
    m.attr("__version__") = FLUXLAB_VERSION;
#else
    m.attr("__version__") = "dev";
#endif
}
