#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "mgrit_lfa/experiments.hpp"

namespace py = pybind11;
using namespace mgrit_lfa;

namespace {

TemporalSymbolInput make_input(Complex lambda, Complex mu, int m, int nu) {
    TemporalSymbolInput in{lambda, mu, m, nu};
    in.validate();
    return in;
}

MgritConfig make_mgrit_config(int m, int nu, int n_t, const std::string& boundary, int max_iters, double tol) {
    MgritConfig c;
    c.m = m;
    c.nu = nu;
    c.n_t = n_t;
    c.boundary = parse_boundary_mode(boundary);
    c.max_iters = max_iters;
    c.residual_tol = tol;
    c.validate();
    return c;
}

py::dict cell_to_dict(const SpaceTimeCell& c) {
    py::dict d;
    d["omega"] = c.omega;
    d["theta"] = c.theta;
    d["lambda"] = c.lambda;
    d["mu"] = c.mu;
    d["rho"] = c.rho;
    d["norm"] = c.norm;
    d["defect"] = c.defect;
    d["coarse_modulus"] = c.coarse_modulus;
    d["cgc_ratio"] = c.cgc_ratio;
    d["is_characteristic"] = c.is_characteristic;
    d["singular"] = c.singular;
    return d;
}

ExperimentConfig config_from_dict(ExperimentKind kind, const std::map<std::string, std::string>& kv) {
    auto copy = kv;
    copy.erase("experiment");
    return ExperimentConfig::from_key_values(copy, kind);
}

}  // namespace

PYBIND11_MODULE(_core, mod) {
    mod.doc() = "Two-level MGRIT local Fourier analysis for semi-Lagrangian advection";

    py::register_exception<ConfigError>(mod, "ConfigError", PyExc_ValueError);
    py::register_exception<InsufficientIterations>(mod, "InsufficientIterations", PyExc_RuntimeError);

    // Closed-form temporal symbols.
    mod.def(
        "lfa_norm",
        [](Complex lambda, Complex mu, int m, int nu, double theta) {
            return lfa_norm(make_input(lambda, mu, m, nu), theta);
        },
        py::arg("lam"), py::arg("mu"), py::arg("m"), py::arg("nu"), py::arg("theta"));
    mod.def(
        "lfa_spectral_radius",
        [](Complex lambda, Complex mu, int m, int nu, double theta) {
            return lfa_spectral_radius(make_input(lambda, mu, m, nu), theta);
        },
        py::arg("lam"), py::arg("mu"), py::arg("m"), py::arg("nu"), py::arg("theta"));
    mod.def(
        "lfa_norm_sup",
        [](Complex lambda, Complex mu, int m, int nu) {
            const SupResult s = lfa_norm_sup(make_input(lambda, mu, m, nu));
            return py::make_tuple(s.value, s.theta_dagger);
        },
        py::arg("lam"), py::arg("mu"), py::arg("m"), py::arg("nu"), "Returns (sup value, maximising theta).");
    mod.def(
        "lfa_rho_sup",
        [](Complex lambda, Complex mu, int m, int nu) {
            const SupResult s = lfa_rho_sup(make_input(lambda, mu, m, nu));
            return py::make_tuple(s.value, s.theta_dagger);
        },
        py::arg("lam"), py::arg("mu"), py::arg("m"), py::arg("nu"));
    mod.def("theta_dagger", &theta_dagger, py::arg("mu"), py::arg("m"));
    mod.def(
        "error_propagator_symbol",
        [](Complex lambda, Complex mu, int m, int nu, double theta) {
            return assemble_error_propagator_symbol(make_input(lambda, mu, m, nu), theta);
        },
        py::arg("lam"), py::arg("mu"), py::arg("m"), py::arg("nu"), py::arg("theta"),
        "m x m harmonic symbol assembled from its factors.");

    // Discretisation.
    mod.def("f_poly", &f_poly, py::arg("p"), py::arg("z"));
    mod.def("modified_coarse_gamma", &modified_coarse_gamma, py::arg("p"), py::arg("eps"), py::arg("m"));
    mod.def("rho_check_lower_bound", &rho_check_lower_bound, py::arg("p"), py::arg("m"), py::arg("eps"));
    mod.def("in_admissible_set", &in_admissible_set, py::arg("m"), py::arg("eps"), py::arg("tol") = 1e-12);
    mod.def("sl_symbol_estimate", &sl_symbol_estimate, py::arg("p"), py::arg("cfl"), py::arg("omega"),
            py::arg("m_power") = 1);

    py::class_<SemiLagrangianScheme>(mod, "SemiLagrangianScheme")
        .def(py::init([](int p, double cfl, int n_x) { return build_semilagrangian(p, cfl, n_x); }), py::arg("p"),
             py::arg("cfl"), py::arg("n_x"))
        .def_property_readonly("p", &SemiLagrangianScheme::p)
        .def_property_readonly("node_offsets", &SemiLagrangianScheme::node_offsets)
        .def_property_readonly("weights", &SemiLagrangianScheme::weights)
        .def("symbol", &SemiLagrangianScheme::symbol, py::arg("omega"))
        .def("eigenvalues", [](const SemiLagrangianScheme& s) { return s.time_stepper().eigenvalues(); })
        .def("to_dense", [](const SemiLagrangianScheme& s) { return s.stepper().to_dense(); });

    // Space-time LFA for a scheme pair.
    mod.def(
        "spacetime_rho",
        [](int p, double cfl, int m, int nu, double omega, double theta, const std::string& coarse) {
            const SchemePair sp = make_scheme_pair(p, cfl, m, std::max(16, p + 2), parse_coarse_kind(coarse));
            return cell_to_dict(spacetime_rho(sp.lambda_fn, sp.mu_fn, omega, theta, m, nu, cfl));
        },
        py::arg("p"), py::arg("cfl"), py::arg("m"), py::arg("nu"), py::arg("omega"), py::arg("theta"),
        py::arg("coarse") = "rediscretize");
    mod.def(
        "lfa_worst_case",
        [](int p, double cfl, int m, int nu, int omega_points, const std::string& coarse) {
            const SchemePair sp = make_scheme_pair(p, cfl, m, std::max(omega_points, p + 2), parse_coarse_kind(coarse));
            const WorstCase wc =
                lfa_worst_case(sp.lambda_fn, sp.mu_fn, m, nu, FrequencyGrid::spatial(omega_points).values());
            return py::make_tuple(wc.rho, wc.omega, wc.theta);
        },
        py::arg("p"), py::arg("cfl"), py::arg("m"), py::arg("nu"), py::arg("omega_points") = 128,
        py::arg("coarse") = "rediscretize", "Returns (rho, omega, theta) of the worst space-time mode.");

    // MGRIT solves and dense propagators.
    mod.def(
        "measured_convergence_factor",
        [](int p, double cfl, int m, int nu, int n_x, int n_t, const std::string& coarse, std::uint64_t seed,
           int max_iters, double residual_tol) {
            const SchemePair sp = make_scheme_pair(p, cfl, m, n_x, parse_coarse_kind(coarse));
            const MgritConfig c = make_mgrit_config(m, nu, n_t, "initial-value", max_iters, residual_tol);
            MeasuredFactor f;
            {
                py::gil_scoped_release release;
                f = measured_convergence_factor(sp.phi, sp.psi, c, seed);
            }
            py::dict d;
            d["value"] = f.value;
            d["residual_norms"] = f.history.residual_norms;
            d["status"] = to_string(f.history.status);
            d["window_end"] = f.window_end;
            return d;
        },
        py::arg("p"), py::arg("cfl"), py::arg("m"), py::arg("nu"), py::arg("n_x"), py::arg("n_t"),
        py::arg("coarse") = "rediscretize", py::arg("seed") = 1, py::arg("max_iters") = 400,
        py::arg("residual_tol") = 1e-10);
    mod.def(
        "dense_error_propagator",
        [](int p, double cfl, int m, int nu, int n_x, int n_t, const std::string& boundary,
           const std::string& coarse) {
            const SchemePair sp = make_scheme_pair(p, cfl, m, n_x, parse_coarse_kind(coarse));
            return assemble_dense_propagator(sp.phi, sp.psi, make_mgrit_config(m, nu, n_t, boundary, 1, 1e-10))
                .matrix;
        },
        py::arg("p"), py::arg("cfl"), py::arg("m"), py::arg("nu"), py::arg("n_x"), py::arg("n_t"),
        py::arg("boundary") = "initial-value", py::arg("coarse") = "rediscretize");

    // Experiment drivers; config values are the same strings accepted in config files.
    mod.def(
        "run_experiment",
        [](const std::string& kind_name, const std::map<std::string, std::string>& config,
           const std::filesystem::path& out_dir, int threads, bool timestamp) {
            const ExperimentKind kind = parse_experiment_kind(kind_name);
            const ExperimentConfig c = config_from_dict(kind, config);
            RunOptions ro{out_dir, resolve_threads(threads), timestamp};
            py::gil_scoped_release release;
            std::vector<std::filesystem::path> files;
            switch (kind) {
                case ExperimentKind::LfaSweep: files = run_fig3(c, ro).files; break;
                case ExperimentKind::LowerBoundCurve: files = run_fig4(c, ro).files; break;
                case ExperimentKind::MeasuredVsLfa: files = run_measured_vs_lfa(c, ro).files; break;
                case ExperimentKind::OracleCheck:
                    run_oracle_check(c, ro);
                    files.push_back(out_dir / "oracle_report.json");
                    break;
                case ExperimentKind::CgcProbe: files = run_cgc_probe(c, ro).files; break;
            }
            return files;
        },
        py::arg("kind"), py::arg("config") = std::map<std::string, std::string>{}, py::arg("out_dir"),
        py::arg("threads") = 0, py::arg("timestamp") = true);

    mod.attr("__version__") = MGRIT_LFA_VERSION;
}
