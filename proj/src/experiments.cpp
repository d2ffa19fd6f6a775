#include "mgrit_lfa/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <thread>

#include "mgrit_lfa/csv.hpp"

namespace mgrit_lfa {

namespace {

template <class F>
void parallel_for(std::size_t n, int threads, F&& body) {
    if (threads <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    const auto t_count = static_cast<std::size_t>(std::min<std::size_t>(static_cast<std::size_t>(threads), n));
    std::exception_ptr error;
    std::mutex error_mu;
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < t_count; ++t)
        pool.emplace_back([&, t] {
            try {
                for (std::size_t i = t; i < n; i += t_count) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mu);
                if (!error) error = std::current_exception();
            }
        });
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

Metadata base_metadata(const ExperimentConfig& config) {
    Metadata md = config.echo();
    md.emplace_back("code_version", MGRIT_LFA_VERSION);
    return md;
}

std::vector<double> spatial_omegas(int n) { return FrequencyGrid::spatial(n).values(); }

bool unit_mode(Complex lambda, Complex mu, double tol = 1e-12) {
    return std::abs(lambda) >= 1.0 - tol || std::abs(mu) >= 1.0 - tol;
}

}  // namespace

// ============================================================================
// Shared helpers
// ============================================================================

SchemePair make_scheme_pair(int p, double cfl, int m, int n_x, CoarseKind coarse) {
    SchemePair sp;
    sp.p = p;
    sp.m = m;
    sp.cfl = cfl;
    sp.coarse = coarse;
    sp.fine = build_semilagrangian(p, cfl, n_x);
    sp.phi = sp.fine.time_stepper();
    const SemiLagrangianScheme fine = sp.fine;
    sp.lambda_fn = [fine](double w) { return fine.factored_symbol(w); };
    switch (coarse) {
        case CoarseKind::Ideal:
            sp.psi = sp.phi.power(m);
            sp.mu_fn = [fine, m](double w) { return fine.factored_symbol(w).power(m); };
            break;
        case CoarseKind::Rediscretize: {
            const SemiLagrangianScheme coarse_scheme = build_rediscretized_coarse(fine, m);
            sp.psi = coarse_scheme.time_stepper();
            sp.mu_fn = [coarse_scheme](double w) { return coarse_scheme.factored_symbol(w); };
            break;
        }
        case CoarseKind::Modified: {
            const ModifiedCoarseOperator mc = build_modified_coarse(fine, m);
            sp.psi = mc.stepper;
            const TimeStepper psi = mc.stepper;
            sp.mu_fn = [psi](double w) { return psi.factored_symbol(w); };
            break;
        }
    }
    return sp;
}

WorstCase lfa_worst_case(const SymbolFn& lambda_fn, const SymbolFn& mu_fn, int m, int nu,
                         const std::vector<double>& omegas) {
    WorstCase wc;
    for (double w : omegas) {
        const SupResult s = spacetime_rho_sup(lambda_fn(w), mu_fn(w), m, nu);
        if (s.value > wc.rho) wc = {s.value, w, s.theta_dagger};
    }
    return wc;
}

int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("MGRIT_LFA_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    return 1;
}

double wrap_low(double theta, int m) {
    const double period = 2.0 * kPi / m;
    double t = std::fmod(theta + kPi / m, period);
    if (t < 0.0) t += period;
    return t - kPi / m;
}

// ============================================================================
// Space-time sweep
// ============================================================================

Fig3Result run_fig3(const ExperimentConfig& config, const RunOptions& opts) {
    const int p = config.p.at(0);
    const int m = config.m.at(0);
    if (config.cfl.empty()) throw ConfigError("fig3 needs a CFL number");
    const double c = config.cfl.at(0);
    const int nu = config.nu;
    const SchemePair sp = make_scheme_pair(p, c, m, std::max(config.n_x, p + 2), config.coarse);

    Fig3Result r;
    r.omegas = spatial_omegas(config.omega_points);
    r.thetas = FrequencyGrid::temporal_low(config.theta_points, m).values();
    const std::size_t nt = r.thetas.size();
    r.cells.resize(r.omegas.size() * nt);

    std::vector<StepperSymbol> lam(r.omegas.size()), mu(r.omegas.size());
    parallel_for(r.omegas.size(), opts.threads, [&](std::size_t i) {
        lam[i] = sp.lambda_fn(r.omegas[i]);
        mu[i] = sp.mu_fn(r.omegas[i]);
        for (std::size_t j = 0; j < nt; ++j) r.cells[i * nt + j] = spacetime_rho(lam[i], mu[i], r.thetas[j], m, nu, c);
    });

    for (std::size_t i = 0; i < r.omegas.size(); ++i) {
        const double w = r.omegas[i];
        const double th_c = wrap_low(-w * c, m);
        r.sections.push_back({"characteristic", w, th_c, spacetime_rho(lam[i], mu[i], th_c, m, nu, c).rho});
    }
    for (std::size_t i = 0; i < r.omegas.size(); ++i) {
        const double w = r.omegas[i];
        const double th_d = theta_dagger(mu[i].value(), m);
        r.sections.push_back({"theta_dagger", w, th_d, spacetime_rho(lam[i], mu[i], th_d, m, nu, c).rho});
    }
    auto add_peak = [&](const std::string& name, auto value_of) {
        std::size_t best = 0;
        double best_v = -1.0;
        for (std::size_t k = 0; k < r.cells.size(); ++k) {
            const double v = value_of(r.cells[k]);
            if (std::isfinite(v) && v > best_v) {
                best_v = v;
                best = k;
            }
        }
        r.sections.push_back({name, r.cells[best].omega, r.cells[best].theta, best_v});
    };
    add_peak("peak_defect", [](const SpaceTimeCell& x) { return x.defect; });
    add_peak("peak_coarse_symbol", [](const SpaceTimeCell& x) { return x.coarse_modulus; });
    add_peak("peak_rho", [](const SpaceTimeCell& x) { return x.rho; });

    if (!opts.out_dir.empty()) {
        Metadata md = base_metadata(config);
        const auto write_grid = [&](const std::string& file, const std::string& quantity, auto value_of) {
            Metadata m2 = md;
            m2.emplace_back("quantity", quantity);
            const auto path = opts.out_dir / file;
            CsvWriter w(path, {"omega", "theta", "value"}, m2, opts.timestamp);
            for (const auto& cell : r.cells) w.row({cell.omega, cell.theta, value_of(cell)});
            r.files.push_back(path);
        };
        write_grid("fig3_defect.csv", "|A1 - A1_ideal|", [](const SpaceTimeCell& x) { return x.defect; });
        write_grid("fig3_coarse_symbol.csv", "|A1|", [](const SpaceTimeCell& x) { return x.coarse_modulus; });
        {
            const auto path = opts.out_dir / "fig3_rho.csv";
            CsvWriter w(path, {"omega", "theta", "rho", "norm", "cgc_ratio", "is_characteristic", "singular"}, md,
                        opts.timestamp);
            for (const auto& x : r.cells)
                w.row({x.omega, x.theta, x.rho, x.norm, x.cgc_ratio, x.is_characteristic, x.singular});
            r.files.push_back(path);
        }
        {
            const auto path = opts.out_dir / "fig3_sections.csv";
            CsvWriter w(path, {"section", "omega", "theta", "value"}, md, opts.timestamp);
            for (const auto& s : r.sections) w.row({s.section, s.omega, s.theta, s.value});
            r.files.push_back(path);
        }
    }
    return r;
}

// ============================================================================
// Worst-case curves against the lower bound
// ============================================================================

std::vector<double> fig4_eps_grid(int m, int points) {
    if (points < 2) throw ConfigError("eps grid needs at least two points");
    std::vector<double> out;
    for (int i = 0; i < points; ++i) {
        const double e = 0.5 + 0.5 * i / (points - 1);
        if (!(e > 1e-6 && e < 1.0 - 1e-6)) continue;
        if (std::abs(e - std::round(m * e) / m) <= 1e-6) continue;
        out.push_back(e);
    }
    return out;
}

Fig4Result run_fig4(const ExperimentConfig& config, const RunOptions& opts) {
    struct Job {
        int p, m;
        double eps;
    };
    std::vector<Job> jobs;
    for (int p : config.p)
        for (int m : config.m)
            for (double e : fig4_eps_grid(m, config.eps_points)) jobs.push_back({p, m, e});

    const auto omegas = spatial_omegas(config.omega_points);
    Fig4Result r;
    r.rows.resize(jobs.size());
    parallel_for(jobs.size(), opts.threads, [&](std::size_t i) {
        const Job& j = jobs[i];
        const SchemePair sp = make_scheme_pair(j.p, j.eps, j.m, std::max(config.omega_points, j.p + 2), config.coarse);
        const WorstCase wc = lfa_worst_case(sp.lambda_fn, sp.mu_fn, j.m, config.nu, omegas);
        r.rows[i] = {j.p, j.m, j.eps, wc.rho, wc.omega, rho_check_lower_bound(j.p, j.m, j.eps),
                     1.0 - 2.0 / (3.0 * j.m), config.slack};
    });

    if (!opts.out_dir.empty()) {
        const auto path = opts.out_dir / "fig4_curves.csv";
        Metadata md = base_metadata(config);
        md.emplace_back("eps_grid", "uniform on [1/2, 1], inadmissible points within 1e-6 removed");
        CsvWriter w(path, {"p", "m", "eps", "lfa_rho", "lfa_omega", "rho_check", "endpoint", "slack"}, md,
                    opts.timestamp);
        for (const auto& x : r.rows)
            w.row({std::int64_t{x.p}, std::int64_t{x.m}, x.eps, x.lfa_rho, x.lfa_omega, x.rho_check, x.endpoint,
                   x.slack});
        r.files.push_back(path);
    }
    return r;
}

// ============================================================================
// Measured against predicted convergence
// ============================================================================

std::vector<double> choose_measured_cfls(int p, int m, int nu, int n_x, int count, double max_rho) {
    const auto omegas = spatial_omegas(n_x);
    std::vector<double> ok;
    for (int j = 21; j < 40; ++j) {
        const double c = j / 40.0;
        if (!in_admissible_set(m, c, 1e-9)) continue;
        const SchemePair sp = make_scheme_pair(p, c, m, n_x, CoarseKind::Rediscretize);
        const double rho = lfa_worst_case(sp.lambda_fn, sp.mu_fn, m, nu, omegas).rho;
        if (rho < max_rho) ok.push_back(c);
    }
    if (static_cast<int>(ok.size()) <= count) return ok;
    std::vector<double> out;
    for (int k = 0; k < count; ++k) {
        const auto idx = static_cast<std::size_t>(std::lround(k * (ok.size() - 1.0) / (count - 1)));
        out.push_back(ok[idx]);
    }
    return out;
}

MeasuredRow run_measured_row(int p, int m, int nu, double cfl, CoarseKind coarse, const ExperimentConfig& config,
                             std::uint64_t seed) {
    constexpr double kRunToCompletion = 0.95;
    constexpr int kShortRun = 30;

    const SchemePair sp = make_scheme_pair(p, cfl, m, config.n_x, coarse);
    MeasuredRow row;
    row.p = p;
    row.m = m;
    row.nu = nu;
    row.cfl = cfl;
    row.coarse = coarse;
    row.seed = seed;
    row.lfa_rho = lfa_worst_case(sp.lambda_fn, sp.mu_fn, m, nu, spatial_omegas(config.n_x)).rho;

    MgritConfig mc;
    mc.m = m;
    mc.nu = nu;
    mc.n_t = config.n_t;
    mc.boundary = config.boundary;
    mc.residual_tol = config.residual_tol;
    mc.max_iters = row.lfa_rho < kRunToCompletion ? config.max_iters : std::min(config.max_iters, kShortRun);

    MgritSolver solver(sp.phi, sp.psi, mc);
    SpaceTimeVector u = SpaceTimeVector::random_uniform(mc.n_t, sp.phi.size(), seed);
    const SpaceTimeVector b(mc.n_t, sp.phi.size());
    const SolveHistory h = solver.solve(u, b);
    row.iters = h.iterations();
    row.status = to_string(h.status);

    // Geometric mean of the last (up to five) ratios; diagnostic for short runs.
    {
        const int last = h.iterations() - 1;
        const int first = std::max(1, last - 4);
        double s = 0.0;
        int n = 0;
        for (int i = first; i <= last; ++i)
            if (h.residual_norms[i - 1] > 0.0 && h.residual_norms[i] > 0.0) {
                s += std::log(h.residual_norms[i] / h.residual_norms[i - 1]);
                ++n;
            }
        row.window_ratio = n ? std::exp(s / n) : 0.0;
    }

    if (row.lfa_rho < kRunToCompletion) {
        try {
            row.measured_rho = measured_factor_from_history(h, mc);
            row.abs_diff = std::abs(row.measured_rho - row.lfa_rho);
        } catch (const InsufficientIterations&) {
            row.measured_rho = kMeasuredSentinel;
            row.abs_diff = std::numeric_limits<double>::quiet_NaN();
            if (h.status == SolveStatus::Converged) row.status = "converged-early";
        }
    } else {
        row.measured_rho = kMeasuredSentinel;
        row.abs_diff = std::numeric_limits<double>::quiet_NaN();
        if (h.status == SolveStatus::Diverged || row.window_ratio > 1.0) row.status = "diverged";
    }
    return row;
}

MeasuredResult run_measured_vs_lfa(const ExperimentConfig& config, const RunOptions& opts) {
    struct Job {
        int p, m;
        double cfl;
        CoarseKind coarse;
    };
    std::vector<Job> jobs;
    if (config.cfl.empty()) {
        for (int p : config.p)
            for (int m : config.m)
                for (double c : choose_measured_cfls(p, m, config.nu, config.n_x, 3, 0.7))
                    jobs.push_back({p, m, c, CoarseKind::Rediscretize});
        // One ideal coarse operator and one configuration with rho_check > 1.
        jobs.push_back({config.p.front(), config.m.front(), 0.35, CoarseKind::Ideal});
        jobs.push_back({3, 4, 0.8, CoarseKind::Rediscretize});
    } else {
        for (int p : config.p)
            for (int m : config.m)
                for (double c : config.cfl) jobs.push_back({p, m, c, config.coarse});
    }

    MeasuredResult r;
    r.rows.resize(jobs.size());
    parallel_for(jobs.size(), opts.threads, [&](std::size_t i) {
        const Job& j = jobs[i];
        r.rows[i] = run_measured_row(j.p, j.m, config.nu, j.cfl, j.coarse, config, config.seed + i);
    });

    if (!opts.out_dir.empty()) {
        const auto path = opts.out_dir / "measured_vs_lfa.csv";
        Metadata md = base_metadata(config);
        md.emplace_back("residual_norm", "global l2 over all space-time unknowns");
        md.emplace_back("measured_window",
                        "geometric mean of the last 5 residual ratios before the stopping and exactness iterations");
        md.emplace_back("initial_iterate", "uniform [0,1) per entry, SplitMix64, seed column");
        md.emplace_back("sentinel", "measured_rho = -1 when no factor could be measured");
        CsvWriter w(path,
                    {"p", "m", "nu", "c", "coarse", "lfa_rho", "measured_rho", "abs_diff", "seed", "iters", "status",
                     "window_ratio"},
                    md, opts.timestamp);
        for (const auto& x : r.rows)
            w.row({std::int64_t{x.p}, std::int64_t{x.m}, std::int64_t{x.nu}, x.cfl, to_string(x.coarse), x.lfa_rho,
                   x.measured_rho, x.abs_diff, std::to_string(x.seed), std::int64_t{x.iters}, x.status,
                   x.window_ratio});
        r.files.push_back(path);
    }
    return r;
}

// ============================================================================
// Dense oracle checks
// ============================================================================

double PeriodicOracleCase::max_abs_error() const {
    return std::max(std::abs(dense_rho - lfa_rho), std::abs(dense_norm - lfa_norm));
}

PeriodicOracleCase periodic_oracle_case(const TimeStepper& phi, const TimeStepper& psi, int n_t, int m, int nu,
                                        const std::string& label) {
    MgritConfig mc;
    mc.m = m;
    mc.nu = nu;
    mc.n_t = n_t;
    mc.boundary = BoundaryMode::TimePeriodic;
    const DensePropagator e = assemble_dense_propagator(phi, psi, mc);
    const ComplexMatrix ed = deflate_unit_modes(e, phi, psi);

    PeriodicOracleCase out;
    out.label = label;
    out.n_x = phi.size();
    out.n_t = n_t;
    out.m = m;
    out.nu = nu;
    const ComplexMatrix cc = cpoint_block(ed, n_t, out.n_x, m);
    out.dense_rho = spectral_radius(cc, static_cast<int>(cc.rows()));
    out.dense_norm = spectral_norm(cpoint_columns(ed, n_t, out.n_x, m));

    const int nc = n_t / m;
    const ComplexVector lam = phi.eigenvalues();
    const ComplexVector mu = psi.eigenvalues();
    for (int j = 0; j < phi.size(); ++j) {
        if (unit_mode(lam[j], mu[j])) continue;
        for (int l = -(nc / 2); l <= (nc + 1) / 2 - 1; ++l) {
            const double theta = 2.0 * kPi * l / n_t;
            const TemporalSymbolInput in{lam[j], mu[j], m, nu};
            out.lfa_rho = std::max(out.lfa_rho, lfa_spectral_radius(in, theta));
            out.lfa_norm = std::max(out.lfa_norm, lfa_norm(in, theta));
        }
    }
    return out;
}

GapSequence ivp_gap_sequence(const TimeStepper& phi, const TimeStepper& psi, int m, int nu,
                             const std::vector<int>& n_ts) {
    GapSequence g;
    const ComplexVector lam = phi.eigenvalues();
    const ComplexVector mu = psi.eigenvalues();
    for (int j = 0; j < phi.size(); ++j) {
        const TemporalSymbolInput in{lam[j], mu[j], m, nu};
        if (!in.unit_fast_path() && unit_mode(lam[j], mu[j])) continue;
        g.lfa_sup_norm = std::max(g.lfa_sup_norm, lfa_norm_sup(in).value);
    }
    for (int n_t : n_ts) {
        MgritConfig mc;
        mc.m = m;
        mc.nu = nu;
        mc.n_t = n_t;
        mc.boundary = BoundaryMode::InitialValue;
        const double norm = spectral_norm(cpoint_columns(assemble_dense_propagator(phi, psi, mc).matrix, n_t,
                                                         phi.size(), m));
        g.n_t.push_back(n_t);
        g.dense_norm.push_back(norm);
        g.gaps.push_back(std::abs(norm - g.lfa_sup_norm));
    }
    g.shrinking = true;
    for (std::size_t i = 1; i < g.gaps.size(); ++i)
        if (g.gaps[i] > 1.1 * g.gaps[i - 1]) g.shrinking = false;
    return g;
}

nlohmann::json run_oracle_check(const ExperimentConfig& config, const RunOptions& opts) {
    using nlohmann::json;
    const int p = config.p.at(0);
    const double c = config.cfl.empty() ? 0.35 : config.cfl.at(0);
    if (config.n_x > 32 || config.n_t > 256) throw ConfigError("oracle check is limited to n_x <= 32 and n_t <= 256");

    json report;
    report["config"] = json::object();
    for (const auto& [k, v] : config.echo()) report["config"][k] = v;
    report["code_version"] = MGRIT_LFA_VERSION;

    // (a) time-periodic: scalar problems and the semi-Lagrangian pair.
    struct Case {
        std::string label;
        TimeStepper phi, psi;
        int n_t, m;
    };
    std::vector<Case> cases;
    SplitMix64 rng(config.seed);
    auto random_disk = [&](double r_max) {
        const double r = r_max * std::sqrt(rng.uniform());
        return std::polar(r, 2.0 * kPi * rng.uniform());
    };
    for (int m : {2, 4})
        for (int n_t : {16, 64}) {
            const Complex lam = random_disk(0.95);
            const Complex mu = random_disk(0.95);
            cases.push_back({"scalar", TimeStepper::scalar(lam), TimeStepper::scalar(mu), n_t, m});
            const SchemePair sp = make_scheme_pair(p, c, m, config.n_x, config.coarse);
            cases.push_back({"semi-lagrangian", sp.phi, sp.psi, n_t, m});
        }
    std::vector<PeriodicOracleCase> results(cases.size());
    parallel_for(cases.size(), opts.threads, [&](std::size_t i) {
        results[i] = periodic_oracle_case(cases[i].phi, cases[i].psi, cases[i].n_t, cases[i].m, config.nu,
                                          cases[i].label);
    });
    double max_err = 0.0;
    json jcases = json::array();
    for (const auto& r : results) {
        max_err = std::max(max_err, r.max_abs_error());
        jcases.push_back({{"label", r.label}, {"n_x", r.n_x}, {"n_t", r.n_t}, {"m", r.m}, {"nu", r.nu},
                          {"dense_rho", r.dense_rho}, {"lfa_rho", r.lfa_rho}, {"dense_norm", r.dense_norm},
                          {"lfa_norm", r.lfa_norm}, {"abs_error", r.max_abs_error()}});
    }
    report["time_periodic"] = {{"cases", jcases}, {"max_abs_error", max_err}, {"pass", max_err < 1e-9}};

    // (b) initial value: dense norm approaches the LFA supremum as n_t grows.
    {
        const SchemePair sp = make_scheme_pair(p, c, config.m.at(0), config.n_x, config.coarse);
        std::vector<int> n_ts;
        for (int n_t : {32, 64, 128, 256})
            if (n_t <= config.n_t) n_ts.push_back(n_t);
        const GapSequence g = ivp_gap_sequence(sp.phi, sp.psi, config.m.at(0), config.nu, n_ts);
        report["initial_value"] = {{"n_t", g.n_t},
                                   {"dense_norm", g.dense_norm},
                                   {"lfa_sup_norm", g.lfa_sup_norm},
                                   {"gaps", g.gaps},
                                   {"shrinking", g.shrinking},
                                   {"pass", g.shrinking && g.gaps.size() >= 2 && g.gaps.back() < g.gaps.front()}};
    }

    // (c) ideal coarse operator.
    {
        const SchemePair sp = make_scheme_pair(p, c, config.m.at(0), config.n_x, CoarseKind::Ideal);
        MgritConfig mc;
        mc.m = config.m.at(0);
        mc.nu = config.nu;
        mc.n_t = 32;
        const double norm = spectral_norm(assemble_dense_propagator(sp.phi, sp.psi, mc).matrix);
        report["ideal"] = {{"dense_norm", norm}, {"pass", norm < 1e-12}};
    }

    if (!opts.out_dir.empty()) {
        std::filesystem::create_directories(opts.out_dir);
        std::ofstream f(opts.out_dir / "oracle_report.json");
        if (!f) throw std::runtime_error("cannot write oracle_report.json");
        f << report.dump(2) << '\n';
    }
    return report;
}

// ============================================================================
// Coarse-grid correction order probes
// ============================================================================

bool CgcProbeRow::within_tolerance() const { return std::abs(slope - expected) <= tolerance; }

std::vector<double> dyadic_omegas(int kmin, int kmax) {
    std::vector<double> w;
    for (int k = kmin; k <= kmax; ++k) w.push_back(std::ldexp(1.0, -k));
    return w;
}

CgcProbeRow cgc_probe_row(int p, int m, double cfl, CoarseKind coarse, bool characteristic,
                          const std::vector<double>& omegas) {
    const SchemePair sp = make_scheme_pair(p, cfl, m, 64, coarse);
    CgcProbeRow row;
    row.p = p;
    row.m = m;
    row.cfl = cfl;
    row.coarse = coarse;
    row.characteristic = characteristic;
    row.probe = cgc_order_probe(sp.lambda_fn, sp.mu_fn, characteristic, cfl, m, omegas, kPi / (2.0 * m));
    row.slope = row.probe.slope;
    if (!characteristic) {
        row.expected = coarse == CoarseKind::Modified ? p + 2 : p + 1;
        row.tolerance = 0.3;
    } else if (coarse == CoarseKind::Modified) {
        row.expected = 1.0;
        row.tolerance = 0.3;
    } else {
        row.expected = 0.0;
        row.tolerance = 0.2;
    }
    return row;
}

CgcResult run_cgc_probe(const ExperimentConfig& config, const RunOptions& opts) {
    struct Job {
        int p, m;
        double cfl;
        CoarseKind coarse;
        bool characteristic;
    };
    std::vector<Job> jobs;
    if (config.cfl.empty()) throw ConfigError("cgc-probe needs at least one CFL number");
    for (int p : config.p)
        for (int m : config.m)
            for (double c : config.cfl) {
                jobs.push_back({p, m, c, CoarseKind::Rediscretize, false});
                jobs.push_back({p, m, c, CoarseKind::Rediscretize, true});
                jobs.push_back({p, m, c, CoarseKind::Modified, true});
            }
    const auto omegas = dyadic_omegas(config.omega_kmin, config.omega_kmax);
    CgcResult r;
    r.rows.resize(jobs.size());
    parallel_for(jobs.size(), opts.threads, [&](std::size_t i) {
        const Job& j = jobs[i];
        r.rows[i] = cgc_probe_row(j.p, j.m, j.cfl, j.coarse, j.characteristic, omegas);
    });

    if (!opts.out_dir.empty()) {
        Metadata md = base_metadata(config);
        md.emplace_back("non_characteristic_theta", "pi/(2m)");
        md.emplace_back("characteristic_theta", "-omega*c");
        {
            const auto path = opts.out_dir / "cgc_slopes.csv";
            CsvWriter w(path, {"p", "m", "c", "coarse", "characteristic", "slope", "expected", "tolerance"}, md,
                        opts.timestamp);
            for (const auto& x : r.rows)
                w.row({std::int64_t{x.p}, std::int64_t{x.m}, x.cfl, to_string(x.coarse), x.characteristic, x.slope,
                       x.expected, x.tolerance});
            r.files.push_back(path);
        }
        {
            const auto path = opts.out_dir / "cgc_points.csv";
            CsvWriter w(path, {"p", "m", "c", "coarse", "characteristic", "omega", "theta", "cgc_ratio"}, md,
                        opts.timestamp);
            for (const auto& x : r.rows)
                for (std::size_t k = 0; k < x.probe.omegas.size(); ++k)
                    w.row({std::int64_t{x.p}, std::int64_t{x.m}, x.cfl, to_string(x.coarse), x.characteristic,
                           x.probe.omegas[k], x.probe.thetas[k], x.probe.ratios[k]});
            r.files.push_back(path);
        }
    }
    return r;
}

}  // namespace mgrit_lfa
