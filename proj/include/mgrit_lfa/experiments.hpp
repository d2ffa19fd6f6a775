/// @file experiments.hpp
/// @brief Experiment drivers producing the CSV/JSON data products.
#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "mgrit_lfa/advection.hpp"
#include "mgrit_lfa/config.hpp"
#include "mgrit_lfa/lfa.hpp"
#include "mgrit_lfa/mgrit.hpp"

namespace mgrit_lfa {

/// Fine semi-Lagrangian stepper with a matching coarse stepper and their symbols.
struct SchemePair {
    int p = 1;
    int m = 2;
    double cfl = 0.0;
    CoarseKind coarse = CoarseKind::Rediscretize;
    SemiLagrangianScheme fine;
    TimeStepper phi;
    TimeStepper psi;
    SymbolFn lambda_fn;
    SymbolFn mu_fn;
};

SchemePair make_scheme_pair(int p, double cfl, int m, int n_x, CoarseKind coarse);

struct WorstCase {
    double rho = 0.0;
    double omega = 0.0;
    double theta = 0.0;
};

/// max over the omega grid of the theta-supremum of rho; the unit mode contributes zero.
WorstCase lfa_worst_case(const SymbolFn& lambda_fn, const SymbolFn& mu_fn, int m, int nu,
                         const std::vector<double>& omegas);

/// Threads to use: `requested` if positive, else MGRIT_LFA_THREADS, else 1.
int resolve_threads(int requested);

struct RunOptions {
    std::filesystem::path out_dir;  ///< empty: compute only
    int threads = 1;
    bool timestamp = true;
};

/// Maps theta into [-pi/m, pi/m).
double wrap_low(double theta, int m);

// ----------------------------------------------------------------------------

struct Fig3Result {
    std::vector<double> omegas;
    std::vector<double> thetas;
    std::vector<SpaceTimeCell> cells;  ///< omega-major: cells[i_omega * thetas.size() + i_theta]

    struct SectionPoint {
        std::string section;
        double omega;
        double theta;
        double value;
    };
    std::vector<SectionPoint> sections;
    std::vector<std::filesystem::path> files;

    const SpaceTimeCell& cell(std::size_t i_omega, std::size_t i_theta) const {
        return cells[i_omega * thetas.size() + i_theta];
    }
};

Fig3Result run_fig3(const ExperimentConfig& config, const RunOptions& opts);

// ----------------------------------------------------------------------------

struct Fig4Row {
    int p = 1;
    int m = 2;
    double eps = 0.0;
    double lfa_rho = 0.0;
    double lfa_omega = 0.0;
    double rho_check = 0.0;
    double endpoint = 0.0;
    double slack = 0.0;
};

/// `points` uniform values from 1/2 to 1, dropping those within 1e-6 of an inadmissible eps.
std::vector<double> fig4_eps_grid(int m, int points);

struct Fig4Result {
    std::vector<Fig4Row> rows;
    std::vector<std::filesystem::path> files;
};

Fig4Result run_fig4(const ExperimentConfig& config, const RunOptions& opts);

// ----------------------------------------------------------------------------

struct MeasuredRow {
    int p = 1;
    int m = 2;
    int nu = 1;
    double cfl = 0.0;
    CoarseKind coarse = CoarseKind::Rediscretize;
    double lfa_rho = 0.0;
    double measured_rho = -1.0;  ///< -1 when no factor could be measured
    double abs_diff = 0.0;
    std::uint64_t seed = 0;
    int iters = 0;
    std::string status;
    double window_ratio = 0.0;  ///< geometric-mean residual ratio over the final iterations
};

inline constexpr double kMeasuredSentinel = -1.0;

/// Up to `count` CFL numbers k/40 in (1/2, 1) with LFA rho below max_rho, spread over the admissible candidates.
std::vector<double> choose_measured_cfls(int p, int m, int nu, int n_x, int count, double max_rho);

MeasuredRow run_measured_row(int p, int m, int nu, double cfl, CoarseKind coarse, const ExperimentConfig& config,
                             std::uint64_t seed);

struct MeasuredResult {
    std::vector<MeasuredRow> rows;
    std::vector<std::filesystem::path> files;
};

MeasuredResult run_measured_vs_lfa(const ExperimentConfig& config, const RunOptions& opts);

// ----------------------------------------------------------------------------

struct PeriodicOracleCase {
    std::string label;
    int n_x = 1;
    int n_t = 0;
    int m = 2;
    int nu = 0;
    double dense_rho = 0.0;
    double lfa_rho = 0.0;
    double dense_norm = 0.0;
    double lfa_norm = 0.0;

    double max_abs_error() const;
};

/// Dense rho and norm of the periodic propagator (unit modes deflated) against
/// the closed-form maxima over the n_t / m discrete temporal frequencies.
PeriodicOracleCase periodic_oracle_case(const TimeStepper& phi, const TimeStepper& psi, int n_t, int m, int nu,
                                        const std::string& label);

struct GapSequence {
    std::vector<int> n_t;
    std::vector<double> dense_norm;
    double lfa_sup_norm = 0.0;
    std::vector<double> gaps;
    /// Each gap at most 1.1 times the previous one.
    bool shrinking = false;
};

GapSequence ivp_gap_sequence(const TimeStepper& phi, const TimeStepper& psi, int m, int nu,
                             const std::vector<int>& n_ts);

nlohmann::json run_oracle_check(const ExperimentConfig& config, const RunOptions& opts);

// ----------------------------------------------------------------------------

struct CgcProbeRow {
    int p = 1;
    int m = 2;
    double cfl = 0.0;
    CoarseKind coarse = CoarseKind::Rediscretize;
    bool characteristic = false;
    double slope = 0.0;
    double expected = 0.0;
    double tolerance = 0.0;
    CgcProbeResult probe;

    bool within_tolerance() const;
};

/// omega = 2^-k for k = kmin..kmax.
std::vector<double> dyadic_omegas(int kmin, int kmax);

CgcProbeRow cgc_probe_row(int p, int m, double cfl, CoarseKind coarse, bool characteristic,
                          const std::vector<double>& omegas);

struct CgcResult {
    std::vector<CgcProbeRow> rows;
    std::vector<std::filesystem::path> files;
};

CgcResult run_cgc_probe(const ExperimentConfig& config, const RunOptions& opts);

}  // namespace mgrit_lfa
