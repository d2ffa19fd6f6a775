/// @file lfa.hpp
/// @brief Closed-form local Fourier analysis of two-level MGRIT.
///
/// For fine and coarse eigenvalues (lambda, mu) the error propagator acts on each
/// harmonic space {theta + 2 pi a / m} as the m x m matrix f(theta) S_F(theta),
/// where S_F is the rank-one F-relaxation symbol.
#pragma once

#include <functional>
#include <vector>

#include "mgrit_lfa/fourier.hpp"
#include "mgrit_lfa/stepper.hpp"

namespace mgrit_lfa {

inline constexpr int kMaxValidatedNu = 8;

struct TemporalSymbolInput {
    Complex lambda{0.0, 0.0};
    Complex mu{0.0, 0.0};
    int m = 2;
    int nu = 0;

    /// lambda = mu = 1: the unit eigenvalue is eliminated exactly.
    bool unit_fast_path() const;
    /// Requires |lambda|, |mu| < 1 unless the unit fast path applies.
    void validate() const;
};

struct HarmonicSymbol {
    double theta = 0.0;
    ComplexMatrix matrix;     ///< E(theta)
    ComplexVector a0_diag;    ///< 1 - lambda exp(-i (theta + 2 pi a / m))
    Complex a1{0.0, 0.0};     ///< 1 - mu exp(-i m theta)
    ComplexVector p_hat;      ///< ones / sqrt(m)
    ComplexMatrix s_f;
    ComplexMatrix s_cf;
    Complex c_theta{0.0, 0.0};
    Complex f_theta{0.0, 0.0};
};

ComplexMatrix symbol_SF(const TemporalSymbolInput& in, double theta);
ComplexMatrix symbol_SCF(const TemporalSymbolInput& in, double theta);
/// (S_CF)^nu S_F evaluated as (lambda e^{-i theta})^{m nu} S_F.
ComplexMatrix symbol_prerelax(const TemporalSymbolInput& in, double theta);

HarmonicSymbol symbol_error_propagator(const TemporalSymbolInput& in, double theta);
/// S_F K (S_CF)^nu S_F with K = I - P A1^{-1} P^T A0, multiplied out.
ComplexMatrix assemble_error_propagator_symbol(const TemporalSymbolInput& in, double theta);

struct SupResult {
    double value = 0.0;
    double theta_dagger = 0.0;
};

double lfa_norm(const TemporalSymbolInput& in, double theta);
SupResult lfa_norm_sup(const TemporalSymbolInput& in);
double lfa_spectral_radius(const TemporalSymbolInput& in, double theta);
SupResult lfa_rho_sup(const TemporalSymbolInput& in);

/// arg(mu) / m with arg in [-pi, pi); zero when mu = 0.
double theta_dagger(Complex mu, int m);

// ----------------------------------------------------------------------------
// Space-time symbols from spatial-frequency dependent steppers
// ----------------------------------------------------------------------------

using SymbolFn = std::function<StepperSymbol(double omega)>;

/// |lambda^m - mu| from factored symbols.
double coarse_defect(const StepperSymbol& lambda, const StepperSymbol& mu, int m);
/// |1 - mu exp(-i m theta)|.
double coarse_symbol_modulus(const StepperSymbol& mu, double theta, int m);
/// sqrt(sum_{r<m} |lambda|^{2r}), the norm of the F-relaxation factor.
double relaxation_norm_factor(const StepperSymbol& lambda, int m);

/// Worst case over theta for one spatial mode: sup rho and its theta.
SupResult spacetime_rho_sup(const StepperSymbol& lambda, const StepperSymbol& mu, int m, int nu);

struct SpaceTimeCell {
    double omega = 0.0;
    double theta = 0.0;
    Complex lambda{0.0, 0.0};
    Complex mu{0.0, 0.0};
    double rho = 0.0;
    double norm = 0.0;
    double defect = 0.0;        ///< |A1 - A1_ideal|
    double coarse_modulus = 0.0;  ///< |A1|
    double cgc_ratio = 0.0;     ///< defect / coarse_modulus
    bool is_characteristic = false;
    bool singular = false;      ///< A1 vanishes; rho reported as +inf
};

/// Characteristic when |theta + omega c| <= max(1e-8, 0.1 |omega|), the
/// distance being taken modulo the harmonic period 2 pi / m.
bool is_characteristic(double omega, double theta, double cfl, int m);

SpaceTimeCell spacetime_rho(const StepperSymbol& lambda, const StepperSymbol& mu, double theta, int m, int nu,
                            double cfl);
SpaceTimeCell spacetime_rho(const SymbolFn& lambda_fn, const SymbolFn& mu_fn, double omega, double theta, int m, int nu,
                            double cfl);

struct CgcProbeResult {
    std::vector<double> omegas;
    std::vector<double> thetas;
    std::vector<double> ratios;
    double slope = 0.0;
};

/// Log-log slope of the coarse-grid accuracy ratio as omega shrinks. The
/// characteristic probe uses theta = -omega c; otherwise theta = theta_offset.
CgcProbeResult cgc_order_probe(const SymbolFn& lambda_fn, const SymbolFn& mu_fn, bool characteristic, double cfl,
                               int m, const std::vector<double>& omegas, double theta_offset);

/// rho_check = m f(eps) / f(frac(m eps)) - 1, eps in (0, 1) with m eps not an integer.
double rho_check_lower_bound(int p, int m, double eps);
/// True when eps lies in (0, 1) and m eps is not within 1e-12 of an integer.
bool in_admissible_set(int m, double eps, double tol = 1e-12);

}  // namespace mgrit_lfa
