/// @file advection.hpp
/// @brief Semi-Lagrangian steppers for u_t + alpha u_x = 0 on a periodic mesh of (-1, 1).
#pragma once

#include <vector>

#include "mgrit_lfa/fourier.hpp"
#include "mgrit_lfa/stepper.hpp"

namespace mgrit_lfa {

struct AdvectionProblem {
    double alpha = 1.0;
    int n_x = 64;
    double dt = 0.0;
    int n_t = 0;

    double h() const { return 2.0 / n_x; }
    double cfl() const { return alpha * dt / h(); }

    /// Problem with unit wave speed and the time step giving CFL number c.
    static AdvectionProblem from_cfl(double c, int n_x, int n_t = 0);
    void validate() const;
};

struct CflDecomposition {
    double c = 0.0;
    long integer_part = 0;
    double eps = 0.0;

    /// Splits c = floor(c) + eps, snapping eps to 0 within 1e-12 of an integer.
    static CflDecomposition decompose(double c);
    /// Fractional part of m * eps, snapped like eps.
    double coarse_eps(int m) const;
    bool integer_cfl() const { return eps == 0.0; }
};

/// (1/(p+1)!) prod_{q=-(p+1)/2}^{(p-1)/2} (q + z), p odd.
double f_poly(int p, double z);

enum class IntegerCfl { Reject, Allow };

/// Degree-p Lagrange interpolation at the feet of characteristics, composed
/// with the integer mesh shift floor(c).
class SemiLagrangianScheme {
public:
    int p() const { return p_; }
    const AdvectionProblem& problem() const { return problem_; }
    const CflDecomposition& cfl() const { return cfl_; }
    const CirculantOperator& stepper() const { return stepper_; }

    /// Interpolation node offsets o relative to i - floor(c), and their weights.
    const std::vector<int>& node_offsets() const { return nodes_; }
    const std::vector<double>& weights() const { return weights_; }

    Complex symbol(double omega) const;
    /// Symbol with phase shift c factored out.
    StepperSymbol factored_symbol(double omega) const;
    TimeStepper time_stepper() const;

private:
    friend SemiLagrangianScheme build_semilagrangian(int, const AdvectionProblem&, IntegerCfl);

    int p_ = 1;
    AdvectionProblem problem_;
    CflDecomposition cfl_;
    CirculantOperator stepper_;
    std::vector<int> nodes_;
    std::vector<double> weights_;
};

SemiLagrangianScheme build_semilagrangian(int p, const AdvectionProblem& problem,
                                          IntegerCfl integer_cfl = IntegerCfl::Reject);
SemiLagrangianScheme build_semilagrangian(int p, double cfl, int n_x, IntegerCfl integer_cfl = IntegerCfl::Reject);

Complex sl_symbol_exact(const SemiLagrangianScheme& scheme, double omega);

/// Leading-order small-omega estimate exp(-i w c k) [1 - k f(eps) (i w)^{p+1}], k = m_power.
/// Takes the full CFL number c since the phase depends on it.
Complex sl_symbol_estimate(int p, double cfl, double omega, int m_power);
StepperSymbol sl_symbol_estimate_factored(int p, double cfl, double omega, int m_power);

/// Centered second-order stencil for h^{p+1} d^{p+1}/dx^{p+1}: the (p+1)/2-th power of (1, -2, 1).
class DerivativeOperator {
public:
    int p() const { return p_; }
    int derivative_order() const { return p_ + 1; }
    int accuracy_order() const { return 2; }
    const CirculantOperator& stencil() const { return stencil_; }

    /// (2 cos w - 2)^{(p+1)/2}
    double symbol(double omega) const;

private:
    friend DerivativeOperator build_derivative_operator(int, int);
    int p_ = 1;
    CirculantOperator stencil_;
};

DerivativeOperator build_derivative_operator(int p, int n_x);

/// gamma = f(frac(m eps)) - m f(eps) for the corrected coarse stepper.
double modified_coarse_gamma(int p, double eps, int m);

struct ModifiedCoarseOperator {
    double gamma = 0.0;
    SemiLagrangianScheme coarse;
    DerivativeOperator derivative;
    TimeStepper stepper;

    StepperSymbol factored_symbol(double omega) const { return stepper.factored_symbol(omega); }
};

/// (I - gamma D_{p+1})^{-1} S_p^{(m dt)}.
ModifiedCoarseOperator build_modified_coarse(const SemiLagrangianScheme& fine, int m);

/// Rediscretised coarse stepper S_p^{(m dt)}.
SemiLagrangianScheme build_rediscretized_coarse(const SemiLagrangianScheme& fine, int m,
                                                IntegerCfl integer_cfl = IntegerCfl::Reject);

}  // namespace mgrit_lfa
