#include "mgrit_lfa/advection.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mgrit_lfa {

namespace {

constexpr double kSnap = 1e-12;

void require_odd_order(int p) {
    if (p < 1 || p % 2 == 0) throw std::invalid_argument("order p must be odd and at least 1, got " + std::to_string(p));
}

double snapped_fraction(double x, long* integer_part) {
    double k = std::floor(x);
    double eps = x - k;
    if (eps > 1.0 - kSnap) {
        k += 1.0;
        eps = 0.0;
    } else if (eps < kSnap) {
        eps = 0.0;
    }
    if (integer_part) *integer_part = static_cast<long>(k);
    return eps;
}

}  // namespace

AdvectionProblem AdvectionProblem::from_cfl(double c, int n_x, int n_t) {
    AdvectionProblem pr;
    pr.alpha = 1.0;
    pr.n_x = n_x;
    pr.n_t = n_t;
    pr.dt = c * pr.h() / pr.alpha;
    pr.validate();
    return pr;
}

void AdvectionProblem::validate() const {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw std::invalid_argument("wave speed must be positive");
    if (n_x <= 0) throw std::invalid_argument("n_x must be positive");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("time step must be positive");
    if (n_t < 0) throw std::invalid_argument("n_t must be nonnegative");
}

CflDecomposition CflDecomposition::decompose(double c) {
    if (!(c > 0.0) || !std::isfinite(c)) throw std::invalid_argument("CFL number must be positive and finite");
    CflDecomposition d;
    d.c = c;
    d.eps = snapped_fraction(c, &d.integer_part);
    return d;
}

double CflDecomposition::coarse_eps(int m) const { return snapped_fraction(m * eps, nullptr); }

double f_poly(int p, double z) {
    require_odd_order(p);
    double prod = 1.0;
    double fact = 1.0;
    for (int q = -(p + 1) / 2; q <= (p - 1) / 2; ++q) prod *= (q + z);
    for (int j = 2; j <= p + 1; ++j) fact *= j;
    return prod / fact;
}

// ============================================================================
// Semi-Lagrangian stepper
// ============================================================================

SemiLagrangianScheme build_semilagrangian(int p, const AdvectionProblem& problem, IntegerCfl integer_cfl) {
    require_odd_order(p);
    problem.validate();
    if (problem.n_x < p + 1)
        throw std::invalid_argument("n_x = " + std::to_string(problem.n_x) + " is smaller than the stencil width " +
                                    std::to_string(p + 1));

    SemiLagrangianScheme s;
    s.p_ = p;
    s.problem_ = problem;
    s.cfl_ = CflDecomposition::decompose(problem.cfl());
    if (s.cfl_.integer_cfl() && integer_cfl == IntegerCfl::Reject)
        throw std::invalid_argument("integer CFL number: departure points coincide with mesh points");

    // Nodes i - k + o, o in [-(p+1)/2, (p-1)/2]; the foot i - k - eps lies in (i-k-1, i-k].
    const double eps = s.cfl_.eps;
    for (int o = -(p + 1) / 2; o <= (p - 1) / 2; ++o) s.nodes_.push_back(o);
    std::map<int, Complex> stencil;
    for (int o : s.nodes_) {
        double w = 1.0;
        for (int o2 : s.nodes_)
            if (o2 != o) w *= (-eps - o2) / static_cast<double>(o - o2);
        s.weights_.push_back(w);
        // u_{i-k+o} = u_{i-d} with d = k - o.
        const int d = static_cast<int>(s.cfl_.integer_part) - o;
        stencil[d] += Complex{w, 0.0};
    }
    s.stepper_ = CirculantOperator(std::move(stencil), problem.n_x);
    return s;
}

SemiLagrangianScheme build_semilagrangian(int p, double cfl, int n_x, IntegerCfl integer_cfl) {
    return build_semilagrangian(p, AdvectionProblem::from_cfl(cfl, n_x), integer_cfl);
}

Complex SemiLagrangianScheme::symbol(double omega) const { return factored_symbol(omega).value(); }

StepperSymbol SemiLagrangianScheme::factored_symbol(double omega) const {
    if (!std::isfinite(omega)) throw std::invalid_argument("symbol: non-finite frequency");
    // exp(-i w (k - o)) = exp(-i w c) exp(i w (o + eps)); the weights sum to one.
    Complex dev{0.0, 0.0};
    for (std::size_t j = 0; j < nodes_.size(); ++j) dev += weights_[j] * expm1_i(omega * (nodes_[j] + cfl_.eps));
    return {omega, cfl_.c, dev};
}

TimeStepper SemiLagrangianScheme::time_stepper() const { return TimeStepper::from_circulant(stepper_, cfl_.c); }

Complex sl_symbol_exact(const SemiLagrangianScheme& scheme, double omega) { return scheme.symbol(omega); }

StepperSymbol sl_symbol_estimate_factored(int p, double cfl, double omega, int m_power) {
    require_odd_order(p);
    if (m_power < 1) throw std::invalid_argument("m_power must be at least 1");
    const CflDecomposition d = CflDecomposition::decompose(cfl);
    const Complex iw_pow = std::pow(kI * omega, p + 1);
    return {omega, cfl * m_power, -static_cast<double>(m_power) * f_poly(p, d.eps) * iw_pow};
}

Complex sl_symbol_estimate(int p, double cfl, double omega, int m_power) {
    return sl_symbol_estimate_factored(p, cfl, omega, m_power).value();
}

// ============================================================================
// Derivative stencil and corrected coarse stepper
// ============================================================================

DerivativeOperator build_derivative_operator(int p, int n_x) {
    require_odd_order(p);
    const int q = (p + 1) / 2;
    if (n_x < 2 * q + 1) throw std::invalid_argument("n_x smaller than the derivative stencil width");
    std::map<int, Complex> stencil;
    double binom = 1.0;  // C(2q, q + j) built from j = -q upward
    for (int j = -q; j <= q; ++j) {
        const double sign = ((q + j) % 2 == 0) ? 1.0 : -1.0;
        stencil[j] = Complex{sign * binom, 0.0};
        const int r = q + j;  // C(2q, r+1) = C(2q, r) (2q - r) / (r + 1)
        binom = binom * (2 * q - r) / (r + 1);
    }
    DerivativeOperator d;
    d.p_ = p;
    d.stencil_ = CirculantOperator(std::move(stencil), n_x);
    return d;
}

double DerivativeOperator::symbol(double omega) const {
    const double s = std::sin(0.5 * omega);
    return std::pow(-4.0 * s * s, (p_ + 1) / 2);
}

double modified_coarse_gamma(int p, double eps, int m) {
    if (m < 1) throw std::invalid_argument("coarsening factor must be positive");
    CflDecomposition d;
    d.eps = eps;
    return f_poly(p, d.coarse_eps(m)) - m * f_poly(p, eps);
}

SemiLagrangianScheme build_rediscretized_coarse(const SemiLagrangianScheme& fine, int m, IntegerCfl integer_cfl) {
    if (m < 1) throw std::invalid_argument("coarsening factor must be positive");
    AdvectionProblem coarse = fine.problem();
    coarse.dt *= m;
    if (coarse.n_t > 0) coarse.n_t /= m;
    return build_semilagrangian(fine.p(), coarse, integer_cfl);
}

ModifiedCoarseOperator build_modified_coarse(const SemiLagrangianScheme& fine, int m) {
    if (fine.cfl().integer_cfl()) throw std::invalid_argument("modified coarse operator needs a non-integer fine CFL");
    ModifiedCoarseOperator out{
        modified_coarse_gamma(fine.p(), fine.cfl().eps, m),
        build_rediscretized_coarse(fine, m, IntegerCfl::Allow),
        build_derivative_operator(fine.p(), fine.problem().n_x),
        TimeStepper{},
    };
    // I - gamma D
    std::map<int, Complex> correction;
    for (const auto& [d, s] : out.derivative.stencil().stencil()) correction[d] = -out.gamma * s;
    correction[0] += 1.0;
    const CirculantOperator corr(std::move(correction), fine.problem().n_x);
    for (int k = 0; k < corr.size(); ++k)
        if (std::abs(corr.eigenvalues()[k]) < 1e-14)
            throw std::domain_error("modified coarse operator: correction factor 1 - gamma d(w) vanishes on the grid");
    out.stepper = out.coarse.time_stepper().then_solve(corr);
    return out;
}

}  // namespace mgrit_lfa
