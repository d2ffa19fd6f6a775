#include "mgrit_lfa/lfa.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "mgrit_lfa/advection.hpp"

namespace mgrit_lfa {

namespace {

constexpr double kUnitTol = 1e-14;

void check_basic(const TemporalSymbolInput& in) {
    if (in.m < 1) throw std::invalid_argument("coarsening factor must be positive");
    if (in.nu < 0 || in.nu > kMaxValidatedNu)
        throw std::invalid_argument("nu must lie in [0, " + std::to_string(kMaxValidatedNu) + "]");
    auto finite = [](Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); };
    if (!finite(in.lambda) || !finite(in.mu)) throw std::invalid_argument("symbol input is not finite");
}

ComplexVector a0_diagonal(const TemporalSymbolInput& in, double theta) {
    ComplexVector a(in.m);
    for (int alpha = 0; alpha < in.m; ++alpha)
        a[alpha] = 1.0 - in.lambda * std::exp(-kI * (theta + 2.0 * kPi * alpha / in.m));
    return a;
}

Complex relaxation_scalar(const TemporalSymbolInput& in, double theta) {
    return std::pow(in.lambda * std::exp(-kI * theta), in.m * in.nu);
}

double sum_of_powers_sqrt(double mod_lambda, int m) {
    double s = 0.0, t = 1.0;
    for (int r = 0; r < m; ++r) {
        s += t;
        t *= mod_lambda * mod_lambda;
    }
    return std::sqrt(s);
}

}  // namespace

bool TemporalSymbolInput::unit_fast_path() const {
    return std::abs(lambda - 1.0) <= kUnitTol && std::abs(mu - 1.0) <= kUnitTol;
}

void TemporalSymbolInput::validate() const {
    check_basic(*this);
    if (m < 2) throw std::invalid_argument("coarsening factor must be at least 2");
    if (unit_fast_path()) return;
    if (!(std::abs(lambda) < 1.0) || !(std::abs(mu) < 1.0))
        throw std::domain_error("time steppers must be l2-stable: need |lambda| < 1 and |mu| < 1");
}

// ============================================================================
// Harmonic symbols
// ============================================================================

ComplexMatrix symbol_SF(const TemporalSymbolInput& in, double theta) {
    check_basic(in);
    const ComplexVector a = a0_diagonal(in, theta);
    for (int i = 0; i < a.size(); ++i)
        if (std::abs(a[i]) == 0.0) throw std::domain_error("F-relaxation symbol: A0 symbol is singular");
    const Complex c = (1.0 - std::pow(in.lambda * std::exp(-kI * theta), in.m)) / static_cast<double>(in.m);
    ComplexMatrix s(in.m, in.m);
    for (int i = 0; i < in.m; ++i) s.row(i).setConstant(c / a[i]);
    return s;
}

ComplexMatrix symbol_SCF(const TemporalSymbolInput& in, double theta) {
    const ComplexVector a = a0_diagonal(in, theta);
    ComplexMatrix s = symbol_SF(in, theta);
    for (int j = 0; j < in.m; ++j) s.col(j) *= (1.0 - a[j]);
    return s;
}

ComplexMatrix symbol_prerelax(const TemporalSymbolInput& in, double theta) {
    return relaxation_scalar(in, theta) * symbol_SF(in, theta);
}

HarmonicSymbol symbol_error_propagator(const TemporalSymbolInput& in, double theta) {
    in.validate();
    HarmonicSymbol h;
    h.theta = theta;
    h.a0_diag = a0_diagonal(in, theta);
    h.a1 = 1.0 - in.mu * std::exp(-kI * (static_cast<double>(in.m) * theta));
    h.p_hat = ComplexVector::Constant(in.m, 1.0 / std::sqrt(static_cast<double>(in.m)));
    if (in.unit_fast_path()) {
        h.matrix = ComplexMatrix::Zero(in.m, in.m);
        return h;
    }
    h.c_theta = (1.0 - std::pow(in.lambda * std::exp(-kI * theta), in.m)) / static_cast<double>(in.m);
    h.s_f = symbol_SF(in, theta);
    h.s_cf = symbol_SCF(in, theta);
    const Complex emt = std::exp(kI * (static_cast<double>(in.m) * theta));
    h.f_theta = relaxation_scalar(in, theta) * (std::pow(in.lambda, in.m) - in.mu) / (emt - in.mu);
    h.matrix = h.f_theta * h.s_f;
    return h;
}

ComplexMatrix assemble_error_propagator_symbol(const TemporalSymbolInput& in, double theta) {
    in.validate();
    const int m = in.m;
    if (in.unit_fast_path()) return ComplexMatrix::Zero(m, m);
    const ComplexVector a = a0_diagonal(in, theta);
    const Complex a1 = 1.0 - in.mu * std::exp(-kI * (static_cast<double>(m) * theta));
    const ComplexVector p = ComplexVector::Constant(m, 1.0 / std::sqrt(static_cast<double>(m)));
    const ComplexMatrix A0 = a.asDiagonal();
    const ComplexMatrix K = ComplexMatrix::Identity(m, m) - (p / a1) * (p.transpose() * A0);
    const ComplexMatrix sf = symbol_SF(in, theta);
    const ComplexMatrix scf = symbol_SCF(in, theta);
    ComplexMatrix pre = sf;
    for (int s = 0; s < in.nu; ++s) pre = scf * pre;
    return sf * K * pre;
}

double theta_dagger(Complex mu, int m) {
    if (mu == Complex{0.0, 0.0}) return 0.0;
    double arg = std::arg(mu);
    if (arg >= kPi) arg -= 2.0 * kPi;
    return arg / m;
}

double lfa_norm(const TemporalSymbolInput& in, double theta) {
    in.validate();
    if (in.unit_fast_path()) return 0.0;
    const double ml = std::abs(in.lambda);
    const Complex emt = std::exp(kI * (static_cast<double>(in.m) * theta));
    return std::pow(ml, in.m * in.nu) * std::abs(std::pow(in.lambda, in.m) - in.mu) / std::abs(emt - in.mu) *
           sum_of_powers_sqrt(ml, in.m);
}

SupResult lfa_norm_sup(const TemporalSymbolInput& in) {
    in.validate();
    if (in.unit_fast_path()) return {0.0, 0.0};
    const double ml = std::abs(in.lambda);
    return {std::pow(ml, in.m * in.nu) * std::abs(std::pow(in.lambda, in.m) - in.mu) / (1.0 - std::abs(in.mu)) *
                sum_of_powers_sqrt(ml, in.m),
            theta_dagger(in.mu, in.m)};
}

double lfa_spectral_radius(const TemporalSymbolInput& in, double theta) {
    in.validate();
    if (in.unit_fast_path()) return 0.0;
    const Complex emt = std::exp(kI * (static_cast<double>(in.m) * theta));
    return std::pow(std::abs(in.lambda), in.m * in.nu) * std::abs(std::pow(in.lambda, in.m) - in.mu) /
           std::abs(emt - in.mu);
}

SupResult lfa_rho_sup(const TemporalSymbolInput& in) {
    in.validate();
    if (in.unit_fast_path()) return {0.0, 0.0};
    return {std::pow(std::abs(in.lambda), in.m * in.nu) * std::abs(std::pow(in.lambda, in.m) - in.mu) /
                (1.0 - std::abs(in.mu)),
            theta_dagger(in.mu, in.m)};
}

// ============================================================================
// Space-time symbols
// ============================================================================

namespace {

bool unit_pair(const StepperSymbol& lambda, const StepperSymbol& mu) {
    return std::abs(lambda.value() - 1.0) <= kUnitTol && std::abs(mu.value() - 1.0) <= kUnitTol;
}

}  // namespace

double coarse_defect(const StepperSymbol& lambda, const StepperSymbol& mu, int m) {
    return symbol_distance(lambda.power(m), mu);
}

double coarse_symbol_modulus(const StepperSymbol& mu, double theta, int m) {
    // 1 - exp(-i eta)(1 + d) = -expm1(-i eta) - d exp(-i eta)
    const double eta = mu.omega * mu.shift + m * theta;
    return std::abs(-expm1_i(-eta) - mu.deviation * std::exp(-kI * eta));
}

double relaxation_norm_factor(const StepperSymbol& lambda, int m) { return sum_of_powers_sqrt(lambda.modulus(), m); }

SupResult spacetime_rho_sup(const StepperSymbol& lambda, const StepperSymbol& mu, int m, int nu) {
    if (unit_pair(lambda, mu)) return {0.0, 0.0};
    const double gap = mu.one_minus_modulus();
    if (!(gap > 0.0)) throw std::domain_error("coarse symbol must satisfy |mu| < 1");
    return {std::pow(lambda.modulus(), m * nu) * coarse_defect(lambda, mu, m) / gap, theta_dagger(mu.value(), m)};
}

bool is_characteristic(double omega, double theta, double cfl, int m) {
    const double period = 2.0 * kPi / m;
    double d = std::fmod(theta + omega * cfl, period);
    if (d >= 0.5 * period) d -= period;
    if (d < -0.5 * period) d += period;
    return std::abs(d) <= std::max(1e-8, 0.1 * std::abs(omega));
}

SpaceTimeCell spacetime_rho(const StepperSymbol& lambda, const StepperSymbol& mu, double theta, int m, int nu,
                            double cfl) {
    if (m < 1 || nu < 0) throw std::invalid_argument("spacetime_rho: need m >= 1 and nu >= 0");
    SpaceTimeCell c;
    c.omega = lambda.omega;
    c.theta = theta;
    c.lambda = lambda.value();
    c.mu = mu.value();
    c.is_characteristic = is_characteristic(c.omega, theta, cfl, m);
    c.coarse_modulus = coarse_symbol_modulus(mu, theta, m);
    if (unit_pair(lambda, mu)) return c;
    c.defect = coarse_defect(lambda, mu, m);
    if (c.coarse_modulus == 0.0) {
        c.singular = true;
        c.rho = c.norm = c.cgc_ratio = std::numeric_limits<double>::infinity();
        return c;
    }
    c.cgc_ratio = c.defect / c.coarse_modulus;
    c.rho = std::pow(lambda.modulus(), m * nu) * c.cgc_ratio;
    c.norm = c.rho * relaxation_norm_factor(lambda, m);
    return c;
}

SpaceTimeCell spacetime_rho(const SymbolFn& lambda_fn, const SymbolFn& mu_fn, double omega, double theta, int m,
                            int nu, double cfl) {
    return spacetime_rho(lambda_fn(omega), mu_fn(omega), theta, m, nu, cfl);
}

CgcProbeResult cgc_order_probe(const SymbolFn& lambda_fn, const SymbolFn& mu_fn, bool characteristic, double cfl,
                               int m, const std::vector<double>& omegas, double theta_offset) {
    CgcProbeResult r;
    for (double w : omegas) {
        const double theta = characteristic ? -w * cfl : theta_offset;
        const SpaceTimeCell cell = spacetime_rho(lambda_fn, mu_fn, w, theta, m, 0, cfl);
        r.omegas.push_back(w);
        r.thetas.push_back(theta);
        r.ratios.push_back(cell.cgc_ratio);
    }
    r.slope = loglog_slope(r.omegas, r.ratios);
    return r;
}

// ============================================================================
// Lower bound
// ============================================================================

bool in_admissible_set(int m, double eps, double tol) {
    if (!(eps > 0.0 && eps < 1.0)) return false;
    const double x = m * eps;
    return std::abs(x - std::round(x)) > tol;
}

double rho_check_lower_bound(int p, int m, double eps) {
    if (m < 1) throw std::invalid_argument("coarsening factor must be positive");
    if (!in_admissible_set(m, eps))
        throw std::domain_error("eps = " + std::to_string(eps) +
                                " is not admissible: the fine or coarse characteristics pass through mesh points");
    const double x = m * eps;
    const double eps_m = x - std::floor(x);
    return m * f_poly(p, eps) / f_poly(p, eps_m) - 1.0;
}

}  // namespace mgrit_lfa
