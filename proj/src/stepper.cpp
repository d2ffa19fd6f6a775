#include "mgrit_lfa/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mgrit_lfa {

Complex StepperSymbol::value() const { return std::exp(-kI * (omega * shift)) * (1.0 + deviation); }

double StepperSymbol::one_minus_modulus() const {
    const double num = 2.0 * deviation.real() + std::norm(deviation);
    return -num / (1.0 + modulus());
}

StepperSymbol StepperSymbol::operator*(const StepperSymbol& other) const {
    return {omega, shift + other.shift, deviation + other.deviation + deviation * other.deviation};
}

StepperSymbol StepperSymbol::power(int m) const {
    if (m < 0) throw std::invalid_argument("symbol power must be nonnegative");
    // (1 + d)^m - 1 = sum_{j>=1} C(m, j) d^j, summed without forming 1 + d.
    Complex sum{0.0, 0.0};
    Complex term{1.0, 0.0};
    double binom = 1.0;
    for (int j = 1; j <= m; ++j) {
        binom = binom * (m - j + 1) / j;
        term *= deviation;
        sum += binom * term;
    }
    return {omega, shift * m, sum};
}

StepperSymbol StepperSymbol::inverse() const {
    const Complex one_plus = 1.0 + deviation;
    if (std::abs(one_plus) == 0.0) throw std::domain_error("symbol inverse: zero symbol");
    return {omega, -shift, -deviation / one_plus};
}

double symbol_distance(const StepperSymbol& a, const StepperSymbol& b) {
    const double scale = std::max({1.0, std::abs(a.shift), std::abs(b.shift)});
    if (a.omega == b.omega && std::abs(a.shift - b.shift) <= 1e-14 * scale)
        return std::abs(a.deviation - b.deviation);
    return std::abs(a.value() - b.value());
}

// ============================================================================
// TimeStepper
// ============================================================================

TimeStepper TimeStepper::scalar(Complex value) { return from_circulant(CirculantOperator::scalar(value, 1)); }

TimeStepper TimeStepper::from_circulant(const CirculantOperator& op, double shift) {
    TimeStepper t;
    t.size_ = op.size();
    t.stages_.push_back({op, false, shift});
    return t;
}

TimeStepper TimeStepper::then(const CirculantOperator& op, double shift) const {
    if (!empty() && op.size() != size_) throw std::invalid_argument("time stepper: stage size mismatch");
    TimeStepper t = *this;
    t.size_ = op.size();
    t.stages_.push_back({op, false, shift});
    return t;
}

TimeStepper TimeStepper::then_solve(const CirculantOperator& op) const {
    if (!empty() && op.size() != size_) throw std::invalid_argument("time stepper: stage size mismatch");
    const auto& ev = op.eigenvalues();
    const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
    for (int k = 0; k < ev.size(); ++k)
        if (std::abs(ev[k]) <= 1e-14 * scale) throw std::domain_error("time stepper: singular solve stage");
    TimeStepper t = *this;
    t.size_ = op.size();
    t.stages_.push_back({op, true, 0.0});
    return t;
}

TimeStepper TimeStepper::then(const TimeStepper& next) const {
    if (!empty() && !next.empty() && next.size_ != size_)
        throw std::invalid_argument("time stepper: stage size mismatch");
    TimeStepper t = *this;
    if (t.empty()) t.size_ = next.size_;
    t.stages_.insert(t.stages_.end(), next.stages_.begin(), next.stages_.end());
    return t;
}

TimeStepper TimeStepper::power(int m) const {
    if (m < 1) throw std::invalid_argument("time stepper power must be at least 1");
    TimeStepper t;
    for (int j = 0; j < m; ++j) t = t.then(*this);
    return t;
}

ComplexVector TimeStepper::apply(const ComplexVector& u) const {
    if (u.size() != size_) throw std::invalid_argument("time stepper apply: size mismatch");
    ComplexVector v = u;
    for (const auto& st : stages_) v = st.solve ? st.op.solve(v) : st.op.apply(v);
    return v;
}

ComplexMatrix TimeStepper::to_dense() const {
    ComplexMatrix m = ComplexMatrix::Identity(size_, size_);
    for (int j = 0; j < size_; ++j) m.col(j) = apply(m.col(j).eval());
    return m;
}

StepperSymbol TimeStepper::factored_symbol(double omega) const {
    StepperSymbol acc{omega, 0.0, Complex{0.0, 0.0}};
    for (const auto& st : stages_) {
        const Complex mass = st.op.mass();
        StepperSymbol s{omega, st.shift, (mass - 1.0) + st.op.symbol_remainder(omega, st.shift)};
        acc = acc * (st.solve ? s.inverse() : s);
    }
    return acc;
}

Complex TimeStepper::eigenvalue(int k) const {
    if (k < 0 || k >= size_) throw std::out_of_range("time stepper eigenvalue: index out of range");
    Complex v{1.0, 0.0};
    for (const auto& st : stages_) v = st.solve ? v / st.op.eigenvalues()[k] : v * st.op.eigenvalues()[k];
    return v;
}

ComplexVector TimeStepper::eigenvalues() const {
    ComplexVector v(size_);
    for (int k = 0; k < size_; ++k) v[k] = eigenvalue(k);
    return v;
}

}  // namespace mgrit_lfa
