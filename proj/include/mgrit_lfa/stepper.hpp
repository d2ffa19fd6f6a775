/// @file stepper.hpp
/// @brief One-step time integrators built from circulant stages, and their
/// Fourier symbols in a cancellation-free factored form.
#pragma once

#include <vector>

#include "mgrit_lfa/fourier.hpp"

namespace mgrit_lfa {

/// Symbol value exp(-i * omega * shift) * (1 + deviation).
///
/// Advection steppers have symbols of modulus close to one whose phase is
/// almost exactly a shift. Keeping the shift apart lets differences such as
/// lambda^m - mu be formed from the small deviations directly.
struct StepperSymbol {
    double omega = 0.0;
    double shift = 0.0;
    Complex deviation{0.0, 0.0};

    static StepperSymbol from_value(Complex value, double omega = 0.0) { return {omega, 0.0, value - 1.0}; }

    Complex value() const;
    double modulus() const { return std::abs(1.0 + deviation); }
    /// 1 - |value|, stable when the modulus is near one.
    double one_minus_modulus() const;

    StepperSymbol operator*(const StepperSymbol& other) const;
    StepperSymbol power(int m) const;
    StepperSymbol inverse() const;
};

/// |a.value() - b.value()|, formed from the deviations when the shifts agree.
double symbol_distance(const StepperSymbol& a, const StepperSymbol& b);

/// Composition of circulant stages; each stage multiplies by, or solves with, its operator.
class TimeStepper {
public:
    TimeStepper() = default;

    static TimeStepper scalar(Complex value);
    /// Multiplication by op; `shift` only selects the phase used by factored_symbol.
    static TimeStepper from_circulant(const CirculantOperator& op, double shift = 0.0);

    TimeStepper then(const CirculantOperator& op, double shift = 0.0) const;
    TimeStepper then_solve(const CirculantOperator& op) const;
    TimeStepper then(const TimeStepper& next) const;
    TimeStepper power(int m) const;

    int size() const { return size_; }
    bool empty() const { return stages_.empty(); }

    ComplexVector apply(const ComplexVector& u) const;
    ComplexMatrix to_dense() const;

    Complex symbol(double omega) const { return factored_symbol(omega).value(); }
    StepperSymbol factored_symbol(double omega) const;
    /// Eigenvalue at DFT bin k.
    Complex eigenvalue(int k) const;
    ComplexVector eigenvalues() const;

private:
    struct Stage {
        CirculantOperator op;
        bool solve = false;
        double shift = 0.0;
    };

    std::vector<Stage> stages_;
    int size_ = 0;
};

}  // namespace mgrit_lfa
