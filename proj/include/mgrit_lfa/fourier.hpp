/// @file fourier.hpp
/// @brief Frequency grids, circulant operators and small dense complex linear algebra.
///
/// DFT convention: the forward transform is X_k = sum_j x_j exp(-i w_k j) with
/// w_k = 2 pi k / n and no normalisation; the inverse carries the 1/n.
#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <Eigen/Dense>

namespace mgrit_lfa {

using Complex = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr Complex kI{0.0, 1.0};

/// expm1(i x) without cancellation for small x.
Complex expm1_i(double x);

// ----------------------------------------------------------------------------
// Frequency grids
// ----------------------------------------------------------------------------

enum class GridKind {
    Spatial,       ///< omega over [-pi, pi)
    TemporalLow,   ///< theta over [-pi/m, pi/m)
    TemporalFull,  ///< theta over [-pi/m, 2 pi - pi/m)
};

class FrequencyGrid {
public:
    static FrequencyGrid spatial(int n_points);
    static FrequencyGrid temporal_low(int n_points, int m);
    static FrequencyGrid temporal_full(int n_points, int m);

    int n_points() const { return static_cast<int>(values_.size()); }
    GridKind kind() const { return kind_; }
    int m() const { return m_; }
    double operator[](int i) const { return values_.at(static_cast<std::size_t>(i)); }
    const std::vector<double>& values() const { return values_; }

    /// Grid point closest to zero (spatial grids contain zero exactly).
    int zero_index() const;

private:
    FrequencyGrid(GridKind kind, int m, std::vector<double> values)
        : kind_(kind), m_(m), values_(std::move(values)) {}

    GridKind kind_;
    int m_;
    std::vector<double> values_;
};

// ----------------------------------------------------------------------------
// Discrete Fourier transform
// ----------------------------------------------------------------------------

ComplexVector dft(const ComplexVector& x);
ComplexVector idft(const ComplexVector& x);

/// Frequency of DFT bin k, 2 pi k / n.
inline double dft_frequency(int k, int n) { return 2.0 * kPi * k / n; }

// ----------------------------------------------------------------------------
// Circulant operators
// ----------------------------------------------------------------------------

/// Periodic convolution (C u)_i = sum_d s_d u_{(i - d) mod n}.
class CirculantOperator {
public:
    CirculantOperator() = default;
    CirculantOperator(std::map<int, Complex> stencil, int size);

    static CirculantOperator identity(int size);
    static CirculantOperator scalar(Complex value, int size);

    int size() const { return size_; }
    const std::map<int, Complex>& stencil() const { return stencil_; }

    /// Sum of stencil coefficients, snapped to the nearest integer when within 1e-13.
    Complex mass() const { return mass_; }

    ComplexVector apply(const ComplexVector& u) const;
    ComplexVector apply_spectral(const ComplexVector& u) const;
    /// Solves C x = y through the DFT; throws when an eigenvalue vanishes.
    ComplexVector solve(const ComplexVector& y) const;

    /// sum_d s_d exp(-i w d) at any real w.
    Complex symbol(double omega) const;
    /// sum_d s_d expm1(-i w (d - shift)); symbol = exp(-i w shift) (mass + this).
    Complex symbol_remainder(double omega, double shift) const;
    /// Eigenvalues at the DFT bins, index k <-> w = 2 pi k / n.
    const ComplexVector& eigenvalues() const { return eigenvalues_; }

    ComplexMatrix to_dense() const;

private:
    std::map<int, Complex> stencil_;
    int size_ = 0;
    Complex mass_{0.0, 0.0};
    ComplexVector eigenvalues_;
};

/// Eigenvalue of the circulant for Fourier eigenvector k.
Complex dft_symbol(const CirculantOperator& op, int k);

// ----------------------------------------------------------------------------
// Dense complex matrices
// ----------------------------------------------------------------------------

inline constexpr int kDefaultEigenMaxDim = 64;

/// Largest singular value.
double spectral_norm(const ComplexMatrix& m);
/// Largest eigenvalue modulus; dimensions above max_dim are refused.
double spectral_radius(const ComplexMatrix& m, int max_dim = kDefaultEigenMaxDim);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace mgrit_lfa
