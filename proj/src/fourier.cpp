#include "mgrit_lfa/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>

#include <fftw3.h>

namespace mgrit_lfa {

Complex expm1_i(double x) {
    const double s = std::sin(0.5 * x);
    return {-2.0 * s * s, std::sin(x)};
}

// ============================================================================
// Frequency grids
// ============================================================================

FrequencyGrid FrequencyGrid::spatial(int n_points) {
    if (n_points <= 0) throw std::invalid_argument("spatial grid needs a positive point count");
    std::vector<double> v(static_cast<std::size_t>(n_points));
    const int half = n_points / 2;
    for (int k = 0; k < n_points; ++k) v[static_cast<std::size_t>(k)] = 2.0 * kPi * (k - half) / n_points;
    return FrequencyGrid(GridKind::Spatial, 1, std::move(v));
}

FrequencyGrid FrequencyGrid::temporal_low(int n_points, int m) {
    if (n_points <= 0) throw std::invalid_argument("temporal grid needs a positive point count");
    if (m < 1) throw std::invalid_argument("coarsening factor must be positive");
    std::vector<double> v(static_cast<std::size_t>(n_points));
    for (int k = 0; k < n_points; ++k)
        v[static_cast<std::size_t>(k)] = -kPi / m + (2.0 * kPi / m) * k / n_points;
    return FrequencyGrid(GridKind::TemporalLow, m, std::move(v));
}

FrequencyGrid FrequencyGrid::temporal_full(int n_points, int m) {
    if (n_points <= 0) throw std::invalid_argument("temporal grid needs a positive point count");
    if (m < 1) throw std::invalid_argument("coarsening factor must be positive");
    std::vector<double> v(static_cast<std::size_t>(n_points));
    for (int k = 0; k < n_points; ++k) v[static_cast<std::size_t>(k)] = -kPi / m + 2.0 * kPi * k / n_points;
    return FrequencyGrid(GridKind::TemporalFull, m, std::move(v));
}

int FrequencyGrid::zero_index() const {
    auto it = std::min_element(values_.begin(), values_.end(),
                               [](double a, double b) { return std::abs(a) < std::abs(b); });
    return static_cast<int>(it - values_.begin());
}

// ============================================================================
// DFT (FFTW, unnormalised forward)
// ============================================================================

namespace {

// FFTW planning is not thread-safe; execution with fresh arrays is.
std::mutex& planner_mutex() {
    static std::mutex mu;
    return mu;
}

ComplexVector fftw_transform(const ComplexVector& x, int sign) {
    const int n = static_cast<int>(x.size());
    ComplexVector out(n);
    if (n == 0) return out;
    ComplexVector in = x;
    auto* pin = reinterpret_cast<fftw_complex*>(in.data());
    auto* pout = reinterpret_cast<fftw_complex*>(out.data());
    fftw_plan plan;
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        plan = fftw_plan_dft_1d(n, pin, pout, sign, FFTW_ESTIMATE);
    }
    fftw_execute(plan);
    {
        std::lock_guard<std::mutex> lock(planner_mutex());
        fftw_destroy_plan(plan);
    }
    return out;
}

void require_finite(const ComplexMatrix& m, const char* what) {
    if (!m.allFinite()) throw std::invalid_argument(std::string(what) + ": matrix has NaN or Inf entries");
}

}  // namespace

ComplexVector dft(const ComplexVector& x) { return fftw_transform(x, FFTW_FORWARD); }

ComplexVector idft(const ComplexVector& x) {
    ComplexVector y = fftw_transform(x, FFTW_BACKWARD);
    if (y.size() > 0) y /= static_cast<double>(y.size());
    return y;
}

// ============================================================================
// Circulant operators
// ============================================================================

CirculantOperator::CirculantOperator(std::map<int, Complex> stencil, int size)
    : stencil_(std::move(stencil)), size_(size) {
    if (size_ <= 0) throw std::invalid_argument("circulant size must be positive");
    Complex sum{0.0, 0.0};
    for (const auto& [d, s] : stencil_) {
        if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
            throw std::invalid_argument("circulant stencil has non-finite coefficient");
        sum += s;
    }
    const Complex snapped{std::round(sum.real()), std::round(sum.imag())};
    mass_ = std::abs(sum - snapped) < 1e-13 ? snapped : sum;

    // Eigenvalues are the DFT of the first column c_j = sum_{d = j mod n} s_d.
    ComplexVector column = ComplexVector::Zero(size_);
    for (const auto& [d, s] : stencil_) {
        const int j = ((d % size_) + size_) % size_;
        column[j] += s;
    }
    eigenvalues_ = dft(column);
}

CirculantOperator CirculantOperator::identity(int size) { return CirculantOperator({{0, Complex{1.0, 0.0}}}, size); }

CirculantOperator CirculantOperator::scalar(Complex value, int size) { return CirculantOperator({{0, value}}, size); }

ComplexVector CirculantOperator::apply(const ComplexVector& u) const {
    if (u.size() != size_) throw std::invalid_argument("circulant apply: size mismatch");
    ComplexVector out = ComplexVector::Zero(size_);
    for (const auto& [d, s] : stencil_) {
        const int shift = ((d % size_) + size_) % size_;
        for (int i = 0; i < size_; ++i) {
            int src = i - shift;
            if (src < 0) src += size_;
            out[i] += s * u[src];
        }
    }
    return out;
}

ComplexVector CirculantOperator::apply_spectral(const ComplexVector& u) const {
    if (u.size() != size_) throw std::invalid_argument("circulant apply: size mismatch");
    return idft(eigenvalues_.cwiseProduct(dft(u)));
}

ComplexVector CirculantOperator::solve(const ComplexVector& y) const {
    if (y.size() != size_) throw std::invalid_argument("circulant solve: size mismatch");
    const double scale = std::max(1.0, eigenvalues_.cwiseAbs().maxCoeff());
    for (int k = 0; k < size_; ++k)
        if (std::abs(eigenvalues_[k]) <= 1e-14 * scale) throw std::domain_error("circulant solve: singular symbol");
    return idft(dft(y).cwiseQuotient(eigenvalues_));
}

Complex CirculantOperator::symbol(double omega) const {
    Complex sum{0.0, 0.0};
    for (const auto& [d, s] : stencil_) sum += s * std::exp(-kI * (omega * d));
    return sum;
}

Complex CirculantOperator::symbol_remainder(double omega, double shift) const {
    Complex sum{0.0, 0.0};
    for (const auto& [d, s] : stencil_) sum += s * expm1_i(-omega * (d - shift));
    return sum;
}

ComplexMatrix CirculantOperator::to_dense() const {
    ComplexMatrix m = ComplexMatrix::Zero(size_, size_);
    for (const auto& [d, s] : stencil_) {
        const int shift = ((d % size_) + size_) % size_;
        for (int i = 0; i < size_; ++i) m(i, (i - shift + size_) % size_) += s;
    }
    return m;
}

Complex dft_symbol(const CirculantOperator& op, int k) {
    if (k < 0 || k >= op.size()) throw std::out_of_range("dft_symbol: frequency index out of range");
    return op.symbol(dft_frequency(k, op.size()));
}

// ============================================================================
// Dense norms
// ============================================================================

double spectral_norm(const ComplexMatrix& m) {
    require_finite(m, "spectral_norm");
    if (m.size() == 0) return 0.0;
    Eigen::BDCSVD<ComplexMatrix> svd(m);
    return svd.singularValues().size() ? svd.singularValues()[0] : 0.0;
}

double spectral_radius(const ComplexMatrix& m, int max_dim) {
    require_finite(m, "spectral_radius");
    if (m.rows() != m.cols()) throw std::invalid_argument("spectral_radius: matrix must be square");
    if (m.rows() > max_dim)
        throw std::invalid_argument("spectral_radius: dimension " + std::to_string(m.rows()) +
                                    " exceeds the eigensolve limit " + std::to_string(max_dim));
    if (m.size() == 0) return 0.0;
    Eigen::ComplexEigenSolver<ComplexMatrix> es(m, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success) throw std::runtime_error("spectral_radius: eigensolve failed");
    return es.eigenvalues().cwiseAbs().maxCoeff();
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need two or more points");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(y[i]))
            throw std::domain_error("loglog_slope: values must be positive and finite");
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(y[i]) - my);
    }
    if (sxx == 0.0) throw std::domain_error("loglog_slope: degenerate abscissae");
    return sxy / sxx;
}

}  // namespace mgrit_lfa
