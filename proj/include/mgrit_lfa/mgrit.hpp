/// @file mgrit.hpp
/// @brief Two-level MGRIT for u_n = Phi u_{n-1} + g_n with circulant Phi and Psi,
/// plus a dense assembly of its error propagator.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mgrit_lfa/fourier.hpp"
#include "mgrit_lfa/stepper.hpp"

namespace mgrit_lfa {

enum class BoundaryMode { InitialValue, TimePeriodic };

std::string to_string(BoundaryMode mode);
BoundaryMode parse_boundary_mode(const std::string& s);

struct MgritConfig {
    int m = 2;
    int nu = 0;
    int n_t = 0;
    BoundaryMode boundary = BoundaryMode::InitialValue;
    int max_iters = 100;
    /// Stop once the residual norm falls below residual_tol times the initial one.
    double residual_tol = 1e-10;

    void validate() const;
    int n_coarse() const { return n_t / m; }
    /// Iteration count after which the initial-value solve is exact, ceil(n_coarse / (nu + 1)).
    int exactness_iterations() const { return (n_coarse() + nu) / (nu + 1); }
};

class SpaceTimeVector {
public:
    SpaceTimeVector() = default;
    SpaceTimeVector(int n_t, int n_x) : n_t_(n_t), n_x_(n_x), values_(ComplexVector::Zero(std::int64_t{n_t} * n_x)) {}
    SpaceTimeVector(int n_t, int n_x, ComplexVector values);

    /// Entries uniform on [0, 1) from a SplitMix64 stream.
    static SpaceTimeVector random_uniform(int n_t, int n_x, std::uint64_t seed);

    int n_t() const { return n_t_; }
    int n_x() const { return n_x_; }
    const ComplexVector& values() const { return values_; }
    ComplexVector& values() { return values_; }

    auto block(int n) { return values_.segment(std::int64_t{n} * n_x_, n_x_); }
    auto block(int n) const { return values_.segment(std::int64_t{n} * n_x_, n_x_); }

    double norm() const { return values_.norm(); }

private:
    int n_t_ = 0;
    int n_x_ = 0;
    ComplexVector values_;
};

struct SplitMix64 {
    std::uint64_t state;
    explicit SplitMix64(std::uint64_t seed) : state(seed) {}
    std::uint64_t next();
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
};

enum class SolveStatus { Converged, MaxIters, Diverged };
std::string to_string(SolveStatus status);

struct SolveHistory {
    /// residual_norms[k] is the residual after k iterations.
    std::vector<double> residual_norms;
    SolveStatus status = SolveStatus::MaxIters;
    std::string diagnostic;

    int iterations() const { return static_cast<int>(residual_norms.size()) - 1; }
};

class MgritSolver {
public:
    MgritSolver(TimeStepper phi, TimeStepper psi, MgritConfig config);

    const MgritConfig& config() const { return config_; }
    int n_x() const { return phi_.size(); }

    /// r = b - A0 u.
    SpaceTimeVector residual(const SpaceTimeVector& u, const SpaceTimeVector& b) const;

    void f_relax(SpaceTimeVector& u, const SpaceTimeVector& b) const;
    void c_relax(SpaceTimeVector& u, const SpaceTimeVector& b) const;
    /// Injected residual, exact coarse solve, C-point update.
    void coarse_correct(SpaceTimeVector& u, const SpaceTimeVector& b) const;
    /// F(CF)^nu pre-relaxation, coarse correction, F post-relaxation.
    void cycle(SpaceTimeVector& u, const SpaceTimeVector& b) const;

    SolveHistory solve(SpaceTimeVector& u, const SpaceTimeVector& b) const;

    /// Solves A1 e = r on the coarse grid (pseudo-inverse on singular periodic modes).
    std::vector<ComplexVector> coarse_solve(const std::vector<ComplexVector>& r) const;

private:
    void check_shape(const SpaceTimeVector& v) const;

    TimeStepper phi_;
    TimeStepper psi_;
    MgritConfig config_;
    ComplexVector psi_eigenvalues_;
};

class InsufficientIterations : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct MeasuredFactor {
    double value = 0.0;
    SolveHistory history;
    int window_end = 0;  ///< last iteration used
};

/// Zero source, random initial iterate; geometric mean of the last five residual
/// ratios preceding both the stopping iteration and the exactness count.
MeasuredFactor measured_convergence_factor(const TimeStepper& phi, const TimeStepper& psi, const MgritConfig& config,
                                           std::uint64_t seed);
double measured_factor_from_history(const SolveHistory& history, const MgritConfig& config, int* window_end = nullptr);

// ----------------------------------------------------------------------------
// Dense error propagator
// ----------------------------------------------------------------------------

inline constexpr std::int64_t kDensePropagatorMaxUnknowns = 4096;

struct DensePropagator {
    ComplexMatrix matrix;
    int n_t = 0;
    int n_x = 0;

    SpaceTimeVector apply(const SpaceTimeVector& e) const;
};

/// E = S^F K (S^CF)^nu S^F with K = I - P A1^{-1} P^T A0 assembled from explicit block matrices.
DensePropagator assemble_dense_propagator(const TimeStepper& phi, const TimeStepper& psi, const MgritConfig& config,
                                          std::int64_t max_unknowns = kDensePropagatorMaxUnknowns);

/// E restricted to the spatial Fourier modes whose fine and coarse eigenvalues are both off the unit circle.
ComplexMatrix deflate_unit_modes(const DensePropagator& e, const TimeStepper& phi, const TimeStepper& psi,
                                 double tol = 1e-12);

/// Columns of E at C-points. The cycle starts with F-relaxation, which overwrites
/// F-points, so the remaining columns are zero and ||E|| = ||E[:, C]||.
ComplexMatrix cpoint_columns(const ComplexMatrix& e, int n_t, int n_x, int m);
/// E[C, C]. With zero F-columns E is block triangular, so rho(E) = rho(E[C, C]).
ComplexMatrix cpoint_block(const ComplexMatrix& e, int n_t, int n_x, int m);

}  // namespace mgrit_lfa
