#include "mgrit_lfa/mgrit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Sparse>

namespace mgrit_lfa {

namespace {

constexpr double kDivergenceFactor = 1e12;
// Coarse-grid singular values below this are treated as exact zeros (periodic mode).
constexpr double kSingularTol = 1e-11;

}  // namespace

std::string to_string(BoundaryMode mode) {
    return mode == BoundaryMode::InitialValue ? "initial-value" : "time-periodic";
}

BoundaryMode parse_boundary_mode(const std::string& s) {
    if (s == "initial-value" || s == "ivp") return BoundaryMode::InitialValue;
    if (s == "time-periodic" || s == "periodic") return BoundaryMode::TimePeriodic;
    throw std::invalid_argument("unknown boundary mode '" + s + "'");
}

std::string to_string(SolveStatus status) {
    switch (status) {
        case SolveStatus::Converged: return "converged";
        case SolveStatus::MaxIters: return "max-iters";
        case SolveStatus::Diverged: return "diverged";
    }
    return "unknown";
}

void MgritConfig::validate() const {
    if (m < 2) throw std::invalid_argument("coarsening factor m must be at least 2");
    if (nu < 0) throw std::invalid_argument("nu must be nonnegative");
    if (n_t <= 0 || n_t % m != 0) throw std::invalid_argument("n_t must be a positive multiple of m");
    if (max_iters < 0) throw std::invalid_argument("max_iters must be nonnegative");
    if (!(residual_tol >= 0.0)) throw std::invalid_argument("residual_tol must be nonnegative");
}

SpaceTimeVector::SpaceTimeVector(int n_t, int n_x, ComplexVector values)
    : n_t_(n_t), n_x_(n_x), values_(std::move(values)) {
    if (values_.size() != std::int64_t{n_t} * n_x) throw std::invalid_argument("space-time vector: size mismatch");
}

std::uint64_t SplitMix64::next() {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

SpaceTimeVector SpaceTimeVector::random_uniform(int n_t, int n_x, std::uint64_t seed) {
    SpaceTimeVector v(n_t, n_x);
    SplitMix64 rng(seed);
    for (std::int64_t i = 0; i < v.values_.size(); ++i) v.values_[i] = Complex{rng.uniform(), 0.0};
    return v;
}

// ============================================================================
// Solver
// ============================================================================

MgritSolver::MgritSolver(TimeStepper phi, TimeStepper psi, MgritConfig config)
    : phi_(std::move(phi)), psi_(std::move(psi)), config_(config) {
    config_.validate();
    if (phi_.empty() || psi_.empty()) throw std::invalid_argument("MGRIT needs fine and coarse steppers");
    if (phi_.size() != psi_.size()) throw std::invalid_argument("fine and coarse steppers differ in spatial size");
    if (config_.boundary == BoundaryMode::TimePeriodic) psi_eigenvalues_ = psi_.eigenvalues();
}

void MgritSolver::check_shape(const SpaceTimeVector& v) const {
    if (v.n_t() != config_.n_t || v.n_x() != n_x()) throw std::invalid_argument("space-time vector shape mismatch");
}

SpaceTimeVector MgritSolver::residual(const SpaceTimeVector& u, const SpaceTimeVector& b) const {
    check_shape(u);
    check_shape(b);
    SpaceTimeVector r = b;
    const int n_t = config_.n_t;
    for (int n = 0; n < n_t; ++n) {
        r.block(n) -= u.block(n);
        if (n > 0)
            r.block(n) += phi_.apply(u.block(n - 1));
        else if (config_.boundary == BoundaryMode::TimePeriodic)
            r.block(0) += phi_.apply(u.block(n_t - 1));
    }
    return r;
}

void MgritSolver::f_relax(SpaceTimeVector& u, const SpaceTimeVector& b) const {
    check_shape(u);
    check_shape(b);
    const int m = config_.m;
    for (int k = 0; k < config_.n_coarse(); ++k)
        for (int j = 1; j < m; ++j) {
            const int i = k * m + j;
            u.block(i) = phi_.apply(u.block(i - 1)) + b.block(i);
        }
}

void MgritSolver::c_relax(SpaceTimeVector& u, const SpaceTimeVector& b) const {
    check_shape(u);
    check_shape(b);
    const int m = config_.m;
    for (int k = 1; k < config_.n_coarse(); ++k) u.block(k * m) = phi_.apply(u.block(k * m - 1)) + b.block(k * m);
    if (config_.boundary == BoundaryMode::TimePeriodic)
        u.block(0) = phi_.apply(u.block(config_.n_t - 1)) + b.block(0);
    else
        u.block(0) = b.block(0);
}

std::vector<ComplexVector> MgritSolver::coarse_solve(const std::vector<ComplexVector>& r) const {
    const int nc = config_.n_coarse();
    if (static_cast<int>(r.size()) != nc) throw std::invalid_argument("coarse solve: wrong number of blocks");
    std::vector<ComplexVector> e(static_cast<std::size_t>(nc));

    if (config_.boundary == BoundaryMode::InitialValue) {
        e[0] = r[0];
        for (int k = 1; k < nc; ++k) e[k] = psi_.apply(e[k - 1]) + r[k];
        return e;
    }

    // Periodic: decouple spatial modes; each is a scalar cyclic recurrence.
    const int nx = n_x();
    std::vector<ComplexVector> rh(static_cast<std::size_t>(nc));
    for (int k = 0; k < nc; ++k) rh[k] = dft(r[k]);
    std::vector<ComplexVector> eh(static_cast<std::size_t>(nc), ComplexVector::Zero(nx));
    for (int j = 0; j < nx; ++j) {
        const Complex mu = psi_eigenvalues_[j];
        double min_sv = std::numeric_limits<double>::infinity();
        for (int l = 0; l < nc; ++l)
            min_sv = std::min(min_sv, std::abs(1.0 - mu * std::exp(-kI * (2.0 * kPi * l / nc))));
        if (min_sv > kSingularTol) {
            // e_0 = mu e_{nc-1} + r_0 and e_{nc-1} = mu^{nc-1} e_0 + z.
            Complex z{0.0, 0.0};
            for (int k = 1; k < nc; ++k) z = mu * z + rh[k][j];
            const Complex e0 = (mu * z + rh[0][j]) / (1.0 - std::pow(mu, nc));
            eh[0][j] = e0;
            for (int k = 1; k < nc; ++k) eh[k][j] = mu * eh[k - 1][j] + rh[k][j];
        } else {
            // Minimum-norm solution through the temporal DFT.
            for (int l = 0; l < nc; ++l) {
                const Complex wl = std::exp(-kI * (2.0 * kPi * l / nc));
                const Complex d = 1.0 - mu * wl;
                if (std::abs(d) <= kSingularTol) continue;
                Complex a{0.0, 0.0};
                for (int k = 0; k < nc; ++k) a += rh[k][j] * std::pow(wl, k);
                a /= d * static_cast<double>(nc);
                for (int k = 0; k < nc; ++k) eh[k][j] += a * std::pow(std::conj(wl), k);
            }
        }
    }
    for (int k = 0; k < nc; ++k) e[k] = idft(eh[k]);
    return e;
}

void MgritSolver::coarse_correct(SpaceTimeVector& u, const SpaceTimeVector& b) const {
    const SpaceTimeVector r = residual(u, b);
    const int m = config_.m;
    std::vector<ComplexVector> rc(static_cast<std::size_t>(config_.n_coarse()));
    for (int k = 0; k < config_.n_coarse(); ++k) rc[k] = r.block(k * m);
    const auto e = coarse_solve(rc);
    for (int k = 0; k < config_.n_coarse(); ++k) u.block(k * m) += e[k];
}

void MgritSolver::cycle(SpaceTimeVector& u, const SpaceTimeVector& b) const {
    f_relax(u, b);
    for (int s = 0; s < config_.nu; ++s) {
        c_relax(u, b);
        f_relax(u, b);
    }
    coarse_correct(u, b);
    f_relax(u, b);
}

SolveHistory MgritSolver::solve(SpaceTimeVector& u, const SpaceTimeVector& b) const {
    SolveHistory h;
    const double r0 = residual(u, b).norm();
    h.residual_norms.push_back(r0);
    if (r0 == 0.0) {
        h.status = SolveStatus::Converged;
        return h;
    }
    for (int it = 1; it <= config_.max_iters; ++it) {
        cycle(u, b);
        const double r = residual(u, b).norm();
        h.residual_norms.push_back(r);
        if (!std::isfinite(r) || r > kDivergenceFactor * r0) {
            h.status = SolveStatus::Diverged;
            h.diagnostic = "residual grew beyond 1e12 times its initial value at iteration " + std::to_string(it);
            return h;
        }
        if (r <= config_.residual_tol * r0) {
            h.status = SolveStatus::Converged;
            return h;
        }
    }
    h.status = SolveStatus::MaxIters;
    return h;
}

// ============================================================================
// Measured convergence factor
// ============================================================================

double measured_factor_from_history(const SolveHistory& history, const MgritConfig& config, int* window_end) {
    constexpr int kWindow = 5;
    const int k_stop = history.iterations();
    const int k_exact =
        config.boundary == BoundaryMode::InitialValue ? config.exactness_iterations() : std::numeric_limits<int>::max();
    const int last = std::min(k_stop, k_exact) - 1;
    if (last < kWindow)
        throw InsufficientIterations("insufficient iterations to measure: " + std::to_string(k_stop) +
                                     " completed, window needs 6");
    double log_sum = 0.0;
    for (int i = last - kWindow + 1; i <= last; ++i) {
        const double prev = history.residual_norms[i - 1];
        const double cur = history.residual_norms[i];
        if (prev == 0.0 || cur == 0.0) return 0.0;
        log_sum += std::log(cur / prev);
    }
    if (window_end) *window_end = last;
    return std::exp(log_sum / kWindow);
}

MeasuredFactor measured_convergence_factor(const TimeStepper& phi, const TimeStepper& psi, const MgritConfig& config,
                                           std::uint64_t seed) {
    MgritSolver solver(phi, psi, config);
    SpaceTimeVector u = SpaceTimeVector::random_uniform(config.n_t, phi.size(), seed);
    const SpaceTimeVector b(config.n_t, phi.size());
    MeasuredFactor out;
    out.history = solver.solve(u, b);
    out.value = measured_factor_from_history(out.history, config, &out.window_end);
    return out;
}

// ============================================================================
// Dense propagator
// ============================================================================

namespace {

using SparseMatrix = Eigen::SparseMatrix<Complex>;
using Triplet = Eigen::Triplet<Complex>;

void add_block(std::vector<Triplet>& t, int row_block, int col_block, const ComplexMatrix& b) {
    const int n = static_cast<int>(b.rows());
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
            if (b(i, j) != Complex{0.0, 0.0}) t.emplace_back(row_block * n + i, col_block * n + j, b(i, j));
}

ComplexMatrix pseudo_inverse(const ComplexMatrix& a, double tol) {
    Eigen::BDCSVD<ComplexMatrix> svd(a, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::VectorXd inv = svd.singularValues();
    for (Eigen::Index i = 0; i < inv.size(); ++i) inv[i] = inv[i] > tol ? 1.0 / inv[i] : 0.0;
    return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

}  // namespace

SpaceTimeVector DensePropagator::apply(const SpaceTimeVector& e) const {
    if (e.n_t() != n_t || e.n_x() != n_x) throw std::invalid_argument("dense propagator: shape mismatch");
    return SpaceTimeVector(n_t, n_x, matrix * e.values());
}

DensePropagator assemble_dense_propagator(const TimeStepper& phi, const TimeStepper& psi, const MgritConfig& config,
                                          std::int64_t max_unknowns) {
    config.validate();
    if (phi.size() != psi.size()) throw std::invalid_argument("fine and coarse steppers differ in spatial size");
    const int nx = phi.size();
    const int nt = config.n_t;
    const int m = config.m;
    const int nc = config.n_coarse();
    const std::int64_t n = std::int64_t{nx} * nt;
    if (n > max_unknowns)
        throw std::invalid_argument("dense propagator: " + std::to_string(n) + " unknowns exceed the cap of " +
                                    std::to_string(max_unknowns));
    const bool periodic = config.boundary == BoundaryMode::TimePeriodic;

    const ComplexMatrix Phi = phi.to_dense();
    const ComplexMatrix Psi = psi.to_dense();
    const ComplexMatrix I = ComplexMatrix::Identity(nx, nx);
    std::vector<ComplexMatrix> pw{I};
    for (int j = 1; j <= m; ++j) pw.push_back(Phi * pw.back());

    // S^F = I_nc (x) [e_1^T (x) v(Phi)],  v(Phi) = [I; Phi; ...; Phi^{m-1}]
    std::vector<Triplet> t;
    for (int k = 0; k < nc; ++k)
        for (int j = 0; j < m; ++j) add_block(t, k * m + j, k * m, pw[j]);
    SparseMatrix SF(n, n);
    SF.setFromTriplets(t.begin(), t.end());

    // S^CF = L_nc (x) [e_m^T (x) v(Phi) Phi]; the cyclic shift replaces L when periodic.
    t.clear();
    for (int k = 0; k < nc; ++k) {
        int src = k - 1;
        if (src < 0) {
            if (!periodic) continue;
            src = nc - 1;
        }
        for (int j = 0; j < m; ++j) add_block(t, k * m + j, src * m + m - 1, pw[j + 1]);
    }
    SparseMatrix SCF(n, n);
    SCF.setFromTriplets(t.begin(), t.end());

    // A0: identity diagonal, -Phi subdiagonal (and corner).
    t.clear();
    for (int i = 0; i < nt; ++i) {
        add_block(t, i, i, I);
        if (i > 0) add_block(t, i, i - 1, -Phi);
    }
    if (periodic) add_block(t, 0, nt - 1, -Phi);
    SparseMatrix A0(n, n);
    A0.setFromTriplets(t.begin(), t.end());

    const std::int64_t ncx = std::int64_t{nc} * nx;
    ComplexMatrix A1 = ComplexMatrix::Identity(ncx, ncx);
    for (int k = 1; k < nc; ++k) A1.block(std::int64_t{k} * nx, std::int64_t{k - 1} * nx, nx, nx) = -Psi;
    if (periodic) A1.block(0, std::int64_t{nc - 1} * nx, nx, nx) -= Psi;

    ComplexMatrix X = ComplexMatrix(SF);
    for (int s = 0; s < config.nu; ++s) X = SCF * X;
    const ComplexMatrix Y = A0 * X;
    ComplexMatrix Z(ncx, n);  // P^T A0 X
    for (int k = 0; k < nc; ++k) Z.middleRows(std::int64_t{k} * nx, nx) = Y.middleRows(std::int64_t{k} * m * nx, nx);
    const ComplexMatrix W = periodic ? ComplexMatrix(pseudo_inverse(A1, kSingularTol) * Z)
                                     : ComplexMatrix(A1.partialPivLu().solve(Z));
    for (int k = 0; k < nc; ++k) X.middleRows(std::int64_t{k} * m * nx, nx) -= W.middleRows(std::int64_t{k} * nx, nx);

    DensePropagator out;
    out.n_t = nt;
    out.n_x = nx;
    out.matrix = SF * X;
    return out;
}

ComplexMatrix deflate_unit_modes(const DensePropagator& e, const TimeStepper& phi, const TimeStepper& psi, double tol) {
    const int nx = e.n_x;
    const ComplexVector lam = phi.eigenvalues();
    const ComplexVector mu = psi.eigenvalues();
    // Projector onto the unit modes, (1/n) sum_k exp(i w_k (a - b)).
    ComplexMatrix proj = ComplexMatrix::Zero(nx, nx);
    for (int k = 0; k < nx; ++k) {
        if (std::abs(lam[k]) < 1.0 - tol && std::abs(mu[k]) < 1.0 - tol) continue;
        for (int a = 0; a < nx; ++a)
            for (int b = 0; b < nx; ++b) proj(a, b) += std::exp(kI * (dft_frequency(k, nx) * (a - b))) / double(nx);
    }
    const ComplexMatrix keep = ComplexMatrix::Identity(nx, nx) - proj;
    ComplexMatrix out(e.matrix.rows(), e.matrix.cols());
    for (int blk = 0; blk < e.n_t; ++blk)
        out.middleCols(std::int64_t{blk} * nx, nx) = e.matrix.middleCols(std::int64_t{blk} * nx, nx) * keep;
    return out;
}

ComplexMatrix cpoint_columns(const ComplexMatrix& e, int n_t, int n_x, int m) {
    if (m < 1 || n_t % m != 0 || e.cols() != std::int64_t{n_t} * n_x)
        throw std::invalid_argument("cpoint_columns: shape does not match n_t, n_x, m");
    const int nc = n_t / m;
    ComplexMatrix out(e.rows(), std::int64_t{nc} * n_x);
    for (int j = 0; j < nc; ++j)
        out.middleCols(std::int64_t{j} * n_x, n_x) = e.middleCols(std::int64_t{j} * m * n_x, n_x);
    return out;
}

ComplexMatrix cpoint_block(const ComplexMatrix& e, int n_t, int n_x, int m) {
    if (e.rows() != e.cols()) throw std::invalid_argument("cpoint_block: matrix must be square");
    const ComplexMatrix cols = cpoint_columns(e, n_t, n_x, m);
    const int nc = n_t / m;
    ComplexMatrix out(std::int64_t{nc} * n_x, cols.cols());
    for (int j = 0; j < nc; ++j) out.middleRows(std::int64_t{j} * n_x, n_x) = cols.middleRows(std::int64_t{j} * m * n_x, n_x);
    return out;
}

}  // namespace mgrit_lfa
