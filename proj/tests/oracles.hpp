// Independent reference computations used only by the tests.
#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

namespace oracle {

using C = std::complex<double>;
using Vec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXcd;

inline constexpr double kPi = 3.14159265358979323846;

// O(n^2) forward transform with exp(-2 pi i jk/n), no scaling.
inline Vec naive_dft(const Vec& x) {
    const auto n = x.size();
    Vec y = Vec::Zero(n);
    for (Eigen::Index k = 0; k < n; ++k)
        for (Eigen::Index j = 0; j < n; ++j)
            y[k] += x[j] * std::polar(1.0, -2.0 * kPi * static_cast<double>((k * j) % n) / static_cast<double>(n));
    return y;
}

inline C stencil_symbol(const std::map<int, C>& s, double omega) {
    C acc = 0.0;
    for (const auto& [d, v] : s) acc += v * std::polar(1.0, -omega * d);
    return acc;
}

// Dense periodic matrix with (Au)_i = sum_d s_d u_{i-d}.
inline Mat circulant_dense(const std::map<int, C>& s, int n) {
    Mat a = Mat::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (const auto& [d, v] : s) a(i, ((i - d) % n + n) % n) += v;
    return a;
}

// Interpolation weights at -eps from the nodes -(p+1)/2 .. (p-1)/2 via a Vandermonde solve.
inline std::vector<double> vandermonde_weights(int p, double eps) {
    const int n = p + 1;
    Eigen::MatrixXd v(n, n);
    Eigen::VectorXd rhs(n);
    for (int k = 0; k < n; ++k) {
        for (int j = 0; j < n; ++j) v(k, j) = std::pow(static_cast<double>(j - (p + 1) / 2), k);
        rhs[k] = std::pow(-eps, k);
    }
    const Eigen::VectorXd w = v.fullPivLu().solve(rhs);
    return {w.data(), w.data() + n};
}

// (1/(p+1)!) prod_{q} (q + z), evaluated in long double.
inline double truncation_poly(int p, double z) {
    long double prod = 1.0L, fact = 1.0L;
    for (int q = -(p + 1) / 2; q <= (p - 1) / 2; ++q) prod *= static_cast<long double>(q) + z;
    for (int k = 2; k <= p + 1; ++k) fact *= k;
    return static_cast<double>(prod / fact);
}

// Largest singular value by power iteration on M^H M.
inline double power_norm(const Mat& m, int iters = 5000) {
    Vec v = Vec::Ones(m.cols());
    double sigma = 0.0;
    for (int k = 0; k < iters; ++k) {
        const Vec w = m.adjoint() * (m * v);
        const double nw = w.norm();
        if (nw == 0.0) return 0.0;
        sigma = std::sqrt(nw / v.norm());
        v = w / nw;
    }
    return sigma;
}

// Dominant eigenvalue modulus by power iteration with Rayleigh quotient.
inline double power_radius(const Mat& m, int iters = 20000) {
    Vec v = Vec::Ones(m.cols());
    C lambda = 0.0;
    for (int k = 0; k < iters; ++k) {
        const Vec w = m * v;
        const double nw = w.norm();
        if (nw == 0.0) return 0.0;
        lambda = v.dot(w) / v.squaredNorm();
        v = w / nw;
    }
    return std::abs(lambda);
}

// Two-level cycle for the scalar problem u_i = lam u_{i-1}, applied to an error vector.
// Zero right-hand side; the cycle maps e to E e.
struct ScalarCycle {
    C lam, mu;
    int m, nu, n_t;
    bool periodic;

    void f_relax(Vec& e) const {
        for (int c = 0; c < n_t; c += m)
            for (int i = c + 1; i < c + m; ++i) e[i] = lam * e[i - 1];
    }
    void c_relax(Vec& e) const {
        for (int c = 0; c < n_t; c += m) {
            if (c == 0) e[0] = periodic ? lam * e[n_t - 1] : C(0.0);
            else e[c] = lam * e[c - 1];
        }
    }
    Vec apply(Vec e) const {
        f_relax(e);
        for (int k = 0; k < nu; ++k) {
            c_relax(e);
            f_relax(e);
        }
        // Residual of A e = 0 at C-points, then solve the coarse system densely.
        const int nc = n_t / m;
        Vec r(nc);
        for (int j = 0; j < nc; ++j) {
            const int c = j * m;
            const C prev = c == 0 ? (periodic ? e[n_t - 1] : C(0.0)) : e[c - 1];
            r[j] = -(e[c] - lam * prev);
        }
        Mat a1 = Mat::Identity(nc, nc);
        for (int j = 1; j < nc; ++j) a1(j, j - 1) = -mu;
        if (periodic) a1(0, nc - 1) -= mu;
        const Vec v = a1.fullPivLu().solve(r);
        for (int j = 0; j < nc; ++j) e[j * m] += v[j];
        f_relax(e);
        return e;
    }
    Mat dense() const {
        Mat out(n_t, n_t);
        for (int j = 0; j < n_t; ++j) out.col(j) = apply(Vec::Unit(n_t, j));
        return out;
    }
};

// Restriction of a shift-by-m invariant operator to the harmonics {theta + 2 pi a / m}.
inline Mat harmonic_block(const Mat& e, double theta, int m) {
    const auto n = e.rows();
    Mat v(n, m);
    for (int a = 0; a < m; ++a)
        for (Eigen::Index t = 0; t < n; ++t)
            v(t, a) = std::polar(1.0 / std::sqrt(static_cast<double>(n)), (theta + 2.0 * kPi * a / m) * t);
    return v.adjoint() * e * v;
}

inline C random_in_disk(std::mt19937_64& rng, double r_max) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return std::polar(r_max * std::sqrt(u(rng)), 2.0 * kPi * u(rng));
}

}  // namespace oracle
