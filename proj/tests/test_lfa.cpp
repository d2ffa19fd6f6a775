#include <doctest.h>

#include <random>

#include "mgrit_lfa/advection.hpp"
#include "mgrit_lfa/lfa.hpp"
#include "oracles.hpp"

using namespace mgrit_lfa;

namespace {

TemporalSymbolInput input(Complex lam, Complex mu, int m, int nu) { return {lam, mu, m, nu}; }

double uniform(std::mt19937_64& rng, double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }

}  // namespace

TEST_CASE("closed-form examples") {
    CHECK(lfa_norm(input(0.5, 0.3, 2, 0), 0.0) == doctest::Approx(0.05 / 0.7 * std::sqrt(1.25)).epsilon(1e-13));
    CHECK(lfa_norm(input(0.5, 0.3, 2, 0), 0.0) == doctest::Approx(0.0798596).epsilon(1e-6));
    CHECK(lfa_norm(input(0.0, 0.3, 2, 0), 0.0) == doctest::Approx(0.4285714).epsilon(1e-6));
    CHECK(lfa_rho_sup(input(0.5, 0.3, 2, 0)).value == doctest::Approx(0.0714286).epsilon(1e-6));
    CHECK(lfa_rho_sup(input(0.5, 0.3, 2, 1)).value == doctest::Approx(0.0178571).epsilon(1e-6));
    CHECK(lfa_norm(input(0.5, 0.25, 2, 1), 0.7) < 1e-15);
    CHECK(lfa_norm_sup(input(Complex(0.3, 0.4), std::pow(Complex(0.3, 0.4), 3), 3, 0)).value < 1e-15);
    CHECK(theta_dagger(Complex(0.0, 0.3), 4) == doctest::Approx(kPi / 8));
    CHECK(theta_dagger(0.0, 4) == 0.0);
    CHECK(theta_dagger(-0.5, 2) == doctest::Approx(-kPi / 2));
}

TEST_CASE("input validation and the unit fast path") {
    CHECK_THROWS(lfa_norm(input(1.0, 0.3, 2, 0), 0.0));
    CHECK_THROWS(lfa_norm(input(0.3, 1.2, 2, 0), 0.0));
    CHECK_THROWS(lfa_norm(input(0.3, 0.2, 1, 0), 0.0));
    CHECK_THROWS(lfa_norm(input(0.3, 0.2, 2, -1), 0.0));
    const auto unit = input(1.0, 1.0, 4, 1);
    CHECK(unit.unit_fast_path());
    CHECK(lfa_norm(unit, 0.2) == 0.0);
    CHECK(lfa_spectral_radius(unit, 0.2) == 0.0);
    CHECK(lfa_norm_sup(unit).value == 0.0);
}

TEST_CASE("F-relaxation symbol is an idempotent rank-one projector") {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 100; ++trial) {
        const int m = 2 + trial % 5;
        const auto in = input(oracle::random_in_disk(rng, 0.99), oracle::random_in_disk(rng, 0.99), m, trial % 3);
        const double theta = uniform(rng, -kPi / m, kPi / m);
        const ComplexMatrix sf = symbol_SF(in, theta);
        CHECK((sf * sf - sf).norm() < 1e-12);
        Eigen::ComplexEigenSolver<ComplexMatrix> es(sf);
        int ones = 0;
        for (int i = 0; i < m; ++i) {
            const Complex ev = es.eigenvalues()[i];
            if (std::abs(ev - 1.0) < 1e-10) ++ones;
            else CHECK(std::abs(ev) < 1e-10);
        }
        CHECK(ones == 1);
        const ComplexMatrix scf = symbol_SCF(in, theta);
        ComplexMatrix pre = sf;
        for (int k = 0; k < in.nu; ++k) pre = scf * pre;
        CHECK((symbol_prerelax(in, theta) - pre).norm() < 1e-12);
        CHECK((scf * sf - std::pow(in.lambda * std::polar(1.0, -theta), m) * sf).norm() < 1e-12);
    }
}

TEST_CASE("zero fine eigenvalue") {
    const auto in = input(0.0, Complex(0.2, -0.1), 3, 0);
    const ComplexMatrix sf = symbol_SF(in, 0.3);
    CHECK((sf - ComplexMatrix::Constant(3, 3, 1.0 / 3.0)).norm() < 1e-14);
    CHECK(lfa_norm(input(0.0, 0.4, 3, 1), 0.1) == 0.0);
}

TEST_CASE("closed form equals the multiplied-out propagator") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const int m = std::array{2, 3, 4, 8}[trial % 4];
        const auto in = input(oracle::random_in_disk(rng, 0.98), oracle::random_in_disk(rng, 0.98), m, trial % 3);
        const double theta = uniform(rng, -kPi / m, kPi / m);
        const HarmonicSymbol h = symbol_error_propagator(in, theta);
        const ComplexMatrix assembled = assemble_error_propagator_symbol(in, theta);
        CHECK((h.matrix - assembled).norm() < 1e-12 * std::max(1.0, assembled.norm()));
        CHECK((h.matrix - h.f_theta * h.s_f).norm() < 1e-12 * std::max(1.0, assembled.norm()));
        CHECK(lfa_norm(in, theta) == doctest::Approx(spectral_norm(assembled)).epsilon(1e-10));
        CHECK(std::abs(lfa_spectral_radius(in, theta) - spectral_radius(assembled)) < 1e-10);
        CHECK(lfa_spectral_radius(in, theta) <= lfa_norm(in, theta) + 1e-15);
    }
}

TEST_CASE("assembled symbol matches the harmonic block of a periodic cycle") {
    std::mt19937_64 rng(13);
    for (int m : {2, 4})
        for (int nu : {0, 1}) {
            const int n_t = 8 * m;
            const auto in = input(oracle::random_in_disk(rng, 0.9), oracle::random_in_disk(rng, 0.9), m, nu);
            const oracle::ScalarCycle cycle{in.lambda, in.mu, m, nu, n_t, true};
            const oracle::Mat dense = cycle.dense();
            for (int l = -n_t / (2 * m); l < n_t / (2 * m); ++l) {
                const double theta = 2.0 * kPi * l / n_t;
                const ComplexMatrix block = oracle::harmonic_block(dense, theta, m);
                CHECK((block - assemble_error_propagator_symbol(in, theta)).norm() < 1e-10);
            }
        }
}

TEST_CASE("sup over theta agrees with a fine scan") {
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const int m = 2 + trial % 4;
        const auto in = input(oracle::random_in_disk(rng, 0.95), oracle::random_in_disk(rng, 0.95), m, trial % 2);
        const int n = 200000;
        const double dtheta = 2.0 * kPi / m / n;
        double best_norm = 0.0, best_rho = 0.0, arg_rho = 0.0;
        for (int i = 0; i < n; ++i) {
            const double theta = -kPi / m + i * dtheta;
            best_norm = std::max(best_norm, lfa_norm(in, theta));
            const double r = lfa_spectral_radius(in, theta);
            if (r > best_rho) {
                best_rho = r;
                arg_rho = theta;
            }
        }
        const auto sup_norm = lfa_norm_sup(in);
        const auto sup_rho = lfa_rho_sup(in);
        CHECK(sup_norm.value >= best_norm - 1e-12);
        CHECK(sup_norm.value - best_norm < 1e-6 * sup_norm.value);
        CHECK(sup_rho.value >= best_rho - 1e-12);
        CHECK(sup_rho.value - best_rho < 1e-6 * sup_rho.value);
        // Distance on the circle of period 2 pi / m.
        const double period = 2.0 * kPi / m;
        double d = std::fmod(std::abs(arg_rho - sup_rho.theta_dagger), period);
        d = std::min(d, period - d);
        CHECK(d <= dtheta);
        CHECK(sup_rho.theta_dagger == doctest::Approx(theta_dagger(in.mu, m)));
    }
}

TEST_CASE("space-time cell agrees with the scalar closed form") {
    std::mt19937_64 rng(19);
    for (int trial = 0; trial < 50; ++trial) {
        const int m = 2 + trial % 3, nu = trial % 2;
        const Complex lam = oracle::random_in_disk(rng, 0.95), mu = oracle::random_in_disk(rng, 0.95);
        const double theta = uniform(rng, -kPi / m, kPi / m);
        const auto cell =
            spacetime_rho(StepperSymbol::from_value(lam), StepperSymbol::from_value(mu), theta, m, nu, 0.3);
        CHECK(std::abs(cell.rho - lfa_spectral_radius(input(lam, mu, m, nu), theta)) < 1e-12);
        CHECK(std::abs(cell.norm - lfa_norm(input(lam, mu, m, nu), theta)) < 1e-12);
        CHECK(cell.defect == doctest::Approx(std::abs(std::pow(lam, m) - mu)).epsilon(1e-12));
        CHECK(cell.coarse_modulus == doctest::Approx(std::abs(1.0 - mu * std::polar(1.0, -m * theta))).epsilon(1e-12));
    }
}

TEST_CASE("characteristic classification") {
    CHECK(is_characteristic(0.01, -0.008, 0.8, 4));
    CHECK(!is_characteristic(0.01, 0.3, 0.8, 4));
    // Equivalent modulo the harmonic period.
    CHECK(is_characteristic(0.01, -0.008 + kPi / 2, 0.8, 4));
    CHECK(is_characteristic(0.0, 0.0, 0.8, 4));
    CHECK(!is_characteristic(0.0, 1e-3, 0.8, 4));
}

TEST_CASE("characteristic components of the rediscretized coarse operator") {
    const int m = 4, nu = 1;
    const double cfl = 0.8;
    const auto fine = build_semilagrangian(3, cfl, 64);
    const auto coarse = build_rediscretized_coarse(fine, m);
    const double w = 2.0 * kPi / 4096;
    const auto cell = spacetime_rho([&](double o) { return fine.factored_symbol(o); },
                                    [&](double o) { return coarse.factored_symbol(o); }, w, -cfl * w, m, nu, cfl);
    CHECK(cell.is_characteristic);
    CHECK(cell.rho == doctest::Approx(rho_check_lower_bound(3, m, cfl)).epsilon(1e-3));
}

TEST_CASE("lower bound examples and symmetry") {
    CHECK(rho_check_lower_bound(3, 4, 0.8) == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(rho_check_lower_bound(1, 2, 0.25) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(rho_check_lower_bound(1, 2, 1.0 / 3.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS(rho_check_lower_bound(1, 4, 0.5));
    CHECK_THROWS(rho_check_lower_bound(1, 4, 1.2));
    CHECK(in_admissible_set(4, 0.3));
    CHECK(!in_admissible_set(4, 0.25));
    CHECK(!in_admissible_set(4, 0.0));
    for (int p : {1, 3, 5})
        for (int m = 2; m <= 8; ++m)
            for (int k = 1; k < 100; ++k) {
                const double eps = k / 100.0;
                if (!in_admissible_set(m, eps, 1e-9)) continue;
                CHECK(rho_check_lower_bound(p, m, eps) ==
                      doctest::Approx(rho_check_lower_bound(p, m, 1.0 - eps)).epsilon(1e-10));
                const double lo = 2.0 / (3.0 * m);
                if (eps > lo && eps < 1.0 - lo) CHECK(rho_check_lower_bound(p, m, eps) > 1.0);
            }
}
