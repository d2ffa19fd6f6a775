import cmath
import math

import numpy as np
import pytest

import mgrit_lfa as ml


def test_lfa_norm_example_values():
    assert ml.lfa_norm(0.5, 0.3, 2, 0, 0.0) == pytest.approx(0.0798596, abs=1e-7)
    assert ml.lfa_norm(0.0, 0.3, 2, 0, 0.0) == pytest.approx(0.4285714, abs=1e-7)


def test_closed_form_matches_assembled_symbol():
    rng = np.random.default_rng(3)
    for _ in range(20):
        lam = complex(*rng.uniform(-0.6, 0.6, 2))
        mu = complex(*rng.uniform(-0.6, 0.6, 2))
        m = int(rng.choice([2, 3, 4]))
        nu = int(rng.integers(0, 3))
        theta = float(rng.uniform(-math.pi / m, math.pi / m))
        e = ml.error_propagator_symbol(lam, mu, m, nu, theta)
        assert e.shape == (m, m)
        assert np.linalg.norm(e, 2) == pytest.approx(ml.lfa_norm(lam, mu, m, nu, theta), abs=1e-10)
        assert max(abs(np.linalg.eigvals(e))) == pytest.approx(
            ml.lfa_spectral_radius(lam, mu, m, nu, theta), abs=1e-10
        )


def test_theta_dagger():
    assert ml.theta_dagger(0.3j, 4) == pytest.approx(math.pi / 8)


def test_discretisation_values():
    assert ml.f_poly(1, 0.5) == pytest.approx(-0.125)
    assert ml.modified_coarse_gamma(3, 0.8, 4) == pytest.approx(-0.0432)
    assert ml.rho_check_lower_bound(3, 4, 0.8) == pytest.approx(3.0, abs=1e-12)
    s = ml.SemiLagrangianScheme(1, 0.25, 16)
    assert abs(s.symbol(math.pi)) == pytest.approx(0.5)
    assert sum(s.weights) == pytest.approx(1.0)


def test_characteristic_rho_is_three():
    cell = ml.spacetime_rho(3, 0.8, 4, 1, 2 * math.pi / 1024, -0.8 * 2 * math.pi / 1024)
    assert 2.7 <= cell["rho"] <= 3.3
    assert cell["is_characteristic"]


def test_ideal_coarse_dense_propagator_vanishes():
    e = ml.dense_error_propagator(1, 0.35, 2, 0, 4, 16, coarse="ideal")
    assert np.abs(e).max() < 1e-12


def test_invalid_input_raises():
    with pytest.raises(ValueError):
        ml.lfa_norm(1.5, 0.3, 2, 0, 0.0)
    with pytest.raises(ValueError):
        ml.SemiLagrangianScheme(2, 0.3, 16)


def test_run_experiment_writes_csv(tmp_path):
    files = ml.run_experiment("cgc-probe", {"p": "1", "m": "2", "cfl": "0.6"}, tmp_path, timestamp=False)
    assert [f.name for f in files] == ["cgc_slopes.csv", "cgc_points.csv"]
    with open(files[0]) as fh:
        lines = [l for l in fh if not l.startswith("#")]
    assert lines[0].strip() == "p,m,c,coarse,characteristic,slope,expected,tolerance"
    assert len(lines) == 4


def test_unknown_config_key(tmp_path):
    with pytest.raises(ml.ConfigError):
        ml.run_experiment("cgc-probe", {"bogus": "1"}, tmp_path)
