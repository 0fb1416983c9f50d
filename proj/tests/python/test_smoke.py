import math

import numpy as np
import pytest

import ffmfg


def test_closed_forms_at_alpha_one():
    A, B = ffmfg.coefficients(1.0)
    assert A == pytest.approx(1 + math.sqrt(3))
    assert B == pytest.approx(1 - math.sqrt(3))
    assert ffmfg.entropy_exponent_b(1.0, 2.0) == pytest.approx(-0.302775638, abs=1e-9)
    assert ffmfg.s1_threshold(1.0) == pytest.approx(-2 / math.sqrt(3))
    e = ffmfg.eigenstructure(1.0, 1.0, 1.0)
    assert e["lambda2"] == pytest.approx(1.36602540, abs=1e-8)
    assert e["g1"] != 0.0 and e["g2"] != 0.0


def test_entropy_residual_is_small():
    rng = np.random.default_rng(3)
    for _ in range(50):
        alpha = rng.uniform(0.05, 1.95)
        a = rng.uniform(1.5, 5.0)
        b = ffmfg.entropy_exponent_b(alpha, a)
        v, m = np.exp(rng.uniform(np.log(0.1), np.log(10.0), 2))
        assert abs(ffmfg.entropy_residual(a, b, v, m, alpha)) <= 1e-9


def test_riemann_invariants_and_density_bound():
    z, w = ffmfg.riemann_invariants(1.0, -1.0, -2.0, 1.0, 1.0)
    assert z["value"] == pytest.approx(1.0)
    assert w["value"] == pytest.approx(1.0)
    assert ffmfg.density_lower_bound(2.0, 1.0, -1.0, -2.0) == pytest.approx(0.2894, rel=1e-3)


def test_traveling_wave_is_preserved_by_the_solver():
    assert ffmfg.wave_speed("monotone_ff", 1.5) == pytest.approx(1.0)
    start = ffmfg.traveling_wave(200, 0.5, "monotone_ff", 1.5)
    out = ffmfg.simulate(start["v"], start["m"], 0.25, 0.5, coupling="monotone_ff", K=1.5)
    exact = ffmfg.traveling_wave(200, 0.5, "monotone_ff", 1.5, t=0.25)
    assert out["reason"] == "completed"
    assert out["t"] == 0.25
    assert np.mean(np.abs(out["m"] - exact["m"])) < 0.02
    assert out["mass"] == pytest.approx(ffmfg.mass(start["m"]), abs=1e-12)


def test_run_config_and_errors():
    doc = "problem.alpha = 1.0\nproblem.epsilon = 0.05\ngrid.n_cells = 64\ntime.t_final = 0.1\n"
    res = ffmfg.run_config(doc)
    assert res["reason"] == "completed"
    assert res["last"]["mass"] == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(ValueError):
        ffmfg.run_config(doc.replace("alpha = 1.0", "alpha = 2.5"))
    with pytest.raises(ValueError):
        ffmfg.eigenstructure(1.0, 1.0, 2.5)


def test_verify_groups_pass():
    groups = ffmfg.verify()
    assert groups and all(g["passed"] for g in groups)
