import json
import math
from pathlib import Path

import numpy as np
import pytest

import evoreg

CONFIGS = Path(__file__).resolve().parents[2] / "configs"


def test_cable_eigenvalues():
    op = evoreg.cable_operator(math.pi, 3)
    np.testing.assert_allclose(op.eigenvalues, [1.0, 2.0, 5.0])
    assert len(op) == 3


def test_semigroup_and_power():
    op = evoreg.cable_operator(math.pi, 3)
    x = np.ones(3)
    np.testing.assert_allclose(evoreg.semigroup_apply(op, 0.5, x), np.exp(-0.5 * op.eigenvalues))
    np.testing.assert_allclose(evoreg.fractional_power_apply(op, 0.5, x), np.sqrt(op.eigenvalues))


def test_phi_kernels_at_one():
    phi0, phi1, phi2 = evoreg.phi_kernels(1.0)
    assert phi0 == pytest.approx(math.exp(-1))
    assert phi1 == pytest.approx(1 - math.exp(-1))
    assert phi2 == pytest.approx(math.exp(-1))


def test_gates():
    assert evoreg.validate_h3(0.35, 0.8, 0.2)["ok"]
    bad = evoreg.validate_h4(0.8, 0.5)
    assert not bad["ok"]
    assert "H4" in bad["violations"][0]


def test_solve_mild_single_mode():
    op = evoreg.SpectralOperator(np.array([1.0]), math.pi)
    times, values = evoreg.solve_mild(op, np.zeros(1), lambda s: np.ones(1), alpha=0.4, beta=1.0,
                                      sigma=0.1, horizon=1.0, steps=200)
    assert times[-1] == pytest.approx(1.0)
    assert values[-1, 0] == pytest.approx(1 - math.exp(-1), rel=1e-8)


def test_isometry_oracle():
    op = evoreg.cable_operator(math.pi, 3)
    oracle = evoreg.ito_isometry_oracle(op, "constant", 1.0)
    assert oracle == pytest.approx(0.777748, abs=1e-6)
    mean, se = evoreg.mc_second_moment(op, "constant", replicas=4000, seed=7)
    assert abs(mean - oracle) < 4 * se


def test_run_scenario_json():
    text = (CONFIGS / "isometry_n3.yaml").read_text()
    body, passed = evoreg.run_scenario(text, "isometry")
    report = json.loads(body)
    assert passed
    assert report["passed"] is True
    assert report["subcommand"] == "isometry"
    assert all(c["passed"] for c in report["checks"])


def test_bad_config_raises():
    with pytest.raises(evoreg.ConfigError):
        evoreg.parse_config("operator: {L: -1, N: 3}\n")
