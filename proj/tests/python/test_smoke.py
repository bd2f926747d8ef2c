import math

import pytest

import vexs


def test_sphere_constant():
    assert vexs.k_np(2, 2.0) == pytest.approx(math.pi / 2, rel=1e-12)
    assert vexs.k_np(1, 3.0) == pytest.approx(2.0 / 3.0, rel=1e-12)


def test_modular_and_norm():
    u = vexs.ScalarField.gaussian(1)
    p = vexs.ExponentField.constant(1, 2.0)
    assert vexs.modular(u, p) == pytest.approx(math.sqrt(math.pi / 2), rel=1e-10)
    r = vexs.luxemburg_norm(u, p)
    assert r["norm"] == pytest.approx((math.pi / 2) ** 0.25, rel=1e-8)
    assert r["iterations"] <= 60


def test_fields_and_exponents():
    u = vexs.ScalarField.gaussian(2, sigma=2.0)
    assert u([2.0, 0.0]) == pytest.approx(math.exp(-1.0))
    assert u.dimension == 2
    p = vexs.ExponentField.inverse_quadratic(1, 2.0, 1.0)
    assert p.p_plus == 3.0
    assert p([1.0]) == pytest.approx(2.5)


def test_functionals():
    u = vexs.ScalarField.gaussian(1)
    p = vexs.ExponentField.constant(1, 2.0)
    unit = vexs.nguyen(u, p, 0.1)["value"]
    weighted = vexs.nguyen(u, p, 0.1, mode="p_of_x")["value"]
    assert weighted == pytest.approx(2 * unit, rel=1e-12)
    assert vexs.bbm(vexs.ScalarField.tent(1), 2.0, 0.9)["value"] == pytest.approx(1.97, abs=0.01)


def test_sweep():
    u = vexs.ScalarField.tent(1)
    p = vexs.ExponentField.constant(1, 2.0)
    r = vexs.run_sweep("nguyen-unit", u, p, [0.2, 0.1, 0.05, 0.025])
    assert r["target"] == pytest.approx(2.0)
    assert r["extrapolated"] == pytest.approx(2.0, rel=5e-3)


def test_scenario_is_deterministic():
    sc = {
        "schema": vexs.SCHEMA,
        "name": "py",
        "operation": "modular",
        "field": {"family": "tent", "dimension": 1},
        "exponent": {"family": "constant", "dimension": 1, "params": {"value": 3.0}},
    }
    a = vexs.run_scenario(sc)
    b = vexs.run_scenario(sc)
    assert a["report_text"] == b["report_text"]
    assert a["report"]["results"]["value"] == pytest.approx(0.5, rel=1e-10)


def test_errors():
    u = vexs.ScalarField.gaussian(1)
    with pytest.raises(ValueError):
        vexs.ExponentField.constant(1, 0.5)
    with pytest.raises(vexs.ConfigError):
        vexs.run_scenario({"operation": "modular", "field": {"family": "tent"}, "bogus": 1})
    with pytest.raises(vexs.DivergenceError):
        vexs.modular(vexs.ScalarField.power_tail(), vexs.ExponentField.constant(1, 2.0))
    with pytest.raises(vexs.DomainError):
        vexs.nguyen(u, vexs.ExponentField.constant(1, 2.0), -1.0)
