import math

import numpy as np
import pytest

import conicond as cc


def a_eps(eps):
    return np.array([[2 * eps, 1, 1], [0, -1, 1]], dtype=float)


def test_kappa_and_polar():
    a = np.array([[2.0, 0, 0], [0, 3.0, 0]])
    assert cc.kappa(a) == pytest.approx(1.5)
    s, b = cc.polar_decompose(a)
    np.testing.assert_allclose(b, [[1, 0, 0], [0, 1, 0]], atol=1e-12)
    np.testing.assert_allclose(s @ b, a, atol=1e-12)


def test_grassmann_distances():
    d = cc.grassmann_distances(np.array([[1.0, 0, 0, 0], [0, 1, 0, 0]]), np.array([[1.0, 0, 0, 0], [0, 0, 1, 0]]))
    assert d["projection"] == pytest.approx(1.0)
    assert d["geodesic"] == pytest.approx(math.pi / 2)


def test_condition_numbers_of_a_eps():
    cone = cc.parse_cone("orthant:3")
    eps = 0.1
    expected = math.sqrt(1 + 2 * eps**2) / (eps * math.sqrt(2))
    assert cc.grassmann_condition(cone, a_eps(eps)) == pytest.approx(expected, rel=1e-9)
    assert cc.gcc_condition(a_eps(eps)) == pytest.approx(math.sqrt(2), abs=1e-9)
    assert cc.classify_feasibility(cone, a_eps(eps))["status"] == "DualStrict"


def test_cap_and_witnesses():
    cap = cc.smallest_enclosing_cap(np.array([[1.0, 0], [0, 1]]))
    assert cap["radius"] == pytest.approx(math.pi / 4)
    r = 1 / math.sqrt(2)
    w = cc.witness_image(np.array([[1.0, 0, 0]]), np.array([r, r, 0]))
    assert w["frob_norm"] == pytest.approx(r)


def test_analyze_and_errors():
    report = cc.analyze("orthant:3", a_eps(0.1), witnesses=True)
    assert report["status"] == "DualStrict"
    assert report["gcc"] == pytest.approx(math.sqrt(2))
    assert len(report["witnesses"]) == 1
    ill = cc.analyze("orthant:3", np.array([[1.0, 0, 0], [0, 1, 0]]))
    assert ill["grassmann"] == "inf"
    with pytest.raises(cc.ConicondError) as info:
        cc.parse_cone("cube:3")
    assert info.value.kind == "ParseError"
    with pytest.raises(cc.ConicondError):
        cc.gcc_condition(np.array([[1.0, 0], [1.0, 0]]))


def test_experiment_is_deterministic():
    first = cc.run_experiment(4, 2, trials=20, seed=42)
    second = cc.run_experiment(4, 2, trials=20, seed=42)
    assert first == second
    assert all(r["sandwich_ok"] for r in first)
    assert all(r["status"] != "IllPosed" for r in first)
