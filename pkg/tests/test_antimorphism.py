import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import conelab.cones as C
from conelab.antimorphism import (
    ConeMap,
    fit_2d_canonical,
    fixed_point_probe,
    gateaux,
    identity_map,
    linearize,
    planarity_residual,
    restrict_to_2d,
    symmetry,
    verify_antimorphism,
)
from conelab.errors import FitError, LinearizationError, PreconditionError
from conelab.spin import inversion_map

L3 = C.Lorentz(3)
IOTA = inversion_map(L3)
U = L3.unit


def test_gateaux_examples():
    np.testing.assert_allclose(gateaux(IOTA, U, 2.0 * U), -2.0 * U, atol=1e-8)
    np.testing.assert_array_equal(gateaux(IOTA, U, np.zeros(3)), np.zeros(3))
    np.testing.assert_allclose(gateaux(IOTA, U, np.array([1.0, 0.0, 0.0])), [-1.0, 0.0, 0.0], atol=1e-8)


def test_gateaux_requires_interior():
    with pytest.raises(PreconditionError):
        gateaux(IOTA, np.array([1.0, 0.0, 1.0]), U)


def test_gateaux_of_cone_direction_is_negative():
    rng = np.random.default_rng(3)
    x = C.sample_interior(L3, rng, 1)[0]
    for z in C.sample_cone(L3, rng, 30):
        d = -gateaux(IOTA, x, z)
        assert L3.margin(d) >= -1e-8 * (1 + np.linalg.norm(d))


def test_linearize_examples():
    G = linearize(IOTA, U)
    np.testing.assert_allclose(G.matrix, np.eye(3), atol=1e-7)
    x = np.array([0.3, -0.2, 1.4])
    a, b = linearize(IOTA, x), linearize(IOTA, x)
    assert np.max(np.abs(a.matrix - b.matrix)) <= 1e-10
    H = linearize(IOTA, IOTA(x))
    np.testing.assert_allclose(a.matrix @ H.matrix, np.eye(3), atol=1e-6)


def test_linearize_detects_non_antimorphism():
    sq = ConeMap(lambda v: v * v[-1], L3, name="square-scale")
    with pytest.raises(LinearizationError):
        linearize(sq, np.array([0.2, 0.1, 1.0]))


@given(st.integers(0, 1000), st.floats(0.1, 10.0))
def test_linearization_homogeneous(seed, lam):
    rng = np.random.default_rng(seed)
    x = C.sample_interior(L3, rng, 1)[0]
    z = rng.standard_normal(3)
    G = linearize(IOTA, x)
    assert np.max(np.abs(G(lam * z) - lam * G(z))) <= 1e-8 * (1 + lam * np.abs(z).max())
    assert np.max(np.abs(-gateaux(IOTA, x, lam * z) - lam * G(z))) <= 1e-6 * (1 + lam * np.abs(z).max() * np.abs(G.matrix).max())


def test_symmetry_at_unit_is_inversion():
    su = symmetry(IOTA, U)
    rng = np.random.default_rng(4)
    for y in C.sample_interior(L3, rng, 20):
        np.testing.assert_allclose(su(y), IOTA(y), rtol=1e-7, atol=1e-9)


def test_symmetry_fixes_and_involutes():
    rng = np.random.default_rng(5)
    for x in C.sample_interior(L3, rng, 5):
        sx = symmetry(IOTA, x)
        assert C.order_unit_norm(L3, sx(x) - x) <= 1e-7
        for y in C.sample_interior(L3, rng, 20):
            assert C.order_unit_norm(L3, sx(sx(y)) - y) <= 1e-6 * C.order_unit_norm(L3, y)


def test_symmetry_is_antimorphism():
    x = np.array([0.2, 0.3, 1.2])
    rep = verify_antimorphism(symmetry(IOTA, x), samples=100, seed=1, tol=1e-6, antihom_tol=1e-6)
    assert rep.passed, rep.to_json()


def test_linearization_in_aut():
    rng = np.random.default_rng(6)
    x = C.sample_interior(L3, rng, 1)[0]
    G = linearize(IOTA, x)
    for c in C.sample_cone(L3, rng, 100):
        assert L3.margin(G(c)) >= -1e-8 * (1 + np.abs(G(c)).max())
        assert L3.margin(G.solve(c)) >= -1e-8 * (1 + np.abs(G.solve(c)).max())


def test_verify_report_shape_and_identity_failure():
    cone = C.Lorentz(4)
    rep = verify_antimorphism(inversion_map(cone), samples=1000, seed=0)
    assert rep.passed
    names = [c.name for c in rep.checks]
    assert names[:5] == ["gauge_identity", "antihomogeneity", "order_reversal", "thompson_isometry", "hilbert_isometry"]
    js = rep.to_json()
    assert set(js) == {"seed", "checks"} and set(js["checks"][0]) == {"name", "samples", "max_residual", "pass"}
    bad = verify_antimorphism(identity_map(cone), samples=50, seed=0)
    assert not bad.check("gauge_identity").passed


def test_verify_conjugated_inversion():
    img = C.LinearImage(C.Lorentz(3), np.array([[2.0, 0.5, 0.0], [0.0, 1.0, 0.0], [0.1, 0.0, 1.0]]))
    assert verify_antimorphism(inversion_map(img), samples=200, seed=3).passed


def test_restriction_examples():
    y = np.array([1.0, 0.0, 0.0])
    assert planarity_residual(IOTA, U, np.array([0.5, 0.1, 1.0])) <= 1e-7
    h = restrict_to_2d(IOTA, U, y)
    assert np.all(h(np.array([1.0, 1.0])) > 0)
    quad = C.Orthant2()
    rng = np.random.default_rng(8)
    for _ in range(20):
        a, b = np.exp(rng.uniform(-1, 1, 2)), np.exp(rng.uniform(-1, 1, 2))
        assert C.thompson(quad, h(a), h(b)) == pytest.approx(C.thompson(quad, a, b), abs=1e-9)
    fit = fit_2d_canonical(h)
    assert fit.residual <= 1e-7


def test_fit_examples():
    fit = fit_2d_canonical(lambda z: np.array([1 / z[0], 1 / z[1]]))
    assert (fit.a1, fit.a2, fit.sigma) == (1.0, 1.0, (0, 1))
    fit = fit_2d_canonical(lambda z: np.array([3 / z[1], 5 / z[0]]))
    assert (fit.a1, fit.a2, fit.sigma) == (3.0, 5.0, (1, 0))
    assert fit.residual <= 1e-15
    with pytest.raises(FitError):
        fit_2d_canonical(lambda z: np.array(z, dtype=float))


def test_fixed_point_probe():
    su = symmetry(IOTA, U)
    np.testing.assert_allclose(su(2 * U), U / 2, atol=1e-8)
    rep = fixed_point_probe(IOTA, U, samples=200, seed=0, sx=su)
    assert rep["min_displacement"] > 1e-6
    assert rep["self_displacement"] <= 1e-8
    assert rep["linearization_fixes_x"] and rep["fixed_point_transfer"]
