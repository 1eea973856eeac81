import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

import conelab.cones as C
from conelab.errors import DimensionError, InputError, PreconditionError, SingularElementError
from conelab.spin import SpinElement, inverse, inversion_map, jordan_product, spectral, sqrt_in_cone

E2 = SpinElement.unit(3)


def el(h, lam):
    return SpinElement(np.array(h, dtype=float), float(lam))


def same(a, b, tol=1e-12):
    np.testing.assert_allclose(a.coords, b.coords, atol=tol, rtol=tol)


def test_product_examples():
    same(jordan_product(E2, E2), E2)
    same(jordan_product(el([1, 0], 0), el([1, 0], 0)), E2)
    same(jordan_product(el([1, 0], 1), el([0, 1], 2)), el([2, 1], 2))


def test_product_dimension_mismatch():
    with pytest.raises(DimensionError):
        jordan_product(E2, SpinElement.unit(4))


def test_spectral_examples():
    sp = spectral(el([1, 0], 2))
    assert (sp.lam1, sp.lam2) == (3.0, 1.0)
    same(sp.p, el([0.5, 0], 0.5))
    sp = spectral(E2)
    assert sp.lam1 == sp.lam2 == 1.0
    same(sp.p, el([0.5, 0], 0.5))
    sp = spectral(el([0, 1], 0))
    assert (sp.lam1, sp.lam2) == (1.0, -1.0)


def test_inverse_examples():
    same(inverse(E2), E2)
    same(inverse(E2.scale(2.0)), E2.scale(0.5))
    same(inverse(el([1, 0], 2)), el([-1 / 3, 0], 2 / 3))


def test_inverse_singular():
    with pytest.raises(SingularElementError):
        inverse(el([1, 0], 1))


def test_sqrt_examples():
    same(sqrt_in_cone(E2), E2)
    r3 = math.sqrt(3.0)
    same(sqrt_in_cone(el([1, 0], 2)), el([(r3 - 1) / 2, 0], (r3 + 1) / 2))
    same(sqrt_in_cone(E2.scale(4.0)), E2.scale(2.0))
    with pytest.raises(PreconditionError):
        sqrt_in_cone(el([2, 0], 1))


def test_inversion_map_examples():
    g = inversion_map(C.Lorentz(3))
    np.testing.assert_allclose(g(np.array([0.0, 0.0, 1.0])), [0.0, 0.0, 1.0])
    np.testing.assert_allclose(g(np.array([1.0, 0.0, 2.0])), [-1 / 3, 0.0, 2 / 3])
    T = np.diag([2.0, 1.0, 1.0])
    img = C.LinearImage(C.Lorentz(3), T)
    gi = inversion_map(img)
    assert gi.name == "conjugated-inversion"
    np.testing.assert_allclose(gi(img.unit), img.unit, atol=1e-15)
    with pytest.raises(InputError):
        inversion_map(C.PNorm(3, 4.0))


vec = arrays(np.float64, 4, elements=st.floats(-3, 3))


@given(vec, vec)
def test_jordan_identity(a, b):
    a, b = SpinElement.from_point(a), SpinElement.from_point(b)
    a2 = jordan_product(a, a)
    lhs = jordan_product(a2, jordan_product(a, b))
    rhs = jordan_product(a, jordan_product(a2, b))
    tol = 1e-10 * (1 + a.norm() ** 4 * b.norm())
    assert np.max(np.abs(lhs.coords - rhs.coords)) <= tol


@given(vec, vec)
def test_norm_axioms(a, b):
    a, b = SpinElement.from_point(a), SpinElement.from_point(b)
    na, nb = a.norm(), b.norm()
    slack = 1e-10 * (1 + na * nb)
    assert jordan_product(a, b).norm() <= na * nb + slack
    a2, b2 = jordan_product(a, a), jordan_product(b, b)
    assert a2.norm() == pytest.approx(na**2, rel=1e-10, abs=1e-12)
    assert a2.norm() <= (a2 + b2).norm() + 1e-10 * (1 + na**2 + nb**2)


@given(vec)
def test_squares_fill_cone(a):
    cone = C.Lorentz(4)
    a = SpinElement.from_point(a)
    sq = jordan_product(a, a)
    assert cone.margin(sq.coords) >= -1e-10 * (1 + sq.norm())
    back = jordan_product(sqrt_in_cone(sq), sqrt_in_cone(sq))
    assert np.max(np.abs(back.coords - sq.coords)) <= 1e-10 * (1 + sq.norm())


@given(vec)
def test_spectral_recomposition(a):
    a = SpinElement.from_point(a)
    sp = spectral(a)
    assert sp.lam1 >= sp.lam2
    assert np.max(np.abs(sp.recompose().coords - a.coords)) <= 1e-12 * (1 + a.norm())
    np.testing.assert_allclose((sp.p + sp.pprime).coords, SpinElement.unit(4).coords)


def test_inversion_gauge_identity():
    cone = C.Lorentz(4)
    g = inversion_map(cone)
    rng = np.random.default_rng(11)
    xs = C.sample_interior(cone, rng, 1000)
    ys = C.sample_interior(cone, rng, 1000)
    worst = max(abs(C.gauge(cone, x, y) - C.gauge(cone, g(y), g(x))) / C.gauge(cone, x, y) for x, y in zip(xs, ys))
    assert worst <= 1e-9


def test_inverse_is_jordan_inverse():
    rng = np.random.default_rng(2)
    for v in C.sample_interior(C.Lorentz(5), rng, 100):
        a = SpinElement.from_point(v)
        same(jordan_product(a, inverse(a)), SpinElement.unit(5), tol=1e-11)
