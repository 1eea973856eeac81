import math

import numpy as np
import pytest

import conelab.cones as C
import conelab.geodesics as geo
from conelab.errors import IdentityCheckError, InputError, NonSmoothError, PreconditionError
from conelab.spin import inversion_map

L3 = C.Lorentz(3)
U = L3.unit
R = np.array([0.5, 0.0, 0.5])
S = np.array([-0.5, 0.0, 0.5])
G1 = np.array([math.sinh(1.0), 0.0, math.cosh(1.0)])


def test_sample_examples():
    gam = geo.TypeIGeodesic(R, S)
    np.testing.assert_allclose(geo.sample(gam, 0.0), R + S)
    np.testing.assert_allclose(gam(1.0), G1, rtol=1e-15)
    np.testing.assert_allclose(geo.TypeIIGeodesic(U)(math.log(2.0)), 2 * U, rtol=1e-15)


def test_typeI_through_example():
    gam, t0 = geo.typeI_through(L3, U, G1)
    assert t0 == pytest.approx(1.0, rel=1e-12)
    np.testing.assert_allclose(gam.r, R, atol=1e-12)
    np.testing.assert_allclose(gam.s, S, atol=1e-12)
    assert np.max(np.abs(gam.r + gam.s - U)) <= 1e-10
    for t in (-2.0, -0.5, 0.5, 2.0):
        assert C.thompson(L3, U, gam(t)) == pytest.approx(abs(t), abs=1e-8)


def test_typeI_through_collinear():
    with pytest.raises(PreconditionError):
        geo.typeI_through(L3, U, 3 * U)


def test_typeI_through_orthant():
    quad = C.Orthant2()
    gam, _ = geo.typeI_through(quad, np.array([1.0, 1.0]), np.array([2.0, 1.0]))
    assert quad.margin(gam.r) == pytest.approx(0.0, abs=1e-12)


def test_geodesic_gauge_laws():
    rng = np.random.default_rng(0)
    cone = C.PNorm(3, 4.0)
    for z in C.sample_interior(cone, rng, 5):
        gam, t0 = geo.typeI_through(cone, cone.unit, z)
        mu = math.sqrt(C.gauge(cone, cone.unit, z) / C.gauge(cone, z, cone.unit))
        np.testing.assert_allclose(gam(t0), mu * z, rtol=1e-9, atol=1e-12)
        for t1, t2 in [(-3.0, 1.0), (0.5, 2.5), (-1.0, -2.0)]:
            a, b = gam(t1), gam(t2)
            assert C.gauge(cone, a, b) == pytest.approx(math.exp(abs(t1 - t2)), rel=1e-9)
            assert C.gauge(cone, b, a) == pytest.approx(math.exp(abs(t1 - t2)), rel=1e-9)
        mu_g = geo.TypeIIGeodesic(z)
        assert C.gauge(cone, mu_g(1.5), mu_g(-0.5)) == pytest.approx(math.exp(2.0), rel=1e-9)
        assert C.thompson(cone, mu_g(1.5), mu_g(-0.5)) == pytest.approx(2.0, abs=1e-9)


def test_reflect_check_examples():
    g = inversion_map(L3)
    gam = geo.TypeIGeodesic(R, S)
    res = geo.reflect_check(g, U, gam, [0.0, 1.0, 2.0])
    assert res[0] <= 1e-8 and res[1] <= 1e-7 and res[2] <= 1e-6


def test_boundary_gauge_examples():
    eta = np.array([1.0, 0.0, 1.0])
    assert geo.boundary_gauge(L3, eta, U, 1.0) == pytest.approx(1.0)
    assert geo.boundary_gauge(L3, eta, U, 0.2) == pytest.approx(5.0, rel=1e-9)
    assert geo.boundary_gauge(L3, eta, U, 0.01) == pytest.approx(100.0, rel=1e-9)
    with pytest.raises(PreconditionError):
        geo.boundary_gauge(L3, U, U, 0.5)
    with pytest.raises(PreconditionError):
        geo.boundary_gauge(L3, eta, U, 0.0)


def test_boundary_gauge_reports_mismatch(monkeypatch):
    monkeypatch.setattr(C, "gauge", lambda cone, x, y: 1.0)
    with pytest.raises(IdentityCheckError):
        geo.boundary_gauge(L3, np.array([1.0, 0.0, 1.0]), U, 0.5)


def test_horo_examples():
    eta = np.array([1.0, 0.0, 1.0])
    svals = [10.0**-k for k in range(1, 6)]
    trivial = geo.horo_limit(L3, eta, U, svals)
    np.testing.assert_allclose(trivial.estimates, 1.0, rtol=1e-12)
    res = geo.horo_limit(L3, eta, np.array([-1.0, 0.0, 1.0]), svals)
    assert res.target == pytest.approx(2.0)
    assert abs(res.limit - 2.0) <= 1e-3
    assert all(b >= a - 1e-12 for a, b in zip(res.estimates, res.estimates[1:]))
    assert abs(geo.convergence_order(res.s, res.estimates, 2.0) - 1.0) <= 0.2
    with pytest.raises(PreconditionError):
        geo.horo_limit(L3, eta, eta, svals)


def test_horo_state_convergence_off_plane():
    eta = np.array([1.0, 0.0, 1.0])
    res = geo.horo_limit(L3, eta, np.array([0.0, 1.0, 1.0]), [10.0**-k for k in range(1, 6)])
    assert res.monotone_decay
    assert res.eta_values[-1] < 1e-3 < res.eta_values[0]


def test_horo_rejects_corner(lens):
    corner = np.array([0.0, lens.body.corner_height, 1.0])
    with pytest.raises(NonSmoothError):
        geo.horo_limit(lens, corner, lens.unit, [0.1])


def test_cross_ratio_examples(disk):
    assert geo.hilbert_cross_ratio(disk, geo.lift([0.2, 0.1]), geo.lift([0.2, 0.1])) == 0.0
    assert geo.hilbert_cross_ratio(disk, geo.lift([0.0, 0.0]), geo.lift([0.5, 0.0])) == pytest.approx(math.log(3.0), rel=1e-10)
    rng = np.random.default_rng(1)
    for cone in (disk, L3, C.CrossSection2D(C.Lens(0.5))):
        for x, y in zip(C.sample_interior(cone, rng, 100), C.sample_interior(cone, rng, 100)):
            assert geo.hilbert_cross_ratio(cone, x, y) == pytest.approx(C.hilbert(cone, x, y), abs=1e-8)
    with pytest.raises(InputError):
        geo.hilbert_cross_ratio(C.PNorm(3, 4.0), U, U)


def test_gromov_examples(disk):
    svals = [10.0**-k for k in range(7)]
    distinct = geo.gromov_experiment(disk, [1.0, 0.0], [-1.0, 0.0], svals)
    assert distinct[0].value == pytest.approx(0.0, abs=1e-12)
    assert max(r.value for r in distinct) <= 3.0
    assert {r.branch for r in distinct} == {"distinct"}
    same = geo.gromov_experiment(disk, [1.0, 0.0], [1.0, 0.0], [1.0, 1e-2, 1e-4])
    assert same[-1].value > 10.0
    assert [r.s for r in same] == [1.0, 1e-2, 1e-4]


def test_smoothness_probe(lens, pnorm34):
    assert geo.smoothness_probe(L3, C.boundary_points(L3, 50))["max_count"] == 1
    assert geo.smoothness_probe(pnorm34, C.boundary_points(pnorm34, 50))["max_count"] == 1
    corner = np.array([0.0, lens.body.corner_height, 1.0])
    rep = geo.smoothness_probe(lens, [corner])
    assert rep["non_smooth"] and rep["counts"] == [2] and rep["max_spread"] > 0.1
