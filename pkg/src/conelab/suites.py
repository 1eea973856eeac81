"""Run configuration and the property-by-property verification suite."""

import math
import time
from dataclasses import dataclass, field

import numpy as np

from . import cones as C
from . import geodesics as geo
from . import reconstruction as rec
from ._util import case_rng, sup_norm
from .antimorphism import CheckRecord, fixed_point_probe, linearize, symmetry, verify_antimorphism
from .errors import ConeError, InputError

DEFAULT_TOLERANCES = {
    "boundary": 1e-9,
    "gauge_rel": 1e-9,
    "symmetry": 1e-6,
    "reconstruction": 1e-6,
}
DEFAULT_SAMPLES = {"default": 500}


@dataclass
class RunConfig:
    master_seed: int = 0
    tolerances: dict = field(default_factory=lambda: dict(DEFAULT_TOLERANCES))
    samples: dict = field(default_factory=lambda: dict(DEFAULT_SAMPLES))
    out: str = None

    def __post_init__(self):
        for name, val in self.tolerances.items():
            if not val > 0:
                raise InputError(f"tolerance {name} must be positive, got {val}")
        for name, val in self.samples.items():
            if int(val) < 1:
                raise InputError(f"sample count {name} must be positive, got {val}")

    def tol(self, name):
        return float(self.tolerances[name])

    def count(self, name="default"):
        return int(self.samples.get(name, self.samples["default"]))


@dataclass
class SuiteResult:
    name: str
    seed: int
    checks: list
    wall_time: float = 0.0
    errors: list = field(default_factory=list)

    @property
    def passed(self):
        return all(c.passed for c in self.checks) and bool(self.checks)

    def to_json(self):
        checks = []
        for c in self.checks:
            d = c.to_json()
            if not math.isfinite(d["max_residual"]):
                d["max_residual"] = None
            checks.append(d)
        return {"suite": self.name, "seed": self.seed, "pass": self.passed, "checks": checks, "errors": self.errors}


class _Collector:
    def __init__(self):
        self.checks = []
        self.errors = []

    def add(self, name, samples, residual, tol):
        self.checks.append(CheckRecord(name, int(samples), float(residual), float(tol)))

    def section(self, name, fn):
        try:
            fn()
        except ConeError as exc:
            self.checks.append(CheckRecord(name, 0, math.inf, 0.0))
            self.errors.append({"section": name, "error": f"{type(exc).__name__}: {exc}"})


def jacobian_fd(f, x, h=1e-5):
    n = x.shape[0]
    cols = []
    for e in np.eye(n):
        cols.append((f(x + h * e) - f(x - h * e)) / (2.0 * h))
    return np.column_stack(cols)


def symmetry_checks(g, basepoints, n_y=200, n_cone=100, seed=0, suite="symmetry"):
    """Worst residuals of S_x(x)=x, S_x^2=Id, DS_x(x)=-Id, G_x G_{g^-1,g(x)} = Id
    (g is its own inverse for the built-in maps) and G_x(C) in C."""
    cone = g.cone
    ginv = g.inverse()
    worst = dict(fixed=0.0, involution=0.0, derivative=0.0, inverse_law=0.0, aut_margin=0.0)
    for k, x in enumerate(basepoints):
        rng = case_rng(seed, suite, k)
        G = linearize(g, x)
        sx = symmetry(g, x, G)
        worst["fixed"] = max(worst["fixed"], C.order_unit_norm(cone, sx(x) - x) / C.order_unit_norm(cone, x))
        for y in C.sample_interior(cone, rng, n_y):
            res = C.order_unit_norm(cone, sx(sx(y)) - y) / C.order_unit_norm(cone, y)
            worst["involution"] = max(worst["involution"], res)
        J = jacobian_fd(sx, x)
        worst["derivative"] = max(worst["derivative"], float(np.max(np.abs(J + np.eye(cone.dim)))))
        H = linearize(ginv, g(x))
        worst["inverse_law"] = max(worst["inverse_law"], float(np.max(np.abs(G.matrix @ H.matrix - np.eye(cone.dim)))))
        for c in C.sample_cone(cone, rng, n_cone):
            for img in (G(c), G.solve(c)):
                m = cone.margin(img) / (1.0 + sup_norm(img))
                worst["aut_margin"] = max(worst["aut_margin"], -m)
    return worst


def geodesic_checks(g, x, zs, ts=(-2.0, -1.0, -0.5, 0.5, 1.0, 2.0)):
    cone = g.cone
    sx = symmetry(g, x)
    worst = dict(typeI_law=0.0, typeII_law=0.0, recovery=0.0, reflection=0.0, thompson=0.0)
    grid = np.linspace(-3.0, 3.0, 7)
    for z in zs:
        gam, t0 = geo.typeI_through(cone, x, z)
        mu = math.sqrt(C.gauge(cone, x, z) / C.gauge(cone, z, x))
        worst["recovery"] = max(worst["recovery"], sup_norm(gam(t0) - mu * z) / sup_norm(mu * z),
                                sup_norm(gam.r + gam.s - x) / sup_norm(x))
        for t1 in grid:
            for t2 in grid:
                a, b = gam(t1), gam(t2)
                ref = math.exp(abs(t1 - t2))
                worst["typeI_law"] = max(worst["typeI_law"], abs(C.gauge(cone, a, b) / ref - 1.0),
                                         abs(C.gauge(cone, b, a) / ref - 1.0))
                worst["thompson"] = max(worst["thompson"], abs(C.thompson(cone, a, b) - abs(t1 - t2)))
                mu_a, mu_b = math.exp(t1) * x, math.exp(t2) * x
                worst["typeII_law"] = max(worst["typeII_law"], abs(C.gauge(cone, mu_a, mu_b) / math.exp(t1 - t2) - 1.0))
        for res in geo.reflect_check(g, x, gam, ts, sx=sx):
            worst["reflection"] = max(worst["reflection"], res)
    return worst


def run_verify(cone, g, config, expect_negative=False, name=None):
    """Full property-by-property suite. With g None only the cone-data detector runs."""
    start = time.perf_counter()
    col = _Collector()
    seed = config.master_seed
    n = config.count()
    sym_tol = config.tol("symmetry")
    suite = name or f"verify:{cone.to_json().get('type')}:{g.name if g else 'none'}"

    if g is not None:
        def antimorphism():
            rep = verify_antimorphism(g, samples=n, seed=seed, tol=config.tol("gauge_rel"))
            for c in rep.checks:
                col.add(f"antimorphism.{c.name}", c.samples, c.max_residual, c.tolerance)

        col.section("antimorphism", antimorphism)

        def symmetries():
            rng = case_rng(seed, suite, 0)
            bases = C.sample_interior(cone, rng, max(3, min(10, n // 50)))
            w = symmetry_checks(g, bases, n_y=min(n, 200), n_cone=min(n, 100), seed=seed, suite=suite)
            k = len(bases)
            col.add("symmetry.fixed_point", k, w["fixed"], 1e-7)
            col.add("symmetry.involution", k, w["involution"], sym_tol)
            col.add("symmetry.derivative_minus_identity", k, w["derivative"], 1e-5)
            col.add("symmetry.linearization_inverse_law", k, w["inverse_law"], sym_tol)
            col.add("symmetry.linearization_in_aut", k, w["aut_margin"], 1e-8)

        col.section("symmetry", symmetries)

        def fixed_points():
            rep = fixed_point_probe(g, cone.unit, samples=min(n, 200), seed=seed)
            col.add("fixed_point.self_displacement", 1, rep["self_displacement"], 1e-8)
            col.add("fixed_point.no_spurious", rep["samples"], 1e-6 / max(rep["min_displacement"], 1e-300), 1.0)
            col.add("fixed_point.transfer", 1, 0.0 if rep["fixed_point_transfer"] else 1.0, 0.5)

        col.section("fixed_point", fixed_points)

        def geodesics():
            rng = case_rng(seed, suite, 1)
            zs = C.sample_interior(cone, rng, 5)
            w = geodesic_checks(g, cone.unit, zs)
            col.add("geodesic.typeI_gauge_law", 5, w["typeI_law"], config.tol("gauge_rel"))
            col.add("geodesic.typeII_gauge_law", 5, w["typeII_law"], config.tol("gauge_rel"))
            col.add("geodesic.thompson_parametrisation", 5, w["thompson"], config.tol("gauge_rel"))
            col.add("geodesic.typeI_recovery", 5, w["recovery"], config.tol("gauge_rel"))
            col.add("geodesic.reflection", 5, w["reflection"], sym_tol)

        col.section("geodesic", geodesics)

        def halfline():
            ps = rec.sample_P(cone, 4, seed)
            worst = worst_dt = 0.0
            su = symmetry(g, cone.unit)
            svals = (0.5, 0.1, 0.01)
            for p in ps:
                worst = max(worst, *rec.su_halfline_check(g, p, svals, su=su))
                for s in svals:
                    ps_ = (1 - s) * p.p + s * cone.unit
                    worst_dt = max(worst_dt, abs(C.thompson(cone, cone.unit, ps_) + math.log(s)))
            col.add("halfline.symmetry_identity", len(ps), worst, sym_tol)
            col.add("halfline.thompson_distance", len(ps), worst_dt, config.tol("gauge_rel"))

        col.section("halfline", halfline)

    def boundary():
        pts = C.boundary_points(cone, 8)
        worst = 0.0
        for eta in pts:
            for s in (0.5, 0.1, 0.01, 1e-4):
                m = geo.boundary_gauge(cone, eta, cone.unit, s, rtol=1.0)
                worst = max(worst, abs(m * s - 1.0))
        col.add("boundary_gauge", len(pts) * 4, worst, config.tol("boundary"))

    col.section("boundary_gauge", boundary)

    def reconstruction():
        tols = {"b_asymmetry": config.tol("reconstruction"), "residual": config.tol("reconstruction")}
        report = rec.reconstruct_jordan(cone, g, basis_samples=n, seed=seed, tols=tols)
        expected = rec.Verdict.NOT_SPIN_FACTOR if expect_negative else rec.Verdict.SPIN_FACTOR
        col.add(f"reconstruction.verdict_{expected.value}", 1, 0.0 if report.verdict is expected else 1.0, 0.5)
        if not expect_negative and report.verdict is rec.Verdict.SPIN_FACTOR:
            col.add("reconstruction.b_asymmetry", n, report.b_asymmetry, config.tol("reconstruction"))
            col.add("reconstruction.norm_identity", 64, report.norm_identity_residual, config.tol("reconstruction"))
            col.add("reconstruction.squares", 64, report.squares_residual, config.tol("reconstruction"))
            col.add("reconstruction.square_roots", 64, report.sqrt_residual, config.tol("reconstruction"))

    col.section("reconstruction", reconstruction)

    return SuiteResult(suite, seed, col.checks, time.perf_counter() - start, col.errors)
