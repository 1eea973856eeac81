"""Gateaux linearization of cone maps, symmetries and antimorphism checks."""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from . import cones as C
from ._util import case_rng, sup_norm
from .errors import FitError, LinearizationError, PreconditionError

FD_EPS = 1e-6


@dataclass
class ConeMap:
    """Evaluatable self-map of a cone interior."""

    evaluator: object
    cone: object
    inverse_evaluator: object = None
    name: str = "map"

    def __call__(self, v):
        return np.asarray(self.evaluator(np.asarray(v, dtype=float)), dtype=float)

    def inverse(self):
        if self.inverse_evaluator is None:
            raise PreconditionError(f"{self.name} has no inverse evaluator")
        return ConeMap(self.inverse_evaluator, self.cone, self.evaluator, f"{self.name}^-1")


def identity_map(cone):
    return ConeMap(lambda v: v.copy(), cone, lambda v: v.copy(), "identity")


@dataclass
class LinearizedMap:
    matrix: np.ndarray
    basepoint: np.ndarray
    condition: float = field(default=float("nan"))

    def __post_init__(self):
        self.condition = float(np.linalg.cond(self.matrix))
        self._lu = lu_factor(self.matrix)

    def __call__(self, z):
        return self.matrix @ z

    def solve(self, w):
        return lu_solve(self._lu, w)


def _central(g, x, z, t):
    return (g(x + t * z) - g(x - t * z)) / (2.0 * t)


def gateaux(g, x, z):
    """Directional derivative of ``g`` at x along z (central difference,
    one Richardson step)."""
    cone = g.cone
    x = cone.check_dim(x)
    z = cone.check_dim(z)
    if not C.is_interior(cone, x):
        raise PreconditionError(f"x is not interior: {x}")
    if not np.any(z):
        return np.zeros_like(x)
    t = FD_EPS * (1.0 + C.order_unit_norm(cone, x)) / (1.0 + C.order_unit_norm(cone, z))
    for _ in range(4):
        if C.is_interior(cone, x + t * z) and C.is_interior(cone, x - t * z):
            break
        t /= 10.0
    else:
        raise PreconditionError(f"finite-difference stencil leaves the interior at x={x}")
    coarse = _central(g, x, z, t)
    fine = _central(g, x, z, t / 2.0)
    return (4.0 * fine - coarse) / 3.0


def linearize(g, x, checks=20, tol=1e-6, seed=0):
    """G_x(z) = -(Gateaux derivative of g at x along z), as a matrix."""
    cone = g.cone
    x = cone.check_dim(x)
    n = cone.dim
    J = np.column_stack([gateaux(g, x, e) for e in np.eye(n)])
    G = -J
    gx = g(x)
    res = sup_norm(G @ x - gx)
    if res > tol * (1.0 + sup_norm(gx)):
        raise LinearizationError(f"G_x(x) != g(x) (residual {res:.3e}) at {x}")
    rng = np.random.default_rng(seed)
    scale = np.max(np.abs(G))
    for _ in range(checks):
        z = rng.standard_normal(n)
        direct = gateaux(g, x, z)
        res = sup_norm(direct + G @ z)
        if res > tol * (1.0 + scale * sup_norm(z)):
            raise LinearizationError(f"Gateaux derivative is not linear at {x} (residual {res:.3e})")
    return LinearizedMap(G, x)


def symmetry(g, x, G=None):
    """S_x = G_x^-1 o g; inverse g^-1 o G_x when g carries an inverse."""
    G = linearize(g, x) if G is None else G
    inverse = None
    if g.inverse_evaluator is not None:
        ginv = g.inverse_evaluator
        inverse = lambda v: ginv(G(v))  # noqa: E731

    sx = ConeMap(lambda v: G.solve(g(v)), g.cone, inverse, f"S[{g.name}]")
    sx.linearization = G
    return sx


# -- verification ----------------------------------------------------------

@dataclass
class CheckRecord:
    name: str
    samples: int
    max_residual: float
    tolerance: float

    @property
    def passed(self):
        return bool(self.max_residual <= self.tolerance)

    def to_json(self):
        return {
            "name": self.name,
            "samples": self.samples,
            "max_residual": float(self.max_residual),
            "pass": self.passed,
        }


@dataclass
class VerificationReport:
    seed: int
    checks: list

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def check(self, name):
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json(self):
        return {"seed": self.seed, "checks": [c.to_json() for c in self.checks]}


def comparable_pairs(cone, rng, size):
    """Pairs x <= y built as y = x + c, c in C with ||c||_u in [0.1, 1]."""
    xs = C.sample_interior(cone, rng, size)
    cs = C.sample_cone(cone, rng, size)
    ys = np.empty_like(xs)
    for i in range(size):
        c = cs[i] / C.order_unit_norm(cone, cs[i]) * rng.uniform(0.1, 1.0)
        ys[i] = xs[i] + c
    return xs, ys


def verify_antimorphism(g, samples=500, seed=0, tol=1e-9, antihom_tol=1e-12):
    """Randomised checks of the gauge identity M(x/y) = M(g(y)/g(x)),
    antihomogeneity, order reversal and d_T/d_H isometry."""
    cone = g.cone
    suite = f"verify_antimorphism:{g.name}"
    checks = []

    rng = case_rng(seed, suite, 0)
    xs = C.sample_interior(cone, rng, samples)
    ys = C.sample_interior(cone, rng, samples)
    gx = [g(x) for x in xs]
    gy = [g(y) for y in ys]

    worst = 0.0
    for x, y, a, b in zip(xs, ys, gx, gy):
        m = C.gauge(cone, x, y)
        worst = max(worst, abs(m - C.gauge(cone, b, a)) / m)
    checks.append(CheckRecord("gauge_identity", samples, worst, tol))

    rng = case_rng(seed, suite, 1)
    worst = 0.0
    for x, a in zip(xs, gx):
        lam = math.exp(rng.uniform(-2.0, 2.0))
        ref = a / lam
        worst = max(worst, sup_norm(g(lam * x) - ref) / sup_norm(ref))
    checks.append(CheckRecord("antihomogeneity", samples, worst, antihom_tol))

    rng = case_rng(seed, suite, 2)
    lo, hi = comparable_pairs(cone, rng, samples)
    worst = 0.0
    for x, y in zip(lo, hi):
        a, b = g(x), g(y)
        worst = max(worst, max(0.0, -cone.margin(a - b)) / sup_norm(a))
    checks.append(CheckRecord("order_reversal", samples, worst, tol))

    worst_t = worst_h = 0.0
    for x, y, a, b in zip(xs, ys, gx, gy):
        worst_t = max(worst_t, abs(C.thompson(cone, a, b) - C.thompson(cone, x, y)))
        worst_h = max(worst_h, abs(C.hilbert(cone, a, b) - C.hilbert(cone, x, y)))
    checks.append(CheckRecord("thompson_isometry", samples, worst_t, tol))
    checks.append(CheckRecord("hilbert_isometry", samples, worst_h, tol))

    if g.inverse_evaluator is not None:
        worst = 0.0
        for x, a in zip(xs, gx):
            back = np.asarray(g.inverse_evaluator(a))
            worst = max(worst, sup_norm(back - x) / sup_norm(x))
        checks.append(CheckRecord("inverse_roundtrip", samples, worst, max(tol, 1e-9)))

    return VerificationReport(int(seed), checks)


# -- planar restriction ----------------------------------------------------

@dataclass
class Restriction2D:
    """h = B o g o A^-1 on the open positive quadrant."""

    g: ConeMap
    r: np.ndarray
    s: np.ndarray
    A: np.ndarray
    image_r: np.ndarray
    image_s: np.ndarray
    B: np.ndarray

    def __call__(self, z):
        z = np.asarray(z, dtype=float)
        return self.B @ self.g(z[0] * self.r + z[1] * self.s)


def restrict_to_2d(g, x, y):
    cone = g.cone
    r, s, A = C.subcone2d(cone, x, y)
    r2, s2, B = C.subcone2d(cone, g(x), g(y))
    return Restriction2D(g, r, s, A, r2, s2, B)


def planarity_residual(g, x, y, weights=(0.5, 0.5)):
    """Relative distance of g(a x + b y) from span(g(x), g(y))."""
    Q, _ = np.linalg.qr(np.column_stack([g(x), g(y)]))
    v = g(weights[0] * np.asarray(x) + weights[1] * np.asarray(y))
    return float(np.linalg.norm(v - Q @ (Q.T @ v)) / np.linalg.norm(v))


@dataclass(frozen=True)
class CanonicalFit:
    a1: float
    a2: float
    sigma: tuple
    residual: float

    @property
    def swapped(self):
        return self.sigma == (1, 0)


def fit_2d_canonical(h, samples=100, seed=0, tol=1e-6):
    """Fit h(z) = (a1 / z_sigma(1), a2 / z_sigma(2)) on the open quadrant."""
    a1, a2 = (float(c) for c in h(np.array([1.0, 1.0])))
    probe = np.asarray(h(np.array([2.0, 1.0])), dtype=float)
    candidates = {(0, 1): np.array([a1 / 2.0, a2]), (1, 0): np.array([a1, a2 / 2.0])}
    sigma = None
    for perm, ref in candidates.items():
        if sup_norm(probe - ref) <= tol * sup_norm(ref):
            sigma = perm
            break
    if sigma is None:
        raise FitError(f"h is not of canonical form: h(2,1) = {probe}, h(1,1) = {(a1, a2)}")
    a = np.array([a1, a2])
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        z = np.exp(rng.uniform(-2.0, 2.0, size=2))
        ref = a / z[list(sigma)]
        worst = max(worst, sup_norm(np.asarray(h(z)) - ref) / sup_norm(ref))
    return CanonicalFit(a1, a2, sigma, worst)


# -- fixed points ----------------------------------------------------------

def fixed_point_probe(g, x, samples=200, seed=0, tol=1e-8, sx=None):
    """S_x has no fixed point besides x; plus the G_x(x) = x => g(x) = x check."""
    cone = g.cone
    x = cone.check_dim(x)
    sx = symmetry(g, x) if sx is None else sx
    G = sx.linearization
    rng = case_rng(seed, "fixed_point_probe", 0)
    ys = C.sample_interior(cone, rng, samples)
    disp = [C.order_unit_norm(cone, sx(y) - y) for y in ys]
    self_disp = C.order_unit_norm(cone, sx(x) - x)
    gx_res = C.order_unit_norm(cone, G(x) - x)
    transfer_applies = gx_res <= tol
    g_res = C.order_unit_norm(cone, g(x) - x)
    return {
        "samples": samples,
        "min_displacement": float(min(disp)),
        "self_displacement": float(self_disp),
        "linearization_fixes_x": bool(transfer_applies),
        "linearization_fixed_residual": float(gx_res),
        "map_fixed_residual": float(g_res),
        "fixed_point_transfer": bool((not transfer_applies) or g_res <= 10.0 * tol),
    }
