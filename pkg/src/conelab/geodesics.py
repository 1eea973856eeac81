"""Thompson geodesics, boundary limits of the gauge and smoothness diagnostics."""

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as K
from . import cones as C
from .antimorphism import symmetry
from .errors import IdentityCheckError, InputError, NonSmoothError, PreconditionError


@dataclass(frozen=True, eq=False)
class TypeIGeodesic:
    """t -> e^t r + e^-t s with r, s on the boundary."""

    r: np.ndarray
    s: np.ndarray

    def __call__(self, t):
        return math.exp(t) * self.r + math.exp(-t) * self.s

    @property
    def midpoint(self):
        return self.r + self.s


@dataclass(frozen=True, eq=False)
class TypeIIGeodesic:
    """t -> e^t x."""

    x: np.ndarray

    def __call__(self, t):
        return math.exp(t) * self.x


def sample(geodesic, t):
    return geodesic(t)


def typeI_through(cone, x, z):
    """Type I geodesic through x and the rescaled point mu*z, and its parameter t0.

    mu = sqrt(M(x/z) / M(z/x)) balances the two gauges so that
    M(x/mu z) = M(mu z/x) = e^t0.
    """
    x = cone.check_dim(x)
    z = cone.check_dim(z)
    mu = math.sqrt(C.gauge(cone, x, z) / C.gauge(cone, z, x))
    zh = mu * z
    t0 = C.thompson(cone, x, zh)
    if t0 <= 1e-12:
        raise PreconditionError("z is collinear with x")
    ep, em = math.exp(t0), math.exp(-t0)
    r = (zh - em * x) / (ep - em)
    s = (ep * x - zh) / (ep - em)
    for name, v in (("r", r), ("s", s)):
        if C.contains(cone, v).verdict is not C.Verdict.BOUNDARY:
            raise PreconditionError(
                f"recovered {name}={v} is not on the boundary of {cone!r} (margin {cone.margin(v):.3e})"
            )
    return TypeIGeodesic(r, s), t0


def reflect_check(g, x, geodesic, ts, sx=None):
    """Residuals ||S_x(gamma(t)) - gamma(-t)||_u for each t."""
    sx = symmetry(g, x) if sx is None else sx
    cone = g.cone
    return [C.order_unit_norm(cone, sx(geodesic(t)) - geodesic(-t)) for t in ts]


def boundary_gauge(cone, eta, x, s, rtol=1e-9):
    """M(x / ((1-s) eta + s x)), asserted equal to 1/s."""
    if not 0.0 < s <= 1.0:
        raise PreconditionError("s must lie in (0, 1]")
    eta = cone.check_dim(eta)
    if not np.any(eta) or C.contains(cone, eta).verdict is not C.Verdict.BOUNDARY:
        raise PreconditionError(f"eta={eta} is not a nonzero boundary point")
    y = (1.0 - s) * eta + s * x
    m = C.gauge(cone, x, y)
    if abs(m * s - 1.0) > rtol:
        raise IdentityCheckError(f"M(x/y) = {m!r} != 1/s = {1.0 / s!r} on {cone!r}, eta={eta}, x={x}")
    return m


def maximizing_state(cone, x, y):
    """A state attaining M(x/y) = phi(x)/phi(y): it vanishes at M(x/y) y - x."""
    m = C.gauge(cone, x, y)
    w = m * y - x
    return C.supporting_states(cone, w)[0]


@dataclass
class HoroResult:
    s: list
    estimates: list
    limit: float
    eta_values: list
    monotone_decay: bool
    target: float

    @property
    def extrapolate(self):
        return self.limit


def horo_limit(cone, eta, z, s_sequence):
    """M(z_s/y_s) / M(u/y_s) along y_s = (1-s) eta + s u, z_s = (1-s) z + s u."""
    eta = cone.check_dim(eta)
    z = cone.check_dim(z)
    states = C.supporting_states(cone, eta)
    if len(states) != 1:
        raise NonSmoothError(f"{len(states)} supporting states at eta={eta}")
    phi = states[0]
    if phi(z) <= C.BOUNDARY_RTOL * (1.0 + np.linalg.norm(z)):
        raise PreconditionError(f"phi(z) = {phi(z)} is not positive")
    u = cone.unit
    ss = sorted((float(s) for s in s_sequence), reverse=True)
    estimates, eta_vals = [], []
    for s in ss:
        ys = (1.0 - s) * eta + s * u
        zs = (1.0 - s) * z + s * u
        estimates.append(C.gauge(cone, zs, ys) / C.gauge(cone, u, ys))
        eta_vals.append(maximizing_state(cone, zs, ys)(eta))
    tol = 1e-12
    monotone = all(b <= a + tol for a, b in zip(eta_vals, eta_vals[1:]))
    return HoroResult(ss, estimates, estimates[-1], eta_vals, monotone, phi(z))


def convergence_order(s_values, estimates, limit):
    """Least-squares slope of log|estimate - limit| against log s."""
    s = np.asarray(s_values, dtype=float)
    err = np.abs(np.asarray(estimates, dtype=float) - limit)
    keep = err > 0
    slope, _ = np.polyfit(np.log(s[keep]), np.log(err[keep]), 1)
    return float(slope)


# -- cross sections ----------------------------------------------------------

def _section_cone(cone):
    if isinstance(cone, C.CrossSection2D) or (isinstance(cone, C.Lorentz) and cone.dim == 3):
        return cone
    raise InputError(f"cross-section computations need CrossSection2D or Lorentz(3), not {cone!r}")


def lift(xi):
    """Section coordinates (on lam = 1) to a cone point."""
    return np.array([xi[0], xi[1], 1.0])


def to_section(v):
    v = np.asarray(v, dtype=float)
    if v.shape[0] == 2:
        return v.copy()
    return v[:2] / v[2]


def hilbert_cross_ratio(cone, x, y):
    """d_H(x, y) as the log cross-ratio of the chord through x and y."""
    cone = _section_cone(cone)
    a, b = to_section(x), to_section(y)
    if not (C.is_interior(cone, lift(a)) and C.is_interior(cone, lift(b))):
        raise PreconditionError("cross-ratio needs interior points")
    if np.allclose(a, b, rtol=0.0, atol=0.0):
        return 0.0
    direction = np.array([b[0] - a[0], b[1] - a[1], 0.0])
    t_y = float(K.bisect_exit(cone.kind, cone.param, lift(b), direction))
    t_x = float(K.bisect_exit(cone.kind, cone.param, lift(a), -direction))
    if not (math.isfinite(t_x) and math.isfinite(t_y)):
        raise PreconditionError("chord endpoints not found")
    return math.log((1.0 + t_x) * (1.0 + t_y) / (t_x * t_y))


@dataclass(frozen=True)
class GromovRecord:
    s: float
    value: float
    branch: str


def _rotate(v, angle):
    c, s = math.cos(angle), math.sin(angle)
    return np.array([c * v[0] - s * v[1], s * v[0] + c * v[1]])


def gromov_experiment(cone, eta1, eta2, s_values, starts=None):
    """Gromov products at u of x_s, y_s walking to eta1, eta2 along chords.

    Distinct targets: both chords start at u. Same target: by default the
    chords start at 0.5 * eta rotated by +-90 degrees.
    """
    cone = _section_cone(cone)
    e1, e2 = to_section(eta1), to_section(eta2)
    same = bool(np.allclose(e1, e2))
    if starts is None:
        if same:
            starts = (0.5 * _rotate(e1, math.pi / 2), 0.5 * _rotate(e1, -math.pi / 2))
        else:
            starts = (np.zeros(2), np.zeros(2))
    a, b = (to_section(p) for p in starts)
    u = cone.unit
    records = []
    for s in sorted((float(s) for s in s_values), reverse=True):
        xs = lift((1.0 - s) * e1 + s * a)
        ys = lift((1.0 - s) * e2 + s * b)
        value = C.hilbert(cone, xs, u) + C.hilbert(cone, ys, u) - C.hilbert(cone, xs, ys)
        records.append(GromovRecord(s, value, "same" if same else "distinct"))
    return records


def smoothness_probe(cone, boundary_points, spread_tol=1e-3):
    counts, spreads = [], []
    for b in boundary_points:
        states = C.supporting_states(cone, b)
        counts.append(len(states))
        spreads.append(C.angular_spread(states))
    non_smooth = any(c >= 2 and sp > spread_tol for c, sp in zip(counts, spreads))
    return {
        "points": len(counts),
        "counts": counts,
        "spreads": spreads,
        "max_count": max(counts) if counts else 0,
        "max_spread": max(spreads) if spreads else 0.0,
        "non_smooth": non_smooth,
    }
