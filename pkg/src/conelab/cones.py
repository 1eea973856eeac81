"""Cone models, gauges, order-unit norm, metrics and supporting states.

Points are plain 1-D float arrays; the last coordinate is the coefficient of
the distinguished order unit direction for every variant except
``Orthant2`` and ``LinearImage``.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize

from . import _kernels as K
from ._util import as_vector, sphere_grid
from .errors import BracketError, DimensionError, InputError, PreconditionError

BOUNDARY_RTOL = 1e-9
GAUGE_RTOL = 1e-14
STATE_ANGLE_TOL = 1e-6
DEFAULT_GRID = 10_000


class Verdict(enum.Enum):
    INTERIOR = "Interior"
    BOUNDARY = "Boundary"
    OUTSIDE = "Outside"


@dataclass(frozen=True)
class MembershipVerdict:
    verdict: Verdict
    margin: float

    @property
    def interior(self):
        return self.verdict is Verdict.INTERIOR

    @property
    def in_cone(self):
        return self.verdict is not Verdict.OUTSIDE


@dataclass(frozen=True, eq=False)
class State:
    """Positive linear functional normalised to 1 at the order unit."""

    covector: np.ndarray

    @classmethod
    def normalized(cls, covector, unit):
        c = as_vector(covector)
        return cls(c / float(c @ unit))

    def __call__(self, v):
        return float(self.covector @ v)

    def angle_to(self, other):
        a = self.covector / np.linalg.norm(self.covector)
        b = other.covector / np.linalg.norm(other.covector)
        return float(np.arccos(np.clip(a @ b, -1.0, 1.0)))


class ConeModel:
    """Closed cone with order unit, membership margin and state oracles.

    Subclasses backed by a kernel set ``kind``/``param``; others override
    ``margin`` and the gauge primitives.
    """

    kind = None
    param = 0.0

    def __init__(self, dim, unit):
        self.dim = int(dim)
        self.unit = as_vector(unit)
        self._cache = {}
        if self.margin(self.unit) <= 0.0:
            raise InputError(f"order unit is not interior for {self!r}")

    # -- membership ---------------------------------------------------
    def margin(self, v):
        return float(K.margin(self.kind, self.param, v))

    def boundary_tol(self, v):
        return BOUNDARY_RTOL * (1.0 + float(np.linalg.norm(v)))

    def check_dim(self, v):
        v = as_vector(v)
        if v.shape[0] != self.dim:
            raise DimensionError(f"expected a point of length {self.dim}, got {v.shape[0]}")
        return v

    # -- gauge primitives ---------------------------------------------
    def gauge_bisect(self, x, y, rtol=GAUGE_RTOL):
        """Smallest beta >= 0 with beta*y - x in C, by monotone bisection."""
        beta = float(K.bisect_gauge(self.kind, self.param, x, y, rtol))
        if math.isnan(beta):
            raise BracketError(f"gauge bracket exceeded 2^60 on {self!r} for x={x}, y={y}")
        return beta

    def gauge_value(self, x, y):
        return self.gauge_bisect(x, y)

    def ray_exit(self, x, d):
        """Largest t >= 0 with x + t*d in C (inf when the ray never leaves)."""
        return float(K.bisect_exit(self.kind, self.param, x, d))

    # -- states -------------------------------------------------------
    def supporting_covectors(self, b, probes=DEFAULT_GRID):
        """Covectors vanishing at boundary point ``b``; probing fallback."""
        cov = self.state_grid(probes)
        vals = cov @ b
        scale = np.abs(cov) @ np.abs(b)
        hits = cov[np.abs(vals) <= 1e-6 * (1.0 + scale)]
        return list(hits)

    def state_grid(self, count):
        raise InputError(f"{type(self).__name__} has no extreme-state sampler")

    def variational(self, x, y, grid):
        cov = self.state_grid(grid)
        value, _ = K.ratio_max(cov, x, y)
        return float(value)

    def to_json(self):
        raise NotImplementedError

    def cached(self, key, factory):
        if key not in self._cache:
            self._cache[key] = factory()
        return self._cache[key]


def _unit_last(n):
    u = np.zeros(n)
    u[-1] = 1.0
    return u


class Lorentz(ConeModel):
    kind = K.LORENTZ

    def __init__(self, n):
        if n < 2:
            raise InputError("Lorentz cone needs dim >= 2")
        super().__init__(n, _unit_last(n))

    def __repr__(self):
        return f"Lorentz({self.dim})"

    def gauge_value(self, x, y):
        return float(K.lorentz_gauge(x, y))

    def ray_exit(self, x, d):
        if self.margin(x) <= 0.0:
            return super().ray_exit(x, d)
        g = float(K.lorentz_gauge(-d, x))
        return math.inf if g == 0.0 else 1.0 / g

    def supporting_covectors(self, b, probes=DEFAULT_GRID):
        h = b[:-1]
        return [np.append(-h / np.linalg.norm(h), 1.0)]

    def _cov_from_dir(self, d):
        return np.append(-d / np.linalg.norm(d), 1.0)

    def state_grid(self, count):
        def build():
            w = sphere_grid(self.dim - 1, count)
            return np.column_stack([-w, np.ones(len(w))])

        return self.cached(("grid", count), build)

    def variational(self, x, y, grid):
        cov = self.state_grid(grid)
        value, arg = K.ratio_max(cov, x, y)
        return _polish_directional(self._cov_from_dir, -cov[arg, :-1], x, y, float(value))

    def to_json(self):
        return {"type": "lorentz", "dim": self.dim}


class PNorm(ConeModel):
    kind = K.PNORM

    def __init__(self, n, p):
        if n < 2:
            raise InputError("p-norm cone needs dim >= 2")
        if not p > 1.0:
            raise InputError("p-norm cone needs p > 1")
        self.param = float(p)
        super().__init__(n, _unit_last(n))

    @property
    def p(self):
        return self.param

    def __repr__(self):
        return f"PNorm({self.dim}, p={self.p:g})"

    def _gradient(self, h):
        w = h / K.pnorm(h, self.p)
        return np.sign(w) * np.abs(w) ** (self.p - 1.0)

    def supporting_covectors(self, b, probes=DEFAULT_GRID):
        return [np.append(-self._gradient(b[:-1]), 1.0)]

    def _cov_from_dir(self, d):
        return np.append(-self._gradient(d), 1.0)

    def state_grid(self, count):
        def build():
            w = sphere_grid(self.dim - 1, count)
            return np.array([self._cov_from_dir(d) for d in w])

        return self.cached(("grid", count), build)

    def variational(self, x, y, grid):
        cov = self.state_grid(grid)
        value, arg = K.ratio_max(cov, x, y)
        start = sphere_grid(self.dim - 1, grid)[arg]
        return _polish_directional(self._cov_from_dir, start, x, y, float(value))

    def to_json(self):
        return {"type": "pnorm", "dim": self.dim, "p": self.p}


@dataclass(frozen=True)
class Disk:
    radius: float = 1.0

    def to_json(self):
        return {"type": "disk", "radius": self.radius}


@dataclass(frozen=True)
class Lens:
    """Intersection of the unit disks centred at (+-c, 0)."""

    center_offset: float = 0.5

    def to_json(self):
        return {"type": "lens", "center_offset": self.center_offset}

    @property
    def corner_height(self):
        return math.sqrt(1.0 - self.center_offset**2)


class CrossSection2D(ConeModel):
    """Cone over a planar convex body: {(x, lam): lam > 0, x/lam in body} + {0}."""

    def __init__(self, body):
        self.body = body
        if isinstance(body, Disk):
            if not body.radius > 0:
                raise InputError("disk radius must be positive")
            self.kind, self.param = K.DISK, float(body.radius)
        elif isinstance(body, Lens):
            if not 0.0 <= body.center_offset < 1.0:
                raise InputError("lens center_offset must lie in [0, 1)")
            self.kind, self.param = K.LENS, float(body.center_offset)
        else:
            raise InputError(f"unknown body {body!r}")
        super().__init__(3, _unit_last(3))

    def __repr__(self):
        return f"CrossSection2D({self.body!r})"

    def _scaled(self, v):
        return np.array([v[0] / self.param, v[1] / self.param, v[2]])

    def gauge_value(self, x, y):
        if self.kind == K.DISK:
            return float(K.lorentz_gauge(self._scaled(x), self._scaled(y)))
        return self.gauge_bisect(x, y)

    def ray_exit(self, x, d):
        if self.kind == K.DISK and self.margin(x) > 0.0:
            g = float(K.lorentz_gauge(-self._scaled(d), self._scaled(x)))
            return math.inf if g == 0.0 else 1.0 / g
        return super().ray_exit(x, d)

    def _lens_cov(self, n, sigma):
        c = self.param
        h = 1.0 + sigma * c * n[0]
        return np.array([-n[0], -n[1], h]) / h

    def supporting_covectors(self, b, probes=DEFAULT_GRID):
        lam = b[2]
        if self.kind == K.DISK:
            h = b[:2]
            return [np.array([*(-h / (self.param * np.linalg.norm(h))), 1.0])]
        covs = []
        tol = self.boundary_tol(b)
        for sigma in (1.0, -1.0):
            off = np.array([b[0] - sigma * self.param * lam, b[1]])
            if abs(lam - np.linalg.norm(off)) <= tol:
                covs.append(self._lens_cov(off / np.linalg.norm(off), sigma))
        return covs

    def _arcs(self):
        """Angle ranges (normal direction) of each boundary arc of the body."""
        if self.kind == K.DISK:
            return [(None, 0.0, 2.0 * math.pi)]
        alpha = math.acos(self.param)
        return [(1.0, math.pi - alpha, math.pi + alpha), (-1.0, -alpha, alpha)]

    def _cov_at(self, sigma, theta):
        n = np.array([math.cos(theta), math.sin(theta)])
        if sigma is None:
            return np.array([-n[0] / self.param, -n[1] / self.param, 1.0])
        return self._lens_cov(n, sigma)

    def _grid_angles(self, count):
        out = []
        for sigma, lo, hi in self._arcs():
            if sigma is None:
                thetas = lo + (hi - lo) * np.arange(count) / count
            else:
                thetas = np.linspace(lo, hi, max(count // 2, 2))
            out.extend((sigma, float(t)) for t in thetas)
        return out

    def state_grid(self, count):
        def build():
            return np.array([self._cov_at(s, t) for s, t in self._grid_angles(count)])

        return self.cached(("grid", count), build)

    def variational(self, x, y, grid):
        cov = self.state_grid(grid)
        value, arg = K.ratio_max(cov, x, y)
        value = float(value)
        angles = self._grid_angles(grid)
        sigma, theta0 = angles[arg]
        step = 2.0 * math.pi / grid
        bounds = (theta0 - 2 * step, theta0 + 2 * step)
        for s, lo, hi in self._arcs():
            if s == sigma and s is not None:
                bounds = (max(lo, bounds[0]), min(hi, bounds[1]))

        def neg(theta):
            c = self._cov_at(sigma, theta)
            return -(c @ x) / (c @ y)

        res = optimize.minimize_scalar(neg, bounds=bounds, method="bounded", options={"xatol": 1e-13})
        return max(value, -float(res.fun))

    def to_json(self):
        return {"type": "cross_section", "body": self.body.to_json()}


class Orthant2(ConeModel):
    kind = K.ORTHANT

    def __init__(self):
        super().__init__(2, np.ones(2))

    def __repr__(self):
        return "Orthant2()"

    def gauge_value(self, x, y):
        return max(0.0, float(np.max(x / y)))

    def ray_exit(self, x, d):
        neg = d < 0
        if not np.any(neg):
            return math.inf
        return float(np.min(-x[neg] / d[neg]))

    def supporting_covectors(self, b, probes=DEFAULT_GRID):
        tol = self.boundary_tol(b)
        covs = []
        if abs(b[0]) <= tol:
            covs.append(np.array([1.0, 0.0]))
        if abs(b[1]) <= tol:
            covs.append(np.array([0.0, 1.0]))
        return covs

    def state_grid(self, count):
        return np.eye(2)

    def to_json(self):
        return {"type": "orthant2"}


class LinearImage(ConeModel):
    """T(base) with unit T(base.unit); everything is pulled back through T^-1."""

    def __init__(self, base, matrix):
        T = np.array(matrix, dtype=float)
        if T.shape != (base.dim, base.dim):
            raise DimensionError(f"matrix must be {base.dim}x{base.dim}")
        if np.linalg.cond(T) > 1e12:
            raise InputError("linear image matrix is not invertible")
        self.base = base
        self.matrix = T
        self.inverse_matrix = np.linalg.inv(T)
        super().__init__(base.dim, T @ base.unit)

    def __repr__(self):
        return f"LinearImage({self.base!r}, T={self.matrix.tolist()})"

    def pullback(self, v):
        return self.inverse_matrix @ v

    def margin(self, v):
        return self.base.margin(self.pullback(v))

    def boundary_tol(self, v):
        return self.base.boundary_tol(self.pullback(v))

    def gauge_bisect(self, x, y, rtol=GAUGE_RTOL):
        return self.base.gauge_bisect(self.pullback(x), self.pullback(y), rtol)

    def gauge_value(self, x, y):
        return self.base.gauge_value(self.pullback(x), self.pullback(y))

    def ray_exit(self, x, d):
        return self.base.ray_exit(self.pullback(x), self.pullback(d))

    def supporting_covectors(self, b, probes=DEFAULT_GRID):
        Ti = self.inverse_matrix
        return [Ti.T @ c for c in self.base.supporting_covectors(self.pullback(b), probes)]

    def state_grid(self, count):
        return self.cached(("grid", count), lambda: self.base.state_grid(count) @ self.inverse_matrix)

    def variational(self, x, y, grid):
        return self.base.variational(self.pullback(x), self.pullback(y), grid)

    def to_json(self):
        return {"type": "linear_image", "matrix": self.matrix.tolist(), "base": self.base.to_json()}


def _polish_directional(cov_from_dir, start, x, y, grid_value):
    """Local maximisation of phi(x)/phi(y) over the smooth state family."""

    def neg(d):
        c = cov_from_dir(d)
        return -(c @ x) / (c @ y)

    res = optimize.minimize(neg, np.asarray(start, dtype=float), method="BFGS", options={"gtol": 1e-12})
    return max(grid_value, -float(res.fun))


# -- descriptors --------------------------------------------------------

def cone_from_json(desc):
    if not isinstance(desc, dict) or "type" not in desc:
        raise InputError(f"cone descriptor must be an object with a 'type': {desc!r}")
    kind = desc["type"]
    try:
        if kind == "lorentz":
            return Lorentz(int(desc["dim"]))
        if kind == "pnorm":
            return PNorm(int(desc["dim"]), float(desc["p"]))
        if kind == "linear_image":
            return LinearImage(cone_from_json(desc["base"]), desc["matrix"])
        if kind == "cross_section":
            body = desc["body"]
            if body.get("type") == "disk":
                return CrossSection2D(Disk(float(body.get("radius", 1.0))))
            if body.get("type") == "lens":
                return CrossSection2D(Lens(float(body.get("center_offset", 0.5))))
            raise InputError(f"unknown body type {body.get('type')!r}")
        if kind == "orthant2":
            return Orthant2()
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, InputError):
            raise
        raise InputError(f"bad cone descriptor {desc!r}: {exc}") from exc
    raise InputError(f"unknown cone type {kind!r}")


def point_from_json(obj):
    """Accept {"coords": [...]} or the spin form {"h": [...], "lam": ...}."""
    if isinstance(obj, dict):
        if "coords" in obj:
            return as_vector(obj["coords"])
        if "h" in obj and "lam" in obj:
            return np.append(as_vector(obj["h"]), float(obj["lam"]))
    if isinstance(obj, list):
        return as_vector(obj)
    raise InputError(f"cannot read a point from {obj!r}")


def point_to_json(v):
    return {"coords": [float(c) for c in v]}


# -- operations ---------------------------------------------------------

def contains(cone, v, tol=None):
    v = cone.check_dim(v)
    m = cone.margin(v)
    tol = cone.boundary_tol(v) if tol is None else tol
    if abs(m) <= tol:
        return MembershipVerdict(Verdict.BOUNDARY, m)
    return MembershipVerdict(Verdict.INTERIOR if m > 0 else Verdict.OUTSIDE, m)


def is_interior(cone, v):
    return contains(cone, v).interior


def _require_interior(cone, v, what):
    if not contains(cone, v).interior:
        raise PreconditionError(f"{what} is not in the interior of {cone!r}: {v}")


def gauge(cone, x, y):
    """M(x/y) = inf{beta > 0 : x <= beta*y}, for x in C and y interior."""
    x = cone.check_dim(x)
    y = cone.check_dim(y)
    _require_interior(cone, y, "y")
    if not contains(cone, x).in_cone:
        raise PreconditionError(f"x is outside {cone!r}: {x}")
    if not np.any(x):
        return 0.0
    return cone.gauge_value(x, y)


def gauge_variational(cone, x, y, grid=DEFAULT_GRID):
    """max over extreme states of phi(x)/phi(y); an oracle for ``gauge``."""
    x = cone.check_dim(x)
    y = cone.check_dim(y)
    _require_interior(cone, y, "y")
    return cone.variational(x, y, grid)


def thompson(cone, x, y):
    x = cone.check_dim(x)
    y = cone.check_dim(y)
    _require_interior(cone, x, "x")
    _require_interior(cone, y, "y")
    if np.array_equal(x, y):
        return 0.0
    return max(math.log(cone.gauge_value(x, y)), math.log(cone.gauge_value(y, x)))


def hilbert(cone, x, y):
    x = cone.check_dim(x)
    y = cone.check_dim(y)
    _require_interior(cone, x, "x")
    _require_interior(cone, y, "y")
    if np.array_equal(x, y):
        return 0.0
    return math.log(cone.gauge_value(x, y)) + math.log(cone.gauge_value(y, x))


def order_unit_norm(cone, v):
    """inf{lam > 0 : -lam*u <= v <= lam*u}, by bisection on both memberships."""
    v = cone.check_dim(v)
    u = cone.unit
    return max(cone.gauge_bisect(v, u), cone.gauge_bisect(-v, u))


def supporting_states(cone, b, probes=DEFAULT_GRID):
    """Distinct states vanishing at the nonzero boundary point ``b``."""
    b = cone.check_dim(b)
    if not np.any(b) or contains(cone, b).verdict is not Verdict.BOUNDARY:
        raise PreconditionError(f"{b} is not a nonzero boundary point of {cone!r}")
    states = []
    for cov in cone.supporting_covectors(b, probes):
        st = State.normalized(cov, cone.unit)
        if all(st.angle_to(other) > STATE_ANGLE_TOL for other in states):
            states.append(st)
    return states


def angular_spread(states):
    spread = 0.0
    for i, a in enumerate(states):
        for b in states[i + 1:]:
            spread = max(spread, a.angle_to(b))
    return spread


def _probe_direction(cone):
    """A direction d with neither d nor -d in C."""
    n = cone.dim
    eye = np.eye(n)
    candidates = [eye[i] for i in range(n)]
    candidates += [eye[i] - eye[j] for i in range(n) for j in range(i + 1, n)]
    for d in candidates:
        if math.isfinite(cone.ray_exit(cone.unit, d)) and math.isfinite(cone.ray_exit(cone.unit, -d)):
            return d
    raise PreconditionError(f"no two-sided direction found for {cone!r}")


def strictly_positive_state(cone, samples=256):
    """rho = (phi + psi)/2 from the supporting states at both generators of C(r, u)."""

    def build():
        u = cone.unit
        d = _probe_direction(cone)
        r = u + cone.ray_exit(u, d) * d
        s = u - cone.ray_exit(u, -d) * d
        phi = supporting_states(cone, r)[0]
        psi = supporting_states(cone, s)[0]
        rho = State.normalized(0.5 * (phi.covector + psi.covector), u)
        for b in _boundary_points_from(cone, rho, samples):
            if rho(b) <= BOUNDARY_RTOL * np.linalg.norm(b):
                raise PreconditionError(f"state {rho.covector} is not strictly positive at {b}")
        return rho

    return cone.cached("rho", build)


def section_basis(cone, rho=None):
    """Columns spanning ker(rho); coordinate-aligned when rho is the height."""
    rho = strictly_positive_state(cone) if rho is None else rho
    c = rho.covector
    n = cone.dim
    if abs(c[-1]) > 1e-12 * np.max(np.abs(c)):
        basis = np.zeros((n, n - 1))
        for i in range(n - 1):
            basis[i, i] = 1.0
            basis[-1, i] = -c[i] / c[-1]
        return basis
    from scipy.linalg import null_space

    return null_space(c[None, :])


def _boundary_points_from(cone, rho, count):
    basis = section_basis(cone, rho)
    dirs = sphere_grid(basis.shape[1], count) @ basis.T
    u = cone.unit
    return [u + cone.ray_exit(u, d) * d for d in dirs]


def boundary_points(cone, count):
    """Deterministic boundary sample: rays from u along ker(rho) directions."""
    return _boundary_points_from(cone, strictly_positive_state(cone), count)


def boundary_point(cone, direction):
    """Boundary point hit by the ray from u along ``direction``."""
    d = cone.check_dim(direction)
    t = cone.ray_exit(cone.unit, d)
    if not math.isfinite(t):
        raise PreconditionError(f"ray from u along {d} never leaves {cone!r}")
    return cone.unit + t * d


def subcone2d(cone, x, y):
    """Generators r, s of C(x, y) and the 2 x n map A with A r = e1, A s = e2."""
    x = cone.check_dim(x)
    y = cone.check_dim(y)
    _require_interior(cone, x, "x")
    rho = strictly_positive_state(cone)
    d = y - (rho(y) / rho(x)) * x
    if np.linalg.norm(d) <= 1e-12 * max(np.linalg.norm(y), 1e-300):
        raise PreconditionError("x and y are linearly dependent")
    t_plus = cone.ray_exit(x, d)
    t_minus = cone.ray_exit(x, -d)
    if not (math.isfinite(t_plus) and math.isfinite(t_minus)):
        raise BracketError(f"subcone generator search failed on {cone!r} for x={x}, y={y}")
    r = x + t_plus * d
    s = x - t_minus * d
    A = np.linalg.pinv(np.column_stack([r, s]))
    return r, s, A


def sample_interior(cone, rng, size, spread=0.9, log_scale=1.0):
    """Random interior points: section points at fraction < ``spread`` of the
    way to the boundary, times exp(U(-log_scale, log_scale))."""
    basis = section_basis(cone)
    u = cone.unit
    out = np.empty((size, cone.dim))
    for i in range(size):
        d = basis @ rng.standard_normal(basis.shape[1])
        t = cone.ray_exit(u, d)
        frac = rng.uniform(0.0, spread)
        out[i] = (u + frac * t * d) * math.exp(rng.uniform(-log_scale, log_scale))
    return out


def sample_cone(cone, rng, size, boundary_fraction=0.1):
    """Random points of the closed cone, a fraction of them on the boundary."""
    basis = section_basis(cone)
    u = cone.unit
    out = np.empty((size, cone.dim))
    for i in range(size):
        d = basis @ rng.standard_normal(basis.shape[1])
        t = cone.ray_exit(u, d)
        frac = 1.0 if rng.uniform() < boundary_fraction else rng.uniform()
        out[i] = (u + frac * t * d) * rng.uniform(0.1, 3.0)
    return out
