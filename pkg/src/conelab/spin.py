"""Spin-factor Jordan algebra H + Re with its inversion antimorphism."""

import math
from dataclasses import dataclass

import numpy as np

from . import cones as C
from .antimorphism import ConeMap
from .errors import DimensionError, InputError, PreconditionError, SingularElementError

SINGULAR_RTOL = 1e-12


@dataclass(frozen=True, eq=False)
class SpinElement:
    h: np.ndarray
    lam: float

    @classmethod
    def from_point(cls, v):
        v = np.asarray(v, dtype=float)
        return cls(v[:-1].copy(), float(v[-1]))

    @classmethod
    def unit(cls, n):
        return cls(np.zeros(n - 1), 1.0)

    @property
    def coords(self):
        return np.append(self.h, self.lam)

    @property
    def dim(self):
        return self.h.shape[0] + 1

    def norm(self):
        """Spin norm ||h||_2 + |lam| (the order unit norm of the Lorentz cone)."""
        return float(np.linalg.norm(self.h)) + abs(self.lam)

    def __add__(self, other):
        return SpinElement(self.h + other.h, self.lam + other.lam)

    def __sub__(self, other):
        return SpinElement(self.h - other.h, self.lam - other.lam)

    def scale(self, c):
        return SpinElement(c * self.h, c * self.lam)

    def to_json(self):
        return {"h": [float(c) for c in self.h], "lam": float(self.lam)}


def _spin(a):
    return a if isinstance(a, SpinElement) else SpinElement.from_point(a)


@dataclass(frozen=True)
class SpectralPair:
    lam1: float
    lam2: float
    p: SpinElement
    pprime: SpinElement

    def recompose(self):
        return self.p.scale(self.lam1) + self.pprime.scale(self.lam2)


def jordan_product(a, b):
    """(a + al e) o (b + be e) = be a + al b + ((a|b) + al be) e."""
    a, b = _spin(a), _spin(b)
    if a.dim != b.dim:
        raise DimensionError(f"dimension mismatch: {a.dim} vs {b.dim}")
    return SpinElement(b.lam * a.h + a.lam * b.h, float(a.h @ b.h) + a.lam * b.lam)


def spectral(a):
    a = _spin(a)
    nx = float(np.linalg.norm(a.h))
    if nx == 0.0:
        direction = np.zeros_like(a.h)
        direction[0] = 1.0
    else:
        direction = a.h / nx
    p = SpinElement(0.5 * direction, 0.5)
    pprime = SpinElement(-0.5 * direction, 0.5)
    return SpectralPair(a.lam + nx, a.lam - nx, p, pprime)


def inverse(a):
    a = _spin(a)
    nx = float(np.linalg.norm(a.h))
    if abs(abs(a.lam) - nx) <= SINGULAR_RTOL * (1.0 + a.norm()):
        raise SingularElementError(f"element {a.coords} is not invertible")
    det = (a.lam - nx) * (a.lam + nx)
    return SpinElement(-a.h / det, a.lam / det)


def sqrt_in_cone(v, tol=1e-12):
    """The square root in C: sqrt(lam1) p + sqrt(lam2) p'."""
    v = _spin(v)
    sp = spectral(v)
    if sp.lam2 < -tol * (1.0 + v.norm()):
        raise PreconditionError(f"{v.coords} is not in the Lorentz cone")
    return sp.p.scale(math.sqrt(sp.lam1)) + sp.pprime.scale(math.sqrt(max(sp.lam2, 0.0)))


def _lorentz_core(cone):
    """Chain of linear images down to a Lorentz cone, or None."""
    mats = []
    while isinstance(cone, C.LinearImage):
        mats.append(cone)
        cone = cone.base
    if not isinstance(cone, C.Lorentz):
        return None
    return mats


def inversion_map(cone):
    """a -> a^-1 on Lorentz(n); v -> T(iota(T^-1 v)) on its linear images."""
    chain = _lorentz_core(cone)
    if chain is None:
        raise InputError(f"inversion is only available on Lorentz cones and their linear images, not {cone!r}")

    def iota(v):
        return inverse(SpinElement.from_point(v)).coords

    if not chain:
        return ConeMap(iota, cone, iota, "inversion")

    def conjugated(v):
        for img in chain:
            v = img.inverse_matrix @ v
        w = iota(v)
        for img in reversed(chain):
            w = img.matrix @ w
        return w

    return ConeMap(conjugated, cone, conjugated, "conjugated-inversion")
