"""Hot numeric kernels.

Every kernel is written in the numba-compatible subset of Python. When the
environment variable ``CONELAB_NUMBA`` is ``"0"`` (or numba is missing) the
plain-Python versions are used instead, with vectorised numpy replacements
for the kernels where numpy is the faster fallback (``ratio_max``,
``margin_batch``).

Cone kinds understood by the kernels::

    LORENTZ  v[-1] >= ||v[:-1]||_2
    PNORM    v[-1] >= ||v[:-1]||_p          (param = p)
    DISK     ||v[:2]|| <= R v[2]            (param = R)
    LENS     ||v[:2] -+ c v[2] e1|| <= v[2] (param = c)
    ORTHANT  v >= 0 (two coordinates)
"""

import math
import os

import numpy as np

LORENTZ = 0
PNORM = 1
DISK = 2
LENS = 3
ORTHANT = 4

BRACKET_CAP = 2.0**60


def _numba_requested():
    return os.environ.get("CONELAB_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")


try:
    if not _numba_requested():
        raise ImportError
    import numba

    NUMBA_ENABLED = True
except ImportError:
    numba = None
    NUMBA_ENABLED = False

BACKEND = "numba" if NUMBA_ENABLED else "numpy"


def _kernel(fn):
    if NUMBA_ENABLED:
        return numba.njit(cache=True)(fn)
    return fn


@_kernel
def pnorm(x, p):
    m = 0.0
    for i in range(x.shape[0]):
        a = abs(x[i])
        if a > m:
            m = a
    if m == 0.0:
        return 0.0
    acc = 0.0
    for i in range(x.shape[0]):
        acc += (abs(x[i]) / m) ** p
    return m * acc ** (1.0 / p)


@_kernel
def norm2(x):
    acc = 0.0
    for i in range(x.shape[0]):
        acc += x[i] * x[i]
    return math.sqrt(acc)


@_kernel
def margin(kind, param, v):
    n = v.shape[0]
    if kind == LORENTZ:
        return v[n - 1] - norm2(v[: n - 1])
    if kind == PNORM:
        return v[n - 1] - pnorm(v[: n - 1], param)
    if kind == DISK:
        return v[2] - math.hypot(v[0], v[1]) / param
    if kind == LENS:
        left = v[2] - math.hypot(v[0] - param * v[2], v[1])
        right = v[2] - math.hypot(v[0] + param * v[2], v[1])
        return min(left, right)
    # ORTHANT
    return min(v[0], v[1])


@_kernel
def bisect_gauge(kind, param, x, y, rtol):
    """Smallest beta >= 0 with beta*y - x in C; nan when no bracket exists."""
    if margin(kind, param, -x) >= 0.0:
        return 0.0
    lo = 0.0
    hi = 1.0
    while margin(kind, param, hi * y - x) < 0.0:
        lo = hi
        hi *= 2.0
        if hi > BRACKET_CAP:
            return math.nan
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if margin(kind, param, mid * y - x) >= 0.0:
            hi = mid
        else:
            lo = mid
        if hi - lo <= rtol * hi:
            break
    return hi


@_kernel
def bisect_exit(kind, param, x, d):
    """Largest t >= 0 with x + t*d in C (x in C); inf if the ray stays inside."""
    hi = 1.0
    lo = 0.0
    while margin(kind, param, x + hi * d) >= 0.0:
        lo = hi
        hi *= 2.0
        if hi > BRACKET_CAP:
            return math.inf
    while True:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if margin(kind, param, x + mid * d) >= 0.0:
            lo = mid
        else:
            hi = mid
    return lo


@_kernel
def lorentz_gauge(x, y):
    """Smallest beta >= 0 with beta*y - x in the Lorentz cone, y interior.

    Valid for arbitrary x. A boost sends y to (0, s), s = sqrt(q(y)), after
    which the gauge is the largest spectral value of the boosted x over s.
    Unlike the Minkowski quadratic this stays accurate when x is parallel to y.
    """
    n = x.shape[0]
    lam_y = y[n - 1]
    lam_x = x[n - 1]
    nh = norm2(y[: n - 1])
    s = math.sqrt((lam_y - nh) * (lam_y + nh))
    a = 0.0
    if nh > 0.0:
        for i in range(n - 1):
            a += x[i] * y[i]
        a /= nh
    perp2 = 0.0
    for i in range(n - 1):
        c = x[i]
        if nh > 0.0:
            c -= a * y[i] / nh
        perp2 += c * c
    a_b = (lam_y * a - nh * lam_x) / s
    lam_b = (lam_y * lam_x - nh * a) / s
    beta = (lam_b + math.sqrt(a_b * a_b + perp2)) / s
    if beta < 0.0:
        beta = 0.0
    return beta


@_kernel
def _ratio_max_loop(cov, x, y):
    best = -math.inf
    arg = -1
    for i in range(cov.shape[0]):
        num = 0.0
        den = 0.0
        for j in range(cov.shape[1]):
            num += cov[i, j] * x[j]
            den += cov[i, j] * y[j]
        r = num / den
        if r > best:
            best = r
            arg = i
    return best, arg


def _ratio_max_numpy(cov, x, y):
    ratios = (cov @ x) / (cov @ y)
    arg = int(np.argmax(ratios))
    return float(ratios[arg]), arg


@_kernel
def _margin_batch_loop(kind, param, vs):
    out = np.empty(vs.shape[0])
    for i in range(vs.shape[0]):
        out[i] = margin(kind, param, vs[i])
    return out


def _margin_batch_numpy(kind, param, vs):
    vs = np.asarray(vs, dtype=float)
    if kind == LORENTZ:
        return vs[:, -1] - np.linalg.norm(vs[:, :-1], axis=1)
    if kind == PNORM:
        return vs[:, -1] - np.linalg.norm(vs[:, :-1], ord=param, axis=1)
    if kind == DISK:
        return vs[:, 2] - np.hypot(vs[:, 0], vs[:, 1]) / param
    if kind == LENS:
        left = vs[:, 2] - np.hypot(vs[:, 0] - param * vs[:, 2], vs[:, 1])
        right = vs[:, 2] - np.hypot(vs[:, 0] + param * vs[:, 2], vs[:, 1])
        return np.minimum(left, right)
    return np.minimum(vs[:, 0], vs[:, 1])


if NUMBA_ENABLED:
    ratio_max = _ratio_max_loop
    margin_batch = _margin_batch_loop
else:
    ratio_max = _ratio_max_numpy
    margin_batch = _margin_batch_numpy
