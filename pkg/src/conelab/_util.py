import zlib

import numpy as np

SEED_MASK = (1 << 64) - 1


def case_rng(master_seed, suite, index=0):
    """Independent generator for case ``index`` of ``suite``.

    The stream depends only on (seed, suite name, index), so cases can be
    evaluated in any order and still reproduce.
    """
    key = zlib.crc32(str(suite).encode("utf-8"))
    seq = np.random.SeedSequence([int(master_seed) & SEED_MASK, key, int(index)])
    return np.random.default_rng(seq)


def as_vector(v):
    arr = np.array(v, dtype=float).reshape(-1)
    return arr


def sup_norm(v):
    return float(np.max(np.abs(v))) if len(v) else 0.0


def sphere_grid(dim, count):
    """Deterministic, roughly uniform points on the unit sphere of R^dim."""
    if dim == 1:
        return np.array([[1.0], [-1.0]])
    if dim == 2:
        theta = 2.0 * np.pi * np.arange(count) / count
        return np.column_stack([np.cos(theta), np.sin(theta)])
    if dim == 3:
        k = np.arange(count) + 0.5
        z = 1.0 - 2.0 * k / count
        rad = np.sqrt(1.0 - z * z)
        phi = np.pi * (3.0 - np.sqrt(5.0)) * k
        return np.column_stack([rad * np.cos(phi), rad * np.sin(phi), z])
    from scipy.stats import norm, qmc

    halton = qmc.Halton(d=dim, scramble=False).random(count + 1)[1:]
    pts = norm.ppf(halton)
    return pts / np.linalg.norm(pts, axis=1, keepdims=True)
