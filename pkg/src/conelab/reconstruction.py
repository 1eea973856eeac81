"""Rebuild a spin-factor structure from cone data.

Pipeline: normalised boundary points P, complements p' = u - p, the form
B(p, v) = phi_{p'}(v), its symmetry, the split V = H + Ru and the inner
product (x|y) = B(x, y)/2 on H. With B asymmetric the cone cannot carry an
antihomogeneous order-antimorphism, which turns the pipeline into a detector.
"""

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from . import cones as C
from ._util import case_rng, sphere_grid, sup_norm
from .antimorphism import symmetry, verify_antimorphism
from .errors import ConeError, IdentityCheckError, NonSmoothError, PreconditionError

PAIRING_TOL = 1e-8
P_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class PPoint:
    p: np.ndarray
    support_state: C.State

    def to_json(self):
        return {"p": [float(c) for c in self.p], "state": [float(c) for c in self.support_state.covector]}


def project_to_P(cone, r):
    """p = r / M(r/u), with its unique supporting state."""
    r = cone.check_dim(r)
    if not np.any(r) or C.contains(cone, r).verdict is not C.Verdict.BOUNDARY:
        raise PreconditionError(f"{r} is not a nonzero boundary point of {cone!r}")
    p = r / C.gauge(cone, r, cone.unit)
    states = C.supporting_states(cone, p)
    if len(states) != 1:
        raise NonSmoothError(f"{len(states)} supporting states at {p}; the cone is not smooth there")
    return PPoint(p, states[0])


def _check_P(cone, p):
    if C.contains(cone, p).verdict is not C.Verdict.BOUNDARY:
        raise IdentityCheckError(f"{p} is not on the boundary")
    m = C.gauge(cone, p, cone.unit)
    if abs(m - 1.0) > P_TOL:
        raise IdentityCheckError(f"M(p/u) = {m!r} != 1 for p={p}")


def complement(cone, p):
    q = cone.unit - p.p
    _check_P(cone, q)
    return project_to_P(cone, q)


def _fixed_direction(cone):
    basis = C.section_basis(cone)
    return basis[:, 0]


def represent_in_P(cone, v):
    """(p, alpha, beta) with v = alpha p + beta p'."""
    v = cone.check_dim(v)
    u = cone.unit
    rho = C.strictly_positive_state(cone)
    c = rho(v) / rho(u)
    d = v - c * u
    if np.linalg.norm(d) <= 1e-13 * max(np.linalg.norm(v), 1e-300):
        p = project_to_P(cone, C.boundary_point(cone, _fixed_direction(cone)))
        return p, c, c
    r, s, _ = C.subcone2d(cone, u, v)
    p = project_to_P(cone, r)
    q = s / C.gauge(cone, s, u)
    mismatch = sup_norm(q - (u - p.p))
    if mismatch > PAIRING_TOL * (1.0 + sup_norm(u)):
        raise IdentityCheckError(f"generators do not pair: q - (u - p) = {mismatch:.3e} on {cone!r}")
    coef, *_ = np.linalg.lstsq(np.column_stack([p.p, u - p.p]), v, rcond=None)
    return p, float(coef[0]), float(coef[1])


def bform(cone, p, v):
    """B(p, v) = phi_{p'}(v)."""
    return complement(cone, p).support_state(cone.check_dim(v))


def bilinear(cone, v, w):
    """B extended linearly in its first slot through v = alpha p + beta p'."""
    p, alpha, beta = represent_in_P(cone, v)
    pc = complement(cone, p)
    return alpha * pc.support_state(w) + beta * p.support_state(w)


def bilinear_terms(cone, terms, w):
    """B(sum a_i p_i, w) for an explicit P-representation [(a_i, PPoint), ...]."""
    return sum(a * bform(cone, p, w) for a, p in terms)


@dataclass
class BGram:
    points: list
    matrix: np.ndarray

    @property
    def asymmetry(self):
        return float(np.max(np.abs(self.matrix - self.matrix.T)))


def b_gram(cone, points):
    comps = [complement(cone, p) for p in points]
    m = np.array([[cp.support_state(q.p) for q in points] for cp in comps])
    return BGram(points, m)


def sample_P(cone, count, seed=0):
    """Deterministic sphere grid plus seeded random directions, mapped to P."""
    basis = C.section_basis(cone)
    k = basis.shape[1]
    n_grid = count // 2 if k > 1 else count
    dirs = list(sphere_grid(k, 16 if k == 2 else max(n_grid, 2)))
    rng = case_rng(seed, "sample_P", 0)
    while len(dirs) < count:
        dirs.append(rng.standard_normal(k))
    return [project_to_P(cone, C.boundary_point(cone, basis @ d)) for d in dirs[:count]]


@dataclass
class SymmetryCheck:
    asymmetry: float
    witness: dict
    pairs: int


def check_b_symmetry(cone, samples=500, seed=0):
    """max |B(p,q) - B(q,p)| over pairs of sampled P points."""
    m = 2
    while m * (m - 1) // 2 < samples:
        m += 1
    gram = b_gram(cone, sample_P(cone, m, seed))
    diff = np.abs(gram.matrix - gram.matrix.T)
    i, j = np.unravel_index(int(np.argmax(diff)), diff.shape)
    witness = {
        "p": [float(c) for c in gram.points[i].p],
        "q": [float(c) for c in gram.points[j].p],
        "B_pq": float(gram.matrix[i, j]),
        "B_qp": float(gram.matrix[j, i]),
    }
    return SymmetryCheck(float(diff[i, j]), witness, m * (m - 1) // 2)


def su_halfline_check(g, p, s_values, su=None):
    """||S_u(p_s) - p'_s / s||_u along p_s = (1-s) p + s u."""
    cone = g.cone
    u = cone.unit
    su = symmetry(g, u) if su is None else su
    pv = p.p if isinstance(p, PPoint) else np.asarray(p, dtype=float)
    pc = u - pv
    out = []
    for s in s_values:
        ps = (1.0 - s) * pv + s * u
        target = ((1.0 - s) * pc + s * u) / s
        out.append(C.order_unit_norm(cone, su(ps) - target))
    return out


def split_H(cone, v, tol=1e-9):
    """v = h + beta u with beta = B(v, u)/2 and h in ker(psi_u)."""
    v = cone.check_dim(v)
    u = cone.unit
    beta = 0.5 * bilinear(cone, v, u)
    h = v - beta * u
    psi = bilinear(cone, h, u) if np.any(h) else 0.0
    if abs(psi) > tol * (1.0 + sup_norm(v)):
        raise IdentityCheckError(f"psi_u(h) = {psi:.3e} for v={v}")
    return h, beta


class Verdict(enum.Enum):
    SPIN_FACTOR = "SpinFactor"
    NOT_SPIN_FACTOR = "NotSpinFactor"
    INCONCLUSIVE = "Inconclusive"


@dataclass
class ReconstructedSpin:
    """Jordan product on V = H + Ru from a basis of H and its Gram matrix."""

    cone: object
    basis: np.ndarray
    gram: np.ndarray

    def split(self, v):
        h, beta = split_H(self.cone, v)
        c, *_ = np.linalg.lstsq(self.basis, h, rcond=None)
        return c, beta

    def inner(self, c, d):
        return float(c @ self.gram @ d)

    def product(self, a, b):
        ca, al = self.split(a)
        cb, be = self.split(b)
        return self.basis @ (be * ca + al * cb) + (self.inner(ca, cb) + al * be) * self.cone.unit

    def square_root(self, v):
        p, lam, mu = represent_in_P(self.cone, v)
        if min(lam, mu) < -1e-12 * (1.0 + abs(lam) + abs(mu)):
            raise PreconditionError(f"{v} is not in the cone")
        return math.sqrt(max(lam, 0.0)) * p.p + math.sqrt(max(mu, 0.0)) * (self.cone.unit - p.p)


@dataclass
class ReconstructionReport:
    verdict: Verdict
    b_asymmetry: float
    gram_H: np.ndarray
    gram_condition: float
    norm_identity_residual: float = math.nan
    h_norm_residual: float = math.nan
    squares_residual: float = math.nan
    squares_margin: float = math.nan
    sqrt_residual: float = math.nan
    jordan_identity_residual: float = math.nan
    antimorphism_pass: object = None
    witness: dict = field(default_factory=dict)
    notes: list = field(default_factory=list)

    def to_json(self):
        def num(x):
            return None if x is None or not math.isfinite(x) else float(x)

        return {
            "verdict": self.verdict.value,
            "b_asymmetry": num(self.b_asymmetry),
            "gram_H": [[float(c) for c in row] for row in np.atleast_2d(self.gram_H)],
            "gram_condition": num(self.gram_condition),
            "norm_identity_residual": num(self.norm_identity_residual),
            "h_norm_residual": num(self.h_norm_residual),
            "squares_residual": num(self.squares_residual),
            "squares_margin": num(self.squares_margin),
            "sqrt_residual": num(self.sqrt_residual),
            "jordan_identity_residual": num(self.jordan_identity_residual),
            "antimorphism_pass": self.antimorphism_pass,
            "witness": self.witness,
            "notes": list(self.notes),
        }


RECON_TOLS = {"b_asymmetry": 1e-6, "condition": 1e6, "residual": 1e-6}


def h_basis(cone):
    """h_i = p_i - p_i' for P points along the ker(rho) coordinate directions."""
    basis = C.section_basis(cone)
    cols = []
    for d in basis.T:
        p = project_to_P(cone, C.boundary_point(cone, d))
        cols.append(2.0 * p.p - cone.unit)
    return np.column_stack(cols)


def reconstruct_jordan(cone, g=None, basis_samples=500, seed=0, tols=None, checks=64):
    """Reconstruct (H, (.|.)) and the spin product; verdict on the cone."""
    tols = {**RECON_TOLS, **(tols or {})}
    notes = []
    antimorphism_pass = None
    if g is not None:
        rep = verify_antimorphism(g, samples=min(basis_samples, 200), seed=seed)
        antimorphism_pass = rep.passed
        if not rep.passed:
            notes.append("supplied map failed the antimorphism checks")

    try:
        sym = check_b_symmetry(cone, basis_samples, seed)
    except NonSmoothError as exc:
        return ReconstructionReport(Verdict.NOT_SPIN_FACTOR, math.nan, np.zeros((0, 0)), math.nan,
                                    antimorphism_pass=antimorphism_pass, notes=notes + [f"cone is not smooth: {exc}"])
    except ConeError as exc:
        return ReconstructionReport(Verdict.INCONCLUSIVE, math.nan, np.zeros((0, 0)), math.nan,
                                    antimorphism_pass=antimorphism_pass, notes=notes + [f"sampling failed: {exc}"])

    basis = h_basis(cone)
    k = basis.shape[1]
    gram = np.array([[0.5 * bilinear(cone, basis[:, i], basis[:, j]) for j in range(k)] for i in range(k)])
    eig = np.linalg.eigvalsh(0.5 * (gram + gram.T))
    cond = float(eig[-1] / eig[0]) if eig[0] > 0 else math.inf
    report = ReconstructionReport(Verdict.INCONCLUSIVE, sym.asymmetry, gram, cond,
                                  antimorphism_pass=antimorphism_pass, witness=sym.witness, notes=notes)

    if sym.asymmetry > tols["b_asymmetry"]:
        report.verdict = Verdict.NOT_SPIN_FACTOR
        report.notes.append("B is not symmetric: no antihomogeneous order-antimorphism exists")
        return report
    if eig[0] <= 0 or cond > tols["condition"]:
        report.verdict = Verdict.NOT_SPIN_FACTOR
        report.notes.append("reconstructed Gram matrix is not positive definite")
        return report

    spin = ReconstructedSpin(cone, basis, gram)
    u = cone.unit
    try:
        rng = case_rng(seed, "reconstruct_jordan", 0)
        worst_norm = worst_h = 0.0
        for _ in range(checks):
            c = rng.standard_normal(k)
            beta = rng.uniform(-3.0, 3.0)
            x = basis @ c
            hn = math.sqrt(spin.inner(c, c))
            worst_norm = max(worst_norm, abs(C.order_unit_norm(cone, x + beta * u) - (hn + abs(beta))) / (hn + abs(beta)))
            worst_h = max(worst_h, abs(hn**2 - C.order_unit_norm(cone, x) ** 2) / hn**2)
        report.norm_identity_residual = worst_norm
        report.h_norm_residual = worst_h

        rng = case_rng(seed, "reconstruct_jordan", 1)
        worst_sq = 0.0
        worst_margin = math.inf
        for d in C.sample_interior(cone, rng, checks):
            p, _, _ = represent_in_P(cone, d)
            pv, pc = p.p, u - p.p
            delta, sigma = rng.uniform(-2.0, 2.0, size=2)
            a = delta * (pv - pc) + sigma * u
            sq = spin.product(a, a)
            ref = (sigma + delta) ** 2 * pv + (sigma - delta) ** 2 * pc
            worst_sq = max(worst_sq, sup_norm(sq - ref) / (1.0 + sup_norm(ref)))
            worst_margin = min(worst_margin, cone.margin(sq) / (1.0 + sup_norm(sq)))
        report.squares_residual = worst_sq
        report.squares_margin = worst_margin

        rng = case_rng(seed, "reconstruct_jordan", 2)
        worst_rt = 0.0
        for v in C.sample_interior(cone, rng, checks):
            w = spin.square_root(v)
            worst_rt = max(worst_rt, sup_norm(spin.product(w, w) - v) / sup_norm(v))
        report.sqrt_residual = worst_rt

        rng = case_rng(seed, "reconstruct_jordan", 3)
        worst_j = 0.0
        for _ in range(checks):
            a = basis @ rng.standard_normal(k) + rng.standard_normal() * u
            b = basis @ rng.standard_normal(k) + rng.standard_normal() * u
            a2 = spin.product(a, a)
            lhs = spin.product(a2, spin.product(a, b))
            rhs = spin.product(a, spin.product(a2, b))
            scale = 1.0 + sup_norm(a) ** 3 * sup_norm(b)
            worst_j = max(worst_j, sup_norm(lhs - rhs) / scale)
        report.jordan_identity_residual = worst_j
    except ConeError as exc:
        report.notes.append(f"sampling failed: {exc}")
        return report

    residuals = [report.norm_identity_residual, report.h_norm_residual, report.squares_residual,
                 report.sqrt_residual, report.jordan_identity_residual]
    ok = all(r <= tols["residual"] for r in residuals) and report.squares_margin >= -tols["residual"]
    report.verdict = Verdict.SPIN_FACTOR if ok else Verdict.NOT_SPIN_FACTOR
    if not ok:
        report.notes.append("reconstructed structure failed the spin-factor identities")
    return report
