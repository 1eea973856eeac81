"""Geometry of order unit spaces: gauges, Hilbert and Thompson metrics,
order-antimorphisms, spin factors and Jordan reconstruction from cone data."""

from ._kernels import BACKEND
from .antimorphism import (
    ConeMap,
    LinearizedMap,
    VerificationReport,
    fit_2d_canonical,
    gateaux,
    identity_map,
    linearize,
    restrict_to_2d,
    symmetry,
    verify_antimorphism,
)
from .cones import (
    CrossSection2D,
    Disk,
    Lens,
    LinearImage,
    Lorentz,
    Orthant2,
    PNorm,
    State,
    Verdict,
    contains,
    gauge,
    gauge_variational,
    hilbert,
    order_unit_norm,
    strictly_positive_state,
    subcone2d,
    supporting_states,
    thompson,
)
from .errors import ConeError, InputError, PreconditionError
from .reconstruction import ReconstructionReport, reconstruct_jordan
from .spin import SpinElement, inversion_map, jordan_product, spectral

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "ConeError",
    "ConeMap",
    "CrossSection2D",
    "Disk",
    "InputError",
    "Lens",
    "LinearImage",
    "LinearizedMap",
    "Lorentz",
    "Orthant2",
    "PNorm",
    "PreconditionError",
    "ReconstructionReport",
    "SpinElement",
    "State",
    "Verdict",
    "VerificationReport",
    "contains",
    "fit_2d_canonical",
    "gateaux",
    "gauge",
    "gauge_variational",
    "hilbert",
    "identity_map",
    "inversion_map",
    "jordan_product",
    "linearize",
    "order_unit_norm",
    "reconstruct_jordan",
    "restrict_to_2d",
    "spectral",
    "strictly_positive_state",
    "subcone2d",
    "supporting_states",
    "symmetry",
    "thompson",
    "verify_antimorphism",
]
