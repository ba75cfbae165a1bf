"""Exact computation of interpolating sesqui-harmonic conditions for vector
fields on Lie groups with a left-invariant orthonormal frame."""

__version__ = "0.1.0"

from .algebra import Derivation, Poly, PolyRing, parse_rational  # noqa: E402
from .frame import FrameAlgebra, nil, preset, sol  # noqa: E402
from .fields import (  # noqa: E402
    TauPair,
    VectorFieldExpr,
    horizontal_condition,
    rough_laplacian,
    s_of_x,
    tau,
    tau_sesqui,
    vertical_condition,
)
from .engine import DeltaPair, check, energy_density, same_sign_scan, variation_test  # noqa: E402

__all__ = [
    "__version__",
    "Derivation", "Poly", "PolyRing", "parse_rational",
    "FrameAlgebra", "nil", "sol", "preset",
    "TauPair", "VectorFieldExpr", "horizontal_condition", "rough_laplacian",
    "s_of_x", "tau", "tau_sesqui", "vertical_condition",
    "DeltaPair", "check", "energy_density", "same_sign_scan", "variation_test",
]
