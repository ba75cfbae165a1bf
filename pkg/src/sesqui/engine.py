"""Checkers, energy density, the first-variation finite-difference test and
the same-sign rigidity scan."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .algebra import Poly, PolyRing, parse_rational
from .fields import (
    VectorFieldExpr,
    horizontal_condition,
    horizontal_terms,
    jacobian_norm_squared,
    norm_squared,
    rough_laplacian,
    s_of_x,
    vertical_condition,
    vertical_terms,
)
from .frame import FrameAlgebra

__all__ = [
    "DeltaPair",
    "CheckReport",
    "VariationResult",
    "ScanComponent",
    "SameSignScan",
    "check",
    "energy_density",
    "variation_test",
    "random_variation_suite",
    "scan_vertical_system",
    "same_sign_scan",
]


@dataclass(frozen=True)
class DeltaPair:
    delta1: Fraction
    delta2: Fraction

    def __post_init__(self):
        object.__setattr__(self, "delta1", parse_rational(self.delta1))
        object.__setattr__(self, "delta2", parse_rational(self.delta2))
        if self.delta1 == 0 and self.delta2 == 0:
            raise ValueError("degenerate functional: delta1 = delta2 = 0")

    @property
    def same_sign(self) -> bool:
        return self.delta1 * self.delta2 > 0

    def __iter__(self):
        return iter((self.delta1, self.delta2))


def _deltas(d) -> DeltaPair:
    return d if isinstance(d, DeltaPair) else DeltaPair(*d)


def _delta_values(d):
    """(d1, d2) as rationals, or untouched when given as polynomials."""
    if isinstance(d, DeltaPair):
        return d.delta1, d.delta2
    d1, d2 = d
    if isinstance(d1, Poly) or isinstance(d2, Poly):
        return d1, d2
    pair = DeltaPair(d1, d2)
    return pair.delta1, pair.delta2


@dataclass
class CheckReport:
    vertical_residual: VectorFieldExpr
    horizontal_residual: VectorFieldExpr
    is_sesqui_vector_field: bool
    is_sesqui_map: bool
    term_breakdown: dict[str, VectorFieldExpr] = field(default_factory=dict)


def check(X: VectorFieldExpr, d) -> CheckReport:
    """Exact test of both vanishing conditions for the pair ``d``."""
    d = _deltas(d)
    vert = vertical_condition(X, d.delta1, d.delta2)
    hor = horizontal_condition(X, d.delta1, d.delta2)
    breakdown = {f"vertical: {k}": v for k, v in vertical_terms(X).items()}
    breakdown.update({f"horizontal: {k}": v for k, v in horizontal_terms(X).items()})
    is_vf = vert.is_zero()
    return CheckReport(
        vertical_residual=vert,
        horizontal_residual=hor,
        is_sesqui_vector_field=is_vf,
        is_sesqui_map=is_vf and hor.is_zero(),
        term_breakdown=breakdown,
    )


def energy_density(X: VectorFieldExpr, d) -> Poly:
    """d1 m + d1 |nabla X|^2 + d2 (|S(X)|^2 + |lap X|^2) for left-invariant X.

    ``d`` is a :class:`DeltaPair` or a pair of rationals/polynomials.
    """
    if not X.frame.is_left_invariant:
        raise ValueError("energy density is position-dependent in jet mode")
    d1, d2 = _delta_values(d)
    m = X.frame.dim
    return (
        X.ring(m) * d1
        + jacobian_norm_squared(X) * d1
        + (norm_squared(s_of_x(X)) + norm_squared(rough_laplacian(X))) * d2
    )


@dataclass(frozen=True)
class VariationResult:
    lhs: float
    rhs: float
    rel_err: float

    @property
    def abs_err(self) -> float:
        return abs(self.lhs - self.rhs)


@lru_cache(maxsize=None)
def _symbolic_density(fa: FrameAlgebra):
    names = [f"x{i + 1}" for i in range(fa.dim)]
    ring = PolyRing(names + ["d1", "d2"])
    X = VectorFieldExpr(fa, [ring.symbol(n) for n in names])
    d1, d2 = ring.symbol("d1"), ring.symbol("d2")
    return names, energy_density(X, (d1, d2)), vertical_condition(X, d1, d2)


def _finite(*values):
    for v in values:
        if not math.isfinite(v):
            raise FloatingPointError("non-finite intermediate value")


def variation_test(
    fa: FrameAlgebra, X: Sequence[float], V: Sequence[float], d, step: float = 1e-4
) -> VariationResult:
    """Compare dE/dt at t=0 along X + tV (central difference) with <2 W, V>,
    W the vertical condition.  Density level, left-invariant fields only."""
    if not fa.is_left_invariant:
        raise ValueError("variation test needs left-invariant mode")
    if not fa.is_unimodular:
        raise ValueError("variation test needs a unimodular algebra")
    if not step > 0:
        raise ValueError("step must be positive")
    if len(X) != fa.dim or len(V) != fa.dim:
        raise ValueError(f"X and V need {fa.dim} components")
    if isinstance(d, DeltaPair):
        d1, d2 = float(d.delta1), float(d.delta2)
    else:
        d1, d2 = (x if isinstance(x, float) else float(parse_rational(x)) for x in d)
        if d1 == 0 and d2 == 0:
            raise ValueError("degenerate functional: delta1 = delta2 = 0")
    names, E, W = _symbolic_density(fa)
    X = [float(x) for x in X]
    V = [float(v) for v in V]
    _finite(*X, *V, d1, d2, step)

    def at(t):
        vals = {n: x + t * v for n, x, v in zip(names, X, V)}
        vals.update(d1=d1, d2=d2)
        return vals

    try:
        e_plus = E.evaluate(at(step))
        e_minus = E.evaluate(at(-step))
        lhs = (e_plus - e_minus) / (2 * step)
        base = at(0.0)
        rhs = sum(2 * w.evaluate(base) * v for w, v in zip(W.coeffs, V))
    except OverflowError as exc:
        raise FloatingPointError(f"overflow: {exc}") from None
    _finite(e_plus, e_minus, lhs, rhs)
    return VariationResult(lhs, rhs, abs(lhs - rhs) / max(1.0, abs(rhs)))


def random_variation_suite(fa: FrameAlgebra, d, n: int = 20, low: float = -2.0,
                           high: float = 2.0, step: float = 1e-4, seed: int = 0):
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        X = [rng.uniform(low, high) for _ in range(fa.dim)]
        V = [rng.uniform(low, high) for _ in range(fa.dim)]
        out.append((X, V, variation_test(fa, X, V, d, step)))
    return out


# -- same-sign rigidity -------------------------------------------------------

@dataclass(frozen=True)
class ScanComponent:
    """Component k of the vertical condition, split as x_k * cofactor when possible."""

    variable: str
    polynomial: Poly
    cofactor: Poly | None
    sign: int  # +1/-1 if the cofactor is strictly sign-definite, else 0


@dataclass(frozen=True)
class SameSignScan:
    deltas: DeltaPair
    components: tuple[ScanComponent, ...]

    @property
    def zero_only(self) -> bool:
        """True when every component forces its own variable to vanish."""
        return all(c.sign != 0 for c in self.components)

    @property
    def system(self) -> tuple[Poly, ...]:
        return tuple(c.polynomial for c in self.components)

    def describe(self) -> str:
        if self.zero_only:
            return "only the zero field: " + ", ".join(f"{c.variable}=0" for c in self.components)
        return "not decided by factor analysis; raw system: " + "; ".join(
            f"{c.polynomial} = 0" for c in self.components
        )


def _definite_sign(p: Poly) -> int:
    """+1/-1 if p is a nonzero constant plus even monomials all of that sign."""
    c0 = p.constant_term()
    if c0 == 0:
        return 0
    sign = 1 if c0 > 0 else -1
    for exps, c in p.terms.items():
        if any(e % 2 for e in exps) or (c > 0) != (sign > 0):
            return 0
    return sign


def scan_vertical_system(fa: FrameAlgebra, d, names: Sequence[str] | None = None) -> SameSignScan:
    """Factor each component of the vertical condition of X = sum x_k e_k."""
    d = _deltas(d)
    if not fa.is_left_invariant:
        raise ValueError("scan needs left-invariant mode")
    names = list(names or (["a", "b", "g"] if fa.dim == 3 else [f"x{i + 1}" for i in range(fa.dim)]))
    ring = PolyRing(names)
    X = VectorFieldExpr(fa, ring.gens)
    vert = vertical_condition(X, d.delta1, d.delta2)
    comps = []
    for name, p in zip(names, vert.coeffs):
        try:
            cof = p.divide_by_symbol(name)
        except ValueError:
            cof = None
        sign = 0 if cof is None or p.is_zero() else _definite_sign(cof)
        comps.append(ScanComponent(name, p, cof, sign))
    return SameSignScan(d, tuple(comps))


def same_sign_scan(fa: FrameAlgebra, d) -> SameSignScan:
    """Rigidity desk check for left-invariant fields when d1 d2 > 0."""
    d = _deltas(d)
    if fa.dim != 3:
        raise ValueError("same-sign scan is specialised to dimension 3")
    if not d.same_sign:
        raise ValueError("same-sign scan requires delta1 * delta2 > 0")
    return scan_vertical_system(fa, d)
