"""Worked settings: the profile field f(z) e_3 on Sol and left-invariant
fields on the Heisenberg group Nil."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence

from .algebra import Poly, PolyRing, parse_rational
from .engine import DeltaPair, _deltas
from .fields import VectorFieldExpr, horizontal_condition, tau_sesqui, vertical_condition
from .frame import nil, sol

__all__ = [
    "JET_ORDER",
    "DegenerateExponentsWarning",
    "OdeOperator",
    "derive_sol_ode",
    "verify_sol_solution",
    "NilSystems",
    "nil_systems",
    "NilFamily",
    "NIL_FAMILIES",
    "MemberCheck",
    "FamilyReport",
    "rational_sqrt",
    "verify_nil_families",
]

JET_ORDER = 4
DELTA_RING = PolyRing(["d1", "d2"])


class DegenerateExponentsWarning(UserWarning):
    pass


@dataclass(frozen=True)
class OdeOperator:
    """sum_k coefficients[k] f^(k) = 0 with coefficients in Q[d1, d2].

    ``orientation`` says which expression the coefficients were read from:
    ``"condition"`` is the vertical condition itself, tau carries the
    opposite sign.
    """

    coefficients: tuple[Poly, ...]
    orientation: str = "condition"

    def specialise(self, d) -> OdeOperator:
        d = _deltas(d)
        vals = {"d1": d.delta1, "d2": d.delta2}
        return OdeOperator(tuple(c.subs(vals) for c in self.coefficients), self.orientation)

    def characteristic(self, d) -> tuple[Fraction, ...]:
        """Coefficients (constant first) of the polynomial in mu = lambda^2."""
        vals = {"d1": d.delta1, "d2": d.delta2}
        coeffs = [c.substitute(vals) for c in self.coefficients]
        if any(coeffs[1::2]):
            raise ValueError("operator has odd-order terms; not a polynomial in lambda^2")
        return tuple(coeffs[0::2])

    def __str__(self):
        names = ["f", "f'", "f''", "f'''", "f''''"]
        parts = [f"({c})*{n}" for c, n in zip(self.coefficients, names) if c]
        return " + ".join(parts) + " = 0" if parts else "0 = 0"


def derive_sol_ode(d=None, order: int = JET_ORDER) -> OdeOperator:
    """Run the engine on X = f(z) e_3 over Sol and read off the linear ODE.

    With ``d`` omitted the coefficients stay symbolic in d1, d2.
    """
    if order < JET_ORDER:
        raise ValueError(f"jet order must be at least {JET_ORDER}")
    jets = [f"f{k}" for k in range(order + 1)]
    ring = PolyRing(jets + ["d1", "d2"])
    fa = sol().jet(ring, direction=2, order=order)
    X = VectorFieldExpr(fa, [ring.zero, ring.zero, ring.symbol("f0")])
    if d is None:
        d1, d2 = ring.symbol("d1"), ring.symbol("d2")
    else:
        d = _deltas(d)
        d1, d2 = d.delta1, d.delta2
    pair = tau_sesqui(X, d1, d2)
    cond = -pair.vertical
    if not pair.horizontal.is_zero():
        raise RuntimeError(f"horizontal part does not vanish: {pair.horizontal}")
    if not (cond[0].is_zero() and cond[1].is_zero()):
        raise RuntimeError(f"vertical e_1/e_2 parts do not vanish: {cond}")
    split = cond[2].split(jets, rest=DELTA_RING)
    coeffs = [DELTA_RING.zero] * (order + 1)
    for key, c in split.items():
        if sum(key) != 1:
            raise RuntimeError(f"e_3 component is not linear in the jet: {cond[2]}")
        coeffs[key.index(1)] = c
    if any(coeffs[JET_ORDER + 1:]):
        raise RuntimeError("derivatives beyond fourth order appeared")
    return OdeOperator(tuple(coeffs[: JET_ORDER + 1]))


def verify_sol_solution(d, c: Sequence[object] = (1, 1, 1, 1)) -> bool:
    """Check that f = c1 e^{sqrt2 z} + c2 e^{-sqrt2 z} + c3 e^{s z} + c4 e^{-s z},
    s^2 = (d1 + 2 d2)/d2, solves the derived ODE.

    Each exponential solves a constant-coefficient ODE iff its exponent is a
    characteristic root; only lambda^2 enters, so the check is exact.
    """
    d = _deltas(d)
    if d.delta2 == 0:
        raise ValueError("delta2 must be nonzero")
    ratio = (d.delta1 + 2 * d.delta2) / d.delta2
    if ratio <= 0:
        raise ValueError(f"(delta1 + 2 delta2)/delta2 = {ratio} is not positive")
    if len(c) != 4:
        raise ValueError("need four constants")
    c = [parse_rational(x) for x in c]
    char = derive_sol_ode().characteristic(d)
    squares = [Fraction(2), Fraction(2), ratio, ratio]
    if ratio == 2:
        warnings.warn(
            "the two exponent pairs coincide (double roots); the four exponentials "
            "are not independent",
            DegenerateExponentsWarning,
            stacklevel=2,
        )
    for ci, mu in zip(c, squares):
        if ci and sum(a * mu**k for k, a in enumerate(char)) != 0:
            return False
    return True


# -- Heisenberg group ---------------------------------------------------------

NIL_RING = PolyRing(["a", "b", "g", "d1", "d2"])


@dataclass(frozen=True)
class NilSystems:
    """16 x the condition components for X = a e_1 + b e_2 + g e_3 on Nil.

    ``horizontal_system`` holds the e_1 and e_3 horizontal components, the first
    negated so both read as a monomial times the same cofactor.
    """

    vertical_system: tuple[Poly, Poly, Poly]
    horizontal_system: tuple[Poly, Poly]

    def evaluate(self, point: Sequence[object]) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
        vals = dict(zip("abg", (parse_rational(x) for x in point)))
        return (
            tuple(p.substitute(vals) for p in self.vertical_system),
            tuple(p.substitute(vals) for p in self.horizontal_system),
        )


def nil_systems(d=None) -> NilSystems:
    a, b, g, d1, d2 = NIL_RING.gens
    if d is not None:
        dd = _deltas(d)
        d1, d2 = NIL_RING(dd.delta1), NIL_RING(dd.delta2)
    X = VectorFieldExpr(nil(), [a, b, g])
    vert = vertical_condition(X, d1, d2) * 16
    hor = horizontal_condition(X, d1, d2) * 16
    if not hor[1].is_zero():
        raise RuntimeError(f"unexpected e_2 horizontal component {hor[1]}")
    return NilSystems((vert[0], vert[1], vert[2]), (-hor[0], hor[2]))


def rational_sqrt(q: Fraction) -> Fraction | None:
    q = Fraction(q)
    if q < 0:
        return None
    n, m = math.isqrt(q.numerator), math.isqrt(q.denominator)
    if n * n == q.numerator and m * m == q.denominator:
        return Fraction(n, m)
    return None


def _t_squared(d: DeltaPair) -> Fraction | None:
    if d.delta2 == 0:
        return None
    return -(2 * d.delta1 + d.delta2) / d.delta2


@dataclass(frozen=True)
class NilFamily:
    name: str
    description: str
    constraints: tuple[str, ...]          # polynomial relations in a, b, g, d1, d2
    map_flag_condition: str               # stated relation in d1, d2 for the map property
    regime: Callable[[DeltaPair], bool]   # when the family is nonempty
    members: Callable[[Fraction], list]   # sample points, given t

    def constraint_polys(self) -> tuple[Poly, ...]:
        return tuple(NIL_RING.parse(c) for c in self.constraints)

    def map_condition_holds(self, d: DeltaPair) -> bool:
        return NIL_RING.parse(self.map_flag_condition).substitute(
            {"d1": d.delta1, "d2": d.delta2}
        ) == 0


def _half_relation(d: DeltaPair) -> bool:
    return 2 * d.delta1 + d.delta2 == 0


def _t_regime(d: DeltaPair) -> bool:
    t2 = _t_squared(d)
    return t2 is not None and t2 > 0


_AXIS_SAMPLES = (Fraction(1), Fraction(5), Fraction(-3))
_PLANE_SAMPLES = ((5, 7), (1, -2), (-3, 4))


def _circle_points(t, sign):
    return [
        (2 * t, sign * 2 * t, Fraction(0)),
        (Fraction(0), sign * 2 * t, 2 * t),
        (6 * t / 5, sign * 2 * t, 8 * t / 5),
        (-8 * t / 5, sign * 2 * t, 6 * t / 5),
    ]


_T2 = "b^2*d2 + 8*d1 + 4*d2"  # b^2 = 4 t^2 written without t

NIL_FAMILIES: dict[str, NilFamily] = {
    f.name: f
    for f in [
        NilFamily("axis-1", "X = a e_1", ("b", "g", "2*d1 + d2"), "2*d1 + d2",
                  _half_relation, lambda t: [(s, 0, 0) for s in _AXIS_SAMPLES]),
        NilFamily("axis-2", "X = b e_2", ("a", "g", "2*d1 + d2"), "2*d1 + d2",
                  _half_relation, lambda t: [(0, s, 0) for s in _AXIS_SAMPLES]),
        NilFamily("axis-3", "X = g e_3", ("a", "b", "2*d1 + d2"), "2*d1 + d2",
                  _half_relation, lambda t: [(0, 0, s) for s in _AXIS_SAMPLES]),
        NilFamily("diag-23", "X = +-2t e_2 +- 2t e_3", ("a", _T2, "g^2 - b^2"), "d1 + d2",
                  _t_regime,
                  lambda t: [(0, s * 2 * t, u * 2 * t) for s in (1, -1) for u in (1, -1)]),
        NilFamily("diag-12", "X = +-2t e_1 +- 2t e_2", ("g", _T2, "a^2 - b^2"), "d1 + d2",
                  _t_regime,
                  lambda t: [(s * 2 * t, u * 2 * t, 0) for s in (1, -1) for u in (1, -1)]),
        NilFamily("plane-13", "X = a e_1 + g e_3", ("b", "2*d1 + d2"), "2*d1 + d2",
                  _half_relation, lambda t: [(a, 0, g) for a, g in _PLANE_SAMPLES]),
        NilFamily("circle-C1", "b = 2t, a^2 + g^2 = 4t^2",
                  (_T2, "d2*a^2 + d2*g^2 + 8*d1 + 4*d2"), "d1 + d2",
                  _t_regime, lambda t: _circle_points(t, 1)),
        NilFamily("circle-C2", "b = -2t, a^2 + g^2 = 4t^2",
                  (_T2, "d2*a^2 + d2*g^2 + 8*d1 + 4*d2"), "d1 + d2",
                  _t_regime, lambda t: _circle_points(t, -1)),
    ]
}


@dataclass(frozen=True)
class MemberCheck:
    family: str
    point: tuple[Fraction, Fraction, Fraction]
    vertical_system: tuple[Fraction, ...]
    horizontal_system: tuple[Fraction, ...]
    in_regime: bool
    stated_map_condition: str
    stated_map_holds: bool

    @property
    def vector_field(self) -> bool:
        return not any(self.vertical_system)

    @property
    def is_map(self) -> bool:
        return self.vector_field and not any(self.horizontal_system)

    @property
    def agrees_with_stated_map(self) -> bool:
        return self.is_map == self.stated_map_holds


@dataclass(frozen=True)
class FamilyReport:
    deltas: DeltaPair
    t: Fraction | None
    members: tuple[MemberCheck, ...]
    controls: tuple[MemberCheck, ...]

    def for_family(self, name: str) -> list[MemberCheck]:
        return [m for m in self.members if m.family == name]

    @property
    def regime_members(self) -> list[MemberCheck]:
        return [m for m in self.members if m.in_regime]

    @property
    def all_vector_fields(self) -> bool:
        return all(m.vector_field for m in self.regime_members)

    @property
    def controls_fail(self) -> bool:
        return all(not c.vector_field for c in self.controls)

    @property
    def map_disagreements(self) -> list[MemberCheck]:
        return [m for m in self.regime_members if not m.agrees_with_stated_map]


def _check_point(systems, family, point, in_regime, d):
    point = tuple(Fraction(x) for x in point)
    vert, hor = systems.evaluate(point)
    return MemberCheck(
        family=family.name if family else "control",
        point=point,
        vertical_system=vert,
        horizontal_system=hor,
        in_regime=in_regime,
        stated_map_condition=family.map_flag_condition if family else "",
        stated_map_holds=family.map_condition_holds(d) if family else False,
    )


def verify_nil_families(d, families: Sequence[str] | None = None) -> FamilyReport:
    """Substitute sample members of each Nil family into both systems.

    Families whose regime does not hold at ``d`` are still evaluated (their
    ``in_regime`` is False) so the report also shows the systems failing
    outside the stated regime.  Needs t^2 = -(2 d1 + d2)/d2 to be a rational
    square so every sample point is rational.
    """
    d = _deltas(d)
    t2 = _t_squared(d)
    if t2 is None:
        raise ValueError("delta2 must be nonzero")
    t = rational_sqrt(t2) if t2 >= 0 else None
    if t2 >= 0 and t is None:
        raise ValueError(f"t^2 = {t2} is not a rational square; choose other deltas")
    systems = nil_systems(d)
    names = list(families) if families is not None else list(NIL_FAMILIES)
    members = []
    for name in names:
        try:
            fam = NIL_FAMILIES[name]
        except KeyError:
            raise ValueError(f"unknown family {name!r}; known: {list(NIL_FAMILIES)}") from None
        in_regime = fam.regime(d)
        if not t and fam.regime is _t_regime:
            continue  # no nonzero rational sample points
        for point in fam.members(t if t is not None else Fraction(0)):
            members.append(_check_point(systems, fam, point, in_regime, d))
    controls = []
    if t:
        controls.append(_check_point(systems, None, (2 * t, 0, 2 * t), False, d))
    return FamilyReport(d, t, tuple(members), tuple(controls))
