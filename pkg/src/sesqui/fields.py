"""Covariant calculus of vector fields with polynomial frame coefficients.

A field is X = sum_i X^i e_i with X^i in a :class:`~sesqui.algebra.PolyRing`.
Frame vectors act on the coefficients through the frame derivations, so the
same code handles left-invariant fields (constant symbols) and profile fields
such as f(z) e_3 written with jet symbols f0..f4.

The two vanishing conditions are assembled from named sub-terms so that each
summand can be inspected on its own; :func:`tau_sesqui` is their negation.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence, Union

from .algebra import Poly, PolyRing, SymbolMismatchError
from .frame import FrameAlgebra

__all__ = [
    "VectorFieldExpr",
    "FieldJacobian",
    "TauPair",
    "covariant_derivative",
    "covariant_derivative_along",
    "jacobian",
    "rough_laplacian",
    "curvature_apply",
    "nabla_curvature",
    "s_of_x",
    "inner",
    "norm_squared",
    "jacobian_norm_squared",
    "vertical_terms",
    "horizontal_terms",
    "vertical_condition",
    "horizontal_condition",
    "tau",
    "tau_sesqui",
    "VERTICAL_TERMS",
    "HORIZONTAL_TERMS",
]


class VectorFieldExpr:
    """Immutable field sum_i coeffs[i] e_i on a frame algebra."""

    __slots__ = ("frame", "coeffs")

    def __init__(self, frame: FrameAlgebra, coeffs: Sequence[Poly]):
        coeffs = tuple(coeffs)
        if len(coeffs) != frame.dim:
            raise ValueError(f"field has {len(coeffs)} coefficients, frame dimension is {frame.dim}")
        ring = coeffs[0].ring
        for p in coeffs:
            if not isinstance(p, Poly):
                raise TypeError("coefficients must be Poly values")
            if p.ring != ring:
                raise SymbolMismatchError("coefficients live in different rings")
        self.frame = frame
        self.coeffs = coeffs

    @classmethod
    def from_literals(cls, frame: FrameAlgebra, ring: PolyRing, literals: Sequence[object]):
        return cls(frame, [ring(x) for x in literals])

    @classmethod
    def zero(cls, frame: FrameAlgebra, ring: PolyRing):
        return cls(frame, [ring.zero] * frame.dim)

    @classmethod
    def basis(cls, frame: FrameAlgebra, ring: PolyRing, i: int):
        return cls(frame, [ring.one if k == i else ring.zero for k in range(frame.dim)])

    @property
    def ring(self) -> PolyRing:
        return self.coeffs[0].ring

    @property
    def dim(self) -> int:
        return len(self.coeffs)

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self) -> Iterator[Poly]:
        return iter(self.coeffs)

    def __getitem__(self, i: int) -> Poly:
        return self.coeffs[i]

    def _check(self, other: VectorFieldExpr):
        if not isinstance(other, VectorFieldExpr):
            return False
        if other.frame != self.frame:
            raise ValueError("fields belong to different frames")
        return True

    def __add__(self, other):
        if not self._check(other):
            return NotImplemented
        return VectorFieldExpr(self.frame, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __sub__(self, other):
        if not self._check(other):
            return NotImplemented
        return VectorFieldExpr(self.frame, [a - b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self):
        return VectorFieldExpr(self.frame, [-a for a in self.coeffs])

    def __mul__(self, scalar):
        if isinstance(scalar, VectorFieldExpr):
            return NotImplemented
        return VectorFieldExpr(self.frame, [a * scalar for a in self.coeffs])

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, VectorFieldExpr):
            return NotImplemented
        return self.frame == other.frame and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def is_zero(self) -> bool:
        return all(p.is_zero() for p in self.coeffs)

    def subs(self, assignment) -> VectorFieldExpr:
        return VectorFieldExpr(self.frame, [p.subs(assignment) for p in self.coeffs])

    def __str__(self):
        return "(" + ", ".join(str(p) for p in self.coeffs) + ")"

    def __repr__(self):
        return f"VectorFieldExpr{self}"


FieldLike = Union[VectorFieldExpr, int]


@dataclass(frozen=True)
class FieldJacobian:
    """Columns nabla_{e_i} X, i = 0..m-1."""

    columns: tuple[VectorFieldExpr, ...]

    def __getitem__(self, i):
        return self.columns[i]

    def is_zero(self) -> bool:
        return all(col.is_zero() for col in self.columns)


@dataclass(frozen=True)
class TauPair:
    """Horizontal and vertical parts of a field along X in TM."""

    horizontal: VectorFieldExpr
    vertical: VectorFieldExpr

    def is_zero(self) -> bool:
        return self.horizontal.is_zero() and self.vertical.is_zero()

    def __mul__(self, scalar):
        return TauPair(self.horizontal * scalar, self.vertical * scalar)

    __rmul__ = __mul__


def _as_field(x: FieldLike, like: VectorFieldExpr) -> VectorFieldExpr:
    if isinstance(x, VectorFieldExpr):
        return x
    if isinstance(x, int):
        if not 0 <= x < like.frame.dim:
            raise IndexError(f"frame index {x} out of range")
        return VectorFieldExpr.basis(like.frame, like.ring, x)
    raise TypeError(f"expected a field or frame index, got {type(x).__name__}")


def _basis(X: VectorFieldExpr, i: int) -> VectorFieldExpr:
    return VectorFieldExpr.basis(X.frame, X.ring, i)


def covariant_derivative(i: int, X: VectorFieldExpr) -> VectorFieldExpr:
    """(nabla_{e_i} X)^k = e_i(X^k) + sum_j Gamma^k_{ij} X^j."""
    fa = X.frame
    if not 0 <= i < fa.dim:
        raise IndexError(f"frame index {i} out of range")
    g = fa.connection.gamma[i]
    D = fa.derivation(i)
    out = []
    for k in range(fa.dim):
        acc = D(X.coeffs[k])
        for j in range(fa.dim):
            if g[j][k]:
                acc = acc + X.coeffs[j] * g[j][k]
        out.append(acc)
    return VectorFieldExpr(fa, out)


def covariant_derivative_along(W: VectorFieldExpr, X: VectorFieldExpr) -> VectorFieldExpr:
    out = VectorFieldExpr.zero(X.frame, X.ring)
    for i, w in enumerate(W.coeffs):
        if w:
            out = out + covariant_derivative(i, X) * w
    return out


def jacobian(X: VectorFieldExpr) -> FieldJacobian:
    return FieldJacobian(tuple(covariant_derivative(i, X) for i in range(X.frame.dim)))


def rough_laplacian(X: VectorFieldExpr) -> VectorFieldExpr:
    """sum_i (nabla_{nabla_{e_i} e_i} X - nabla_{e_i} nabla_{e_i} X)."""
    out = VectorFieldExpr.zero(X.frame, X.ring)
    for i in range(X.frame.dim):
        nii = covariant_derivative(i, _basis(X, i))
        out = out + covariant_derivative_along(nii, X) - covariant_derivative(i, covariant_derivative(i, X))
    return out


def curvature_apply(U: FieldLike, V: FieldLike, Z: FieldLike, like: VectorFieldExpr | None = None) -> VectorFieldExpr:
    """R(U, V) Z, multilinear over the coefficient ring."""
    ref = like or next(x for x in (U, V, Z) if isinstance(x, VectorFieldExpr))
    U, V, Z = (_as_field(x, ref) for x in (U, V, Z))
    fa = ref.frame
    r, m = fa.curvature.r, fa.dim
    out = [ref.ring.zero] * m
    for i in range(m):
        if not U.coeffs[i]:
            continue
        for j in range(m):
            if not V.coeffs[j]:
                continue
            uv = U.coeffs[i] * V.coeffs[j]
            for k in range(m):
                if not Z.coeffs[k]:
                    continue
                uvz = None
                for l in range(m):
                    if r[i][j][k][l]:
                        if uvz is None:
                            uvz = uv * Z.coeffs[k]
                        out[l] = out[l] + uvz * r[i][j][k][l]
    return VectorFieldExpr(fa, out)


def nabla_curvature(W: FieldLike, U: FieldLike, V: FieldLike, Z: FieldLike,
                    like: VectorFieldExpr | None = None) -> VectorFieldExpr:
    """(nabla_W R)(U, V) Z.

    Arguments may be fields or frame indices.  The result is tensorial, so it
    is contracted from the constant frame components of nabla R.
    """
    ref = like or next(x for x in (W, U, V, Z) if isinstance(x, VectorFieldExpr))
    W, U, V, Z = (_as_field(x, ref) for x in (W, U, V, Z))
    fa = ref.frame
    nr, m = fa.nabla_r, fa.dim
    out = [ref.ring.zero] * m
    for a in range(m):
        if not W.coeffs[a]:
            continue
        for i in range(m):
            if not U.coeffs[i]:
                continue
            wu = W.coeffs[a] * U.coeffs[i]
            for j in range(m):
                if not V.coeffs[j]:
                    continue
                wuv = wu * V.coeffs[j]
                for k in range(m):
                    if not Z.coeffs[k]:
                        continue
                    t = None
                    for l in range(m):
                        if nr[a][i][j][k][l]:
                            if t is None:
                                t = wuv * Z.coeffs[k]
                            out[l] = out[l] + t * nr[a][i][j][k][l]
    return VectorFieldExpr(fa, out)


def s_of_x(X: VectorFieldExpr) -> VectorFieldExpr:
    """S(X) = sum_i R(nabla_{e_i} X, X) e_i."""
    out = VectorFieldExpr.zero(X.frame, X.ring)
    for i in range(X.frame.dim):
        out = out + curvature_apply(covariant_derivative(i, X), X, i)
    return out


def inner(X: VectorFieldExpr, Y: VectorFieldExpr) -> Poly:
    out = X.ring.zero
    for a, b in zip(X.coeffs, Y.coeffs):
        out = out + a * b
    return out


def norm_squared(X: VectorFieldExpr) -> Poly:
    return inner(X, X)


def jacobian_norm_squared(X: VectorFieldExpr) -> Poly:
    """|nabla X|^2 = sum_i |nabla_{e_i} X|^2."""
    out = X.ring.zero
    for col in jacobian(X).columns:
        out = out + norm_squared(col)
    return out


# -- vertical condition -------------------------------------------------------

def sum_nabla_r_e_s_x(X, S=None):
    """sum_i (nabla_{e_i} R)(e_i, S(X)) X"""
    S = s_of_x(X) if S is None else S
    out = VectorFieldExpr.zero(X.frame, X.ring)
    for i in range(X.frame.dim):
        out = out + nabla_curvature(i, i, S, X)
    return out


def sum_r_e_nabla_s_x(X, S=None):
    """sum_i R(e_i, nabla_{e_i} S(X)) X"""
    S = s_of_x(X) if S is None else S
    out = VectorFieldExpr.zero(X.frame, X.ring)
    for i in range(X.frame.dim):
        out = out + curvature_apply(i, covariant_derivative(i, S), X, like=X)
    return out


def twice_sum_r_e_s_nabla_x(X, S=None):
    """2 sum_i R(e_i, S(X)) nabla_{e_i} X"""
    S = s_of_x(X) if S is None else S
    out = VectorFieldExpr.zero(X.frame, X.ring)
    for i in range(X.frame.dim):
        out = out + curvature_apply(i, S, covariant_derivative(i, X), like=X)
    return out * 2


VERTICAL_TERMS = (
    ("sum (nabla_e_i R)(e_i,S(X))X", sum_nabla_r_e_s_x),
    ("sum R(e_i,nabla_e_i S(X))X", sum_r_e_nabla_s_x),
    ("2 sum R(e_i,S(X))nabla_e_i X", twice_sum_r_e_s_nabla_x),
)


def vertical_terms(X: VectorFieldExpr) -> dict[str, VectorFieldExpr]:
    """Laplacians, S(X) and the three curvature sums of the vertical condition."""
    S = s_of_x(X)
    lap = rough_laplacian(X)
    out = {"lap X": lap, "lap lap X": rough_laplacian(lap), "S(X)": S}
    for name, fn in VERTICAL_TERMS:
        out[name] = fn(X, S)
    return out


def vertical_condition(X: VectorFieldExpr, d1, d2) -> VectorFieldExpr:
    """d1 lap X + d2 lap lap X + d2 sum_i [(nabla_{e_i}R)(e_i,S)X + R(e_i,nabla_{e_i}S)X + 2R(e_i,S)nabla_{e_i}X].

    X is an interpolating sesqui-harmonic vector field iff this is zero.
    ``d1``/``d2`` may be rationals or polynomials of X's ring.
    """
    t = vertical_terms(X)
    curv = t[VERTICAL_TERMS[0][0]] + t[VERTICAL_TERMS[1][0]] + t[VERTICAL_TERMS[2][0]]
    return t["lap X"] * d1 + (t["lap lap X"] + curv) * d2


# -- horizontal condition -----------------------------------------------------

def lap_s(X, S=None, lap=None):
    S = s_of_x(X) if S is None else S
    return rough_laplacian(S)


def r_x_lap_x_s(X, S=None, lap=None):
    S = s_of_x(X) if S is None else S
    lap = rough_laplacian(X) if lap is None else lap
    return curvature_apply(X, lap, S)


def sum_r_x_nabla_lap_x_e(X, S=None, lap=None):
    lap = rough_laplacian(X) if lap is None else lap
    out = VectorFieldExpr.zero(X.frame, X.ring)
    for i in range(X.frame.dim):
        out = out + curvature_apply(X, covariant_derivative(i, lap), i)
    return out


def sum_r_nabla_x_lap_x_e(X, S=None, lap=None):
    lap = rough_laplacian(X) if lap is None else lap
    out = VectorFieldExpr.zero(X.frame, X.ring)
    for i in range(X.frame.dim):
        out = out + curvature_apply(covariant_derivative(i, X), lap, i)
    return out


def sum_r_e_s_e(X, S=None, lap=None):
    S = s_of_x(X) if S is None else S
    out = VectorFieldExpr.zero(X.frame, X.ring)
    for i in range(X.frame.dim):
        out = out + curvature_apply(i, S, i, like=X)
    return out


def sum_nabla_s_r_nabla_x_x_e(X, S=None, lap=None):
    S = s_of_x(X) if S is None else S
    out = VectorFieldExpr.zero(X.frame, X.ring)
    for i in range(X.frame.dim):
        out = out + nabla_curvature(S, covariant_derivative(i, X), X, i)
    return out


def sum_r_x_nabla_x_nabla_s(X, S=None, lap=None):
    S = s_of_x(X) if S is None else S
    out = VectorFieldExpr.zero(X.frame, X.ring)
    for i in range(X.frame.dim):
        out = out + curvature_apply(X, covariant_derivative(i, X), covariant_derivative(i, S))
    return out


def sum_r_x_r_e_s_x_e(X, S=None, lap=None):
    S = s_of_x(X) if S is None else S
    out = VectorFieldExpr.zero(X.frame, X.ring)
    for i in range(X.frame.dim):
        out = out + curvature_apply(X, curvature_apply(i, S, X, like=X), i)
    return out


# name, function, sign inside the d2-bracket: the horizontal condition is
# d1 S + d2 (lap S + R(X,lap X)S) - d2 sum_i [t3 - t4 - t5 - t6 + t7 - t8].
HORIZONTAL_TERMS = (
    ("lap S(X)", lap_s, +1),
    ("R(X,lap X)S(X)", r_x_lap_x_s, +1),
    ("sum R(X,nabla_e_i lap X)e_i", sum_r_x_nabla_lap_x_e, -1),
    ("sum R(nabla_e_i X,lap X)e_i", sum_r_nabla_x_lap_x_e, +1),
    ("sum R(e_i,S(X))e_i", sum_r_e_s_e, +1),
    ("sum (nabla_S(X) R)(nabla_e_i X,X)e_i", sum_nabla_s_r_nabla_x_x_e, +1),
    ("sum R(X,nabla_e_i X)nabla_e_i S(X)", sum_r_x_nabla_x_nabla_s, -1),
    ("sum R(X,R(e_i,S(X))X)e_i", sum_r_x_r_e_s_x_e, +1),
)


def horizontal_terms(X: VectorFieldExpr) -> dict[str, VectorFieldExpr]:
    S = s_of_x(X)
    lap = rough_laplacian(X)
    return {name: fn(X, S, lap) for name, fn, _ in HORIZONTAL_TERMS}


def horizontal_condition(X: VectorFieldExpr, d1, d2) -> VectorFieldExpr:
    """d1 S(X) + d2 lap S(X) + d2 R(X,lap X)S(X) - d2 sum_i[R(X,nabla_i lap X)e_i
    - R(nabla_i X,lap X)e_i - R(e_i,S)e_i - (nabla_S R)(nabla_i X,X)e_i
    + R(X,nabla_i X)nabla_i S - R(X,R(e_i,S)X)e_i].

    Together with :func:`vertical_condition` vanishing, this being zero means
    X: M -> TM is an interpolating sesqui-harmonic map.
    """
    terms = horizontal_terms(X)
    acc = VectorFieldExpr.zero(X.frame, X.ring)
    for name, _, sign in HORIZONTAL_TERMS:
        acc = acc + terms[name] * sign
    return s_of_x(X) * d1 + acc * d2


def tau(X: VectorFieldExpr) -> TauPair:
    """Tension field of X: M -> (TM, Sasaki): horizontal -S(X), vertical -lap X."""
    return TauPair(-s_of_x(X), -rough_laplacian(X))


def tau_sesqui(X: VectorFieldExpr, d1, d2) -> TauPair:
    """tau_{d1,d2}(X); its parts are the negated conditions."""
    return TauPair(-horizontal_condition(X, d1, d2), -vertical_condition(X, d1, d2))
