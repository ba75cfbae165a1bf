"""Left-invariant orthonormal frames: structure constants, Levi-Civita
connection, Riemann curvature and its covariant derivative.

Index conventions (all 0-based in the Python API):

* ``structure[i][j][k]`` is the e_k coefficient of [e_i, e_j];
* ``gamma[i][j][k]`` is the e_k coefficient of nabla_{e_i} e_j;
* ``r[i][j][k][l]`` is the e_l coefficient of R(e_i, e_j) e_k, with
  R(X,Y)Z = nabla_X nabla_Y Z - nabla_Y nabla_X Z - nabla_[X,Y] Z;
* ``nabla_r[a][i][j][k][l]`` is the e_l coefficient of (nabla_{e_a} R)(e_i, e_j) e_k.

Manifests and error messages use 1-based indices, matching e_1, e_2, ...
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from itertools import product
from typing import Iterable, Sequence

from .algebra import Derivation, PolyRing, parse_rational

__all__ = [
    "StructureError",
    "FrameAlgebra",
    "Connection",
    "CurvatureTensor",
    "connection_from_structure",
    "curvature_from_connection",
    "nabla_curvature_tensor",
    "second_bianchi_violations",
    "nil",
    "sol",
    "abelian",
    "milnor",
    "direct_sum_line",
    "PRESETS",
    "preset",
]


class StructureError(ValueError):
    """Structure data or derived tensors violate a required identity."""


def _zeros(*shape):
    if len(shape) == 1:
        return [Fraction(0)] * shape[0]
    return [_zeros(*shape[1:]) for _ in range(shape[0])]


def _freeze(nested):
    if isinstance(nested, list):
        return tuple(_freeze(x) for x in nested)
    return nested


def _ijk(*idx):
    return "(" + ",".join(str(i + 1) for i in idx) + ")"


class FrameAlgebra:
    """Lie algebra of an orthonormal left-invariant frame.

    ``derivations`` optionally gives, for every frame index, the action of
    e_i on coefficient symbols.  ``None`` means constant (left-invariant)
    coefficients.
    """

    def __init__(
        self,
        structure: Sequence[Sequence[Sequence[object]]],
        derivations: Sequence[Derivation] | None = None,
        name: str | None = None,
    ):
        m = len(structure)
        if m < 1:
            raise StructureError("dimension must be positive")
        c = _zeros(m, m, m)
        for i in range(m):
            if len(structure[i]) != m or any(len(row) != m for row in structure[i]):
                raise StructureError("structure constants must be an m x m x m array")
            for j in range(m):
                for k in range(m):
                    c[i][j][k] = Fraction(structure[i][j][k])
        self.dim = m
        self.structure = _freeze(c)
        self.name = name
        if derivations is not None:
            derivations = tuple(derivations)
            if len(derivations) != m:
                raise StructureError(f"need {m} frame derivations, got {len(derivations)}")
        self.derivations = derivations
        self._validate()

    @classmethod
    def from_brackets(
        cls,
        dim: int,
        entries: Iterable[Sequence[object]],
        derivations: Sequence[Derivation] | None = None,
        name: str | None = None,
    ) -> FrameAlgebra:
        """Build from 1-based entries ``(i, j, k, value)`` meaning
        <[e_i, e_j], e_k> = value.  Omitted entries are zero and the
        antisymmetric partner is filled in; contradicting entries raise.
        """
        if not isinstance(dim, int) or dim < 1:
            raise StructureError(f"invalid dimension {dim!r}")
        c: list = [[[None] * dim for _ in range(dim)] for _ in range(dim)]
        for entry in entries:
            if len(entry) != 4:
                raise StructureError(f"bracket entry must be [i, j, k, value], got {entry!r}")
            i, j, k, v = entry
            for idx in (i, j, k):
                if not isinstance(idx, int) or not 1 <= idx <= dim:
                    raise StructureError(f"bracket index {idx!r} out of range 1..{dim}")
            i, j, k = i - 1, j - 1, k - 1
            v = parse_rational(v)
            if i == j and v != 0:
                raise StructureError(f"antisymmetry violated at {_ijk(i, j, k)}: [e_i, e_i] != 0")
            for (a, b, val) in ((i, j, v), (j, i, -v)):
                prev = c[a][b][k]
                if prev is not None and prev != val:
                    raise StructureError(
                        f"conflicting bracket entries at {_ijk(a, b, k)}: {prev} vs {val}"
                    )
                c[a][b][k] = val
        full = [[[x if x is not None else Fraction(0) for x in row] for row in plane] for plane in c]
        return cls(full, derivations=derivations, name=name)

    def _validate(self):
        c, m = self.structure, self.dim
        for i, j, k in product(range(m), repeat=3):
            if c[i][j][k] != -c[j][i][k]:
                raise StructureError(f"antisymmetry violated at {_ijk(i, j, k)}")
        for i, j, l, k in product(range(m), repeat=4):
            s = sum(
                c[i][j][r] * c[r][l][k] + c[j][l][r] * c[r][i][k] + c[l][i][r] * c[r][j][k]
                for r in range(m)
            )
            if s:
                raise StructureError(f"Jacobi identity fails for {_ijk(i, j, l)} in component {k + 1}")

    def __repr__(self):
        label = f" {self.name!r}" if self.name else ""
        return f"<FrameAlgebra{label} dim={self.dim}>"

    def __eq__(self, other):
        return (
            isinstance(other, FrameAlgebra)
            and self.structure == other.structure
            and self.derivations is other.derivations
        )

    def __hash__(self):
        return hash((self.structure, id(self.derivations)))

    def bracket(self, i: int, j: int) -> tuple[Fraction, ...]:
        return self.structure[i][j]

    @property
    def is_left_invariant(self) -> bool:
        return self.derivations is None

    @property
    def is_unimodular(self) -> bool:
        """tr ad(e_i) = 0 for every i."""
        m = self.dim
        return all(sum(self.structure[i][j][j] for j in range(m)) == 0 for i in range(m))

    def derivation(self, i: int) -> Derivation:
        if not 0 <= i < self.dim:
            raise IndexError(f"frame index {i} out of range")
        if self.derivations is None:
            return _CONSTANT
        return self.derivations[i]

    def with_derivations(self, derivations: Sequence[Derivation] | None) -> FrameAlgebra:
        return FrameAlgebra(self.structure, derivations=derivations, name=self.name)

    def jet(self, ring: PolyRing, direction: int, prefix: str = "f", order: int = 4) -> FrameAlgebra:
        """Profile mode: e_direction shifts the jet symbols, other frame
        vectors annihilate them.  Non-jet symbols of ``ring`` are constants."""
        jet_syms = {f"{prefix}{k}" for k in range(order + 1)}
        constants = [s for s in ring.symbols if s not in jet_syms]
        ders = []
        for i in range(self.dim):
            if i == direction:
                ders.append(Derivation.jet_shift(ring, prefix, order, constants))
            else:
                ders.append(Derivation.zero())
        return self.with_derivations(ders)

    @cached_property
    def connection(self) -> Connection:
        return connection_from_structure(self)

    @cached_property
    def curvature(self) -> CurvatureTensor:
        return curvature_from_connection(self, self.connection)

    @cached_property
    def nabla_r(self):
        return nabla_curvature_tensor(self, self.connection, self.curvature)


_CONSTANT = Derivation.zero()


@dataclass(frozen=True)
class Connection:
    gamma: tuple

    @property
    def dim(self) -> int:
        return len(self.gamma)

    def metric_violations(self) -> list[tuple[int, int, int]]:
        g, m = self.gamma, self.dim
        return [
            (i, j, k)
            for i, j, k in product(range(m), repeat=3)
            if g[i][j][k] != -g[i][k][j]
        ]

    def torsion_violations(self, fa: FrameAlgebra) -> list[tuple[int, int, int]]:
        g, c, m = self.gamma, fa.structure, self.dim
        return [
            (i, j, k)
            for i, j, k in product(range(m), repeat=3)
            if g[i][j][k] - g[j][i][k] != c[i][j][k]
        ]


@dataclass(frozen=True)
class CurvatureTensor:
    r: tuple

    @property
    def dim(self) -> int:
        return len(self.r)

    def lowered(self, i: int, j: int, k: int, l: int) -> Fraction:
        """<R(e_i, e_j) e_k, e_l> in the orthonormal frame."""
        return self.r[i][j][k][l]

    def symmetry_violations(self) -> dict[str, list]:
        r, m = self.r, self.dim
        out: dict[str, list] = {"antisymmetry": [], "bianchi": [], "pair": []}
        for i, j, k, l in product(range(m), repeat=4):
            if r[i][j][k][l] != -r[j][i][k][l]:
                out["antisymmetry"].append((i, j, k, l))
            if r[i][j][k][l] + r[j][k][i][l] + r[k][i][j][l]:
                out["bianchi"].append((i, j, k, l))
            if r[i][j][k][l] != r[k][l][i][j]:
                out["pair"].append((i, j, k, l))
        return out


def connection_from_structure(fa: FrameAlgebra) -> Connection:
    """Koszul formula for a left-invariant metric in an orthonormal frame."""
    m, c = fa.dim, fa.structure
    half = Fraction(1, 2)
    g = _zeros(m, m, m)
    for i, j, k in product(range(m), repeat=3):
        g[i][j][k] = half * (c[i][j][k] - c[j][k][i] + c[k][i][j])
    conn = Connection(_freeze(g))
    bad = conn.metric_violations()
    if bad:
        raise StructureError(f"connection is not metric at {_ijk(*bad[0])}")
    bad = conn.torsion_violations(fa)
    if bad:
        raise StructureError(f"connection has torsion at {_ijk(*bad[0])}")
    return conn


def curvature_from_connection(fa: FrameAlgebra, conn: Connection) -> CurvatureTensor:
    m, c, g = fa.dim, fa.structure, conn.gamma
    if conn.dim != m:
        raise StructureError("connection and frame algebra differ in dimension")
    bad = conn.torsion_violations(fa)
    if bad:
        raise StructureError(f"connection inconsistent with brackets at {_ijk(*bad[0])}")
    r = _zeros(m, m, m, m)
    for i, j, k, l in product(range(m), repeat=4):
        r[i][j][k][l] = sum(
            g[j][k][p] * g[i][p][l] - g[i][k][p] * g[j][p][l] - c[i][j][p] * g[p][k][l]
            for p in range(m)
        )
    return CurvatureTensor(_freeze(r))


def nabla_curvature_tensor(fa: FrameAlgebra, conn: Connection, curv: CurvatureTensor):
    """Components of (nabla_{e_a} R)(e_i, e_j) e_k.

    Frame components of R are constant, so only the connection terms of
    nabla_W(R(U,V)Z) - R(nabla_W U,V)Z - R(U,nabla_W V)Z - R(U,V)nabla_W Z survive.
    """
    m, g, r = fa.dim, conn.gamma, curv.r
    out = _zeros(m, m, m, m, m)
    for a, i, j, k, l in product(range(m), repeat=5):
        out[a][i][j][k][l] = sum(
            r[i][j][k][p] * g[a][p][l]
            - g[a][i][p] * r[p][j][k][l]
            - g[a][j][p] * r[i][p][k][l]
            - g[a][k][p] * r[i][j][p][l]
            for p in range(m)
        )
    return _freeze(out)


def second_bianchi_violations(nabla_r) -> list[tuple[int, int, int, int, int]]:
    m = len(nabla_r)
    return [
        (a, b, c, d, l)
        for a, b, c, d, l in product(range(m), repeat=5)
        if nabla_r[a][b][c][d][l] + nabla_r[b][c][a][d][l] + nabla_r[c][a][b][d][l]
    ]


# -- presets ----------------------------------------------------------------

def nil() -> FrameAlgebra:
    """Heisenberg group with e_1 = d/dx, e_2 = d/dy, e_3 = d/dz + x d/dy: [e_1, e_3] = e_2."""
    return FrameAlgebra.from_brackets(3, [(1, 3, 2, 1)], name="nil")


def sol() -> FrameAlgebra:
    """Sol with e_1 = e^-z d/dx, e_2 = e^z d/dy, e_3 = d/dz: [e_1,e_3] = e_1, [e_2,e_3] = -e_2."""
    return FrameAlgebra.from_brackets(3, [(1, 3, 1, 1), (2, 3, 2, -1)], name="sol")


def abelian(dim: int = 3) -> FrameAlgebra:
    return FrameAlgebra.from_brackets(dim, [], name=f"abelian{dim}")


def milnor(l1, l2, l3) -> FrameAlgebra:
    """Unimodular 3-dimensional algebra [e_2,e_3] = l1 e_1, [e_3,e_1] = l2 e_2, [e_1,e_2] = l3 e_3."""
    return FrameAlgebra.from_brackets(3, [(2, 3, 1, l1), (3, 1, 2, l2), (1, 2, 3, l3)])


def direct_sum_line(fa: FrameAlgebra) -> FrameAlgebra:
    """fa + R with a central unit vector appended as the last frame element."""
    m = fa.dim
    entries = [
        (i + 1, j + 1, k + 1, fa.structure[i][j][k])
        for i, j, k in product(range(m), repeat=3)
        if i < j and fa.structure[i][j][k]
    ]
    name = f"{fa.name}+R" if fa.name else None
    return FrameAlgebra.from_brackets(m + 1, entries, name=name)


PRESETS = {"nil": nil, "sol": sol, "abelian": abelian}


def preset(name: str) -> FrameAlgebra:
    try:
        return PRESETS[name]()
    except KeyError:
        raise StructureError(f"unknown preset {name!r}; known: {sorted(PRESETS)}") from None
