"""JSON manifests describing a frame algebra, a field and the deltas.

Example::

    {
      "preset": "nil",
      "mode": "left_invariant",
      "field": ["a", "b", "g"],
      "delta1": "1",
      "delta2": "-1"
    }

An explicit algebra replaces ``preset`` with ``"dim"`` and ``"brackets"``, a
list of ``[i, j, k, "p/q"]`` entries (1-based) giving <[e_i, e_j], e_k>.
Rationals are strings; only ``step`` and ``tolerance`` may be floats.
"""
from __future__ import annotations

import json
import re
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Any

from .algebra import AlgebraError, PolyRing, format_rational, parse_rational
from .cases import JET_ORDER
from .engine import DeltaPair
from .fields import VectorFieldExpr
from .frame import FrameAlgebra, StructureError, preset

__all__ = ["ManifestError", "Manifest", "parse_manifest"]

MODES = ("left_invariant", "jet")
JET_SYMBOLS = tuple(f"f{k}" for k in range(JET_ORDER + 1))
_KNOWN_KEYS = {
    "preset", "dim", "brackets", "mode", "jet_direction", "symbols", "field",
    "delta1", "delta2", "step", "tolerance", "options",
}
_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*")


class ManifestError(ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(message + where)


@dataclass
class Manifest:
    preset: str | None = None
    dim: int | None = None
    brackets: tuple[tuple[int, int, int, Fraction], ...] | None = None
    mode: str = "left_invariant"
    jet_direction: int | None = None
    symbols: tuple[str, ...] | None = None
    field: tuple[str, ...] | None = None
    delta1: Fraction | None = None
    delta2: Fraction | None = None
    step: float | None = None
    tolerance: float | None = None
    options: dict[str, Any] = dc_field(default_factory=dict)

    # -- derived objects ---------------------------------------------------
    def frame(self) -> FrameAlgebra:
        if self.preset is not None:
            return preset(self.preset)
        return FrameAlgebra.from_brackets(self.dim, self.brackets or ())

    def ring(self) -> PolyRing:
        if self.mode == "jet":
            return PolyRing(JET_SYMBOLS)
        return PolyRing(self.symbols or ())

    def vector_field(self) -> VectorFieldExpr:
        if self.field is None:
            raise ManifestError("manifest has no 'field'")
        fa = self.frame()
        ring = self.ring()
        if self.mode == "jet":
            fa = fa.jet(ring, self.jet_direction - 1, order=JET_ORDER)
        return VectorFieldExpr(fa, [ring.parse(x) for x in self.field])

    def deltas(self) -> DeltaPair:
        if self.delta1 is None or self.delta2 is None:
            raise ManifestError("manifest needs 'delta1' and 'delta2'")
        return DeltaPair(self.delta1, self.delta2)

    # -- serialisation -----------------------------------------------------
    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {}
        if self.preset is not None:
            out["preset"] = self.preset
        if self.dim is not None:
            out["dim"] = self.dim
        if self.brackets is not None:
            out["brackets"] = [[i, j, k, format_rational(v)] for i, j, k, v in self.brackets]
        out["mode"] = self.mode
        if self.jet_direction is not None:
            out["jet_direction"] = self.jet_direction
        if self.symbols is not None:
            out["symbols"] = list(self.symbols)
        if self.field is not None:
            out["field"] = list(self.field)
        for key in ("delta1", "delta2"):
            v = getattr(self, key)
            if v is not None:
                out[key] = format_rational(v)
        for key in ("step", "tolerance"):
            v = getattr(self, key)
            if v is not None:
                out[key] = v
        if self.options:
            out["options"] = self.options
        return out

    def to_text(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n"


def _rational(value, key) -> Fraction:
    if isinstance(value, float):
        raise ManifestError(f"{key!r} must be a rational string like \"3/4\", not a float")
    try:
        return parse_rational(value)
    except AlgebraError as exc:
        raise ManifestError(f"{key!r}: {exc}") from None


def _float(value, key) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ManifestError(f"{key!r} must be a number")
    return float(value)


def _identifiers(literals) -> list[str]:
    seen: list[str] = []
    for lit in literals:
        for name in _IDENT.findall(lit):
            if name not in seen:
                seen.append(name)
    return seen


def parse_manifest(text: str | dict) -> Manifest:
    """Parse and validate; every frame-algebra identity is checked here."""
    if isinstance(text, dict):
        data = text
    else:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ManifestError(f"parse error: {exc.msg}", exc.lineno, exc.colno) from None
    if not isinstance(data, dict):
        raise ManifestError("manifest must be a JSON object")
    unknown = set(data) - _KNOWN_KEYS
    if unknown:
        raise ManifestError(f"unknown keys: {sorted(unknown)}")

    m = Manifest()
    has_preset = data.get("preset") is not None
    has_brackets = data.get("brackets") is not None
    if has_preset == has_brackets:
        raise ManifestError("give exactly one of 'preset' or 'brackets'")
    if has_preset:
        if "dim" in data:
            raise ManifestError("'dim' is implied by 'preset'")
        m.preset = data["preset"]
    else:
        dim = data.get("dim")
        if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
            raise ManifestError("'brackets' needs a positive integer 'dim'")
        entries = data["brackets"]
        if not isinstance(entries, list):
            raise ManifestError("'brackets' must be a list")
        norm = []
        for e in entries:
            if not isinstance(e, list) or len(e) != 4:
                raise ManifestError(f"bracket entry must be [i, j, k, \"p/q\"], got {e!r}")
            norm.append((e[0], e[1], e[2], _rational(e[3], "brackets")))
        m.dim = dim
        m.brackets = tuple(norm)
    try:
        fa = m.frame()
    except StructureError as exc:
        raise ManifestError(f"invalid algebra: {exc}") from None
    if fa.derivations is not None:
        raise ManifestError("frame derivations are set by 'mode', not by the algebra")

    m.mode = data.get("mode", "left_invariant")
    if m.mode not in MODES:
        raise ManifestError(f"'mode' must be one of {MODES}")

    if "field" in data:
        lits = data["field"]
        if not isinstance(lits, list) or not all(isinstance(x, str) for x in lits):
            raise ManifestError("'field' must be a list of polynomial literal strings")
        if len(lits) != fa.dim:
            raise ManifestError(f"field has {len(lits)} components but the algebra has dimension {fa.dim}")
        m.field = tuple(lits)

    if m.mode == "jet":
        jd = data.get("jet_direction")
        if not isinstance(jd, int) or isinstance(jd, bool) or not 1 <= jd <= fa.dim:
            raise ManifestError(f"jet mode needs 'jet_direction' in 1..{fa.dim}")
        m.jet_direction = jd
        if "symbols" in data:
            raise ManifestError("jet mode uses the fixed symbols f0..f4")
        stray = [s for s in _identifiers(m.field or ()) if s not in JET_SYMBOLS]
        if stray:
            raise ManifestError(f"jet mode cannot mix in constant symbols {stray}")
    else:
        if "jet_direction" in data:
            raise ManifestError("'jet_direction' only applies in jet mode")
        if "symbols" in data:
            syms = data["symbols"]
            if not isinstance(syms, list) or not all(isinstance(s, str) for s in syms):
                raise ManifestError("'symbols' must be a list of names")
            m.symbols = tuple(syms)
        else:
            m.symbols = tuple(_identifiers(m.field or ()))
        jets = [s for s in m.symbols if s in JET_SYMBOLS]
        if jets:
            raise ManifestError(f"jet symbols {jets} are not allowed in left_invariant mode")

    try:
        ring = m.ring()
        for lit in m.field or ():
            ring.parse(lit)
    except AlgebraError as exc:
        raise ManifestError(f"bad field literal: {exc}") from None

    for key in ("delta1", "delta2"):
        if key in data and data[key] is not None:
            setattr(m, key, _rational(data[key], key))
    if m.delta1 is not None and m.delta2 is not None and m.delta1 == 0 and m.delta2 == 0:
        raise ManifestError("delta1 = delta2 = 0 is a degenerate functional")
    for key in ("step", "tolerance"):
        if key in data and data[key] is not None:
            v = _float(data[key], key)
            if not v > 0:
                raise ManifestError(f"{key!r} must be positive")
            setattr(m, key, v)
    opts = data.get("options", {})
    if not isinstance(opts, dict):
        raise ManifestError("'options' must be an object")
    m.options = dict(opts)
    return m
