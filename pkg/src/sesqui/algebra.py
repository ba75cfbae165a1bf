"""Exact rational arithmetic and canonical multivariate polynomials.

Rationals are :class:`fractions.Fraction`.  Polynomials live in a
:class:`PolyRing` over a fixed, ordered list of symbol names; terms are kept
as a map from exponent tuples to nonzero Fractions, which makes structural
equality the same as mathematical equality.

Literal syntax (used by manifests and reports)::

    -1/4*b*g + a^2 - 3

Coefficients are integers or ``p/q``, ``^`` is a nonnegative integer power and
``*`` may be written or left implicit (``2a``, ``b(g + 1)``).
"""
from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational as _RationalABC
from typing import Iterable, Mapping, Sequence

__all__ = [
    "DEFAULT_MAX_EXPONENT",
    "AlgebraError",
    "SymbolMismatchError",
    "ExponentOverflowError",
    "DerivationDomainError",
    "PolyParseError",
    "parse_rational",
    "format_rational",
    "PolyRing",
    "Poly",
    "Derivation",
    "poly_add",
    "poly_mul",
    "derive",
    "poly_substitute",
]

DEFAULT_MAX_EXPONENT = 16


class AlgebraError(ValueError):
    pass


class SymbolMismatchError(AlgebraError):
    pass


class ExponentOverflowError(AlgebraError, OverflowError):
    pass


class DerivationDomainError(AlgebraError):
    pass


class PolyParseError(AlgebraError):
    def __init__(self, message: str, text: str = "", pos: int = 0):
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at position {pos}" + (f" in {text!r}" if text else ""))


_RATIONAL_RE = re.compile(r"\s*([+-]?\d+)\s*(?:/\s*(\d+)\s*)?$")


def parse_rational(text: str | int | Fraction) -> Fraction:
    """Parse ``"p"`` or ``"p/q"`` into a Fraction.  Floats are refused."""
    if isinstance(text, bool):
        raise AlgebraError(f"not a rational literal: {text!r}")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if not isinstance(text, str):
        raise AlgebraError(f"rational literals must be strings, got {type(text).__name__}")
    m = _RATIONAL_RE.match(text)
    if m is None:
        raise AlgebraError(f"not a rational literal: {text!r}")
    num = int(m.group(1))
    den = int(m.group(2)) if m.group(2) is not None else 1
    if den == 0:
        raise AlgebraError(f"zero denominator in {text!r}")
    return Fraction(num, den)


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _as_fraction(value) -> Fraction | None:
    if isinstance(value, bool):
        return None
    if isinstance(value, (int, Fraction)) or isinstance(value, _RationalABC):
        return Fraction(value)
    return None


class PolyRing:
    """Polynomial ring Q[x_1, ..., x_n] over an ordered list of symbol names."""

    def __init__(self, symbols: Sequence[str], max_exponent: int = DEFAULT_MAX_EXPONENT):
        symbols = tuple(symbols)
        if len(set(symbols)) != len(symbols):
            raise AlgebraError(f"duplicate symbols in {symbols}")
        for s in symbols:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", s):
                raise AlgebraError(f"invalid symbol name {s!r}")
        if max_exponent < 1:
            raise AlgebraError("max_exponent must be positive")
        self.symbols = symbols
        self.max_exponent = max_exponent
        self._index = {s: i for i, s in enumerate(symbols)}

    def __repr__(self):
        return f"PolyRing({list(self.symbols)!r})"

    def __eq__(self, other):
        return (
            isinstance(other, PolyRing)
            and self.symbols == other.symbols
            and self.max_exponent == other.max_exponent
        )

    def __hash__(self):
        return hash((self.symbols, self.max_exponent))

    @property
    def nvars(self) -> int:
        return len(self.symbols)

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise SymbolMismatchError(f"symbol {name!r} is not in {self.symbols}") from None

    def __call__(self, value) -> Poly:
        if isinstance(value, Poly):
            if value.ring != self:
                raise SymbolMismatchError(f"{value.ring} is not {self}")
            return value
        if isinstance(value, str):
            return self.parse(value)
        q = _as_fraction(value)
        if q is None:
            raise TypeError(f"cannot coerce {type(value).__name__} into {self}")
        if q == 0:
            return Poly(self, {})
        return Poly(self, {(0,) * self.nvars: q})

    @property
    def zero(self) -> Poly:
        return Poly(self, {})

    @property
    def one(self) -> Poly:
        return self(1)

    def symbol(self, name: str) -> Poly:
        exps = [0] * self.nvars
        exps[self.index(name)] = 1
        return Poly(self, {tuple(exps): Fraction(1)})

    @property
    def gens(self) -> tuple[Poly, ...]:
        return tuple(self.symbol(s) for s in self.symbols)

    def monomial(self, exps: Mapping[str, int], coeff=1) -> Poly:
        e = [0] * self.nvars
        for name, k in exps.items():
            e[self.index(name)] = int(k)
        return Poly(self, {tuple(e): Fraction(coeff)})

    def parse(self, text: str) -> Poly:
        return _Parser(self, text).parse()

    def extend(self, extra: Iterable[str]) -> PolyRing:
        """Ring with ``extra`` symbols appended (existing ones are skipped)."""
        syms = list(self.symbols) + [s for s in extra if s not in self._index]
        return PolyRing(syms, self.max_exponent)


def _grlex_key(exps: tuple[int, ...]):
    return (sum(exps), exps)


class Poly:
    """Immutable polynomial with Fraction coefficients in a :class:`PolyRing`."""

    __slots__ = ("ring", "_terms")

    def __init__(self, ring: PolyRing, terms: Mapping[tuple[int, ...], Fraction]):
        n = ring.nvars
        clean = {}
        for exps, c in terms.items():
            if len(exps) != n:
                raise SymbolMismatchError(
                    f"exponent vector {exps} does not match {n} symbols of {ring}"
                )
            for e in exps:
                if e < 0:
                    raise AlgebraError(f"negative exponent in {exps}")
                if e > ring.max_exponent:
                    raise ExponentOverflowError(
                        f"exponent {e} exceeds cap {ring.max_exponent}"
                    )
            c = Fraction(c)
            if c:
                clean[tuple(exps)] = c
        object.__setattr__(self, "ring", ring)
        object.__setattr__(self, "_terms", clean)

    def __setattr__(self, name, value):
        raise AttributeError("Poly is immutable")

    # -- inspection ------------------------------------------------------
    @property
    def terms(self) -> dict[tuple[int, ...], Fraction]:
        """Copy of the term map, in descending graded-lex order."""
        return {e: self._terms[e] for e in sorted(self._terms, key=_grlex_key, reverse=True)}

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self):
        return bool(self._terms)

    def is_constant(self) -> bool:
        return all(not any(e) for e in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.ring.nvars, Fraction(0))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self._terms), default=-1)

    def free_symbols(self) -> set[str]:
        out = set()
        for exps in self._terms:
            out.update(s for s, e in zip(self.ring.symbols, exps) if e)
        return out

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.ring == other.ring and self._terms == other._terms
        q = _as_fraction(other)
        if q is None:
            return NotImplemented
        if q == 0:
            return not self._terms
        return self._terms == {(0,) * self.ring.nvars: q}

    def __hash__(self):
        return hash((self.ring, frozenset(self._terms.items())))

    # -- arithmetic ------------------------------------------------------
    def _coerce(self, other) -> Poly | None:
        if isinstance(other, Poly):
            if other.ring != self.ring:
                raise SymbolMismatchError(f"{self.ring} vs {other.ring}")
            return other
        q = _as_fraction(other)
        if q is None:
            return None
        return self.ring(q)

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        out = dict(self._terms)
        for e, c in other._terms.items():
            out[e] = out.get(e, 0) + c
        return Poly(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.ring, {e: -c for e, c in self._terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        cap = self.ring.max_exponent
        out: dict[tuple[int, ...], Fraction] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                if any(x > cap for x in e):
                    raise ExponentOverflowError(f"product exponent {e} exceeds cap {cap}")
                out[e] = out.get(e, 0) + c1 * c2
        return Poly(self.ring, out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        q = _as_fraction(other)
        if q is None:
            return NotImplemented
        if q == 0:
            raise ZeroDivisionError("polynomial divided by zero")
        return Poly(self.ring, {e: c / q for e, c in self._terms.items()})

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise AlgebraError("only nonnegative integer powers are supported")
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- evaluation ------------------------------------------------------
    def _values(self, assignment: Mapping[str, object], exact: bool):
        vals = []
        for s, used in zip(self.ring.symbols, self._used_mask()):
            if s in assignment:
                v = assignment[s]
                if exact:
                    q = _as_fraction(v)
                    if q is None:
                        q = parse_rational(v)
                    v = q
                vals.append(v)
            elif used:
                raise AlgebraError(f"no value given for symbol {s!r}")
            else:
                vals.append(0)
        return vals

    def _used_mask(self):
        mask = [False] * self.ring.nvars
        for exps in self._terms:
            for i, e in enumerate(exps):
                if e:
                    mask[i] = True
        return mask

    def substitute(self, assignment: Mapping[str, object]) -> Fraction:
        """Exact evaluation; every symbol present in the polynomial must be assigned."""
        vals = self._values(assignment, exact=True)
        total = Fraction(0)
        for exps, c in self._terms.items():
            t = c
            for v, e in zip(vals, exps):
                if e:
                    t *= v**e
            total += t
        return total

    def evaluate(self, assignment: Mapping[str, float]) -> float:
        """Floating-point evaluation (used only by numeric checks)."""
        vals = self._values(assignment, exact=False)
        total = 0.0
        for exps, c in self._terms.items():
            t = float(c)
            for v, e in zip(vals, exps):
                if e:
                    t *= v**e
            total += t
        return total

    def subs(self, assignment: Mapping[str, object]) -> Poly:
        """Partial substitution of rationals or same-ring polynomials."""
        images = []
        for i, s in enumerate(self.ring.symbols):
            if s in assignment:
                v = assignment[s]
                images.append(self._coerce(v) if not isinstance(v, str) else self.ring.parse(v))
            else:
                images.append(None)
        out = self.ring.zero
        for exps, c in self._terms.items():
            keep = [0] * self.ring.nvars
            term = self.ring(c)
            for i, e in enumerate(exps):
                if not e:
                    continue
                if images[i] is None:
                    keep[i] = e
                else:
                    term = term * images[i] ** e
            out = out + term * Poly(self.ring, {tuple(keep): Fraction(1)})
        return out

    # -- restructuring ---------------------------------------------------
    def split(self, names: Sequence[str], rest: PolyRing | None = None) -> dict[tuple[int, ...], Poly]:
        """Collect by monomials in ``names``.

        Returns a map from exponent tuples over ``names`` to coefficient
        polynomials in the remaining symbols (ring ``rest``, built if omitted).
        """
        idx = [self.ring.index(n) for n in names]
        if rest is None:
            others = [s for s in self.ring.symbols if s not in names]
            rest = PolyRing(others, self.ring.max_exponent)
        out: dict[tuple[int, ...], dict] = {}
        for exps, c in self._terms.items():
            key = tuple(exps[i] for i in idx)
            sub = [0] * rest.nvars
            for i, e in enumerate(exps):
                if e and i not in idx:
                    sub[rest.index(self.ring.symbols[i])] = e
            bucket = out.setdefault(key, {})
            bucket[tuple(sub)] = bucket.get(tuple(sub), 0) + c
        return {k: Poly(rest, v) for k, v in out.items()}

    def into(self, ring: PolyRing) -> Poly:
        """Re-express in ``ring``; every used symbol must exist there."""
        out = {}
        for exps, c in self._terms.items():
            e = [0] * ring.nvars
            for s, k in zip(self.ring.symbols, exps):
                if k:
                    e[ring.index(s)] = k
            out[tuple(e)] = c
        return Poly(ring, out)

    def divide_by_symbol(self, name: str) -> Poly:
        """Exact division by a single symbol; raises if some term lacks it."""
        i = self.ring.index(name)
        out = {}
        for exps, c in self._terms.items():
            if exps[i] == 0:
                raise AlgebraError(f"{self} is not divisible by {name}")
            e = list(exps)
            e[i] -= 1
            out[tuple(e)] = c
        return Poly(self.ring, out)

    # -- printing --------------------------------------------------------
    def __str__(self):
        if not self._terms:
            return "0"
        parts = []
        for exps, c in self.terms.items():
            mono = "*".join(
                s if e == 1 else f"{s}^{e}" for s, e in zip(self.ring.symbols, exps) if e
            )
            mag = abs(c)
            if not mono:
                body = format_rational(mag)
            elif mag == 1:
                body = mono
            else:
                body = f"{format_rational(mag)}*{mono}"
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        return "".join(parts)

    def __repr__(self):
        return f"Poly({str(self)!r}, {list(self.ring.symbols)!r})"


def poly_add(p: Poly, q: Poly) -> Poly:
    return p + q


def poly_mul(p: Poly, q: Poly) -> Poly:
    return p * q


def poly_substitute(p: Poly, assignment: Mapping[str, object]) -> Fraction:
    return p.substitute(assignment)


class Derivation:
    """A derivation of Q[x_1..x_n], given by its values on symbols.

    Symbols missing from ``action`` are outside the domain unless ``default``
    is set, in which case they map to that constant (``default=0`` models
    constant coefficients).
    """

    def __init__(self, action: Mapping[str, object] | None = None, default=None):
        self.action = dict(action or {})
        self.default = None if default is None else Fraction(default)

    def __repr__(self):
        return f"Derivation({self.action!r}, default={self.default!r})"

    @classmethod
    def zero(cls) -> Derivation:
        return cls({}, default=0)

    @classmethod
    def jet_shift(
        cls, ring: PolyRing, prefix: str = "f", order: int = 4, constants: Iterable[str] = ()
    ) -> Derivation:
        """``f_k -> f_{k+1}`` for ``k < order``; ``f_order`` has no image."""
        action: dict[str, object] = {}
        for k in range(order):
            action[f"{prefix}{k}"] = ring.symbol(f"{prefix}{k + 1}")
        for c in constants:
            action[c] = 0
        return cls(action)

    def image(self, name: str, ring: PolyRing) -> Poly:
        if name in self.action:
            v = self.action[name]
        elif self.default is not None:
            v = self.default
        else:
            raise DerivationDomainError(f"derivation is not defined on symbol {name!r}")
        if isinstance(v, Poly):
            if v.ring != ring:
                raise SymbolMismatchError(f"derivation image of {name!r} lives in {v.ring}")
            return v
        return ring(v)

    def __call__(self, p: Poly) -> Poly:
        ring = p.ring
        out = ring.zero
        images: dict[int, Poly] = {}
        for exps, c in p._terms.items():
            for i, e in enumerate(exps):
                if not e:
                    continue
                if i not in images:
                    images[i] = self.image(ring.symbols[i], ring)
                img = images[i]
                if img.is_zero():
                    continue
                lowered = list(exps)
                lowered[i] -= 1
                out = out + Poly(ring, {tuple(lowered): c * e}) * img
        return out


def derive(D: Derivation, p: Poly) -> Poly:
    return D(p)


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


class _Parser:
    def __init__(self, ring: PolyRing, text: str):
        self.ring = ring
        self.text = text
        self.tokens = []
        pos = 0
        while pos < len(text):
            m = _TOKEN_RE.match(text, pos)
            if m is None:  # only trailing whitespace left
                break
            if m.group(1) is not None:
                self.tokens.append(("num", int(m.group(1)), m.start(1)))
            elif m.group(2) is not None:
                self.tokens.append(("id", m.group(2), m.start(2)))
            elif m.group(3) is not None:
                if m.group(3) not in "+-*/^()":
                    raise PolyParseError(f"unexpected character {m.group(3)!r}", text, m.start(3))
                self.tokens.append(("op", m.group(3), m.start(3)))
            pos = m.end()
        self.i = 0

    def error(self, msg):
        pos = self.tokens[self.i][2] if self.i < len(self.tokens) else len(self.text)
        raise PolyParseError(msg, self.text, pos)

    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def is_op(self, ch):
        tok = self.peek()
        return tok is not None and tok[0] == "op" and tok[1] == ch

    def parse(self) -> Poly:
        if not self.tokens:
            self.error("empty polynomial literal")
        p = self.expr()
        if self.peek() is not None:
            self.error("unexpected token")
        return p

    def expr(self):
        p = self.term()
        while self.is_op("+") or self.is_op("-"):
            op = self.take()[1]
            q = self.term()
            p = p + q if op == "+" else p - q
        return p

    def term(self):
        p = self.unary()
        while True:
            tok = self.peek()
            if tok is None:
                return p
            if tok[0] == "op" and tok[1] == "*":
                self.take()
                p = p * self.unary()
            elif tok[0] == "op" and tok[1] == "/":
                self.take()
                d = self.take()
                if d is None or d[0] != "num":
                    self.i -= 1
                    self.error("only integer literals may follow '/'")
                if d[1] == 0:
                    self.i -= 1
                    self.error("division by zero")
                p = p / d[1]
            elif tok[0] in ("num", "id") or (tok[0] == "op" and tok[1] == "("):
                p = p * self.power()
            else:
                return p

    def unary(self):
        if self.is_op("-"):
            self.take()
            return -self.unary()
        if self.is_op("+"):
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.is_op("^"):
            self.take()
            tok = self.take()
            if tok is None or tok[0] != "num":
                self.i -= 1
                self.error("expected integer exponent after '^'")
            if tok[1] > self.ring.max_exponent:
                self.i -= 1
                self.error(f"exponent exceeds cap {self.ring.max_exponent}")
            return base**tok[1]
        return base

    def atom(self):
        tok = self.take()
        if tok is None:
            self.error("unexpected end of input")
        kind, val, pos = tok
        if kind == "num":
            return self.ring(val)
        if kind == "id":
            if val not in self.ring._index:
                self.i -= 1
                self.error(f"unknown symbol {val!r}")
            return self.ring.symbol(val)
        if val == "(":
            p = self.expr()
            if not self.is_op(")"):
                self.error("expected ')'")
            self.take()
            return p
        self.i -= 1
        self.error(f"unexpected {val!r}")
