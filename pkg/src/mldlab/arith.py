"""Exact residue arithmetic and the value types shared by every other module.

All fractional quantities are :class:`fractions.Fraction`; nothing in here
touches floating point.  Types render to (and parse from) the canonical text
forms used on the command line and in report files::

    1/13(3,4,5)        QuotientType
    1/13(3,4,7,0;0)    HyperquotientType
    (3,4,5)/13         Weighting
    xy+z^5+t^2         MonomialSupport (variables x, y, z, t)
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence

Rational = Fraction

VARIABLES = "xyzt"


class ParseError(ValueError):
    """Raised when a type, weighting, support or rational string is malformed."""


def residue(n: int, r: int) -> int:
    """Smallest non-negative residue of ``n`` modulo ``r``."""
    if r < 1:
        raise ValueError(f"modulus must be positive, got {r}")
    return n % r


def lift(x: int, r: int) -> int:
    # 0 lifts to r so that the lattice vector stays in the open orthant
    return r if x == 0 else x


def units_mod(r: int) -> list[int]:
    return [u for u in range(1, r + 1) if gcd(u, r) == 1] if r > 1 else [1]


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not re.fullmatch(r"[+-]?\d+(/\d+)?", text):
        raise ParseError(f"not an exact rational: {text!r}")
    try:
        return Fraction(text)
    except ZeroDivisionError as exc:
        raise ParseError(f"zero denominator: {text!r}") from exc


def render_rational(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


# ---------------------------------------------------------------- types


@dataclass(frozen=True)
class QuotientType:
    """Cyclic quotient type 1/r(a_0, ..., a_n); weights are reduced mod r."""

    r: int
    weights: tuple[int, ...]

    def __init__(self, r: int, weights: Iterable[int]):
        if r < 1:
            raise ValueError(f"index must be positive, got {r}")
        w = tuple(int(a) % r for a in weights)
        if len(w) < 2:
            raise ValueError("a quotient type needs at least two weights")
        object.__setattr__(self, "r", int(r))
        object.__setattr__(self, "weights", w)

    @property
    def dim(self) -> int:
        return len(self.weights)

    def __str__(self) -> str:
        return f"1/{self.r}({','.join(map(str, self.weights))})"

    @classmethod
    def parse(cls, text: str) -> "QuotientType":
        m = re.fullmatch(r"\s*1/(\d+)\(([^;()]*)\)\s*", text)
        if not m:
            raise ParseError(f"not a quotient type: {text!r}")
        r, weights = int(m.group(1)), _int_list(m.group(2), text)
        try:
            return cls(r, weights)
        except ValueError as exc:
            raise ParseError(str(exc)) from exc


@dataclass(frozen=True)
class HyperquotientType:
    """Hyperquotient type 1/r(a, b, c, d; e): weights of x, y, z, t and of f."""

    r: int
    a: tuple[int, int, int, int]
    e: int

    def __init__(self, r: int, a: Sequence[int], e: int):
        if r < 1:
            raise ValueError(f"index must be positive, got {r}")
        if len(a) != 4:
            raise ValueError(f"expected four ambient weights, got {len(a)}")
        object.__setattr__(self, "r", int(r))
        object.__setattr__(self, "a", tuple(int(x) % r for x in a))
        object.__setattr__(self, "e", int(e) % r)

    @property
    def q(self) -> int:
        return gcd(self.e, self.r)

    def ambient(self) -> QuotientType:
        return QuotientType(self.r, self.a)

    def __str__(self) -> str:
        return f"1/{self.r}({','.join(map(str, self.a))};{self.e})"

    @classmethod
    def parse(cls, text: str) -> "HyperquotientType":
        # also accepts the tuple shorthand (r; a,b,c,d; e)
        m = re.fullmatch(r"\s*1/(\d+)\(([^;()]*);([^;()]*)\)\s*", text) or re.fullmatch(
            r"\s*\(\s*(\d+)\s*;([^;()]*);([^;()]*)\)\s*", text)
        if not m:
            raise ParseError(f"not a hyperquotient type: {text!r}")
        r = int(m.group(1))
        a = _int_list(m.group(2), text)
        e = _int_list(m.group(3), text)
        if len(a) != 4 or len(e) != 1:
            raise ParseError(f"expected 1/r(a,b,c,d;e): {text!r}")
        try:
            return cls(r, a, e[0])
        except ValueError as exc:
            raise ParseError(str(exc)) from exc


def in_lattice(coords: Sequence[int], r: int, weights: Sequence[int]) -> int | None:
    """Return some j with coords == j*weights (mod r), or None when off the lattice."""
    for j in range(r):
        if all((b - j * a) % r == 0 for b, a in zip(coords, weights)):
            return j
    return None


@dataclass(frozen=True)
class Weighting:
    """The lattice vector (1/r)(b_0, ..., b_n), stored as integers over r."""

    r: int
    coords: tuple[int, ...]

    def __init__(self, r: int, coords: Iterable[int], ambient: Sequence[int] | None = None):
        c = tuple(int(b) for b in coords)
        if r < 1:
            raise ValueError(f"denominator must be positive, got {r}")
        if any(b < 0 for b in c):
            raise ValueError(f"weighting {c} leaves the positive orthant")
        if ambient is not None:
            if len(ambient) != len(c):
                raise ValueError("weighting and type have different dimensions")
            if in_lattice(c, r, ambient) is None:
                raise ValueError(f"({','.join(map(str, c))})/{r} is not in the lattice of {ambient}")
        object.__setattr__(self, "r", int(r))
        object.__setattr__(self, "coords", c)

    @classmethod
    def from_k(cls, q: QuotientType | HyperquotientType, k: int) -> "Weighting":
        """alpha_k = (1/r)(residue(a_i k)) for the given type."""
        weights = q.weights if isinstance(q, QuotientType) else q.a
        return cls(q.r, (a * k % q.r for a in weights))

    def value(self, i: int) -> Fraction:
        return Fraction(self.coords[i], self.r)

    def total(self) -> Fraction:
        """alpha(x_0 ... x_n)."""
        return Fraction(sum(self.coords), self.r)

    def mirror(self) -> "Weighting":
        return Weighting(self.r, (self.r - b for b in self.coords))

    def in_box(self) -> bool:
        return all(0 <= b <= self.r for b in self.coords) and not all(
            b in (0, self.r) for b in self.coords
        )

    def __str__(self) -> str:
        return f"({','.join(map(str, self.coords))})/{self.r}"

    @classmethod
    def parse(cls, text: str) -> "Weighting":
        m = re.fullmatch(r"\s*\(([^()]*)\)/(\d+)\s*", text)
        if not m:
            raise ParseError(f"not a weighting: {text!r}")
        try:
            return cls(int(m.group(2)), _int_list(m.group(1), text))
        except ValueError as exc:
            raise ParseError(str(exc)) from exc


@dataclass(frozen=True)
class MonomialSupport:
    """Set of exponent vectors of the monomials appearing in f."""

    nvars: int
    monomials: frozenset[tuple[int, ...]]

    def __init__(self, nvars: int, monomials: Iterable[Sequence[int]]):
        mons = frozenset(tuple(int(x) for x in m) for m in monomials)
        for m in mons:
            if len(m) != nvars or any(x < 0 for x in m):
                raise ValueError(f"bad exponent vector {m} for {nvars} variables")
        object.__setattr__(self, "nvars", int(nvars))
        object.__setattr__(self, "monomials", mons)

    def __iter__(self):
        return iter(sorted(self.monomials, key=lambda m: (sum(m), tuple(-x for x in m))))

    def __len__(self) -> int:
        return len(self.monomials)

    def __contains__(self, m) -> bool:
        return tuple(m) in self.monomials

    def union(self, other: "MonomialSupport") -> "MonomialSupport":
        return MonomialSupport(self.nvars, self.monomials | other.monomials)

    def __str__(self) -> str:
        if self.nvars > len(VARIABLES):
            return "+".join("*".join(f"x{i}^{p}" for i, p in enumerate(m) if p) or "1" for m in self)
        return "+".join(render_monomial(m) for m in self)

    @classmethod
    def parse(cls, text: str) -> "MonomialSupport":
        terms = [t for t in re.sub(r"\s+", "", text).split("+")]
        if not terms or any(t == "" for t in terms):
            raise ParseError(f"not a support string: {text!r}")
        return cls(4, (parse_monomial(t) for t in terms))


def render_monomial(m: Sequence[int]) -> str:
    out = []
    for v, p in zip(VARIABLES, m):
        if p == 1:
            out.append(v)
        elif p > 1:
            out.append(f"{v}^{p}")
    return "".join(out) or "1"


def parse_monomial(term: str) -> tuple[int, int, int, int]:
    if term == "1":
        return (0, 0, 0, 0)
    if not re.fullmatch(r"([xyzt](\^\d+)?)+", term):
        raise ParseError(f"bad monomial {term!r}")
    exps = [0, 0, 0, 0]
    for var, power in re.findall(r"([xyzt])(?:\^(\d+))?", term):
        exps[VARIABLES.index(var)] += int(power) if power else 1
    return tuple(exps)


def _int_list(body: str, text: str) -> list[int]:
    try:
        return [int(x) for x in body.split(",")]
    except ValueError as exc:
        raise ParseError(f"bad integer list in {text!r}") from exc


# ---------------------------------------------------------- operations


def weight_of_monomial(alpha: Weighting, m: Sequence[int]) -> Fraction:
    if len(m) != len(alpha.coords):
        raise ValueError(f"monomial has {len(m)} exponents, weighting has {len(alpha.coords)}")
    return Fraction(sum(p * b for p, b in zip(m, alpha.coords)), alpha.r)


def weight_of_support(alpha: Weighting, f: MonomialSupport) -> Fraction:
    """alpha(f): the least weight of a monomial of f."""
    if len(f) == 0:
        raise ValueError("empty support")
    if f.nvars != len(alpha.coords):
        raise ValueError(f"support has {f.nvars} variables, weighting has {len(alpha.coords)}")
    return Fraction(min(sum(p * b for p, b in zip(m, alpha.coords)) for m in f.monomials), alpha.r)


def is_isolated(q: QuotientType) -> bool:
    return all(gcd(a, q.r) == 1 for a in q.weights)


def is_small_action(q: QuotientType) -> bool:
    """True when no non-identity group element acts as a reflection."""
    for k in range(1, q.r):
        moved = sum(1 for a in q.weights if a * k % q.r)
        if moved == 1:
            return False
    return True
