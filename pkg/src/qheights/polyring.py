"""Sparse homogeneous polynomials over Q and points of projective space."""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import reduce
from itertools import product as _cartesian
from typing import Iterable, Mapping, Sequence

from .qarith import RatLike, format_rat, parse_rat, to_rat

Monomial = tuple[int, ...]


def monomials_of_degree(m: int, d: int) -> list[Monomial]:
    """All exponent vectors of total degree d in m+1 variables, lex-descending.

    ``monomials_of_degree(1, 2) == [(2, 0), (1, 1), (0, 2)]``.
    """
    if m < 0 or d < 0:
        raise ValueError("m and d must be nonnegative")
    if m == 0:
        return [(d,)]
    out = []
    for first in range(d, -1, -1):
        for rest in monomials_of_degree(m - 1, d - first):
            out.append((first, *rest))
    return out


def monomial_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def monomial_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def monomial_str(mon: Monomial, names: Sequence[str] | None = None) -> str:
    parts = []
    for i, e in enumerate(mon):
        if e == 0:
            continue
        name = names[i] if names else f"x{i}"
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts) if parts else "1"


class HomPoly:
    """Homogeneous polynomial in ``nvars`` variables with rational coefficients.

    ``terms`` maps exponent tuples to nonzero Fractions; all monomials share
    the declared ``degree``.  Instances are immutable and hashable.
    """

    __slots__ = ("nvars", "degree", "_terms", "_hash")

    def __init__(self, nvars: int, degree: int, terms: Mapping[Monomial, RatLike] = ()):
        clean: dict[Monomial, Fraction] = {}
        for mon, c in dict(terms).items():
            mon = tuple(int(e) for e in mon)
            if len(mon) != nvars:
                raise ValueError(f"monomial {mon} has wrong length for {nvars} variables")
            if sum(mon) != degree or min(mon, default=0) < 0:
                raise ValueError(f"monomial {mon} is not of degree {degree}")
            c = to_rat(c)
            if c:
                clean[mon] = clean.get(mon, Fraction(0)) + c
        self.nvars = nvars
        self.degree = degree
        self._terms = {k: clean[k] for k in sorted(clean, reverse=True) if clean[k]}
        self._hash = None

    # construction helpers
    @classmethod
    def zero(cls, nvars: int, degree: int = 0) -> "HomPoly":
        return cls(nvars, degree, {})

    @classmethod
    def constant(cls, nvars: int, c: RatLike) -> "HomPoly":
        return cls(nvars, 0, {(0,) * nvars: c})

    @classmethod
    def variable(cls, nvars: int, i: int) -> "HomPoly":
        mon = [0] * nvars
        mon[i] = 1
        return cls(nvars, 1, {tuple(mon): 1})

    @classmethod
    def linear(cls, coeffs: Sequence[RatLike]) -> "HomPoly":
        n = len(coeffs)
        return cls(n, 1, {tuple(int(i == j) for j in range(n)): c for i, c in enumerate(coeffs)})

    @property
    def terms(self) -> dict[Monomial, Fraction]:
        return dict(self._terms)

    def items(self):
        return self._terms.items()

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def coefficients(self) -> list[Fraction]:
        return list(self._terms.values())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, HomPoly):
            return NotImplemented
        if self.nvars != other.nvars:
            return False
        if not self._terms and not other._terms:
            return True
        return self.degree == other.degree and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.nvars, self.degree if self._terms else 0,
                               tuple(self._terms.items())))
        return self._hash

    def _check(self, other: "HomPoly") -> None:
        if self.nvars != other.nvars:
            raise ValueError("polynomials live in different rings")

    def __add__(self, other: "HomPoly") -> "HomPoly":
        self._check(other)
        if not other:
            return self
        if not self:
            return other
        if self.degree != other.degree:
            raise ValueError("sum of polynomials of different degrees is not homogeneous")
        t = dict(self._terms)
        for mon, c in other._terms.items():
            t[mon] = t.get(mon, 0) + c
        return HomPoly(self.nvars, self.degree, t)

    def __neg__(self) -> "HomPoly":
        return HomPoly(self.nvars, self.degree, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other: "HomPoly") -> "HomPoly":
        return self + (-other)

    def scale(self, c: RatLike) -> "HomPoly":
        c = to_rat(c)
        return HomPoly(self.nvars, self.degree, {k: c * v for k, v in self._terms.items()})

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        self._check(other)
        t: dict[Monomial, Fraction] = {}
        for a, ca in self._terms.items():
            for b, cb in other._terms.items():
                mon = monomial_mul(a, b)
                t[mon] = t.get(mon, 0) + ca * cb
        return HomPoly(self.nvars, self.degree + other.degree, t)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "HomPoly":
        return power(self, k)

    def __call__(self, x) -> Fraction:
        return evaluate(self, x)

    def to_str(self, names: Sequence[str] | None = None) -> str:
        if not self._terms:
            return "0"
        out = []
        for i, (mon, c) in enumerate(self._terms.items()):
            sign = "-" if c < 0 else "+"
            a = abs(c)
            body = monomial_str(mon, names)
            if sum(mon) == 0:
                body = format_rat(a)
            elif a != 1:
                body = f"{format_rat(a)}*{body}"
            if i == 0:
                out.append(body if sign == "+" else f"-{body}")
            else:
                out.append(f"{sign} {body}")
        return " ".join(out)

    def __str__(self) -> str:
        return self.to_str()

    def __repr__(self) -> str:
        return f"HomPoly({self.nvars}, {self.degree}, {self.to_str()!r})"


def power(Q: HomPoly, k: int) -> HomPoly:
    if k < 1:
        raise ValueError("exponent must be >= 1")
    result = Q
    base = Q
    k -= 1
    while k:
        if k & 1:
            result = result * base
        base = base * base
        k >>= 1
    return result


def normalize_degrees(Qs: Sequence[HomPoly]) -> tuple[list[HomPoly], int]:
    """Raise each Q_i to the power d/deg(Q_i), d the lcm of the degrees."""
    if any(Q.is_zero() for Q in Qs):
        raise ValueError("zero polynomial in input")
    if any(Q.degree < 1 for Q in Qs):
        raise ValueError("constant polynomial in input")
    d = reduce(math.lcm, (Q.degree for Q in Qs), 1)
    return [Q if Q.degree == d else power(Q, d // Q.degree) for Q in Qs], d


class ProjPoint:
    """Point of P^m(Q) stored as coprime integers, first nonzero positive."""

    __slots__ = ("coords",)

    def __init__(self, coords: Iterable[RatLike]):
        rs = [to_rat(c) for c in coords]
        if not rs:
            raise ValueError("empty coordinate vector")
        if all(r == 0 for r in rs):
            raise ValueError("all coordinates zero")
        den = reduce(math.lcm, (r.denominator for r in rs), 1)
        ints = [int(r * den) for r in rs]
        g = reduce(math.gcd, ints, 0)
        ints = [a // g for a in ints]
        first = next(a for a in ints if a)
        if first < 0:
            ints = [-a for a in ints]
        self.coords: tuple[int, ...] = tuple(ints)

    @classmethod
    def _from_canonical(cls, coords: tuple[int, ...]) -> "ProjPoint":
        obj = cls.__new__(cls)
        obj.coords = coords
        return obj

    @property
    def dim(self) -> int:
        return len(self.coords) - 1

    def __len__(self) -> int:
        return len(self.coords)

    def __iter__(self):
        return iter(self.coords)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, ProjPoint) and self.coords == other.coords

    def __lt__(self, other: "ProjPoint") -> bool:
        return self.coords < other.coords

    def __hash__(self) -> int:
        return hash(self.coords)

    def __str__(self) -> str:
        return "(" + " : ".join(str(c) for c in self.coords) + ")"

    def __repr__(self) -> str:
        return f"ProjPoint{self}"


def evaluate(Q: HomPoly, x) -> Fraction:
    """Q at the stored coordinates of x (canonical ones for a ProjPoint)."""
    coords = x.coords if isinstance(x, ProjPoint) else tuple(to_rat(c) for c in x)
    if len(coords) != Q.nvars:
        raise ValueError(f"dimension mismatch: {Q.nvars} variables, {len(coords)} coordinates")
    total = 0
    for mon, c in Q.items():
        t = c
        for xi, e in zip(coords, mon):
            if e:
                t = t * xi**e
        total += t
    return Fraction(total)


# --- text formats -----------------------------------------------------------

_TERM_SPLIT = re.compile(r"\s*([+-])\s*")
_VAR = re.compile(r"^x(\d+)(?:\^(\d+))?$")


def parse_poly(text: str, nvars: int | None = None) -> HomPoly:
    """Parse e.g. ``"x0*x2 - x1^2"`` or ``"3/2*x0^3"``.

    The number of variables defaults to one more than the largest index used.
    """
    s = text.strip()
    if not s:
        raise ValueError("empty polynomial")
    if s[0] not in "+-":
        s = "+" + s
    pieces = _TERM_SPLIT.split(s)[1:]
    raw: list[tuple[Fraction, dict[int, int]]] = []
    top = -1
    for sign, body in zip(pieces[0::2], pieces[1::2]):
        body = body.strip()
        if not body:
            raise ValueError(f"malformed polynomial: {text!r}")
        coef = Fraction(1)
        exps: dict[int, int] = {}
        for factor in body.split("*"):
            factor = factor.strip()
            match = _VAR.match(factor)
            if match:
                i = int(match.group(1))
                exps[i] = exps.get(i, 0) + int(match.group(2) or 1)
                top = max(top, i)
            else:
                coef *= parse_rat(factor)
        raw.append((-coef if sign == "-" else coef, exps))
    if nvars is None:
        nvars = top + 1 if top >= 0 else 1
    elif top >= nvars:
        raise ValueError(f"variable x{top} out of range for {nvars} variables")
    degs = {sum(e.values()) for c, e in raw if c}
    if len(degs) > 1:
        raise ValueError(f"polynomial is not homogeneous: {text!r}")
    degree = degs.pop() if degs else 0
    terms: dict[Monomial, Fraction] = {}
    for c, e in raw:
        mon = tuple(e.get(i, 0) for i in range(nvars))
        terms[mon] = terms.get(mon, 0) + c
    return HomPoly(nvars, degree, terms)


def parse_point(text: str) -> ProjPoint:
    """Parse ``"(a0 : a1 : ... : am)"``; commas are accepted as separators too."""
    s = text.strip()
    if s.startswith("(") and s.endswith(")"):
        s = s[1:-1]
    sep = ":" if ":" in s else ","
    return ProjPoint(parse_rat(t) for t in s.split(sep))


def all_points_box(nvars: int, bound: int) -> list[ProjPoint]:
    """Canonical integer points of P^{nvars-1} with max |coordinate| <= bound, lexicographic."""
    found = []
    for lead in range(nvars):
        tail_len = nvars - lead - 1
        for first in range(1, bound + 1):
            for tail in _cartesian(range(-bound, bound + 1), repeat=tail_len):
                if math.gcd(first, *tail) == 1:
                    found.append((0,) * lead + (first,) + tail)
    found.sort()
    return [ProjPoint._from_canonical(c) for c in found]
