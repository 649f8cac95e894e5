"""Groebner bases over Q for homogeneous ideals and what they compute.

Polynomials inside the engine are plain ``dict[Monomial, Fraction]`` so that
the elimination step can work with graph ideals, which are only weighted
homogeneous.  The public functions take and return ``HomPoly``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Sequence

from .polyring import HomPoly, Monomial, monomial_divides, monomials_of_degree, parse_poly

Terms = dict  # Monomial -> Fraction

MAX_ELIMINATION_VARS = 12


class DimensionError(ValueError):
    """The projective zero set is empty, so there is no dimension."""


class EmptinessUndecided(RuntimeError):
    """Hilbert function stayed positive up to the supplied bound without a plateau."""

    def __init__(self, bound: int):
        super().__init__(f"emptiness undecided at bound {bound}")
        self.bound = bound


class InstanceTooLarge(ValueError):
    pass


# --- monomial orders ---------------------------------------------------------

def _grevlex_key(a: Sequence[int]) -> tuple:
    return (sum(a), *(-e for e in reversed(a)))


@dataclass(frozen=True)
class MonomialOrder:
    """grevlex, lex, a rational weight order with grevlex tie-break, or a block order.

    ``eliminate`` lists variable indices that form the first (larger) block of
    an elimination order; each block is compared by grevlex.
    """

    name: str = "grevlex"
    weights: tuple[Fraction, ...] | None = None
    eliminate: tuple[int, ...] | None = None

    def key(self) -> Callable[[Monomial], tuple]:
        if self.name == "grevlex":
            return _grevlex_key
        if self.name == "lex":
            return tuple
        if self.name == "weight":
            w = self.weights

            def wkey(a):
                return (sum(wi * e for wi, e in zip(w, a)), *_grevlex_key(a))

            return wkey
        if self.name == "block":
            first = self.eliminate

            def bkey(a):
                rest = [e for i, e in enumerate(a) if i not in first]
                return (*_grevlex_key([a[i] for i in first]), *_grevlex_key(rest))

            return bkey
        raise ValueError(f"unknown monomial order {self.name!r}")

    def __str__(self) -> str:
        if self.name == "weight":
            return "weight(" + ",".join(str(w) for w in self.weights) + ")"
        if self.name == "block":
            return f"block{self.eliminate}"
        return self.name


GREVLEX = MonomialOrder("grevlex")
LEX = MonomialOrder("lex")


def weight_order(weights: Iterable) -> MonomialOrder:
    return MonomialOrder("weight", weights=tuple(Fraction(w) for w in weights))


def elimination_order(eliminate: Iterable[int]) -> MonomialOrder:
    return MonomialOrder("block", eliminate=tuple(sorted(eliminate)))


# --- the engine ----------------------------------------------------------------

def _lead(f: Terms, key) -> Monomial:
    return max(f, key=key)


def _monic(f: Terms, lm: Monomial) -> Terms:
    c = f[lm]
    if c == 1:
        return f
    return {m: a / c for m, a in f.items()}


def _sub_multiple(f: Terms, c: Fraction, shift: Monomial, g: Terms) -> None:
    """f -= c * x^shift * g, in place."""
    for m, a in g.items():
        mon = tuple(x + y for x, y in zip(m, shift))
        v = f.get(mon, 0) - c * a
        if v:
            f[mon] = v
        else:
            f.pop(mon, None)


def _reduce(f: Terms, basis: Sequence[tuple[Monomial, Terms]], key) -> Terms:
    """Full normal form of f by a list of (leading monomial, monic poly)."""
    f = dict(f)
    rem: Terms = {}
    while f:
        lm = _lead(f, key)
        c = f[lm]
        for glm, g in basis:
            if monomial_divides(glm, lm):
                _sub_multiple(f, c, tuple(x - y for x, y in zip(lm, glm)), g)
                break
        else:
            rem[lm] = c
            del f[lm]
    return rem


def _lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(max(x, y) for x, y in zip(a, b))


def _spoly(f: Terms, flm: Monomial, g: Terms, glm: Monomial) -> Terms:
    l = _lcm(flm, glm)
    out: Terms = {}
    _sub_multiple(out, Fraction(-1), tuple(x - y for x, y in zip(l, flm)), f)
    _sub_multiple(out, Fraction(1), tuple(x - y for x, y in zip(l, glm)), g)
    return out


def buchberger(polys: Iterable[Terms], order: MonomialOrder = GREVLEX) -> list[Terms]:
    """Reduced Groebner basis (monic, sorted by decreasing leading monomial).

    Pairs are selected by lowest sugar, then smallest lcm; the product and
    chain criteria discard useless pairs.
    """
    key = order.key()
    G: list[tuple[Monomial, Terms]] = []
    sugar: list[int] = []
    pending: set[tuple[int, int]] = set()

    def add(f: Terms, s: int) -> None:
        lm = _lead(f, key)
        G.append((lm, _monic(f, lm)))
        sugar.append(s)
        k = len(G) - 1
        pending.update((i, k) for i in range(k))

    for f in polys:
        f = {m: Fraction(c) for m, c in f.items() if c}
        if f:
            add(f, max(sum(m) for m in f))

    while pending:
        def pair_key(p):
            i, j = p
            l = _lcm(G[i][0], G[j][0])
            s = max(sugar[i] + sum(l) - sum(G[i][0]), sugar[j] + sum(l) - sum(G[j][0]))
            return (s, key(l), i, j)

        i, j = min(pending, key=pair_key)
        pending.discard((i, j))
        li, lj = G[i][0], G[j][0]
        l = _lcm(li, lj)
        if all(x == 0 or y == 0 for x, y in zip(li, lj)):
            continue  # product criterion
        chain = False
        for k in range(len(G)):
            if k in (i, j) or not monomial_divides(G[k][0], l):
                continue
            if (min(i, k), max(i, k)) not in pending and (min(j, k), max(j, k)) not in pending:
                chain = True
                break
        if chain:
            continue
        s = max(sugar[i] + sum(l) - sum(li), sugar[j] + sum(l) - sum(lj))
        h = _reduce(_spoly(G[i][1], li, G[j][1], lj), G, key)
        if h:
            add(h, s)

    # minimalize, then interreduce
    minimal: list[tuple[Monomial, Terms]] = []
    for idx, (lm, g) in enumerate(G):
        dominated = False
        for jdx, (lm2, _) in enumerate(G):
            if jdx == idx or not monomial_divides(lm2, lm):
                continue
            if lm2 != lm or jdx < idx:
                dominated = True
                break
        if not dominated:
            minimal.append((lm, g))
    reduced = []
    for idx, (lm, g) in enumerate(minimal):
        others = [b for jdx, b in enumerate(minimal) if jdx != idx]
        tail = _reduce({m: c for m, c in g.items() if m != lm}, others, key)
        tail[lm] = Fraction(1)
        reduced.append((lm, tail))
    reduced.sort(key=lambda t: key(t[0]), reverse=True)
    return [g for _, g in reduced]


# --- public types -----------------------------------------------------------------

@dataclass(frozen=True)
class PolyIdeal:
    nvars: int
    generators: tuple[HomPoly, ...] = ()

    def __post_init__(self) -> None:
        gens = tuple(self.generators)
        for g in gens:
            if g.nvars != self.nvars:
                raise ValueError("generator lives in a different ring")
        object.__setattr__(self, "generators", gens)

    @property
    def m(self) -> int:
        return self.nvars - 1

    def nonzero_generators(self) -> tuple[HomPoly, ...]:
        return tuple(g for g in self.generators if g)

    def extend(self, polys: Iterable[HomPoly]) -> "PolyIdeal":
        return PolyIdeal(self.nvars, self.generators + tuple(polys))

    def to_json(self) -> dict:
        return {"vars": self.nvars, "gens": [str(g) for g in self.generators]}

    def dumps(self) -> str:
        return json.dumps(self.to_json())

    @classmethod
    def from_json(cls, data: dict) -> "PolyIdeal":
        n = int(data["vars"])
        return cls(n, tuple(parse_poly(s, n) for s in data.get("gens", [])))

    @classmethod
    def loads(cls, text: str) -> "PolyIdeal":
        return cls.from_json(json.loads(text))

    def __str__(self) -> str:
        inner = ", ".join(str(g) for g in self.generators)
        return f"<{inner}> in P^{self.m}"


@dataclass(frozen=True)
class GroebnerBasis:
    nvars: int
    order: MonomialOrder
    basis: tuple[HomPoly, ...]
    leading: tuple[Monomial, ...] = field(compare=False)

    def normal_form(self, f: HomPoly) -> HomPoly:
        key = self.order.key()
        pairs = [(lm, dict(g.items())) for lm, g in zip(self.leading, self.basis)]
        rem = _reduce(dict(f.items()), pairs, key)
        return HomPoly(self.nvars, f.degree, rem)

    def contains(self, f: HomPoly) -> bool:
        return self.normal_form(f).is_zero()

    def is_standard(self, mon: Monomial) -> bool:
        return not any(monomial_divides(lm, mon) for lm in self.leading)

    @property
    def is_unit(self) -> bool:
        return any(sum(lm) == 0 for lm in self.leading)


@lru_cache(maxsize=256)
def groebner(I: PolyIdeal, order: MonomialOrder = GREVLEX) -> GroebnerBasis:
    gens = [dict(g.items()) for g in I.nonzero_generators()]
    G = buchberger(gens, order)
    key = order.key()
    basis, leading = [], []
    for g in G:
        lm = _lead(g, key)
        basis.append(HomPoly(I.nvars, sum(lm), g))
        leading.append(lm)
    return GroebnerBasis(I.nvars, order, tuple(basis), tuple(leading))


def normal_form(f: HomPoly, I: PolyIdeal, order: MonomialOrder = GREVLEX) -> HomPoly:
    return groebner(I, order).normal_form(f)


def quotient_basis(I: PolyIdeal, u: int, order: MonomialOrder = GREVLEX) -> list[Monomial]:
    """Degree-u standard monomials, lex-descending."""
    if u < 0:
        raise ValueError("u must be nonnegative")
    gb = groebner(I, order)
    return [a for a in monomials_of_degree(I.m, u) if gb.is_standard(a)]


def hilbert_function(I: PolyIdeal, u: int) -> int:
    return len(quotient_basis(I, u))


def _hilbert_stable_from(gb: GroebnerBasis) -> int:
    """A degree from which H agrees with the Hilbert polynomial.

    By inclusion-exclusion over the leading monomials, H(u) is a signed sum of
    binomials C(u - deg lcm(S) + m, m), each polynomial in u once
    u >= deg lcm(S) - m; deg lcm(S) is at most the degree of the lcm of all.
    """
    if not gb.leading:
        return 0
    m = gb.nvars - 1
    top = sum(max(lm[i] for lm in gb.leading) for i in range(gb.nvars))
    return max(0, top - m)


def variety_dim_deg(I: PolyIdeal) -> tuple[int, int]:
    """Dimension n and degree of the projective zero set, from the Hilbert polynomial."""
    gb = groebner(I)
    m = I.m
    start = _hilbert_stable_from(gb)
    values = [hilbert_function(I, u) for u in range(start, start + 2 * m + 4)]
    if values[-1] == 0:
        raise DimensionError("dimension -1: the projective zero set is empty")
    diffs = [values]
    while len(diffs[-1]) > 1:
        prev = diffs[-1]
        diffs.append([b - a for a, b in zip(prev, prev[1:])])
    for n in range(m + 1):
        nxt = diffs[n + 1]
        if len(nxt) >= n + 2 and all(v == 0 for v in nxt[-(n + 2):]):
            delta = diffs[n][-1]
            return n, delta
    raise RuntimeError("Hilbert polynomial did not stabilize")  # unreachable for proper ideals


def emptiness_bound(I: PolyIdeal) -> int:
    """Lazard's bound: 1 + sum(deg - 1) over the m+1 largest generator degrees."""
    degs = sorted((g.degree for g in I.nonzero_generators()), reverse=True)[: I.nvars]
    return 1 + sum(d - 1 for d in degs)


def is_projectively_empty(I: PolyIdeal, bound: int | None = None) -> bool:
    """Whether the zero set of I in P^m over the algebraic closure is empty.

    Decided by H_I(u) = 0 for some u up to ``bound`` (default: Lazard's
    regularity bound, which makes the test conclusive).  With a smaller
    explicit bound, a positive plateau of H also proves nonemptiness; anything
    else raises EmptinessUndecided.
    """
    gens = I.nonzero_generators()
    if any(g.degree == 0 for g in gens):
        return True
    if len(gens) < I.nvars:
        return False  # fewer than m+1 hypersurfaces always meet in P^m
    lazard = emptiness_bound(I)
    u_max = lazard if bound is None else bound
    values = [hilbert_function(I, u) for u in range(u_max + 1)]
    if values[-1] == 0:
        return True
    if u_max >= lazard:
        return False
    if len(values) >= 3 and values[-1] == values[-2] == values[-3] > 0:
        return False
    raise EmptinessUndecided(u_max)


def has_pure_powers(I: PolyIdeal) -> bool:
    """Independent emptiness criterion: every variable has a pure power in LT(I)."""
    gb = groebner(I)
    if gb.is_unit:
        return True
    for i in range(I.nvars):
        if not any(lm[i] == sum(lm) and lm[i] > 0 for lm in gb.leading):
            return False
    return True


# --- elimination -------------------------------------------------------------

def eliminate(polys: Sequence[Terms], nvars: int, keep: Sequence[int]) -> list[Terms]:
    """Generators of the elimination ideal onto the variables in ``keep``.

    Returned polynomials are written in the kept variables only, in the order
    given by ``keep``.
    """
    if nvars > MAX_ELIMINATION_VARS:
        raise InstanceTooLarge("instance too large for elimination")
    keep = list(keep)
    drop = [i for i in range(nvars) if i not in keep]
    G = buchberger(polys, elimination_order(drop))
    out = []
    for g in G:
        if all(all(m[i] == 0 for i in drop) for m in g):
            out.append({tuple(m[i] for i in keep): c for m, c in g.items()})
    return out


def image_ideal(V: PolyIdeal, maps: Sequence[HomPoly]) -> PolyIdeal:
    """Ideal of the closure of the image of V under x -> (P_0(x) : ... : P_k(x)).

    Builds the graph ideal I_V + <y_j - P_j(x)> and eliminates the x's.
    All P_j must share one degree.
    """
    if not maps:
        raise ValueError("empty map")
    e = maps[0].degree
    if any(P.degree != e or P.nvars != V.nvars for P in maps):
        raise ValueError("map components must share ring and degree")
    nx, ny = V.nvars, len(maps)
    total = nx + ny
    if total > MAX_ELIMINATION_VARS:
        raise InstanceTooLarge("instance too large for elimination")
    pad = (0,) * ny
    gens: list[Terms] = [{m + pad: c for m, c in g.items()} for g in V.nonzero_generators()]
    for j, P in enumerate(maps):
        yj = tuple(int(i == j) for i in range(ny))
        f: Terms = {(0,) * nx + yj: Fraction(1)}
        for m, c in P.items():
            f[m + pad] = f.get(m + pad, 0) - c
        gens.append({m: c for m, c in f.items() if c})
    elim = eliminate(gens, total, range(nx, total))
    polys = []
    for g in elim:
        d = sum(next(iter(g)))
        polys.append(HomPoly(ny, d, g))
    return PolyIdeal(ny, tuple(polys))


@dataclass(frozen=True)
class VarietySpec:
    """A projective variety given by its ideal, with dimension and degree computed.

    Irreducibility is assumed, not checked.
    """

    ideal: PolyIdeal
    dim: int
    deg: int

    @classmethod
    def from_ideal(cls, ideal: PolyIdeal) -> "VarietySpec":
        n, delta = variety_dim_deg(ideal)
        return cls(ideal, n, delta)

    @classmethod
    def projective_space(cls, m: int) -> "VarietySpec":
        return cls(PolyIdeal(m + 1, ()), m, 1)

    @property
    def nvars(self) -> int:
        return self.ideal.nvars
