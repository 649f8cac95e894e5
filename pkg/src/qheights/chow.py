"""Hilbert weights, Chow forms and Chow weights, and the two weight inequalities.

Chow forms are computed exactly for points, linear subvarieties and
hypersurfaces.  Other varieties get an interval for the Chow weight from the
Hilbert-weight inequality, optionally sharpened from below by coordinate
subsets that cut the variety to the empty set.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from typing import Iterable, Sequence

from .ideals import GREVLEX, PolyIdeal, groebner, hilbert_function, is_projectively_empty, variety_dim_deg
from .polyring import HomPoly, Monomial, ProjPoint, monomials_of_degree
from .qarith import RatLike, format_rat, parse_rat, to_rat

CONVENTIONS = ("dimension", "printed")


class WeightVector(tuple):
    """Nonnegative rational weights (c_0, ..., c_m)."""

    def __new__(cls, entries: Iterable[RatLike]):
        vals = tuple(to_rat(c) for c in entries)
        if any(c < 0 for c in vals):
            raise ValueError("weights must be nonnegative")
        return super().__new__(cls, vals)

    @classmethod
    def parse(cls, text: str) -> "WeightVector":
        return cls(parse_rat(t) for t in text.split(","))

    def dot(self, a: Sequence[int]) -> Fraction:
        return sum((c * e for c, e in zip(self, a)), Fraction(0))

    def scaled(self, t: RatLike) -> "WeightVector":
        t = to_rat(t)
        return WeightVector(t * c for c in self)

    def __str__(self) -> str:
        return ",".join(format_rat(c) for c in self)


# --- Hilbert weights -----------------------------------------------------------

class _Echelon:
    """Incremental row echelon form over Q for independence tests."""

    def __init__(self) -> None:
        self.pivots: dict = {}

    def add(self, vec: dict) -> bool:
        r = dict(vec)
        while r:
            col = max(r)
            if col not in self.pivots:
                c = r[col]
                self.pivots[col] = {k: v / c for k, v in r.items()}
                return True
            p = self.pivots[col]
            c = r[col]
            for k, v in p.items():
                nv = r.get(k, 0) - c * v
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)
        return False


def hilbert_weight(I: PolyIdeal, u: int, c: Sequence[RatLike]) -> tuple[Fraction, list[Monomial]]:
    """Maximal c-weight of a monomial basis of the degree-u quotient, and a basis attaining it.

    Greedy on the linear matroid of residues: monomials in decreasing weight
    (lex-descending among ties), kept when their normal form is independent
    of those already kept.  Greedy is optimal on any matroid.
    """
    if u < 1:
        raise ValueError("u must be >= 1")
    c = WeightVector(c)
    if len(c) != I.nvars:
        raise ValueError("weight vector has wrong length")
    gb = groebner(I, GREVLEX)
    target = hilbert_function(I, u)
    mons = monomials_of_degree(I.m, u)
    order = sorted(range(len(mons)), key=lambda i: (-c.dot(mons[i]), i))
    ech = _Echelon()
    chosen: list[Monomial] = []
    total = Fraction(0)
    for i in order:
        if len(chosen) == target:
            break
        a = mons[i]
        nf = gb.normal_form(HomPoly(I.nvars, u, {a: 1}))
        if nf and ech.add(dict(nf.items())):
            chosen.append(a)
            total += c.dot(a)
    return total, chosen


# --- Chow forms --------------------------------------------------------------------

@dataclass(frozen=True)
class ChowForm:
    """Polynomial in n+1 blocks of m+1 variables u_ij, stored flat (index i*(m+1)+j)."""

    blocks: int
    block_size: int
    poly: HomPoly

    def __post_init__(self) -> None:
        if self.poly.nvars != self.blocks * self.block_size:
            raise ValueError("variable count does not match the block layout")

    def var(self, i: int, j: int) -> int:
        return i * self.block_size + j

    def block_degrees(self) -> set[tuple[int, ...]]:
        k = self.block_size
        return {tuple(sum(mon[i * k:(i + 1) * k]) for i in range(self.blocks))
                for mon, _ in self.poly.items()}

    @property
    def degree(self) -> int:
        """Common degree in each block (the degree of the variety)."""
        degs = self.block_degrees()
        if len(degs) != 1:
            raise ValueError("Chow form is not multihomogeneous")
        (d,) = degs
        if len(set(d)) != 1:
            raise ValueError("block degrees differ")
        return d[0]

    def names(self) -> list[str]:
        sep = "_" if self.block_size > 10 or self.blocks > 10 else ""
        return [f"u{i}{sep}{j}" for i in range(self.blocks) for j in range(self.block_size)]

    def __str__(self) -> str:
        return self.poly.to_str(self.names())


def _u(blocks: int, size: int, i: int, j: int) -> HomPoly:
    return HomPoly.variable(blocks * size, i * size + j)


def determinant(rows: Sequence[Sequence[HomPoly]]) -> HomPoly:
    """Leibniz expansion; entries are polynomials in a common ring."""
    k = len(rows)
    nvars = rows[0][0].nvars
    total = HomPoly.zero(nvars)
    for perm in permutations(range(k)):
        inv = sum(1 for a in range(k) for b in range(a + 1, k) if perm[a] > perm[b])
        term = rows[0][perm[0]]
        for r in range(1, k):
            term = term * rows[r][perm[r]]
        if term:
            total = total + (term if inv % 2 == 0 else -term)
    return total


def chow_form_point(p: ProjPoint) -> ChowForm:
    size = len(p.coords)
    poly = HomPoly(size, 1, {tuple(int(i == j) for i in range(size)): c
                             for j, c in enumerate(p.coords)})
    return ChowForm(1, size, poly)


def chow_form_linear(basis: Sequence[Sequence[RatLike]]) -> ChowForm:
    """Chow form of the projective span of ``basis``: det(u_i . b_t)."""
    vecs = [[to_rat(a) for a in b] for b in basis]
    size = len(vecs[0])
    k = len(vecs)
    if any(len(b) != size for b in vecs):
        raise ValueError("basis vectors have different lengths")
    if _rank(vecs) < k:
        raise ValueError("dependent basis")
    rows = []
    for i in range(k):
        row = []
        for b in vecs:
            row.append(HomPoly(k * size, 1, {tuple(int(v == i * size + j) for v in range(k * size)): b[j]
                                             for j in range(size)}))
        rows.append(row)
    return ChowForm(k, size, determinant(rows))


def chow_form_projective_space(m: int) -> ChowForm:
    return chow_form_linear([[int(i == j) for j in range(m + 1)] for i in range(m + 1)])


def _rank(vecs: list[list[Fraction]]) -> int:
    rows = [list(v) for v in vecs]
    rank = 0
    ncols = len(rows[0]) if rows else 0
    for col in range(ncols):
        piv = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if piv is None:
            continue
        rows[rank], rows[piv] = rows[piv], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                f = rows[r][col] / rows[rank][col]
                rows[r] = [a - f * b for a, b in zip(rows[r], rows[rank])]
        rank += 1
    return rank


def substitute(F: HomPoly, values: Sequence[HomPoly]) -> HomPoly:
    """F(values[0], ..., values[m]) for homogeneous values of equal degree."""
    if len(values) != F.nvars:
        raise ValueError("wrong number of substituted values")
    target = values[0].nvars
    cache: dict[tuple[int, int], HomPoly] = {}

    def pw(j: int, e: int) -> HomPoly:
        if (j, e) not in cache:
            cache[(j, e)] = values[j] ** e
        return cache[(j, e)]

    total = HomPoly.zero(target)
    for mon, c in F.items():
        term = HomPoly.constant(target, c)
        for j, e in enumerate(mon):
            if e:
                term = term * pw(j, e)
        total = total + term
    return total


def chow_form_hypersurface(F: HomPoly) -> ChowForm:
    """F evaluated at the signed maximal minors of the m x (m+1) block matrix."""
    if F.degree < 1:
        raise ValueError("hypersurface must have positive degree")
    size = F.nvars
    k = size - 1
    if k < 1:
        raise ValueError("no hypersurfaces in P^0")
    cols = []
    for j in range(size):
        keep = [c for c in range(size) if c != j]
        minor = determinant([[_u(k, size, i, c) for c in keep] for i in range(k)])
        cols.append(minor if j % 2 == 0 else -minor)
    return ChowForm(k, size, substitute(F, cols))


@dataclass(frozen=True)
class ChowWeightResult:
    lo: Fraction
    hi: Fraction
    method: str = "exact"

    def __post_init__(self) -> None:
        if self.lo > self.hi:
            raise ValueError("empty interval")

    @property
    def value(self) -> Fraction:
        if self.lo != self.hi:
            raise ValueError("Chow weight only known up to an interval")
        return self.lo

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    def contains(self, e: RatLike) -> bool:
        return self.lo <= to_rat(e) <= self.hi

    def __str__(self) -> str:
        if self.is_exact:
            return format_rat(self.lo)
        return f"[{format_rat(self.lo)}, {format_rat(self.hi)}] ({self.method})"


def t_exponent_groups(CF: ChowForm, c: Sequence[RatLike]) -> dict[Fraction, HomPoly]:
    """Decompose F(t^c_j u_ij) as sum of t^e G_e; only nonzero G_e are kept."""
    c = WeightVector(c)
    if len(c) != CF.block_size:
        raise ValueError("weight vector has wrong length")
    k = CF.block_size
    groups: dict[Fraction, dict] = {}
    for mon, coef in CF.poly.items():
        e = sum((c[v % k] * a for v, a in enumerate(mon) if a), Fraction(0))
        groups.setdefault(e, {})[mon] = coef
    out = {}
    for e, terms in groups.items():
        G = HomPoly(CF.poly.nvars, CF.poly.degree, terms)
        if G:
            out[e] = G
    return dict(sorted(out.items(), reverse=True))


def chow_weight(CF: ChowForm, c: Sequence[RatLike]) -> ChowWeightResult:
    groups = t_exponent_groups(CF, c)
    if not groups:
        raise ValueError("zero Chow form")
    e0 = next(iter(groups))
    return ChowWeightResult(e0, e0, "exact")


def bracket(J: Sequence[int], m: int) -> HomPoly:
    """det(u_{i, j_t}) for i, t = 0..|J|-1, in |J| blocks of m+1 variables."""
    k = len(J)
    return determinant([[_u(k, m + 1, i, j) for j in J] for i in range(k)])


def bracket_weight_check(J: Sequence[int], c: Sequence[RatLike]) -> tuple[bool, Fraction]:
    """Column scaling multiplies the bracket [J] by t^(sum of c_j over J).

    Returns whether every monomial of the expanded determinant carries exactly
    that exponent, and the exponent.
    """
    c = WeightVector(c)
    m = len(c) - 1
    if not J or len(J) > m + 1 or len(set(J)) != len(J):
        raise ValueError("bad index subset")
    CF = ChowForm(len(J), m + 1, bracket(sorted(J), m))
    groups = t_exponent_groups(CF, c)
    expected = sum((c[j] for j in J), Fraction(0))
    return list(groups) == [expected], expected


# --- inequalities -----------------------------------------------------------------------

def _constants(n: int, m: int, convention: str) -> tuple[int, int]:
    if convention == "dimension":
        return n + 1, 2 * n + 1
    if convention == "printed":
        return m + 1, 2 * m + 1
    raise ValueError(f"unknown convention {convention!r}; choose from {CONVENTIONS}")


def general_position_subsets(I: PolyIdeal, size: int) -> list[tuple[int, ...]]:
    """Coordinate subsets whose vanishing cuts the zero set of I to nothing."""
    out = []
    for sub in combinations(range(I.nvars), size):
        coords = [HomPoly.variable(I.nvars, i) for i in sub]
        if is_projectively_empty(I.extend(coords)):
            out.append(sub)
    return out


def chow_weight_estimate(I: PolyIdeal, c: Sequence[RatLike], u: int,
                         convention: str = "dimension") -> ChowWeightResult:
    """Interval for e_X(c) from the Hilbert-weight inequality and coordinate subsets.

    Upper end: K*Delta*(S/(u H) + K'*Delta/u * max c), with (K, K') = (n+1, 2n+1)
    or (m+1, 2m+1).  Lower end: the best (sum of c over the subset)*Delta among
    (n+1)-subsets of coordinates cutting X to nothing, else 0.
    """
    c = WeightVector(c)
    n, delta = variety_dim_deg(I)
    if u <= delta:
        raise ValueError(f"u must exceed the degree {delta}")
    K, K2 = _constants(n, I.m, convention)
    S, _ = hilbert_weight(I, u, c)
    H = hilbert_function(I, u)
    hi = K * delta * (S / (u * H) + Fraction(K2 * delta, u) * max(c))
    lo = Fraction(0)
    for sub in general_position_subsets(I, n + 1):
        lo = max(lo, sum((c[i] for i in sub), Fraction(0)) * delta)
    return ChowWeightResult(lo, hi, f"estimated(u={u},{convention})")


def theorem_2_12_margin(I: PolyIdeal, c: Sequence[RatLike], u: int, e_exact: RatLike,
                        convention: str = "dimension") -> Fraction:
    """S/(uH) - e/(K Delta) + K' Delta/u * max c; nonnegative when the inequality holds."""
    c = WeightVector(c)
    n, delta = variety_dim_deg(I)
    if u <= delta:
        raise ValueError(f"u must exceed the degree {delta}")
    K, K2 = _constants(n, I.m, convention)
    S, _ = hilbert_weight(I, u, c)
    H = hilbert_function(I, u)
    return S / (u * H) - to_rat(e_exact) / (K * delta) + Fraction(K2 * delta, u) * max(c)


def check_theorem_2_12(I: PolyIdeal, c: Sequence[RatLike], u: int, e_exact: RatLike,
                       convention: str = "dimension") -> tuple[bool, Fraction]:
    margin = theorem_2_12_margin(I, c, u, e_exact, convention)
    return margin >= 0, margin


class NotInGeneralPosition(ValueError):
    def __init__(self) -> None:
        super().__init__("subset not in general position")


def check_lemma_2_13(I_Y: PolyIdeal, c: Sequence[RatLike], subset: Sequence[int],
                     e: RatLike | ChowWeightResult) -> tuple[bool, Fraction]:
    """Whether e_Y(c) >= (sum of c over subset) * deg Y, with the slack.

    ``e`` is an exact Chow weight or an interval; for an interval the lower
    end is used, so a True answer is certified either way.
    """
    c = WeightVector(c)
    coords = [HomPoly.variable(I_Y.nvars, i) for i in subset]
    if not is_projectively_empty(I_Y.extend(coords)):
        raise NotInGeneralPosition()
    _, delta = variety_dim_deg(I_Y)
    e_val = e.lo if isinstance(e, ChowWeightResult) else to_rat(e)
    slack = e_val - sum((c[i] for i in subset), Fraction(0)) * delta
    return slack >= 0, slack
