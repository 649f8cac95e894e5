"""Empirical check of the subgeneral-position subspace inequality on points of bounded height.

For each rational point x of V with coordinates bounded by H and off every
Q_j, the harness compares

    sum_{v in S} sum_j lambda_{Q_j,v}(x) / deg Q_j

with (coefficient + eps) * h(x), where the coefficient depends on the bound
being tested.  Exceptional sets are not computable; violators are reported
and only their stabilization in H is checked.
"""

from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from itertools import product as _cartesian
from typing import Iterator, Sequence

from .heights import OnDivisorError, format_height
from .ideals import PolyIdeal, VarietySpec
from .polyring import HomPoly, ProjPoint, evaluate, normalize_degrees, parse_poly
from .position import check_subgeneral, replace_hypersurfaces, ReplacementResult
from .qarith import INF, Place, PlaceSet, log_rat, norm, parse_rat

MODES = ("main", "theoremB", "theoremC", "theoremD", "theoremE")
DEFAULT_PLACES = "inf,2,3,5"
CSV_COLUMNS = ("point", "h", "lhs", "mode", "coefficient", "rhs", "margin", "excluded")
_CLOSE = 1e-9


def bound_coefficient(mode: str, N: int, n: int) -> int:
    if mode == "main":
        return (N - n + 1) * (n + 1)
    if mode in ("theoremB", "theoremD"):
        return n + 1
    if mode == "theoremC":
        return 2 * N - n + 1
    if mode == "theoremE":
        return N * (n + 1)
    raise ValueError(f"unknown bound mode {mode!r}")


# --- configuration -------------------------------------------------------------------

@dataclass(frozen=True)
class ExperimentConfig:
    variety: VarietySpec
    polys: tuple[HomPoly, ...]
    places: PlaceSet
    N: int
    epsilon: Fraction
    height_bound: int
    mode: str = "main"

    def validate(self) -> None:
        if self.epsilon <= 0:
            raise ValueError("epsilon must be positive")
        if not self.places.has_infinity:
            raise ValueError("S must contain the archimedean place")
        if self.mode not in MODES:
            raise ValueError(f"unknown bound mode {self.mode!r}")
        if self.height_bound < 1:
            raise ValueError("height bound must be >= 1")
        report = check_subgeneral(self.variety, self.polys, self.N)
        if not report.holds:
            raise ValueError(f"polynomials not in {self.N}-subgeneral position; witness {report.witness}")

    @property
    def coefficient(self) -> int:
        return bound_coefficient(self.mode, self.N, self.variety.dim)

    def with_(self, **changes) -> "ExperimentConfig":
        data = {k: getattr(self, k) for k in self.__dataclass_fields__}
        data.update(changes)
        return ExperimentConfig(**data)

    @classmethod
    def from_json(cls, data: dict) -> "ExperimentConfig":
        ideal = PolyIdeal.from_json(data["variety"])
        variety = VarietySpec.from_ideal(ideal)
        polys = tuple(parse_poly(s, ideal.nvars) for s in data["polys"])
        places = data.get("places", DEFAULT_PLACES)
        if not isinstance(places, str):
            places = ",".join(str(p) for p in places)
        return cls(
            variety=variety,
            polys=polys,
            places=PlaceSet.parse(places),
            N=int(data["N"]),
            epsilon=parse_rat(str(data.get("epsilon", "1/10"))),
            height_bound=int(data.get("H", data.get("height_bound", 50))),
            mode=data.get("mode", "main"),
        )


def load_config(path: str) -> ExperimentConfig:
    with open(path) as fh:
        return ExperimentConfig.from_json(json.load(fh))


# --- points -----------------------------------------------------------------------

def _lex_points(nvars: int, bound: int) -> Iterator[tuple[int, ...]]:
    """Primitive integer vectors with first nonzero entry positive, in lex order."""
    span = range(-bound, bound + 1)
    for lead in range(nvars - 1, -1, -1):
        zeros = (0,) * lead
        for first in range(1, bound + 1):
            for tail in _cartesian(span, repeat=nvars - lead - 1):
                if math.gcd(first, *tail) == 1:
                    yield zeros + (first,) + tail


def enumerate_points(V: VarietySpec | PolyIdeal, H: int) -> list[ProjPoint]:
    """Points of V(Q) with coprime integer coordinates of absolute value at most H."""
    if H < 1:
        raise ValueError("H must be >= 1")
    ideal = V.ideal if isinstance(V, VarietySpec) else V
    gens = ideal.nonzero_generators()
    out = []
    for coords in _lex_points(ideal.nvars, H):
        if all(evaluate(g, coords) == 0 for g in gens):
            out.append(ProjPoint._from_canonical(coords))
    return out


def height_index(x: ProjPoint) -> int:
    """max |x_i| of the canonical representative, i.e. exp h(x)."""
    return max(abs(c) for c in x.coords)


# --- local data at a point --------------------------------------------------------

def _point_norm(coords: Sequence, v: Place) -> Fraction:
    return max(norm(c, v) for c in coords)


def _poly_norm(Q: HomPoly, v: Place) -> Fraction:
    return max(norm(c, v) for c in Q.coefficients())


def sort_permutation(Qs: Sequence[HomPoly], v: Place, x: ProjPoint) -> tuple[int, ...]:
    """Indices ordering ||Q_i(x)||_v increasingly, ties by index."""
    vals = [norm(evaluate(Q, x), v) for Q in Qs]
    return tuple(sorted(range(len(Qs)), key=lambda i: (vals[i], i)))


def weight_vector(Ps: Sequence[HomPoly], v: Place, x: ProjPoint) -> tuple[float, ...]:
    """Entries log(||x||_v^d ||P_j||_v / ||P_j(x)||_v) for the realized permutation block."""
    xn = _point_norm(x.coords, v)
    out = []
    for P in Ps:
        val = evaluate(P, x)
        if val == 0:
            raise OnDivisorError()
        out.append(log_rat(xn ** P.degree * _poly_norm(P, v) / norm(val, v)))
    return tuple(out)


# --- records --------------------------------------------------------------------

@dataclass
class VerificationRecord:
    point: ProjPoint
    h: float
    lhs: float | None
    mode: str
    coefficient: int
    rhs: float | None
    margin: float | None
    excluded: bool
    violation: bool = False
    h_exact: Fraction = field(default=Fraction(1), repr=False)

    def csv_row(self) -> list[str]:
        def fmt(a):
            return "" if a is None else format_height(a)

        return [str(self.point), fmt(self.h), fmt(self.lhs), self.mode, str(self.coefficient),
                fmt(self.rhs), fmt(self.margin), "1" if self.excluded else "0"]


def _ord(a: int, p: int) -> int:
    v = 0
    while a % p == 0:
        a //= p
        v += 1
    return v


def _rat_ord(a: Fraction, p: int) -> int:
    return _ord(a.numerator, p) - _ord(a.denominator, p)


class _IntPoly:
    """Q as (integer polynomial) / den, evaluated with int arithmetic."""

    __slots__ = ("den", "terms")

    def __init__(self, Q: HomPoly):
        self.den = reduce(math.lcm, (c.denominator for c in Q.coefficients()), 1)
        self.terms = [(int(c * self.den), [(i, e) for i, e in enumerate(mon) if e])
                      for mon, c in Q.items()]

    def __call__(self, coords: Sequence[int]) -> Fraction:
        total = 0
        for c, exps in self.terms:
            t = c
            for i, e in exps:
                t *= coords[i] ** e
            total += t
        return Fraction(total, self.den)


class _Evaluator:
    """Evaluates the S-part of the Weil sums at many points.

    Works with valuations instead of norms: the Weil ratio at a prime p is
    p^(ord_p Q(x) - d min ord_p x_i - min ord_p coeffs(Q)), so each
    polynomial's product over S needs one Fraction at the end.
    """

    def __init__(self, polys: Sequence[HomPoly], places: PlaceSet):
        self.polys = list(polys)
        self.places = list(places)
        self.primes = [v.prime for v in self.places if v.prime is not None]
        self.archimedean = INF in self.places
        self.degs = [Q.degree for Q in self.polys]
        self.common = reduce(math.lcm, self.degs, 1)
        self.qinf = [_poly_norm(Q, INF) for Q in self.polys]
        self.qord = [[min(_rat_ord(c, p) for c in Q.coefficients()) for p in self.primes]
                     for Q in self.polys]
        self.int_polys = [_IntPoly(Q) for Q in self.polys]

    def weil_products(self, x: ProjPoint) -> list[Fraction] | None:
        """Per-polynomial products over S of the Weil ratios, or None when x is on some Q_j."""
        coords = x.coords
        vals = [f(coords) for f in self.int_polys]
        if any(a == 0 for a in vals):
            return None
        xinf = max(abs(c) for c in coords)
        xord = [min(_ord(c, p) for c in coords if c) for p in self.primes]
        out = []
        for j, a in enumerate(vals):
            d = self.degs[j]
            r = Fraction(xinf ** d) * self.qinf[j] / abs(a) if self.archimedean else Fraction(1)
            num, den = 1, 1
            for k, p in enumerate(self.primes):
                e = _rat_ord(a, p) - d * xord[k] - self.qord[j][k]
                if e > 0:
                    num *= p ** e
                elif e < 0:
                    den *= p ** (-e)
            out.append(r * Fraction(num, den))
        return out

    def lhs(self, ratios: Sequence[Fraction]) -> float:
        if len(set(self.degs)) == 1:
            return log_rat(reduce(lambda a, b: a * b, ratios, Fraction(1))) / self.degs[0]
        return sum(log_rat(r) / d for r, d in zip(ratios, self.degs))

    def exceeds(self, ratios: Sequence[Fraction], h_exact: Fraction, bound: Fraction) -> bool:
        """Exact test of lhs > bound * h via integer powers of the norm products."""
        D = self.common
        b = bound.denominator
        left = Fraction(1)
        for r, d in zip(ratios, self.degs):
            left *= r ** (D * b // d)
        right = h_exact ** (D * bound.numerator)
        return left > right


def _height_exact(x: ProjPoint) -> Fraction:
    # canonical coordinates are coprime integers: all finite norms are 1
    return Fraction(height_index(x))


def evaluate_point(ev: _Evaluator, x: ProjPoint, mode: str, coefficient: int,
                   epsilon: Fraction) -> VerificationRecord:
    h_exact = _height_exact(x)
    h = log_rat(h_exact)
    ratios = ev.weil_products(x)
    if ratios is None:
        return VerificationRecord(x, h, None, mode, coefficient, None, None, True, False, h_exact)
    lhs = ev.lhs(ratios)
    bound = coefficient + epsilon
    rhs = float(bound) * h
    margin = rhs - lhs
    if abs(margin) < _CLOSE * (1.0 + abs(rhs)):
        violation = ev.exceeds(ratios, h_exact, bound)
        if not violation and margin < 0:
            margin = 0.0
    else:
        violation = margin < 0
    return VerificationRecord(x, h, lhs, mode, coefficient, rhs, margin, False, violation, h_exact)


def _evaluate_chunk(args) -> list[VerificationRecord]:
    polys, places, points, mode, coefficient, epsilon = args
    ev = _Evaluator(polys, places)
    return [evaluate_point(ev, x, mode, coefficient, epsilon) for x in points]


@dataclass
class Summary:
    violations: int
    max_ratio: float | None
    max_ratio_non_violators: float | None
    stable_from_H: int
    evaluated: int
    excluded: int
    violators: list[ProjPoint]

    def to_json(self) -> dict:
        return {
            "violations": self.violations,
            "max_ratio": self.max_ratio,
            "max_ratio_non_violators": self.max_ratio_non_violators,
            "stable_from_H": self.stable_from_H,
            "evaluated": self.evaluated,
            "excluded": self.excluded,
            "violators": [str(x) for x in self.violators],
        }


def summarize(records: Sequence[VerificationRecord]) -> Summary:
    violators = [r.point for r in records if r.violation]
    ratios = [r.lhs / r.h for r in records if not r.excluded and r.h > 0]
    clean = [r.lhs / r.h for r in records if not r.excluded and r.h > 0 and not r.violation]
    stable = max((height_index(x) for x in violators), default=1)
    return Summary(
        violations=len(violators),
        max_ratio=max(ratios) if ratios else None,
        max_ratio_non_violators=max(clean) if clean else None,
        stable_from_H=stable,
        evaluated=sum(1 for r in records if not r.excluded),
        excluded=sum(1 for r in records if r.excluded),
        violators=violators,
    )


def main_theorem_report(cfg: ExperimentConfig, threads: int = 1,
                        points: Sequence[ProjPoint] | None = None
                        ) -> tuple[list[VerificationRecord], Summary]:
    """One record per enumerated point, in lexicographic point order, plus a summary."""
    cfg.validate()
    if points is None:
        points = enumerate_points(cfg.variety, cfg.height_bound)
    coefficient = cfg.coefficient
    if threads <= 1 or len(points) < 1000:
        ev = _Evaluator(cfg.polys, cfg.places)
        records = [evaluate_point(ev, x, cfg.mode, coefficient, cfg.epsilon) for x in points]
    else:
        size = -(-len(points) // (4 * threads))
        chunks = [(cfg.polys, cfg.places, points[i:i + size], cfg.mode, coefficient, cfg.epsilon)
                  for i in range(0, len(points), size)]
        with ProcessPoolExecutor(max_workers=threads) as pool:
            records = [r for part in pool.map(_evaluate_chunk, chunks) for r in part]
    return records, summarize(records)


def records_to_csv(records: Sequence[VerificationRecord]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in records:
        writer.writerow(r.csv_row())
    return buf.getvalue()


def violation_set(records: Sequence[VerificationRecord], H: int | None = None) -> set[ProjPoint]:
    """Violators, optionally restricted to points with coordinates bounded by H."""
    return {r.point for r in records if r.violation and (H is None or height_index(r.point) <= H)}


def stabilization(records: Sequence[VerificationRecord], H_from: int, H_to: int) -> bool:
    """No point in the annulus H_from < max|x_i| <= H_to violates."""
    return violation_set(records, H_to) == violation_set(records, H_from)


# --- bound comparison ----------------------------------------------------------------

@dataclass
class ComparisonRow:
    point: ProjPoint
    h: float
    lhs: float
    margins: dict


def compare_bounds(cfg: ExperimentConfig, points: Sequence[ProjPoint] | None = None
                   ) -> tuple[dict, list[ComparisonRow]]:
    """Margins under every bound mode, side by side, for each non-excluded point.

    Returns the coefficient table and the rows.  Raises AssertionError if the
    main-mode margin ever exceeds the theoremE-mode margin, which would mean a
    coefficient error.
    """
    cfg.validate()
    n = cfg.variety.dim
    coeffs = {mode: bound_coefficient(mode, cfg.N, n) for mode in MODES}
    if points is None:
        points = enumerate_points(cfg.variety, cfg.height_bound)
    ev = _Evaluator(cfg.polys, cfg.places)
    rows = []
    for x in points:
        rec = evaluate_point(ev, x, "main", coeffs["main"], cfg.epsilon)
        if rec.excluded:
            continue
        margins = {mode: float(c + cfg.epsilon) * rec.h - rec.lhs for mode, c in coeffs.items()}
        if margins["main"] > margins["theoremE"]:
            raise AssertionError(f"main margin exceeds theoremE margin at {x}")
        rows.append(ComparisonRow(x, rec.h, rec.lhs, margins))
    return coeffs, rows


def comparison_csv(coeffs: dict, rows: Sequence[ComparisonRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["point", "h", "lhs", *(f"margin_{m}" for m in MODES)])
    for r in rows:
        writer.writerow([str(r.point), format_height(r.h), format_height(r.lhs),
                         *(format_height(r.margins[m]) for m in MODES)])
    return buf.getvalue()


# --- the local chain inequality from the proof ---------------------------------------------

class ReplacementCache:
    """Replacement polynomials per ordered choice of the N+1 smallest Q's."""

    def __init__(self, V: VarietySpec, Qs: Sequence[HomPoly], seed: int = 0):
        self.V = V
        self.Qs, self.d = normalize_degrees(Qs)
        self.seed = seed
        self._int_Qs = [_IntPoly(Q) for Q in self.Qs]
        self._cache: dict[tuple[int, ...], tuple[ReplacementResult, list[_IntPoly]]] = {}

    def _entry(self, prefix: tuple[int, ...]):
        if prefix not in self._cache:
            rep = replace_hypersurfaces(self.V, [self.Qs[i] for i in prefix], seed=self.seed)
            self._cache[prefix] = (rep, [_IntPoly(P) for P in rep.P])
        return self._cache[prefix]

    def get(self, prefix: tuple[int, ...]) -> ReplacementResult:
        return self._entry(prefix)[0]


@dataclass(frozen=True)
class ChainTerms:
    lhs: float
    main_term: float

    @property
    def difference(self) -> float:
        return self.lhs - self.main_term


def check_ineq_3_2(cache: ReplacementCache, N: int, v: Place, x: ProjPoint) -> ChainTerms | None:
    """Both sides of the local chain inequality at (v, x), without its constant.

    lhs = log prod_i ||x||^d / ||Q_i(x)||, main = (N-n+1) log ||x||^{(n+1)d} / prod_t ||P_t(x)||
    where P_t are the replacement forms built from the N+1 Q's that are
    v-adically smallest at x.  None when x lies on some Q_i or P_t.
    """
    d = cache.d
    n = cache.V.dim
    coords = x.coords
    vals = [f(coords) for f in cache._int_Qs]
    if any(a == 0 for a in vals):
        return None
    qn = [norm(a, v) for a in vals]
    perm = tuple(sorted(range(len(vals)), key=lambda i: (qn[i], i)))
    _, int_P = cache._entry(perm[: N + 1])
    xn = _point_norm(coords, v)
    lhs = xn ** (d * len(vals))
    for a in qn:
        lhs /= a
    denom = Fraction(1)
    for f in int_P:
        val = f(coords)
        if val == 0:
            return None
        denom *= norm(val, v)
    main = (N - n + 1) * log_rat(xn ** ((n + 1) * d) / denom)
    return ChainTerms(log_rat(lhs), main)


def ineq_3_2_scan(cfg: ExperimentConfig, H: int, seed: int = 0,
                  places: Sequence[Place] | None = None) -> dict[int, float]:
    """Running maximum of lhs - main over points, keyed by height index max|x_i|.

    The returned dict maps each h in 1..H to the maximum difference among
    points with height index at most h.
    """
    cache = ReplacementCache(cfg.variety, cfg.polys, seed)
    places = list(cfg.places) if places is None else list(places)
    best: dict[int, float] = {}
    for x in enumerate_points(cfg.variety, H):
        k = height_index(x)
        for v in places:
            terms = check_ineq_3_2(cache, cfg.N, v, x)
            if terms is not None:
                best[k] = max(best.get(k, -math.inf), terms.difference)
    running, out = -math.inf, {}
    for k in range(1, H + 1):
        running = max(running, best.get(k, -math.inf))
        out[k] = running
    return out
