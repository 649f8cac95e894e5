"""Subgeneral position of hypersurfaces on a variety, and replacing hypersurfaces.

Given N+1 forms of one degree with no common zero on an n-dimensional V, the
replacement keeps P_1 = Q_1 and builds P_t = sum_{j=2}^{N-n+t} c_tj Q_j for
t = 2..n+1 so that the n+1 forms P_t already have no common zero on V.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, islice
from typing import Sequence

from .ideals import VarietySpec, is_projectively_empty
from .polyring import HomPoly

MAX_ATTEMPTS = 200
BOUND_DOUBLING_PERIOD = 25


class NotInPosition(ValueError):
    def __init__(self) -> None:
        super().__init__("input not in position")


class ReplacementNotFound(RuntimeError):
    def __init__(self, attempts: int) -> None:
        super().__init__(f"no replacement found within attempt budget ({attempts})")
        self.attempts = attempts


@dataclass(frozen=True)
class PositionReport:
    N_tested: int
    holds: bool
    witness: tuple[int, ...] | None = None


def meets_on(V: VarietySpec, polys: Sequence[HomPoly]) -> bool:
    """Whether the given forms have a common zero on V over the algebraic closure."""
    return not is_projectively_empty(V.ideal.extend(polys))


def check_subgeneral(V: VarietySpec, Qs: Sequence[HomPoly], N: int) -> PositionReport:
    """Every N+1 of the Qs have no common zero on V; else the first failing subset."""
    q = len(Qs)
    if N + 1 > q:
        raise ValueError(f"need at least N+1 = {N + 1} polynomials, got {q}")
    if N < V.dim:
        raise ValueError(f"N = {N} is below dim V = {V.dim}")
    for sub in combinations(range(q), N + 1):
        if meets_on(V, [Qs[j] for j in sub]):
            return PositionReport(N, False, sub)
    return PositionReport(N, True, None)


@dataclass(frozen=True)
class ReplacementResult:
    """P_1..P_{n+1} with coefficients keyed (t, j), both 1-based as in P_t = sum c_tj Q_j."""

    P: tuple[HomPoly, ...]
    coeffs: dict
    attempts: int

    def support(self, t: int) -> set[int]:
        return {j for (tt, j), c in self.coeffs.items() if tt == t and c}


def _combine(Qs: Sequence[HomPoly], coeffs: dict, t: int, last: int) -> HomPoly:
    total = HomPoly.zero(Qs[0].nvars, Qs[0].degree)
    for j in range(2, last + 1):
        c = coeffs[(t, j)]
        if c:
            total = total + Qs[j - 1].scale(c)
    return total


MAX_SELECTION_ATTEMPTS = 25


def _selections(N: int, n: int):
    """Coefficient choices picking a single Q_{j_t} for each P_t, j_2 < ... < j_{n+1}.

    Lexicographic in (j_2, ..., j_{n+1}); the first one is c_tt = 1.  For N = n
    it is the only one.
    """
    for js in combinations(range(2, N + 2), n):
        if all(j <= N - n + t for t, j in zip(range(2, n + 2), js)):
            yield {(t, j): Fraction(int(j == js[t - 2]))
                   for t in range(2, n + 2) for j in range(2, N - n + t + 1)}


def replace_hypersurfaces(V: VarietySpec, Qs: Sequence[HomPoly], seed: int = 0,
                          max_attempts: int = MAX_ATTEMPTS) -> ReplacementResult:
    """Find integer c_tj so that P_1 = Q_1, P_2, ..., P_{n+1} have no common zero on V.

    The first attempts select one Q_j per P_t (starting with c_tt = 1, at most
    25 of them).  Later attempts draw c_tj from {-B..B} minus 0 with a seeded
    generator, B = 2^(attempt // 25).
    """
    n = V.dim
    N = len(Qs) - 1
    if N < n:
        raise ValueError("need at least n+1 polynomials")
    degs = {Q.degree for Q in Qs}
    if len(degs) != 1 or any(Q.is_zero() for Q in Qs):
        raise ValueError("polynomials must be nonzero of one common degree")
    if meets_on(V, Qs):
        raise NotInPosition()
    rng = random.Random(seed)
    selections = islice(_selections(N, n), MAX_SELECTION_ATTEMPTS)
    for attempt in range(max_attempts):
        coeffs = next(selections, None)
        if coeffs is None:
            B = 2 ** (attempt // BOUND_DOUBLING_PERIOD)
            coeffs = {}
            for t in range(2, n + 2):
                for j in range(2, N - n + t + 1):
                    c = rng.randint(1, B) * rng.choice((-1, 1))
                    coeffs[(t, j)] = Fraction(c)
        P = [Qs[0]] + [_combine(Qs, coeffs, t, N - n + t) for t in range(2, n + 2)]
        if any(p.is_zero() for p in P):
            continue
        if not meets_on(V, P):
            return ReplacementResult(tuple(P), coeffs, attempt + 1)
    raise ReplacementNotFound(max_attempts)
