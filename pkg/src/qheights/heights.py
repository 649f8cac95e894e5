"""Local norms of points and polynomials, logarithmic heights, Weil functions."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .polyring import HomPoly, ProjPoint, evaluate
from .qarith import INF, Place, PlaceSet, log_rat, norm, relevant_places


class OnDivisorError(ValueError):
    """Raised when a Weil function is evaluated at a zero of its polynomial."""

    def __init__(self, msg: str = "point lies on the divisor"):
        super().__init__(msg)


@dataclass(frozen=True)
class HeightValue:
    log_value: float
    exact_norm_product: Fraction

    def __float__(self) -> float:
        return self.log_value

    def __str__(self) -> str:
        return format_height(self.log_value)


def format_height(x: float) -> str:
    """Fixed-point decimal with 12 digits after the point."""
    out = f"{x:.12f}"
    return "0.000000000000" if out == "-0.000000000000" else out


def _height(product: Fraction) -> HeightValue:
    return HeightValue(log_rat(product), product)


def point_norm(x: ProjPoint, v: Place) -> Fraction:
    return max(norm(c, v) for c in x.coords)


def poly_norm(Q: HomPoly, v: Place) -> Fraction:
    if Q.is_zero():
        raise ValueError("zero polynomial has no norm")
    return max(norm(c, v) for c in Q.coefficients())


def _support(values: Iterable[Fraction]) -> PlaceSet:
    out = {INF}
    for a in values:
        if a:
            out.update(relevant_places(a))
    return PlaceSet(out)


def point_places(x: ProjPoint) -> PlaceSet:
    return _support(Fraction(c) for c in x.coords)


def poly_places(Q: HomPoly) -> PlaceSet:
    return _support(Q.coefficients())


def height_point(x: ProjPoint) -> HeightValue:
    """Sum over places of log ||x||_v, accumulated as an exact product first."""
    prod = Fraction(1)
    for v in point_places(x):
        prod *= point_norm(x, v)
    return _height(prod)


def height_point_coords(coords: Iterable) -> HeightValue:
    """Height from an arbitrary (not canonicalized) representative.

    Agrees with ``height_point`` by the product formula; used to test that.
    """
    cs = [Fraction(c) for c in coords]
    prod = Fraction(1)
    for v in _support(cs):
        prod *= max(norm(c, v) for c in cs)
    return _height(prod)


def height_poly(Q: HomPoly) -> HeightValue:
    if Q.is_zero():
        raise ValueError("height of the zero polynomial is undefined")
    prod = Fraction(1)
    for v in poly_places(Q):
        prod *= poly_norm(Q, v)
    return _height(prod)


def weil_ratio(Q: HomPoly, v: Place, x: ProjPoint) -> Fraction:
    """The exact quantity ||x||_v^d ||Q||_v / ||Q(x)||_v whose log is the Weil function."""
    val = evaluate(Q, x)
    if val == 0:
        raise OnDivisorError()
    return point_norm(x, v) ** Q.degree * poly_norm(Q, v) / norm(val, v)


def weil(Q: HomPoly, v: Place, x: ProjPoint) -> float:
    return log_rat(weil_ratio(Q, v, x))


def weil_places(Q: HomPoly, x: ProjPoint) -> PlaceSet:
    """Places where the Weil function of Q at x can be nonzero."""
    val = evaluate(Q, x)
    if val == 0:
        raise OnDivisorError()
    return point_places(x).union(poly_places(Q)).union(relevant_places(val))


@dataclass(frozen=True)
class WeilIdentity:
    lhs: float
    rhs: float
    lhs_exact: Fraction
    rhs_exact: Fraction

    @property
    def holds_exactly(self) -> bool:
        return self.lhs_exact == self.rhs_exact


def global_weil_identity(Q: HomPoly, x: ProjPoint) -> WeilIdentity:
    """Sum of local Weil functions against d*h(x) + h(Q).

    Both sides are also returned as exact norm products; they agree because
    the product formula kills the sum of log ||Q(x)||_v.
    """
    lhs = Fraction(1)
    for v in weil_places(Q, x):
        lhs *= weil_ratio(Q, v, x)
    hx = height_point(x)
    hq = height_poly(Q)
    rhs = hx.exact_norm_product ** Q.degree * hq.exact_norm_product
    return WeilIdentity(log_rat(lhs), Q.degree * hx.log_value + hq.log_value, lhs, rhs)


def num_monomials(nvars: int, d: int) -> int:
    return math.comb(d + nvars - 1, nvars - 1)
