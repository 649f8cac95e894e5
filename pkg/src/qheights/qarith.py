"""Exact rationals, places of Q and their normalized absolute values."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Union

Rat = Fraction
RatLike = Union[int, Fraction, str]

# Over Q every local degree [Q_v : Q_v] / [Q : Q] is 1, so ||x||_v = |x|_v.
LOCAL_DEGREE = 1

_TRIAL_LIMIT = 1000
_SMALL_PRIMES = tuple(p for p in range(2, _TRIAL_LIMIT) if all(p % q for q in range(2, math.isqrt(p) + 1)))
# Deterministic for n < 3.317e24.
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def to_rat(x: RatLike) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rat(x)
    raise TypeError(f"cannot convert {type(x).__name__} to a rational")


def parse_rat(text: str) -> Fraction:
    """Parse ``"a/b"`` or ``"a"`` in base 10."""
    s = text.strip()
    num, sep, den = s.partition("/")
    try:
        if sep:
            return Fraction(int(num), int(den))
        return Fraction(int(num))
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational: {text!r}") from exc


def format_rat(x: Fraction) -> str:
    if x.denominator == 1:
        return str(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def _miller_rabin(n: int) -> bool:
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        if a % n == 0:
            continue
        y = pow(a, d, n)
        if y in (1, n - 1):
            continue
        for _ in range(s - 1):
            y = y * y % n
            if y == n - 1:
                break
        else:
            return False
    return True


@lru_cache(maxsize=4096)
def is_prime(n: int) -> bool:
    """Trial division by primes below 1000, then Miller-Rabin (deterministic below 3.3e24)."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    if n < _TRIAL_LIMIT * _TRIAL_LIMIT:
        return True
    return _miller_rabin(n)


def _pollard_rho(n: int) -> int:
    if n % 2 == 0:
        return 2
    rng = random.Random(n)
    while True:
        c = rng.randrange(1, n)
        f = lambda z: (z * z + c) % n  # noqa: E731
        x = y = rng.randrange(2, n)
        g = 1
        while g == 1:
            x = f(x)
            y = f(f(y))
            g = math.gcd(abs(x - y), n)
        if g != n:
            return g


@lru_cache(maxsize=8192)
def prime_factors(n: int) -> tuple[int, ...]:
    """Distinct prime divisors of ``|n|``, ascending."""
    n = abs(n)
    if n == 0:
        raise ValueError("zero has no finite support")
    out: set[int] = set()
    for p in _SMALL_PRIMES:
        if n % p == 0:
            out.add(p)
            while n % p == 0:
                n //= p
        if p * p > n:
            break
    stack = [n] if n > 1 else []
    while stack:
        k = stack.pop()
        if is_prime(k):
            out.add(k)
            continue
        f = _pollard_rho(k)
        stack.extend((f, k // f))
    return tuple(sorted(out))


def ord_p(x: RatLike, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    x = to_rat(x)
    if x == 0:
        raise ValueError("valuation of zero is infinite")
    v = 0
    num, den = x.numerator, x.denominator
    while num % p == 0:
        num //= p
        v += 1
    while den % p == 0:
        den //= p
        v -= 1
    return v


@dataclass(frozen=True, order=False)
class Place:
    """The archimedean place (``prime is None``) or the place of a prime p."""

    prime: int | None = None

    def __post_init__(self) -> None:
        if self.prime is not None and not is_prime(self.prime):
            raise ValueError(f"{self.prime} is not prime")

    @property
    def is_archimedean(self) -> bool:
        return self.prime is None

    @property
    def local_degree(self) -> int:
        return LOCAL_DEGREE

    def sort_key(self) -> tuple[int, int]:
        return (0, 0) if self.prime is None else (1, self.prime)

    def __lt__(self, other: "Place") -> bool:
        return self.sort_key() < other.sort_key()

    def __str__(self) -> str:
        return "inf" if self.prime is None else f"p={self.prime}"

    @classmethod
    def parse(cls, text: str) -> "Place":
        s = text.strip().lower()
        if s in ("inf", "infinity", "oo"):
            return INF
        if s.startswith("p="):
            s = s[2:]
        return cls(int(s))


INF = Place(None)


def prime_place(p: int) -> Place:
    return Place(p)


class PlaceSet(tuple):
    """Ordered, duplicate-free collection of places (infinity first)."""

    def __new__(cls, places: Iterable[Place] = ()):
        items = list(places)
        if len(set(items)) != len(items):
            raise ValueError("duplicate places")
        return super().__new__(cls, sorted(items, key=Place.sort_key))

    def __str__(self) -> str:
        return ",".join("inf" if v.is_archimedean else str(v.prime) for v in self)

    @property
    def has_infinity(self) -> bool:
        return INF in self

    def union(self, other: Iterable[Place]) -> "PlaceSet":
        return PlaceSet(set(self) | set(other))

    @classmethod
    def parse(cls, text: str) -> "PlaceSet":
        return cls(Place.parse(t) for t in text.split(",") if t.strip())


def norm(x: RatLike, v: Place) -> Fraction:
    """Normalized absolute value ||x||_v = |x|_v ** LOCAL_DEGREE, exactly."""
    x = to_rat(x)
    if x == 0:
        return Fraction(0)
    if v.prime is None:
        a = abs(x)
    else:
        a = Fraction(v.prime) ** (-ord_p(x, v.prime))
    return a ** LOCAL_DEGREE


def relevant_places(x: RatLike) -> PlaceSet:
    """Infinity plus the primes dividing numerator or denominator.

    Every place outside the result has ``norm(x, v) == 1``.
    """
    x = to_rat(x)
    if x == 0:
        raise ValueError("zero has no finite support")
    primes = set(prime_factors(x.numerator)) if abs(x.numerator) > 1 else set()
    if x.denominator > 1:
        primes.update(prime_factors(x.denominator))
    return PlaceSet([INF, *(Place(p) for p in primes)])


def product_formula_check(x: RatLike) -> Fraction:
    x = to_rat(x)
    out = Fraction(1)
    for v in relevant_places(x):
        out *= norm(x, v)
    return out


def log_plus(a: Fraction) -> float:
    return math.log(max(Fraction(1), a))


def height_scalar(x: RatLike) -> float:
    """Absolute logarithmic height of a scalar, sum of log+ ||x||_v."""
    x = to_rat(x)
    if x == 0:
        return 0.0
    return sum(log_plus(norm(x, v)) for v in relevant_places(x))


def log_rat(a: Fraction) -> float:
    """Natural log of a positive rational without float overflow."""
    if a <= 0:
        raise ValueError("log of nonpositive rational")
    return math.log(a.numerator) - math.log(a.denominator)
