"""Exact integer/rational arithmetic and elementary number theory.

Rationals are :class:`fractions.Fraction`, which already keeps a positive,
reduced denominator and represents zero as ``0/1``.
"""

from __future__ import annotations

from contextlib import contextmanager
from contextvars import ContextVar
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt
from typing import Union

Rat = Fraction
RationalLike = Union[int, Fraction, str]

DEFAULT_FACTOR_BOUND = 10**6

_factor_bound: ContextVar[int] = ContextVar("factor_bound", default=DEFAULT_FACTOR_BOUND)


def current_factor_bound() -> int:
    return _factor_bound.get()


@contextmanager
def factor_bound(bound: int):
    """Temporarily change the trial-division bound used when none is passed."""
    if bound < 2:
        raise ValueError("factor bound must be >= 2")
    token = _factor_bound.set(bound)
    try:
        yield bound
    finally:
        _factor_bound.reset(token)

# deterministic for n < 3.3e24
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


class FactorBoundExceeded(ArithmeticError):
    """An unfactored composite cofactor remains after trial division."""

    kind = "factor_bound_exceeded"

    def __init__(self, n: int, cofactor: int, bound: int):
        super().__init__(
            f"cannot factor {n}: composite cofactor {cofactor} has no prime factor <= {bound}"
        )
        self.n = n
        self.cofactor = cofactor
        self.bound = bound


@dataclass(frozen=True)
class Factorization:
    sign: int
    factors: tuple[tuple[int, int], ...]

    def value(self) -> int:
        out = self.sign
        for p, e in self.factors:
            out *= p**e
        return out

    def primes(self) -> list[int]:
        return [p for p, _ in self.factors]


def to_rat(x: RationalLike) -> Fraction:
    """Parse ``"num/den"``, ``"n"``, ints and Fractions into a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        s = x.strip()
        if not s or any(c in s for c in ".eE"):
            raise ValueError(f"not an exact rational literal: {x!r}")
        return Fraction(s)
    raise TypeError(f"cannot interpret {type(x).__name__} as a rational")


def rat_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def is_probable_prime(n: int) -> bool:
    """Miller-Rabin with fixed bases; exact below 3.3e24."""
    if n < 2:
        return False
    for p in _MR_BASES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def is_prime(n: int) -> bool:
    return is_probable_prime(n)


def factor(n: int, bound: int | None = None) -> Factorization:
    """Factor ``n`` by trial division up to ``bound``.

    A leftover cofactor is accepted if it is prime; otherwise
    :class:`FactorBoundExceeded` is raised.
    """
    if n == 0:
        raise ValueError("cannot factor 0")
    if bound is None:
        bound = _factor_bound.get()
    sign = -1 if n < 0 else 1
    m = abs(n)
    factors: list[tuple[int, int]] = []

    def strip(p: int) -> None:
        nonlocal m
        e = 0
        while m % p == 0:
            m //= p
            e += 1
        if e:
            factors.append((p, e))

    strip(2)
    p = 3
    while p <= bound and p * p <= m:
        strip(p)
        p += 2
    if m > 1:
        if p * p > m or is_probable_prime(m):
            factors.append((m, 1))
        else:
            raise FactorBoundExceeded(n, m, bound)
    factors.sort()
    return Factorization(sign, tuple(factors))


def squarefree_part(r: RationalLike, bound: int | None = None) -> int:
    """The unique squarefree integer ``d`` with ``r = d * (rational)^2``."""
    r = to_rat(r)
    if r == 0:
        raise ValueError("squarefree part of zero")
    # num/den and num*den differ by the square den^2
    f = factor(r.numerator * r.denominator, bound)
    d = f.sign
    for p, e in f.factors:
        if e % 2:
            d *= p
    return d


def square_root_rat(r: Fraction) -> Fraction | None:
    """Exact rational square root, or None."""
    if r < 0:
        return None
    a, b = isqrt(r.numerator), isqrt(r.denominator)
    if a * a == r.numerator and b * b == r.denominator:
        return Fraction(a, b)
    return None


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a|p) for an odd prime p."""
    a %= p
    if a == 0:
        return 0
    return 1 if pow(a, (p - 1) // 2, p) == 1 else -1


def valuation(x: RationalLike, p: int) -> int:
    """p-adic valuation of a nonzero rational."""
    x = to_rat(x)
    if x == 0:
        raise ValueError("valuation of zero")
    v = 0
    n, d = x.numerator, x.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def unit_part(x: Fraction, p: int) -> Fraction:
    return x / Fraction(p) ** valuation(x, p)


def unit_mod(x: Fraction, m: int) -> int:
    """Residue of a rational whose denominator is prime to m."""
    return x.numerator * pow(x.denominator, -1, m) % m


def least_nonresidue(p: int) -> int:
    for n in range(2, p):
        if legendre(n, p) == -1:
            return n
    raise ValueError(f"{p} is not an odd prime")


def sqrt_mod(a: int, p: int) -> int | None:
    """A square root of a mod the odd prime p (Tonelli-Shanks), or None."""
    a %= p
    if a == 0:
        return 0
    if legendre(a, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = least_nonresidue(p)
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def lcm(*xs: int) -> int:
    out = 1
    for x in xs:
        out = out * x // gcd(out, x)
    return out
