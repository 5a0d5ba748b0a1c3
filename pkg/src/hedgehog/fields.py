"""Field descriptors, field elements, square classes, Hilbert symbols, level.

Elements of the reals, p-adics and a quadratically closed field are rational
literals read inside that field; they are plain ``Fraction`` objects.  Elements
of a prime field are :class:`ModP`, elements of a real quadratic field are
:class:`QuadElem`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Union

from . import exactnum as en
from .errors import NotInField, UnsupportedField, ZeroElement

RATIONALS = "rationals"
REALS = "reals"
QBAR = "qbar"
FP = "fp"
PADIC = "padic"
REALQUAD = "realquad"

KINDS = (RATIONALS, REALS, QBAR, FP, PADIC, REALQUAD)

# place marker for hilbert_symbol
REAL = "real"

INFINITE = float("inf")


@dataclass(frozen=True)
class FieldDescriptor:
    kind: str
    p: int | None = None
    d: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown field kind {self.kind!r}")
        if self.kind == FP:
            if self.p is None or self.p == 2 or not en.is_prime(self.p):
                raise ValueError("FinitePrime needs an odd prime p")
        elif self.kind == PADIC:
            if self.p is None or not en.is_prime(self.p):
                raise ValueError("PAdic needs a prime p")
        elif self.kind == REALQUAD:
            if self.d is None or self.d <= 1 or en.squarefree_part(self.d) != self.d:
                raise ValueError("RealQuadratic needs a squarefree d > 1")

    # -- construction / IO --------------------------------------------------

    def to_json(self) -> dict:
        out: dict = {"kind": self.kind}
        if self.p is not None:
            out["p"] = self.p
        if self.d is not None:
            out["d"] = self.d
        return out

    @classmethod
    def from_json(cls, obj: dict) -> "FieldDescriptor":
        kind = obj["kind"]
        if kind in (FP, PADIC):
            return cls(kind, p=int(obj["p"]))
        if kind == REALQUAD:
            return cls(kind, d=int(obj["d"]))
        return cls(kind)

    def __str__(self) -> str:
        if self.kind == FP:
            return f"F_{self.p}"
        if self.kind == PADIC:
            return f"Q_{self.p}"
        if self.kind == REALQUAD:
            return f"Q(sqrt({self.d}))"
        return {RATIONALS: "Q", REALS: "R", QBAR: "Qbar"}[self.kind]

    @property
    def finite_square_classes(self) -> bool:
        return self.kind in (REALS, QBAR, FP, PADIC)

    # -- elements -----------------------------------------------------------

    def elem(self, x) -> "FieldElem":
        """Coerce a literal (int, Fraction, "num/den", or pair for realquad)."""
        if self.kind == FP:
            if isinstance(x, ModP):
                if x.p != self.p:
                    raise NotInField(f"{x!r} is not in {self}")
                return x
            r = en.to_rat(x)
            if r.denominator % self.p == 0:
                raise NotInField(f"{x} has denominator divisible by {self.p}")
            return ModP(en.unit_mod(r, self.p), self.p)
        if self.kind == REALQUAD:
            if isinstance(x, QuadElem):
                if x.d != self.d:
                    raise NotInField(f"{x!r} is not in {self}")
                return x
            if isinstance(x, (list, tuple)):
                u, v = x
                return QuadElem(en.to_rat(u), en.to_rat(v), self.d)
            return QuadElem(en.to_rat(x), Fraction(0), self.d)
        if isinstance(x, (ModP, QuadElem)):
            raise NotInField(f"{x!r} is not in {self}")
        return en.to_rat(x)

    def zero(self):
        return self.elem(0)

    def one(self):
        return self.elem(1)

    def elem_json(self, x):
        if self.kind == REALQUAD:
            x = self.elem(x)
            return [en.rat_str(x.u), en.rat_str(x.v)]
        if self.kind == FP:
            return str(self.elem(x).value)
        return en.rat_str(self.elem(x))


def Rationals() -> FieldDescriptor:
    return FieldDescriptor(RATIONALS)


def Reals() -> FieldDescriptor:
    return FieldDescriptor(REALS)


def QuadraticallyClosed() -> FieldDescriptor:
    return FieldDescriptor(QBAR)


def FinitePrime(p: int) -> FieldDescriptor:
    return FieldDescriptor(FP, p=p)


def PAdic(p: int) -> FieldDescriptor:
    return FieldDescriptor(PADIC, p=p)


def RealQuadratic(d: int) -> FieldDescriptor:
    return FieldDescriptor(REALQUAD, d=d)


class ModP:
    """Residue class modulo an odd prime."""

    __slots__ = ("value", "p")

    def __init__(self, value: int, p: int):
        self.value = value % p
        self.p = p

    def _coerce(self, other):
        if isinstance(other, ModP):
            if other.p != self.p:
                raise NotInField("mixing residues of different primes")
            return other.value
        if isinstance(other, int):
            return other
        if isinstance(other, Fraction):
            return en.unit_mod(other, self.p)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else ModP(self.value + o, self.p)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else ModP(self.value - o, self.p)

    def __rsub__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else ModP(o - self.value, self.p)

    def __mul__(self, other):
        o = self._coerce(other)
        return NotImplemented if o is NotImplemented else ModP(self.value * o, self.p)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if o % self.p == 0:
            raise ZeroDivisionError("division by zero in F_p")
        return ModP(self.value * pow(o, -1, self.p), self.p)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.value == 0:
            raise ZeroDivisionError("division by zero in F_p")
        return ModP(o * pow(self.value, -1, self.p), self.p)

    def __neg__(self):
        return ModP(-self.value, self.p)

    def __pos__(self):
        return self

    def __pow__(self, e: int):
        return ModP(pow(self.value, e, self.p), self.p)

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return (self.value - o) % self.p == 0

    def __hash__(self):
        return hash((self.value, self.p))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return f"ModP({self.value}, {self.p})"

    def __str__(self):
        return str(self.value)


class QuadElem:
    """u + v*sqrt(d) with rational u, v."""

    __slots__ = ("u", "v", "d")

    def __init__(self, u, v, d: int):
        self.u = Fraction(u)
        self.v = Fraction(v)
        self.d = d

    def _coerce(self, other):
        if isinstance(other, QuadElem):
            if other.d != self.d:
                raise NotInField("mixing different quadratic fields")
            return other
        if isinstance(other, (int, Fraction)):
            return QuadElem(other, 0, self.d)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadElem(self.u + o.u, self.v + o.v, self.d)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadElem(self.u - o.u, self.v - o.v, self.d)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o - self

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return QuadElem(
            self.u * o.u + self.d * self.v * o.v, self.u * o.v + self.v * o.u, self.d
        )

    __rmul__ = __mul__

    def norm(self) -> Fraction:
        return self.u * self.u - self.d * self.v * self.v

    def conjugate(self) -> "QuadElem":
        return QuadElem(self.u, -self.v, self.d)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError("division by zero in real quadratic field")
        c = self * o.conjugate()
        return QuadElem(c.u / n, c.v / n, self.d)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o / self

    def __neg__(self):
        return QuadElem(-self.u, -self.v, self.d)

    def __pos__(self):
        return self

    def __pow__(self, e: int):
        out = QuadElem(1, 0, self.d)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return self.u == o.u and self.v == o.v

    def __hash__(self):
        return hash((self.u, self.v, self.d))

    def __bool__(self):
        return bool(self.u) or bool(self.v)

    def embedding_sign(self, conj: int) -> int:
        """Sign of u + conj*v*sqrt(d) in R, decided exactly."""
        u, v = self.u, conj * self.v
        if u >= 0 and v >= 0:
            return 0 if (u == 0 and v == 0) else 1
        if u <= 0 and v <= 0:
            return -1
        # opposite signs: compare u^2 with d v^2
        if u * u > self.d * v * v:
            return 1 if u > 0 else -1
        return 1 if v > 0 else -1

    def __repr__(self):
        return f"QuadElem({self.u}, {self.v}, d={self.d})"

    def __str__(self):
        return f"{self.u}+{self.v}*sqrt({self.d})"


FieldElem = Union[Fraction, ModP, QuadElem]


def is_zero(x) -> bool:
    return not x


# -- square classes -----------------------------------------------------------


@dataclass(frozen=True)
class SquareClass:
    field: FieldDescriptor
    rep: int

    def __mul__(self, other: "SquareClass") -> "SquareClass":
        if other.field != self.field:
            raise ValueError("square classes over different fields")
        return _canon(self.field, self.rep * other.rep)

    @property
    def is_trivial(self) -> bool:
        return self.rep == 1

    def element(self):
        return self.field.elem(self.rep)

    def __repr__(self):
        return f"[{self.rep}]"


@lru_cache(maxsize=None)
def _nonresidue(p: int) -> int:
    return en.least_nonresidue(p)


_Q2_UNITS = {1: 1, 3: -5, 5: 5, 7: -1}


def _canon(k: FieldDescriptor, x) -> SquareClass:
    kind = k.kind
    if kind == RATIONALS:
        return SquareClass(k, en.squarefree_part(x))
    if kind == REALS:
        return SquareClass(k, 1 if x > 0 else -1)
    if kind == QBAR:
        return SquareClass(k, 1)
    if kind == FP:
        v = x.value if isinstance(x, ModP) else en.unit_mod(Fraction(x), k.p)
        return SquareClass(k, 1 if en.legendre(v, k.p) == 1 else _nonresidue(k.p))
    if kind == PADIC:
        p = k.p
        x = Fraction(x)
        v = en.valuation(x, p)
        u = en.unit_part(x, p)
        if p == 2:
            rep = _Q2_UNITS[en.unit_mod(u, 8)]
        else:
            rep = 1 if en.legendre(en.unit_mod(u, p), p) == 1 else _nonresidue(p)
        return SquareClass(k, rep * (p if v % 2 else 1))
    raise UnsupportedField(f"square classes are not canonicalized over {k}")


def square_class(k: FieldDescriptor, x) -> SquareClass:
    x = k.elem(x)
    if not x:
        raise ZeroElement("square class of zero")
    return _canon(k, x)


def square_class_group(k: FieldDescriptor):
    """All square classes of ``k`` or ``INFINITE`` when there are infinitely many."""
    if k.kind in (RATIONALS, REALQUAD):
        return INFINITE
    if k.kind == REALS:
        reps = [1, -1]
    elif k.kind == QBAR:
        reps = [1]
    elif k.kind == FP:
        reps = [1, _nonresidue(k.p)]
    elif k.p == 2:
        reps = [1, -1, 5, -5, 2, -2, 10, -10]
    else:
        u = _nonresidue(k.p)
        reps = [1, u, k.p, u * k.p]
    return [SquareClass(k, r) for r in reps]


def is_square(k: FieldDescriptor, x) -> bool:
    return square_class(k, x).is_trivial


# -- Hilbert symbols ----------------------------------------------------------


def hilbert_symbol(place, a, b) -> int:
    """(a, b)_v for nonzero rationals at a prime ``place`` or at ``REAL``."""
    a, b = en.to_rat(a), en.to_rat(b)
    if a == 0 or b == 0:
        raise ZeroElement("Hilbert symbol of zero")
    if place == REAL:
        return -1 if (a < 0 and b < 0) else 1
    p = place
    alpha, beta = en.valuation(a, p), en.valuation(b, p)
    u, v = en.unit_part(a, p), en.unit_part(b, p)
    if p == 2:
        u8, v8 = en.unit_mod(u, 8), en.unit_mod(v, 8)

        def eps(t):
            return ((t - 1) // 2) % 2

        def omega(t):
            return ((t * t - 1) // 8) % 2

        e = eps(u8) * eps(v8) + alpha * omega(v8) + beta * omega(u8)
        return -1 if e % 2 else 1
    up, vp = en.unit_mod(u, p), en.unit_mod(v, p)
    s = -1 if (alpha * beta * ((p - 1) // 2)) % 2 else 1
    if beta % 2:
        s *= en.legendre(up, p)
    if alpha % 2:
        s *= en.legendre(vp, p)
    return s


def relevant_places(values, bound: int | None = None) -> list:
    """REAL plus the primes dividing 2 and the numerators/denominators given."""
    primes = {2}
    for x in values:
        x = en.to_rat(x)
        for n in (x.numerator, x.denominator):
            if abs(n) > 1:
                primes.update(en.factor(n, bound).primes())
    return [REAL] + sorted(primes)


# -- level ----------------------------------------------------------------------


def level(k: FieldDescriptor):
    """Least number of squares summing to -1, or ``INFINITE``."""
    if k.kind == QBAR:
        return 1
    if k.kind in (FP, PADIC) and k.p != 2:
        return 1 if k.p % 4 == 1 else 2
    if k.kind == PADIC:
        return 4
    return INFINITE
