"""Grothendieck-Witt ring arithmetic.

Elements are formal differences of diagonal forms.  Nothing is normalised:
equality is decided through the classical complete invariants (rank,
discriminant, Hasse invariants, signatures).

Hasse invariant convention: c(<a_1..a_n>) = prod_{i<j} (a_i, a_j)_v, extended
to virtual elements through c(phi + <1,-1>) = c(phi) * (det phi, -1)_v.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from . import fields as fl
from . import quadform as qf
from .errors import (
    FieldMismatch,
    NonSquarefreeExtension,
    OddDimension,
    UnsupportedField,
    ZeroElement,
)
from .fields import FieldDescriptor, SquareClass

TRACE = "trace"
S_ONE = "s_one"


# -- quadratic extensions -----------------------------------------------------


@dataclass(frozen=True)
class QuadExtension:
    """k(sqrt(alpha)) with a k-linear functional used for transfers.

    ``TRACE`` is the field trace u + v sqrt(alpha) -> 2u, ``S_ONE`` is
    u + v sqrt(alpha) -> v.
    """

    base: FieldDescriptor
    alpha: object
    functional: str = TRACE

    def __post_init__(self):
        k = self.base
        a = k.elem(self.alpha)
        object.__setattr__(self, "alpha", a)
        if self.functional not in (TRACE, S_ONE):
            raise ValueError(f"unknown functional {self.functional!r}")
        if not a:
            raise ZeroElement("alpha must be nonzero")
        if k.kind == fl.REALQUAD:
            raise UnsupportedField("transfers over a real quadratic base are not supported")
        if k.kind == fl.QBAR or fl.square_class(k, a).is_trivial:
            raise NonSquarefreeExtension(f"{a} is a square in {k}")

    def elem(self, x):
        """Coerce ``x`` (pair ``(u, v)`` or base literal) to a pair of base elements."""
        k = self.base
        if isinstance(x, (tuple, list)):
            u, v = x
            return (k.elem(u), k.elem(v))
        return (k.elem(x), k.zero())

    def zero(self):
        return (self.base.zero(), self.base.zero())

    def mul(self, x, y):
        a = self.alpha
        return (x[0] * y[0] + a * x[1] * y[1], x[0] * y[1] + x[1] * y[0])

    def f(self, x):
        return x[0] * 2 if self.functional == TRACE else x[1]

    def sqrt_alpha(self):
        return (self.base.zero(), self.base.one())

    def with_functional(self, functional: str) -> "QuadExtension":
        return QuadExtension(self.base, self.alpha, functional)

    def __str__(self):
        return f"{self.base}(sqrt({self.alpha}))"


# -- elements -----------------------------------------------------------------


@dataclass(frozen=True)
class GWElem:
    field: object
    plus: tuple = ()
    minus: tuple = ()

    def __init__(self, field, plus=(), minus=()):
        plus = tuple(field.elem(a) for a in plus)
        minus = tuple(field.elem(a) for a in minus)
        if any(not a for a in plus + minus):
            raise ZeroElement("generators <a> need a != 0")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "plus", plus)
        object.__setattr__(self, "minus", minus)

    @classmethod
    def form(cls, k, coeffs) -> "GWElem":
        return cls(k, coeffs)

    @classmethod
    def hyperbolic(cls, k, m: int = 1) -> "GWElem":
        return cls(k, [1, -1] * m)

    @property
    def rank(self) -> int:
        return len(self.plus) - len(self.minus)

    def _check(self, other):
        if not isinstance(other, GWElem):
            return NotImplemented
        if other.field != self.field:
            raise FieldMismatch(f"{self.field} vs {other.field}")
        return other

    def __add__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return GWElem(self.field, self.plus + o.plus, self.minus + o.minus)

    def __neg__(self):
        return GWElem(self.field, self.minus, self.plus)

    def __sub__(self, other):
        o = self._check(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __mul__(self, other):
        if isinstance(other, int):
            if other < 0:
                return (-self) * (-other)
            return GWElem(self.field, self.plus * other, self.minus * other)
        o = self._check(other)
        if o is NotImplemented:
            return o
        mul = self.field.mul if isinstance(self.field, QuadExtension) else (lambda a, b: a * b)
        pp = [mul(a, b) for a in self.plus for b in o.plus]
        mm = [mul(a, b) for a in self.minus for b in o.minus]
        pm = [mul(a, b) for a in self.plus for b in o.minus]
        mp = [mul(a, b) for a in self.minus for b in o.plus]
        return GWElem(self.field, pp + mm, pm + mp)

    __rmul__ = __mul__

    def scaled(self, c) -> "GWElem":
        """<c> * self."""
        return GWElem(self.field, [c]) * self

    def to_json(self) -> dict:
        k = self.field
        return {"plus": [k.elem_json(a) for a in self.plus], "minus": [k.elem_json(a) for a in self.minus]}

    @classmethod
    def from_json(cls, k, obj) -> "GWElem":
        return cls(k, obj.get("plus", []), obj.get("minus", []))

    def __repr__(self):
        s = "<" + ", ".join(map(str, self.plus)) + ">"
        if self.minus:
            s += " - <" + ", ".join(map(str, self.minus)) + ">"
        return s


def gw_add(x: GWElem, y: GWElem) -> GWElem:
    return x + y


def gw_sub(x: GWElem, y: GWElem) -> GWElem:
    return x - y


def gw_mul(x: GWElem, y: GWElem) -> GWElem:
    return x * y


# -- invariants ---------------------------------------------------------------


@dataclass(frozen=True)
class GWInvariants:
    rank: int
    disc: SquareClass | None = None
    signed_disc: SquareClass | None = None
    hasse: dict = field(default_factory=dict)
    signature: object = None

    def to_json(self) -> dict:
        out: dict = {"rank": self.rank}
        if self.disc is not None:
            out["disc"] = self.disc.rep
            out["signed_disc"] = self.signed_disc.rep
        if self.hasse:
            out["hasse"] = {str(k): v for k, v in self.hasse.items()}
        if self.signature is not None:
            out["signature"] = self.signature
        return out


def _class_rep(k, a) -> int:
    """Small rational representative of the square class (for Hilbert symbols)."""
    if k.kind in (fl.RATIONALS, fl.PADIC, fl.REALS):
        return fl.square_class(k, a).rep
    return 1


def _places_for(x: GWElem, extra=()) -> list:
    k = x.field
    if k.kind == fl.PADIC:
        return [k.p]
    if k.kind == fl.RATIONALS:
        reps = [fl.square_class(k, a).rep for a in x.plus + x.minus] + list(extra)
        return fl.relevant_places(reps)
    if k.kind == fl.REALS:
        return [fl.REAL]
    return []


def _signature(x: GWElem):
    k = x.field
    if k.kind == fl.REALS or k.kind == fl.RATIONALS:
        def sgn(a):
            return 1 if a > 0 else -1
        return sum(sgn(a) for a in x.plus) - sum(sgn(a) for a in x.minus)
    if k.kind == fl.REALQUAD:
        return tuple(
            sum(a.embedding_sign(c) for a in x.plus) - sum(a.embedding_sign(c) for a in x.minus)
            for c in (1, -1)
        )
    return None


def invariants_of(x: GWElem, places=None) -> GWInvariants:
    k = x.field
    if not isinstance(k, FieldDescriptor):
        raise UnsupportedField("invariants are computed over base fields only")
    r = x.rank
    if k.kind == fl.REALQUAD:
        return GWInvariants(rank=r, signature=_signature(x))
    if k.kind == fl.QBAR:
        one = SquareClass(k, 1)
        return GWInvariants(rank=r, disc=one, signed_disc=one)
    # honest form F = plus + <-b : b in minus>, and x = F - m<1,-1>
    honest = [_class_rep(k, a) for a in x.plus] + [-_class_rep(k, b) for b in x.minus]
    m = len(x.minus)
    if places is None:
        places = _places_for(x)
    hasse = {}
    for v in places:
        c, dv = 1, 1
        for a in honest:
            c *= fl.hilbert_symbol(v, dv, a)
            dv *= a
        for _ in range(m):
            # undo one hyperbolic plane: c(phi) = c(phi + H) * (-det(phi + H), -1)
            c *= fl.hilbert_symbol(v, -dv, -1)
            dv = -dv
        hasse[v] = c
    # hyperbolic planes have det -1, so det(x) is the product of all generators
    d = k.one()
    for a in x.plus + x.minus:
        d = d * a
    disc = fl.square_class(k, d)
    signed = disc * fl.square_class(k, -1) if (r * (r - 1) // 2) % 2 else disc
    return GWInvariants(rank=r, disc=disc, signed_disc=signed, hasse=hasse, signature=_signature(x))


def signed_discriminant(x: GWElem) -> SquareClass:
    return invariants_of(x).signed_disc


def gw_equal(x: GWElem, y: GWElem) -> bool:
    """Equality in GW(k) through complete invariants."""
    if x.field != y.field:
        raise FieldMismatch(f"{x.field} vs {y.field}")
    k = x.field
    if not isinstance(k, FieldDescriptor) or k.kind == fl.REALQUAD:
        raise UnsupportedField(f"equality in GW({k}) is not decided")
    if x.rank != y.rank:
        return False
    if k.kind == fl.QBAR:
        return True
    places = None
    if k.kind == fl.RATIONALS:
        places = sorted(set(_places_for(x)) | set(_places_for(y)), key=lambda v: -1 if v == fl.REAL else v)
    ix, iy = invariants_of(x, places), invariants_of(y, places)
    if k.kind == fl.REALS:
        return ix.signature == iy.signature
    if k.kind == fl.FP:
        return ix.disc == iy.disc
    same = ix.disc == iy.disc and ix.hasse == iy.hasse
    if k.kind == fl.RATIONALS:
        same = same and ix.signature == iy.signature
    return same


# -- transfers ----------------------------------------------------------------


def _transfer_generator(ext: QuadExtension, beta) -> list:
    k = ext.base
    s = ext.sqrt_alpha()
    b_s = ext.mul(beta, s)
    b_a = ext.mul(b_s, s)
    g = [[ext.f(beta), ext.f(b_s)], [ext.f(b_s), ext.f(b_a)]]
    form, _ = qf.diagonalize(qf.GramMatrix(k, g))
    return list(form.coefficients)


def scharlau_transfer(ext: QuadExtension, x: GWElem) -> GWElem:
    """s_*: GW(k(sqrt(alpha))) -> GW(k), <beta> |-> (x |-> s(beta x^2))."""
    if x.field != ext:
        x = GWElem(ext, x.plus, x.minus)
    plus, minus = [], []
    for b in x.plus:
        plus += _transfer_generator(ext, b)
    for b in x.minus:
        minus += _transfer_generator(ext, b)
    return GWElem(ext.base, plus, minus)


def transfer_s_one(ext: QuadExtension, x: GWElem) -> GWElem:
    return scharlau_transfer(ext.with_functional(S_ONE), x)


@dataclass(frozen=True)
class TransferBound:
    transfer: GWElem
    even_part: GWElem
    corrected: GWElem


def transfer_subgroup_bound(ext: QuadExtension, probes) -> list[TransferBound]:
    """For each probe phi: s_*(phi), the even-rank element phi + <gamma> (or phi
    itself when already even) and s_*(phi + <gamma>) - <1,-1>, where gamma is
    chosen with s_*(<gamma>) = <1,-1> for the extension's functional."""
    gamma = ext.elem(1) if ext.functional == S_ONE else ext.sqrt_alpha()
    hyper = GWElem.hyperbolic(ext.base)
    out = []
    for phi in probes:
        if phi.field != ext:
            phi = GWElem(ext, phi.plus, phi.minus)
        t = scharlau_transfer(ext, phi)
        padded = phi + GWElem(ext, [gamma])
        even = padded if phi.rank % 2 else phi
        out.append(TransferBound(t, even, scharlau_transfer(ext, padded) - hyper))
    return out


# -- Euler characteristic -----------------------------------------------------


def euler_characteristic(k: FieldDescriptor, n: int, a) -> GWElem:
    """n/2 <1,-1> + <2, 2 prod a_i> for even n > 0."""
    if n <= 0 or n % 2:
        raise OddDimension("the closed formula is used for even n > 0 only")
    a = [k.elem(x) for x in a]
    if len(a) != n + 1:
        raise ValueError(f"expected {n + 1} coefficients")
    prod = k.one()
    for x in a:
        prod = prod * x
    return GWElem.hyperbolic(k, n // 2) + GWElem(k, [2, 2 * prod])


# -- Witt ring models ---------------------------------------------------------


@dataclass(frozen=True)
class WittClass:
    field: FieldDescriptor
    coefficients: tuple

    @property
    def dim(self) -> int:
        return len(self.coefficients)

    def as_gw(self) -> GWElem:
        return GWElem(self.field, self.coefficients)

    def form(self):
        return qf.DiagonalForm(self.field, self.coefficients) if self.coefficients else None

    def __repr__(self):
        return "W<" + ", ".join(map(str, self.coefficients)) + ">"


def _require_local(k):
    if not isinstance(k, FieldDescriptor) or k.kind not in (fl.FP, fl.PADIC):
        raise UnsupportedField(f"finite Witt model not available over {k}")


class WittModel:
    """W(k) for a finite or p-adic field, keyed by (rank parity, disc, hasse)."""

    _cache: dict = {}

    def __new__(cls, k: FieldDescriptor):
        _require_local(k)
        if k not in cls._cache:
            obj = super().__new__(cls)
            obj._build(k)
            cls._cache[k] = obj
        return cls._cache[k]

    def _build(self, k):
        self.field = k
        self.classes = fl.square_class_group(k)
        reps = [c.element() for c in self.classes]
        self.table: dict = {}
        max_dim = 2 if k.kind == fl.FP else 4
        for dim in range(max_dim + 1):
            for combo in itertools.combinations_with_replacement(reps, dim):
                if dim >= 2 and qf.is_isotropic(qf.DiagonalForm(k, combo)):
                    continue
                key = self.key(GWElem(k, combo))
                self.table.setdefault(key, WittClass(k, tuple(combo)))

    @property
    def order(self) -> int:
        return len(self.table)

    def key(self, x: GWElem):
        k = self.field
        r = x.rank
        t = (r - r % 2) // 2
        if t > 0:
            x = GWElem(k, x.plus, x.minus + (1, -1) * t)
        elif t < 0:
            x = GWElem(k, x.plus + (1, -1) * (-t), x.minus)
        inv = invariants_of(x)
        return (r % 2, inv.disc.rep, tuple(sorted(inv.hasse.items())))

    def reduce(self, x: GWElem) -> WittClass:
        return self.table[self.key(x)]

    def add(self, w1, w2):
        return self.key(self.table[w1].as_gw() + self.table[w2].as_gw())

    def neg(self, w):
        return self.key(self.table[w].as_gw().scaled(-1))

    def mul_int(self, q: int, w):
        q %= 8  # the exponent of W(k) divides 8 for every supported field
        out = self.zero_key()
        for _ in range(q):
            out = self.add(out, w)
        return out

    def zero_key(self):
        return self.key(GWElem(self.field))


def witt_reduce(x: GWElem) -> WittClass:
    """The anisotropic representative of the Witt class of ``x``."""
    return WittModel(x.field).reduce(x)


@dataclass
class IdealSummary:
    field: FieldDescriptor
    rank_gcd: int
    lift: object
    kernel: frozenset
    iterations: int
    additive_generators: int
    witt_order: int

    def contains(self, x: GWElem) -> bool:
        model = WittModel(self.field)
        r, w = x.rank, model.key(x)
        if self.rank_gcd == 0:
            return r == 0 and w in self.kernel
        if r % self.rank_gcd:
            return False
        shift = model.mul_int(r // self.rank_gcd, self.lift)
        return model.add(w, model.neg(shift)) in self.kernel


def ideal_summary(generators, k: FieldDescriptor | None = None) -> IdealSummary:
    """Structure of the ideal generated by ``generators`` inside Z x W(k).

    The ideal is additively spanned by <u> g for square classes u.  A Euclidean
    reduction on ranks leaves one generator (g, w0) of positive rank plus
    rank-zero elements, whose span in the finite group W(k) is closed by a
    monotone fixed point.
    """
    generators = list(generators)
    if k is None:
        if not generators:
            raise ValueError("need a field when there are no generators")
        k = generators[0].field
    model = WittModel(k)
    for g in generators:
        if g.field != k:
            raise FieldMismatch(f"{g.field} vs {k}")

    def sub(a, b, q):
        return (a[0] - q * b[0], model.add(a[1], model.neg(model.mul_int(q, b[1]))))

    pivot = None
    kernel_gens = set()
    additive = [(g.scaled(c.element()).rank, model.key(g.scaled(c.element())))
                for g in generators for c in model.classes]
    for cur in additive:
        if cur[0] == 0:
            kernel_gens.add(cur[1])
            continue
        if pivot is None:
            pivot = cur if cur[0] > 0 else (-cur[0], model.neg(cur[1]))
            continue
        a, b = pivot, cur
        while b[0] != 0:
            q = a[0] // b[0]
            a, b = b, sub(a, b, q)
        kernel_gens.add(b[1])
        pivot = a if a[0] > 0 else (-a[0], model.neg(a[1]))

    zero = model.zero_key()
    kernel = {zero}
    frontier = set(kernel_gens) - kernel
    iterations = 0
    while frontier:
        iterations += 1
        kernel |= frontier
        frontier = {model.add(x, y) for x in kernel for y in kernel} - kernel
    bound = model.order * len(model.classes) * max(len(generators), 1)
    assert iterations <= bound, (iterations, bound)
    return IdealSummary(
        field=k,
        rank_gcd=pivot[0] if pivot else 0,
        lift=pivot[1] if pivot else zero,
        kernel=frozenset(kernel),
        iterations=iterations,
        additive_generators=len(additive),
        witt_order=model.order,
    )


def ideal_membership(target: GWElem, generators, summary: IdealSummary | None = None) -> bool:
    """Whether ``target`` lies in the ideal of GW(k) generated by ``generators``."""
    _require_local(target.field)
    if summary is None:
        summary = ideal_summary(generators, target.field)
    return summary.contains(target)


def quotient_by_even_ideal(generators, k: FieldDescriptor | None = None) -> dict:
    """Compare the generated ideal with GI(k), the even-rank elements.

    Reports ``{"iso": "Z/2", "via": "rank mod 2"}`` when they coincide,
    otherwise a summary of the reachable set.
    """
    generators = list(generators)
    if k is None:
        k = generators[0].field if generators else None
    if k is None:
        raise ValueError("need a field when there are no generators")
    _require_local(k)
    summary = ideal_summary(generators, k)
    model = WittModel(k)
    inside = all(g.rank % 2 == 0 for g in generators)
    reps = [c.element() for c in model.classes]
    probes = [GWElem(k, [a, b]) for a, b in itertools.combinations_with_replacement(reps, 2)]
    missing = [p for p in probes if not summary.contains(p)]
    if inside and not missing:
        return {"iso": "Z/2", "via": "rank mod 2", "witt_order": model.order}
    even_witt = sum(1 for key in model.table if key[0] == 0)
    return {
        "iso": "summary",
        "rank_gcd": summary.rank_gcd,
        "witt_kernel_size": len(summary.kernel),
        "even_witt_classes": even_witt,
        "contained_in_even_ideal": inside,
        "binary_forms_missing": [p.to_json() for p in missing],
    }
