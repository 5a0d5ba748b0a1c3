"""Diagonal quadratic forms: diagonalization, isotropy, represented values,
value groups, hyperbolic splitting and Pfister forms."""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction

from . import _kernels
from . import _linalg as la
from . import exactnum as en
from . import fields as fl
from .errors import (
    FactorBoundExceeded,
    NotIsotropic,
    NotIsotropicVector,
    SearchExhausted,
    SingularForm,
    UnsupportedField,
    ZeroElement,
)
from .fields import FieldDescriptor, SquareClass

log = logging.getLogger(__name__)

DEFAULT_SEARCH_BOUND = 1000
# kernel evaluations allowed per candidate subform
SEARCH_BUDGET = 2_000_000
MAX_SUBFORMS_PER_DIM = 12


@dataclass(frozen=True)
class DiagonalForm:
    field: FieldDescriptor
    coefficients: tuple

    def __init__(self, field: FieldDescriptor, coefficients):
        coeffs = tuple(field.elem(a) for a in coefficients)
        if not coeffs:
            raise ValueError("a diagonal form needs at least one coefficient")
        if any(not a for a in coeffs):
            raise ZeroElement("diagonal coefficients must be nonzero")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coefficients", coeffs)

    @property
    def dim(self) -> int:
        return len(self.coefficients)

    def __len__(self):
        return self.dim

    def __call__(self, v):
        s = self.field.zero()
        for a, x in zip(self.coefficients, v):
            s = s + a * x * x
        return s

    def bilinear(self, v, w):
        s = self.field.zero()
        for a, x, y in zip(self.coefficients, v, w):
            s = s + a * x * y
        return s

    def orth(self, other: "DiagonalForm") -> "DiagonalForm":
        return DiagonalForm(self.field, self.coefficients + other.coefficients)

    def scaled(self, c) -> "DiagonalForm":
        c = self.field.elem(c)
        return DiagonalForm(self.field, [c * a for a in self.coefficients])

    def gram(self) -> "GramMatrix":
        z = self.field.zero()
        n = self.dim
        return GramMatrix(
            self.field,
            [[self.coefficients[i] if i == j else z for j in range(n)] for i in range(n)],
        )

    def __repr__(self):
        return f"<{', '.join(str(a) for a in self.coefficients)}> over {self.field}"


@dataclass(frozen=True)
class GramMatrix:
    field: FieldDescriptor
    entries: tuple

    def __init__(self, field: FieldDescriptor, entries):
        rows = tuple(tuple(field.elem(x) for x in row) for row in entries)
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("Gram matrix must be square")
        for i in range(n):
            for j in range(i):
                if rows[i][j] != rows[j][i]:
                    raise ValueError("Gram matrix must be symmetric")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "entries", rows)

    @property
    def size(self) -> int:
        return len(self.entries)

    def rows(self):
        return [list(r) for r in self.entries]


@dataclass(frozen=True)
class ValueGroup:
    field: FieldDescriptor
    members: frozenset

    def __contains__(self, c):
        if not isinstance(c, SquareClass):
            c = fl.square_class(self.field, c)
        return c in self.members

    def __len__(self):
        return len(self.members)

    def reps(self) -> list[int]:
        return sorted(c.rep for c in self.members)


# -- diagonalization ----------------------------------------------------------


def diagonalize(g: GramMatrix):
    """Congruence diagonalization: returns ``(form, P)`` with ``P^T g P`` diagonal."""
    k = g.field
    zero, one = k.zero(), k.one()
    a = g.rows()
    n = len(a)
    p = la.identity(n, zero, one)

    def add_basis(i, j, f):
        # e_i <- e_i + f e_j
        for c in range(n):
            a[i][c] = a[i][c] + f * a[j][c]
        for r in range(n):
            a[r][i] = a[r][i] + f * a[r][j]
        for r in range(n):
            p[r][i] = p[r][i] + f * p[r][j]

    def swap(i, j):
        a[i], a[j] = a[j], a[i]
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in p:
            row[i], row[j] = row[j], row[i]

    for i in range(n):
        if not a[i][i]:
            j = next((j for j in range(i + 1, n) if a[j][j]), None)
            if j is not None:
                swap(i, j)
            else:
                j = next((j for j in range(i + 1, n) if a[i][j]), None)
                if j is None:
                    raise SingularForm("Gram matrix is singular")
                add_basis(i, j, one)
        piv = a[i][i]
        for j in range(i + 1, n):
            if a[j][i]:
                add_basis(j, i, zero - a[j][i] / piv)
    return DiagonalForm(k, [a[i][i] for i in range(n)]), p


# -- isotropy -----------------------------------------------------------------


def _padic_square(x, p: int) -> bool:
    return fl._canon(fl.PAdic(p), x).is_trivial


def local_isotropic(reps, place) -> bool:
    """Isotropy of the diagonal form with nonzero rational entries over Q_v."""
    n = len(reps)
    if n <= 1:
        return False
    if place == fl.REAL:
        return any(a > 0 for a in reps) and any(a < 0 for a in reps)
    p = place
    d = Fraction(1)
    for a in reps:
        d *= a
    if n == 2:
        return _padic_square(-d, p)
    if n >= 5:
        return True
    eps = 1
    for i in range(n):
        for j in range(i + 1, n):
            eps *= fl.hilbert_symbol(p, reps[i], reps[j])
    if n == 3:
        return fl.hilbert_symbol(p, -1, -d) == eps
    return (not _padic_square(d, p)) or eps == fl.hilbert_symbol(p, -1, -1)


def _rational_isotropic(coeffs, bound=None) -> bool:
    n = len(coeffs)
    if n <= 1:
        return False
    sf = [en.squarefree_part(a, bound) for a in coeffs]
    if n == 2:
        return en.squarefree_part(-sf[0] * sf[1], bound) == 1
    for place in fl.relevant_places(sf, bound):
        if not local_isotropic(sf, place):
            return False
    return True


def is_isotropic(q: DiagonalForm, factor_bound: int | None = None) -> bool:
    k = q.field
    a = q.coefficients
    n = q.dim
    if k.kind == fl.REALQUAD:
        raise UnsupportedField("isotropy over a real quadratic field is not decided")
    if n <= 1:
        return False
    if k.kind == fl.QBAR:
        return True
    if k.kind == fl.REALS:
        return local_isotropic(list(a), fl.REAL)
    if k.kind == fl.FP:
        if n >= 3:
            return True
        return fl.is_square(k, -(a[0] * a[1]))
    if k.kind == fl.PADIC:
        return local_isotropic(list(a), k.p)
    return _rational_isotropic(list(a), factor_bound)


def represents(q: DiagonalForm, c, factor_bound: int | None = None) -> bool:
    """Whether ``c`` is a nonzero value of ``q``."""
    c = q.field.elem(c)
    if not c:
        raise ZeroElement("represents() needs a nonzero value")
    if is_isotropic(q, factor_bound):
        return True
    return is_isotropic(q.orth(DiagonalForm(q.field, [-c])), factor_bound)


def _require_finite(k: FieldDescriptor):
    if not k.finite_square_classes:
        raise UnsupportedField(f"{k} has infinitely many square classes")


def represented_classes(q: DiagonalForm) -> frozenset:
    """D(q) as a set of square classes (finite-square-class fields only)."""
    _require_finite(q.field)
    return frozenset(c for c in fl.square_class_group(q.field) if represents(q, c.element()))


def subgroup_generated(k: FieldDescriptor, gens) -> frozenset:
    one = fl.SquareClass(k, 1)
    group = {one}
    frontier = set(gens) - group
    while frontier:
        group |= frontier
        frontier = {g * h for g in group for h in group} - group
    return frozenset(group)


def value_group(q: DiagonalForm) -> ValueGroup:
    """[D(q)]."""
    return ValueGroup(q.field, subgroup_generated(q.field, represented_classes(q)))


def value_group_squared(q: DiagonalForm) -> ValueGroup:
    """[D(q)^2]: generated by products of two represented values."""
    d = represented_classes(q)
    return ValueGroup(q.field, subgroup_generated(q.field, {x * y for x in d for y in d}))


# -- isotropic vectors --------------------------------------------------------


def _fp_isotropic_vector(q: DiagonalForm):
    k = q.field
    p = k.p
    a = [c.value for c in q.coefficients]
    v = [0] * q.dim
    if q.dim == 2:
        r = en.sqrt_mod(-a[1] * pow(a[0], -1, p), p)
        if r is None:
            raise NotIsotropic(f"{q} is anisotropic")
        v[0], v[1] = r, 1
    else:
        inv2 = pow(a[1], -1, p)
        for x in range(p):
            y = en.sqrt_mod((-a[2] - a[0] * x * x) * inv2, p)
            if y is not None:
                v[0], v[1], v[2] = x, y, 1
                break
    return [k.elem(t) for t in v]


def _squarefree_scaling(coeffs):
    """Write a_i = s_i * t_i^2 with s_i integral; falls back to clearing denominators."""
    try:
        s = [en.squarefree_part(a) for a in coeffs]
        t = [en.square_root_rat(Fraction(a) / si) for a, si in zip(coeffs, s)]
        return s, t
    except FactorBoundExceeded:
        den = en.lcm(*(Fraction(a).denominator for a in coeffs))
        return [int(a * den) for a in coeffs], [Fraction(1)] * len(coeffs)


def _iroot(n: int, e: int) -> int:
    r = 1
    while (r + 1) ** e <= n:
        r += 1
    return r


def _heights(bound: int, dim: int):
    cap = max(1, _iroot(SEARCH_BUDGET, max(dim - 1, 1)) // 2)
    top = min(bound, cap)
    h = 1
    while h < top:
        yield h
        h *= 4
    yield top


def rational_zero(int_coeffs, bound: int, need_last_nonzero: bool = False):
    """Integral zero of an integral diagonal form within the height budget, or None."""
    dim = len(int_coeffs)
    for h in _heights(bound, dim):
        v = _kernels.zero_search(int_coeffs, h, need_last_nonzero)
        if v is not None:
            return [abs(t) for t in v]
    return None


def find_isotropic_vector(q: DiagonalForm, bound: int = DEFAULT_SEARCH_BOUND):
    """A nonzero ``v`` with ``q(v) = 0``.

    Over F_p the search is exhaustive.  Otherwise rational vectors are searched
    on subforms that are isotropic over Q, with entries bounded by ``bound``
    (and by a per-subform work budget); a rational zero, when found, is a zero
    over every field containing Q.
    """
    k = q.field
    if not is_isotropic(q):
        raise NotIsotropic(f"{q} is anisotropic")
    if k.kind == fl.FP:
        return _fp_isotropic_vector(q)
    s, t = _squarefree_scaling(q.coefficients)
    n = q.dim
    tried_any = False
    for d in range(2, n + 1):
        tried = 0
        for idx in itertools.combinations(range(n), d):
            sub = [s[i] for i in idx]
            if not _rational_isotropic(sub):
                continue
            tried_any = True
            if d == 2:
                r = -Fraction(sub[1], sub[0])
                root = en.square_root_rat(r)
                y = [root, Fraction(1)]
            else:
                y = rational_zero(sub, bound)
                tried += 1
            if y is not None:
                v = [Fraction(0)] * n
                for i, yi in zip(idx, y):
                    v[i] = Fraction(yi) / t[i]
                g = en.lcm(*(x.denominator for x in v))
                return [k.elem(x * g) for x in v]
            if tried >= MAX_SUBFORMS_PER_DIM:
                break
    if not tried_any:
        log.debug("%s has no rational zero at all", q)
    raise SearchExhausted(bound)


def hyperbolic_split(q: DiagonalForm, v):
    """Basis change ``P`` with ``P^T A_q P = [[0,1],[1,0]] + diagonal block``.

    The first two columns are the hyperbolic pair built from ``v``.
    """
    k = q.field
    zero, one = k.zero(), k.one()
    v = [k.elem(x) for x in v]
    n = q.dim
    if len(v) != n or all(not x for x in v) or q(v):
        raise NotIsotropicVector("v must be a nonzero zero of q")
    j = next(i for i in range(n) if v[i])
    w = [zero] * n
    w[j] = one
    w = [x / q.bilinear(v, w) for x in w]
    half = q(w) / 2
    w = [x - half * y for x, y in zip(w, v)]
    basis = [v, w]
    # complete with standard vectors projected to the orthogonal complement
    for i in range(n):
        if len(basis) == n:
            break
        e = [one if r == i else zero for r in range(n)]
        bw, bv = q.bilinear(e, w), q.bilinear(e, v)
        x = [ei - bw * vi - bv * wi for ei, vi, wi in zip(e, v, w)]
        if la.rank(basis + [x]) == len(basis) + 1:
            basis.append(x)
    comp = basis[2:]
    if comp:
        g = [[q.bilinear(x, y) for y in comp] for x in comp]
        _, pc = diagonalize(GramMatrix(k, g))
        comp = la.transpose(la.matmul(la.transpose(comp), pc, zero))
    return la.transpose([v, w] + comp)


# -- Pfister forms --------------------------------------------------------------


def pfister_expand(k: FieldDescriptor, b) -> DiagonalForm:
    """The form prod_i <1, -b_i> with coefficients prod_{i in S} (-b_i)."""
    b = [k.elem(x) for x in b]
    if any(not x for x in b):
        raise ZeroElement("Pfister slots must be nonzero")
    coeffs = [k.one()]
    for x in b:
        coeffs = coeffs + [c * -x for c in coeffs]
    return DiagonalForm(k, coeffs)


def dim3_neighbor_pfister(k: FieldDescriptor, a1, a2, a3) -> DiagonalForm:
    """<1, a1a2, a1a3, a2a3>, the 2-fold Pfister form containing a1*<a1,a2,a3>."""
    a1, a2, a3 = k.elem(a1), k.elem(a2), k.elem(a3)
    return DiagonalForm(k, [k.one(), a1 * a2, a1 * a3, a2 * a3])


def sum_of_squares(k: FieldDescriptor, m: int) -> DiagonalForm:
    return DiagonalForm(k, [1] * m)
