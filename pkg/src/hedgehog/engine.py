"""Decision engine for non-vanishing tangent vector fields on
Q°: a_1 x_1^2 + ... + a_{n+1} x_{n+1}^2 = 1, with explicit section
certificates wherever a construction exists.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from . import _kernels
from . import _linalg as la
from . import exactnum as en
from . import fields as fl
from . import quadform as qf
from .errors import (
    DegenerateChoice,
    DegreeTooHigh,
    FactorBoundExceeded,
    HedgehogError,
    InvalidCertificate,
    NoOrthogonalVector,
    NonSquarefreeExtension,
    NotIsotropic,
    OddCaseOnly,
    SearchExhausted,
    SplitExtension,
    UnsupportedField,
)
from .fields import FieldDescriptor
from .gwring import QuadExtension

SECTION_EXISTS = "SectionExists"
NO_SECTION = "NoSection"
UNKNOWN = "Unknown"

YES, NO = "yes", "no"

# citation tags
ODD_PAIRING = "odd-rank-pairing-section"
ISOTROPIC_SPLIT = "isotropic-hyperbolic-section"
SPHERE_LEVEL = "sphere-level-criterion"
POINT_CD2 = "rational-point-cohomological-dimension-2"
POINT_VALUE_GROUP = "rational-point-value-group-criterion"
EMBEDDING_SIGNS = "real-embedding-sign-criterion"
NECESSARY = "signed-discriminant-necessary-condition"


@dataclass(frozen=True)
class QuadricProblem:
    field: FieldDescriptor
    coefficients: tuple
    point: tuple | None = None

    def __init__(self, field: FieldDescriptor, coefficients, point=None):
        form = qf.DiagonalForm(field, coefficients)
        if form.dim < 2:
            raise ValueError("need n >= 1, i.e. at least two coefficients")
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "coefficients", form.coefficients)
        if point is not None:
            point = tuple(field.elem(x) for x in point)
            if len(point) != form.dim or form(point) != field.one():
                raise InvalidCertificate("supplied point does not satisfy q = 1")
        object.__setattr__(self, "point", point)

    @property
    def n(self) -> int:
        return len(self.coefficients) - 1

    @property
    def form(self) -> qf.DiagonalForm:
        return qf.DiagonalForm(self.field, self.coefficients)


@dataclass(frozen=True)
class LinearPoly:
    """c_1 x_1 + ... + c_m x_m + constant."""

    coefficients: tuple
    constant: object

    def __call__(self, x):
        s = self.constant
        for c, t in zip(self.coefficients, x):
            s = s + c * t
        return s


@dataclass(frozen=True)
class SectionCertificate:
    field: FieldDescriptor
    entries: tuple
    basis_change: tuple | None = None

    def to_json(self) -> dict:
        k = self.field
        out = {
            "entries": [
                {"linear": [k.elem_json(c) for c in e.coefficients], "constant": k.elem_json(e.constant)}
                for e in self.entries
            ]
        }
        if self.basis_change is not None:
            out["basis_change"] = [[k.elem_json(c) for c in row] for row in self.basis_change]
        return out

    @classmethod
    def from_json(cls, k: FieldDescriptor, obj: dict) -> "SectionCertificate":
        entries = []
        for e in obj["entries"]:
            if set(e) - {"linear", "constant"}:
                raise DegreeTooHigh("certificate entries must be polynomials of degree <= 1")
            entries.append(
                LinearPoly(tuple(k.elem(c) for c in e["linear"]), k.elem(e.get("constant", 0)))
            )
        bc = obj.get("basis_change")
        if bc is not None:
            bc = tuple(tuple(k.elem(c) for c in row) for row in bc)
        return cls(k, tuple(entries), bc)


@dataclass
class Decision:
    verdict: str
    certificate: SectionCertificate | None = None
    citations: list = field(default_factory=list)
    obstruction: dict | None = None
    diagnostics: list = field(default_factory=list)

    def to_json(self) -> dict:
        out: dict = {"verdict": self.verdict, "citations": list(self.citations)}
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        if self.obstruction is not None:
            out["obstruction"] = self.obstruction
        if self.diagnostics:
            out["diagnostics"] = list(self.diagnostics)
        return out


# -- explicit sections --------------------------------------------------------


def _monomial(k, m, i, c):
    coeffs = [k.zero()] * m
    coeffs[i] = k.elem(c) if not isinstance(c, (fl.ModP, fl.QuadElem)) else c
    return LinearPoly(tuple(coeffs), k.zero())


def section_odd(k: FieldDescriptor, a) -> SectionCertificate:
    """(a_2 x_2, -a_1 x_1, ..., a_{n+1} x_{n+1}, -a_n x_n) for an even number of variables."""
    a = [k.elem(x) for x in a]
    m = len(a)
    if m % 2:
        raise OddCaseOnly("the pairing section needs n odd (an even number of variables)")
    entries = []
    for i in range(0, m, 2):
        entries.append(_monomial(k, m, i + 1, a[i + 1]))
        entries.append(_monomial(k, m, i, -a[i]))
    return SectionCertificate(k, tuple(entries))


def model_section(k: FieldDescriptor, b, m: int):
    """Section of 2 y_1 y_2 + sum_{i>=3} b_i y_i^2 = 1 in the y coordinates.

    ``b`` holds b_3..b_m.  Returns coefficient rows over y.
    """
    zero = k.zero()
    rows = [[zero] * m for _ in range(m)]
    rows[1][2] = b[0]
    rows[2][0] = k.elem(-1)
    for j in range(3, m, 2):
        rows[j][j + 1] = b[j + 1 - 2]
        rows[j + 1][j] = -b[j - 2]
    return rows


def section_isotropic(problem: QuadricProblem, bound: int = qf.DEFAULT_SEARCH_BOUND) -> SectionCertificate:
    """Certificate for n even and q isotropic, written in the original coordinates."""
    k = problem.field
    if problem.n % 2:
        raise ValueError("section_isotropic is for even n; use section_odd")
    q = problem.form
    v = qf.find_isotropic_vector(q, bound)
    p = qf.hyperbolic_split(q, v)
    zero, one = k.zero(), k.one()
    g = la.congruence(p, q.gram().rows(), zero)
    m = q.dim
    b = [g[i][i] for i in range(2, m)]
    t_rows = model_section(k, b, m)  # t = T y
    pinv = la.inverse(p, zero, one)
    # s(x) = P T P^{-1} x
    s_rows = la.matmul(la.matmul(p, t_rows, zero), pinv, zero)
    entries = tuple(LinearPoly(tuple(row), zero) for row in s_rows)
    return SectionCertificate(k, entries, tuple(tuple(r) for r in p))


def verify_section(problem: QuadricProblem, s: SectionCertificate) -> bool:
    """Exact check of sum a_i x_i s_i = 0 and of the empty zero locus on q = 1."""
    k = problem.field
    a = problem.coefficients
    m = len(a)
    if len(s.entries) != m or any(len(e.coefficients) != m for e in s.entries):
        return False
    c = [[k.elem(x) for x in e.coefficients] for e in s.entries]
    d = [k.elem(e.constant) for e in s.entries]
    # sum_i a_i x_i (sum_j c_ij x_j + d_i)
    for i in range(m):
        if a[i] * d[i]:
            return False
        if a[i] * c[i][i]:
            return False
        for j in range(i + 1, m):
            if a[i] * c[i][j] + a[j] * c[j][i]:
                return False
    zero, one = k.zero(), k.one()
    sol = la.solve_affine(c, [zero - x for x in d], zero, one)
    if sol is None:
        return True
    x0, basis = sol
    q = problem.form
    if any(q.bilinear(x0, n1) for n1 in basis):
        return False
    for i, n1 in enumerate(basis):
        for n2 in basis[i:]:
            if q.bilinear(n1, n2):
                return False
    return q(x0) != one


# -- rational points ----------------------------------------------------------


def has_rational_point(problem: QuadricProblem):
    """``(YES, point_or_None)``, ``(NO, None)`` or ``(UNKNOWN, None)``."""
    if problem.point is not None:
        return YES, problem.point
    k = problem.field
    if k.kind == fl.REALQUAD:
        return UNKNOWN, None
    return (YES if qf.represents(problem.form, 1) else NO), None


def find_rational_point(problem: QuadricProblem, bound: int = 50):
    """Bounded search for a point with q(x) = 1 (rational coordinates, or F_p)."""
    k = problem.field
    q = problem.form
    if k.kind == fl.FP:
        ext = q.orth(qf.DiagonalForm(k, [-1]))
        p = k.p
        a = [c.value for c in ext.coefficients]
        # fix all but two coordinates, solve a quadratic for the first
        for tail in itertools.product(range(p), repeat=ext.dim - 2):
            for z in range(1, p):
                rest = sum(ai * t * t for ai, t in zip(a[1:-1], tail)) + a[-1] * z * z
                x = en.sqrt_mod(-rest * pow(a[0], -1, p), p)
                if x is not None:
                    inv = pow(z, -1, p)
                    pt = [x * inv] + [t * inv for t in tail[: ext.dim - 2]]
                    pt = [k.elem(t) for t in pt[: q.dim]]
                    if q(pt) == k.one():
                        return pt
        return None
    if k.kind == fl.REALQUAD:
        return None
    s, t = qf._squarefree_scaling(q.coefficients)
    if any(not isinstance(x, int) for x in s):
        return None
    y = _kernels.zero_search(s + [-1], bound, need_last_nonzero=True)
    if y is None:
        return None
    z = Fraction(y[-1])
    return [k.elem(Fraction(yi) / (ti * z)) for yi, ti in zip(y[:-1], t)]


def orthogonal_companion(q: qf.DiagonalForm, u):
    """A vector w with psi_q(u, w) = 0 and q(w) != 0."""
    k = q.field
    m = q.dim
    if m < 2:
        raise NoOrthogonalVector("a one-dimensional form has no orthogonal companion")
    u = [k.elem(x) for x in u]
    row = [[a * x for a, x in zip(q.coefficients, u)]]
    zero, one = k.zero(), k.one()
    sol = la.solve_affine(row, [zero], zero, one)
    basis = sol[1]
    for w in basis:
        if q(w):
            return w
    for i in range(len(basis)):
        for j in range(i + 1, len(basis)):
            w = [x + y for x, y in zip(basis[i], basis[j])]
            if q(w):
                return w
    raise DegenerateChoice("every candidate orthogonal vector is isotropic")


def quadratic_point(q: qf.DiagonalForm, u, bound: int = qf.DEFAULT_SEARCH_BOUND) -> QuadExtension:
    """k(sqrt(alpha)) over which the projective quadric q = 0 has the point u + sqrt(alpha) w."""
    k = q.field
    u = [k.elem(x) for x in u]
    qu = q(u)
    if not qu:
        raise ValueError("u must satisfy q(u) != 0")
    w = orthogonal_companion(q, u)
    alpha = -qu / q(w)
    try:
        return QuadExtension(k, alpha)
    except NonSquarefreeExtension:
        root = en.square_root_rat(alpha) if isinstance(alpha, Fraction) else None
        vec = None if root is None else [x + root * y for x, y in zip(u, w)]
        raise SplitExtension(vec)


# -- value-group membership ---------------------------------------------------


def in_value_group_squared(q: qf.DiagonalForm, c):
    """Whether c lies in [D(q)^2]; None when this is not decided."""
    k = q.field
    c = k.elem(c)
    if k.finite_square_classes:
        return c in qf.value_group_squared(q)
    if k.kind != fl.RATIONALS:
        return None
    if qf.is_isotropic(q):
        return True
    a = q.coefficients
    if q.dim == 1:
        return en.squarefree_part(c) == 1
    if q.dim == 2:
        return qf.represents(qf.DiagonalForm(k, [1, a[0] * a[1]]), c)
    if q.dim == 3:
        return qf.represents(qf.dim3_neighbor_pfister(k, *a), c)
    classes = {en.squarefree_part(x) for x in a}
    if len(classes) == 1:
        # scaled sum of squares: neighbour of the 2^m-fold sum of squares
        size = 1
        while size < q.dim:
            size *= 2
        return qf.represents(qf.sum_of_squares(k, size), c)
    if q.dim >= 5:
        # anisotropic means definite here; such forms represent every value of that sign
        return c > 0
    return None


def binary_in_transfer_ideal(q: qf.DiagonalForm, a, b):
    """<a, b> lies in the transfer ideal of q = 0 iff -ab is in [D(q)^2]."""
    k = q.field
    return in_value_group_squared(q, -(k.elem(a) * k.elem(b)))


# -- decisions ----------------------------------------------------------------


def sphere_decision(k: FieldDescriptor, n: int) -> Decision:
    if n < 1:
        raise ValueError("n must be positive")
    if n % 2:
        return Decision(SECTION_EXISTS, section_odd(k, [1] * (n + 1)), [ODD_PAIRING])
    s = fl.level(k)
    if s <= 2 * n + 1:
        return Decision(SECTION_EXISTS, None, [SPHERE_LEVEL], diagnostics=[f"level {s} <= {2 * n + 1}"])
    return Decision(
        NO_SECTION,
        None,
        [SPHERE_LEVEL],
        obstruction={"kind": "LevelTooLarge", "level": "inf" if s == fl.INFINITE else s, "bound": 2 * n + 1},
    )


def _necessary_condition_route(problem: QuadricProblem, citations) -> Decision:
    k = problem.field
    prod = k.one()
    for a in problem.coefficients:
        prod = prod * a
    member = in_value_group_squared(problem.form, -prod)
    cites = citations + [NECESSARY]
    if member is False:
        return Decision(NO_SECTION, None, cites, obstruction={"kind": "NecessaryConditionFails"})
    if member is True:
        return Decision(
            UNKNOWN,
            None,
            cites,
            diagnostics=[
                "n even, no rational point on q = 1, and -prod(a_i) lies in [D(q)^2]: "
                "the necessary condition holds and no criterion decides this case"
            ],
        )
    return Decision(
        UNKNOWN, None, cites, diagnostics=["membership of -prod(a_i) in [D(q)^2] is not decided for this form"]
    )


def decide_section(
    problem: QuadricProblem,
    search_bound: int = qf.DEFAULT_SEARCH_BOUND,
    sphere_fast_path: bool = True,
) -> Decision:
    try:
        return _decide(problem, search_bound, sphere_fast_path)
    except (FactorBoundExceeded, UnsupportedField) as exc:
        return Decision(UNKNOWN, None, [], diagnostics=[f"{type(exc).__name__}: {exc}"])


def _decide(problem: QuadricProblem, search_bound: int, sphere_fast_path: bool) -> Decision:
    k = problem.field
    n = problem.n
    a = problem.coefficients
    q = problem.form

    if n % 2:
        return Decision(SECTION_EXISTS, section_odd(k, a), [ODD_PAIRING])

    if k.kind != fl.REALQUAD and qf.is_isotropic(q):
        try:
            cert = section_isotropic(problem, search_bound)
            return Decision(SECTION_EXISTS, cert, [ISOTROPIC_SPLIT])
        except SearchExhausted as exc:
            return Decision(
                SECTION_EXISTS, None, [ISOTROPIC_SPLIT], diagnostics=[f"q is isotropic; {exc}; no certificate"]
            )

    if sphere_fast_path and all(x == k.one() for x in a):
        return sphere_decision(k, n)

    if k.kind in (fl.QBAR, fl.FP, fl.PADIC):
        status, _ = has_rational_point(problem)
        if status == YES:
            return Decision(SECTION_EXISTS, None, [POINT_CD2])
        return _necessary_condition_route(problem, [])

    if k.kind == fl.REALS:
        if any(x > 0 for x in a):
            # some a_i > 0 gives a point; mixed signs were isotropic above
            return Decision(
                NO_SECTION, None, [POINT_VALUE_GROUP], obstruction={"kind": "AllEmbeddingsPositive"}
            )
        return _necessary_condition_route(problem, [])

    if k.kind == fl.RATIONALS:
        status, _ = has_rational_point(problem)
        if status == NO:
            return _necessary_condition_route(problem, [])
        if any(x < 0 for x in a):
            return Decision(SECTION_EXISTS, None, [EMBEDDING_SIGNS])
        return Decision(NO_SECTION, None, [EMBEDDING_SIGNS], obstruction={"kind": "AllEmbeddingsPositive"})

    # real quadratic field
    if problem.point is None:
        return Decision(
            UNKNOWN, None, [], diagnostics=["real quadratic fields need a supplied rational point on q = 1"]
        )
    bad = [c for c in (1, -1) if all(x.embedding_sign(c) > 0 for x in a)]
    if bad:
        return Decision(
            NO_SECTION,
            None,
            [EMBEDDING_SIGNS],
            obstruction={"kind": "AllEmbeddingsPositive", "embeddings": ["+sqrt" if c == 1 else "-sqrt" for c in bad]},
        )
    return Decision(SECTION_EXISTS, None, [EMBEDDING_SIGNS])


__all__ = [
    "QuadricProblem",
    "LinearPoly",
    "SectionCertificate",
    "Decision",
    "section_odd",
    "section_isotropic",
    "verify_section",
    "has_rational_point",
    "find_rational_point",
    "quadratic_point",
    "orthogonal_companion",
    "in_value_group_squared",
    "binary_in_transfer_ideal",
    "sphere_decision",
    "decide_section",
    "HedgehogError",
    "NotIsotropic",
]
