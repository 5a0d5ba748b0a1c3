import itertools
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from hedgehog import engine
from hedgehog import fields as fl
from hedgehog import gwring as gw
from hedgehog import quadform as qf
from hedgehog.errors import FieldMismatch, NonSquarefreeExtension, OddDimension, SplitExtension, UnsupportedField

import oracles as O

Q = fl.Rationals()
Q2 = fl.PAdic(2)
G = gw.GWElem
ALL = [Q, fl.Reals(), fl.QuadraticallyClosed(), fl.FinitePrime(5), fl.FinitePrime(7), fl.PAdic(2), fl.PAdic(3), fl.PAdic(5)]
LOCAL = [fl.FinitePrime(3), fl.FinitePrime(5), fl.PAdic(2), fl.PAdic(3), fl.PAdic(5)]
CHWS_GENERATORS = [[2, 3], [2, 5], [2, 7], [2, 2], [2, 6], [2, 10], [2, 14]]


def coeffs_for(k):
    if k.kind == fl.FP:
        return st.integers(1, k.p - 1)
    return st.builds(Fraction, st.integers(-30, 30).filter(bool), st.integers(1, 5))


def elements(k, max_size=4):
    c = coeffs_for(k)
    return st.builds(lambda p, m: G(k, p, m), st.lists(c, max_size=max_size), st.lists(c, max_size=2))


# -- ring operations ------------------------------------------------------------


def test_ring_examples():
    a = 7
    assert gw.gw_equal(G(Q, [1]) * G(Q, [1, -1]), G(Q, [1, -1]))
    prod = gw.gw_mul(G(Q, [a]), G(Q, [1, -a]))
    assert prod.plus == (a, -a * a)
    # <a, -a^2> = <a, -1> has discriminant -a, so it is hyperbolic only for square a
    assert gw.gw_equal(prod, G(Q, [a, -1]))
    assert not gw.gw_equal(prod, G(Q, [1, -1]))
    assert gw.gw_equal(gw.gw_mul(G(Q, [9]), G(Q, [1, -9])), G(Q, [1, -1]))
    # scaling the hyperbolic plane itself leaves it unchanged
    assert gw.gw_equal(gw.gw_mul(G(Q, [a]), G(Q, [1, -1])), G(Q, [1, -1]))


@pytest.mark.parametrize("k", ALL, ids=str)
def test_product_rule_identity(k):
    # <1,-c1c2> = <c1><1,-c2> + <1,-c1> - <1,-1>
    cs = [1, 2, 3, -1, 6] if k.kind != fl.FP else [1, 2, 3, 4]
    for c1, c2 in itertools.product(cs, repeat=2):
        lhs = G(k, [1, -(k.elem(c1) * k.elem(c2))])
        rhs = G(k, [c1]) * G(k, [1, -k.elem(c2)]) + G(k, [1, -k.elem(c1)]) - G(k, [1, -1])
        assert gw.gw_equal(lhs, rhs)


def test_field_mismatch():
    with pytest.raises(FieldMismatch):
        G(Q, [1]) + G(Q2, [1])
    with pytest.raises(FieldMismatch):
        gw.gw_equal(G(Q, [1]), G(Q2, [1]))


def test_json_roundtrip():
    x = G(Q, [Fraction(1, 2), 3], [-5])
    assert gw.GWElem.from_json(Q, x.to_json()) == x
    assert x.to_json() == {"plus": ["1/2", "3"], "minus": ["-5"]}


# -- invariants -----------------------------------------------------------------


@pytest.mark.parametrize("k", [Q, Q2, fl.PAdic(3), fl.FinitePrime(7)], ids=str)
def test_signed_discriminant_binary(k):
    for a, b in itertools.product([1, 2, 3, 5], repeat=2):
        assert gw.signed_discriminant(G(k, [a, b])) == fl.square_class(k, -(k.elem(a) * k.elem(b)))


def test_invariant_examples():
    assert gw.signed_discriminant(G(Q, [1, 1, 1])).rep == -1
    x = G(Q, [1, -1]) + G(Q, [2, 2])
    assert x.rank == 4
    inv = gw.invariants_of(G(fl.Reals(), [1, 1, -1]))
    assert inv.signature == 1
    # 3 + sqrt 2 > 0 under both embeddings, 1 + sqrt 2 only under the first
    assert gw.invariants_of(G(fl.RealQuadratic(2), [[3, 1], [1, 1]])).signature == (2, 0)


def test_gw_equal_examples():
    assert gw.gw_equal(G(Q2, [2, -4]), G(Q2, [-2, 1]))
    assert not gw.gw_equal(G(fl.Reals(), [1, 1]), G(fl.Reals(), [1, -1]))
    assert gw.gw_equal(G(fl.QuadraticallyClosed(), [1, 7]), G(fl.QuadraticallyClosed(), [-1, 3]))
    with pytest.raises(UnsupportedField):
        gw.gw_equal(G(fl.RealQuadratic(2), [1]), G(fl.RealQuadratic(2), [1]))


def test_binary_forms_2_3_and_1_6_differ_over_q():
    # <2,3> = <1,6> would force 2x^2 + 3y^2 = z^2 to have a primitive solution;
    # there is none even mod 9
    sols = [
        (x, y, z)
        for x, y, z in itertools.product(range(9), repeat=3)
        if (2 * x * x + 3 * y * y - z * z) % 9 == 0 and any(t % 3 for t in (x, y, z))
    ]
    assert sols == []
    assert O.rational_zero_brute([2, 3, -1], 40) is None
    assert not gw.gw_equal(G(Q, [2, 3]), G(Q, [1, 6]))
    # they agree at every place but 3 (and 2, by reciprocity)
    inv_a, inv_b = gw.invariants_of(G(Q, [2, 3]), [fl.REAL, 2, 3]), gw.invariants_of(G(Q, [1, 6]), [fl.REAL, 2, 3])
    assert inv_a.disc == inv_b.disc and inv_a.signature == inv_b.signature
    assert inv_a.hasse[3] != inv_b.hasse[3]


@pytest.mark.parametrize("p", [2, 3, 5])
def test_gw_equal_binary_matches_representation_oracle(p):
    # <a,b> = <c,d> iff same discriminant and <a,b> represents c
    k = fl.PAdic(p)
    reps = [c.rep for c in fl.square_class_group(k)]
    for a, b, c in itertools.product(reps, repeat=3):
        d = Fraction(a * b, c)
        expected = O.padic_represents([a, b], c, p)
        assert gw.gw_equal(G(k, [a, b]), G(k, [c, d])) == expected


@pytest.mark.parametrize("k", [Q, fl.FinitePrime(5), fl.PAdic(2), fl.PAdic(3)], ids=str)
def test_signed_disc_homomorphism_on_even_rank(k):
    @given(elements(k), elements(k))
    def run(x, y):
        if x.rank % 2:
            x = x + G(k, [1])
        if y.rank % 2:
            y = y + G(k, [1])
        assert gw.signed_discriminant(x + y) == gw.signed_discriminant(x) * gw.signed_discriminant(y)

    run()


@pytest.mark.parametrize("k", [Q, fl.Reals(), fl.FinitePrime(7), fl.PAdic(2), fl.PAdic(3)], ids=str)
def test_gw_equal_is_a_congruence(k):
    @given(elements(k), elements(k), elements(k))
    def run(x, y, z):
        eq = gw.gw_equal
        assert eq(x, x)
        assert eq(x, y) == eq(y, x)
        assert eq(x + y, y + x)
        assert eq((x + y) + z, x + (y + z))
        assert eq(x * y, y * x)
        assert eq(x * (y + z), x * y + x * z)
        assert eq(x - x, G(k))
        if eq(x, y):
            assert eq(x + z, y + z) and eq(x * z, y * z)
            if eq(y, z):
                assert eq(x, z)

    run()


@pytest.mark.parametrize("k", LOCAL, ids=str)
def test_hasse_invariant_detects_4dim_isotropy(k):
    # anisotropic 4-dim forms over Q_p are exactly those with trivial signed
    # discriminant and c = -(-1,-1)_p
    reps = [c.rep for c in fl.square_class_group(k)]
    for combo in itertools.combinations_with_replacement(reps, 4):
        x = G(k, combo)
        iso = qf.is_isotropic(qf.DiagonalForm(k, combo))
        if k.kind == fl.PADIC:
            inv = gw.invariants_of(x)
            aniso = inv.disc.is_trivial and inv.hasse[k.p] == -fl.hilbert_symbol(k.p, -1, -1)
            assert iso == (not aniso)
            assert iso == O.padic_isotropic(list(combo), k.p)
        else:
            assert iso


# -- transfers ------------------------------------------------------------------


def test_trace_transfers_over_q2():
    for s in (1, -1):
        ext = gw.QuadExtension(Q2, 2 * s)
        t = gw.scharlau_transfer(ext, G(ext, [1]))
        # Gram [[tr 1, tr sqrt], [tr sqrt, tr alpha]] = diag(2, 4 s)
        assert gw.gw_equal(t, G(Q2, [2, 4 * s]))
        assert gw.gw_equal(t, G(Q2, [2, s]))
    ext = gw.QuadExtension(Q2, 2)
    t = gw.scharlau_transfer(ext, G(ext, [(1, 1)]))
    assert gw.gw_equal(t, G(Q2, [2, -4]))
    assert gw.gw_equal(t, G(Q2, [-2, 1]))


@pytest.mark.parametrize("k, a", [(Q, 2), (Q, -3), (Q2, 5), (fl.PAdic(3), 3), (fl.FinitePrime(7), 3)], ids=str)
def test_trace_of_sqrt_is_hyperbolic(k, a):
    ext = gw.QuadExtension(k, a)
    assert gw.gw_equal(gw.scharlau_transfer(ext, G(ext, [(0, 1)])), G(k, [1, -1]))


@pytest.mark.parametrize("k, a", [(Q, 2), (Q, -3), (Q2, 5), (fl.PAdic(3), 6), (fl.FinitePrime(5), 2)], ids=str)
def test_s_one_transfers(k, a):
    ext = gw.QuadExtension(k, a, gw.S_ONE)
    assert gw.gw_equal(gw.transfer_s_one(ext, G(ext, [1])), G(k, [1, -1]))
    # Gram [[s(sqrt a), s(a)], [s(a), s(a sqrt a)]] = diag(1, a)
    assert gw.gw_equal(gw.transfer_s_one(ext, G(ext, [(0, 1)])), G(k, [1, a]))


def test_s_one_transfer_of_w():
    alpha = 3
    for u1, u2, v1, v2 in [(1, 1, 2, 1), (2, 1, 1, 3), (5, -1, 1, 1), (1, 2, 3, -1)]:
        den = u1 * v2 + u2 * v1
        w1 = Fraction(u1 * v1 + alpha * u2 * v2, den)
        ext = gw.QuadExtension(Q, alpha, gw.S_ONE)
        t = gw.transfer_s_one(ext, G(ext, [(w1, 1)]))
        expected = G(Q, [1, -(u1 * u1 - alpha * u2 * u2) * (v1 * v1 - alpha * v2 * v2)])
        assert gw.gw_equal(t, expected)


def test_extension_validation():
    with pytest.raises(NonSquarefreeExtension):
        gw.QuadExtension(Q, 4)
    with pytest.raises(NonSquarefreeExtension):
        gw.QuadExtension(Q2, 17)  # 17 = 1 mod 8 is a square in Q_2
    with pytest.raises(NonSquarefreeExtension):
        gw.QuadExtension(fl.QuadraticallyClosed(), 2)
    with pytest.raises(UnsupportedField):
        gw.QuadExtension(fl.RealQuadratic(2), 3)


@pytest.mark.parametrize("k, a", [(Q, 5), (Q2, -1), (fl.PAdic(3), 2)], ids=str)
def test_transfer_additive(k, a):
    ext = gw.QuadExtension(k, a)
    pair = st.tuples(st.integers(-6, 6), st.integers(-6, 6)).filter(any)

    @given(st.lists(pair, max_size=3), st.lists(pair, max_size=3), st.sampled_from([gw.TRACE, gw.S_ONE]))
    def run(xs, ys, functional):
        e = ext.with_functional(functional)
        x, y = G(e, xs), G(e, ys)
        lhs = gw.scharlau_transfer(e, x + y)
        rhs = gw.scharlau_transfer(e, x) + gw.scharlau_transfer(e, y)
        assert gw.gw_equal(lhs, rhs)
        assert lhs.rank == 2 * (x + y).rank

    run()


def test_transfer_subgroup_bound_examples():
    for k, a in [(Q, 3), (Q2, 2), (fl.PAdic(3), -1)]:
        for functional in (gw.S_ONE, gw.TRACE):
            ext = gw.QuadExtension(k, a, functional)
            probes = [G(ext, [1]), G(ext, [(0, 1)]), G(ext, [(1, 1), (2, -1)], [(3, 1)]), G(ext)]
            for probe, tb in zip(probes, gw.transfer_subgroup_bound(ext, probes)):
                assert tb.even_part.rank % 2 == 0
                # s_*(<gamma>) = <1,-1>, so the correction is exact for every probe
                assert gw.gw_equal(tb.transfer, tb.corrected)
                if probe.rank % 2:
                    # s_*(phi) = s_*(phi + <gamma>) - <1,-1>
                    assert gw.gw_equal(tb.transfer, gw.scharlau_transfer(ext, tb.even_part) - G(k, [1, -1]))
            zero = gw.transfer_subgroup_bound(ext, [G(ext)])[0]
            assert gw.gw_equal(zero.transfer, G(k))


# -- Euler characteristic -------------------------------------------------------


@pytest.mark.parametrize("k", [Q, Q2], ids=str)
def test_euler_characteristic(k):
    chi = gw.euler_characteristic(k, 2, [1, 1, 1])
    assert gw.gw_equal(chi, G(k, [1, -1]) + G(k, [2, 2]))
    chi = gw.euler_characteristic(k, 2, [1, 1, -1])
    assert gw.gw_equal(chi, G(k, [1, -1]) + G(k, [2, -2]))
    chi = gw.euler_characteristic(k, 4, [1, 1, 1, 1, 1])
    assert gw.gw_equal(chi, G(k, [1, -1]) * 2 + G(k, [2, 2]))
    assert chi.rank == 6


def test_euler_characteristic_odd_rejected():
    with pytest.raises(OddDimension):
        gw.euler_characteristic(Q, 3, [1, 1, 1, 1])


# -- Witt rings and ideals ------------------------------------------------------


@pytest.mark.parametrize("k, order", [(Q2, 32), (fl.PAdic(3), 16), (fl.PAdic(5), 16), (fl.FinitePrime(5), 4)], ids=str)
def test_witt_ring_orders(k, order):
    assert gw.WittModel(k).order == order


def test_witt_reduce_examples():
    assert gw.witt_reduce(G(Q2, [1, -1])).coefficients == ()
    w = gw.witt_reduce(G(Q2, [1, 1, 1, 1]))
    assert w.dim == 4 and not O.padic_isotropic([1, 1, 1, 1], 2)
    assert gw.gw_equal(w.as_gw(), G(Q2, [1, 1, 1, 1]))
    k5 = fl.FinitePrime(5)
    assert 4 in O.squares_mod(5)
    assert gw.witt_reduce(G(k5, [1, 1])).coefficients == ()


@pytest.mark.parametrize("k", LOCAL, ids=str)
def test_witt_reduce_is_anisotropic_and_equivalent(k):
    reps = [c.rep for c in fl.square_class_group(k)]

    @given(st.lists(st.sampled_from(reps), max_size=6), st.lists(st.sampled_from(reps), max_size=3))
    def run(plus, minus):
        x = G(k, plus, minus)
        w = gw.witt_reduce(x)
        if w.dim >= 2:
            if k.kind == fl.PADIC:
                assert not O.padic_isotropic([c.rep if hasattr(c, "rep") else c for c in w.coefficients], k.p)
            else:
                assert not O.fp_has_nontrivial_zero([c.value for c in w.coefficients], k.p)
        m = (x.rank - w.dim) // 2
        assert (x.rank - w.dim) % 2 == 0
        assert gw.gw_equal(x, w.as_gw() + G(k, [1, -1]) * m)

    run()


def _chws_generators(k=Q2):
    return [G(k, g) for g in CHWS_GENERATORS]


def test_ideal_membership_examples():
    gens = _chws_generators()
    assert gw.ideal_membership(G(Q2, [1, -1]) + G(Q2, [2, 2]), gens)
    assert not gw.ideal_membership(G(Q2, [1]), gens)
    assert gw.ideal_membership(G(Q2), gens)
    assert gw.ideal_membership(G(Q2), [G(Q2, [1, 1])])
    with pytest.raises(UnsupportedField):
        gw.ideal_membership(G(Q, [1]), [G(Q, [1])])


def test_ideal_membership_iteration_bound():
    gens = _chws_generators()
    summary = gw.ideal_summary(gens)
    model = gw.WittModel(Q2)
    assert summary.iterations <= model.order * len(model.classes) * len(gens)
    assert summary.rank_gcd == 2


def test_quotient_examples():
    out = gw.quotient_by_even_ideal(_chws_generators())
    assert out["iso"] == "Z/2" and out["via"] == "rank mod 2"
    small = gw.quotient_by_even_ideal([G(Q2, [1, -1])])
    assert small["iso"] == "summary"
    assert not gw.ideal_membership(G(Q2, [2, 2]), [G(Q2, [1, -1])])
    empty = gw.quotient_by_even_ideal([], Q2)
    assert empty["iso"] == "summary" and empty["rank_gcd"] == 0


def _brute_force_ideal(gens, k, max_terms=3):
    """Elements of (rank, Witt key) reachable with few signed additive generators."""
    model = gw.WittModel(k)
    add = []
    for g in gens:
        for c in model.classes:
            h = g.scaled(c.element())
            add += [h, -h]
    reach = {(0, model.zero_key())}
    frontier = set(reach)
    elems = {(0, model.zero_key()): G(k)}
    for _ in range(max_terms):
        new = set()
        for key in frontier:
            for h in add:
                y = elems[key] + h
                ky = (y.rank, model.key(y))
                if ky not in reach:
                    reach.add(ky)
                    elems[ky] = y
                    new.add(ky)
        frontier = new
    return reach


@pytest.mark.parametrize("k", [fl.PAdic(3), fl.FinitePrime(5)], ids=str)
def test_ideal_membership_against_bounded_enumeration(k):
    reps = [c.rep for c in fl.square_class_group(k)]
    gens = [G(k, [1, -reps[1]])]
    summary = gw.ideal_summary(gens, k)
    reach = _brute_force_ideal(gens, k)
    model = gw.WittModel(k)
    for rank, key in reach:
        x = model.table[key].as_gw() + G(k, [1, -1]) * ((rank - model.table[key].dim) // 2)
        assert summary.contains(x)


@pytest.mark.parametrize("p", [2, 3])
def test_transfer_ideal_independent_of_functional(p):
    k = fl.PAdic(p)
    reps = [c.rep for c in fl.square_class_group(k)]
    box = [(u, v) for u in range(-3, 4) for v in range(-3, 4) if (u, v) != (0, 0)]
    targets = [G(k, [a]) for a in reps] + [G(k, [a, b]) for a, b in itertools.combinations_with_replacement(reps, 2)]
    for alpha in reps[1:]:
        verdicts = []
        for functional in (gw.TRACE, gw.S_ONE):
            ext = gw.QuadExtension(k, alpha, functional)
            gens = [gw.scharlau_transfer(ext, G(ext, [b])) for b in box]
            summary = gw.ideal_summary(gens, k)
            verdicts.append([summary.contains(t) for t in targets])
        assert verdicts[0] == verdicts[1]


@pytest.mark.parametrize("k", [fl.PAdic(2), fl.PAdic(3), fl.PAdic(5), fl.FinitePrime(7)], ids=str)
def test_transfer_disc_lies_in_value_group_squared(k):
    reps = [c.rep for c in fl.square_class_group(k)]
    for coeffs in itertools.combinations_with_replacement(reps, 3):
        q = qf.DiagonalForm(k, coeffs)
        dsq = qf.value_group_squared(q)
        for u in ([1, 0, 0], [1, 1, 0], [1, 1, 1]):
            if not q(u):
                continue
            try:
                ext = engine.quadratic_point(q, u)
            except SplitExtension:
                continue
            for beta in [(1, 0), (0, 1), (1, 1), (2, -1), (1, 3)]:
                phi = gw.scharlau_transfer(ext, G(ext, [beta]))
                assert gw.signed_discriminant(phi) in dsq.members
