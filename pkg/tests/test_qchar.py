from __future__ import annotations

import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qcluster.qchar import (
    AcyclicGrading,
    EmptyMonomial,
    QCharError,
    WindowTooSmall,
    YElement,
    aMonomial,
    adaptedWindow,
    applyCq,
    as_mono,
    bilinearForms,
    checkTSystems,
    cqInverseWindow,
    e,
    eulerForm,
    gadd,
    gscale,
    isDominant,
    isRightNegative,
    krCharacter,
    kr_vector,
    lDominant,
    nForm,
    r_values,
    variantCharacter,
    variantLeading,
)
from qcluster.qcoeff import QScalar

A1 = AcyclicGrading([[2]])
A3 = AcyclicGrading([[2, -1, 0], [-1, 2, -1], [0, -1, 2]], [(2, 1), (2, 3)])
A4 = AcyclicGrading([[2, -1, 0, 0], [-1, 2, -1, 0], [0, -1, 2, -1], [0, 0, -1, 2]], [(2, 1), (2, 3), (3, 4)])
AFF = AcyclicGrading([[2, -1, -1], [-1, 2, -1], [-1, -1, 2]], [(1, 2), (2, 3), (1, 3)], (3, 2, 1))


def mono(*pairs):
    out = {}
    for key in pairs:
        out[key] = out.get(key, 0) + 1
    return out


def tail(lead, i, ts, gr):
    out = dict(lead)
    for t in ts:
        out = gadd(out, gscale(aMonomial(i, t, gr), -1))
    return out


def test_grading_validation():
    assert A3.xi == (2, 3, 1)
    assert AFF.eps(1, 2) == AFF.eps(2, 3) == AFF.eps(1, 3) == 1
    with pytest.raises(QCharError):
        AcyclicGrading([[2, -1], [-1, 2]], [(1, 2), (2, 1)])
    with pytest.raises(QCharError):
        AcyclicGrading([[2, -1], [-1, 2]], [(1, 2)], (1, 2))
    with pytest.raises(QCharError):
        AcyclicGrading([[2, -1], [0, 2]])


def test_apply_cq():
    assert applyCq(e(2, 0), AFF) == {(2, 1): 1, (2, -1): 1, (1, -1): -1, (3, 1): -1}
    # read as (C_q eta)_{2,a}: coefficient of eta_{2,a-1}, eta_{2,a+1}, eta_{1,a-1}, eta_{3,a+1}
    eta = {(2, 4): 5, (2, 6): 7, (1, 4): 11, (3, 6): 13}
    assert applyCq(eta, AFF).get((2, 5)) == 5 + 7 - 11 - 13
    assert applyCq({}, AFF) == {}
    assert applyCq(e(1, 3), A1) == {(1, 2): 1, (1, 4): 1}


def test_cq_inverse_a1():
    assert cqInverseWindow(e(1, 0), A1, 0, 8) == {(1, 1): 1, (1, 3): -1, (1, 5): 1, (1, 7): -1}
    with pytest.raises(WindowTooSmall):
        cqInverseWindow(e(1, 0), A1, 1, 8)


@pytest.mark.parametrize("gr", [A1, A3, A4, AFF], ids=["A1", "A3", "A4", "aff"])
def test_cq_round_trip(gr):
    w = {(1, 0): 2, (gr.r, 3): -1}
    v = cqInverseWindow(w, gr, 0, 30)
    back = {k: x for k, x in applyCq(v, gr).items() if k[1] <= 29}
    assert back == w


def test_inverse_second_row_a4():
    # the second row of C_q^{-1} e_{1,0} in type A_4 with eps_21 = +1
    assert A4.eps(2, 1) == 1
    row = sorted((b, x) for (i, b), x in cqInverseWindow(e(1, 0), A4, 0, 20).items() if i == 2)
    assert row == [(2 - 1, 1), (8 - 1, -1), (12 - 1, 1), (18 - 1, -1)]


@pytest.mark.parametrize("gr", [A1, A3, AFF], ids=["A1", "A3", "aff"])
def test_forms_on_a_monomials(gr):
    for i in range(1, gr.r + 1):
        for j in range(1, gr.r + 1):
            for b in range(-3, 4):
                E, N = bilinearForms(e(i, 0), gscale(applyCq(e(j, b), gr), -1), gr)
                want = (1 if b == 1 else -1 if b == -1 else 0) if i == j else 0
                assert -E == want
                assert N == 2 * want


def test_compatible_twist():
    for gr in (A1, A3):
        for c in range(0, 9, 2):
            for d in range(4):
                for i in range(1, gr.r + 1):
                    ystring = {(i, c - 2 * s): 1 for s in range(d + 1)}
                    for dp in range(4):
                        for j in range(1, gr.r + 1):
                            A = gscale(aMonomial(j, c - 1 - 2 * dp, gr), -1)
                            hit = i == j and d == dp
                            assert eulerForm(ystring, A, gr) == (1 if hit else 0)
                            assert nForm(ystring, A, gr) == (-2 if hit else 0)


def test_a_monomials():
    assert aMonomial(1, 5, A1) == {(1, 4): 1, (1, 6): 1}
    a = aMonomial(2, 7, AFF)
    assert a[(1, 7 + AFF.eps(2, 1))] == -1 and a[(3, 7 + AFF.eps(2, 3))] == -1
    assert gadd(a, gscale(a, -1)) == {}


def test_dominant_monomial_example():
    for k in range(1, 5):
        w = kr_vector(2, k, 0)
        r = r_values(w, AFF)
        assert r == {1: Fraction(2 * k - 2) - Fraction(1, 3), 2: 2 * k - 2, 3: Fraction(2 * k - 2) + Fraction(1, 3)}
        assert not isRightNegative(w, AFF)
        for s in range(1, k + 1):
            m = tail(w, 2, [2 * t - 1 for t in range(k - s + 1, k + 1)], AFF)
            assert isRightNegative(m, AFF)
            assert r_values(m, AFF)[2] == 2 * k
    with pytest.raises(EmptyMonomial):
        r_values({}, AFF)


def test_l_dominant():
    w = kr_vector(2, 2, 0)
    assert lDominant({}, w, A3)
    # Y_{2,0}Y_{2,2} A_{2,1}^{-1} is dominant, Y_{2,0}Y_{2,2} A_{2,3}^{-1} is not
    assert lDominant(e(2, 1), w, A3)
    assert not lDominant(e(2, 3), w, A3)


def test_kr_character_examples():
    a = 0
    ch = krCharacter(2, 3, a, A3, a + 6)
    lead = kr_vector(2, 3, a)
    want = [lead, tail(lead, 2, [5], A3), tail(lead, 2, [3, 5], A3), tail(lead, 2, [1, 3, 5], A3)]
    assert ch == YElement.make({as_mono(m): 1 for m in want}, A3)
    assert krCharacter(2, 2, a + 4, A3, a + 6) == YElement.monomial(mono((2, 4), (2, 6)), A3)
    assert krCharacter(2, 0, a, A3).terms == {(): QScalar(1)}
    with pytest.raises(QCharError):
        krCharacter(2, -1, a, A3)


def test_variant_character_examples():
    a = 0
    for k in range(1, 4):
        assert variantCharacter(2, k, 0, a, A3, a + 6) == krCharacter(2, k, a, A3, a + 6)
        lead = variantLeading(2, k, k, a, A3)
        assert variantCharacter(2, k, k, a, A3, a + 6) == YElement.monomial(lead, A3)
    lead = mono((2, 0), (1, 4), (1, 6), (3, 4), (3, 6))
    assert variantLeading(2, 3, 2, a, A3) == lead
    want = YElement.make({as_mono(lead): 1, as_mono(tail(lead, 2, [1], A3)): 1}, A3)
    assert variantCharacter(2, 3, 2, a, A3, a + 6) == want
    with pytest.raises(QCharError):
        variantCharacter(2, 2, 3, a, A3)


@pytest.mark.parametrize("i,k", [(i, k) for i in (1, 2, 3) for k in (1, 2, 3)])
def test_tails_right_negative(i, k):
    ch = variantCharacter(i, k, 0, 0, A3)
    lead = kr_vector(i, k, 0)
    assert lDominant({}, lead, A3)
    for m in ch.monomials():
        if m != lead:
            assert isRightNegative(m, A3)


def test_difference_identity():
    a, c = 0, 6

    def T(k, b):
        return krCharacter(2, k, b, A3, c)

    diff = T(3, a).commutative_mul(T(2, a + 4)) - T(4, a).commutative_mul(T(1, a + 4))
    var = variantCharacter(2, 3, 2, a, A3, c)
    assert diff.at_one() == var.at_one()
    assert sum(isDominant(m) for m in diff.monomials()) == 1


def test_tsystem_a1_small():
    # [W_{1,2} * W_{1,0}] = [W_{0,2} * W_{2,0}] + t^{-1} inside the window
    W = lambda k, b: krCharacter(1, k, b, A1)
    lhs = (W(1, 2) * W(1, 0)).normalized(gadd(e(1, 2), e(1, 0)))
    rhs = (W(0, 2) * W(2, 0)).normalized(kr_vector(1, 2, 0))
    one = YElement.make({(): QScalar({-2: 1})}, A1)
    assert (lhs - rhs).truncate(2) == one.truncate(2)


@pytest.mark.parametrize("mode", ["E", "N"])
def test_tsystems(mode):
    for k in (1, 2, 3):
        assert checkTSystems(1, k, 0, A1, 6, mode).ok
        for i in (1, 2, 3):
            rep = checkTSystems(i, k, 0, A3, None, mode)
            assert rep.ok, rep.details
    assert checkTSystems(2, 3, 0, A3, 6, mode).ok


def test_tsystem_window_limit():
    with pytest.raises(WindowTooSmall):
        checkTSystems(2, 1, 0, A3, 6)
    assert adaptedWindow(1, 6, A3) == {1: 6, 2: 4, 3: 4}
    assert adaptedWindow(2, 6, A3) == {1: 6, 2: 6, 3: 6}


def test_y_element_json():
    ch = krCharacter(2, 2, 0, A3)
    data = json.loads(json.dumps(ch.to_json()))
    assert data["mode"] == "E"
    back = YElement.make({as_mono({(i, a): x for i, a, x in t["mono"]}): QScalar.from_list(t["coef"])
                          for t in data["terms"]}, A3)
    assert back == ch


keys = st.tuples(st.integers(1, 3), st.integers(-3, 3))
vectors = st.dictionaries(keys, st.integers(-2, 2), max_size=4).map(lambda d: {k: v for k, v in d.items() if v})


@settings(max_examples=60, deadline=None)
@given(vectors, vectors)
def test_forms_antisymmetric(w1, w2):
    E, N = bilinearForms(w1, w2, A3)
    assert (E, N) == tuple(-x for x in bilinearForms(w2, w1, A3))


@settings(max_examples=40, deadline=None)
@given(vectors, vectors, vectors, st.sampled_from(["E", "N"]))
def test_twisted_product_associative(w1, w2, w3, mode):
    x, y, z = (YElement.make({as_mono(w): 1, (): 1}, A3, mode) for w in (w1, w2, w3))
    assert (x * y) * z == x * (y * z)


@settings(max_examples=40, deadline=None)
@given(st.lists(keys, min_size=1, max_size=3), st.lists(keys, min_size=1, max_size=3))
def test_right_negative_product(p1, p2):
    m1 = tail(kr_vector(p1[0][0], 1, 0), p1[0][0], [b for _, b in p1], A3)
    m2 = tail(kr_vector(p2[0][0], 1, 0), p2[0][0], [b for _, b in p2], A3)
    if m1 and m2 and isRightNegative(m1, A3) and isRightNegative(m2, A3):
        prod = gadd(m1, m2)
        if prod:
            assert isRightNegative(prod, A3)
