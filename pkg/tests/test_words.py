from __future__ import annotations

import json

import pytest
from hypothesis import given, settings, strategies as st

from qcluster.injchain import checkInjectiveReachable
from qcluster.qchar import aMonomial, e, gscale, nForm
from qcluster.seeds import ClusterState, applySequence, checkCompatible
from qcluster.words import (
    NotAdaptable,
    Word,
    WordError,
    adaptableData,
    altSequence,
    buildGammaSeed,
    gammaArrows,
    glsData,
    isSinkSequence,
    kSequence,
    lambdaFromNForm,
    sinkOrientation,
    thetaInvDeg,
    thetaMaps,
    thetaYConsistent,
    upperSequence,
    wordIndices,
)

from fixtures import cartan_a, embed_word, type_a_word, wild_word

TYPE_A_ARROWS = {
    (1, 5): 1, (2, 1): 1, (2, 6): 1, (3, 2): 1, (3, 7): 1, (4, 3): 1, (5, 2): 1, (5, 8): 1, (6, 3): 1,
    (6, 5): 1, (6, 9): 1, (7, 4): 1, (7, 6): 1, (8, 6): 1, (8, 10): 1, (9, 7): 1, (9, 8): 1, (10, 9): 1,
}


def test_word_validation():
    with pytest.raises(WordError):
        Word([1, 1], cartan_a(2))
    with pytest.raises(WordError):
        Word([1, 2], [[2, -1], [0, 2]])
    with pytest.raises(WordError):
        Word([1, 3], cartan_a(2))


def test_indices_type_a():
    w = type_a_word()
    assert w.frozen == [4, 7, 9, 10]
    assert w.exchangeable == [1, 2, 3, 5, 6, 8]
    assert w.letter(1) == 1 and w.letter(10) == 1
    single = Word([1, 2], cartan_a(2))
    assert single.plus(1) == 3 and single.minus(1) == 0


def test_indices_embed_word():
    w = embed_word()
    assert [w.offset(1, d) for d in range(4)] == [1, 6, 10, 13]
    assert w.m_minus(6) == 1 and w.m_plus(6) == 2
    table = wordIndices(w)
    assert table["positions"][6]["offsets"] == [6, 10, 13]
    json.dumps(table)


def test_arrows_type_a():
    assert gammaArrows(type_a_word()) == TYPE_A_ARROWS


def test_arrows_wild():
    arrows = gammaArrows(wild_word())
    assert set(arrows.values()) == {1, 2, 3}
    assert arrows[(2, 1)] == 3 and arrows[(4, 2)] == 2


def test_coxeter_word():
    w = Word([3, 2, 1], cartan_a(3))
    assert w.exchangeable == []
    assert all(s in w.frozen and t in w.frozen for s, t in gammaArrows(w))
    assert glsData(w) == ([], {1: 1, 2: 2, 3: 3})
    assert altSequence(w) == ([], [])
    assert adaptableData(w).a == [0, 0, 0]


def test_gls_sequence_type_a():
    w = type_a_word()
    blocks = [kSequence(w, k) for k in range(1, 11)]
    assert blocks == [[8, 5, 1], [6, 2], [3], [], [5, 1], [2], [], [1], [], []]
    Sigma, sigma = glsData(w)
    assert Sigma == [1, 2, 5, 1, 3, 6, 2, 8, 5, 1]
    assert sigma == {1: 8, 2: 6, 3: 3, 4: 4, 5: 5, 6: 2, 7: 7, 8: 1, 9: 9, 10: 10}


def test_alt_sequence_type_a():
    assert altSequence(type_a_word()) == ([1, 5, 8, 2, 6, 1, 5, 3, 2, 1], [8, 6, 3, 5, 8, 2, 6, 1, 5, 8])


def test_level_sequences():
    w = Word([3, 2, 1] * 5, cartan_a(3))
    assert upperSequence(w, 15) == [3, 6, 9, 12]
    assert upperSequence(w, 14) == [2, 5, 8, 11]


def test_adaptable_embed_word():
    w = embed_word()
    ad = adaptableData(w, [(2, 1), (2, 3), (3, 4), (4, 5)])
    assert ad.a == [6, 6, 6, 6, 6, 4, 4, 4, 4, 2, 2, 2, 0]
    assert ad.a[:5] == [ad.a[-1] + 6] * 5
    assert adaptableData(w, anchor=4).a[:5] == [10] * 5
    json.dumps(ad.to_json())


def test_short_word_levels():
    w = Word([2, 1, 3, 5, 4], cartan_a(5))
    assert adaptableData(w, [(2, 1), (2, 3), (3, 4), (4, 5)]).a == [4, 4, 2, 2, 0]


def test_wild_not_adaptable():
    w = wild_word()
    assert not isSinkSequence(w, sinkOrientation(w))
    with pytest.raises(NotAdaptable):
        adaptableData(w)


def test_theta_maps():
    w = type_a_word()
    ad = adaptableData(w)
    X, Y = thetaMaps(w, ad)
    for i in range(1, 5):
        k = w.min_of(i)
        assert X[k] == {(i, ad.a[k - 1]): 1}
    for k, y in Y.items():
        assert y == gscale(aMonomial(w.letter(k), ad.a[k - 1] - 1, ad.grading), -1)
    assert thetaYConsistent(w, ad)
    # theta^{-1} beta at the lowest occurrence is a unit vector
    for i in range(1, 5):
        k = w.min_of(i)
        beta = [0] * w.l
        beta[k - 1] = 1
        assert thetaInvDeg(w, beta) == tuple(beta)


def test_lambda_a1():
    w = Word([1, 1], [[2]])
    ad = adaptableData(w)
    assert ad.a == [2, 0]
    L = lambdaFromNForm(w, ad)
    assert L == ((0, 2), (-2, 0))
    ws = buildGammaSeed(w, L)
    # the compatibility diagonal comes out +2
    assert checkCompatible(ws.seed.lam, ws.seed.btilde) == (2,)


def test_n_form_twist_value():
    gr = adaptableData(Word([1, 1], [[2]])).grading
    ystring = {(1, 2): 1, (1, 4): 1}
    assert nForm(ystring, gscale(aMonomial(1, 1, gr), -1), gr) == -2
    assert nForm(e(1, 4), gscale(aMonomial(1, 1, gr), -1), gr) == 0


@pytest.mark.parametrize("make", [type_a_word, embed_word], ids=["type_a", "embed"])
def test_word_seed_reachable(make):
    w = make()
    ad = adaptableData(w)
    L = lambdaFromNForm(w, ad)
    assert all(L[i][j] == -L[j][i] for i in range(w.l) for j in range(w.l))
    ws = buildGammaSeed(w, L)
    D = checkCompatible(ws.seed.lam, ws.seed.btilde)
    assert set(D) == {2}
    Sigma, sigma = glsData(w)
    rd = checkInjectiveReachable(ws.seed, ws.to_internal(Sigma), ws.perm_internal(sigma))
    fast = checkInjectiveReachable(ws.seed, ws.to_internal(Sigma), ws.perm_internal(sigma), expand=False)
    assert rd == fast


def test_wild_word_reachable_degree_only():
    w = wild_word()
    ws = buildGammaSeed(w)
    Sigma, sigma = glsData(w)
    checkInjectiveReachable(ws.seed, ws.to_internal(Sigma), ws.perm_internal(sigma), expand=False)


def test_equivalent_sequences():
    w = Word([3, 2, 1] * 3, cartan_a(3))
    ad = adaptableData(w)
    assert ad.a == [4, 4, 4, 2, 2, 2, 0, 0, 0]
    ws = buildGammaSeed(w, lambdaFromNForm(w, ad))
    st0 = ClusterState.initial(ws.seed)
    a = applySequence(st0, ws.to_internal([6, 3, 5, 2, 4, 1]))
    b = applySequence(st0, ws.to_internal([6, 5, 4, 3, 2, 1]))
    assert a.seed.same_pair(b.seed)
    assert a.vars == b.vars


def test_word_json():
    w = embed_word()
    back = Word.from_json(json.loads(json.dumps(w.to_json())))
    assert back.written == w.written and back.cartan == w.cartan


words = st.lists(st.integers(1, 3), min_size=3, max_size=9).filter(lambda x: set(x) == {1, 2, 3})


@settings(max_examples=50, deadline=None)
@given(words)
def test_sigma_involution(letters):
    w = Word(letters, cartan_a(3))
    _, sigma = glsData(w)
    assert all(sigma[sigma[k]] == k for k in sigma)
    assert all(w.letter(sigma[k]) == w.letter(k) for k in sigma)


@settings(max_examples=50, deadline=None)
@given(words)
def test_arrow_multiplicities(letters):
    w = Word(letters, cartan_a(3))
    for (s, t), c in gammaArrows(w).items():
        if t == w.plus(s):
            continue
        assert c == -w.c(w.letter(s), w.letter(t))
