from __future__ import annotations

import json
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from qcluster.qcoeff import QScalar, barScalar, isInNegIdeal

from fixtures import q

scalars = st.dictionaries(st.integers(-8, 8), st.integers(-5, 5), max_size=5).map(QScalar)
neg_scalars = st.dictionaries(st.integers(-8, -1), st.integers(-5, 5), max_size=4).map(QScalar)


def test_bar_examples():
    assert barScalar(q(1)) == q(-1)
    assert barScalar(QScalar(1) + q(2)) == QScalar(1) + q(-2)
    sym = q(1) + q(-1)
    assert barScalar(sym) == sym


def test_neg_ideal_examples():
    assert isInNegIdeal(q(-1))
    assert not isInNegIdeal(QScalar(1))
    assert isInNegIdeal(q(-1) + q(-2, 3))
    assert isInNegIdeal(QScalar(0))


def test_zero_terms_dropped():
    s = QScalar({0: 1, 2: 0, 3: 2}) + QScalar({3: -2})
    assert s.terms == {0: 1}
    assert QScalar({1: 0}).is_zero()


def test_exact_div():
    a = (QScalar(1) + q(1)) * (q(-1) + q(3, 2))
    assert a.exact_div(QScalar(1) + q(1)) == q(-1) + q(3, 2)
    assert (QScalar(1) + q(2)).exact_div(QScalar(1) + q(1)) is None
    with pytest.raises(ZeroDivisionError):
        a.exact_div(QScalar())


def test_scale_exponents():
    assert (q(1) + q(-1)).scale_exponents(2) == q(2) + q(-2)
    with pytest.raises(ValueError):
        q(1).scale_exponents(Fraction(1, 2))


def test_str():
    assert str(q(1) + q(-1)) == "q^1/2 + q^-1/2"
    assert str(QScalar()) == "0"


@given(scalars, scalars, scalars)
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == QScalar()


@given(scalars)
def test_canonical_roundtrip(a):
    assert all(c != 0 for _, c in a.items())
    assert QScalar.from_list(json.loads(json.dumps(a.to_list()))) == a


@given(scalars, scalars)
def test_bar_multiplicative_involution(a, b):
    assert barScalar(a * b) == barScalar(a) * barScalar(b)
    assert barScalar(barScalar(a)) == a


@given(neg_scalars, neg_scalars)
def test_neg_ideal_closed(a, b):
    assert isInNegIdeal(a * b)
    assert isInNegIdeal(a + b)
