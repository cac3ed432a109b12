from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qtoroidal.cartan import AVAILABLE, CartanError, build, check, qbinom, qfact, qint
from qtoroidal.exact import var

q = var("q")


def test_a1_datum():
    dt = build("A1~1")
    assert dt.gcm == ((2, -2), (-2, 2))
    assert dt.a == (1, 1) and dt.a_vee == (1, 1)
    assert dt.hbar == 2 and dt.d == (1, 1)


def test_a2_labels():
    dt = build("A2~1")
    assert dt.a == (1, 1, 1) and dt.hbar == 3


def test_label_spellings_agree():
    assert build("A_2^(1)").gcm == build("A2~1").gcm


@pytest.mark.parametrize("label", AVAILABLE)
def test_null_vectors(label):
    dt = build(label)
    I = dt.nodes
    assert all(sum(dt.gcm[i][j] * dt.a[j] for j in I) == 0 for i in I)
    assert all(sum(dt.a_vee[i] * dt.gcm[i][j] for i in I) == 0 for j in I)
    assert all(check(dt).values())


@pytest.mark.parametrize("label", AVAILABLE)
def test_form_examples(label):
    dt = build(label)
    assert all(dt.form(dt.delta(), dt.alpha(i)) == 0 for i in dt.nodes)
    assert all(dt.pairing(dt.Lambda(i), j) == (i == j) for i in dt.nodes for j in dt.nodes)


def test_alpha1_norm():
    dt = build("A1~1")
    assert dt.form(dt.alpha(1), dt.alpha(1)) == 2


def test_unknown_label():
    with pytest.raises(CartanError):
        build("E9~1")


def test_qnumbers():
    assert qint(2) == q + 1 / q
    assert qfact(3) == (q ** 2 + 1 + q ** -2) * (q + 1 / q)


def test_qbinom_is_laurent():
    b = qbinom(4, 2)
    # denominator is a pure power of q
    assert b.denominator() == q ** b.denominator().degree_in("q")[0]
    assert b == qfact(4) / (qfact(2) * qfact(2))


def _lattice(dt):
    return st.lists(st.integers(-3, 3), min_size=dt.dim, max_size=dt.dim).map(
        lambda cs: tuple(Fraction(c) for c in cs))


@pytest.mark.parametrize("label", AVAILABLE)
@settings(max_examples=20, deadline=None)
@given(data=st.data())
def test_reflections_preserve_form(label, data):
    dt = build(label)
    x, y = data.draw(_lattice(dt)), data.draw(_lattice(dt))
    i = data.draw(st.sampled_from(list(dt.nodes)))
    assert dt.form(dt.reflect(i, x), dt.reflect(i, y)) == dt.form(x, y)


@pytest.mark.parametrize("label", AVAILABLE)
@settings(max_examples=20, deadline=None)
@given(data=st.data())
def test_nu_intertwines_pairing(label, data):
    dt = build(label)
    x = data.draw(_lattice(dt))
    for i in dt.nodes:
        assert dt.form(dt.nu_coroot(i), x) == dt.pairing(x, i)
