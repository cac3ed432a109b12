import pytest
from hypothesis import given, settings, strategies as st

from qtoroidal.cartan import build
from qtoroidal.dab import (
    a1_word_set, act, acting_word, affinized_relation_report, dict_to_bernstein, dict_to_coxeter, gamma_v,
    involution_report, program_closed_form_report, psi_compatibility_check, relation_report, t_involution, word,
)
from qtoroidal.term import Term, kk, xm, xp

DT = build("A1~1")


def W(text):
    return word(DT, text)


def test_table_dictionary():
    assert dict_to_bernstein(W("T0v")) == W("X[2] T1^-1")
    assert dict_to_bernstein(W("rho1")) == W("X[1] T1^-1")
    assert dict_to_coxeter(W("Y[0]")) == W("")


def test_round_trips():
    for text in ("T0", "T1", "T0v", "rho1", "pi1", "X[1]", "Y[-1]"):
        w = W(text)
        assert dict_to_coxeter(dict_to_bernstein(w)) == dict_to_coxeter(w)


def test_t_involution_letters():
    assert t_involution(W("T1")) == W("T1^-1")
    assert t_involution(W("T0")) == W("T0v^-1")
    assert t_involution(t_involution(W("X[1]"))) == W("X[1]")


def test_involution_report():
    assert involution_report(DT)["ok"]


def test_act_examples():
    assert act(W("X[1]"), xp(1, 0)) == Term.word([xp(1, -1)], DT.o[1], DT)
    assert act(W("T1"), xp(1, 0)) == Term.word([xm(1, 0), kk(1)], -1, DT)
    assert act(W(""), xp(1, 0)) == Term.gen(xp(1, 0), DT)


def test_psi_compatibility_identity_word():
    r = psi_compatibility_check(W(""))
    assert r["ok"] and all(row["status"].startswith("literal") for row in r["rows"])


@pytest.mark.parametrize("w", a1_word_set(DT), ids=str)
def test_psi_compatibility_word_set(w):
    assert psi_compatibility_check(w)["ok"]


def test_program_closed_forms():
    assert program_closed_form_report(DT)["ok"]


def test_relations():
    assert relation_report(DT)["ok"]
    assert affinized_relation_report(DT)["ok"]


letters = st.sampled_from(["T0", "T1", "T0v", "pi1", "rho1", "X[1]", "X[-1]", "Y[1]", "T1^-1", "Theta"])


@settings(max_examples=40, deadline=None)
@given(st.lists(letters, max_size=4))
def test_t_is_an_involution(ls):
    w = W(" ".join(ls))
    assert dict_to_coxeter(t_involution(t_involution(w))) == dict_to_coxeter(w)


@settings(max_examples=40, deadline=None)
@given(st.lists(letters, max_size=4))
def test_gamma_v_is_an_involution(ls):
    w = W(" ".join(ls))
    assert acting_word(gamma_v(gamma_v(w))) == acting_word(w)
