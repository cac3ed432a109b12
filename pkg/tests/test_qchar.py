from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qtoroidal.exact import var
from qtoroidal.qchar import (
    TENSOR_MODES, YMonomial, YPoly, character_product, classical_projection, monomial_of, mult_check, multiply,
    projection_check, psi_convolution_check, qcharacter, square_check, tensor,
)
from qtoroidal.rep import Z, evaluation_module as ev, lweight_decomposition, trivial_loop

q, a, b = var("q"), var("a"), var("b")


def Y(point, e=1, k=None):
    return YMonomial((Fraction(e if k is None else k),), (((1, point), e),))


def test_monomials_of_v1():
    top, low = lweight_decomposition(ev(1, a))
    assert monomial_of(top) == Y(a / q)
    assert monomial_of(low) == Y(a * q, -1)


def test_trivial():
    (lw,) = lweight_decomposition(trivial_loop())
    assert monomial_of(lw) == YMonomial.unit()
    assert qcharacter(trivial_loop()) == YPoly.one()


def test_qcharacter_v1():
    assert qcharacter(ev(1, a)) == YPoly({Y(a / q): 1, Y(a * q, -1): 1})


def test_qcharacter_v2():
    chi = qcharacter(ev(2, a))
    assert chi.coefficient_sum() == 3
    assert all(m.compatible() for m in chi.terms)


@pytest.mark.parametrize("mode", TENSOR_MODES)
def test_coefficient_sum_of_tensor(mode):
    assert qcharacter(tensor(ev(1, a), ev(1, b), mode)).coefficient_sum() == 4


@pytest.mark.parametrize("mode", TENSOR_MODES)
@pytest.mark.parametrize("n1,n2", [(1, 1), (1, 2), (2, 1)])
def test_multiplicativity(mode, n1, n2):
    V1, V2 = ev(n1, a), ev(n2, b)
    assert mult_check(V1, V2, mode)["ok"]
    assert square_check(V1, V2, mode)["ok"]


def test_multiply_by_one():
    chi = qcharacter(ev(1, a))
    assert multiply(chi, YPoly.one()) == chi


def test_projection():
    assert classical_projection(qcharacter(ev(1, a))) == {(Fraction(1),): 1, (Fraction(-1),): 1}
    assert classical_projection(YPoly.one()) == {(Fraction(0),): 1}
    for n in range(4):
        assert projection_check(ev(n, a))


def test_psi_convolution():
    p1 = (q - a / q * Z) / (1 - a * Z)
    p2 = (q - b / q * Z) / (1 - b * Z)
    assert psi_convolution_check(p1, p2, 6)


def test_json_shape():
    js = qcharacter(ev(1, a)).to_json()
    assert sorted(d["mult"] for d in js) == [1, 1]
    assert all(set(d) == {"k", "Y", "mult"} for d in js)


points = st.sampled_from([a, b, a * q, b / q, q ** 2])
monos = st.builds(lambda p, e: Y(p, e), points, st.integers(-2, 2))
polys = st.dictionaries(monos, st.integers(-2, 3), max_size=3).map(YPoly)


@settings(max_examples=50, deadline=None)
@given(polys, polys, polys)
def test_ring_axioms(x, y, w):
    assert multiply(multiply(x, y), w) == multiply(x, multiply(y, w))
    assert multiply(x, y) == multiply(y, x)
    assert multiply(x, y + w) == multiply(x, y) + multiply(x, w)
    assert multiply(x, YPoly.one()) == x


@settings(max_examples=50, deadline=None)
@given(monos, monos)
def test_compatibility_preserved(m1, m2):
    assert (m1 * m2).compatible()


@settings(max_examples=30, deadline=None)
@given(polys, polys)
def test_projection_is_multiplicative(x, y):
    assert classical_projection(multiply(x, y)) == character_product(classical_projection(x), classical_projection(y))
