import json

import pytest
from hypothesis import given, settings, strategies as st

from qtoroidal.exact import ONE, Matrix, qpow, var
from qtoroidal.fusion import generic_irreducibility_scan, qpow_grid
from qtoroidal.rep import evaluation_module as ev
from qtoroidal.rmat import (
    NORMALIZATION, RMat, RMatError, assemble_product, block_diagonal, commute_check, fixes_hw, intertwines, poles,
    product_module, resubstitute, solve_evaluation, solve_rmatrix, transfer, transfer_of, trivial_rmatrix,
    unitarity, ybe_check, ybe_sides,
)

q, x, b, c, y = (var(s) for s in "qxbcy")


@pytest.fixture(scope="module")
def R22():
    return solve_evaluation(1, 1)


@pytest.fixture(scope="module")
def R23():
    return solve_evaluation(1, 2)


def test_unique_solutions(R22, R23):
    assert R22.nullity == 1 and R23.nullity == 1
    assert R22.normalization == NORMALIZATION == "hw->hw"
    assert R22.matrix[0, 0].is_one() and R23.matrix[0, 0].is_one()


def test_current_level_intertwiner(R22, R23):
    assert resubstitute(R22) and resubstitute(R23)


def test_2x2_block(R22):
    M = R22.matrix
    assert M[1, 2] == (q - q * x) / (q ** 2 - x)
    assert M[2, 1] == (q ** 2 * x - 1) / (q * x - q)
    assert M[3, 3].is_one() and M[1, 1].is_zero()


def test_classical_coproduct_block():
    R = solve_evaluation(1, 1, "Delta")
    assert R.nullity == 1 and resubstitute(R)
    # the Delta-version carries the familiar trigonometric weight-zero block, diagonal entries nonzero
    assert not R.matrix[1, 1].is_zero() and not R.matrix[1, 2].is_zero()


def test_x_zero_keeps_normalization(R22):
    M0 = R22.at(0)
    assert M0[0, 0].is_one() and M0[3, 3].is_one()


def test_pole_refused(R22):
    with pytest.raises(RMatError):
        R22.at(qpow(2))


def test_poles_2x2(R22):
    p = poles(R22)
    assert set(map(str, p["poles"])) == {str(ONE), str(qpow(2))}
    assert set(map(str, p["det_zeros"])) == {str(qpow(-2))}
    assert set(map(str, p["special"])) == {str(ONE), str(qpow(2)), str(qpow(-2))}


def test_poles_2x3(R23):
    assert set(map(str, poles(R23)["special"])) == {str(qpow(e)) for e in (-3, -1, 1, 3)}


def test_trivial_factor():
    t = trivial_rmatrix(ev(1, "a"))
    assert t.matrix == Matrix.identity(2)
    assert poles(t)["special"] == []


def test_scan_agrees_with_poles(R22):
    rows = generic_irreducibility_scan(1, 1, qpow_grid(-4, 4))
    grid = {r["ratio"] for r in rows}
    undefined = {r["ratio"] for r in rows if r["class"] == "undefined"}
    special = {r["ratio"] for r in rows if r["class"] == "special"}
    p = poles(R22)
    assert special == {str(s) for s in p["special"]} & grid - undefined
    assert undefined <= {str(s) for s in p["poles"]}


def test_ybe_symbolic(R22):
    assert ybe_check(R22, R22, R22)["ok"]


def test_ybe_specialization(R22):
    lhs, rhs = ybe_sides(R22.at(qpow(4)), R22.at(qpow(8)), R22.at(qpow(4)), (2, 2, 2))
    assert lhs == rhs


def test_ybe_with_trivial_factor(R22):
    t = trivial_rmatrix(ev(1, "a")).matrix
    lhs, rhs = ybe_sides(t, t, R22.matrix, (1, 2, 2))
    assert lhs == rhs


def test_unitarity_is_scalar(R22):
    u = unitarity(R22, R22)
    assert u["scalar"] and u["factor"] == "(1)"


def test_transfer(R22):
    T = transfer_of(R22)
    assert fixes_hw(T.matrix)
    Tb = transfer(R22.matrix.subs({"x": b}), 2, 2).matrix
    Tc = transfer(R22.matrix.subs({"x": c}), 2, 2).matrix
    assert commute_check(Tb, Tc)["ok"]


def test_transfer_on_assembled_space(R22, R23):
    solved = {(2, 2): R22, (2, 3): R23}
    Mb = assemble_product([(2, ONE), (2, y)], [(2, b)], solved)
    Mc = assemble_product([(2, ONE), (2, y)], [(3, c)], solved)
    Tb, Tc = transfer(Mb, 4, 2).matrix, transfer(Mc, 4, 3).matrix
    assert commute_check(Tb, Tc)["ok"] and fixes_hw(Tb) and fixes_hw(Tc)


def test_assembled_intertwiner(R22):
    M = assemble_product([(2, ONE), (2, y)], [(2, b)], {(2, 2): R22})
    S = product_module([ev(1, ONE), ev(1, "y"), ev(1, "b")])
    T = product_module([ev(1, "b"), ev(1, ONE), ev(1, "y")])
    assert intertwines(M, S, T) and M[0, 0].is_one()


def test_singleton_and_block_sum(R22):
    M = assemble_product([(2, ONE)], [(2, b)], {(2, 2): R22})
    assert M == R22.matrix.subs({"x": b})
    D = block_diagonal([M, M])
    assert D.nrows == 8 and D[4, 4].is_one()


def test_json_round_trip(R23):
    back = RMat.from_json(json.loads(json.dumps(R23.to_json())))
    assert back.matrix == R23.matrix and back.dims == R23.dims and back.nullity == R23.nullity


@settings(max_examples=8, deadline=None)
@given(st.integers(-6, 6).filter(lambda e: abs(e) != 2 and e != 0))
def test_invertible_off_special_set(R22, e):
    assert not R22.at(qpow(e)).det().is_zero()


@settings(max_examples=5, deadline=None)
@given(st.sampled_from([(5, 8, 12), (0, 3, 9), (1, 5, 12)]))
def test_ybe_numeric_points(R22, pts):
    a_, b_, c_ = (q ** p for p in pts)
    lhs, rhs = ybe_sides(R22.at(b_ / a_), R22.at(c_ / a_), R22.at(c_ / b_), (2, 2, 2))
    assert lhs == rhs


def test_solver_direct():
    R = solve_rmatrix(ev(1, 1), ev(1, "x"))
    assert R.nullity == 1
