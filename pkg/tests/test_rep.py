import pytest
from hypothesis import given, settings, strategies as st

from qtoroidal.exact import ONE, Matrix, expand, var
from qtoroidal.rep import (
    Z, affine_inverse_check, braid_relation_check, counit_tensor, current, current_consistency,
    drinfeld_polynomials, evaluation_module, finite_irrep, highest_lweight, lusztig_operator_check,
    lweight_decomposition, relation_check, sl3_module, spectral_twist, synthesize_psi, tensor_classical,
    trivial_loop, weight_shift_check,
)
from qtoroidal.term import kk, xm, xp

q, a, b = var("q"), var("a"), var("b")
QQ = q - 1 / q


def _ok(rows):
    return all(r["ok"] for r in rows)


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_finite_irreps(n):
    F = finite_irrep(n)
    assert F.dim == n + 1 and _ok(relation_check(F))


def test_finite_v1_matrices():
    F = finite_irrep(1)
    assert F.mat(xp(1, 0)) == Matrix.unit(2, 0, 1)
    assert F.mat(xm(1, 0)) == Matrix.unit(2, 1, 0)
    assert F.mat(kk(1)) == Matrix.diag([q, 1 / q])


def test_finite_trivial():
    F = finite_irrep(0)
    assert F.mat(xp(1, 0)).is_zero() and F.mat(kk(1)) == Matrix.identity(1)


@pytest.mark.parametrize("n", [0, 1, 2, 3])
def test_evaluation_relations(n):
    V = evaluation_module(n, "a")
    assert _ok(relation_check(V, "all", 6))
    assert _ok(current_consistency(V, 6))
    assert _ok(weight_shift_check(V, 6))


def test_evaluation_v1_modes():
    L = evaluation_module(1, "a").loop
    for m in range(-3, 4):
        assert L.xp(m) == Matrix.unit(2, 0, 1).scale(a ** m)
    for s in range(1, 4):
        assert L.phi_plus(s) == Matrix.diag([ONE, -ONE]).scale(a ** s * QQ)
    assert L.phi_plus(0) == Matrix.diag([q, 1 / q])
    assert L.phi_minus(0) == Matrix.diag([1 / q, q])


def test_phi_current_on_top_vector():
    Phi = current(evaluation_module(1, "a"), "phi+")
    assert Phi.rows[0][0] == (q - a / q * Z) / (1 - a * Z)


def test_trivial_module():
    t = trivial_loop()
    assert current(t, "phi+") == Matrix.identity(1)
    (lw,) = lweight_decomposition(t)
    assert lw.psi == ONE
    assert drinfeld_polynomials(lw).to_json() == {"P": ["(1)"]}


def test_lweights_of_v1():
    top, low = lweight_decomposition(evaluation_module(1, "a"))
    assert top.psi == (q - a / q * Z) / (1 - a * Z)
    assert low.psi == (1 / q - a * q * Z) / (1 - a * Z)
    assert top.multiplicity == low.multiplicity == 1
    assert drinfeld_polynomials(top).to_json() == {"P": [str(1 - a / q * Z)]}
    # lower l-weight: not l-dominant, given as a (Q, R) pair
    assert drinfeld_polynomials(low).to_json() == {"Q": ["(1)"], "R": [str(1 - a * q * Z)]}


def test_synthesis_round_trip():
    P = 1 - a / q * Z
    assert synthesize_psi(P) == (q - a / q * Z) / (1 - a * Z)


def test_classical_tensor_lweights():
    T = tensor_classical(evaluation_module(1, "a"), evaluation_module(1, "b"), "Delta")
    assert sorted(T.weights) == [(-2,), (0,), (0,), (2,)]
    lws = lweight_decomposition(T)
    assert sum(l.multiplicity for l in lws) == 4
    top = highest_lweight(T)
    ea = (q - a / q * Z) / (1 - a * Z)
    eb = (q - b / q * Z) / (1 - b * Z)
    assert top.psi == ea * eb


def test_classical_counit():
    V = evaluation_module(1, "a")
    for side in ("left", "right"):
        E = counit_tensor(V, "Delta", side)
        for g in (xp(1, 0), xm(1, 0), kk(1)):
            assert E.mat(g) == V.mat(g)


def test_spectral_twists():
    V = evaluation_module(1, "a")
    assert drinfeld_polynomials(highest_lweight(spectral_twist(V, b, "Z"))).to_json() == {"P": [str(1 - a * b / q * Z)]}
    assert drinfeld_polynomials(highest_lweight(spectral_twist(V, b, "v"))).to_json() == {"P": [str(1 - a * b ** 2 / q * Z)]}
    same = spectral_twist(V, ONE, "Z")
    assert all(same.loop.xp(m) == V.loop.xp(m) for m in range(-2, 3))


@pytest.mark.parametrize("name", ["vector", "adjoint"])
def test_sl3_braid_relations(name):
    M = sl3_module(name)
    assert _ok(relation_check(M))
    assert _ok(braid_relation_check(M))
    assert _ok(lusztig_operator_check(M))


def test_affine_inverse_on_modules():
    assert _ok(affine_inverse_check("A1~1", [evaluation_module(1, "a"), evaluation_module(2, "a")]))


@settings(max_examples=10, deadline=None)
@given(st.integers(1, 2), st.fractions(min_value=-4, max_value=4).filter(lambda f: f != 0))
def test_numeric_evaluation_points(n, val):
    V = evaluation_module(n, val)
    assert _ok(relation_check(V, "loop", 3))


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 3))
def test_lweight_multiplicities_sum_to_dim(n):
    V = evaluation_module(n, "a")
    assert sum(l.multiplicity for l in lweight_decomposition(V)) == V.dim


@settings(max_examples=10, deadline=None)
@given(st.integers(1, 3))
def test_phi_series_matches_modes(n):
    V = evaluation_module(n, "a")
    Phi = current(V, "phi+")
    for i in range(V.dim):
        s = expand(Phi.rows[i][i], "z", "0", 4)
        assert [s.coeff(r) for r in range(5)] == [V.loop.phi_plus(r).rows[i][i] for r in range(5)]
