"""Spectral R-matrices between evaluation modules, Yang-Baxter checks, poles and transfer matrices.

An R-matrix here is the braided intertwiner R(x): V1_a (x) V2_b -> V2_b (x) V1_a with x = b/a,
normalized by v (x) v -> v (x) v.  Tensor products use Delta_{u=1} (mode "Delta_u1") or the
classical coproduct (mode "Delta").
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .exact import ONE, ZERO, Matrix, Scalar, linear_roots, to_scalar, var
from .fusion import drinfeld_tensor
from .rep import Rep, evaluation_module, tensor_classical, trivial_loop

X = var("x")
NORMALIZATION = "hw->hw"


class RMatError(ValueError):
    pass


@dataclass(frozen=True)
class RMat:
    dims: tuple[int, int]
    mode: str
    matrix: Matrix                      # entries in Q(q)(x); rows index V2 (x) V1, columns V1 (x) V2
    nullity: int
    normalization: str = NORMALIZATION
    window: int = 0
    labels: tuple[str, str] = ("", "")

    def at(self, ratio) -> Matrix:
        ratio = to_scalar(var(ratio) if isinstance(ratio, str) else ratio)
        for den in {a.denominator() for r in self.matrix.rows for a in r}:
            if den.subs({"x": ratio}).is_zero():
                raise RMatError(f"R has a pole at x = {ratio}")
        return self.matrix.subs({"x": ratio})

    def to_json(self) -> dict:
        return {"dims": list(self.dims), "mode": self.mode, "normalization": self.normalization,
                "nullity": self.nullity, "window": self.window, "labels": list(self.labels),
                "matrix": self.matrix.to_strings()}

    @classmethod
    def from_json(cls, d: dict) -> "RMat":
        return cls(tuple(d["dims"]), d["mode"], Matrix.from_strings(d["matrix"]), d["nullity"],
                   d["normalization"], d["window"], tuple(d["labels"]))


def _tensor(r1: Rep, r2: Rep, mode: str) -> Rep:
    if mode == "Delta_u1":
        return drinfeld_tensor(r1, r2, ONE)
    if mode == "Delta":
        return tensor_classical(r1, r2, "Delta")
    raise RMatError(f"unknown tensor mode {mode}")


def _generator_pairs(S: Rep, T: Rep, mode: str, window: int) -> list[tuple[str, Matrix, Matrix]]:
    if mode == "Delta":
        return [(str(g), S.gens[g], T.gens[g]) for g in sorted(S.gens, key=str) if g in T.gens]
    LS, LT = S.loop, T.loop
    out = [("k", LS.k, LT.k)]
    for m in range(-window, window + 1):
        out.append((f"x+_{m}", LS.xp(m), LT.xp(m)))
        out.append((f"x-_{m}", LS.xm(m), LT.xm(m)))
    for s in range(1, window + 1):
        out.append((f"phi+_{s}", LS.phi_plus(s), LT.phi_plus(s)))
    return out


def _unknowns(S: Rep, T: Rep) -> list[tuple[int, int]]:
    """(row, col) positions allowed by weight: T-row weight = S-column weight."""
    return [(p, c) for c in range(S.dim) for p in range(T.dim) if T.weights[p] == S.weights[c]]


def intertwiner_system(S: Rep, T: Rep, pairs, unknowns) -> Matrix:
    """Coefficient matrix of R G_S - G_T R = 0 in the unknown entries of R."""
    pos = {u: n for n, u in enumerate(unknowns)}
    rows = []
    n = T.dim
    for _, GS, GT in pairs:
        for p in range(n):
            for c in range(S.dim):
                row = [ZERO] * len(unknowns)
                for d in range(S.dim):
                    g = GS[d, c]
                    if not g.is_zero() and (p, d) in pos:
                        row[pos[(p, d)]] = row[pos[(p, d)]] + g
                for e in range(n):
                    g = GT[p, e]
                    if not g.is_zero() and (e, c) in pos:
                        row[pos[(e, c)]] = row[pos[(e, c)]] - g
                if any(not x.is_zero() for x in row):
                    rows.append(row)
    return Matrix(rows, len(unknowns))


def solve_rmatrix(r1: Rep, r2: Rep, mode: str = "Delta_u1", max_window: int = 4) -> RMat:
    """Solve R (V1 (x) V2) = (V2 (x) V1) R on a growing window until the solution space is a line."""
    S, T = _tensor(r1, r2, mode), _tensor(r2, r1, mode)
    unknowns = _unknowns(S, T)
    for window in range(1, max_window + 1):
        system = intertwiner_system(S, T, _generator_pairs(S, T, mode, window), unknowns)
        null = system.nullspace()
        if len(null) == 1 or mode == "Delta":
            break
    if len(null) != 1:
        raise RMatError(f"intertwiner space has dimension {len(null)} (non-generic parameters?)")
    vec = null[0]
    R = [[ZERO] * S.dim for _ in range(T.dim)]
    for (p, c), val in zip(unknowns, vec):
        R[p][c] = val
    hw = R[0][0]
    if hw.is_zero():
        raise RMatError("solution does not reach the highest-weight vector")
    M = Matrix(R).scale(hw.inverse())
    rm = RMat((r1.dim, r2.dim), mode, M, len(null), window=window, labels=(r1.label, r2.label))
    if not intertwines(M, S, T, mode):
        raise RMatError("window solution fails the all-mode intertwiner identity")
    return rm


def evaluation_pair(n1: int, n2: int) -> tuple[Rep, Rep]:
    """V(n1)_1 and V(n2)_x."""
    return evaluation_module(n1, ONE), evaluation_module(n2, "x")


def solve_evaluation(n1: int, n2: int, mode: str = "Delta_u1") -> RMat:
    return solve_rmatrix(*evaluation_pair(n1, n2), mode)


def intertwines(M: Matrix, S: Rep, T: Rep, mode: str = "Delta_u1") -> bool:
    """Current-level check: k, phi(z) and every mode-family coefficient are intertwined."""
    if mode == "Delta":
        return all((M @ GS) == (GT @ M) for _, GS, GT in _generator_pairs(S, T, mode, 0))
    LS, LT = S.loop, T.loop
    if M @ LS.k != LT.k @ M or M @ LS.Phi != LT.Phi @ M:
        return False
    zero_s, zero_t = Matrix.zeros(S.dim), Matrix.zeros(T.dim)
    for fs, ft in zip(LS.families(), LT.families()):
        ds, dt = dict(fs), dict(ft)
        for lam in set(ds) | set(dt):
            if M @ ds.get(lam, zero_s) != dt.get(lam, zero_t) @ M:
                return False
    return True


def resubstitute(rm: RMat, r1: Rep | None = None, r2: Rep | None = None) -> bool:
    """Re-verify a (possibly deserialized) R against freshly built modules."""
    if r1 is None:
        r1, r2 = evaluation_pair(rm.dims[0] - 1, rm.dims[1] - 1)
    S, T = _tensor(r1, r2, rm.mode), _tensor(r2, r1, rm.mode)
    return intertwines(rm.matrix, S, T, rm.mode) and rm.matrix[0, 0].is_one()


# ---------------------------------------------------------------------------
# composites

def embed(M: Matrix, dims: Sequence[int], pos: int) -> Matrix:
    """Id (x) M (x) Id acting on the factors pos, pos + 1."""
    left = 1
    for d in dims[:pos]:
        left *= d
    right = 1
    for d in dims[pos + 2:]:
        right *= d
    return Matrix.identity(left).kron(M).kron(Matrix.identity(right))


def ybe_sides(R12: Matrix, R13: Matrix, R23: Matrix, d: Sequence[int]) -> tuple[Matrix, Matrix]:
    """Both braid composites V1 (x) V2 (x) V3 -> V3 (x) V2 (x) V1.

    R12: V1 V2 -> V2 V1, R13: V1 V3 -> V3 V1, R23: V2 V3 -> V3 V2.
    """
    d1, d2, d3 = d
    lhs = embed(R12, (d3, d1, d2), 1) @ embed(R13, (d1, d3, d2), 0) @ embed(R23, (d1, d2, d3), 1)
    rhs = embed(R23, (d2, d3, d1), 0) @ embed(R13, (d2, d1, d3), 1) @ embed(R12, (d1, d2, d3), 0)
    return lhs, rhs


def ybe_check(R12: RMat, R13: RMat, R23: RMat, a="a", b="b", c="c") -> dict:
    """(Id (x) R12(b/a))(R13(c/a) (x) Id)(Id (x) R23(c/b)) = (R23(c/b) (x) Id)(Id (x) R13(c/a))(R12(b/a) (x) Id)."""
    a, b, c = (to_scalar(var(s) if isinstance(s, str) else s) for s in (a, b, c))
    try:
        m12, m13, m23 = R12.at(b / a), R13.at(c / a), R23.at(c / b)
    except RMatError as exc:
        return {"ok": None, "skipped": str(exc)}
    dims = (R12.dims[0], R12.dims[1], R13.dims[1])
    lhs, rhs = ybe_sides(m12, m13, m23, dims)
    diff = lhs - rhs
    return {"ok": diff.is_zero(), "first_nonzero": None if diff.is_zero() else str(diff.first_nonzero()),
            "points": [str(a), str(b), str(c)]}


def assemble_product(alphas: Sequence[tuple[int, Scalar]], betas: Sequence[tuple[int, Scalar]],
                     solved: dict[tuple[int, int], RMat]) -> Matrix:
    """Braid the factors beta_1..beta_s of A (x) B past alpha_1..alpha_k, one crossing at a time.

    ``alphas``/``betas`` list (dim, spectral point); ``solved[(d_alpha, d_beta)]`` holds R(x).
    Result: (x) alphas (x) (x) betas -> (x) betas (x) (x) alphas, normalized hw -> hw.
    """
    order = [("a", i) for i in range(len(alphas))] + [("b", r) for r in range(len(betas))]
    spec = {("a", i): alphas[i] for i in range(len(alphas))}
    spec.update({("b", r): betas[r] for r in range(len(betas))})
    total = 1
    for d, _ in list(alphas) + list(betas):
        total *= d
    out = Matrix.identity(total)
    for r in range(len(betas)):
        p = order.index(("b", r))
        while p > 0 and order[p - 1][0] == "a":
            left = order[p - 1]
            (da, pa), (db, pb) = spec[left], spec[("b", r)]
            key = (da, db)
            if key not in solved:
                raise RMatError(f"missing R-matrix for dims {key}")
            M = solved[key].at(to_scalar(pb) / to_scalar(pa))
            dims = [spec[f][0] for f in order]
            out = embed(M, dims, p - 1) @ out
            order[p - 1], order[p] = order[p], order[p - 1]
            p -= 1
    return out


def product_module(factors: Sequence[Rep], mode: str = "Delta_u1") -> Rep:
    rep = factors[0]
    for f in factors[1:]:
        rep = _tensor(rep, f, mode)
    return rep


def block_diagonal(blocks: Sequence[Matrix]) -> Matrix:
    n = sum(b.nrows for b in blocks)
    m = sum(b.ncols for b in blocks)
    rows = [[ZERO] * m for _ in range(n)]
    i0 = j0 = 0
    for b in blocks:
        for i in range(b.nrows):
            for j in range(b.ncols):
                rows[i0 + i][j0 + j] = b[i, j]
        i0 += b.nrows
        j0 += b.ncols
    return Matrix(rows, m)


# ---------------------------------------------------------------------------
# poles, invertibility, unitarity

def _x_roots(s: Scalar) -> set[Scalar]:
    if s.degree_in("x")[0] == 0:
        return set()
    return {r for r, _ in linear_roots(s, "x")}


def poles(rm: RMat) -> dict:
    """Denominator roots and determinant zeros of R(x), as points in x."""
    pole_set: set[Scalar] = set()
    for row in rm.matrix.rows:
        for a in row:
            pole_set |= _x_roots(a.denominator())
    det = rm.matrix.det()
    zeros = _x_roots(det.numerator())
    det_poles = _x_roots(det.denominator())
    special = sorted(pole_set | zeros, key=str)
    return {"poles": sorted(pole_set, key=str), "det_zeros": sorted(zeros, key=str),
            "det_poles": sorted(det_poles, key=str), "special": special, "det": det}


def unitarity(rm12: RMat, rm21: RMat) -> dict:
    """R21(1/x) R12(x): measured, reported as scalar or not (no claim is made)."""
    M = rm21.matrix.subs({"x": ONE / X}) @ rm12.matrix
    diag = M.diagonal()
    scalar = M.is_diagonal() and all(d == diag[0] for d in diag)
    return {"scalar": scalar, "factor": str(diag[0]) if scalar else None,
            "product": M.to_strings()}


# ---------------------------------------------------------------------------
# transfer matrices

@dataclass(frozen=True)
class TransferMat:
    matrix: Matrix                   # End(V_alpha), rational in x
    aux_dim: int
    aux_label: str = ""

    def at(self, ratio) -> Matrix:
        ratio = to_scalar(var(ratio) if isinstance(ratio, str) else ratio)
        return self.matrix.subs({"x": ratio})


def transfer(R: Matrix, d_alpha: int, d_beta: int, aux_label: str = "", top: int = 0) -> TransferMat:
    """R(v (x) w_top) = w_top (x) T(v) mod lower weights of the auxiliary: T[i, j] = R[(top, i), (j, top)]."""
    rows = [[R[top * d_alpha + i, j * d_beta + top] for j in range(d_alpha)] for i in range(d_alpha)]
    return TransferMat(Matrix(rows), d_beta, aux_label)


def transfer_of(rm: RMat) -> TransferMat:
    return transfer(rm.matrix, rm.dims[0], rm.dims[1], rm.labels[1])


def commute_check(T1: Matrix, T2: Matrix) -> dict:
    C = T1 @ T2 - T2 @ T1
    return {"ok": C.is_zero(), "first_nonzero": None if C.is_zero() else str(C.first_nonzero())}


def fixes_hw(T: Matrix) -> bool:
    col = T.column(0)
    return col[0].is_one() and all(c.is_zero() for c in col[1:])


def trivial_rmatrix(rep: Rep, mode: str = "Delta_u1") -> RMat:
    return solve_rmatrix(rep, trivial_loop(), mode)
