"""The Drinfeld coproduct Delta_u on loop modules, and tensor-product operator identities.

With C = 1 and mode families x^+_m = sum lam^m A_lam, x^-_m = sum mu^m B_mu:

    Delta_u(x^+_m) = x^+_m (x) 1 + sum_{l>=0} phi^+_l (x) x^+_{m-l} u^{l-m}
                   -> families (lam1, A1 (x) 1) and (lam2/u, phi1(u/lam2) (x) A2)
    Delta_u(x^-_m) = (1 (x) x^-_m) u^{-m} + sum_{l<=0} x^-_{m-l} (x) phi^-_l u^{-l}
                   -> families (mu2/u, 1 (x) B2) and (mu1, B1 (x) phi2(1/(mu1 u)))
    Delta_u(phi(z)) = phi1(z) (x) phi2(z/u)

The infinite sums are resummed to the rational currents, which is legitimate
exactly when the evaluation point avoids the poles of the current; otherwise
a PoleCollision is raised.
"""

from __future__ import annotations

from typing import Sequence

from .cartan import qint
from .exact import ONE, ZERO, Matrix, linear_roots, Scalar, commutator, qpow, to_scalar, var
from .rep import (
    QQ, Z, FamilyModes, Rep, RepError, check_relations, current_relations, drinfeld_polynomials,
    highest_lweight, loop_relations, loop_rep, presentation_relations, trivial_loop,
)

WINDOW = 6


class PoleCollision(RepError):
    pass


def _eval_current(Phi: Matrix, point: Scalar, what: str) -> Matrix:
    out = []
    for r in Phi.rows:
        row = []
        for a in r:
            den = a.denominator().subs({"z": point})
            if den.is_zero():
                raise PoleCollision(f"pole collision: {what} evaluated at z = {point}, a pole of the current")
            row.append(a.subs({"z": point}))
        out.append(row)
    return Matrix(out)


def drinfeld_tensor(r1: Rep, r2: Rep, u=ONE) -> Rep:
    """V1 (x) V2 through Delta_u (u symbolic or exact)."""
    u = to_scalar(var(u) if isinstance(u, str) else u)
    for r in (r1, r2):
        if r.loop is None or r.loop.families() is None:
            raise RepError(f"{r.label} needs geometric mode families")
    L1, L2 = r1.loop, r2.loop
    I1, I2 = Matrix.identity(L1.dim), Matrix.identity(L2.dim)
    (xp1, xm1), (xp2, xm2) = L1.families(), L2.families()
    xp_fam = [(lam, A.kron(I2)) for lam, A in xp1]
    for lam, A in xp2:
        xp_fam.append((lam / u, _eval_current(L1.Phi, u / lam, f"phi of {r1.label}").kron(A)))
    xm_fam = [(mu / u, I1.kron(B)) for mu, B in xm2]
    for mu, B in xm1:
        xm_fam.append((mu, B.kron(_eval_current(L2.Phi, ONE / (mu * u), f"phi of {r2.label}"))))
    Phi2 = L2.Phi.map(lambda a: a.subs({"z": Z / u}))
    Phi = L1.Phi.kron(Phi2)
    modes = FamilyModes(L1.k.kron(L2.k), xp_fam, xm_fam, Phi)
    weights = tuple((w1[0] + w2[0],) for w1 in r1.weights for w2 in r2.weights)
    tag = "" if u.is_one() else f"[u={u}]"
    return loop_rep(f"({r1.label} * {r2.label}){tag}", weights, modes, factors=(r1, r2))


def pole_ratios(r1: Rep, r2: Rep) -> list[Scalar]:
    """Values of u at which Delta_u(V1 (x) V2) cannot be assembled."""
    out = set()
    xm1, xp2 = r1.loop.families()[1], r2.loop.families()[0]
    for Phi, bases, kind in ((r1.loop.Phi, [lam for lam, _ in xp2], "+"), (r2.loop.Phi, [mu for mu, _ in xm1], "-")):
        poles = set()
        for r in Phi.rows:
            for a in r:
                den = a.denominator()
                if den.degree_in("z")[0]:
                    poles |= {p for p, _ in linear_roots(den, "z")}
        for p in poles:
            for lam in bases:
                out.add(p * lam if kind == "+" else ONE / (p * lam))
    return sorted(out, key=str)


def fusion_relation_check(rep: Rep, window: int = WINDOW) -> list[dict]:
    """Module axioms on a tensor: windowed Drinfeld-new relations, presentation rows and all-mode identities."""
    rows = check_relations(loop_relations(rep, window))
    rows += check_relations(presentation_relations(rep))
    rows += current_relations(rep)
    L = rep.loop
    rows += check_relations([("Delta_u(phi+_0) = k (x) k", L.phi_plus(0) - L.k)])
    return rows


def h_mode_check(r1: Rep, r2: Rep, u=ONE, rmax: int = 4) -> list[dict]:
    """Delta_u(h_r) = h_r (x) 1 + u^{-r} 1 (x) h_r against the h-modes of the assembled tensor."""
    u = to_scalar(var(u) if isinstance(u, str) else u)
    T = drinfeld_tensor(r1, r2, u)
    I1, I2 = Matrix.identity(r1.dim), Matrix.identity(r2.dim)
    named = []
    for r in list(range(-rmax, 0)) + list(range(1, rmax + 1)):
        want = r1.loop.h(r).kron(I2) + I1.kron(r2.loop.h(r)).scale(u ** (-r))
        named.append((f"h_{r}", T.loop.h(r) - want))
    return check_relations(named)


def _modes_equal(A: Rep, B: Rep, window: int) -> list[tuple[str, Matrix]]:
    LA, LB = A.loop, B.loop
    out = [("k", LA.k - LB.k), ("phi(z)", LA.Phi - LB.Phi)]
    for m in range(-window, window + 1):
        out.append((f"x+_{m}", LA.xp(m) - LB.xp(m)))
        out.append((f"x-_{m}", LA.xm(m) - LB.xm(m)))
        if m:
            out.append((f"h_{m}", LA.h(m) - LB.h(m)))
    return out


def coassoc_check(r1: Rep, r2: Rep, r3: Rep, u=ONE, w=None, window: int = 3) -> list[dict]:
    """Compare (Delta_u (x) id) Delta_{uw} with (id (x) Delta_w) Delta_u on V1 (x) V2 (x) V3.

    With w = None the single-parameter form (Delta_u (x) id) Delta_u = (id (x) Delta_u) Delta_u
    is compared.
    """
    u = to_scalar(var(u) if isinstance(u, str) else u)
    if w is None:
        left = drinfeld_tensor(drinfeld_tensor(r1, r2, u), r3, u)
        right = drinfeld_tensor(r1, drinfeld_tensor(r2, r3, u), u)
        form = "single"
    else:
        w = to_scalar(var(w) if isinstance(w, str) else w)
        left = drinfeld_tensor(drinfeld_tensor(r1, r2, u), r3, u * w)
        right = drinfeld_tensor(r1, drinfeld_tensor(r2, r3, w), u)
        form = "two-parameter"
    rows = check_relations(_modes_equal(left, right, window))
    for row in rows:
        row["form"] = form
    return rows


def counit_check(rep: Rep, u=ONE, window: int = 3) -> list[dict]:
    """(eps (x) id) Delta_u and (id (x) eps) Delta_u against the identity, via the trivial module."""
    triv = trivial_loop()
    rows = []
    for side, T in (("left", drinfeld_tensor(triv, rep, u)), ("right", drinfeld_tensor(rep, triv, u))):
        for row in check_relations(_modes_equal(T, rep, window)):
            row["side"] = side
            rows.append(row)
    return rows


def hw_product_check(r1: Rep, r2: Rep, u=ONE, window: int = WINDOW) -> dict:
    """v (x) v is killed by every x^+-mode and its l-weight is the product; returns the Drinfeld polynomials."""
    T = drinfeld_tensor(r1, r2, u)
    L = T.loop
    v = [ONE if i == 0 else ZERO for i in range(T.dim)]
    killed = all(all(c.is_zero() for c in L.xp(m).apply(v)) for m in range(-window, window + 1))
    # current level: every x^+ family member kills v (x) v
    killed_all = all(all(c.is_zero() for c in A.apply(v)) for _, A in L.families()[0])
    top = highest_lweight(T)
    p1 = drinfeld_polynomials(highest_lweight(r1)).polys[0]
    p2 = drinfeld_polynomials(highest_lweight(r2)).polys[0]
    P = drinfeld_polynomials(top)
    psi1, psi2 = highest_lweight(r1).psi, highest_lweight(r2).psi
    u_s = to_scalar(var(u) if isinstance(u, str) else u)
    conv = True
    for m in range(window + 1):
        want = ZERO
        for k in range(m + 1):
            want = want + r1.loop.phi_plus(k)[0, 0] * r2.loop.phi_plus(m - k)[0, 0] * u_s ** (-(m - k))
        conv = conv and L.phi_plus(m)[0, 0] == want
    product = p1 * p2.subs({"z": var("z") / u_s})
    ok = (killed and killed_all and conv and hasattr(P, "polys")
          and P.polys[0] == product
          and top.psi == psi1 * psi2.subs({"z": var("z") / u_s}))
    return {"ok": ok, "killed_window": killed, "killed_all_modes": killed_all, "phi_convolution": conv,
            "P": str(P.polys[0]) if hasattr(P, "polys") else None, "product": str(product)}


# ---------------------------------------------------------------------------
# node-zero operator package

def zero_node_action(W1: Rep, W2: Rep, window: int = 4) -> list[dict]:
    """Operators E00, F00, E01, F0-1, K on W1 (x) W2 built from leg modes (q_0 = q, C = 1), with
    (i) rank-one presentation relations, (ii) the h_{0,+-1} identities, (iii) the phi-convolution
    on v (x) v and (iv) annihilation of v (x) v by every x^+_{0,m}."""
    L1, L2 = W1.loop, W2.loop
    I1, I2 = Matrix.identity(W1.dim), Matrix.identity(W2.dim)
    k1, k2, k1i, k2i = L1.k, L2.k, L1.kinv, L2.kinv
    sq = lambda M: M @ M
    E00 = L1.xp(0).kron(sq(k2i)) + k1i.kron(L2.xp(0))
    F00 = L1.xm(0).kron(k2) + sq(k1).kron(L2.xm(0))
    E01 = L1.xp(1).kron(I2) + k1i.kron(L2.xp(1))
    F0m1 = L1.xm(-1).kron(k2) + I1.kron(L2.xm(-1))
    K = k1.kron(k2)
    Ki = k1i.kron(k2i)
    kterm = (K - Ki).scale(QQ.inverse())
    c = qpow(-4) - ONE
    named = [
        ("K E00 K^-1 = q^2 E00", K @ E00 @ Ki - E00.scale(qpow(2))),
        ("K E01 K^-1 = q^2 E01", K @ E01 @ Ki - E01.scale(qpow(2))),
        ("K F00 K^-1 = q^-2 F00", K @ F00 @ Ki - F00.scale(qpow(-2))),
        ("K F0-1 K^-1 = q^-2 F0-1", K @ F0m1 @ Ki - F0m1.scale(qpow(-2))),
        ("[E00,F00] = (K-K^-1)/(q-q^-1)", commutator(E00, F00) - kterm),
        ("[E01,F0-1] = (K-K^-1)/(q-q^-1)", commutator(E01, F0m1) - kterm),
        ("[E01,E00]_{q^2} = 0", commutator(E01, E00, qpow(2))),
        ("[F00,F0-1]_{q^-2} = 0", commutator(F00, F0m1, qpow(-2))),
    ]
    H1 = L1.h(1).kron(I2) + I1.kron(L2.h(1)) + (k1 @ L1.xp(1)).kron(k2i @ L2.xm(0)).scale(c)
    Hm1 = L1.h(-1).kron(I2) + I1.kron(L2.h(-1)) - (k1 @ L1.xp(0)).kron(k2i @ L2.xm(-1)).scale(c)
    named.append(("[E01,F00] K^-1 = h01 formula", commutator(E01, F00) @ Ki - H1))
    named.append(("K [E00,F0-1] = h0-1 formula", K @ commutator(E00, F0m1) - Hm1))
    rows = [dict(r, part="i" if i < 8 else "ii") for i, r in enumerate(check_relations(named))]
    # (iii), (iv): raise/lower with the h formulas
    v = [ONE if i == 0 else ZERO for i in range(K.nrows)]
    two_inv = qint(2).inverse()
    E = {0: E00}
    for m in range(1, window + 1):
        E[m] = commutator(H1, E[m - 1]).scale(two_inv)
    for m in range(-1, -window - 1, -1):
        E[m] = commutator(Hm1, E[m + 1]).scale(two_inv)
    rows.append({"relation": "E_{0,1} from h01 equals E01", "ok": E[1] == E01, "part": "ii"})
    for m in sorted(E):
        rows.append({"relation": f"x+_(0,{m}) v(x)v = 0", "ok": all(x.is_zero() for x in E[m].apply(v)),
                     "part": "iv"})
    for m in range(0, window + 1):
        phi = K if m == 0 else commutator(E[m], F00).scale(QQ)
        got = phi.apply(v)
        want = ZERO
        for k in range(m + 1):
            want = want + L1.phi_plus(k)[0, 0] * L2.phi_plus(m - k)[0, 0]
        ok = got[0] == want and all(x.is_zero() for x in got[1:])
        rows.append({"relation": f"phi+_(0,{m}) v(x)v convolution", "ok": ok, "part": "iii"})
    return rows


# ---------------------------------------------------------------------------
# generic irreducibility scan

def _span_rank(vectors: list[list[Scalar]]) -> int:
    return Matrix(vectors).rank() if vectors else 0


def irreducibility_probe(T: Rep, window: int = 2) -> dict:
    """(a) cyclicity of v (x) v under lowering modes, (b) no singular vectors below the top weight."""
    L = T.loop
    n = T.dim
    v = [ONE if i == 0 else ZERO for i in range(n)]
    lowering = [L.xm(m) for m in range(-window, window + 1)]
    span = [v]
    frontier = [v]
    while frontier:
        new = []
        for w in frontier:
            for op in lowering:
                x = op.apply(w)
                if any(not c.is_zero() for c in x) and _span_rank(span + [x]) > len(span):
                    span.append(x)
                    new.append(x)
        frontier = new
    cyclic = len(span) == n
    raising = [L.xp(m) for m in range(-window, window + 1)]
    singular = []
    spaces = T.weight_spaces()
    top = max(spaces)
    for wgt, idx in spaces.items():
        if wgt == top:
            continue
        cols = idx
        blocks = [op.submatrix(range(n), cols) for op in raising]
        stacked = Matrix([row for b in blocks for row in b.rows])
        null = stacked.nullspace()
        if null:
            singular.append(list(wgt))
    return {"cyclic": cyclic, "span": len(span), "singular_weights": singular,
            "irreducible": cyclic and not singular}


def generic_irreducibility_scan(n1: int, n2: int, ratios: Sequence, window: int = 2) -> list[dict]:
    """Classify b/a over exact sample ratios for V(n1)_1 (x) V(n2)_{b} under Delta_1 (evidence, not proof)."""
    rows = []
    for r in ratios:
        r = to_scalar(r)
        try:
            T = drinfeld_tensor(_eval(n1, ONE), _eval(n2, r), ONE)
        except PoleCollision as exc:
            rows.append({"ratio": str(r), "class": "undefined", "reason": str(exc)})
            continue
        probe = irreducibility_probe(T, window)
        rows.append({"ratio": str(r), "class": "generic" if probe["irreducible"] else "special", **probe,
                     "note": "sampled evidence over a finite mode window"})
    return rows


def _eval(n, a):
    from .rep import evaluation_module
    return evaluation_module(n, a)


def qpow_grid(lo: int, hi: int) -> list[Scalar]:
    return [qpow(k) for k in range(lo, hi + 1)]
