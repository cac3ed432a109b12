"""Affine Cartan data for untwisted types and weight-lattice bookkeeping.

Weights are coordinate vectors in the basis (Lambda_0, ..., Lambda_n, delta).
The pairing <x, alpha_i^vee> is simply the Lambda_i coordinate.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import flint

from .exact import ONE, Q, Scalar, ZERO


class CartanError(ValueError):
    pass


Weight = tuple  # tuple[Fraction, ...] of length n + 2


@dataclass(frozen=True)
class AffineCartanDatum:
    label: str
    n: int
    gcm: tuple[tuple[int, ...], ...]
    d: tuple[int, ...]
    a: tuple[int, ...]
    a_vee: tuple[int, ...]
    theta: tuple[int, ...]          # highest root over alpha_1..alpha_n
    minuscule: tuple[int, ...]      # I_min
    omega: tuple[tuple[int, ...], ...]  # outer automorphisms as images (pi(0), ..., pi(n))
    o: tuple[int, ...]
    odd_cycle: bool = False         # A_{2n}^(1): o is only an approximate sign function
    gram: tuple[tuple[Fraction, ...], ...] = field(default=(), repr=False)

    # --- basic accessors -------------------------------------------------
    @property
    def nodes(self) -> range:
        return range(self.n + 1)

    @property
    def finite_nodes(self) -> range:
        return range(1, self.n + 1)

    @property
    def hbar(self) -> int:
        """Coxeter number: sum of the labels a_i."""
        return sum(self.a)

    @property
    def dim(self) -> int:
        return self.n + 2

    def q_i(self, i: int) -> Scalar:
        return Q ** self.d[i]

    def sign_pair(self, i: int, j: int) -> int:
        """o_{i,j}: o(i)/o(j), or (-1)^(anticlockwise distance i -> j) on the odd cycle."""
        if self.odd_cycle:
            return (-1) ** ((j - i) % (self.n + 1))
        return self.o[i] * self.o[j]

    def alt_sign(self) -> tuple[int, ...]:
        """The second approximation -o (only meaningful on the odd cycle)."""
        return tuple(-s for s in self.o)

    # --- weights ------------------------------------------------------------
    def Lambda(self, i: int) -> Weight:
        return tuple(Fraction(int(k == i)) for k in range(self.n + 2))

    def delta(self) -> Weight:
        return tuple(Fraction(int(k == self.n + 1)) for k in range(self.n + 2))

    def alpha(self, i: int) -> Weight:
        coords = [Fraction(self.gcm[j][i]) for j in self.nodes]
        coords.append(Fraction(int(i == 0)))
        return tuple(coords)

    def zero(self) -> Weight:
        return tuple(Fraction(0) for _ in range(self.n + 2))

    def root(self, coeffs: Sequence[int], delta_coeff: int = 0) -> Weight:
        """sum_i coeffs[i] alpha_i + delta_coeff delta (coeffs indexed by I)."""
        out = scale(delta_coeff, self.delta())
        for i, c in enumerate(coeffs):
            out = add(out, scale(c, self.alpha(i)))
        return out

    def null_root(self) -> Weight:
        return self.root(self.a)

    def theta_weight(self) -> Weight:
        return self.root((0,) + self.theta)

    def nu_coroot(self, i: int) -> Weight:
        """nu(alpha_i^vee) = d_i^{-1} alpha_i."""
        return scale(Fraction(1, self.d[i]), self.alpha(i))

    def form(self, x: Weight, y: Weight) -> Fraction:
        g = self.gram
        return sum((x[r] * g[r][c] * y[c] for r in range(self.n + 2) for c in range(self.n + 2)
                    if x[r] and y[c]), Fraction(0))

    def pairing(self, x: Weight, i: int) -> Fraction:
        """<x, alpha_i^vee>."""
        return x[i]

    def reflect(self, i: int, x: Weight) -> Weight:
        return add(x, scale(-x[i], self.alpha(i)))

    def qint(self, s: int, i: int = 1) -> Scalar:
        return qint(s, self.d[i])

    def qfact(self, s: int, i: int = 1) -> Scalar:
        return qfact(s, self.d[i])

    def qbinom(self, s: int, r: int, i: int = 1) -> Scalar:
        return qbinom(s, r, self.d[i])

    def apply_omega(self, pi: Sequence[int], i: int) -> int:
        return pi[i]

    def omega_cycles(self, pi: Sequence[int]) -> str:
        seen, parts = set(), []
        for s in self.nodes:
            if s in seen or pi[s] == s:
                seen.add(s)
                continue
            cyc, k = [], s
            while k not in seen:
                seen.add(k)
                cyc.append(str(k))
                k = pi[k]
            parts.append("(" + " ".join(cyc) + ")")
        return "".join(parts) or "id"

    def to_json(self) -> dict:
        return {
            "type": self.label,
            "gcm": [list(r) for r in self.gcm],
            "symmetrizers": list(self.d),
            "labels": list(self.a),
            "colabels": list(self.a_vee),
            "coxeter_number": self.hbar,
            "minuscule_nodes": list(self.minuscule),
            "outer_automorphisms": [self.omega_cycles(p) for p in self.omega],
            "sign_function": list(self.o),
            "sign_is_approximate": self.odd_cycle,
            "highest_root": list(self.theta),
        }


def add(x: Weight, y: Weight) -> Weight:
    return tuple(a + b for a, b in zip(x, y))


def scale(c, x: Weight) -> Weight:
    c = Fraction(c)
    return tuple(c * a for a in x)


def sub(x: Weight, y: Weight) -> Weight:
    return tuple(a - b for a, b in zip(x, y))


# ---------------------------------------------------------------------------
# q-numbers

def qint(s: int, d: int = 1) -> Scalar:
    """[s]_{q^d} = (q^{ds} - q^{-ds}) / (q^d - q^{-d})."""
    qi = Q ** d
    return (qi ** s - qi ** (-s)) / (qi - qi ** -1)


def qfact(s: int, d: int = 1) -> Scalar:
    out = ONE
    for k in range(1, s + 1):
        out = out * qint(k, d)
    return out


def qbinom(s: int, r: int, d: int = 1) -> Scalar:
    if not 0 <= r <= s:
        return ZERO
    b = qfact(s, d) / (qfact(r, d) * qfact(s - r, d))
    if not b.den.is_constant() and not _is_monomial(b.den):
        raise CartanError("q-binomial failed to be a Laurent polynomial")
    return b


def _is_monomial(p) -> bool:
    return len(p.monoms()) == 1


# ---------------------------------------------------------------------------
# construction

_LABEL = re.compile(r"^\s*([ABCDG])_?\{?(\d+)\}?\s*(?:~\s*1|\^?\(1\))\s*$")


def parse_label(label: str) -> tuple[str, int]:
    m = _LABEL.match(label)
    if not m:
        raise CartanError(f"unknown type label {label!r}; expected e.g. 'A1~1' or 'A_2^(1)'")
    return m.group(1), int(m.group(2))


def _bipartite_sign(gcm) -> tuple[tuple[int, ...], bool]:
    n1 = len(gcm)
    o = [0] * n1
    o[0] = 1
    stack = [0]
    ok = True
    while stack:
        i = stack.pop()
        for j in range(n1):
            if j != i and gcm[i][j] < 0:
                if o[j] == 0:
                    o[j] = -o[i]
                    stack.append(j)
                elif o[j] == o[i]:
                    ok = False
    return tuple(o), ok


def _type_a(n: int):
    if n == 1:
        gcm = ((2, -2), (-2, 2))
    else:
        gcm = tuple(tuple(2 if i == j else (-1 if (j - i) % (n + 1) in (1, n) else 0)
                          for j in range(n + 1)) for i in range(n + 1))
    d = (1,) * (n + 1)
    a = (1,) * (n + 1)
    theta = (1,) * n
    minuscule = tuple(range(n + 1))
    omega = tuple(tuple((i + k) % (n + 1) for i in range(n + 1)) for k in range(n + 1))
    return gcm, d, a, a, theta, minuscule, omega


def _type_c2():
    gcm = ((2, -1, 0), (-2, 2, -2), (0, -1, 2))
    return gcm, (2, 1, 2), (1, 2, 1), (1, 1, 1), (2, 1), (0, 2), ((0, 1, 2), (2, 1, 0))


def _type_d4():
    gcm = tuple(tuple(2 if i == j else (-1 if 2 in (i, j) and i != j else 0) for j in range(5))
                for i in range(5))
    omega = ((0, 1, 2, 3, 4), (1, 0, 2, 4, 3), (3, 4, 2, 0, 1), (4, 3, 2, 1, 0))
    return gcm, (1,) * 5, (1, 1, 2, 1, 1), (1, 1, 2, 1, 1), (1, 2, 1, 1), (0, 1, 3, 4), omega


@lru_cache(maxsize=None)
def build(label: str) -> AffineCartanDatum:
    kind, n = parse_label(label)
    if kind == "A" and n >= 1:
        parts = _type_a(n)
    elif (kind, n) in (("C", 2), ("B", 2)):
        parts = _type_c2()
    elif (kind, n) == ("D", 4):
        parts = _type_d4()
    else:
        raise CartanError(f"type {kind}{n}^(1) is not available")
    gcm, d, a, a_vee, theta, minuscule, omega = parts
    o, bipartite = _bipartite_sign(gcm)
    odd_cycle = not bipartite
    if odd_cycle:
        o = tuple((-1) ** i for i in range(n + 1))
    canon = f"{'C' if kind == 'B' else kind}{n}~1"
    datum = AffineCartanDatum(canon, n, gcm, d, a, a_vee, theta, minuscule, omega, o, odd_cycle)
    object.__setattr__(datum, "gram", _gram(datum))
    check(datum)
    return datum


def _gram(dt: AffineCartanDatum):
    """Gram matrix of ( , ) on (Lambda_0..Lambda_n, delta)."""
    n = dt.n
    size = n + 2
    G = [[Fraction(0)] * size for _ in range(size)]
    D = n + 1
    for k in dt.nodes:
        G[k][D] = G[D][k] = Fraction(dt.a[k] * dt.d[k])
    # finite block: sum_{j>=1} a_ji G[j][l] = d_i delta_il  (i, l >= 1), with G[0][*] = 0
    fin = flint.fmpq_mat([[dt.gcm[j][i] for j in dt.finite_nodes] for i in dt.finite_nodes])
    rhs = flint.fmpq_mat([[dt.d[i] if i == l else 0 for l in dt.finite_nodes] for i in dt.finite_nodes])
    sol = fin.solve(rhs)
    for r, j in enumerate(dt.finite_nodes):
        for c, l in enumerate(dt.finite_nodes):
            v = sol[r, c]
            G[j][l] = Fraction(int(v.p), int(v.q))
    return tuple(tuple(r) for r in G)


def check(dt: AffineCartanDatum) -> dict[str, bool]:
    """Assert every structural invariant of a datum; returns the named results."""
    A, I = dt.gcm, dt.nodes
    res = {
        "null_root": all(sum(A[i][j] * dt.a[j] for j in I) == 0 for i in I),
        "central_element": all(sum(dt.a_vee[i] * A[i][j] for i in I) == 0 for j in I),
        "symmetrizable": all(dt.d[i] * A[i][j] == dt.d[j] * A[j][i] for i in I for j in I),
        "a0_is_one": dt.a[0] == 1 and dt.a_vee[0] == 1,
        "delta_orthogonal": all(dt.form(dt.null_root(), dt.alpha(i)) == 0 for i in I),
        "fundamental_duality": all(dt.pairing(dt.Lambda(i), j) == int(i == j) for i in I for j in I),
        "form_on_roots": all(dt.form(dt.alpha(i), dt.alpha(j)) == dt.d[i] * A[i][j] for i in I for j in I),
        "delta_is_null_root": dt.null_root() == dt.delta(),
        "theta": dt.form(dt.theta_weight(), dt.theta_weight()) == 2 * dt.d[0]
        and tuple(dt.a[1:]) == dt.theta,
        "omega_automorphisms": all(A[p[i]][p[j]] == A[i][j] for p in dt.omega for i in I for j in I)
        and all(p[0] in dt.minuscule for p in dt.omega),
        "sign_function": dt.odd_cycle or all(dt.o[i] == -dt.o[j] for i in I for j in I if A[i][j] < 0),
    }
    bad = [k for k, v in res.items() if not v]
    if bad:
        raise CartanError(f"{dt.label}: invariants failed: {bad}")
    return res


AVAILABLE = ("A1~1", "A2~1", "A3~1", "C2~1", "D4~1")
