"""q-characters: monomials k_rho * prod Y_{i,a}^{u}, their ring, and the classical projection."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from .exact import ONE, ZERO, Scalar, expand
from .rep import LWeight, Rep, RepError, lweight_decomposition, qp_exponents, tensor_classical

TENSOR_MODES = ("Delta", "Delta_u1")


@dataclass(frozen=True, order=False)
class YMonomial:
    """k-part: coordinates of nu(lambda) against alpha_i^vee; Y-part: sorted ((i, point), exponent)."""

    k: tuple[Fraction, ...]
    Y: tuple[tuple[tuple[int, Scalar], int], ...] = ()

    def __post_init__(self):
        merged: dict[tuple[int, Scalar], int] = {}
        for key, e in self.Y:
            merged[key] = merged.get(key, 0) + e
        ys = tuple(sorted(((k, e) for k, e in merged.items() if e), key=lambda ke: (ke[0][0], str(ke[0][1]))))
        object.__setattr__(self, "Y", ys)
        object.__setattr__(self, "k", tuple(Fraction(c) for c in self.k))

    @classmethod
    def unit(cls, rank: int = 1) -> "YMonomial":
        return cls((Fraction(0),) * rank)

    def compatible(self, nodes: Iterable[int] = (1,)) -> bool:
        """<nu(rho), alpha_i^vee> = sum_a u_{i,a} for every node i."""
        for pos, i in enumerate(nodes):
            if self.k[pos] != sum(e for (j, _), e in self.Y if j == i):
                return False
        return True

    def __mul__(self, other: "YMonomial") -> "YMonomial":
        if len(self.k) != len(other.k):
            raise ValueError("k-parts of different rank")
        return YMonomial(tuple(a + b for a, b in zip(self.k, other.k)), self.Y + other.Y)

    def sort_key(self):
        return ([str(c) for c in self.k], [(i, str(a), e) for (i, a), e in self.Y])

    def to_json(self) -> dict:
        return {"k": [str(c) for c in self.k], "Y": [[i, str(a), e] for (i, a), e in self.Y]}

    def __str__(self):
        ys = " ".join(f"Y[{i},{a}]^{e}" for (i, a), e in self.Y)
        return f"k({','.join(str(c) for c in self.k)}) {ys}".strip()


@dataclass(frozen=True)
class YPoly:
    """Finite integer combination of monomials (finitely supported)."""

    terms: Mapping[YMonomial, int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {m: c for m, c in self.terms.items() if c}
        object.__setattr__(self, "terms", dict(sorted(clean.items(), key=lambda mc: mc[0].sort_key())))

    @classmethod
    def one(cls, rank: int = 1) -> "YPoly":
        return cls({YMonomial.unit(rank): 1})

    def __add__(self, other: "YPoly") -> "YPoly":
        out = Counter(self.terms)
        out.update(other.terms)
        return YPoly(dict(out))

    def __mul__(self, other: "YPoly") -> "YPoly":
        return multiply(self, other)

    def __eq__(self, other):
        return isinstance(other, YPoly) and self.terms == other.terms

    def __hash__(self):
        return hash(tuple(self.terms.items()))

    def coefficient_sum(self) -> int:
        return sum(self.terms.values())

    def to_json(self) -> list[dict]:
        return [dict(m.to_json(), mult=c) for m, c in self.terms.items()]


def multiply(p1: YPoly, p2: YPoly) -> YPoly:
    out: Counter = Counter()
    for m1, c1 in p1.terms.items():
        for m2, c2 in p2.terms.items():
            out[m1 * m2] += c1 * c2
    return YPoly(dict(out))


def monomial_of(lw: LWeight, node: int = 1) -> YMonomial:
    """Y-exponents beta_{i,a} - gamma_{i,a} read off the factored (Q, R) data of the l-weight."""
    _, exps = qp_exponents(lw.psi)
    m = YMonomial(tuple(Fraction(c) for c in lw.weight), tuple(((node, a), e) for a, e in exps.items()))
    if not m.compatible((node,)):
        raise RepError(f"monomial {m} violates the compatibility condition")
    return m


def qcharacter(rep: Rep) -> YPoly:
    out: Counter = Counter()
    for lw in lweight_decomposition(rep):
        out[monomial_of(lw)] += lw.multiplicity
    p = YPoly(dict(out))
    if p.coefficient_sum() != rep.dim:
        raise RepError("q-character coefficients do not add up to the dimension")
    return p


def tensor(r1: Rep, r2: Rep, mode: str) -> Rep:
    if mode == "Delta":
        return tensor_classical(r1, r2, "Delta")
    if mode == "Delta_u1":
        from .fusion import drinfeld_tensor
        return drinfeld_tensor(r1, r2, ONE)
    raise ValueError(f"tensor mode must be one of {TENSOR_MODES}")


def mult_check(r1: Rep, r2: Rep, mode: str = "Delta_u1", T: Rep | None = None) -> dict:
    """chi_q(V1 (x) V2) against chi_q(V1) * chi_q(V2); the diff lists monomials with differing counts."""
    lhs = qcharacter(T if T is not None else tensor(r1, r2, mode))
    rhs = multiply(qcharacter(r1), qcharacter(r2))
    diff = Counter(lhs.terms)
    diff.subtract(rhs.terms)
    bad = sorted((m for m, c in diff.items() if c), key=lambda m: m.sort_key())
    return {"ok": not bad, "mode": mode, "pair": [r1.label, r2.label],
            "diff": [dict(m.to_json(), delta=diff[m]) for m in bad], "terms": len(lhs.terms)}


def psi_convolution_check(psi1: Scalar, psi2: Scalar, order: int = 6) -> bool:
    """(Psi1 Psi2)^+_s = sum_r Psi1^+_r Psi2^+_{s-r} on the z = 0 expansions."""
    s1, s2 = expand(psi1, "z", "0", order), expand(psi2, "z", "0", order)
    prod = expand(psi1 * psi2, "z", "0", order)
    for s in range(order):
        conv = ZERO
        for r in range(s + 1):
            conv = conv + s1.coeff(r) * s2.coeff(s - r)
        if prod.coeff(s) != conv:
            return False
    return True


# ---------------------------------------------------------------------------
# classical projection

def classical_projection(p: YPoly) -> dict[tuple[Fraction, ...], int]:
    """gamma: k_{nu(w)} prod Y^u -> e(w), extended linearly."""
    out: Counter = Counter()
    for m, c in p.terms.items():
        out[m.k] += c
    return {w: c for w, c in sorted(out.items(), reverse=True) if c}


def character_product(c1: Mapping, c2: Mapping) -> dict:
    out: Counter = Counter()
    for w1, m1 in c1.items():
        for w2, m2 in c2.items():
            out[tuple(a + b for a, b in zip(w1, w2))] += m1 * m2
    return {w: c for w, c in sorted(out.items(), reverse=True) if c}


def _fchar(rep: Rep) -> dict:
    return {tuple(Fraction(c) for c in w): m for w, m in rep.character().items()}


def projection_check(rep: Rep) -> bool:
    """gamma(chi_q(V)) = ch(res V)."""
    return classical_projection(qcharacter(rep)) == _fchar(rep)


def square_check(r1: Rep, r2: Rep, mode: str = "Delta_u1", T: Rep | None = None) -> dict:
    """Both routes around the square: gamma(chi_q(V1) chi_q(V2)) and ch(V1) ch(V2), plus gamma(chi_q(V1 (x) V2))."""
    T = T if T is not None else tensor(r1, r2, mode)
    via_q = classical_projection(multiply(qcharacter(r1), qcharacter(r2)))
    via_ch = character_product(_fchar(r1), _fchar(r2))
    direct = classical_projection(qcharacter(T))
    return {"ok": via_q == via_ch == direct == _fchar(T), "mode": mode, "pair": [r1.label, r2.label]}
