"""Graded free-algebra terms over the toroidal generator alphabet and substitution morphisms.

The free layer performs exactly one rewrite: adjacent inverse pairs of ``k`` or
``C`` symbols cancel.  Anything that depends on the defining relations is
checked on matrix representations elsewhere.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Sequence

from .cartan import AffineCartanDatum, qfact, qint
from .exact import ONE, Q, ZERO, Matrix, Scalar, parse_scalar, to_scalar


class TermError(ValueError):
    pass


class NotInDomain(TermError):
    """A symbol lies outside the table of a finitely specified morphism."""


# ---------------------------------------------------------------------------
# symbols

@dataclass(frozen=True, order=True)
class Gen:
    """A generator symbol.

    kind: 'xp' (x^+_{i,m}), 'xm' (x^-_{i,m}), 'h' (h_{i,r}, r != 0),
    'k' (k_i^{m}, m = +-1), 'C' (C^{m}, m = +-1; node stored as -1).
    """

    kind: str
    i: int
    m: int

    def __post_init__(self):
        if self.kind not in ("xp", "xm", "h", "k", "C"):
            raise TermError(f"unknown generator kind {self.kind!r}")
        if self.kind == "h" and self.m == 0:
            raise TermError("h_{i,0} is not a generator")
        if self.kind in ("k", "C") and self.m not in (1, -1):
            raise TermError("k and C carry an exponent +-1")

    def __str__(self):
        if self.kind == "C":
            return f"C({self.m})"
        return f"{self.kind}({self.i},{self.m})"

    def inverse_symbol(self) -> "Gen | None":
        if self.kind in ("k", "C"):
            return Gen(self.kind, self.i, -self.m)
        return None


def xp(i: int, m: int) -> Gen:
    return Gen("xp", i, m)


def xm(i: int, m: int) -> Gen:
    return Gen("xm", i, m)


def h(i: int, r: int) -> Gen:
    return Gen("h", i, r)


def kk(i: int, e: int = 1) -> Gen:
    return Gen("k", i, e)


def CC(e: int = 1) -> Gen:
    return Gen("C", -1, e)


_GEN_RE = re.compile(r"^(xp|xm|h|k)\((-?\d+),(-?\d+)\)$|^C\((-?\d+)\)$")


def parse_gen(text: str) -> Gen:
    m = _GEN_RE.match(text.strip())
    if not m:
        raise TermError(f"cannot parse generator {text!r}")
    if m.group(4) is not None:
        return CC(int(m.group(4)))
    return Gen(m.group(1), int(m.group(2)), int(m.group(3)))


# ---------------------------------------------------------------------------
# degrees

@dataclass(frozen=True)
class Degree:
    """(sum_i c_i alpha_i, l delta') with c indexed by I."""

    alpha: tuple[int, ...]
    dprime: int

    def __add__(self, other: "Degree") -> "Degree":
        return Degree(tuple(a + b for a, b in zip(self.alpha, other.alpha)), self.dprime + other.dprime)

    def __neg__(self):
        return Degree(tuple(-a for a in self.alpha), -self.dprime)

    def finite_part(self, dt: AffineCartanDatum) -> tuple[tuple[int, ...], int]:
        """Split sum c_i alpha_i = beta + k delta with beta in the finite root lattice."""
        k = self.alpha[0]
        beta = tuple(self.alpha[i] - k * dt.a[i] for i in dt.finite_nodes)
        return beta, k

    def swapped(self, dt: AffineCartanDatum) -> "Degree":
        """(beta + k delta, l delta') -> (beta + l delta, k delta')."""
        beta, k = self.finite_part(dt)
        l = self.dprime
        return Degree((l,) + tuple(b + l * dt.a[i] for b, i in zip(beta, dt.finite_nodes)), k)

    def deg_Z(self) -> int:
        return self.dprime

    def deg_j(self, j: int) -> int:
        return self.alpha[j]

    def to_json(self):
        return {"alpha": list(self.alpha), "dprime": self.dprime}

    def __str__(self):
        return f"({list(self.alpha)}, {self.dprime})"


def zero_degree(dt: AffineCartanDatum) -> Degree:
    return Degree((0,) * (dt.n + 1), 0)


def gen_degree(g: Gen, dt: AffineCartanDatum) -> Degree:
    z = [0] * (dt.n + 1)
    if g.kind in ("xp", "xm"):
        z[g.i] = 1 if g.kind == "xp" else -1
        return Degree(tuple(z), g.m)
    if g.kind == "h":
        return Degree(tuple(z), g.m)
    return Degree(tuple(z), 0)


def gen_deg_v(g: Gen, dt: AffineCartanDatum) -> int:
    if g.kind in ("xp", "xm"):
        sign = 1 if g.kind == "xp" else -1
        return sign * int(g.i != 0) + dt.hbar * g.m
    if g.kind == "h":
        return dt.hbar * g.m
    return 0


# ---------------------------------------------------------------------------
# terms

Word = tuple  # tuple[Gen, ...]


def _reduce_word(word: Iterable[Gen]) -> Word:
    out: list[Gen] = []
    for g in word:
        if out and g.kind in ("k", "C") and out[-1] == g.inverse_symbol():
            out.pop()
        else:
            out.append(g)
    return tuple(out)


class Term:
    """Finite Scalar-linear combination of words in generator symbols."""

    __slots__ = ("terms", "datum")

    def __init__(self, terms: Mapping[Word, Scalar] | None = None, datum: AffineCartanDatum | None = None):
        acc: dict[Word, Scalar] = {}
        for w, c in (terms or {}).items():
            w = _reduce_word(w)
            c = to_scalar(c)
            acc[w] = acc.get(w, ZERO) + c
        self.terms = {w: c for w, c in acc.items() if not c.is_zero()}
        self.datum = datum

    @classmethod
    def gen(cls, g: Gen, datum=None) -> "Term":
        return cls({(g,): ONE}, datum)

    @classmethod
    def scalar(cls, c, datum=None) -> "Term":
        return cls({(): to_scalar(c)}, datum)

    @classmethod
    def word(cls, gens: Sequence[Gen], coeff=ONE, datum=None) -> "Term":
        return cls({tuple(gens): to_scalar(coeff)}, datum)

    def _dt(self, other: "Term"):
        if self.datum is not None and other.datum is not None and self.datum.label != other.datum.label:
            raise TermError(f"mixed types {self.datum.label} and {other.datum.label}")
        return self.datum or other.datum

    def __add__(self, other):
        other = _as_term(other, self.datum)
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, ZERO) + c
        return Term(out, self._dt(other))

    __radd__ = __add__

    def __neg__(self):
        return Term({w: -c for w, c in self.terms.items()}, self.datum)

    def __sub__(self, other):
        return self + (-_as_term(other, self.datum))

    def __rsub__(self, other):
        return _as_term(other, self.datum) - self

    def __mul__(self, other):
        if isinstance(other, Term):
            out: dict[Word, Scalar] = {}
            for w1, c1 in self.terms.items():
                for w2, c2 in other.terms.items():
                    w = _reduce_word(w1 + w2)
                    out[w] = out.get(w, ZERO) + c1 * c2
            return Term(out, self._dt(other))
        s = to_scalar(other)
        return Term({w: c * s for w, c in self.terms.items()}, self.datum)

    def __rmul__(self, other):
        s = to_scalar(other)
        return Term({w: s * c for w, c in self.terms.items()}, self.datum)

    def __pow__(self, e: int):
        out = Term.scalar(ONE, self.datum)
        for _ in range(e):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, Term):
            return False
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def symbols(self) -> set[Gen]:
        return {g for w in self.terms for g in w}

    def single_word(self) -> tuple[Word, Scalar] | None:
        if len(self.terms) == 1:
            (w, c), = self.terms.items()
            return w, c
        return None

    def map_coefficients(self, fn: Callable[[Scalar], Scalar]) -> "Term":
        return Term({w: fn(c) for w, c in self.terms.items()}, self.datum)

    # --- grading -----------------------------------------------------------
    def degree(self) -> Degree | None:
        """The common degree of all words, or None when inhomogeneous (or zero)."""
        dt = self._need_datum()
        degs = {word_degree(w, dt) for w in self.terms}
        if len(degs) != 1:
            return None
        d = degs.pop()
        dv = {sum(gen_deg_v(g, dt) for g in w) for w in self.terms}.pop()
        if dv != dt.hbar * d.deg_Z() + sum(d.deg_j(j) for j in dt.finite_nodes):
            raise TermError("deg_v relation violated")  # cannot happen for well-formed symbols
        return d

    def deg_v(self) -> int | None:
        dt = self._need_datum()
        vals = {sum(gen_deg_v(g, dt) for g in w) for w in self.terms}
        return vals.pop() if len(vals) == 1 else None

    def _need_datum(self) -> AffineCartanDatum:
        if self.datum is None:
            raise TermError("term has no attached Cartan datum")
        return self.datum

    # --- serialization -----------------------------------------------------
    def sorted_items(self):
        return sorted(self.terms.items(), key=lambda wc: (len(wc[0]), [str(g) for g in wc[0]]))

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for w, c in self.sorted_items():
            parts.append(f"{c}*{'.'.join(str(g) for g in w) if w else '1'}")
        return " + ".join(parts)

    def __repr__(self):
        return f"Term({str(self)!r})"


def word_degree(w: Word, dt: AffineCartanDatum) -> Degree:
    d = zero_degree(dt)
    for g in w:
        d = d + gen_degree(g, dt)
    return d


def _as_term(x, datum) -> Term:
    if isinstance(x, Term):
        return x
    return Term.scalar(x, datum)


def parse_term(text: str, datum=None) -> Term:
    """Inverse of ``str(Term)``."""
    text = text.strip()
    if text == "0":
        return Term({}, datum)
    chunks, depth, start = [], 0, 0
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif depth == 0 and text.startswith(" + ", i):
            chunks.append(text[start:i])
            start = i + 3
            i += 3
            continue
        i += 1
    chunks.append(text[start:])
    out: dict[Word, Scalar] = {}
    for ch in chunks:
        # coefficient is the longest prefix ending right before '*<word>' at depth 0
        depth, cut = 0, None
        for j, c in enumerate(ch):
            if c == "(":
                depth += 1
            elif c == ")":
                depth -= 1
            elif c == "*" and depth == 0:
                rest = ch[j + 1:]
                if rest == "1" or _GEN_RE.match(rest.split(".")[0]):
                    cut = j
                    break
        if cut is None:
            raise TermError(f"cannot parse term chunk {ch!r}")
        coeff = parse_scalar(ch[:cut])
        wtext = ch[cut + 1:]
        word = () if wtext == "1" else tuple(parse_gen(g) for g in wtext.split("."))
        out[word] = out.get(word, ZERO) + coeff
    return Term(out, datum)


# ---------------------------------------------------------------------------
# brackets and divided powers

def qbracket(a: Term, b: Term, u=ONE) -> Term:
    """[a, b]_u = ab - u ba."""
    return a * b - (b * a) * to_scalar(u)


def iterated_bracket(bs: Sequence[Term], us: Sequence) -> Term:
    """[b_1, ..., b_s]_{u_1...u_{s-1}} = [b_1, [b_2, ..., b_s]_{u_1...u_{s-2}}]_{u_{s-1}}."""
    if len(us) != len(bs) - 1:
        raise TermError("need s-1 twist parameters")
    if len(bs) == 1:
        return bs[0]
    return qbracket(bs[0], iterated_bracket(bs[1:], us[:-1]), us[-1])


def iterated_bracket_primed(bs: Sequence[Term], us: Sequence) -> Term:
    """[b_1, ..., b_s]'_{u_1...u_{s-1}} = [[b_1, ..., b_{s-1}]'_{u_1...u_{s-2}}, b_s]_{u_{s-1}}."""
    if len(us) != len(bs) - 1:
        raise TermError("need s-1 twist parameters")
    if len(bs) == 1:
        return bs[0]
    return qbracket(iterated_bracket_primed(bs[:-1], us[:-1]), bs[-1], us[-1])


def divided_power(g: Gen, s: int, dt: AffineCartanDatum) -> Term:
    """g^s / [s]_i! with the node's own q_i."""
    return Term.word([g] * s, qfact(s, dt.d[g.i]).inverse(), dt)


# ---------------------------------------------------------------------------
# torus normal form

def torus_normal_form(t: Term) -> Term:
    """Move every k and C symbol to the right end of its word.

    Uses only C central, [k_i, k_j] = 0, k_i x^{+-}_{j,m} k_i^{-1} = q_i^{+-a_ij} x^{+-}_{j,m}
    and [k_i, h_{j,r}] = 0.  The torus part is written k_0^{e_0}...k_n^{e_n} C^{c}.
    """
    dt = t._need_datum()
    out: dict[Word, Scalar] = {}
    for w, c in t.terms.items():
        exps = [0] * (dt.n + 1)
        cexp = 0
        body: list[Gen] = []
        coeff = c
        # scan right to left, pushing torus symbols past everything to their right
        for g in reversed(w):
            if g.kind == "C":
                cexp += g.m
            elif g.kind == "k":
                # k_i^{e} y = q_i^{e * <wt(y), alpha_i^vee>} ... y k_i^{e}
                shift = 0
                for y in body:
                    if y.kind in ("xp", "xm"):
                        sign = 1 if y.kind == "xp" else -1
                        shift += sign * dt.gcm[g.i][y.i]
                coeff = coeff * Q ** (dt.d[g.i] * g.m * shift)
                exps[g.i] += g.m
            else:
                body.insert(0, g)
        torus = []
        for i, e in enumerate(exps):
            torus += [kk(i, 1 if e > 0 else -1)] * abs(e)
        torus += [CC(1 if cexp > 0 else -1)] * abs(cexp)
        word = tuple(body) + tuple(torus)
        out[word] = out.get(word, ZERO) + coeff
    return Term(out, dt)


# ---------------------------------------------------------------------------
# evaluation on representations

def evaluate(t: Term, images: Callable[[Gen], Matrix], dim: int) -> Matrix:
    """Matrix of a term, given matrices for its symbols."""
    cache: dict[Gen, Matrix] = {}
    total = Matrix.zeros(dim)
    for w, c in t.sorted_items():
        m = Matrix.identity(dim)
        for g in w:
            if g not in cache:
                cache[g] = images(g)
            m = m @ cache[g]
        total = total + m.scale(c)
    return total


# ---------------------------------------------------------------------------
# morphisms

@dataclass(frozen=True)
class Morphism:
    """Substitution-defined (anti)endomorphism.

    ``rule`` returns the image of a symbol, or None when the symbol is outside
    the domain (which is an error at application time).
    """

    name: str
    datum: AffineCartanDatum
    rule: Callable[[Gen], "Term | None"] = field(compare=False)
    anti: bool = False
    invert_q: bool = False
    degree_law: str = "preserve"   # preserve | negate_mode | swap | none

    def image(self, g: Gen) -> Term:
        out = self.rule(g)
        if out is None:
            raise NotInDomain(f"{g} is not in the domain of {self.name}")
        return out

    def __call__(self, t: Term | Gen) -> Term:
        return apply(self, t)


def apply(m: Morphism, t: Term | Gen) -> Term:
    if isinstance(t, Gen):
        t = Term.gen(t, m.datum)
    cache: dict[Gen, Term] = {}
    out: dict[Word, Scalar] = {}
    dt = m.datum
    for w, c in t.terms.items():
        coeff = c.invert_q() if m.invert_q else c
        acc = Term.scalar(coeff, dt)
        seq = reversed(w) if m.anti else w
        for pos, g in enumerate(seq):
            if g not in cache:
                try:
                    cache[g] = m.image(g)
                except NotInDomain as exc:
                    raise NotInDomain(f"{exc} (symbol {pos} of word {'.'.join(map(str, w))})") from None
            acc = acc * cache[g]
        for ww, cc in acc.terms.items():
            out[ww] = out.get(ww, ZERO) + cc
    return Term(out, dt)


def compose(m1: Morphism, m2: Morphism, name: str | None = None) -> Morphism:
    """m1 o m2 (apply m2 first)."""
    def rule(g: Gen):
        img = m2.rule(g)
        if img is None:
            return None
        try:
            return apply(m1, img)
        except NotInDomain:
            return None
    laws = {m1.degree_law, m2.degree_law} - {"preserve"}
    law = "preserve" if not laws else (laws.pop() if len(laws) == 1 and m1.degree_law != m2.degree_law else "none")
    return Morphism(name or f"{m1.name}.{m2.name}", m1.datum, rule,
                    anti=m1.anti != m2.anti, invert_q=m1.invert_q != m2.invert_q, degree_law=law)


def identity(dt: AffineCartanDatum) -> Morphism:
    return Morphism("id", dt, lambda g: Term.gen(g, dt))


def table_morphism(name: str, dt: AffineCartanDatum, table: Mapping[Gen, Term], **kw) -> Morphism:
    table = dict(table)
    return Morphism(name, dt, table.get, **kw)


def _c_power(e: int) -> list[Gen]:
    return [CC(1 if e > 0 else -1)] * abs(e)


def _k_power(i: int, e: int) -> list[Gen]:
    return [kk(i, 1 if e > 0 else -1)] * abs(e)


def _in_range(g: Gen, dt: AffineCartanDatum) -> bool:
    return g.kind == "C" or 0 <= g.i <= dt.n


def _eta_rule(dt):
    def rule(g: Gen):
        if not _in_range(g, dt):
            return None
        if g.kind in ("xp", "xm"):
            return Term.gen(Gen(g.kind, g.i, -g.m), dt)
        if g.kind == "h":
            return Term.word(_c_power(g.m) + [h(g.i, -g.m)], -ONE, dt)
        if g.kind == "k":
            return Term.gen(kk(g.i, -g.m), dt)
        return Term.gen(g, dt)
    return rule


def _w_rule(dt):
    def rule(g: Gen):
        if not _in_range(g, dt):
            return None
        if g.kind in ("xp", "xm"):
            other = "xm" if g.kind == "xp" else "xp"
            return Term.word(_c_power(g.m) + [Gen(other, g.i, g.m)], ONE, dt)
        if g.kind == "h":
            return Term.word([g], -ONE, dt)
        if g.kind == "k":
            return Term.gen(g, dt)
        return Term.gen(CC(-g.m), dt)
    return rule


def _x_rule(dt, i: int, power: int, upsilon: Sequence[int]):
    """X_i^{power} for power = +-1."""
    def rule(g: Gen):
        if not _in_range(g, dt):
            return None
        if g.kind in ("xp", "xm") and g.i == i:
            sign = -1 if g.kind == "xp" else 1       # m -+ 1 for x^{+-}
            return Term.word([Gen(g.kind, g.i, g.m + power * sign)], upsilon[i], dt)
        if g.kind == "k" and g.i == i:
            # q^h -> C^{-<Lambda_i, h>} q^h, so k_i^{e} -> C^{-e} k_i^{e}
            return Term.word(_c_power(-power * g.m) + [g], ONE, dt)
        return Term.gen(g, dt)
    return rule


def _s_pi_rule(dt, pi: Sequence[int]):
    def rule(g: Gen):
        if not _in_range(g, dt):
            return None
        if g.kind == "C":
            return Term.gen(g, dt)
        j = pi[g.i]
        if g.kind == "k":
            return Term.gen(kk(j, g.m), dt)
        return Term.word([Gen(g.kind, j, g.m)], dt.sign_pair(g.i, j) ** (g.m % 2), dt)
    return rule


def _scale_rule(dt, a: Scalar, grading: Callable[[Gen], int]):
    def rule(g: Gen):
        if not _in_range(g, dt):
            return None
        return Term.word([g], a ** grading(g), dt)
    return rule


def builtin(name: str, dt: AffineCartanDatum, **params) -> Morphism:
    """Standard (anti)automorphisms: id, eta, W, X (i, power), S_pi (pi), scale_v/scale_j/scale_Z (a, j)."""
    if name == "id":
        return identity(dt)
    if name == "eta":
        return Morphism("eta", dt, _eta_rule(dt), anti=True, degree_law="negate_mode")
    if name == "W":
        return Morphism("W", dt, _w_rule(dt), invert_q=True, degree_law="none")
    if name == "X":
        i, power = params["i"], params.get("power", 1)
        ups = params.get("upsilon", dt.o)
        return Morphism(f"X{i}^{power}", dt, _x_rule(dt, i, power, ups), degree_law="none")
    if name == "S_pi":
        pi = tuple(params["pi"])
        if pi not in dt.omega:
            raise TermError(f"{pi} is not a diagram automorphism in Omega")
        return Morphism(f"S{dt.omega_cycles(pi)}", dt, _s_pi_rule(dt, pi), degree_law="none")
    if name in ("scale_v", "scale_j", "scale_Z"):
        a = to_scalar(params["a"])
        if name == "scale_v":
            grading = lambda g: gen_deg_v(g, dt)
        elif name == "scale_Z":
            grading = lambda g: gen_degree(g, dt).deg_Z()
        else:
            j = params["j"]
            grading = lambda g: gen_degree(g, dt).deg_j(j)
        return Morphism(f"{name}[{a}]", dt, _scale_rule(dt, a, grading))
    raise TermError(f"unknown built-in morphism {name!r}")


def s_pi_inverse(dt: AffineCartanDatum, pi: Sequence[int]) -> Morphism:
    inv = [0] * len(pi)
    for s, t in enumerate(pi):
        inv[t] = s
    return builtin("S_pi", dt, pi=inv)


# ---------------------------------------------------------------------------
# braid operators

def alphabet(dt: AffineCartanDatum) -> list[Gen]:
    """Generators of the finite presentation (plus C^{+-1})."""
    out = [CC(1), CC(-1)]
    double = {i for i in dt.nodes for j in dt.nodes if i != j and dt.gcm[i][j] == dt.gcm[j][i] == -2}
    for i in dt.nodes:
        out += [kk(i, 1), kk(i, -1), xp(i, 0), xm(i, 0), xp(i, 1), xm(i, -1)]
        if i in double:
            out += [xp(i, -1), xm(i, 1)]
    return out


def _braid_images(dt: AffineCartanDatum, i: int):
    """Printed images of T_i, as a function on symbols (None outside the formulas)."""
    qi = dt.q_i(i)
    two = qint(2, dt.d[i])

    def T(g: Gen) -> Term | None:
        if g.kind == "C":
            return Term.gen(g, dt)
        if not 0 <= g.i <= dt.n:
            return None
        if g.kind == "k":
            return Term.word([g] + _k_power(i, -dt.gcm[i][g.i] * g.m), ONE, dt)
        if g.kind == "h":
            return None
        if g.i == i:
            key = (g.kind, g.m)
            if key == ("xp", 0):
                return Term.word([xm(i, 0), kk(i)], -ONE, dt)
            if key == ("xm", 0):
                return Term.word([kk(i, -1), xp(i, 0)], -ONE, dt)
            if key == ("xp", 1):
                return Term.word([CC(1), kk(i, -1), xm(i, 1)], -ONE, dt)
            if key == ("xm", -1):
                return Term.word([xp(i, -1), kk(i, 1), CC(-1)], -ONE, dt)
            if key == ("xp", -1):
                tot = Term({}, dt)
                for s in range(3):
                    tot = tot + (divided_power(xm(i, 0), s, dt) * Term.gen(xp(i, -1), dt)
                                 * divided_power(xm(i, 0), 2 - s, dt)) * ((-1) ** s * qi ** (3 * s))
                return Term.word(_k_power(i, 2), ONE, dt) * tot
            if key == ("xm", 1):
                tot = Term({}, dt)
                for s in range(3):
                    tot = tot + (divided_power(xp(i, 0), 2 - s, dt) * Term.gen(xm(i, 1), dt)
                                 * divided_power(xp(i, 0), s, dt)) * ((-1) ** s * qi ** (-3 * s))
                return tot * Term.word(_k_power(i, -2), ONE, dt)
            return None
        r = -dt.gcm[i][g.i]
        tot = Term({}, dt)
        for s in range(r + 1):
            if g.kind == "xp":
                piece = divided_power(xp(i, 0), r - s, dt) * Term.gen(g, dt) * divided_power(xp(i, 0), s, dt)
                tot = tot + piece * ((-1) ** s * qi ** (-s))
            else:
                piece = divided_power(xm(i, 0), s, dt) * Term.gen(g, dt) * divided_power(xm(i, 0), r - s, dt)
                tot = tot + piece * ((-1) ** s * qi ** s)
        return tot

    return T, two


def _closed_form_inverse(dt: AffineCartanDatum, i: int):
    """Lusztig's closed-form inverse on k, C, x^{+-}_{i,0} and x^{+-}_{j,m} (j != i)."""
    qi = dt.q_i(i)

    def Tinv(g: Gen) -> Term | None:
        if g.kind == "C":
            return Term.gen(g, dt)
        if not 0 <= g.i <= dt.n:
            return None
        if g.kind == "k":
            return Term.word([g] + _k_power(i, -dt.gcm[i][g.i] * g.m), ONE, dt)
        if g.kind == "h":
            return None
        if g.i == i:
            if (g.kind, g.m) == ("xp", 0):
                return Term.word([kk(i, -1), xm(i, 0)], -ONE, dt)
            if (g.kind, g.m) == ("xm", 0):
                return Term.word([xp(i, 0), kk(i)], -ONE, dt)
            return None
        r = -dt.gcm[i][g.i]
        tot = Term({}, dt)
        for s in range(r + 1):
            if g.kind == "xp":
                piece = divided_power(xp(i, 0), s, dt) * Term.gen(g, dt) * divided_power(xp(i, 0), r - s, dt)
                tot = tot + piece * ((-1) ** s * qi ** (-s))
            else:
                piece = divided_power(xm(i, 0), r - s, dt) * Term.gen(g, dt) * divided_power(xm(i, 0), s, dt)
                tot = tot + piece * ((-1) ** s * qi ** s)
        return tot

    return Tinv


def braid_op(i: int, sign: int, dt: AffineCartanDatum, extended: bool = False) -> Morphism:
    """T_i (sign=+1) or T_i^{-1} = eta T_i eta (sign=-1).

    The domain is the finite-presentation alphabet; ``extended`` admits every
    symbol covered by a closed-form formula (all x^{+-}_{j,m} with j != i, and
    x^{+-}_{i,-+1} in every type).
    """
    if i not in dt.nodes:
        raise TermError(f"node {i} not in I")
    T, _ = _braid_images(dt, i)
    allowed = set(alphabet(dt))

    def in_domain(g: Gen) -> bool:
        if g in allowed:
            return True
        if not extended or g.kind in ("h",):
            return False
        if g.kind in ("xp", "xm") and g.i != i:
            return True
        return g in (xp(i, -1), xm(i, 1))

    if sign == 1:
        def rule(g: Gen):
            return T(g) if in_domain(g) else None
        return Morphism(f"T{i}", dt, rule, degree_law="none")
    if sign == -1:
        eta = builtin("eta", dt)
        fwd = Morphism(f"T{i}", dt, lambda g: T(g), degree_law="none")

        def rule_inv(g: Gen):
            if not in_domain(g):
                return None
            inner = eta.image(g)
            try:
                return apply(eta, apply(fwd, inner))
            except NotInDomain:
                return None
        return Morphism(f"T{i}^-1", dt, rule_inv, degree_law="none")
    raise TermError("sign must be +-1")


def lusztig_braid(i: int, sign: int, dt: AffineCartanDatum) -> Morphism:
    """Lusztig's T_i^{+-1} on the Drinfeld-Jimbo alphabet {x^{+-}_{j,0}, k_j^{+-1}, C}."""
    T, _ = _braid_images(dt, i)
    Tinv = _closed_form_inverse(dt, i)
    base = T if sign == 1 else Tinv

    def rule(g: Gen):
        if g.kind in ("xp", "xm") and g.m != 0:
            return None
        if g.kind == "h":
            return None
        return base(g)
    return Morphism(f"L{i}^{sign}", dt, rule, degree_law="none")


def braid_inverse_table(dt: AffineCartanDatum, i: int) -> list[dict]:
    """Compare eta T_i eta with the closed-form inverse wherever the latter exists.

    Returns one row per alphabet symbol: {'symbol', 'status'} where status is
    'literal' (equal as free terms), 'literal_mod_torus' (equal once the k's
    and C's are commuted into normal order), 'mismatch', or 'needs_relations'
    (no closed-form inverse: decided on representations by the caller).
    """
    inv = braid_op(i, -1, dt, extended=True)
    closed = _closed_form_inverse(dt, i)
    rows = []
    for g in alphabet(dt):
        lhs = inv.rule(g)
        ref = closed(g)
        if lhs is None:
            rows.append({"symbol": str(g), "status": "not_in_domain"})
        elif ref is None:
            rows.append({"symbol": str(g), "status": "needs_relations", "image": str(lhs)})
        else:
            if lhs == ref:
                status = "literal"
            elif torus_normal_form(lhs) == torus_normal_form(ref):
                status = "literal_mod_torus"
            else:
                status = "mismatch"
            rows.append({"symbol": str(g), "status": status, "image": str(lhs)})
    return rows


# ---------------------------------------------------------------------------
# psi dictionary

@dataclass(frozen=True)
class BraidProgram:
    """psi(g) = sign * b(base), where b is a braid word (serialized) acting on a generator."""

    word: str
    base: Gen
    sign: int
    invert_base: bool = False   # for k: apply to base^{-1}


def _a1_psi_closed_forms(dt: AffineCartanDatum) -> dict[Gen, Term]:
    o = dt.o
    two_inv = qint(2).inverse()
    g = lambda s: Term.gen(s, dt)
    w = lambda *s, c=ONE: Term.word(list(s), c, dt)
    br = qbracket
    tab: dict[Gen, Term] = {
        kk(1, 1): g(kk(1, -1)),
        kk(1, -1): g(kk(1, 1)),
        xp(1, 0): g(xp(1, 0)),
        xm(1, 0): g(xm(1, 0)),
        xp(1, 1): br(g(xp(1, 0)), br(g(xp(1, 0)), g(xp(0, 0)), Q ** -2)) * (o[1] * two_inv),
        xm(1, -1): br(br(g(xm(0, 0)), g(xm(1, 0)), Q ** 2), g(xm(1, 0))) * (o[1] * two_inv),
        xp(1, -1): w(kk(0, -1), xm(0, 0), c=o[0]),
        xm(1, 1): w(xp(0, 0), kk(0, 1), c=o[0]),
        kk(0, 1): w(CC(-1), kk(1, 1)),
        kk(0, -1): w(CC(1), kk(1, -1)),
        xp(0, 0): w(CC(1), kk(1, -1), xm(1, 1), c=o[0]),
        xm(0, 0): w(xp(1, -1), CC(-1), kk(1, 1), c=o[0]),
        xp(0, 1): g(xp(0, 1)),
        xm(0, -1): g(xm(0, -1)),
        # sign o(0)o(1): fixed by expanding the braid word o(0) T1 pi1 X1 T1^-1 (see psi_programs_a1)
        xp(0, -1): w(CC(1), kk(0, -1), kk(1, -1), kk(1, -1), c=o[0] * o[1] * two_inv)
        * br(br(g(xm(0, 1)), g(xm(1, 0)), Q ** 2), g(xm(1, 0))),
        xm(0, 1): br(g(xp(1, 0)), br(g(xp(1, 0)), g(xp(0, -1)), Q ** -2))
        * w(CC(-1), kk(0, 1), kk(1, 1), kk(1, 1), c=o[1] * two_inv),
        CC(1): w(kk(0, -1), kk(1, -1)),
        CC(-1): w(kk(0, 1), kk(1, 1)),
    }
    return tab


def psi_programs_a1() -> dict[Gen, BraidProgram]:
    """Braid-word descriptions of the A1 psi images (words act right to left)."""
    P = BraidProgram
    return {
        xp(1, 1): P("T1 pi1", xp(1, 0), -1),          # o(1) Y1^-1 = o(1) T1 pi1
        xm(1, -1): P("T1 pi1", xm(1, 0), -1),
        xp(1, -1): P("pi1 T1^-1", xp(1, 0), -1),      # o(1) Y1 = o(1) pi1 T1^-1
        xm(1, 1): P("pi1 T1^-1", xm(1, 0), -1),
        kk(0, 1): P("X[1] T1^-1", kk(1, 1), 1, invert_base=True),
        kk(0, -1): P("X[1] T1^-1", kk(1, -1), 1, invert_base=True),
        xp(0, 0): P("X[1] T1^-1", xp(1, 0), 1),       # rho1 = X1 T1^-1
        xm(0, 0): P("X[1] T1^-1", xm(1, 0), 1),
        xp(0, 1): P("X[1] pi1", xp(1, 0), 1),         # o(0) X1 pi1
        xm(0, -1): P("X[1] pi1", xm(1, 0), 1),
        xp(0, -1): P("T1 pi1 X[1] T1^-1", xp(1, 0), 1),
        xm(0, 1): P("T1 pi1 X[1] T1^-1", xm(1, 0), 1),
    }


def psi_dictionary(dt: AffineCartanDatum) -> dict[Gen, "Term | BraidProgram"]:
    """Images of the finite-presentation generators and C under psi.

    In A1 every entry is a closed-form Term.  In other types entries are
    braid programs, expanded on demand by :func:`qtoroidal.dab.expand_program`.
    """
    if dt.label == "A1~1":
        return _a1_psi_closed_forms(dt)
    return _general_psi_programs(dt)


def _general_psi_programs(dt: AffineCartanDatum) -> dict[Gen, "Term | BraidProgram"]:
    P = BraidProgram
    out: dict[Gen, Term | BraidProgram] = {}
    kdelta_inv = []
    for i in dt.nodes:
        kdelta_inv += _k_power(i, -dt.a[i])
    out[CC(1)] = Term.word(kdelta_inv, ONE, dt)
    out[CC(-1)] = Term.word([kk(g.i, -g.m) for g in kdelta_inv], ONE, dt)
    for i in dt.finite_nodes:
        out[kk(i, 1)] = Term.gen(kk(i, -1), dt)
        out[kk(i, -1)] = Term.gen(kk(i, 1), dt)
        out[xp(i, 0)] = Term.gen(xp(i, 0), dt)
        out[xm(i, 0)] = Term.gen(xm(i, 0), dt)
        out[xp(i, 1)] = P(f"Y[{_unit(dt, i)}]^-1", xp(i, 0), dt.o[i])
        out[xm(i, -1)] = P(f"Y[{_unit(dt, i)}]^-1", xm(i, 0), dt.o[i])
    out[xp(0, 1)] = Term.gen(xp(0, 1), dt)
    out[xm(0, -1)] = Term.gen(xm(0, -1), dt)
    if dt.label.startswith("C"):
        n = dt.n
        out[kk(0, 1)] = P(f"rho{n}", kk(n, 1), 1, invert_base=True)
        out[kk(0, -1)] = P(f"rho{n}", kk(n, -1), 1, invert_base=True)
        out[xp(0, 0)] = P(f"rho{n}", xp(n, 0), 1)
        out[xm(0, 0)] = P(f"rho{n}", xm(n, 0), 1)
    else:
        ell = min(j for j in dt.finite_nodes if dt.gcm[0][j] < 0)
        out[kk(0, 1)] = P(f"T{ell} T0v", kk(ell, 1), 1, invert_base=True)
        out[kk(0, -1)] = P(f"T{ell} T0v", kk(ell, -1), 1, invert_base=True)
        out[xp(0, 0)] = P(f"T{ell} T0v", xp(ell, 0), 1)
        out[xm(0, 0)] = P(f"T{ell} T0v", xm(ell, 0), 1)
    return out


def _unit(dt: AffineCartanDatum, i: int) -> str:
    return ",".join("1" if j == i else "0" for j in dt.finite_nodes)


def psi_morphism(dt: AffineCartanDatum) -> Morphism:
    """psi as an anti-homomorphism on the A1 closed-form table."""
    if dt.label != "A1~1":
        raise TermError("closed-form psi is only available in type A1~1")
    table = _a1_psi_closed_forms(dt)
    return Morphism("psi", dt, table.get, anti=True, degree_law="swap")


def grading_swap_check(dt: AffineCartanDatum, dictionary: Mapping[Gen, Term] | None = None) -> dict:
    """For every dictionary entry g of degree (beta + k delta, l delta') check deg psi(g) = (beta + l delta, k delta')."""
    dictionary = dictionary if dictionary is not None else psi_dictionary(dt)
    rows, ok = [], True
    for g in sorted(dictionary):
        img = dictionary[g]
        if not isinstance(img, Term):
            raise TermError(f"entry {g} must be expanded before the grading check")
        src = gen_degree(g, dt)
        want = src.swapped(dt)
        got = img.degree()
        good = got is not None and got == want
        ok &= good
        rows.append({"symbol": str(g), "degree": str(src), "expected": str(want),
                     "image_degree": "inhomogeneous" if got is None else str(got), "ok": good})
    return {"ok": ok, "rows": rows}
