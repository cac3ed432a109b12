"""Exact arithmetic kernel.

Scalars are reduced fractions of integer multivariate polynomials over a
fixed variable alphabet (``q`` first, spectral parameters after it in
alphabetical order).  Every value is immutable and kept in a canonical
form, so equality is structural.
"""

from __future__ import annotations

import ast
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

import flint

VARIABLES: tuple[str, ...] = ("q", "a", "b", "c", "lam", "t", "u", "w", "x", "y", "z")
_CTX = flint.fmpz_mpoly_ctx.get(VARIABLES, "lex")
_INDEX = {name: i for i, name in enumerate(VARIABLES)}
_NV = len(VARIABLES)


class ExactError(ValueError):
    """Raised for invalid exact operations (zero division, failed reconstruction...)."""


def _poly_const(n: int):
    return _CTX.constant(int(n))


def _poly_gen(name: str):
    try:
        return _CTX.gen(_INDEX[name])
    except KeyError:
        raise ExactError(f"unknown variable {name!r}; alphabet is {VARIABLES}") from None


class Scalar:
    """Element of Q(q, a, b, ...) stored as a reduced fraction num/den."""

    __slots__ = ("num", "den", "_hash")

    def __init__(self, value=0, den=None, *, _raw: bool = False):
        if _raw:
            self.num, self.den = value, den
            self._hash = None
            return
        num = _coerce_poly_pair(value)
        if den is None:
            n, d = num
        else:
            dn, dd = _coerce_poly_pair(den)
            if dn.is_zero():
                raise ExactError("zero denominator")
            n, d = num[0] * dd, num[1] * dn
        self.num, self.den = _reduce(n, d)
        self._hash = None

    # construction helpers -------------------------------------------------
    @classmethod
    def _make(cls, n, d) -> "Scalar":
        if d.is_zero():
            raise ExactError("zero denominator")
        n, d = _reduce(n, d)
        return cls(n, d, _raw=True)

    @classmethod
    def var(cls, name: str) -> "Scalar":
        return cls(_poly_gen(name), _poly_const(1), _raw=True)

    @classmethod
    def parse(cls, text: str) -> "Scalar":
        return parse_scalar(text)

    # basic predicates -----------------------------------------------------
    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num == self.den

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def is_polynomial(self) -> bool:
        return self.den.is_constant()

    def free_variables(self) -> set[str]:
        used = set()
        for p in (self.num, self.den):
            for i, d in enumerate(p.degrees()):
                if d:
                    used.add(VARIABLES[i])
        return used

    def to_fraction(self) -> Fraction:
        if not self.is_constant():
            raise ExactError(f"{self} is not a rational constant")
        return Fraction(int(self.num.coefficient(0)) if not self.num.is_zero() else 0,
                        int(self.den.coefficient(0)))

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        o = _as_scalar(other)
        if o is NotImplemented:
            return o
        if self.num.is_zero():
            return o
        if o.num.is_zero():
            return self
        if self.den == o.den:
            return Scalar._make(self.num + o.num, self.den)
        return Scalar._make(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(-self.num, self.den, _raw=True)

    def __sub__(self, other):
        o = _as_scalar(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = _as_scalar(other)
        if o is NotImplemented:
            return o
        if self.num.is_zero() or o.num.is_zero():
            return ZERO
        return Scalar._make(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "Scalar":
        if self.num.is_zero():
            raise ExactError("division by zero Scalar")
        return Scalar._make(self.den, self.num)

    def __truediv__(self, other):
        o = _as_scalar(other)
        if o is NotImplemented:
            return o
        return self * o.inverse()

    def __rtruediv__(self, other):
        return _as_scalar(other) * self.inverse()

    def __pow__(self, e: int):
        e = int(e)
        if e < 0:
            return self.inverse() ** (-e)
        return Scalar(self.num ** e, self.den ** e, _raw=True)

    def __eq__(self, other):
        o = _as_scalar(other)
        if o is NotImplemented:
            return False
        return self.num == o.num and self.den == o.den

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((str(self.num), str(self.den)))
        return self._hash

    # substitution ----------------------------------------------------------
    def subs(self, mapping: Mapping[str, "Scalar | int | Fraction | str"]) -> "Scalar":
        """Substitute Scalars for variables (simultaneously)."""
        if not mapping:
            return self
        images = {k: _as_scalar_strict(v) for k, v in mapping.items()}
        return _poly_subs(self.num, images) / _poly_subs(self.den, images)

    def invert_q(self) -> "Scalar":
        """The field involution q -> q^-1 (other variables fixed)."""
        return self.subs({"q": Q.inverse()})

    # polynomial views -----------------------------------------------------
    def coefficients_in(self, name: str) -> list["Scalar"]:
        """Coefficient list in ``name`` (requires a polynomial in that variable)."""
        if _INDEX[name] < _NV and self.den.degrees()[_INDEX[name]] != 0:
            raise ExactError(f"{self} is not polynomial in {name}")
        out = _poly_coeffs(self.num, name)
        den = Scalar(self.den, _poly_const(1), _raw=True)
        return [c / den for c in out]

    def numerator(self) -> "Scalar":
        return Scalar(self.num, _poly_const(1), _raw=True)

    def denominator(self) -> "Scalar":
        return Scalar(self.den, _poly_const(1), _raw=True)

    def degree_in(self, name: str) -> tuple[int, int]:
        i = _INDEX[name]
        return self.num.degrees()[i], self.den.degrees()[i]

    # serialization -------------------------------------------------------
    def __str__(self):
        n = str(self.num)
        if self.den.is_one():
            return f"({n})"
        return f"({n})/({self.den})"

    def __repr__(self):
        return f"Scalar({str(self)!r})"


def _reduce(n, d):
    if n.is_zero():
        return n, _poly_const(1)
    if not d.is_constant() or not d.is_one():
        g = n.gcd(d)
        if not g.is_one():
            n = n / g
            d = d / g
    if d.leading_coefficient() < 0:
        n, d = -n, -d
    return n, d


def _coerce_poly_pair(v):
    if isinstance(v, Scalar):
        return v.num, v.den
    if isinstance(v, bool):
        raise TypeError("bool is not a Scalar")
    if isinstance(v, int):
        return _poly_const(v), _poly_const(1)
    if isinstance(v, Fraction):
        return _poly_const(v.numerator), _poly_const(v.denominator)
    if isinstance(v, flint.fmpz_mpoly):
        return v, _poly_const(1)
    if isinstance(v, str):
        s = parse_scalar(v)
        return s.num, s.den
    raise TypeError(f"cannot make a Scalar from {type(v).__name__}")


def _as_scalar(v):
    if isinstance(v, Scalar):
        return v
    if isinstance(v, (int, Fraction)) and not isinstance(v, bool):
        return Scalar(v)
    return NotImplemented


def _as_scalar_strict(v) -> Scalar:
    if isinstance(v, Scalar):
        return v
    return Scalar(v)


def _poly_coeffs(p, name: str) -> list[Scalar]:
    """Split an integer polynomial by powers of one variable."""
    i = _INDEX[name]
    buckets: dict[int, dict] = {}
    for exps, c in p.terms():
        e = exps[i]
        rest = list(exps)
        rest[i] = 0
        buckets.setdefault(e, {})[tuple(rest)] = c
    if not buckets:
        return [ZERO]
    top = max(buckets)
    one = _poly_const(1)
    return [Scalar(_CTX.from_dict(buckets[e]), one, _raw=True) if e in buckets else ZERO
            for e in range(top + 1)]


def _poly_subs(p, images: Mapping[str, Scalar]) -> Scalar:
    """Evaluate an integer polynomial at Scalar values, one variable at a time (Horner)."""
    acc = Scalar(p, _poly_const(1), _raw=True)
    for name, val in images.items():
        if acc.num.degrees()[_INDEX[name]] == 0 and acc.den.degrees()[_INDEX[name]] == 0:
            continue
        num = _horner(_poly_coeffs(acc.num, name), val)
        den = _horner(_poly_coeffs(acc.den, name), val)
        acc = num / den
    return acc


def _horner(coeffs: Sequence[Scalar], val: Scalar) -> Scalar:
    acc = ZERO
    for c in reversed(coeffs):
        acc = acc * val + c
    return acc


ZERO = Scalar(0)
ONE = Scalar(1)
Q = Scalar.var("q")


def var(name: str) -> Scalar:
    return Scalar.var(name)


def qpow(e: int) -> Scalar:
    return Q ** e


def to_scalar(v) -> Scalar:
    return _as_scalar_strict(v)


# ---------------------------------------------------------------------------
# parsing

_BINOPS = {ast.Add: "__add__", ast.Sub: "__sub__", ast.Mult: "__mul__", ast.Div: "__truediv__"}


def parse_scalar(text: str) -> Scalar:
    """Parse the canonical ASCII syntax (``+ - * / ^``, integers, variable names)."""
    try:
        tree = ast.parse(text.strip().replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ExactError(f"cannot parse {text!r}") from exc
    return _eval_node(tree.body)


def _eval_node(node) -> Scalar:
    if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
        return Scalar(node.value)
    if isinstance(node, ast.Name):
        return Scalar.var(node.id)
    if isinstance(node, ast.UnaryOp) and isinstance(node.op, (ast.USub, ast.UAdd)):
        v = _eval_node(node.operand)
        return -v if isinstance(node.op, ast.USub) else v
    if isinstance(node, ast.BinOp):
        if isinstance(node.op, ast.Pow):
            base = _eval_node(node.left)
            exp = _eval_node(node.right)
            if not exp.is_constant() or exp.to_fraction().denominator != 1:
                raise ExactError("exponents must be integers")
            return base ** int(exp.to_fraction())
        op = _BINOPS.get(type(node.op))
        if op is not None:
            return getattr(_eval_node(node.left), op)(_eval_node(node.right))
    raise ExactError(f"unsupported syntax: {ast.dump(node)}")


# ---------------------------------------------------------------------------
# truncated Laurent series

class Series:
    """Truncated Laurent series in ``t`` where t = var (at 0) or t = 1/var (at infinity).

    ``coeffs[k]`` is the coefficient of t**(valuation + k); everything above
    ``order = valuation + len(coeffs) - 1`` is unknown.
    """

    __slots__ = ("variable", "direction", "valuation", "coeffs")

    def __init__(self, variable: str, direction: str, valuation: int, coeffs: Sequence[Scalar]):
        if direction not in ("0", "inf"):
            raise ExactError("direction must be '0' or 'inf'")
        self.variable = variable
        self.direction = direction
        self.valuation = int(valuation)
        self.coeffs = tuple(_as_scalar_strict(c) for c in coeffs)

    @property
    def order(self) -> int:
        return self.valuation + len(self.coeffs) - 1

    def coeff(self, e: int) -> Scalar:
        if e > self.order:
            raise ExactError(f"coefficient t^{e} is beyond the truncation order {self.order}")
        if e < self.valuation:
            return ZERO
        return self.coeffs[e - self.valuation]

    def _check(self, other: "Series"):
        if (self.variable, self.direction) != (other.variable, other.direction):
            raise ExactError("series expanded in different variables/directions")

    def __add__(self, other: "Series") -> "Series":
        self._check(other)
        lo = min(self.valuation, other.valuation)
        hi = min(self.order, other.order)
        return Series(self.variable, self.direction, lo,
                      [self.coeff(e) + other.coeff(e) for e in range(lo, hi + 1)])

    def __neg__(self):
        return Series(self.variable, self.direction, self.valuation, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Series):
            self._check(other)
            lo = self.valuation + other.valuation
            # absolute precision of a product is limited by each factor's relative precision
            hi = min(self.order + other.valuation, other.order + self.valuation)
            out = []
            for e in range(lo, hi + 1):
                acc = ZERO
                for i in range(self.valuation, e - other.valuation + 1):
                    acc = acc + self.coeff(i) * other.coeff(e - i)
                out.append(acc)
            return Series(self.variable, self.direction, lo, out)
        s = _as_scalar_strict(other)
        return Series(self.variable, self.direction, self.valuation, [c * s for c in self.coeffs])

    __rmul__ = __mul__

    def __eq__(self, other):
        return (isinstance(other, Series) and (self.variable, self.direction) == (other.variable, other.direction)
                and self.order == other.order
                and all(self.coeff(e) == other.coeff(e)
                        for e in range(min(self.valuation, other.valuation), self.order + 1)))

    def truncate(self, order: int) -> "Series":
        if order > self.order:
            raise ExactError("cannot extend a truncated series")
        return Series(self.variable, self.direction, self.valuation,
                      self.coeffs[: max(0, order - self.valuation + 1)])

    def __repr__(self):
        sym = self.variable if self.direction == "0" else f"{self.variable}^-1"
        body = " + ".join(f"{c}*({sym})^{self.valuation + k}" for k, c in enumerate(self.coeffs) if not c.is_zero())
        return f"Series[{body or '0'} + O(({sym})^{self.order + 1})]"


class PoleError(ExactError):
    def __init__(self, msg: str, pole_order: int):
        super().__init__(msg)
        self.pole_order = pole_order


def _local_polys(s: Scalar, variable: str, direction: str):
    """Numerator/denominator as coefficient lists in the local parameter t, plus a shift."""
    num = _poly_coeffs(s.num, variable)
    den = _poly_coeffs(s.den, variable)
    shift = 0
    if direction == "inf":
        # P(1/t)/Q(1/t) = t^(dQ - dP) * rev(P)(t) / rev(Q)(t)
        shift = (len(den) - 1) - (len(num) - 1)
        num, den = num[::-1], den[::-1]
    vn = next(i for i, c in enumerate(num) if not c.is_zero()) if not s.is_zero() else 0
    vd = next(i for i, c in enumerate(den) if not c.is_zero())
    return num[vn:], den[vd:], shift + vn - vd


def expand(s: Scalar, variable: str, direction: str, N: int, allow_pole: bool = True) -> Series:
    """Laurent expansion of ``s`` at ``variable`` -> 0 or infinity: N+1 coefficients from the valuation."""
    s = _as_scalar_strict(s)
    if s.is_zero():
        return Series(variable, direction, 0, [ZERO] * (N + 1))
    num, den, val = _local_polys(s, variable, direction)
    if val < 0 and not allow_pole:
        raise PoleError(f"pole of order {-val} at {variable} = {'0' if direction == '0' else 'infinity'}", -val)
    d0inv = den[0].inverse()
    out: list[Scalar] = []
    for k in range(N + 1):
        acc = num[k] if k < len(num) else ZERO
        for j in range(1, min(k, len(den) - 1) + 1):
            acc = acc - den[j] * out[k - j]
        out.append(acc * d0inv)
    return Series(variable, direction, val, out)


def reconstruct(series: Series, bounds: tuple[int, int]) -> Scalar:
    """Rational function P/Q (deg P <= d_num, deg Q <= d_den, Q(0) != 0 in t) matching the series."""
    dn, dd = bounds
    v = series.valuation
    known = series.order
    if known - v < dn + dd:
        raise ExactError(f"ambiguous (insufficient order): need {dn + dd + 1} coefficients, have {known - v + 1}")
    coeffs = [series.coeff(e) for e in range(v, known + 1)]
    nrows = len(coeffs)
    # unknowns: P_0..P_dn, Q_0..Q_dd ; equations sum_j Q_j c_{k-j} - P_k = 0 for k < nrows
    rows = []
    for k in range(nrows):
        row = [(-ONE if k == i else ZERO) for i in range(dn + 1)]
        row += [coeffs[k - j] if k - j >= 0 else ZERO for j in range(dd + 1)]
        rows.append(row)
    null = Matrix(rows).nullspace()
    t = Scalar.var(series.variable) if series.direction == "0" else Scalar.var(series.variable).inverse()
    for vec in null:
        qpart = vec[dn + 1:]
        if all(c.is_zero() for c in qpart):
            continue
        P = sum((vec[i] * t ** i for i in range(dn + 1)), ZERO)
        Qp = sum((qpart[j] * t ** j for j in range(dd + 1)), ZERO)
        cand = P / Qp * t ** v
        try:
            check = expand(cand, series.variable, series.direction, known - v)
        except ExactError:
            continue
        if check.valuation >= v and all(check.coeff(e) == series.coeff(e) for e in range(v, known + 1)):
            # the reduced fraction must itself respect the bounds
            n_, d_, _ = _local_polys(cand, series.variable, series.direction) if not cand.is_zero() else ([ZERO], [ONE], 0)
            if len(n_) - 1 <= dn and len(d_) - 1 <= dd:
                return cand
        break
    raise ExactError("no match within the degree bounds")


# ---------------------------------------------------------------------------
# matrices

class Matrix:
    """Dense matrix of Scalars with exact elimination."""

    __slots__ = ("rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        self.rows = tuple(tuple(_as_scalar_strict(x) for x in r) for r in rows)
        self.nrows = len(self.rows)
        self.ncols = len(self.rows[0]) if self.rows else (ncols or 0)
        if any(len(r) != self.ncols for r in self.rows):
            raise ExactError("ragged matrix")

    @classmethod
    def zeros(cls, n: int, m: int | None = None) -> "Matrix":
        m = n if m is None else m
        return cls([[ZERO] * m for _ in range(n)], ncols=m)

    @classmethod
    def identity(cls, n: int) -> "Matrix":
        return cls([[ONE if i == j else ZERO for j in range(n)] for i in range(n)], ncols=n)

    @classmethod
    def unit(cls, n: int, i: int, j: int, m: int | None = None) -> "Matrix":
        m = n if m is None else m
        return cls([[ONE if (r, c) == (i, j) else ZERO for c in range(m)] for r in range(n)], ncols=m)

    @classmethod
    def diag(cls, entries: Sequence) -> "Matrix":
        n = len(entries)
        return cls([[entries[i] if i == j else ZERO for j in range(n)] for i in range(n)], ncols=n)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __add__(self, other: "Matrix") -> "Matrix":
        _same_shape(self, other)
        return Matrix([[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def __sub__(self, other: "Matrix") -> "Matrix":
        _same_shape(self, other)
        return Matrix([[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)], self.ncols)

    def __neg__(self):
        return Matrix([[-a for a in r] for r in self.rows], self.ncols)

    def scale(self, s) -> "Matrix":
        s = _as_scalar_strict(s)
        if s.is_zero():
            return Matrix.zeros(self.nrows, self.ncols)
        return Matrix([[a * s for a in r] for r in self.rows], self.ncols)

    def __mul__(self, other):
        if isinstance(other, Matrix):
            return self.matmul(other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def matmul(self, other: "Matrix") -> "Matrix":
        if self.ncols != other.nrows:
            raise ExactError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = list(zip(*other.rows)) if other.rows else []
        out = []
        for r in self.rows:
            nz = [(k, a) for k, a in enumerate(r) if not a.is_zero()]
            row = []
            for j in range(other.ncols):
                acc = ZERO
                col = cols[j]
                for k, a in nz:
                    b = col[k]
                    if not b.is_zero():
                        acc = acc + a * b
                row.append(acc)
            out.append(row)
        return Matrix(out, other.ncols)

    __matmul__ = matmul

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.shape == other.shape and self.rows == other.rows

    def __hash__(self):
        return hash(self.rows)

    def is_zero(self) -> bool:
        return all(a.is_zero() for r in self.rows for a in r)

    def first_nonzero(self):
        for i, r in enumerate(self.rows):
            for j, a in enumerate(r):
                if not a.is_zero():
                    return (i, j, a)
        return None

    def transpose(self) -> "Matrix":
        return Matrix([list(c) for c in zip(*self.rows)], self.nrows) if self.rows else Matrix.zeros(self.ncols, 0)

    def kron(self, other: "Matrix") -> "Matrix":
        out = []
        for r in self.rows:
            for s in other.rows:
                out.append([a * b for a in r for b in s])
        return Matrix(out, self.ncols * other.ncols)

    def map(self, fn) -> "Matrix":
        return Matrix([[fn(a) for a in r] for r in self.rows], self.ncols)

    def subs(self, mapping) -> "Matrix":
        return self.map(lambda a: a.subs(mapping))

    def column(self, j: int) -> list[Scalar]:
        return [r[j] for r in self.rows]

    def apply(self, vec: Sequence[Scalar]) -> list[Scalar]:
        return [sum((a * v for a, v in zip(r, vec) if not a.is_zero()), ZERO) for r in self.rows]

    def submatrix(self, rows: Sequence[int], cols: Sequence[int]) -> "Matrix":
        return Matrix([[self.rows[i][j] for j in cols] for i in rows], len(cols))

    def is_diagonal(self) -> bool:
        return all(a.is_zero() for i, r in enumerate(self.rows) for j, a in enumerate(r) if i != j)

    def diagonal(self) -> list[Scalar]:
        return [self.rows[i][i] for i in range(min(self.nrows, self.ncols))]

    # elimination ----------------------------------------------------------
    def rref(self):
        """Reduced row echelon form; pivots chosen as the first nonzero entry (deterministic)."""
        m = [list(r) for r in self.rows]
        pivots = []
        row = 0
        for col in range(self.ncols):
            piv = next((i for i in range(row, self.nrows) if not m[i][col].is_zero()), None)
            if piv is None:
                continue
            m[row], m[piv] = m[piv], m[row]
            inv = m[row][col].inverse()
            m[row] = [a * inv for a in m[row]]
            for i in range(self.nrows):
                if i != row and not m[i][col].is_zero():
                    f = m[i][col]
                    m[i] = [a - f * b for a, b in zip(m[i], m[row])]
            pivots.append(col)
            row += 1
            if row == self.nrows:
                break
        return Matrix(m, self.ncols), pivots

    def rank(self) -> int:
        return len(self.rref()[1])

    def nullspace(self) -> list[list[Scalar]]:
        r, pivots = self.rref()
        free = [j for j in range(self.ncols) if j not in pivots]
        basis = []
        for f in free:
            vec = [ZERO] * self.ncols
            vec[f] = ONE
            for i, p in enumerate(pivots):
                vec[p] = -r.rows[i][f]
            basis.append(vec)
        return basis

    def solve(self, rhs: Sequence[Scalar]) -> list[Scalar]:
        """A particular solution of self @ x = rhs (raises if inconsistent)."""
        aug = Matrix([list(r) + [_as_scalar_strict(b)] for r, b in zip(self.rows, rhs)], self.ncols + 1)
        r, pivots = aug.rref()
        if self.ncols in pivots:
            raise ExactError("inconsistent linear system")
        x = [ZERO] * self.ncols
        for i, p in enumerate(pivots):
            x[p] = r.rows[i][self.ncols]
        return x

    def det(self) -> Scalar:
        if self.nrows != self.ncols:
            raise ExactError("det of a non-square matrix")
        m = [list(r) for r in self.rows]
        n = self.nrows
        d = ONE
        for col in range(n):
            piv = next((i for i in range(col, n) if not m[i][col].is_zero()), None)
            if piv is None:
                return ZERO
            if piv != col:
                m[col], m[piv] = m[piv], m[col]
                d = -d
            p = m[col][col]
            d = d * p
            inv = p.inverse()
            for i in range(col + 1, n):
                if not m[i][col].is_zero():
                    f = m[i][col] * inv
                    m[i] = [a - f * b for a, b in zip(m[i], m[col])]
        return d

    def inverse(self) -> "Matrix":
        n = self.nrows
        aug = Matrix([list(r) + [ONE if i == j else ZERO for j in range(n)] for i, r in enumerate(self.rows)], 2 * n)
        r, pivots = aug.rref()
        if pivots[:n] != list(range(n)):
            raise ExactError("singular matrix")
        return Matrix([row[n:] for row in r.rows], n)

    def to_strings(self) -> list[list[str]]:
        return [[str(a) for a in r] for r in self.rows]

    @classmethod
    def from_strings(cls, rows) -> "Matrix":
        return cls([[parse_scalar(a) for a in r] for r in rows])

    def __repr__(self):
        return "Matrix(" + repr(self.to_strings()) + ")"


def _same_shape(a: Matrix, b: Matrix):
    if a.shape != b.shape:
        raise ExactError(f"shape mismatch {a.shape} vs {b.shape}")


def commutator(a: Matrix, b: Matrix, u=ONE) -> Matrix:
    """Twisted commutator ab - u ba."""
    return a @ b - (b @ a).scale(u)


# ---------------------------------------------------------------------------
# factoring helpers

def linear_roots(poly: Scalar, name: str) -> list[tuple[Scalar, int]]:
    """Roots (with multiplicity) of a polynomial in ``name`` that splits into linear factors.

    Raises ExactError if some irreducible factor has degree > 1 in ``name``.
    """
    if poly.is_zero():
        raise ExactError("roots of the zero polynomial")
    i = _INDEX[name]
    _, factors = poly.num.factor()
    roots: list[tuple[Scalar, int]] = []
    for f, mult in factors:
        deg = f.degrees()[i]
        if deg == 0:
            continue
        if deg > 1:
            raise ExactError(f"factor {f} of degree {deg} in {name} does not split")
        c = _poly_coeffs(f, name)
        roots.append((-c[0] / c[1], int(mult)))
    roots.sort(key=lambda rm: str(rm[0]))
    return roots


def factor_scalar(s: Scalar):
    """(constant, [(factor, exponent)]) with negative exponents for denominator factors."""
    cn, fn = s.num.factor()
    cd, fd = s.den.factor()
    one = _poly_const(1)
    out = [(Scalar(f, one, _raw=True), int(e)) for f, e in fn]
    out += [(Scalar(f, one, _raw=True), -int(e)) for f, e in fd]
    out.sort(key=lambda fe: (str(fe[0]), fe[1]))
    return Scalar(int(cn)) / Scalar(int(cd)), out
