"""Truncated formal power series and Laurent series over exact rings.

Coefficients are ``Fraction``/``int`` or weight polynomials (see
:mod:`catpaths.rings`).  A :class:`TruncSeries` of order N stores c_0..c_N and
all arithmetic is exact modulo t^(N+1); binary operations on series of
different orders return the smaller order.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .rings import exact_div, exact_sqrt, is_unit


class NonInvertibleConstantTerm(ArithmeticError):
    pass


class NonSquareConstantTerm(ArithmeticError):
    pass


class NoPowerSeriesBranch(ArithmeticError):
    pass


class AmbiguousBranch(ArithmeticError):
    pass


class ZeroSeries(ArithmeticError):
    pass


def _zero_like(c):
    return c * 0


def _coerce(c):
    return Fraction(c) if isinstance(c, int) else c


class TruncSeries:
    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence):
        if len(coeffs) == 0:
            raise ValueError("a truncated series needs at least one coefficient")
        self.coeffs = tuple(_coerce(c) for c in coeffs)

    # -- construction -----------------------------------------------------
    @classmethod
    def poly(cls, coeffs: Sequence, N: int, zero=Fraction(0)) -> "TruncSeries":
        """Polynomial sum c_k t^k, padded or cut to order N."""
        cs = [zero + c for c in list(coeffs)[: N + 1]]
        cs += [zero] * (N + 1 - len(cs))
        return cls(cs)

    @classmethod
    def constant(cls, c, N: int) -> "TruncSeries":
        c = _coerce(c)
        return cls([c] + [_zero_like(c)] * N)

    @classmethod
    def monomial(cls, k: int, N: int, c=Fraction(1)) -> "TruncSeries":
        zero = _zero_like(c)
        return cls([c if i == k else zero for i in range(N + 1)])

    # -- basics -----------------------------------------------------------
    @property
    def N(self) -> int:
        return len(self.coeffs) - 1

    @property
    def zero(self):
        return _zero_like(self.coeffs[0])

    def __getitem__(self, i):
        return self.coeffs[i]

    def __iter__(self):
        return iter(self.coeffs)

    def __repr__(self):
        terms = [f"{c}*t^{i}" for i, c in enumerate(self.coeffs) if c != 0]
        return f"TruncSeries({' + '.join(terms) or '0'} + O(t^{self.N + 1}))"

    def __eq__(self, other):
        if isinstance(other, TruncSeries):
            return self.N == other.N and all(a == b for a, b in zip(self.coeffs, other.coeffs))
        return NotImplemented

    def __hash__(self):
        return hash(tuple(str(c) for c in self.coeffs))

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def valuation(self) -> Optional[int]:
        """Index of the first nonzero coefficient, None for the zero series."""
        for i, c in enumerate(self.coeffs):
            if c != 0:
                return i
        return None

    def truncate(self, N: int) -> "TruncSeries":
        if N > self.N:
            raise ValueError(f"cannot raise precision from {self.N} to {N}")
        return TruncSeries(self.coeffs[: N + 1])

    def map(self, fn) -> "TruncSeries":
        return TruncSeries([fn(c) for c in self.coeffs])

    def _lift(self, other) -> "TruncSeries":
        if isinstance(other, TruncSeries):
            return other
        if isinstance(other, LaurentSeries):
            raise TypeError("mix Laurent and power series through LaurentSeries")
        return TruncSeries.constant(self.zero + other, self.N)

    # -- ring operations --------------------------------------------------
    def __add__(self, other):
        if isinstance(other, LaurentSeries):
            return NotImplemented
        other = self._lift(other)
        n = min(self.N, other.N)
        return TruncSeries([self.coeffs[i] + other.coeffs[i] for i in range(n + 1)])

    __radd__ = __add__

    def __neg__(self):
        return TruncSeries([-c for c in self.coeffs])

    def __sub__(self, other):
        if isinstance(other, LaurentSeries):
            return NotImplemented
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if isinstance(other, LaurentSeries):
            return NotImplemented
        if not isinstance(other, TruncSeries):
            return TruncSeries([c * other for c in self.coeffs])
        n = min(self.N, other.N)
        a, b = self.coeffs, other.coeffs
        out = []
        for k in range(n + 1):
            acc = a[0] * b[k]
            for i in range(1, k + 1):
                if a[i] != 0 and b[k - i] != 0:
                    acc = acc + a[i] * b[k - i]
            out.append(acc)
        return TruncSeries(out)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            return self.invert() ** (-k)
        result = TruncSeries.constant(self.zero + 1, self.N)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def invert(self) -> "TruncSeries":
        c0 = self.coeffs[0]
        if not is_unit(c0):
            raise NonInvertibleConstantTerm(f"constant term {c0} is not a unit")
        inv0 = exact_div(self.zero + 1, c0)
        g = [inv0]
        for n in range(1, self.N + 1):
            acc = self.zero
            for k in range(1, n + 1):
                if self.coeffs[k] != 0:
                    acc = acc + self.coeffs[k] * g[n - k]
            g.append(-acc * inv0)
        return TruncSeries(g)

    def __truediv__(self, other):
        if isinstance(other, LaurentSeries):
            return NotImplemented
        if not isinstance(other, TruncSeries):
            return TruncSeries([exact_div(c, other) for c in self.coeffs])
        n = min(self.N, other.N)
        f, g = self.truncate(n), other.truncate(n)
        v = g.valuation()
        if v is None:
            raise ZeroDivisionError("division by the zero series")
        if v:
            fv = f.valuation()
            if fv is not None and fv < v:
                raise NonInvertibleConstantTerm("quotient is not a power series")
            f, g = f.shift(-v), g.shift(-v)
        return _long_divide(f, g)

    def __rtruediv__(self, other):
        return self._lift(other) / self

    def shift(self, k: int) -> "TruncSeries":
        """Multiply by t^k.  Negative k divides by t^|k| and drops precision."""
        if k >= 0:
            return TruncSeries([self.zero] * k + list(self.coeffs[: self.N + 1 - k]))
        k = -k
        if any(c != 0 for c in self.coeffs[:k]):
            raise NonInvertibleConstantTerm(f"series is not divisible by t^{k}")
        if k > self.N:
            raise ValueError("no precision left after shifting")
        return TruncSeries(self.coeffs[k:])

    def derivative(self) -> "TruncSeries":
        if self.N == 0:
            return TruncSeries([self.zero])
        return TruncSeries([i * self.coeffs[i] for i in range(1, self.N + 1)])


def _long_divide(f: TruncSeries, g: TruncSeries) -> TruncSeries:
    """f/g by exact coefficient division; g_0 need not be a unit."""
    g0 = g.coeffs[0]
    q = []
    for n in range(f.N + 1):
        acc = f.coeffs[n]
        for k in range(1, n + 1):
            if g.coeffs[k] != 0:
                acc = acc - g.coeffs[k] * q[n - k]
        q.append(exact_div(acc, g0))
    return TruncSeries(q)


# convenience spellings used by callers that prefer functions
def add(f, g):
    return f + g


def sub(f, g):
    return f - g


def mul(f, g):
    return f * g


def invert(f: TruncSeries) -> TruncSeries:
    return f.invert()


def shift(f: TruncSeries, k: int) -> TruncSeries:
    return f.shift(k)


def sqrt_series(f: TruncSeries) -> TruncSeries:
    """Square root with positive constant term.

    A zero constant term is accepted when the valuation is even; the result
    then has order N - v/2.
    """
    v = f.valuation()
    if v is None:
        return f
    if v:
        if v % 2:
            raise NonSquareConstantTerm("odd valuation has no power-series square root")
        return sqrt_series(f.shift(-v)).shift(v // 2).truncate(f.N - v // 2)
    g0 = exact_sqrt(f.coeffs[0])
    if g0 is None:
        raise NonSquareConstantTerm(f"{f.coeffs[0]} is not a square in the coefficient ring")
    two_g0 = 2 * g0
    g = [g0]
    for n in range(1, f.N + 1):
        acc = f.coeffs[n]
        for k in range(1, n):
            acc = acc - g[k] * g[n - k]
        g.append(exact_div(acc, two_g0))
    return TruncSeries(g)


# ---------------------------------------------------------------------------

class LaurentSeries:
    """t^valuation * body, with body[0] != 0 unless the series is zero.

    The body's order is the relative precision: the series is known modulo
    t^(valuation + body.N + 1).
    """

    __slots__ = ("valuation", "body")

    def __init__(self, valuation: int, body: TruncSeries):
        v = body.valuation()
        if v is None:
            self.valuation, self.body = valuation, body
        elif v:
            self.valuation, self.body = valuation + v, TruncSeries(body.coeffs[v:])
        else:
            self.valuation, self.body = valuation, body

    @classmethod
    def from_series(cls, f: TruncSeries) -> "LaurentSeries":
        return cls(0, f)

    @property
    def precision(self) -> int:
        """Exclusive exponent bound up to which coefficients are known."""
        return self.valuation + self.body.N + 1

    def is_zero(self) -> bool:
        return self.body.is_zero()

    def coefficient(self, k: int):
        i = k - self.valuation
        if k >= self.precision:
            raise IndexError(f"t^{k} is beyond the known precision")
        if i < 0:
            return self.body.zero
        return self.body.coeffs[i]

    def __repr__(self):
        return f"LaurentSeries(t^{self.valuation} * {self.body!r})"

    def __eq__(self, other):
        if not isinstance(other, LaurentSeries):
            return NotImplemented
        return self.valuation == other.valuation and self.body == other.body

    def _lift(self, other):
        if isinstance(other, LaurentSeries):
            return other
        if isinstance(other, TruncSeries):
            return LaurentSeries.from_series(other)
        return LaurentSeries(0, TruncSeries.constant(self.body.zero + other, self.precision))

    def __mul__(self, other):
        if not isinstance(other, (LaurentSeries, TruncSeries)):
            return LaurentSeries(self.valuation, self.body * other)
        other = self._lift(other)
        n = min(self.body.N, other.body.N)
        return LaurentSeries(
            self.valuation + other.valuation, self.body.truncate(n) * other.body.truncate(n)
        )

    __rmul__ = __mul__

    def invert(self) -> "LaurentSeries":
        if self.is_zero():
            raise ZeroSeries("cannot invert the zero series")
        return LaurentSeries(-self.valuation, self.body.invert())

    def __truediv__(self, other):
        if not isinstance(other, (LaurentSeries, TruncSeries)):
            return LaurentSeries(self.valuation, self.body / other)
        return self * self._lift(other).invert()

    def __rtruediv__(self, other):
        return self._lift(other) * self.invert()

    def __neg__(self):
        return LaurentSeries(self.valuation, -self.body)

    def __add__(self, other):
        other = self._lift(other)
        v = min(self.valuation, other.valuation)
        prec = min(self.precision, other.precision)
        if prec <= v:
            raise ValueError("no overlapping precision")
        zero = self.body.zero
        cs = [zero] * (prec - v)
        for s in (self, other):
            for i, c in enumerate(s.body.coeffs):
                k = s.valuation + i - v
                if k < len(cs):
                    cs[k] = cs[k] + c
        return LaurentSeries(v, TruncSeries(cs))

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __pow__(self, k: int):
        if k < 0:
            return self.invert() ** (-k)
        return LaurentSeries(self.valuation * k, self.body ** k)

    def to_series(self, N: Optional[int] = None) -> TruncSeries:
        """Power series view; requires valuation >= 0 (or vanishing negative part)."""
        if self.valuation < 0 and not self.is_zero():
            raise ValueError("series has negative powers of t")
        top = self.precision - 1 if N is None else N
        if top >= self.precision:
            raise ValueError(f"only known to order {self.precision - 1}, asked for {top}")
        return TruncSeries([self.coefficient(k) for k in range(top + 1)])


def laurent_mul(f: LaurentSeries, g: LaurentSeries) -> LaurentSeries:
    return f * g


def laurent_invert(f: LaurentSeries) -> LaurentSeries:
    return f.invert()


# ---------------------------------------------------------------------------

def _poly_mul(a, b):
    out = [a[0] * 0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = out[i + j] + x * y
    return out


def _poly_sub(a, b):
    n = max(len(a), len(b))
    zero = (a[0] if a else b[0]) * 0
    a = list(a) + [zero] * (n - len(a))
    b = list(b) + [zero] * (n - len(b))
    return [x - y for x, y in zip(a, b)]


def _trim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return tuple(p)


@dataclass(frozen=True)
class QuadraticGF:
    """q2*y^2 + q1*y + q0 = 0 with polynomial coefficients in t.

    Each q is a tuple of ring elements (coefficient of t^0 first).
    ``branch`` optionally designates the constant term of the tracked root.
    """

    q2: tuple
    q1: tuple
    q0: tuple
    branch: Optional[object] = None

    def __post_init__(self):
        for name in ("q2", "q1", "q0"):
            p = getattr(self, name)
            p = _trim([_coerce(c) for c in p] if p else [Fraction(0)])
            object.__setattr__(self, name, p)
        if self.branch is not None:
            object.__setattr__(self, "branch", _coerce(self.branch))

    @property
    def zero(self):
        return self.q1[0] * 0

    def series(self, N: int):
        z = self.zero
        return tuple(TruncSeries.poly(q, N, z) for q in (self.q2, self.q1, self.q0))

    def discriminant(self) -> tuple:
        return _trim(_poly_sub(_poly_mul(self.q1, self.q1), [4 * c for c in _poly_mul(self.q2, self.q0)]))

    def residual(self, P: TruncSeries) -> TruncSeries:
        Q2, Q1, Q0 = self.series(P.N)
        return Q2 * P * P + Q1 * P + Q0

    def map(self, fn) -> "QuadraticGF":
        """Apply ``fn`` to every coefficient (e.g. specialise weights)."""
        b = None if self.branch is None else fn(self.branch)
        return QuadraticGF(tuple(map(fn, self.q2)), tuple(map(fn, self.q1)), tuple(map(fn, self.q0)), b)


def _branch_constant(q: QuadraticGF):
    c2, c1, c0 = q.q2[0], q.q1[0], q.q0[0]
    designated = q.branch
    if c2 == 0:
        if c1 == 0:
            raise NoPowerSeriesBranch("constant-term equation is degenerate")
        y0 = exact_div(-c0, c1)
        if designated is not None and designated != y0:
            raise NoPowerSeriesBranch(f"the only analytic root starts with {y0}")
        return y0
    r = exact_sqrt(c1 * c1 - 4 * c2 * c0)
    if r is None:
        raise NoPowerSeriesBranch("constant terms of the roots are not in the coefficient ring")
    candidates = {exact_div(-c1 + r, 2 * c2), exact_div(-c1 - r, 2 * c2)}
    if designated is not None:
        if designated not in candidates:
            raise NoPowerSeriesBranch(f"{designated} is not a root of the constant-term equation")
        return designated
    if len(candidates) > 1:
        raise AmbiguousBranch("both roots are power series; designate a branch constant")
    return candidates.pop()


def newton_quadratic_branch(q: QuadraticGF, N: int, *, with_rounds: bool = False):
    """Power-series root of ``q`` modulo t^(N+1) by Newton iteration.

    Each round doubles the number of correct coefficients, so
    ceil(log2(N+1)) rounds suffice.  With ``with_rounds`` the round count is
    returned as well.
    """
    if all(c == 0 for c in q.q2):
        Q2, Q1, Q0 = q.series(N)
        y = -Q0 / Q1
        return (y, 0) if with_rounds else y
    y0 = _branch_constant(q)
    Q2, Q1, Q0 = q.series(N)
    if not is_unit(2 * Q2[0] * y0 + Q1[0]):
        y = _double_root_branch(q, N, y0)
        return (y, 0) if with_rounds else y
    y = TruncSeries.constant(y0, 0)
    prec, rounds = 1, 0
    while prec < N + 1:
        prec = min(2 * prec, N + 1)
        n = prec - 1
        y = TruncSeries(list(y.coeffs) + [y.zero] * (n - y.N))
        q2, q1, q0 = Q2.truncate(n), Q1.truncate(n), Q0.truncate(n)
        F = q2 * y * y + q1 * y + q0
        dF = 2 * q2 * y + q1
        y = y - F / dF
        rounds += 1
    if N == 0:
        y = TruncSeries.constant(y0, 0)
    return (y, rounds) if with_rounds else y


def _double_root_branch(q: QuadraticGF, N: int, y0) -> TruncSeries:
    # the two roots share their constant term; use the quadratic formula
    work = 2 * N + 2
    Q2, Q1, _ = q.series(work)
    disc = TruncSeries.poly(q.discriminant(), work, q.zero)
    if disc.is_zero():
        return (-Q1 / (2 * Q2)).truncate(N)
    if disc.valuation() > work - 1:
        raise AmbiguousBranch("cannot separate the two roots at this precision")
    raise AmbiguousBranch("both roots share the designated constant term")
