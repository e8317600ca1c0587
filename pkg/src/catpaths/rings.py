"""Exact coefficient rings.

Two rings are used throughout: the rationals (``fractions.Fraction``, with
plain ``int`` accepted wherever counts are integral) and sparse multivariate
polynomials over the rationals for step weights.  The latter is a thin wrapper
around sympy's ``PolyRing`` so that elements support ``+ - *`` with ints and
``exquo`` for exact division.
"""

from __future__ import annotations

from fractions import Fraction
from math import isqrt
from typing import Iterable, Mapping

from sympy import QQ
from sympy.polys.polyerrors import ExactQuotientFailed
from sympy.polys.rings import PolyElement, ring


class NotExactlyDivisible(ArithmeticError):
    pass


class WeightRing:
    """Polynomial ring Q[w1, ..., wk] whose variables are weight labels."""

    def __init__(self, variables: Iterable[str]):
        names = tuple(dict.fromkeys(variables))
        if not names:
            raise ValueError("a weight ring needs at least one variable")
        self.variables = names
        self._ring, *gens = ring(",".join(names), QQ)
        self.gens = dict(zip(names, gens))

    def __repr__(self):
        return f"WeightRing({', '.join(self.variables)})"

    def __eq__(self, other):
        return isinstance(other, WeightRing) and other.variables == self.variables

    def __hash__(self):
        return hash(self.variables)

    @property
    def zero(self) -> PolyElement:
        return self._ring.zero

    @property
    def one(self) -> PolyElement:
        return self._ring.one

    def __getitem__(self, name: str) -> PolyElement:
        return self.gens[name]

    def __call__(self, value) -> PolyElement:
        if isinstance(value, Fraction):
            return self._ring(QQ(value.numerator, value.denominator))
        return self._ring(value)

    def parse(self, text: str) -> PolyElement:
        """Parse an expression such as ``'2*rho**2*nu + 1/2'``."""
        return self._ring.from_expr(_sympify(text))

    def specialize(self, element, values: Mapping[str, object]):
        """Substitute numbers for (some) variables.

        Substituting every variable returns a ``Fraction``; otherwise the
        result stays a ring element.
        """
        if not isinstance(element, PolyElement):
            return element
        pairs = [(self.gens[k], _qq(v)) for k, v in values.items() if k in self.gens]
        if len(pairs) == len(self.variables):
            return to_fraction(element(*[_qq(values[v]) for v in self.variables]))
        out = element
        for gen, val in pairs:
            out = out.subs(gen, val)
        return out


def _sympify(text):
    from sympy import sympify

    return sympify(text)


def _qq(value):
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    return QQ(value)


def to_fraction(value) -> Fraction:
    """Convert an int, Fraction, gmpy2/sympy rational or ground polynomial."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, PolyElement):
        if not value.is_ground:
            raise TypeError(f"{value} is not a constant")
        value = value.LC if value else 0
    num = getattr(value, "numerator", None)
    if num is not None:
        return Fraction(int(num), int(value.denominator))
    return Fraction(value)


def is_zero(value) -> bool:
    return value == 0


def exact_div(a, b):
    """Exact quotient ``a / b``; raises NotExactlyDivisible otherwise."""
    if b == 0:
        raise ZeroDivisionError("division by zero coefficient")
    if isinstance(a, PolyElement) or isinstance(b, PolyElement):
        R = (a if isinstance(a, PolyElement) else b).ring
        a = a if isinstance(a, PolyElement) else R(_qq(to_fraction(a)))
        b = b if isinstance(b, PolyElement) else R(_qq(to_fraction(b)))
        try:
            return a.exquo(b)
        except ExactQuotientFailed as exc:
            raise NotExactlyDivisible(f"{b} does not divide {a}") from exc
    return Fraction(a) / Fraction(b)


def is_unit(value) -> bool:
    if isinstance(value, PolyElement):
        return value.is_ground and value != 0
    return value != 0


def exact_sqrt(value):
    """Square root of a constant that is a perfect square of a rational.

    Returns None if no rational square root exists.
    """
    if isinstance(value, PolyElement):
        if not value.is_ground:
            return None
        root = exact_sqrt(to_fraction(value))
        return None if root is None else value.ring(_qq(root))
    q = Fraction(value)
    if q < 0:
        return None
    n, d = isqrt(q.numerator), isqrt(q.denominator)
    if n * n != q.numerator or d * d != q.denominator:
        return None
    return Fraction(n, d)
