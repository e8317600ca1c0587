from fractions import Fraction
from math import ceil, log2

import pytest
from hypothesis import given, strategies as st

from catpaths.rings import WeightRing
from catpaths.series import (
    AmbiguousBranch,
    LaurentSeries,
    NoPowerSeriesBranch,
    NonInvertibleConstantTerm,
    NonSquareConstantTerm,
    QuadraticGF,
    TruncSeries,
    ZeroSeries,
    invert,
    laurent_invert,
    laurent_mul,
    mul,
    newton_quadratic_branch,
    shift,
    sqrt_series,
)


def S(*cs, N=None):
    N = len(cs) - 1 if N is None else N
    return TruncSeries.poly(cs, N)


def ints(f):
    return [int(c) for c in f]


rationals = st.fractions(min_value=-5, max_value=5, max_denominator=6)


def series_st(N=6, unit=False):
    coeffs = st.lists(rationals, min_size=N + 1, max_size=N + 1)
    if unit:
        coeffs = coeffs.filter(lambda cs: cs[0] != 0)
    return coeffs.map(TruncSeries)


def test_arith_examples():
    assert ints(invert(S(1, -1, N=3))) == [1, 1, 1, 1]
    assert ints(mul(S(1, 1, N=3), S(1, -1, N=3))) == [1, 0, -1, 0]
    assert ints(shift(S(1, 2, 3), 1)) == [0, 1, 2]
    t = TruncSeries.monomial(1, 2)
    T = t / (1 - t)
    assert ints(invert(1 - T - T)) == [1, 2, 6]


def test_invert_needs_unit():
    with pytest.raises(NonInvertibleConstantTerm):
        invert(S(0, 1, 1))


def test_division_shifts_out_common_valuation():
    t = TruncSeries.monomial(1, 4)
    q = (t + t * t) / (2 * t)
    assert q.N == 3 and list(q) == [Fraction(1, 2), Fraction(1, 2), 0, 0]


def test_sqrt_examples():
    assert ints(sqrt_series(S(1, -10, 9, N=3))) == [1, -5, -8, -40]
    assert ints(sqrt_series(TruncSeries.constant(1, 5))) == [1, 0, 0, 0, 0, 0]
    assert ints(sqrt_series(S(1, 2, 1, N=4))) == [1, 1, 0, 0, 0]
    with pytest.raises(NonSquareConstantTerm):
        sqrt_series(S(2, 1))
    with pytest.raises(NonSquareConstantTerm):
        sqrt_series(S(-1, 1))


def test_sqrt_over_weight_ring():
    R = WeightRing(["rho"])
    rho = R["rho"]
    f = TruncSeries.poly([R.one, 2 * rho, rho**2], 4, R.zero)
    assert sqrt_series(f) == TruncSeries.poly([R.one, rho], 4, R.zero)


ROOK_Q = QuadraticGF((0, 4), (-1, -3), (1,))
QUEEN_Q = QuadraticGF((0, 4, -12, 9), (-1, 0, 5, -4), (1, -2, 1))


def test_newton_examples():
    assert ints(newton_quadratic_branch(ROOK_Q, 3)) == [1, 1, 5, 29]
    assert ints(newton_quadratic_branch(QUEEN_Q, 3)) == [1, 2, 10, 63]
    assert ints(newton_quadratic_branch(QuadraticGF((1,), (-2,), (1,), branch=1), 5)) == [1, 0, 0, 0, 0, 0]


@pytest.mark.parametrize("N", [1, 5, 10, 31, 64, 100])
def test_newton_round_count(N):
    P, rounds = newton_quadratic_branch(QUEEN_Q, N, with_rounds=True)
    assert rounds <= ceil(log2(N + 1)) + 1
    assert QUEEN_Q.residual(P).is_zero()


def test_newton_branch_errors():
    # y^2 - 3y + 2: two analytic roots 1 and 2
    with pytest.raises(AmbiguousBranch):
        newton_quadratic_branch(QuadraticGF((1,), (-3,), (2,)), 4)
    assert ints(newton_quadratic_branch(QuadraticGF((1,), (-3,), (2,), branch=2), 2)) == [2, 0, 0]
    # y^2 + 1 has no rational constant term
    with pytest.raises(NoPowerSeriesBranch):
        newton_quadratic_branch(QuadraticGF((1,), (0,), (1,)), 3)


def test_linear_fallback():
    # q2 = 0: (1 - t) y = 1
    assert ints(newton_quadratic_branch(QuadraticGF((0,), (-1, 1), (1,)), 4)) == [1, 1, 1, 1, 1]


def test_laurent_examples():
    t_inv = LaurentSeries(-1, TruncSeries.constant(1, 4))
    t = LaurentSeries(1, TruncSeries.constant(1, 4))
    prod = laurent_mul(t_inv, t)
    assert prod.valuation == 0 and prod.coefficient(0) == 1 and prod.coefficient(3) == 0
    beta = newton_quadratic_branch(QuadraticGF((0, 2), (-1, -3), (2,)), 8)  # 2 P_rook
    assert ints(beta.truncate(3)) == [2, 2, 10, 58]
    alpha = LaurentSeries(-1, beta.invert())
    assert alpha.valuation == -1 and alpha.coefficient(-1) == Fraction(1, 2)
    inv = laurent_invert(alpha)
    assert inv.valuation == 1
    assert inv.to_series(8) == shift(beta, 1).truncate(8)
    ab = alpha * LaurentSeries.from_series(beta)
    assert ab.valuation == -1 and ab.coefficient(-1) == 1
    assert all(ab.coefficient(k) == 0 for k in range(0, ab.precision))
    with pytest.raises(ZeroSeries):
        laurent_invert(LaurentSeries(0, TruncSeries.constant(0, 3)))


# -- properties --------------------------------------------------------------------


@given(series_st(), series_st(), series_st())
def test_ring_axioms(f, g, h):
    assert f + g == g + f
    assert f * g == g * f
    assert (f + g) + h == f + (g + h)
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h
    assert f - f == TruncSeries.constant(0, f.N)
    assert f * TruncSeries.constant(1, f.N) == f


@given(series_st(unit=True))
def test_invert_round_trip(f):
    assert f * invert(f) == TruncSeries.constant(1, f.N)
    assert invert(invert(f)) == f


@given(st.lists(rationals, min_size=7, max_size=7))
def test_sqrt_round_trip(cs):
    g = TruncSeries([Fraction(1)] + cs[1:])
    f = g * g
    r = sqrt_series(f)
    assert r * r == f
    assert r == g


@given(st.lists(st.integers(-3, 3), min_size=1, max_size=3), st.lists(st.integers(-3, 3), min_size=1, max_size=3),
       st.integers(1, 12))
def test_newton_residual_vanishes(a, b, N):
    # q2 = t * a(t), q1 = -1 + t b(t), q0 = 1: always a unique power-series root
    q = QuadraticGF(tuple([0] + a), tuple([-1] + b), (1,))
    P = newton_quadratic_branch(q, N)
    assert q.residual(P).is_zero()
