from fractions import Fraction

import mpmath
import pytest

from catpaths.asymptotics import (
    BranchSignMismatch,
    LeadingCoefficientObstruction,
    NonSimpleRoot,
    NoPositiveRoot,
    Q2VanishesFirst,
    amplitude,
    asymptotic_report,
    branch_sign,
    coefficients_from_quadratic,
    crosscheck,
    discriminant,
    dominant_singularity,
    precision_digits,
    ratio_estimate,
    relative_delta,
    report_json,
    singularity_estimate,
)
from catpaths.genfun import ACCEPTANCE_FAMILIES, FamilySpec, quadratic_for
from catpaths.series import QuadraticGF, newton_quadratic_branch


def q(name):
    return quadratic_for(FamilySpec.parse(name))


@pytest.fixture(autouse=True)
def high_precision():
    with mpmath.workdps(50):
        yield


def test_rook_is_rational():
    s = dominant_singularity(q("rook"))
    assert discriminant(q("rook")) == [1, -10, 9]
    assert s.exact == Fraction(1, 9) and s.exact_gamma == 9
    assert abs(amplitude(q("rook"), s) - 3 * mpmath.sqrt(2) / 8) < mpmath.mpf(10) ** -25


def test_queen_constants():
    s = dominant_singularity(q("queen"))
    assert s.exact is None
    assert abs(s.gamma - 2 * (3 + mpmath.sqrt(5))) < mpmath.mpf(10) ** -25
    lo, hi = s.interval
    assert hi - lo <= Fraction(1, 2**100)
    printed = (35 - 15 * mpmath.sqrt(5)) * mpmath.sqrt(3 * mpmath.sqrt(5) - 5) / (2 * mpmath.sqrt(2))
    assert abs(amplitude(q("queen"), s) - printed) < mpmath.mpf(10) ** -25


def test_tugger_constants():
    e = singularity_estimate(q("tugger"))
    assert abs(e.gamma - (2 + 2 * mpmath.sqrt(2))) < mpmath.mpf(10) ** -25
    assert abs(e.omega - mpmath.sqrt(4 - 2 * mpmath.sqrt(2))) < mpmath.mpf(10) ** -25


def test_mpaths_constants():
    e = singularity_estimate(q("mpaths"))
    assert mpmath.nstr(e.gamma, 6) == "11.0786"
    assert str(e.gamma).startswith("11.0785")
    assert str(e.omega).startswith("0.6968")


def test_monotone_growth():
    classical = singularity_estimate(q("oneJ:{}")).gamma
    assert abs(classical - 4) < mpmath.mpf(10) ** -25
    rook, queen, m = (singularity_estimate(q(n)).gamma for n in ("rook", "queen", "mpaths"))
    assert classical < rook < queen < m


def test_branch_sign():
    assert branch_sign(q("rook")) == -1
    assert branch_sign(q("mpaths")) == 1


def test_errors():
    # Delta = (1 - 2t)^2: double root
    with pytest.raises(NonSimpleRoot):
        dominant_singularity(QuadraticGF((0,), (1, -2), (0,)))
    # Delta = 1 + t^2 has no real root
    with pytest.raises(NoPositiveRoot):
        dominant_singularity(QuadraticGF((0, Fraction(-1, 4)), (1,), (0, 1)))
    # q2 = 1 - 4t vanishes at 1/4, before Delta = 5 - 16t vanishes at 5/16
    with pytest.raises(Q2VanishesFirst):
        dominant_singularity(QuadraticGF((1, -4), (-1,), (-1,)))


def test_precision_env(monkeypatch):
    monkeypatch.setenv("CATPATHS_PRECISION", "45")
    assert precision_digits() == 45
    s = dominant_singularity(q("queen"))
    assert s.digits == 45
    with mpmath.workdps(60):
        assert abs(s.gamma - 2 * (3 + mpmath.sqrt(5))) < mpmath.mpf(10) ** -45
    monkeypatch.setenv("CATPATHS_PRECISION", "2")
    with pytest.raises(ValueError):
        precision_digits()


def test_coefficients_examples():
    assert coefficients_from_quadratic(q("rook"), 5) == [1, 1, 5, 29, 185, 1257]
    assert coefficients_from_quadratic(q("queen"), 8)[8] == 2145722
    assert coefficients_from_quadratic(q("mpaths"), 8)[8] == 3458073


@pytest.mark.parametrize("name", ACCEPTANCE_FAMILIES)
def test_coefficient_routes_agree(name):
    Q = q(name)
    conv = coefficients_from_quadratic(Q, 60)
    assert conv == coefficients_from_quadratic(Q, 60, method="holonomic")
    assert conv == [int(c) for c in newton_quadratic_branch(Q, 60)]


def test_rational_coefficients():
    # y = 1 + t y^2 / 2 has rational coefficients (Catalan numbers / 2^n)
    Q = QuadraticGF((0, Fraction(1, 2)), (-1,), (1,))
    got = coefficients_from_quadratic(Q, 6)
    assert got == [Fraction(c, 2**n) for n, c in enumerate([1, 1, 2, 5, 14, 42, 132])]
    assert got == coefficients_from_quadratic(Q, 6, method="holonomic")


def test_leading_obstruction():
    # P^2 - 2P + 1 - t = 0: P(0) = 1 is a double root at t = 0
    with pytest.raises(LeadingCoefficientObstruction):
        coefficients_from_quadratic(QuadraticGF((1,), (-2,), (1, -1)), 4)


def test_ratio_examples():
    rook = coefficients_from_quadratic(q("rook"), 2000, method="holonomic")
    e = ratio_estimate(rook)
    assert abs(e.gamma - 9) < 1e-4
    assert relative_delta(e.omega, 3 * mpmath.sqrt(2) / 8) < 0.01
    queen = coefficients_from_quadratic(q("queen"), 2000, method="holonomic")
    assert abs(ratio_estimate(queen).gamma - 2 * (3 + mpmath.sqrt(5))) < 1e-4
    geometric = [2**n for n in range(200)]
    assert abs(ratio_estimate(geometric).gamma - 2) < mpmath.mpf(10) ** -30
    with pytest.raises(ValueError):
        ratio_estimate([1] * 50)


def test_crosscheck_rejects_wrong_branch_sign():
    Q = q("rook")
    est = singularity_estimate(Q)
    est.omega = -est.omega
    with pytest.raises(BranchSignMismatch):
        crosscheck(Q, est, 300)


def test_report_shape_and_determinism():
    r1 = asymptotic_report("rook", q("rook"), N=300)
    r2 = asymptotic_report("rook", q("rook"), N=300)
    assert report_json(r1) == report_json(r2)
    assert set(r1) == {"schema", "family", "gamma", "omega", "rho", "digits", "method", "crosscheck_delta"}
    assert r1["gamma"] == "9" and r1["rho"] == "1/9" and r1["schema"] == 1
    assert r1["omega"].startswith("0.53033008588991064330063327157")
