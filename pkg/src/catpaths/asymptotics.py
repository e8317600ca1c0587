"""Growth constants and amplitudes, p_n ~ omega gamma^n / sqrt(pi n^3).

For P = (-q1 + s sqrt(Delta)) / (2 q2) with Delta = q1^2 - 4 q2 q0, the
dominant singularity rho is the smallest positive root of Delta (assumed
simple), gamma = 1/rho and

    omega = -s sqrt(-rho Delta'(rho)) / (4 q2(rho)).

The branch sign s is read off the series itself: 2 q2 P + q1 = s sqrt(Delta),
so s is the sign of 2 q2(0) P_0 + q1(0).

Root isolation is exact (sympy factorisation and real-root isolation over
QQ); the isolating interval is then polished by Newton's method in mpmath and
certified with interval arithmetic.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import gmpy2
import mpmath
from sympy import Poly, QQ, Symbol

from .rings import to_fraction
from .series import QuadraticGF, _branch_constant

DEFAULT_DIGITS = 30
ISOLATION_EPS = Fraction(1, 2**100)
REPORT_SCHEMA = 1

_t = Symbol("t")


class NoPositiveRoot(ArithmeticError):
    pass


class NonSimpleRoot(ArithmeticError):
    pass


class Q2VanishesFirst(ArithmeticError):
    pass


class LeadingCoefficientObstruction(ArithmeticError):
    pass


class BranchSignMismatch(ArithmeticError):
    pass


def precision_digits() -> int:
    """Reported digits; ``CATPATHS_PRECISION`` overrides the default of 30."""
    raw = os.environ.get("CATPATHS_PRECISION")
    if not raw:
        return DEFAULT_DIGITS
    digits = int(raw)
    if digits < 5:
        raise ValueError("CATPATHS_PRECISION must be at least 5")
    return digits


# -- exact polynomial helpers -------------------------------------------------

def _rational_poly(coeffs) -> list:
    return [to_fraction(c) for c in coeffs]


def _pmul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _psub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [Fraction(0)] * (n - len(a))
    b = list(b) + [Fraction(0)] * (n - len(b))
    out = [x - y for x, y in zip(a, b)]
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


def discriminant(q: QuadraticGF) -> list:
    """Coefficients (ascending) of q1^2 - 4 q2 q0."""
    q2, q1, q0 = (_rational_poly(c) for c in (q.q2, q.q1, q.q0))
    return _psub(_pmul(q1, q1), [4 * c for c in _pmul(q2, q0)])


def _sympy_poly(coeffs) -> Poly:
    return Poly([QQ(c.numerator, c.denominator) for c in reversed(coeffs)], _t, domain=QQ)


def _peval(coeffs, x):
    acc = 0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def _mp(c):
    c = to_fraction(c)
    return mpmath.mpf(c.numerator) / c.denominator


def _fr(x) -> Fraction:
    return Fraction(int(x.p), int(x.q))


def _strip_t(coeffs):
    k = next(i for i, c in enumerate(coeffs) if c != 0)
    return coeffs[k:]


def _positive_roots(coeffs):
    """Isolating intervals (lo, hi) with 0 < lo of the positive roots, with multiplicities."""
    P = _sympy_poly(_strip_t(coeffs))
    if P.degree() < 1:
        return []
    return [((_fr(a), _fr(b)), k) for (a, b), k in P.intervals(inf=QQ(0))]


def _smallest_positive_root(coeffs):
    """(interval, multiplicity, irreducible factor coefficients) for the least positive root."""
    best = None
    _, factors = _sympy_poly(_strip_t(coeffs)).factor_list()
    for fac, mult in factors:
        fc = [_fr(c) for c in reversed(fac.all_coeffs())]
        for (lo, hi), _k in _positive_roots(fc):
            if best is None or hi < best[0][0]:
                best = ((lo, hi), mult, fc)
            elif lo <= best[0][1]:
                # overlapping intervals from different factors: refine both
                while not (hi < best[0][0] or best[0][1] < lo):
                    lo, hi = _bisect(fc, lo, hi, (hi - lo) / 4)
                    blo, bhi = _bisect(best[2], *best[0], (best[0][1] - best[0][0]) / 4)
                    best = ((blo, bhi), best[1], best[2])
                if hi < best[0][0]:
                    best = ((lo, hi), mult, fc)
    return best


def _bisect(coeffs, lo, hi, eps):
    """Shrink an isolating interval of a squarefree polynomial to width <= eps."""
    flo = _peval(coeffs, lo)
    if flo == 0:
        return lo, lo
    if _peval(coeffs, hi) == 0:
        return hi, hi
    while hi - lo > eps:
        mid = (lo + hi) / 2
        fm = _peval(coeffs, mid)
        if fm == 0:
            return mid, mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    return lo, hi


@dataclass
class Singularity:
    rho: mpmath.mpf
    gamma: mpmath.mpf
    exact: Optional[Fraction]
    interval: tuple
    factor: list
    delta: list
    digits: int

    @property
    def exact_gamma(self) -> Optional[Fraction]:
        return None if self.exact is None else 1 / self.exact


def dominant_singularity(q: QuadraticGF, digits: Optional[int] = None) -> Singularity:
    digits = precision_digits() if digits is None else digits
    delta = discriminant(q)
    if all(c == 0 for c in delta):
        raise NoPositiveRoot("discriminant vanishes identically")
    found = _smallest_positive_root(delta)
    if found is None:
        raise NoPositiveRoot("discriminant has no positive real root")
    (lo, hi), mult, fac_coeffs = found
    if mult > 1:
        raise NonSimpleRoot(f"discriminant root in [{float(lo)}, {float(hi)}] has multiplicity {mult}")
    q2 = _rational_poly(q.q2)

    exact = None
    if len(fac_coeffs) == 2:
        exact = -fac_coeffs[0] / fac_coeffs[1]
        lo = hi = exact
    else:
        lo, hi = _bisect(fac_coeffs, lo, hi, ISOLATION_EPS)
        if lo == hi:
            exact = lo

    _check_q2(q2, hi)

    with mpmath.workdps(digits + 20):
        if exact is not None:
            rho = _mp(exact)
        else:
            f = lambda x: _peval([_mp(c) for c in fac_coeffs], x)  # noqa: E731
            rho = mpmath.findroot(f, (_mp(lo) + _mp(hi)) / 2, solver="newton")
            _certify(fac_coeffs, rho, digits)
        gamma = 1 / rho
    return Singularity(rho, gamma, exact, (lo, hi), fac_coeffs, delta, digits)


def _check_q2(q2, bound: Fraction):
    """q2 may not vanish on (0, bound]."""
    if all(c == 0 for c in q2):
        return
    sqf = [_fr(c) for c in reversed(_sympy_poly(_strip_t(q2)).sqf_part().all_coeffs())]
    for (lo, hi), _k in _positive_roots(sqf):
        while lo <= bound < hi:
            lo, hi = _bisect(sqf, lo, hi, (hi - lo) / 2)
        if lo <= bound:
            raise Q2VanishesFirst("q2 has a positive root no larger than the discriminant's")


def _certify(fac_coeffs, rho, digits):
    """Interval evaluation must show a sign change across rho +- 10^-(digits+5)."""
    iv = mpmath.iv
    saved = iv.dps
    iv.dps = digits + 20
    try:
        eps = iv.mpf(10) ** (-(digits + 5))
        r = iv.mpf(rho)
        coeffs = [iv.mpf(c.numerator) / c.denominator for c in fac_coeffs]

        def ev(x):
            acc = iv.mpf(0)
            for c in reversed(coeffs):
                acc = acc * x + c
            return acc

        a, b = ev(r - eps), ev(r + eps)
    finally:
        iv.dps = saved
    if 0 in a or 0 in b or (a.a > 0) == (b.a > 0):
        raise ArithmeticError("root certification failed; raise the working precision")


def branch_sign(q: QuadraticGF) -> int:
    """s with 2 q2 P + q1 = s sqrt(Delta) on [0, rho)."""
    p0 = to_fraction(_branch_constant(q))
    q2, q1 = _rational_poly(q.q2), _rational_poly(q.q1)
    u0 = 2 * q2[0] * p0 + q1[0]
    if u0 == 0:
        raise NonSimpleRoot("discriminant vanishes at t = 0")
    return 1 if u0 > 0 else -1


def amplitude(q: QuadraticGF, sing: Singularity, digits: Optional[int] = None):
    digits = sing.digits if digits is None else digits
    s = branch_sign(q)
    with mpmath.workdps(digits + 20):
        rho = sing.rho
        dD = [k * _mp(c) for k, c in enumerate(sing.delta)][1:]
        slope = _peval(dD, rho)
        q2r = _peval([_mp(c) for c in _rational_poly(q.q2)], rho)
        if q2r == 0:
            raise Q2VanishesFirst("q2 vanishes at the singularity")
        omega = -s * mpmath.sqrt(-rho * slope) / (4 * q2r)
    if omega <= 0:
        raise BranchSignMismatch("amplitude is not positive for the designated branch")
    return omega


# -- long coefficient lists ------------------------------------------------------

def _integral(coeffs):
    """Scale rational coefficients to integers: (mpz list, common denominator)."""
    fr = _rational_poly(coeffs)
    den = 1
    for c in fr:
        den = den * c.denominator // gmpy2.gcd(den, c.denominator)
    return [gmpy2.mpz(c.numerator * (den // c.denominator)) for c in fr], den


def coefficients_from_quadratic(q: QuadraticGF, N: int, *, method: str = "convolution") -> list:
    """p_0..p_N of the designated branch, exactly.

    ``convolution``: solve q2 P^2 + q1 P + q0 = 0 coefficientwise.  With
    q2 = sum a_k t^k, q1 = sum b_k t^k the t^n coefficient reads
    L p_n + (terms in p_0..p_{n-1}) = 0 with L = 2 a_0 p_0 + b_0, after
    dividing out a common power of t when a_0 = b_0 = 0 is impossible here.
    ``holonomic``: u = 2 q2 P + q1 satisfies 2 Delta u' = Delta' u, a
    recurrence with a bounded number of terms.
    """
    if method == "holonomic":
        return _coefficients_holonomic(q, N)
    if method != "convolution":
        raise ValueError(f"unknown method {method!r}")
    p0 = to_fraction(_branch_constant(q))
    a = _rational_poly(q.q2)
    b = _rational_poly(q.q1)
    c = _rational_poly(q.q0)
    L = 2 * (a[0] if a else 0) * p0 + (b[0] if b else 0)
    if L == 0:
        raise LeadingCoefficientObstruction("leading multiplier 2 q2(0) P(0) + q1(0) vanishes")
    integral = abs(L) == 1 and p0.denominator == 1 and all(x.denominator == 1 for x in a + b + c)
    if integral:
        num = lambda x: gmpy2.mpz(x.numerator)  # noqa: E731
    else:
        num = lambda x: gmpy2.mpq(x.numerator, x.denominator)  # noqa: E731
    a, b, c = [num(x) for x in a], [num(x) for x in b], [num(x) for x in c]
    L, zero = num(L), num(Fraction(0))
    p = [num(p0)]
    sq = [p[0] * p[0]]  # sq[n] = [t^n] P^2
    for n in range(1, N + 1):
        # [t^n] P^2 without the two p_0 p_n terms, using symmetry
        conv = zero
        for i in range(1, (n + 1) // 2):
            conv += p[i] * p[n - i]
        conv *= 2
        if n % 2 == 0 and n > 0:
            conv += p[n // 2] * p[n // 2]
        acc = c[n] if n < len(c) else zero
        if a:
            acc += a[0] * conv
        for k in range(1, min(len(a) - 1, n) + 1):
            acc += a[k] * sq[n - k]
        for k in range(1, min(len(b) - 1, n) + 1):
            acc += b[k] * p[n - k]
        pn = -acc * L if integral else -acc / L
        p.append(pn)
        sq.append(conv + 2 * p[0] * pn)
    return [_as_number(x) if not integral else int(x) for x in p]


def _as_number(x):
    if x.denominator == 1:
        return int(x.numerator)
    return Fraction(int(x.numerator), int(x.denominator))


def _coefficients_holonomic(q: QuadraticGF, N: int) -> list:
    delta = discriminant(q)
    if delta[0] == 0:
        raise LeadingCoefficientObstruction("Delta(0) = 0")
    s = branch_sign(q)
    p0 = to_fraction(_branch_constant(q))
    q2, q1 = _rational_poly(q.q2), _rational_poly(q.q1)
    mq = gmpy2.mpq
    D = [mq(c.numerator, c.denominator) for c in delta]
    dD = [k * D[k] for k in range(1, len(D))]
    # sqrt(Delta) coefficients f: 2 sum D_k (n+1-k) f_{n+1-k} = sum dD_k f_{n-k}
    f = [mq(0)] * (N + len(q2) + 2)
    u0 = 2 * (q2[0] if q2 else 0) * p0 + (q1[0] if q1 else 0)
    f[0] = mq(abs(u0).numerator, abs(u0).denominator)
    for n in range(0, len(f) - 1):
        rhs = mq(0)
        for k, d in enumerate(dD):
            if k <= n:
                rhs += d * f[n - k]
        lhs = mq(0)
        for k in range(1, len(D)):
            if k <= n + 1:
                lhs += 2 * D[k] * (n + 1 - k) * f[n + 1 - k]
        f[n + 1] = (rhs - lhs) / (2 * D[0] * (n + 1))
    # P = (s f - q1) / (2 q2), dividing out the power of t in q2
    num = [s * x for x in f]
    for k, c in enumerate(q1):
        num[k] -= mq(c.numerator, c.denominator)
    den = [2 * mq(c.numerator, c.denominator) for c in q2]
    v = next(i for i, c in enumerate(den) if c != 0)
    num, den = num[v:], den[v:]
    out = []
    for n in range(N + 1):
        acc = num[n]
        for k in range(1, min(len(den) - 1, n) + 1):
            acc -= den[k] * out[n - k]
        out.append(acc / den[0])
    return [_as_number(x) for x in out]


# -- ratio method ----------------------------------------------------------------

@dataclass
class AsymptoticEstimate:
    rho: mpmath.mpf
    gamma: mpmath.mpf
    omega: mpmath.mpf
    method: str
    digits: int = DEFAULT_DIGITS
    exact_gamma: Optional[Fraction] = None
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.rho > 0:
            raise ValueError("rho must be positive")


def _richardson(seq, n, k):
    """Order-k Richardson extrapolation of s_n for an expansion in 1/n,
    using s_{n-k}..s_n."""
    total = mpmath.mpf(0)
    for j in range(k + 1):
        m = n - k + j
        total += (-1) ** (k + j) * mpmath.mpf(m) ** k * seq(m) / (mpmath.factorial(j) * mpmath.factorial(k - j))
    return total


def ratio_estimate(p, *, gamma_steps: int = 1, omega_steps: int = 0, dps: int = 40) -> AsymptoticEstimate:
    """gamma from r_n = p_n / p_{n-1} with ``gamma_steps`` Richardson steps,
    omega from p_n sqrt(pi n^3) / gamma^n at the last index (optionally
    extrapolated with ``omega_steps`` more Richardson steps)."""
    if len(p) < 100:
        raise ValueError("ratio estimates need at least 100 coefficients")
    n = len(p) - 1
    with mpmath.workdps(dps):
        P = [None] * (n + 1)

        def val(i):
            if P[i] is None:
                P[i] = _mp(p[i])
            return P[i]

        ratio = lambda m: val(m) / val(m - 1)  # noqa: E731
        gamma = _richardson(ratio, n, gamma_steps)
        omega_at = lambda m: val(m) * mpmath.sqrt(mpmath.pi * mpmath.mpf(m) ** 3) / gamma**m  # noqa: E731
        omega = _richardson(omega_at, n, omega_steps)
        est = AsymptoticEstimate(1 / gamma, gamma, omega, "ratio", dps,
                                 details={"n": n, "gamma_steps": gamma_steps, "omega_steps": omega_steps})
    return est


# -- combined ------------------------------------------------------------------------

def singularity_estimate(q: QuadraticGF, digits: Optional[int] = None) -> AsymptoticEstimate:
    sing = dominant_singularity(q, digits)
    omega = amplitude(q, sing)
    return AsymptoticEstimate(sing.rho, sing.gamma, omega, "singularity", sing.digits, sing.exact_gamma,
                              details={"interval": sing.interval})


def relative_delta(a, b):
    return abs(a - b) / abs(b)


def crosscheck(q: QuadraticGF, est: AsymptoticEstimate, N: int = 2000, **ratio_kw) -> dict:
    """Ratio-method comparison on N coefficients; a sign or magnitude
    mismatch of omega beyond 1% raises BranchSignMismatch."""
    p = coefficients_from_quadratic(q, N, method="holonomic")
    r = ratio_estimate(p, **ratio_kw)
    with mpmath.workdps(est.digits + 10):
        dg = relative_delta(r.gamma, est.gamma)
        do = relative_delta(r.omega, est.omega)
    if r.omega * est.omega <= 0 or do > mpmath.mpf(1) / 100:
        raise BranchSignMismatch(f"ratio omega {r.omega} disagrees with singularity omega {est.omega}")
    return {"gamma": dg, "omega": do, "N": N, "ratio": r}


def _fmt(x, digits):
    return mpmath.nstr(x, digits, strip_zeros=False, min_fixed=-mpmath.inf, max_fixed=mpmath.inf)


def asymptotic_report(family: str, q: QuadraticGF, *, digits: Optional[int] = None, N: int = 2000) -> dict:
    digits = precision_digits() if digits is None else digits
    est = singularity_estimate(q, digits)
    cc = crosscheck(q, est, N)
    with mpmath.workdps(digits + 10):
        out = {
            "schema": REPORT_SCHEMA,
            "family": family,
            "rho": str(1 / est.exact_gamma) if est.exact_gamma else _fmt(est.rho, digits),
            "gamma": str(est.exact_gamma) if est.exact_gamma else _fmt(est.gamma, digits),
            "omega": _fmt(est.omega, digits),
            "digits": digits,
            "method": "singularity",
            "crosscheck_delta": {
                "method": "ratio",
                "coefficients": N,
                "gamma": mpmath.nstr(cc["gamma"], 3),
                "omega": mpmath.nstr(cc["omega"], 3),
            },
        }
    return out


def report_json(report: dict) -> str:
    return json.dumps(report, sort_keys=True, indent=2)
