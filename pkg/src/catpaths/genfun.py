"""Generating functions for Catalan S-paths.

The main pipeline reads the subdiagonal series D_h(t) = sum a_{n-h,n} t^n off
an exact count table and combines them:

* all horizontal steps present:  P = sum_{h>=0} D_h / (1 + (1 + rho - T) sum_{h>=1} D_h)
* only the unit horizontal step: P = D_0 / (1 + rho D_1)

with rho the horizontal weight (1 when unweighted) and T(t) the series of
bishop steps.  For I-queen step sets the diagonals can also be obtained from
the roots alpha (Laurent) and beta (power series) of the kernel
1 - ((C + Ct + 2t)/(1 + C)) s + t s^2, C = 1 - T; :func:`kernel_quantities`
computes them as an independent route.

The named families also carry closed forms (radicals evaluated in the series
ring) and the quadratic equations their generating functions satisfy.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .enumerate import CountTable, count_bounded, count_unrestricted, weight_map
from .rings import WeightRing
from .series import LaurentSeries, QuadraticGF, TruncSeries, newton_quadratic_branch, sqrt_series
from .steps import Boundary, Kind, PreconditionFailed, StepSet, bishop_series, slope_condition


class NoKnownQuadratic(LookupError):
    pass


class NoKnownClosedForm(LookupError):
    pass


# ---------------------------------------------------------------------------
# diagonals

@dataclass
class DiagonalFamily:
    """D[h] (h >= 0): coefficient of t^n is a_{n-h,n}, zero for n < h.
    Dbar[h] (h >= 1): coefficient of t^n is a_{n+h,n} for n >= h, zero below.
    """

    D: dict
    Dbar: dict
    N: int

    def sum_D(self, start: int = 0) -> TruncSeries:
        keys = [h for h in sorted(self.D) if h >= start]
        out = TruncSeries.constant(self.D[0].zero, self.N)
        for h in keys:
            out = out + self.D[h]
        return out

    def sum_Dbar(self) -> TruncSeries:
        out = TruncSeries.constant(self.D[0].zero, self.N)
        for h in sorted(self.Dbar):
            out = out + self.Dbar[h]
        return out


def _table_zero(table: CountTable):
    if table.weights:
        return next(iter(table.weights.values())) * 0
    return Fraction(0)


def diagonals(table: CountTable, Hmax: int, *, with_bar: bool = False) -> DiagonalFamily:
    """Subdiagonal series read off a count table.

    D[h] is known to order ``table.height`` (requires width >= height).  With
    ``with_bar`` the Dbar[h] are produced too, to order min(height, width - h).
    """
    if table.width < table.height:
        raise ValueError("diagonals need a table at least as wide as it is high")
    N = table.height
    if Hmax > N:
        raise ValueError("Hmax may not exceed the table height")
    zero = _table_zero(table)
    a = table.entries
    D = {}
    for h in range(Hmax + 1):
        D[h] = TruncSeries([zero + (a[n - h][n] if n >= h else 0) for n in range(N + 1)])
    Dbar = {}
    if with_bar:
        for h in range(1, Hmax + 1):
            order = min(N, table.width - h)
            if order < h:
                continue
            Dbar[h] = TruncSeries([zero + (a[n + h][n] if n >= h else 0) for n in range(order + 1)])
    return DiagonalFamily(D, Dbar, N)


# ---------------------------------------------------------------------------
# kernel route (I-queen step sets)

@dataclass
class KernelData:
    """C = 1 - T, the kernel roots alpha (valuation -1) and beta (power
    series), and the partial-fraction numerators numA and numB."""

    C: TruncSeries
    alpha: LaurentSeries
    beta: TruncSeries
    numA: TruncSeries
    numB: TruncSeries
    N: int

    def _t(self):
        return LaurentSeries(1, TruncSeries.constant(Fraction(1), self.alpha.body.N + 2))

    def diagonal(self, h: int) -> TruncSeries:
        """D_h from the partial fraction expansion."""
        one_plus_C = 1 + self.C
        core = LaurentSeries.from_series(self.numA) / (one_plus_C * self._t() * self.alpha ** (h + 1))
        if h == 0:
            return (LaurentSeries.from_series(one_plus_C.invert()) - core).to_series(self.N)
        return (-core).to_series(self.N)

    def catalan_gf(self, T: TruncSeries) -> TruncSeries:
        """P = (1 + A/(t(1 - alpha))) / (1 + C + (2 - T) A / (t alpha (1 - alpha)))."""
        t = self._t()
        A = LaurentSeries.from_series(self.numA)
        one_minus_alpha = 1 - self.alpha
        num = 1 + A / (t * one_minus_alpha)
        den = (1 + LaurentSeries.from_series(self.C)) + LaurentSeries.from_series(2 - T) * A / (
            t * self.alpha * one_minus_alpha
        )
        return (num / den).to_series(self.N)


def kernel_quadratic(T: TruncSeries) -> QuadraticGF:
    """(1 + C) t s^2 - (C + C t + 2 t) s + (1 + C) = 0, series coefficients cut at T's order."""
    N = T.N
    C = 1 - T
    t = TruncSeries.monomial(1, N)
    return QuadraticGF(((1 + C) * t).coeffs, (-(C + C * t + 2 * t)).coeffs, (1 + C).coeffs)


def kernel_quantities(T: TruncSeries, N: int) -> KernelData:
    if T[0] != 0:
        raise ValueError("T must have zero constant term")
    W = N + 3
    T = TruncSeries.poly(list(T.coeffs), W) if T.N < W else T.truncate(W)
    C = 1 - T
    q = kernel_quadratic(T)
    beta = newton_quadratic_branch(q, W)
    # product of the roots is (1 + C) / ((1 + C) t) = 1/t
    alpha = LaurentSeries(-1, beta.invert())
    betaL = LaurentSeries.from_series(beta)
    one_plus_C = LaurentSeries.from_series(1 + C)
    t_minus_1 = LaurentSeries.from_series(TruncSeries.poly([-1, 1], W))
    diff = alpha - betaL
    numA = (alpha * t_minus_1 / (one_plus_C * diff)).to_series(W - 1)
    numB = (-(betaL * t_minus_1) / (one_plus_C * diff)).to_series(W - 1)
    return KernelData(C, alpha, beta, numA, numB, N)


# ---------------------------------------------------------------------------
# the two pipelines

def _weights_for(S: StepSet, weights):
    if weights is None and S.labels:
        return weight_map(S, weighted=True)
    return weights


def _horizontal_weight(S: StepSet, wm):
    labels = {f.weight for f in S.horizontal_families()}
    if len(labels) != 1:
        raise PreconditionFailed("all horizontal steps must carry the same weight")
    lab = labels.pop()
    if wm is None or lab is None:
        return 1
    return wm[lab]


def _check_all_horizontal(S: StepSet):
    if not S.has_all_horizontal():
        raise PreconditionFailed("S must contain every proper horizontal step (a, 0), a > 0")
    if not slope_condition(S, Boundary.catalan()):
        raise PreconditionFailed("S fails the slope condition for the Catalan boundary")


def _check_unit_horizontal(S: StepSet):
    if S.horizontal_lengths() != frozenset({1}):
        raise PreconditionFailed("S must contain (1, 0) and no other horizontal step")
    if not slope_condition(S, Boundary.catalan()):
        raise PreconditionFailed("S fails the slope condition for the Catalan boundary")


def catalan_gf_all_horizontal(S: StepSet, N: int, *, Hmax: Optional[int] = None, weights=None) -> TruncSeries:
    """P(t) for S with every horizontal step; sums over h are cut at ``Hmax`` (default N).

    Terms with h > N vanish modulo t^(N+1), so any Hmax >= N gives the same series.
    """
    _check_all_horizontal(S)
    wm = weights
    rho = _horizontal_weight(S, wm)
    Hmax = N if Hmax is None else Hmax
    table = count_unrestricted(S, N, weights=wm)
    diags = diagonals(table, min(Hmax, N))
    T = bishop_series(S, Boundary.catalan(), N, weights=wm)
    tail = diags.sum_D(1)
    return (diags.D[0] + tail) / (1 + (1 + rho - T) * tail)


def catalan_gf_unit_horizontal(S: StepSet, N: int, *, weights=None) -> TruncSeries:
    """P(t) = D_0 / (1 + rho D_1) for S whose only horizontal step is (1, 0)."""
    _check_unit_horizontal(S)
    wm = weights
    rho = _horizontal_weight(S, wm)
    table = count_unrestricted(S, N, weights=wm)
    diags = diagonals(table, 1)
    return diags.D[0] / (1 + rho * diags.D[1])


def weighted_catalan_gf(S: StepSet, weights=None, N: int = 10) -> TruncSeries:
    """Step-enumerator series sum p^w_n t^n.

    ``weights`` maps labels to ring elements; by default every label becomes
    its own variable.  Dispatches on the horizontal steps of S.
    """
    wm = _weights_for(S, weights)
    if S.has_all_horizontal():
        return catalan_gf_all_horizontal(S, N, weights=wm)
    return catalan_gf_unit_horizontal(S, N, weights=wm)


def pipeline_gf(S: StepSet, N: int, weights=None) -> TruncSeries:
    if S.has_all_horizontal():
        return catalan_gf_all_horizontal(S, N, weights=weights)
    return catalan_gf_unit_horizontal(S, N, weights=weights)


# ---------------------------------------------------------------------------
# families

_FAMILY_RE = re.compile(r"^(rook|queen|tugger|mpaths|iqueen:(\d+)|oneJ:(all|\{[\d,\s]*\}))$")


@dataclass(frozen=True)
class FamilySpec:
    """A named path family, optionally weighted.

    ``weights`` is a tuple of labels; how they are attached depends on the
    family (see :meth:`stepset`).
    """

    id: str
    param: object = None
    weights: tuple = field(default=())

    @classmethod
    def parse(cls, text: str, weights=()) -> "FamilySpec":
        m = _FAMILY_RE.match(text.strip())
        if not m:
            raise ValueError(f"unknown family {text!r}")
        head = m.group(1)
        if m.group(2):
            r = int(m.group(2))
            if r < 1:
                raise ValueError("iqueen needs r >= 1")
            return cls("iqueen", r, tuple(weights))
        if m.group(3):
            J = m.group(3)
            if J == "all":
                return cls("oneJ", "all", tuple(weights))
            items = frozenset(int(x) for x in J.strip("{}").split(",") if x.strip())
            if any(a < 1 for a in items):
                raise ValueError("bishop lengths must be positive")
            return cls("oneJ", items, tuple(weights))
        return cls(head, None, tuple(weights))

    @property
    def name(self) -> str:
        if self.id == "iqueen":
            return f"iqueen:{self.param}"
        if self.id == "oneJ":
            if self.param == "all":
                return "oneJ:all"
            return "oneJ:{" + ",".join(map(str, sorted(self.param))) + "}"
        return self.id

    def __str__(self):
        return self.name + (f"[{','.join(self.weights)}]" if self.weights else "")

    def unweighted(self) -> "FamilySpec":
        return FamilySpec(self.id, self.param)

    def _labels(self, count: int):
        w = self.weights
        if not w:
            return (None,) * count
        if len(w) == 1:
            return w * count
        if len(w) != count:
            raise ValueError(f"{self.name} takes 1 or {count} weight labels, got {len(w)}")
        return w

    def stepset(self) -> StepSet:
        def tag(tok, lab):
            return tok if lab is None else f"{tok}@{lab}"

        if self.id == "rook":
            h, v = self._labels(2)
            text = f"{tag('H*', h)},{tag('V*', v)}"
        elif self.id in ("queen", "iqueen"):
            r, b = self._labels(2)
            bish = "B*" if self.id == "queen" else "B{" + ",".join(map(str, range(1, self.param + 1))) + "}"
            text = f"{tag('H*', r)},{tag('V*', r)},{tag(bish, b)}"
        elif self.id == "oneJ":
            u, b = self._labels(2)
            text = f"{tag('(1,0)', u)},{tag('(0,1)', u)}"
            if self.param == "all":
                text += "," + tag("B*", b)
            elif self.param:
                text += "," + tag("B{" + ",".join(map(str, sorted(self.param))) + "}", b)
        elif self.id == "tugger":
            u, s = self._labels(2)
            text = f"{tag('(1,0)', u)},{tag('(0,1)', u)},{tag('(1,2)', s)}"
        elif self.id == "mpaths":
            r, b, s = self._labels(3)
            text = f"{tag('H*', r)},{tag('V*', r)},{tag('B*', b)},{tag('SP*', s)}"
        else:
            raise ValueError(f"unknown family {self.id}")
        return StepSet.parse(text)

    def ring(self) -> Optional[WeightRing]:
        return WeightRing(self.weights) if self.weights else None

    def weight_values(self) -> Optional[dict]:
        R = self.ring()
        return None if R is None else {name: R[name] for name in R.variables}


ACCEPTANCE_FAMILIES = (
    "rook", "queen", "iqueen:1", "iqueen:2", "iqueen:3",
    "oneJ:{2}", "oneJ:{1,2}", "oneJ:all", "tugger", "mpaths",
)


def dp_series(f: FamilySpec, N: int) -> TruncSeries:
    """p_n straight from the boundary-constrained count."""
    wv = f.weight_values()
    p = count_bounded(f.stepset(), Boundary.catalan(), N, weights=wv).p
    zero = Fraction(0) if wv is None else next(iter(wv.values())) * 0
    return TruncSeries([zero + c for c in p])


def family_pipeline(f: FamilySpec, N: int) -> TruncSeries:
    return pipeline_gf(f.stepset(), N, weights=f.weight_values())


# -- closed forms -----------------------------------------------------------

def _t(N, one=Fraction(1)):
    return TruncSeries.monomial(1, N, one)


def _P(coeffs, N, one=Fraction(1)):
    return TruncSeries.poly([one * c for c in coeffs], N, one * 0)


def _bishop_T(J, N):
    if J == "all":
        return _t(N) / (1 - _t(N))
    return _P([1 if a in J else 0 for a in range(N + 1)], N)


def _iqueen_general(T: TruncSeries, N: int) -> TruncSeries:
    W = N + 1
    T = TruncSeries.poly(list(T.coeffs), W) if T.N < W else T.truncate(W)
    t = _t(W)
    C = 1 - T
    disc = C * C - (2 * C * C + 4 * C + 4) * t + (C + 2) ** 2 * t * t
    return ((C + (C + 2) * t - sqrt_series(disc)) / (2 * (1 + C) ** 2 * t)).truncate(N)


def p1j_closed_form(J, N: int) -> TruncSeries:
    """(1 - T_J - sqrt((1 - T_J)^2 - 4t)) / (2t) for the unit-rook + J-bishop paths."""
    W = N + 1
    T = _bishop_T(J, W)
    t = _t(W)
    return ((1 - T - sqrt_series((1 - T) ** 2 - 4 * t)) / (2 * t)).truncate(N)


def _closed_unweighted(f: FamilySpec, N: int) -> TruncSeries:
    W = N + 1
    t = _t(W)
    P = lambda *cs: _P(cs, W)  # noqa: E731
    sq = sqrt_series
    if f.id == "rook":
        out = (1 + 3 * t - sq(P(1, -10, 9))) / (8 * t)
    elif f.id == "queen":
        out = ((1 - t) * P(1, 1, -4) - (1 - t) ** 2 * sq(P(1, -12, 16))) / (2 * t * P(2, -3) ** 2)
    elif f.id == "iqueen" and f.param == 1:
        out = (P(1, 2, -1) - sq(P(-1, 1) * P(-1, 11, -7, 1))) / (2 * t * P(-2, 1) ** 2)
    elif f.id == "iqueen" and f.param == 2:
        out = (P(1, 3, 1) - sq(P(1, -10, -5, 2, 1))) / (2 * t * P(1, -1) * P(2, 1) ** 2)
    elif f.id == "iqueen" and f.param == 3:
        out = (P(1, 2, -2, -2, -1) - sq(P(-1, 1) * P(-1, 11, -5, -5, -7, 1, 1, 1))) / (
            2 * t * P(-2, 1, 1, 1) ** 2
        )
    elif f.id == "iqueen":
        return _iqueen_general(_P([0] + [1] * f.param, N + 1), N)
    elif f.id == "oneJ" and f.param == frozenset({2}):
        out = (P(1, 0, -1) - sq(P(1, -4, -2, 0, 1))) / (2 * t)
    elif f.id == "oneJ" and f.param == frozenset({1, 2}):
        out = (P(1, -1, -1) - sq(P(1, -6, -1, 2, 1))) / (2 * t)
    elif f.id == "oneJ" and f.param == "all":
        out = (P(-1, 2) + sq(P(1, -8, 12, -4))) / (2 * t * P(-1, 1))
    elif f.id == "oneJ":
        return p1j_closed_form(f.param, N)
    elif f.id == "tugger":
        out = (1 - sq(P(1, -4, -4))) / (2 * t * P(1, 1))
    else:
        raise NoKnownClosedForm(f.name)
    return out.truncate(N)


def weighted_rook_discriminant(rho, nu, N: int, *, as_printed: bool = False) -> TruncSeries:
    """Radicand of the (rho, nu) rook closed form.

    The t-coefficient is -2(1 + rho + nu + 2 rho nu), which is what the
    beta-quadratic gives and what the counts confirm; ``as_printed`` drops the
    factor 2 as in the published display (kept for the regression test that
    shows the display disagrees with the counts).
    """
    one = rho * 0 + 1
    lin = (1 + rho + nu + 2 * rho * nu) * (1 if as_printed else 2)
    return _P([one, -lin, 1 + (rho + nu) * (2 + rho + nu)], N, one)


def _closed_weighted(f: FamilySpec, N: int) -> TruncSeries:
    R = f.ring()
    one = R.one
    W = N + 1
    t = _t(W, one)
    P = lambda *cs: _P(cs, W, one)  # noqa: E731
    g = [R[v] for v in f.weights]
    if f.id == "rook" and len(g) == 2:
        rho, nu = g
        out = (1 + (1 + rho + nu) * t - sqrt_series(weighted_rook_discriminant(rho, nu, W))) / (
            2 * (1 + rho) * (1 + nu) * t
        )
    elif f.id == "rook":
        (rho,) = g
        out = (1 + (1 + 2 * rho) * t - sqrt_series(P(1, -1) * P(1, -(1 + 2 * rho) ** 2))) / (
            2 * t * (1 + rho) ** 2
        )
    elif f.id == "queen":
        rho, om = (g[0], g[0]) if len(g) == 1 else g
        lin = P(1, -(om - 2 * rho), -(om + 2 * rho + 1))
        rad = P(1, -((2 * rho + 1) ** 2 + 2 * om + 1), 1 + (2 * rho + om + 2) * (2 * rho + om))
        out = ((1 - t) * lin - (1 - t) ** 2 * sqrt_series(rad)) / (2 * t * P(rho + 1, -(rho + om + 1)) ** 2)
    elif f.id == "tugger":
        rho, sig = (g[0], g[0]) if len(g) == 1 else g
        out = (1 - sqrt_series(P(1, -4 * rho**2, -4 * rho * sig))) / (2 * rho * t * P(rho, sig))
    elif f.id == "mpaths" and len(g) == 1:
        return newton_quadratic_branch(quadratic_for(f), N)
    else:
        raise NoKnownClosedForm(str(f))
    return out.truncate(N)


def closed_form(f: FamilySpec, N: int) -> TruncSeries:
    """The family's radical closed form expanded to order N."""
    if f.weights:
        return _closed_weighted(f, N)
    if f.id == "mpaths":
        # the denominator 4t(3t - 2) has a factor t: expand one order further
        W = N + 1
        t = _t(W + 1)
        P = lambda *cs: _P(cs, W + 1)  # noqa: E731
        out = (P(-1, -1, 3) + sqrt_series(P(1, -14, 35, -30, 9))) / (4 * t * P(-2, 3))
        return out.truncate(N)
    return _closed_unweighted(f, N)


# -- quadratics ---------------------------------------------------------------

def _poly_of(series: TruncSeries) -> tuple:
    cs = list(series.coeffs)
    while len(cs) > 1 and cs[-1] == 0:
        cs.pop()
    return tuple(cs)


def _quad(q2, q1, q0, branch) -> QuadraticGF:
    return QuadraticGF(_poly_of(q2), _poly_of(q1), _poly_of(q0), branch=branch)


def quadratic_for(f: FamilySpec) -> QuadraticGF:
    """Quadratic equation satisfied by the family's generating function.

    The designated branch is the power-series root with constant term p_0 = 1.
    """
    # working order above the degree of every coefficient polynomial
    D = 10
    if f.id == "iqueen":
        D += 2 * f.param
    elif f.id == "oneJ" and f.param != "all" and f.param:
        D += 2 * max(f.param)
    if f.weights:
        R = f.ring()
        one = R.one
        g = [R[v] for v in f.weights]
    else:
        one = Fraction(1)
        g = []
    t = _t(D, one)
    P = lambda *cs: _P(cs, D, one)  # noqa: E731
    c1 = TruncSeries.constant(one, D)
    if f.weights:
        if f.id == "rook" and len(g) == 2:
            rho, nu = g
            return _quad((1 + nu) * (1 + rho) * t, -(1 + (1 + rho + nu) * t), c1, one)
        if f.id == "rook":
            (rho,) = g
            return _quad((1 + rho) ** 2 * t, -(1 + (1 + 2 * rho) * t), c1, one)
        if f.id == "queen":
            rho, om = (g[0], g[0]) if len(g) == 1 else g
            lin = P(1, -(om - 2 * rho), -(om + 2 * rho + 1))
            return _quad(t * P(rho + 1, -(rho + om + 1)) ** 2, -(1 - t) * lin, (1 - t) ** 2, one)
        if f.id == "mpaths" and len(g) == 1:
            (rho,) = g
            return _quad(
                (1 + rho) * t * P(-rho - 1, 2 * rho + 1), -P(-1, -rho, 2 * rho + 1), P(-1, 1), one
            )
        if f.id == "tugger":
            rho, sig = (g[0], g[0]) if len(g) == 1 else g
            return _quad(rho * t * P(rho, sig), -c1, c1, one)
        raise NoKnownQuadratic(str(f))
    if f.id == "rook":
        return _quad(4 * t, -P(1, 3), c1, one)
    if f.id == "queen":
        return _quad(t * P(2, -3) ** 2, -P(1, 0, -5, 4), P(1, -1) ** 2, one)
    if f.id == "iqueen":
        C = 1 - _P([0] + [1] * f.param, D)
        return _quad((1 + C) ** 2 * t, -(C + (C + 2) * t), c1, one)
    if f.id == "oneJ":
        if f.param == "all":
            return _quad(t * P(1, -1), -P(1, -2), P(1, -1), one)
        TJ = _bishop_T(f.param, D)
        return _quad(t, -(1 - TJ), c1, one)
    if f.id == "tugger":
        return _quad(t * P(1, 1), -c1, c1, one)
    if f.id == "mpaths":
        return _quad(2 * t * P(-2, 3), -P(-1, -1, 3), P(-1, 1), one)
    raise NoKnownQuadratic(str(f))


def rook_beta_quadratic(R: WeightRing, rho="rho", nu="nu") -> QuadraticGF:
    """(1 + nu) t s^2 - [1 + (1 + rho + nu) t] s + (1 + rho) = 0 for beta^w = (1 + rho) P^w."""
    r, n = R[rho], R[nu]
    return QuadraticGF((R.zero, 1 + n), (-R.one, -(1 + r + n)), (1 + r,), branch=1 + r)


def verify_quadratic(P: TruncSeries, q: QuadraticGF) -> TruncSeries:
    """Residual q2 P^2 + q1 P + q0 modulo t^(N+1); zero iff P satisfies q to that order."""
    return q.residual(P)


# ---------------------------------------------------------------------------
# boundary (2i + 1)

@dataclass
class BoundaryTwoSides:
    P: TruncSeries
    rhs: TruncSeries
    residual: TruncSeries


def boundary_2i1_sides(S: StepSet, N: int, *, literal_index: bool = False) -> BoundaryTwoSides:
    """Both sides of the generating-function identity for the boundary s_i = 2i + 1.

    The correction term is sum_n a_{2n,n} t^n (paths to (2n, n)).  With
    ``literal_index`` it is read as a_{n,2n} instead, which only agrees for
    step sets symmetric under (x, y) -> (y, x).
    """
    b = Boundary.affine(2, 1)
    if not S.has_all_horizontal():
        raise PreconditionFailed("S must contain every proper horizontal step (a, 0), a > 0")
    if not slope_condition(S, b):
        raise PreconditionFailed("S fails the slope condition for the boundary 2i+1")
    P = TruncSeries([Fraction(c) for c in count_bounded(S, b, N).p])
    height = 2 * N if literal_index else N
    table = count_unrestricted(S, height, width=2 * N)
    full = diagonals(CountTable([row[: N + 1] for row in table.entries], 2 * N, N), N, with_bar=True)
    L = full.sum_D(0) + full.sum_Dbar()
    if literal_index:
        E = TruncSeries([Fraction(table[n, 2 * n]) for n in range(N + 1)])
    else:
        E = TruncSeries([Fraction(table[2 * n, n]) for n in range(N + 1)])
    T = bishop_series(S, b, N)
    rhs = L / (1 + (2 - T) * (L - E))
    return BoundaryTwoSides(P, rhs, P - rhs)


def boundary_2i1_identity(S: StepSet, N: int) -> TruncSeries:
    return boundary_2i1_sides(S, N).residual
