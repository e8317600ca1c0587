"""
Growth constants from the quadratic
===================================

For a quadratic series, p_n ~ omega * gamma^n / sqrt(pi n^3).
We locate the branch point exactly, then compare with a ratio fit.
"""

import mpmath

from catpaths import asymptotics as asy
from catpaths.genfun import FamilySpec, quadratic_for

mpmath.mp.dps = 30

for name in ("rook", "queen", "tugger", "mpaths"):
    q = quadratic_for(FamilySpec.parse(name))
    sing = asy.singularity_estimate(q)
    coeffs = asy.coefficients_from_quadratic(q, 2000, method="holonomic")
    ratio = asy.ratio_estimate(coeffs)
    print(f"{name:7s} gamma={mpmath.nstr(sing.gamma, 15):18s} omega={mpmath.nstr(sing.omega, 15)}")
    print(f"        ratio fit: gamma off by {mpmath.nstr(asy.relative_delta(ratio.gamma, sing.gamma), 3)},"
          f" omega off by {mpmath.nstr(asy.relative_delta(ratio.omega, sing.omega), 3)}")

# the rook singularity is rational
print(asy.dominant_singularity(quadratic_for(FamilySpec.parse("rook"))).exact)

# the same report the command line prints
print(asy.report_json(asy.asymptotic_report("queen", quadratic_for(FamilySpec.parse("queen")), N=500)))
