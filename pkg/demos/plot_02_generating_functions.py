"""
Generating functions three ways
===============================

The DP counts, the diagonal pipeline and the closed form must give the same
power series. The same series is also the root of a quadratic.
"""

from catpaths import genfun as gf

N = 12
for name in ("rook", "queen", "tugger", "mpaths"):
    f = gf.FamilySpec.parse(name)
    dp = gf.dp_series(f, N)
    same = dp == gf.family_pipeline(f, N) == gf.closed_form(f, N)
    residual = gf.verify_quadratic(dp, gf.quadratic_for(f))
    print(f"{name:7s} agree={same} residual zero={residual.is_zero()}")
    print("   ", [int(c) for c in dp.coeffs])

# weights mark step kinds; here rho marks horizontal and nu vertical steps
f = gf.FamilySpec.parse("rook", ("rho", "nu"))
P = gf.weighted_catalan_gf(f.stepset(), f.weight_values(), 3)
for k in range(4):
    print(f"t^{k}:", P[k].as_expr())

# setting every weight to 1 recovers the plain counts
R = f.ring()
ones = {v: 1 for v in R.variables}
print([int(c) for c in P.map(lambda c: R.specialize(c, ones)).coeffs])
