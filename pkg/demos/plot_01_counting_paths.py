"""
Counting lattice paths under a boundary
=======================================

Rook paths take any number of horizontal or vertical unit lengths per step.
We count them in the plane, then below the Catalan boundary.
"""

from catpaths import Boundary, StepSet, count_bounded, count_unrestricted, enumerate_paths

# all horizontal and all vertical steps
rook = StepSet.parse("H*,V*")
table = count_unrestricted(rook, 4)
for y in range(5):
    print(" ".join(f"{table[x, y]:5d}" for x in range(5)))

# p_n counts paths from the origin to (n, n) that stay left of y = x - 1
res = count_bounded(rook, Boundary.catalan(), 8)
print("p:", res.p)

# the small cases are easy to list by hand
for path in enumerate_paths(rook, (1, 1)):
    print(path)

# adding bishop steps gives queen paths
queen = StepSet.parse("H*,V*,B*")
print("queen p:", count_bounded(queen, Boundary.catalan(), 8).p)
