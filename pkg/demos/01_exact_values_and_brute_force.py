"""
Exact proportions versus brute force
====================================

Count elements of order prime to r directly in a few small matrix groups,
then compare with the torus average computed by the engine.
"""

from regprop import GroupSpec, proportion
from regprop.oracle import brute_proportion, build_group

# SL_2(3): 24 matrices, built by filtering every 2x2 matrix over GF(3)
g = build_group(GroupSpec("SL", 1, 3))
print(g.order, g.strategy)

# the odd-order elements of SL_2(3), as a fraction
print(brute_proportion(GroupSpec("SL", 1, 3), 2), proportion(GroupSpec("SL", 1, 3), 2).value)

# larger groups come from random isometries of a fixed form plus closure
for spec, r in [
    (GroupSpec("SU", 2, 3), 2),
    (GroupSpec("Sp", 2, 3), 2),
    (GroupSpec("SOminus", 2, 3), 2),
    (GroupSpec("OmegaOdd", 2, 3), 2),
    (GroupSpec("Sp", 2, 3, projective=True), 2),
]:
    brute = brute_proportion(spec, r)
    exact = proportion(spec, r)
    print(f"{spec.label:>12}  r={r}  brute {str(brute):>8}  engine {str(exact.value):>8}  ({exact.method})")

# the engine needs no matrices at all, so q can be huge
huge = GroupSpec("SL", 3, 2**54, projective=True)
print(huge.label, float(proportion(huge, 3).value))
