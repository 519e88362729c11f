"""
How fast the proportion of odd-order elements decays
====================================================

The recurrence path reaches ranks where listing Weyl classes is hopeless.
Here p_2 of Sp_2n(3) and of PSL_d(3) is compared with the power laws
n^(-3/4) and d^(-1/2).
"""

import numpy as np

from regprop import Family
from regprop.bounds import corollary_constants, upper_bound_p2
from regprop.engine import proportion_series
from regprop.tori import GroupSpec

n = np.arange(2, 301)
sp = np.array([float(v) for v in proportion_series(Family.Sp, 3, 2, 300)[2:]])
lower = np.array([corollary_constants(Family.Sp, k, 2).value for k in n])
print("Sp_2n(3): p_2 * (n+1)^(3/4) at n = 10, 100, 300:", (sp * (n + 1) ** 0.75)[[8, 98, 298]])
print("envelope respected:", bool((sp >= lower).all()))

# PSL_d(3) = SL_d(3) / Z with |Z|_2 = (d, 2)_2
d = np.arange(2, 201)
sl = proportion_series(Family.SL, 3, 2, 200)
psl = np.array([float(sl[k - 1]) * (2 if k % 2 == 0 else 1) for k in d])
upper = np.array([upper_bound_p2(GroupSpec(Family.SL, k - 1, 3, True)).value for k in d])
print("PSL_d(3): p_2 * sqrt(d) at d = 10, 100, 200:", (psl * np.sqrt(d))[[8, 98, 198]])
print("upper bound respected:", bool((psl <= upper).all()))
