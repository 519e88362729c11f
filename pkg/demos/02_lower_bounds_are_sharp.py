"""
The q-independent lower bounds are nearly attained
==================================================

For each family the proportion stays above a function of the rank alone.
Picking q so that r^a divides q - 1 (or q + 1) for large a pushes the
proportion down towards that function.
"""

from fractions import Fraction

from regprop import Family, GroupSpec, proportion
from regprop.bounds import construct_adversarial_q, h_table

# p_3(Sp_6(q)) over a few fields, against f_3(3) = 5/16
print("h =", h_table(Family.Sp, 3, 3).value)
for q in (2, 4, 5, 7, 13, 19, 37):
    print(q, float(proportion(GroupSpec("Sp", 3, q), 3).value))

# a field built to get within 1/1000 of the bound
adv = construct_adversarial_q(Family.Sp, 3, 3, 2, Fraction(1, 1000))
print(f"q = 2^{adv.exponent}, a = {adv.a}, certificate {adv.certificate}")
value = proportion(adv.spec, 3).value
print(float(value), float(adv.target), value - adv.target < Fraction(1, 1000))

# the same game for PSL_5 with r = 5: the bound is 1/5
adv = construct_adversarial_q(Family.SL, 4, 5, 2, Fraction(1, 100))
print(adv.spec.label, float(proportion(adv.spec, 5).value))
