"""
The Kac-Rice density
====================

The expected number of roots per unit length, and how the expected
total grows with the degree.
"""
import math

from kaclab.kac_rice import DensityProfile, density_rho1, expected_count, expected_count_real_line

# At 0 the density is 1/pi for every degree. Near 1 it behaves like
# 1 / (2 pi (1 - x)) until 1 - x ~ 1/n, then saturates.
n = 1000
for x in (0.0, 0.5, 0.9, 0.99, 0.999, 1.0):
    far = 1 / (2 * math.pi * (1 - x)) if x < 1 else float("inf")
    print(f"x={x:<6} rho={density_rho1(n, x):10.4f}   1/(2pi(1-x))={far:10.4f}")

# A ready-to-plot profile, uniform in -log(1 - x).
prof = DensityProfile.default(n, 8)
print(prof.to_csv())

# The mean number of real roots grows like (2/pi) log n plus a constant.
print(" n        E N(R)   (2/pi)log n   difference")
for n in (10, 100, 1000, 10**4, 10**5):
    e = expected_count_real_line(n)
    lead = 2 / math.pi * math.log(n)
    print(f"{n:>6}  {e:9.5f}  {lead:11.5f}  {e - lead:10.5f}")

# Roots in [0,1] mostly live near 1: the share in [1 - n^-0.2, 1].
n = 1000
edge = 1 - n**-0.2
print("share near 1:", expected_count(n, (edge, 1)) / expected_count(n, (0, 1)))
