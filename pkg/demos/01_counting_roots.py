"""
Counting real roots of a random polynomial
==========================================

Draw one Gaussian Kac polynomial of degree 1000, count its real roots
with certificates, and look at where they sit.
"""
import numpy as np

from kaclab.coeff_sampling import CoefficientDistribution, SeedSpec, sample_coefficients
from kaclab.kac_poly import KacPolynomial, Region
from kaclab.kac_rice import expected_count_real_line
from kaclab.root_count import count_region, isolate_roots

n = 1000
coeffs = sample_coefficients(CoefficientDistribution("gaussian"), n, SeedSpec(2024))
p = KacPolynomial(coeffs)

# The count on [0, 1] is certified: every cell either has no root, or
# is proven to hold exactly one.
res = isolate_roots(p, (0.0, 1.0), width=1e-12)
print("roots in [0,1]:", res.certified_count, "uncertain cells:", res.uncertain_cells)
for a, b in res.isolating:
    print(f"  root in [{a:.15f}, {b:.15f}]")

# Most of them hug x = 1. Distance to 1 on a log scale:
print("-log10(1-x):", np.round(-np.log10(1 - np.array(res.roots())), 2))

# The four regions split the real line at -1, 0, 1 and are related by
# x -> -x and x -> 1/x, so each gets about a quarter of the roots.
total = 0
for r in Region:
    k = count_region(p, r).certified_count
    total += k
    print(f"{r.value:>7}: {k}")
print("total", total, "expected", round(expected_count_real_line(n), 3))
