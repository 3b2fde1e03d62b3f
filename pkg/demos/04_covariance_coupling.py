"""
Coupling the polynomial with the limit
======================================

On a grid in the bulk, the covariance matrix B of the normalized
polynomial is close to the sech matrix A. Driving both with one normal
vector couples them; how often their sign patterns differ is governed by
||A^(1/2) - B^(1/2)||_F, which the Powers-Stormer inequality bounds by
the nuclear norm of A - B.
"""
import math

from kaclab.coeff_sampling import SeedSpec
from kaclab.root_count import PartitionSpec
from kaclab.sign_compare import comparison_report

n = 10**8
ell = 3 * math.log(n)
print("    m    dim   max gap   ||.||_F^2   nuclear   discrepancy")
for m in (10, 100, 1000):
    spec = PartitionSpec.build(m, ell, n, delta=0.5, count=10)
    rep = comparison_report(n, spec, draws=20_000, seed=SeedSpec(7))
    print(f"{m:>5} {rep['dimension']:>6} {rep['max_entry_gap']:9.2e} {rep['ps_lhs']:11.2e}"
          f" {rep['ps_rhs']:9.2e} {rep['discrepancy']:12.5f}")
# The gap shrinks roughly like 1/m, and the sign patterns agree more often.
