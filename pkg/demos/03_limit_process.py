"""
The sech process
================

In the coordinate s = -log(1 - x), the normalized polynomial looks like
a stationary Gaussian process Z with covariance sech((t - s)/2). Here we
sample Z two ways and count its zeros.
"""
import math

import numpy as np

from kaclab.coeff_sampling import SeedSpec
from kaclab.limit_process import (
    ProcessGrid, cov_Z, derivative_moments, expected_zeros, sample_path_covariance,
    sample_path_kernel,
)

grid = ProcessGrid(np.array([0.0, 0.5, 1.3, 2.0, 4.0]))

# Route one: factor the covariance matrix. Route two: a Riemann-Ito sum
# over the white-noise kernel. They share no code beyond the grid.
a = sample_path_covariance(grid, SeedSpec(1), paths=20_000).values
b = sample_path_kernel(grid, SeedSpec(2), paths=20_000).values
t = grid.points
print("target     ", np.round(cov_Z(t[0], t), 4))
print("covariance ", np.round(np.corrcoef(a.T)[0], 4))
print("kernel     ", np.round(np.corrcoef(b.T)[0], 4))

# Var Z' = 1/4, so Rice's formula gives 1/(2 pi) zeros per unit time.
m = derivative_moments()
print("Var Z' =", m["var_Z1"], " Var Z'' =", m["var_Z2"])

fine = ProcessGrid.uniform(0, 20, 1e-2)
z = sample_path_covariance(fine, SeedSpec(3), paths=500).zero_counts()
print(f"sign changes on [0,20]: {z.mean():.3f} +- {z.std(ddof=1) / math.sqrt(z.size):.3f}"
      f"  (expected {expected_zeros(0, 20):.3f})")
