"""
Monte Carlo: means, tails and where the roots go
================================================

Small versions of the experiments; the CLI runs the full sizes.
"""
from kaclab.coeff_sampling import CoefficientDistribution, SeedSpec
from kaclab.experiments import (
    ExperimentConfig, figure1_dataset, multiple_root_scan, run_root_count_mc,
    universality_compare,
)

# Certified counts on [0,1] against the Kac-Rice mean.
res = run_root_count_mc(ExperimentConfig(1000, CoefficientDistribution("gaussian"), 500,
                                         (0.0, 1.0), seed=SeedSpec(11)))
r = res.report
print(f"mean {r.mean_count:.3f} +- {r.std_error:.3f}, Kac-Rice {r.reference_mean:.3f}")
print(f"P(|N - ref| >= 0.5 log n) = {r.tail_probability_two_sided:.4f}"
      f"  Wilson {tuple(round(v, 4) for v in r.wilson_ci_two_sided)}")

# Roots of 100 draws: the bulk [1 - n^-0.2, 1] carries most of them.
fig = figure1_dataset(1000, 100, seed=SeedSpec(12))
print(f"bulk share {fig.bulk_fraction:.3f} +- {fig.bulk_fraction_se:.3f},"
      f" Kac-Rice ratio {fig.reference_ratio:.3f}")

# Two roots close together are rare: roots repel.
scan = multiple_root_scan(2000, 1 - 1e-2, [0.8, 0.4, 0.2], 5000, SeedSpec(13))
for row in scan["per_delta"]:
    print(f"delta {row['delta']:<4} P(>=2 roots) {row['probability']:.4f}")
print("log-log slope", scan["slope"])

# The coefficient law hardly matters once the variance is fixed.
u = universality_compare(1000, 500, SeedSpec(14))
for name, s in u["laws"].items():
    print(f"{name:>20}: mean {s['mean']:.3f} +- {s['std_error']:.3f}")
