import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from kaclab.coeff_sampling import (
    KINDS, CoefficientDistribution, SeedSpec, moment_report, parse_distribution,
    sample_coefficients,
)
from kaclab.errors import ParameterError


def test_rademacher_support():
    for seed in range(20):
        c = sample_coefficients(CoefficientDistribution("rademacher"), 3, SeedSpec(seed))
        assert c.shape == (4,)
        assert set(c.tolist()) <= {-1.0, 1.0}


def test_gaussian_mean_band():
    c = sample_coefficients(CoefficientDistribution("gaussian"), 10**5, SeedSpec(3))
    assert -0.02 <= c.mean() <= 0.02


def test_uniform_variance_band():
    c = sample_coefficients(CoefficientDistribution("uniform_symmetric"), 10**5, SeedSpec(3))
    assert 0.98 <= c.var() <= 1.02
    assert np.all(np.abs(c) <= math.sqrt(3))


def test_pareto_exponent_validation():
    with pytest.raises(ParameterError):
        CoefficientDistribution("pareto_symmetrized", exponent=2.0)
    with pytest.raises(ParameterError):
        CoefficientDistribution("pareto_symmetrized", exponent=2.2, epsilon0=0.5)
    with pytest.raises(ParameterError):
        CoefficientDistribution("gaussian", exponent=3.0)
    with pytest.raises(ParameterError):
        CoefficientDistribution("cauchy")
    with pytest.raises(ParameterError):
        CoefficientDistribution("gaussian", c0_bound=0.5)


def test_pareto_unit_variance():
    d = CoefficientDistribution("pareto_symmetrized", exponent=4.0, epsilon0=0.5)
    r = moment_report(d, 10**6, SeedSpec(1))
    assert abs(r["mean"]) < 0.01
    assert abs(r["variance"] - 1) < 0.03


def test_moment_report_rademacher_exact():
    r = moment_report(CoefficientDistribution("rademacher"), 1000, SeedSpec(9))
    assert r["variance"] == 1.0
    assert r["abs_moment_2_eps"] == 1.0


def test_moment_report_gaussian_third_moment():
    d = CoefficientDistribution("gaussian", epsilon0=1.0)
    r = moment_report(d, 10**6, SeedSpec(2))
    target = 2 * math.sqrt(2 / math.pi)
    assert abs(r["abs_moment_2_eps"] - target) < 0.05 * target
    assert d.analytic_moment() == pytest.approx(target)


def test_moment_report_uniform_mean():
    r = moment_report(CoefficientDistribution("uniform_symmetric"), 10**6, SeedSpec(4))
    assert -0.01 <= r["mean"] <= 0.01


@pytest.mark.parametrize("kind", ["gaussian", "uniform_symmetric", "pareto_symmetrized"])
def test_moment_error_shrinks(kind):
    # error at 100x the sample size should be ~10x smaller; averaged over seeds
    d = CoefficientDistribution(kind, exponent=6.0 if kind == "pareto_symmetrized" else None)
    target = d.analytic_moment()

    def rms(count):
        errs = [moment_report(d, count, SeedSpec(s))["abs_moment_2_eps"] - target
                for s in range(12)]
        return math.sqrt(np.mean(np.square(errs)))

    small, big = rms(1000), rms(100_000)
    assert big < small / 3


@given(st.sampled_from(KINDS), st.integers(0, 200), st.integers(0, 2**63 - 1),
       st.integers(0, 1000))
def test_reproducible(kind, n, master, stream):
    d = CoefficientDistribution(kind)
    a = sample_coefficients(d, n, SeedSpec(master, stream))
    b = sample_coefficients(d, n, SeedSpec(master, stream))
    assert np.array_equal(a, b)
    assert a.shape == (n + 1,)


def test_streams_differ():
    d = CoefficientDistribution("gaussian")
    a = sample_coefficients(d, 50, SeedSpec(1, 0))
    b = sample_coefficients(d, 50, SeedSpec(1, 1))
    c = sample_coefficients(d, 50, SeedSpec(2, 0))
    assert not np.array_equal(a, b) and not np.array_equal(a, c)


def test_child_streams_do_not_collide():
    s = SeedSpec(5)
    kids = {s.child(i) for i in range(100)}
    assert len(kids) == 100 and s not in kids


def test_parse_distribution():
    assert parse_distribution("gaussian").kind == "gaussian"
    d = parse_distribution("pareto_symmetrized:3.5")
    assert d.kind == "pareto_symmetrized" and d.exponent == 3.5
    with pytest.raises(ParameterError):
        parse_distribution("nope")
