import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy import integrate

from kaclab.coeff_sampling import SeedSpec
from kaclab.errors import ParameterError
from kaclab.limit_process import (
    ProcessGrid, count_zeros, cov_Z, covariance_factor, covariance_matrix,
    derivative_moments, expected_zeros, kernel_u_grid, rice_zero_intensity,
    sample_path_covariance, sample_path_kernel, spectral_density,
)

FIVE = ProcessGrid(np.array([0.0, 0.5, 1.3, 2.0, 4.0]))


def corr(v, i, j):
    return float(np.corrcoef(v[:, i], v[:, j])[0, 1])


def test_cov_examples():
    assert cov_Z(3.0, 3.0) == 1
    assert cov_Z(0.0, 2 * math.log(2)) == pytest.approx(0.8, abs=1e-15)


@given(st.lists(st.floats(-30, 30), min_size=1, max_size=40, unique=True))
def test_covariance_factorizes(points):
    grid = ProcessGrid(np.sort(points))
    C = covariance_matrix(grid)
    assert np.array_equal(C, C.T)
    L, how = covariance_factor(grid)
    assert np.allclose(L @ L.T, C, atol=1e-8)


def test_spectral_examples():
    assert spectral_density(0.0) == 1
    assert spectral_density(1.0) == pytest.approx(2 / (math.exp(math.pi) + math.exp(-math.pi)))
    assert spectral_density(1.0) == pytest.approx(0.086267, abs=1e-6)
    total, _ = integrate.quad(spectral_density, -np.inf, np.inf)
    assert total == pytest.approx(1.0, abs=1e-9)
    # inverse transform gives back the covariance
    for t in (0.5, 2.0):
        v, _ = integrate.quad(lambda x: spectral_density(x) * math.cos(t * x), -np.inf, np.inf)
        assert v == pytest.approx(cov_Z(0.0, t), abs=1e-7)


def test_single_point_is_standard_normal():
    s = sample_path_covariance(ProcessGrid([1.0]), SeedSpec(4), paths=50_000)
    assert s.values.shape == (50_000, 1)
    assert abs(s.values.mean()) < 0.02
    assert s.values.var() == pytest.approx(1, abs=0.03)


def test_covariance_sampler_correlations():
    g = ProcessGrid([0.0, 2 * math.log(2), 2 * math.log(2) + 40])
    v = sample_path_covariance(g, SeedSpec(6), paths=100_000).values
    assert corr(v, 0, 1) == pytest.approx(0.8, abs=0.01)
    assert abs(corr(v, 0, 2)) < 0.01


@pytest.fixture(scope="module")
def kernel_draws():
    return sample_path_kernel(FIVE, SeedSpec(8), paths=100_000).values


def test_kernel_marginals(kernel_draws):
    v = kernel_draws
    assert np.all(np.abs(v.var(axis=0) - 1) < 0.02)


def test_kernel_pairwise_covariance(kernel_draws):
    v = kernel_draws
    C = np.cov(v.T)
    t = FIVE.points
    assert np.max(np.abs(C - cov_Z(t[:, None], t[None, :]))) < 0.02


def test_samplers_agree_in_law(kernel_draws):
    a = kernel_draws
    b = sample_path_covariance(FIVE, SeedSpec(9), paths=100_000).values
    n = a.shape[0]
    se_mean = math.sqrt(2 / n)
    assert np.all(np.abs(a.mean(0) - b.mean(0)) < 3 * se_mean)
    # Var of a sample variance for a normal law is 2 sigma^4 / (n - 1)
    se_var = math.sqrt(2 * 2 / (n - 1))
    assert np.all(np.abs(a.var(0) - b.var(0)) < 3 * se_var)
    for i in range(5):
        for j in range(i + 1, 5):
            r = cov_Z(FIVE.points[i], FIVE.points[j])
            se = math.sqrt(2) * (1 - r * r) / math.sqrt(n)
            assert abs(corr(a, i, j) - corr(b, i, j)) < 3 * se


def test_kernel_stationarity():
    n = 100_000
    a = sample_path_kernel(ProcessGrid([0.0, 1.0]), SeedSpec(10), paths=n).values
    b = sample_path_kernel(ProcessGrid([5.0, 6.0]), SeedSpec(11), paths=n).values
    za, zb = np.arctanh(corr(a, 0, 1)), np.arctanh(corr(b, 0, 1))
    z = (za - zb) / math.sqrt(2 / (n - 3))
    assert abs(z) < 3


def test_kernel_grid_preconditions():
    with pytest.raises(ParameterError):
        kernel_u_grid(np.array([0.0, 1.0]), du=-1.0)
    with pytest.raises(ParameterError):
        sample_path_kernel(ProcessGrid([0.0]), SeedSpec(), u_max=0.5)
    with pytest.raises(ParameterError):
        sample_path_kernel(ProcessGrid([0.0, 1.0]), SeedSpec(), du=1.0)
    s = sample_path_kernel(ProcessGrid([0.0, 3.0]), SeedSpec(), paths=3)
    assert s.diagnostics["max_variance_error"] < 1e-3


def test_expected_zeros():
    assert expected_zeros(2.0, 2.0) == 0
    assert expected_zeros(0, 2 * math.pi) == pytest.approx(1)
    assert expected_zeros(0, 20 * math.pi) == pytest.approx(10)
    with pytest.raises(ParameterError):
        expected_zeros(1, 0)


def test_derivative_moments():
    m = derivative_moments()
    assert m["var_Z1"] == pytest.approx(0.25, abs=1e-15)
    assert m["var_Z2"] == pytest.approx(0.3125, abs=1e-15)
    assert rice_zero_intensity() == pytest.approx(1 / (2 * math.pi))
    # second difference of the covariance at 0 recovers -r''(0)
    h = 1e-4
    assert (2 - 2 * cov_Z(0, h)) / h**2 == pytest.approx(0.25, rel=1e-6)


def test_zero_count_mean():
    g = ProcessGrid.uniform(0, 20, 1e-2)
    assert len(g) == 2001
    s = sample_path_covariance(g, SeedSpec(12), paths=2000)
    k = s.zero_counts()
    assert np.array_equal(k, count_zeros(s.values))
    se = k.std(ddof=1) / math.sqrt(k.size)
    assert abs(k.mean() - expected_zeros(0, 20)) < 3 * se


def test_zero_count_concentration():
    g = ProcessGrid.uniform(0, 40, 1e-2)
    mu = expected_zeros(0, 40)
    counts = np.concatenate([
        sample_path_covariance(g, SeedSpec(13).child(j), paths=1000).zero_counts()
        for j in range(10)
    ])
    dev = np.abs(counts - mu)
    p3, p5, p8 = (np.mean(dev >= d) for d in (3, 5, 8))
    assert p5 < p3
    assert p8 < 1e-2


def test_csv_and_grid():
    g = ProcessGrid.uniform(0, 1, 0.5)
    assert np.allclose(g.points, [0, 0.5, 1])
    s = sample_path_covariance(g, SeedSpec(1), paths=2)
    lines = s.to_csv().splitlines()
    assert lines[0] == "path_id,t,value" and len(lines) == 7
    with pytest.raises(ParameterError):
        ProcessGrid([1.0, 0.0])
    again = sample_path_covariance(g, SeedSpec(1), paths=2)
    assert np.array_equal(s.values, again.values)
