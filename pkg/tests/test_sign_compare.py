import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from kaclab.coeff_sampling import CoefficientDistribution, SeedSpec, sample_coefficients
from kaclab.errors import ParameterError
from kaclab.kac_poly import KacPolynomial, covariance_cn, sech_limit
from kaclab.root_count import PartitionSpec
from kaclab.sign_compare import (
    CovariancePair, build_covariance_pair, comparison_report, coupled_sign_change_discrepancy,
    eigh_sym, matrix_sqrt_psd, normalized_kac_values, norms, powers_stormer_margin,
    report_json,
)

N = 10**4
ELL = 3 * math.log(N)


def random_psd(rng, k):
    F = rng.standard_normal((k, rng.integers(1, k + 1)))
    return F @ F.T


def test_normalized_values_finite():
    spec = PartitionSpec.build(10, ELL, N, delta=0.5)
    p = KacPolynomial(sample_coefficients(CoefficientDistribution("gaussian"), N, SeedSpec(1)))
    v = normalized_kac_values(p, spec)
    assert v.shape == spec.x.shape and np.all(np.isfinite(v))


def test_normalized_values_moments():
    spec = PartitionSpec.build(10, ELL, N, delta=1.0, count=2)
    d = CoefficientDistribution("gaussian")
    # one matrix of draws, evaluated at the three grid points
    xs = np.asarray(spec.x)
    V = np.stack([xs**i for i in range(N + 1)])
    vals = []
    for b in range(100):
        C = np.stack([sample_coefficients(d, N, SeedSpec(2, b * 1000 + i)) for i in range(1000)])
        vals.append(C @ V)
    g = np.concatenate(vals) / np.sqrt(np.sum(V * V, axis=0))
    assert np.all(np.abs(g.var(axis=0) - 1) < 0.02)
    emp = np.corrcoef(g.T)
    exact = covariance_cn(N, xs[:, None], xs[None, :])
    assert np.max(np.abs(emp - exact)) < 0.02
    # the package routine agrees with the direct normalization
    p = KacPolynomial(sample_coefficients(d, N, SeedSpec(2, 0)))
    assert np.allclose(normalized_kac_values(p, spec), g[0], rtol=1e-9)


def test_pair_diagonals_and_small_case():
    spec = PartitionSpec.build(100, ELL, N)
    pair = build_covariance_pair(N, spec)
    assert np.all(np.diag(pair.A) == 1) and np.all(np.diag(pair.B) == 1)
    two = PartitionSpec.build(100, ELL, N, delta=0.7, count=1)
    p2 = build_covariance_pair(N, two)
    assert p2.dimension == 2
    x, s = two.x, two.s
    gap = abs(covariance_cn(N, x[0], x[1]) - sech_limit(s[0], s[1]))
    assert p2.max_entry_gap == pytest.approx(gap, abs=1e-15)


def test_gap_decreases_with_m():
    g10 = build_covariance_pair(N, PartitionSpec.build(10, ELL, N)).max_entry_gap
    g100 = build_covariance_pair(N, PartitionSpec.build(100, ELL, N)).max_entry_gap
    assert g100 < g10
    assert g100 <= 0.5 / 100 * 0.5  # measured constant is about 0.06


def test_matrix_sqrt_examples(rng):
    assert np.allclose(matrix_sqrt_psd(np.eye(4)), np.eye(4), atol=1e-15)
    assert np.allclose(matrix_sqrt_psd(np.diag([4.0, 9.0])), np.diag([2.0, 3.0]), atol=1e-14)
    M = random_psd(rng, 50)
    R = matrix_sqrt_psd(M)
    assert np.sum((R @ R - M) ** 2) <= 1e-8
    with pytest.raises(ParameterError):
        matrix_sqrt_psd(np.array([[1.0, 0.5], [0.4, 1.0]]))
    with pytest.raises(ParameterError):
        matrix_sqrt_psd(np.diag([1.0, -1.0]))


@given(st.integers(1, 25), st.integers(0, 2**32 - 1))
def test_matrix_sqrt_symmetric_psd(k, seed):
    M = random_psd(np.random.default_rng(seed), k)
    R = matrix_sqrt_psd(M)
    assert np.max(np.abs(R - R.T)) <= 1e-12 * max(1.0, np.abs(R).max())
    assert np.linalg.eigvalsh(R).min() >= -1e-10 * max(1.0, np.abs(R).max())


def test_jacobi_matches_lapack(rng):
    M = random_psd(rng, 30) - 5 * np.eye(30)
    w, v = eigh_sym(M)
    assert np.allclose(np.sort(w), np.linalg.eigvalsh(M), atol=1e-10)
    assert np.allclose(v @ np.diag(w) @ v.T, M, atol=1e-10)


def test_norms_examples(rng):
    assert norms(np.zeros((3, 3))) == {"frobenius": 0.0, "nuclear": 0.0}
    nm = norms(np.diag([3.0, -4.0]))
    assert nm["frobenius"] == pytest.approx(5) and nm["nuclear"] == pytest.approx(7)
    for _ in range(20):
        S = rng.standard_normal((20, 20))
        S = S + S.T
        nm = norms(S)
        assert nm["nuclear"] <= math.sqrt(20) * nm["frobenius"] + 1e-9
        assert nm["nuclear"] == pytest.approx(np.abs(np.linalg.eigvalsh(S)).sum(), rel=1e-10)


def test_powers_stormer_examples():
    A = np.diag([2.0, 3.0])
    r = powers_stormer_margin(A, A)
    assert r["lhs"] == 0 and r["rhs"] == 0 and r["holds"]
    r = powers_stormer_margin(np.array([[4.0]]), np.array([[1.0]]))
    assert r["lhs"] == pytest.approx(1) and r["rhs"] == pytest.approx(3) and r["holds"]


@given(st.integers(1, 50), st.integers(0, 2**32 - 1))
def test_powers_stormer_random(k, seed):
    rng = np.random.default_rng(seed)
    assert powers_stormer_margin(random_psd(rng, k), random_psd(rng, k))["holds"]


def test_frobenius_vs_entry_gap():
    for m in (10, 30, 100):
        spec = PartitionSpec.build(m, ELL, N)
        pair = build_covariance_pair(N, spec)
        assert norms(pair.A - pair.B)["frobenius"] <= (spec.T + 1) * pair.max_entry_gap


def test_discrepancy_examples():
    spec = PartitionSpec.build(10, ELL, N, delta=0.5, count=1)
    A = np.array([[1.0, 0.9], [0.9, 1.0]])
    same = CovariancePair(A, A.copy(), spec)
    assert coupled_sign_change_discrepancy(same, 2000, SeedSpec(3)) == 0.0
    other = CovariancePair(A, np.array([[1.0, 0.4], [0.4, 1.0]]), spec)
    assert coupled_sign_change_discrepancy(other, 10_000, SeedSpec(3)) > 0.01
    with pytest.raises(ParameterError):
        coupled_sign_change_discrepancy(same, 10, SeedSpec(3))


def test_discrepancy_monotone_in_m():
    n = 10**8
    vals = []
    for m in (10, 100, 1000):
        pair = build_covariance_pair(n, PartitionSpec.build(m, 3 * math.log(n), n, delta=0.5,
                                                            count=10))
        vals.append(coupled_sign_change_discrepancy(pair, 20_000, SeedSpec(4)))
    assert vals[0] >= vals[1] >= vals[2]
    assert vals[2] < vals[0]


def test_report():
    rep = comparison_report(N, PartitionSpec.build(10, ELL, N), draws=2000, seed=SeedSpec(5))
    assert set(rep) == {"dimension", "max_entry_gap", "frobenius_gap", "nuclear_gap", "ps_lhs",
                        "ps_rhs", "discrepancy"}
    assert rep["ps_lhs"] <= rep["ps_rhs"] + 1e-8
    assert '"dimension"' in report_json(rep)
