"""Comparing the normalized Kac polynomial with the limit process on a grid.

On the partition ``x_k = 1 - e^(-s_k)`` the vector ``g_n(s_k)`` has
covariance ``B`` (exact sums) and the limit process has covariance ``A``
(sech kernel). Coupling both through one standard normal ``W`` as
``A^(1/2) W`` and ``B^(1/2) W`` makes their sign patterns differ with a
probability controlled by ``||A^(1/2) - B^(1/2)||_F``, which
Powers-Stormer bounds by the nuclear norm of ``A - B``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .coeff_sampling import SeedSpec
from .errors import NumericError, ParameterError
from .kac_poly import KacPolynomial, covariance_cn, evaluate, sech_limit, variance_at
from .root_count import PartitionSpec

JACOBI_TOL = 1e-13
JACOBI_SWEEPS = 100
PSD_FLOOR = -1e-10
SYM_TOL = 1e-12
PS_SLACK = 1e-8


def normalized_kac_values(p: KacPolynomial, spec: PartitionSpec) -> np.ndarray:
    """``f_n(x_k) / sqrt(V(x_k))`` along the partition."""
    x = np.asarray(spec.x)
    return evaluate(p, x) / np.sqrt(variance_at(p.degree, x))


@dataclass(frozen=True)
class CovariancePair:
    A: np.ndarray
    B: np.ndarray
    grid: PartitionSpec

    @property
    def dimension(self) -> int:
        return self.A.shape[0]

    @property
    def max_entry_gap(self) -> float:
        return float(np.max(np.abs(self.A - self.B)))


def _min_eig(m: np.ndarray) -> float:
    w, _, _ = _kernels.jacobi_eigh(np.ascontiguousarray(m, dtype=np.float64),
                                   JACOBI_TOL, JACOBI_SWEEPS)
    return float(w.min())


def build_covariance_pair(n: int, spec: PartitionSpec) -> CovariancePair:
    """Sech covariance ``A`` and exact Kac covariance ``B`` on ``spec``."""
    s = np.asarray(spec.s)
    x = np.asarray(spec.x)
    A = np.asarray(sech_limit(s[:, None], s[None, :]), dtype=np.float64)
    B = np.asarray(covariance_cn(n, x[:, None], x[None, :]), dtype=np.float64)
    np.fill_diagonal(A, 1.0)
    np.fill_diagonal(B, 1.0)
    for name, m in (("A", A), ("B", B)):
        lo = _min_eig(m)
        if lo < PSD_FLOOR:
            raise NumericError(f"{name} has eigenvalue {lo:.3g} below {PSD_FLOOR}")
    A.setflags(write=False)
    B.setflags(write=False)
    return CovariancePair(A, B, spec)


def _check_symmetric(m: np.ndarray) -> np.ndarray:
    m = np.asarray(m, dtype=np.float64)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ParameterError("need a square matrix")
    scale = max(1.0, float(np.max(np.abs(m)))) if m.size else 1.0
    if m.size and np.max(np.abs(m - m.T)) > SYM_TOL * scale:
        raise ParameterError("matrix is not symmetric")
    return np.ascontiguousarray(0.5 * (m + m.T))


def eigh_sym(m) -> tuple[np.ndarray, np.ndarray]:
    """Jacobi eigendecomposition of a symmetric matrix."""
    m = _check_symmetric(m)
    if m.shape[0] == 0:
        return np.zeros(0), np.zeros((0, 0))
    w, v, _ = _kernels.jacobi_eigh(m, JACOBI_TOL, JACOBI_SWEEPS)
    return w, v


def matrix_sqrt_psd(m) -> np.ndarray:
    """Symmetric PSD square root; jitter-level negative eigenvalues become 0."""
    w, v = eigh_sym(m)
    scale = max(1.0, float(np.max(np.abs(w)))) if w.size else 1.0
    if w.size and w.min() < PSD_FLOOR * scale:
        raise ParameterError(f"matrix is not PSD (eigenvalue {w.min():.3g})")
    r = (v * np.sqrt(np.clip(w, 0.0, None))) @ v.T
    return 0.5 * (r + r.T)


def norms(m) -> dict:
    """Frobenius and nuclear norms; symmetric input uses Jacobi eigenvalues."""
    m = np.asarray(m, dtype=np.float64)
    fro = float(np.sqrt(np.sum(m * m)))
    if m.ndim == 2 and m.shape[0] == m.shape[1] and np.array_equal(m, m.T):
        nuc = float(np.sum(np.abs(eigh_sym(m)[0])))
    else:
        nuc = float(np.sum(np.linalg.svd(m, compute_uv=False)))
    return {"frobenius": fro, "nuclear": nuc}


def powers_stormer_margin(pair_or_a, b=None) -> dict:
    """``||A^(1/2) - B^(1/2)||_F^2`` against ``||A - B||_*``."""
    if b is None:
        a, b = pair_or_a.A, pair_or_a.B
    else:
        a = pair_or_a
    d = matrix_sqrt_psd(a) - matrix_sqrt_psd(b)
    lhs = float(np.sum(d * d))
    rhs = norms(np.asarray(a) - np.asarray(b))["nuclear"]
    return {"lhs": lhs, "rhs": rhs, "holds": lhs <= rhs + PS_SLACK}


def coupled_sign_change_discrepancy(pair: CovariancePair, draws: int, seed: SeedSpec,
                                    batch: int = 4096) -> float:
    """Share of coupled draws whose adjacent-pair sign patterns differ anywhere."""
    if draws < 1000:
        raise ParameterError("draws must be at least 1000")
    ra = matrix_sqrt_psd(pair.A)
    rb = matrix_sqrt_psd(pair.B)
    if np.array_equal(ra, rb):
        return 0.0
    k = ra.shape[0]
    differ = 0
    for j, start in enumerate(range(0, draws, batch)):
        size = min(batch, draws - start)
        w = seed.child(j).generator().standard_normal((size, k))
        x = w @ ra.T
        y = w @ rb.T
        px = np.sign(x[:, :-1] * x[:, 1:])
        py = np.sign(y[:, :-1] * y[:, 1:])
        differ += int(np.count_nonzero(np.any(px != py, axis=1)))
    return differ / draws


def comparison_report(n: int, spec: PartitionSpec, draws: int = 10_000,
                      seed: SeedSpec = SeedSpec()) -> dict:
    pair = build_covariance_pair(n, spec)
    diff = pair.A - pair.B
    nm = norms(diff)
    ps = powers_stormer_margin(pair)
    return {
        "dimension": pair.dimension,
        "max_entry_gap": pair.max_entry_gap,
        "frobenius_gap": nm["frobenius"],
        "nuclear_gap": nm["nuclear"],
        "ps_lhs": ps["lhs"],
        "ps_rhs": ps["rhs"],
        "discrepancy": coupled_sign_change_discrepancy(pair, draws, seed),
    }


def report_json(report: dict) -> str:
    return json.dumps(report, indent=2, sort_keys=False)


def bulk_gap(n: int, m: float, ell: float, delta: float | None = None) -> float:
    """Max entrywise ``|c_n - sech|`` on the default bulk partition."""
    return build_covariance_pair(n, PartitionSpec.build(m, ell, n, delta)).max_entry_gap


__all__ = [
    "CovariancePair", "normalized_kac_values", "build_covariance_pair", "matrix_sqrt_psd",
    "norms", "powers_stormer_margin", "coupled_sign_change_discrepancy",
    "comparison_report", "report_json", "bulk_gap", "eigh_sym",
]
