"""The stationary Gaussian process with covariance ``sech((t - s) / 2)``.

Two samplers are provided and are meant to check each other:

* ``sample_path_covariance`` factors the covariance matrix of the grid,
* ``sample_path_kernel`` discretizes the white-noise integral
  ``Z_t = sqrt(2) e^(-t/2) int_0^inf exp(-e^(-t) u) dB_u`` with shared
  Brownian increments, so it never looks at the covariance at all.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy import special

from .coeff_sampling import SeedSpec
from .errors import NumericError, ParameterError
from .kac_poly import sech_limit
from .root_count import sign_changes

MAX_DENSE = 10_000
JITTERS = (0.0, 1e-14, 1e-13, 1e-12, 1e-11, 1e-10)


@dataclass(frozen=True)
class ProcessGrid:
    points: np.ndarray
    step: float | None = None

    def __post_init__(self):
        p = np.asarray(self.points, dtype=np.float64).ravel()
        if p.size < 1 or not np.all(np.isfinite(p)):
            raise ParameterError("grid needs finite points")
        if np.any(np.diff(p) <= 0):
            raise ParameterError("grid points must be strictly increasing")
        p.setflags(write=False)
        object.__setattr__(self, "points", p)

    @classmethod
    def uniform(cls, start: float, end: float, step: float) -> "ProcessGrid":
        """``start, start + step, ...`` up to ``end`` (included when it is hit)."""
        if not step > 0 or end < start:
            raise ParameterError("need step > 0 and end >= start")
        k = int(math.floor((end - start) / step + 1e-9))
        return cls(start + step * np.arange(k + 1), float(step))

    def __len__(self):
        return self.points.size


@dataclass
class ProcessSample:
    """One or more sampled paths; ``values`` has shape ``(paths, len(grid))``."""

    grid: ProcessGrid
    values: np.ndarray
    seed: SeedSpec
    sampler: str
    diagnostics: dict = field(default_factory=dict)

    @property
    def path(self) -> np.ndarray:
        """The first (often only) path."""
        return self.values[0]

    def zero_counts(self) -> np.ndarray:
        """Sign changes along each path."""
        v = np.sign(self.values)
        return np.count_nonzero(v[:, :-1] * v[:, 1:] < 0, axis=1)

    def to_csv(self, fh=None) -> str | None:
        buf = io.StringIO() if fh is None else fh
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["path_id", "t", "value"])
        t = self.grid.points
        for pid, row in enumerate(self.values):
            for ti, vi in zip(t, row):
                w.writerow([pid, repr(float(ti)), repr(float(vi))])
        return buf.getvalue() if fh is None else None


def cov_Z(s, t):
    return sech_limit(s, t)


def spectral_density(lam):
    """``sech(pi lambda)``, the Fourier density of ``cov_Z``."""
    a = np.abs(np.asarray(lam, dtype=np.float64)) * math.pi
    e = np.exp(-a)
    out = 2.0 * e / (1.0 + e * e)
    return float(out) if np.ndim(lam) == 0 else out


def covariance_matrix(grid: ProcessGrid) -> np.ndarray:
    t = grid.points
    return np.asarray(cov_Z(t[:, None], t[None, :]))


@lru_cache(maxsize=8)
def _factor_cached(key: bytes, size: int):
    t = np.frombuffer(key, dtype=np.float64)
    c = np.asarray(cov_Z(t[:, None], t[None, :]))
    eye = np.eye(size)
    for j in JITTERS:
        try:
            return np.linalg.cholesky(c + j * eye), f"cholesky(jitter={j:g})"
        except np.linalg.LinAlgError:
            continue
    # the smooth kernel is numerically rank deficient on fine grids
    w, v = np.linalg.eigh(c)
    if w.min() < -1e-10 * max(1.0, w.max()):
        raise NumericError(f"covariance has eigenvalue {w.min():.3g}; not PSD")
    return v * np.sqrt(np.clip(w, 0.0, None)), "eigh"


def covariance_factor(grid: ProcessGrid) -> tuple[np.ndarray, str]:
    """``L`` with ``L L^T`` equal to the grid covariance (up to <= 1e-10 jitter)."""
    if len(grid) > MAX_DENSE:
        raise ParameterError(f"grid of {len(grid)} points exceeds the dense budget {MAX_DENSE}")
    L, how = _factor_cached(grid.points.tobytes(), len(grid))
    return L, how


def sample_path_covariance(grid: ProcessGrid, seed: SeedSpec, paths: int = 1) -> ProcessSample:
    """Exact-in-law paths from a factor of the covariance matrix."""
    if paths < 1:
        raise ParameterError("paths must be >= 1")
    L, how = covariance_factor(grid)
    w = seed.generator().standard_normal((paths, L.shape[1]))
    return ProcessSample(grid, w @ L.T, seed, "covariance_factor", {"factor": how})


def kernel_u_grid(t: np.ndarray, du: float | None = None, u_max: float | None = None):
    """Midpoints and widths of the Ito-sum cells.

    The u axis is cut into blocks ending at ``20 e^(t_k)``. Inside block
    ``k`` only curves with ``t >= t_k`` are still of size ``> e^(-20)``,
    so the step can grow to ``du * e^(t_k - t_min)`` without breaking
    ``e^(-t) du_block <= e^(-t_min) du`` for the curves that matter.
    """
    ts = np.unique(t)
    if du is None:
        du = 1e-2 * math.exp(ts[0])
    if u_max is None:
        u_max = 20.0 * math.exp(ts[-1])
    if not du > 0 or not u_max > 0:
        raise ParameterError("du and u_max must be positive")
    if math.exp(-ts[0]) * du > 1e-2 * (1 + 1e-12):
        raise ParameterError("du too coarse: need e^(-t) du <= 1e-2 on the grid")
    if u_max < 20.0 * math.exp(ts[-1]) * (1 - 1e-12):
        raise ParameterError("u_max too small: need u_max >= 20 e^(max t)")
    ends = np.minimum(20.0 * np.exp(ts), u_max)
    ends[-1] = u_max
    mids = []
    widths = []
    lo = 0.0
    for k, hi in enumerate(ends):
        if hi <= lo:
            continue
        h = du * math.exp(ts[k] - ts[0])
        cnt = max(1, int(math.ceil((hi - lo) / h)))
        edges = np.linspace(lo, hi, cnt + 1)
        mids.append(0.5 * (edges[1:] + edges[:-1]))
        widths.append(np.diff(edges))
        lo = hi
    return np.concatenate(mids), np.concatenate(widths)


def sample_path_kernel(grid: ProcessGrid, seed: SeedSpec, du: float | None = None,
                       u_max: float | None = None, paths: int = 1,
                       batch: int = 1024) -> ProcessSample:
    """Riemann-Ito discretization of the white-noise representation.

    Raises :class:`NumericError` if the discretized variance at any grid
    point is off from 1 by more than ``1e-3``.
    """
    t = grid.points
    u, w = kernel_u_grid(t, du, u_max)
    # weights[i, j] = sqrt(2) e^{-t_i/2} h_{t_i}(u_j)
    K = math.sqrt(2.0) * np.exp(-0.5 * t)[:, None] * np.exp(-np.exp(-t)[:, None] * u[None, :])
    var = (K * K) @ w
    worst = float(np.max(np.abs(var - 1.0)))
    if worst > 1e-3:
        raise NumericError(f"kernel discretization variance off by {worst:.3g}")
    Kw = (K * np.sqrt(w)[None, :]).T.copy()
    rng = seed.generator()
    out = np.empty((paths, t.size))
    for start in range(0, paths, batch):
        stop = min(paths, start + batch)
        z = rng.standard_normal((stop - start, u.size))
        out[start:stop] = z @ Kw
    return ProcessSample(grid, out, seed, "kernel_discretized",
                         {"u_cells": int(u.size), "max_variance_error": worst})


def expected_zeros(a: float, b: float) -> float:
    """Mean number of zeros of Z on [a, b]."""
    if a > b:
        raise ParameterError("need a <= b")
    return (b - a) / (2.0 * math.pi)


def derivative_moments() -> dict:
    """``Var Z'`` and ``Var Z''`` from the Taylor series of ``sech(t/2)``.

    ``sech z = sum_k E_2k z^(2k) / (2k)!`` with Euler numbers ``E_2k``,
    so ``r^(2k)(0) = E_2k / 4^k``.
    """
    e = special.euler(4)
    r2 = e[2] / 4.0
    r4 = e[4] / 16.0
    return {"var_Z1": float(-r2), "var_Z2": float(r4)}


def rice_zero_intensity() -> float:
    """Mean zeros per unit time from the stationary Rice formula."""
    return math.sqrt(derivative_moments()["var_Z1"]) / math.pi


def count_zeros(values) -> int | np.ndarray:
    """Sign changes along a path, or along each row of a 2-d array."""
    v = np.asarray(values, dtype=np.float64)
    if v.ndim == 1:
        return sign_changes(v)
    s = np.sign(v)
    return np.count_nonzero(s[:, :-1] * s[:, 1:] < 0, axis=1)
