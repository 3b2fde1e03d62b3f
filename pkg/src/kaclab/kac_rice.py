"""Gaussian real-root density of Kac polynomials and expected counts.

With ``u = -log x`` and ``N = n + 1`` the density on (0, 1) reads

    rho(x) = (e^u / 2 pi) * sqrt(csch^2 u - N^2 csch^2(N u)),

which is what we evaluate for ``x >= 1/2``. As ``N u -> 0`` the two terms
under the root cancel, so there we switch to the Laurent series of
``csch^2`` and subtract term by term; the limit at ``x = 1`` is
``sqrt(n (n + 2) / 12) / pi``. Other parts of the real line follow from
``rho(-x) = rho(x)`` and ``rho(x) = rho(1/x) / x^2``.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .errors import ParameterError, QuadratureError
from .kac_poly import Region

QUAD_TOL = 1e-6
SPLIT_X = 0.9
SERIES_CUTOFF = 0.5  # use the series when N u is below this
_MAX_EVALS = 10**6


def _csch2_coeffs(terms: int = 16) -> np.ndarray:
    """``a_k`` with ``csch^2 z = 1/z^2 + sum_k a_k z^(2k)``."""
    b = special.bernoulli(2 * terms + 2)
    out = np.empty(terms)
    for k in range(1, terms + 1):
        out[k - 1] = -(2.0 ** (2 * k)) * b[2 * k] * (2 * k - 1) / math.factorial(2 * k)
    return out


_A = _csch2_coeffs()


def _csch2(z):
    # 4 e^{-2z} / (1 - e^{-2z})^2, safe for large z
    e = np.exp(-2.0 * z)
    return 4.0 * e / np.expm1(-2.0 * z) ** 2


def _gap_series(u, N):
    """``csch^2 u - N^2 csch^2(N u)`` for small ``N u``."""
    u2 = u * u
    out = np.zeros_like(u)
    pw = np.ones_like(u)
    n2 = float(N) * float(N)
    npow = n2  # N^(2k+2)
    for a in _A:
        out += a * pw * (1.0 - npow)
        pw = pw * u2
        npow *= n2
    return out


def _rho_unit(n: int, x: np.ndarray) -> np.ndarray:
    """Density on [0, 1]."""
    N = n + 1
    out = np.empty_like(x)
    lo = x < 0.5
    if np.any(lo):
        xl = x[lo]
        a = 1.0 / (1.0 - xl * xl)
        b = N * xl**n / (1.0 - xl ** (2 * N))
        out[lo] = np.sqrt(np.maximum((a - b) * (a + b), 0.0)) / math.pi
    hi = ~lo
    if np.any(hi):
        u = -np.log(x[hi])
        gap = np.empty_like(u)
        small = N * u < SERIES_CUTOFF
        gap[small] = _gap_series(u[small], N)
        big = ~small
        ub = u[big]
        gap[big] = _csch2(ub) - N * N * _csch2(N * ub)
        out[hi] = np.exp(u) / (2.0 * math.pi) * np.sqrt(np.maximum(gap, 0.0))
    return out


def density_rho1(n: int, x):
    """Expected number of real roots per unit length at ``x`` (Gaussian law).

    Defined on the whole real line; ``+-inf`` map to 0. Scalars in,
    scalars out.
    """
    if n < 1:
        raise ParameterError("density needs degree n >= 1")
    xs = np.asarray(x, dtype=np.float64)
    flat = np.abs(np.atleast_1d(xs).ravel())
    if np.any(np.isnan(flat)):
        raise ParameterError("x must not be NaN")
    out = np.zeros_like(flat)
    inner = flat <= 1.0
    out[inner] = _rho_unit(n, flat[inner])
    outer = (flat > 1.0) & np.isfinite(flat)
    if np.any(outer):
        y = 1.0 / flat[outer]
        out[outer] = y * y * _rho_unit(n, y)
    if xs.ndim == 0:
        return float(out[0])
    return out.reshape(xs.shape)


@dataclass(frozen=True)
class DensityProfile:
    n: int
    grid: np.ndarray
    values: np.ndarray

    @classmethod
    def on_grid(cls, n: int, grid) -> "DensityProfile":
        g = np.asarray(grid, dtype=np.float64)
        return cls(n, g, density_rho1(n, g))

    @classmethod
    def default(cls, n: int, points: int = 512) -> "DensityProfile":
        """``points`` samples of [0, 1]: uniform in ``-log(1 - x)``, last one at 1."""
        if points < 2:
            raise ParameterError("need at least two points")
        s = np.linspace(0.0, math.log(n + 1) + 3.0, points - 1)
        g = np.append(-np.expm1(-s), 1.0)
        return cls.on_grid(n, g)

    def to_csv(self, fh=None) -> str | None:
        buf = io.StringIO() if fh is None else fh
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["x", "rho1"])
        for x, v in zip(self.grid, self.values):
            w.writerow([repr(float(x)), repr(float(v))])
        return buf.getvalue() if fh is None else None


def _quad(f, a, b, points=None):
    limit = 2000
    with np.errstate(all="ignore"):
        val, err, info = integrate.quad(f, a, b, epsabs=1e-10, epsrel=1e-10,
                                        limit=limit, points=points, full_output=1)[:3]
    return val, err, info["neval"]


def _count_unit(n: int, a: float, b: float) -> tuple[float, float, int]:
    """Integral of rho over [a, b] within [0, 1]; returns (value, abserr, evals)."""
    total = err = 0.0
    evals = 0
    rho = lambda x: float(_rho_unit(n, np.array([x]))[0])
    if a < SPLIT_X:
        v, e, k = _quad(rho, a, min(b, SPLIT_X))
        total, err, evals = total + v, err + e, evals + k
    if b > SPLIT_X:
        # s = -log(1 - x): the 1/(1 - x) spike becomes a plateau
        sa = -math.log1p(-max(a, SPLIT_X))
        s_end = math.log(n + 1) + 40.0
        sb = s_end if b >= 1.0 else min(-math.log1p(-b), s_end)
        g = lambda s: float(_rho_unit(n, np.array([-math.expm1(-s)]))[0]) * math.exp(-s)
        knees = [p for p in (math.log(n + 1) - 2, math.log(n + 1), math.log(n + 1) + 2)
                 if sa < p < sb]
        if sb > sa:
            v, e, k = _quad(g, sa, sb, knees or None)
            total, err, evals = total + v, err + e, evals + k
    return total, err, evals


def expected_count(n: int, interval) -> float:
    """Expected number of real roots of a degree-``n`` Gaussian Kac polynomial.

    ``interval`` may be any ``[a, b]`` with ``a <= b`` on the extended real
    line; pieces outside [0, 1] are folded back by symmetry. Raises
    :class:`QuadratureError` (carrying the estimate) if the absolute
    error bound exceeds ``1e-6``.
    """
    a, b = float(interval[0]), float(interval[1])
    if math.isnan(a) or math.isnan(b) or a > b:
        raise ParameterError(f"need a <= b, got [{a}, {b}]")
    if n < 1:
        raise ParameterError("need degree n >= 1")
    pieces = []  # sub-intervals of [0, 1]
    for lo, hi, sgn in ((a, min(b, 0.0), -1), (max(a, 0.0), b, 1)):
        if lo >= hi:
            continue
        if sgn < 0:
            lo, hi = -hi, -lo
        if lo < 1.0:
            pieces.append((lo, min(hi, 1.0)))
        if hi > 1.0:
            pieces.append((1.0 / hi if math.isfinite(hi) else 0.0, 1.0 / max(lo, 1.0)))
    total = err = 0.0
    evals = 0
    for lo, hi in pieces:
        if hi > lo:
            v, e, k = _count_unit(n, lo, hi)
            total, err, evals = total + v, err + e, evals + k
    if err > QUAD_TOL or evals > _MAX_EVALS:
        raise QuadratureError(f"quadrature error bound {err:.3g} above {QUAD_TOL}",
                              estimate=total, abserr=err)
    return total


def expected_count_region(n: int, r: Region) -> float:
    return expected_count(n, r.bounds)


def expected_count_real_line(n: int) -> float:
    """Sum of the four region counts."""
    return sum(expected_count_region(n, r) for r in Region)
