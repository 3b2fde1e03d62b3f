"""Counting real roots: certified counts, grid sign changes, Jensen bounds.

Certified counting runs in two stages. A compiled pass splits the
interval into cells and proves, with rigorous floating-point error
bounds, that each cell is root free or that ``f'`` keeps one sign on it
(so it holds at most one root, detected by a certified sign change).
Whatever that pass cannot settle within the depth budget goes to exact
Descartes bisection on integer polynomials. Low-degree inputs that still
have unsettled cells are recounted exactly after reduction to their
square-free part.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import _exact, _kernels
from .errors import ParameterError, UndefinedBoundError
from .kac_poly import KacPolynomial, Region, map_region

DEFAULT_DEPTH = 60
EXACT_DEGREE = 32
EXACT_FALLBACK_DEGREE = 400
ISOLATION_WIDTH = 1e-9
JENSEN_RATIO = 0.05  # sampling density d pi / K at which refinement may stop
JENSEN_WORK = 1 << 22  # below d * K of this, keep refining anyway


@dataclass
class RootCountResult:
    """Outcome of a root count on one interval.

    The true number of distinct roots lies in
    ``[certified_count, certified_count + sum(capacities)]``;
    ``capacities[i]`` bounds the roots hidden in ``uncertain_cells[i]``.
    """

    certified_count: int
    uncertain_cells: list = field(default_factory=list)
    method: str = "certified"
    capacities: list = field(default_factory=list)
    isolating: list | None = None

    @property
    def exact(self) -> bool:
        return not self.uncertain_cells

    @property
    def upper_bound(self) -> int:
        return self.certified_count + int(sum(self.capacities))

    def roots(self) -> list[float]:
        """Midpoints of the isolating intervals (when they were kept)."""
        if self.isolating is None:
            raise ParameterError("count was run without isolate=True")
        return [0.5 * (a + b) for a, b in self.isolating]


@dataclass(frozen=True)
class PartitionSpec:
    """Uniform grid ``s_k = log m + k delta`` in ``s = -log(1 - x)``.

    ``x_k = 1 - exp(-s_k)`` runs through the bulk interval
    ``[1 - 1/m, 1 - ell/n]``.
    """

    m: float
    ell: float
    n: int
    delta: float
    s: np.ndarray = field(repr=False, compare=False)
    x: np.ndarray = field(repr=False, compare=False)

    @classmethod
    def build(cls, m, ell, n, delta=None, count=None) -> "PartitionSpec":
        """Grid on the bulk interval; ``delta`` defaults to ``m^(-1/6)``.

        Without ``count`` the grid holds every ``s_k <= log(n / ell)``.
        With ``count`` exactly ``count + 1`` points are laid down,
        whatever the bulk end.
        """
        if m < 1 or ell <= 0 or n < 1:
            raise ParameterError("need m >= 1, ell > 0, n >= 1")
        if delta is None:
            delta = m ** (-1.0 / 6.0)
        if not delta > 0:
            raise ParameterError("delta must be positive")
        s0 = math.log(m)
        if count is None:
            span = math.log(n / ell) - s0
            count = int(math.floor(span / delta + 1e-9))
        if count < 1:
            raise ParameterError("partition has fewer than two points")
        s = s0 + delta * np.arange(count + 1)
        x = -np.expm1(-s)
        if np.any(np.diff(x) <= 0) or x[-1] >= 1.0:
            raise ParameterError("grid is too fine to resolve in double precision")
        s.setflags(write=False)
        x.setflags(write=False)
        return cls(float(m), float(ell), int(n), float(delta), s, x)

    @property
    def T(self) -> int:
        return self.s.size - 1


# ------------------------------------------------------------------ helpers

class _Signs:
    """Certified signs of one polynomial, exact arithmetic on demand."""

    def __init__(self, c: np.ndarray):
        self.c = np.ascontiguousarray(c, dtype=np.float64)
        self.ca = np.abs(self.c)
        self._ints = None

    @property
    def ints(self):
        if self._ints is None:
            self._ints = _exact.int_poly(self.c)
        return self._ints

    def __call__(self, xs) -> np.ndarray:
        xs = np.ascontiguousarray(xs, dtype=np.float64)
        out = _kernels.certified_signs(self.c, self.ca, xs)
        for j in np.flatnonzero(out == 2):
            out[j] = _exact.exact_sign(self.ints, Fraction(float(xs[j])))
        return out

    def sign(self, x: float) -> int:
        return int(self(np.array([x]))[0])


def _initial_breaks(a: float, b: float, n: int) -> np.ndarray:
    if b > 1.0:
        return np.linspace(a, b, 17)
    ua = -math.log1p(-a)
    ub = math.inf if b == 1.0 else -math.log1p(-b)
    ucap = math.log(8.0 * (n + 1))
    top = min(ub, ucap)
    if top - ua < 0.25:
        return np.array([a, b])
    k = int(math.ceil((top - ua) / 0.25))
    xs = -np.expm1(-np.linspace(ua, top, k + 1))
    xs[0] = a
    if ub <= ucap:
        xs[-1] = b
    else:
        xs = np.append(xs, b)
    xs = np.unique(np.clip(xs, a, b))
    return xs


def _exact_open_cell(signs: _Signs, a: float, b: float, depth: int):
    """Exact Descartes count of the open cell ``(a, b)``."""
    count, iso, unc = _exact.count_closed(signs.ints, a, b, depth, squarefree=False)
    fa = Fraction(a)
    fb = Fraction(b)
    kept = [(lo, hi) for lo, hi in iso if not (lo == hi and lo in (fa, fb))]
    count -= len(iso) - len(kept)
    return count, kept, unc


def _count_fast(signs: _Signs, a: float, b: float, depth: int, isolate: bool,
                width: float):
    """Closed-interval count on ``[a, b]`` with ``0 <= a < b``."""
    c, ca = signs.c, signs.ca
    n = c.size - 1
    breaks = _initial_breaks(a, b, n)
    ma, mb, ua, ub, _ = _kernels.isolate_cells(c, ca, breaks, depth)
    pts = np.unique(np.concatenate(([a, b], ma, mb, ua, ub)))
    sg = signs(pts)
    sign_of = dict(zip(pts.tolist(), sg.tolist()))
    count = 0
    iso = []
    for lo, hi in zip(ma.tolist(), mb.tolist()):
        sl, sh = sign_of[lo], sign_of[hi]
        if sl * sh == -1:
            count += 1
            if isolate:
                iso.append(_kernels.refine_root(c, ca, lo, hi, sl, width))
    zeros = [p for p, s in sign_of.items() if s == 0]
    count += len(zeros)
    iso.extend((p, p) for p in zeros)
    uncertain = []
    capacities = []
    for lo, hi in zip(ua.tolist(), ub.tolist()):
        if n <= EXACT_FALLBACK_DEGREE:
            k, kiso, kunc = _exact_open_cell(signs, lo, hi, depth)
            count += k
            iso.extend((float(x), float(y)) for x, y in kiso)
            for x, y, v in kunc:
                uncertain.append((float(x), float(y)))
                capacities.append(int(v))
        else:
            uncertain.append((lo, hi))
            capacities.append(n)
    return count, iso, uncertain, capacities


def _count_nonneg(signs: _Signs, a: float, b: float, depth, isolate, width):
    n = signs.c.size - 1
    if b <= 1.0 or n * math.log(b) < 600.0:
        return _count_fast(signs, a, b, depth, isolate, width)
    # large |x|: count [a, 1] directly and the rest through x -> 1/x
    parts = []
    if a < 1.0:
        parts.append(_count_fast(signs, a, 1.0, depth, isolate, width))
        a = 1.0
    inv_hi = 1.0 / a
    inv_lo = 1.0 / b
    if Fraction(inv_lo) * Fraction(b) == 1 and Fraction(inv_hi) * Fraction(a) == 1:
        rev = _Signs(signs.c[::-1])
        k, iso, unc, cap = _count_fast(rev, inv_lo, inv_hi, depth, isolate, width)
        iso = [(1.0 / y if y else math.inf, 1.0 / x if x else math.inf) for x, y in iso]
        unc = [(1.0 / y, 1.0 / x) for x, y in unc]
        parts.append((k, iso, unc, cap))
    else:
        k, iso, unc = _exact.count_closed(signs.ints, a, b, depth, squarefree=False)
        parts.append((k, [(float(x), float(y)) for x, y in iso],
                      [(float(x), float(y)) for x, y, _ in unc], [v for *_, v in unc]))
    if len(parts) == 2 and signs.sign(1.0) == 0:
        k, iso, unc, cap = parts[1]
        parts[1] = (k - 1, [t for t in iso if t != (1.0, 1.0)], unc, cap)
    total = sum(p[0] for p in parts)
    iso = [t for p in parts for t in p[1]]
    unc = [t for p in parts for t in p[2]]
    cap = [t for p in parts for t in p[3]]
    return total, iso, unc, cap


# --------------------------------------------------------------- operations

def _count_split(c, signs: _Signs, lo, hi, depth, isolate, width):
    """Float-certified count on [lo, hi], negative part through x -> -x."""
    parts = []
    if lo < 0.0:
        neg = c.copy()
        neg[1::2] *= -1.0
        k, iso, unc, cap = _count_nonneg(_Signs(neg), max(0.0, -hi), -lo, depth, isolate, width)
        parts.append((k, [(-y, -x) for x, y in iso], [(-y, -x) for x, y in unc], cap))
    if hi > 0.0:
        parts.append(_count_nonneg(signs, max(0.0, lo), hi, depth, isolate, width))
    count = sum(q[0] for q in parts)
    if len(parts) == 2 and c[0] == 0.0:
        count -= 1  # root at 0 seen from both sides
    iso = sorted({t for q in parts for t in q[1]})
    unc = [t for q in parts for t in q[2]]
    cap = [t for q in parts for t in q[3]]
    return count, iso, unc, cap


def count_certified(p: KacPolynomial, interval, depth_budget: int = DEFAULT_DEPTH, *,
                    include_endpoints=(True, True), isolate: bool = False,
                    width: float = ISOLATION_WIDTH) -> RootCountResult:
    """Number of distinct real roots of ``p`` in ``interval``.

    The interval is closed unless ``include_endpoints`` says otherwise.
    The count is proven, never estimated: cells that cannot be settled
    within ``depth_budget`` bisections are reported in ``uncertain_cells``
    and left out of ``certified_count``. With ``isolate=True`` isolating
    intervals of width at most ``width`` are kept as well.
    """
    lo, hi = float(interval[0]), float(interval[1])
    if not lo < hi or not (math.isfinite(lo) and math.isfinite(hi)):
        raise ParameterError(f"need finite lo < hi, got [{lo}, {hi}]")
    if p.is_zero():
        raise ParameterError("the zero polynomial has no finite root count")
    c = np.trim_zeros(p.coefficients, "b")
    signs = _Signs(c)
    n = c.size - 1
    unc = None
    if n > 0:
        count, iso, unc, cap = _count_split(c, signs, lo, hi, depth_budget, isolate, width)
    if n == 0 or (unc and n <= EXACT_DEGREE):
        # low degree: redo exactly on the square-free part, which also
        # settles clusters and multiple roots the float pass cannot split
        count, iso, unc = _exact.count_closed(signs.ints, lo, hi, depth_budget)
        iso = [(float(a), float(b)) for a, b in iso]
        cap = [v for *_, v in unc]
        unc = [(float(a), float(b)) for a, b, _ in unc]
        if isolate:
            iso = [_tighten(signs, a, b, width) for a, b in iso]
    if not include_endpoints[0] and signs.sign(lo) == 0:
        count -= 1
        iso = [t for t in iso if t != (lo, lo)]
    if not include_endpoints[1] and signs.sign(hi) == 0:
        count -= 1
        iso = [t for t in iso if t != (hi, hi)]
    return RootCountResult(int(count), unc, "certified", cap,
                           sorted(iso) if isolate else None)


def _tighten(signs: _Signs, a: float, b: float, width: float):
    if a == b or b - a <= width:
        return a, b
    sa = signs.sign(a)
    while b - a > width:
        mid = 0.5 * (a + b)
        if not a < mid < b:
            break
        sm = signs.sign(mid)
        if sm == 0:
            return mid, mid
        if sm == sa:
            a = mid
        else:
            b = mid
    return a, b


def isolate_roots(p: KacPolynomial, interval, width: float = ISOLATION_WIDTH,
                  depth_budget: int = DEFAULT_DEPTH) -> RootCountResult:
    """Certified count together with isolating intervals of ``width``."""
    return count_certified(p, interval, depth_budget, isolate=True, width=width)


def count_region(p: KacPolynomial, r: Region, depth_budget: int = DEFAULT_DEPTH,
                 isolate: bool = False) -> RootCountResult:
    """Roots of ``p`` in one of the four regions of the real line.

    Counts are taken on the image in [0, 1] under :func:`map_region`.
    Root 0 and root 1 belong to ``UNIT_POS``, root -1 to ``UNIT_NEG``, so
    the four counts add up to the number of distinct real roots.
    """
    q = map_region(p, r)
    if r is Region.UNIT_POS:
        ends = (True, True)
    elif r is Region.UNIT_NEG:
        ends = (False, True)
    else:
        ends = (False, False)
    res = count_certified(q, (0.0, 1.0), depth_budget, include_endpoints=ends,
                          isolate=isolate)
    if isolate:
        back = {
            Region.UNIT_POS: lambda x: x,
            Region.UNIT_NEG: lambda x: -x,
            Region.OUTER_POS: lambda x: 1.0 / x,
            Region.OUTER_NEG: lambda x: -1.0 / x,
        }[r]
        res.isolating = sorted(tuple(sorted((back(a), back(b)))) for a, b in res.isolating)
    return res


def count_real_line(p: KacPolynomial, depth_budget: int = DEFAULT_DEPTH) -> dict:
    """Counts for each of the four regions."""
    return {r: count_region(p, r, depth_budget) for r in Region}


def grid_signs(p: KacPolynomial, xs) -> np.ndarray:
    """Certified signs of ``p`` at the points ``xs`` (0 for exact zeros)."""
    c = np.trim_zeros(p.coefficients, "b")
    if c.size == 0:
        return np.zeros(np.size(xs), dtype=np.int64)
    return _Signs(c)(np.asarray(xs, dtype=np.float64))


def sign_changes(values) -> int:
    """Adjacent pairs of strictly opposite sign; zeros break no pair."""
    v = np.sign(np.asarray(values, dtype=np.float64))
    return int(np.count_nonzero(v[:-1] * v[1:] < 0))


def count_grid_sign_changes(p: KacPolynomial, spec: PartitionSpec) -> int:
    """Sign changes of ``p`` along the partition points ``x_k``."""
    if np.any(np.abs(spec.x) >= 1.0):
        raise ParameterError("partition points must lie inside (-1, 1)")
    return sign_changes(grid_signs(p, spec.x))


def jensen_root_bound(p: KacPolynomial, center: float, r: float, R: float,
                      max_points: int = 1 << 16) -> float:
    """Upper bound on the zeros of ``p`` in the closed disk ``B(center, r)``.

    ``[log max_{B(c,R)}|p| - log max_{B(c,r)}|p|] / log((R^2 + r^2)/(2Rr))``.
    Both maxima are taken on circles (maximum principle). The outer one is
    sampled at K angles and inflated by ``1 / (1 - d pi / K)``, which by
    Bernstein's inequality for the degree-d trigonometric polynomial
    ``theta -> p(c + R e^{i theta})`` dominates the true maximum. Angles
    double from 256 until both maxima move by less than 1e-6 relative and
    ``d pi / K <= JENSEN_RATIO``, or ``max_points`` is reached. Cheap cases
    (``d K`` under ``JENSEN_WORK``) keep doubling to shrink the inflation. The inner
    maximum is only sampled, which can only increase the bound.
    """
    if not 0 < r < R:
        raise ParameterError("need 0 < r < R")
    c = np.ascontiguousarray(np.trim_zeros(p.coefficients, "b"))
    if c.size == 0:
        raise UndefinedBoundError("p vanishes identically")
    d = c.size - 1
    if d == 0:
        return 0.0
    k = 256
    big = _kernels.max_abs_on_circle(c, center, R, k)
    small = _kernels.max_abs_on_circle(c, center, r, k)
    while k < max_points:
        k2 = 2 * k
        big2 = _kernels.max_abs_on_circle(c, center, R, k2)
        small2 = _kernels.max_abs_on_circle(c, center, r, k2)
        settled = (abs(big2 - big) <= 1e-6 * big2 and abs(small2 - small) <= 1e-6 * small2)
        big, small, k = big2, small2, k2
        if settled and d * math.pi / k <= JENSEN_RATIO and 2 * d * k > JENSEN_WORK:
            break
    if small == 0.0:
        raise UndefinedBoundError("p vanishes on the inner circle")
    ratio = d * math.pi / k
    if ratio < 1.0:
        big_upper = big / (1.0 - ratio)
    else:
        big_upper = float(np.sum(np.abs(c) * (abs(center) + R) ** np.arange(d + 1)))
    return max(0.0, math.log(big_upper / small) / math.log((R * R + r * r) / (2 * R * r)))


def lacunary_subsequence(a, threshold: float) -> list[int]:
    """Greedy lacunary indices of a positive nonincreasing sequence.

    Starts at index 0 and repeatedly jumps to the first later index whose
    value is at most half the current one, until a value at or below
    ``threshold`` is reached or the sequence ends. That last index is kept.
    """
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 1 or a.size == 0:
        raise ParameterError("need a non-empty 1-d sequence")
    if np.any(a <= 0) or np.any(np.diff(a) > 0):
        raise ParameterError("sequence must be strictly positive and nonincreasing")
    if not 0 < threshold <= a[0]:
        raise ParameterError("threshold must lie in (0, a[0]]")
    out = [0]
    while a[out[-1]] > threshold:
        cur = out[-1]
        later = np.flatnonzero(a[cur + 1:] * 2.0 <= a[cur])
        if later.size == 0:
            break
        out.append(cur + 1 + int(later[0]))
    return out


# ---------------------------------------------------------------- CSV export

def roots_to_csv(rows, fh=None) -> str | None:
    """Write ``sample_id,root`` rows; ``root`` may be ``None`` for rootless samples."""
    buf = io.StringIO() if fh is None else fh
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["sample_id", "root"])
    for sid, root in rows:
        w.writerow([sid, "" if root is None else repr(float(root))])
    return buf.getvalue() if fh is None else None
