"""Kac polynomials and their closed-form second moments.

For i.i.d. unit-variance coefficients the variance of f_n(y) is the
geometric sum ``V(y) = sum_i y^(2i)`` and the covariance of f_n(x) and
f_n(y) is ``sum_i (xy)^i``. Both are evaluated through
``expm1(N log|q|) / expm1(log|q|)``, which stays accurate as ``q -> 1``
where the textbook ``(1 - q^N) / (1 - q)`` loses every digit.
"""
from __future__ import annotations

import csv
import enum
import io
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import _kernels
from .errors import DomainError, ParameterError


class Region(enum.Enum):
    """The four pieces of the real line, glued at -1, 0 and 1.

    Boundary points are attributed as follows: 0 and 1 belong to
    ``UNIT_POS``, -1 belongs to ``UNIT_NEG``; the outer regions are open
    at +-1.
    """

    UNIT_POS = "unit+"
    UNIT_NEG = "unit-"
    OUTER_POS = "outer+"
    OUTER_NEG = "outer-"

    @classmethod
    def parse(cls, text: str) -> "Region":
        aliases = {
            "unit_pos": cls.UNIT_POS, "unit_neg": cls.UNIT_NEG,
            "outer_pos": cls.OUTER_POS, "outer_neg": cls.OUTER_NEG,
        }
        text = text.strip().lower()
        if text in aliases:
            return aliases[text]
        try:
            return cls(text)
        except ValueError:
            raise ParameterError(f"unknown region {text!r}") from None

    @property
    def bounds(self) -> tuple[float, float]:
        return {
            Region.UNIT_POS: (0.0, 1.0),
            Region.UNIT_NEG: (-1.0, 0.0),
            Region.OUTER_POS: (1.0, math.inf),
            Region.OUTER_NEG: (-math.inf, -1.0),
        }[self]


class KacPolynomial:
    """Real polynomial ``sum_i c_i x^i`` stored by ascending powers.

    The coefficient array is copied and frozen, so instances can be shared
    freely between threads.
    """

    __slots__ = ("_c", "__dict__")

    def __init__(self, coefficients):
        c = np.array(coefficients, dtype=np.float64).ravel()
        if c.size == 0:
            raise ParameterError("a polynomial needs at least one coefficient")
        if not np.all(np.isfinite(c)):
            raise ParameterError("coefficients must be finite")
        c.setflags(write=False)
        self._c = c

    @property
    def coefficients(self) -> np.ndarray:
        return self._c

    @property
    def degree(self) -> int:
        return self._c.size - 1

    @cached_property
    def abs_coefficients(self) -> np.ndarray:
        a = np.abs(self._c)
        a.setflags(write=False)
        return a

    def __call__(self, x):
        return evaluate(self, x)

    def __len__(self):
        return self._c.size

    def __eq__(self, other):
        if not isinstance(other, KacPolynomial):
            return NotImplemented
        return np.array_equal(self._c, other._c)

    def __hash__(self):
        return hash(self._c.tobytes())

    def __repr__(self):
        if self._c.size <= 6:
            return f"KacPolynomial({self._c.tolist()})"
        return f"KacPolynomial(degree={self.degree})"

    def is_zero(self) -> bool:
        return not np.any(self._c)

    # serialization: CSV with header ``i,coeff``
    def to_csv(self, fh=None) -> str | None:
        buf = io.StringIO() if fh is None else fh
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["i", "coeff"])
        for i, v in enumerate(self._c):
            w.writerow([i, repr(float(v))])
        return buf.getvalue() if fh is None else None

    @classmethod
    def from_csv(cls, source) -> "KacPolynomial":
        text = source.read() if hasattr(source, "read") else str(source)
        rows = list(csv.reader(io.StringIO(text)))
        if not rows or [h.strip() for h in rows[0]] != ["i", "coeff"]:
            raise ParameterError("polynomial CSV must start with header 'i,coeff'")
        body = [r for r in rows[1:] if r]
        idx = [int(r[0]) for r in body]
        if idx != list(range(len(idx))):
            raise ParameterError("polynomial CSV rows must be index ordered from 0")
        return cls([float(r[1]) for r in body])


@dataclass(frozen=True)
class BulkParams:
    """Parameters of the bulk interval ``I = [1 - 1/m, 1 - ell/n]``.

    ``beta`` and ``big_a`` are the constants in the growth conditions
    ``m * ell <= n^(1 - beta)`` and ``m >= (log n)^A``; the theory leaves
    them free, the defaults are ours.
    """

    n: int
    m: float
    ell: float
    beta: float = 0.25
    big_a: float = 0.5

    def __post_init__(self):
        if self.n < 2:
            raise ParameterError("bulk parameters need n >= 2")
        if self.m < 2 or self.ell < 1:
            raise ParameterError("need m >= 2 and ell >= 1")
        if self.beta <= 0:
            raise ParameterError("beta must be positive")

    @classmethod
    def typical(cls, n: int, alpha: float = 0.25, c: float = 3.0, **kw) -> "BulkParams":
        """``m = n^alpha`` and ``ell = c log n``."""
        return cls(n, max(2.0, n**alpha), max(1.0, c * math.log(n)), **kw)

    def conditions(self) -> dict:
        log_n = math.log(self.n)
        return {
            "ml1": self.m * self.ell <= self.n ** (1 - self.beta),
            "ml2": self.m >= log_n**self.big_a,
            "ml3": self.ell >= 3 * log_n,
            "nonempty": self.m <= self.n / self.ell,
        }

    def valid(self) -> bool:
        return all(self.conditions().values())

    def interval(self) -> tuple[float, float]:
        if not self.conditions()["nonempty"]:
            raise ParameterError(f"bulk interval is empty: m={self.m} > n/ell")
        return 1.0 - 1.0 / self.m, 1.0 - self.ell / self.n

    @property
    def log_interval(self) -> tuple[float, float]:
        """The bulk interval in ``s = -log(1 - x)`` coordinates."""
        return math.log(self.m), math.log(self.n / self.ell)


def evaluate(p: KacPolynomial, x):
    """Compensated Horner evaluation; accepts scalars or arrays."""
    xs = np.asarray(x, dtype=np.float64)
    out = _kernels.comp_horner(p.coefficients, np.atleast_1d(xs).ravel())
    if xs.ndim == 0:
        return float(out[0])
    return out.reshape(xs.shape)


def derivative(p: KacPolynomial, order: int = 1) -> KacPolynomial:
    if order < 0:
        raise ParameterError("derivative order must be non-negative")
    n = p.degree
    if order == 0:
        return p
    if order > n:
        return KacPolynomial([0.0])
    i = np.arange(order, n + 1, dtype=np.float64)
    falling = np.ones_like(i)
    for k in range(order):
        falling *= i - k
    return KacPolynomial(p.coefficients[order:] * falling)


def _geom(count, log_abs_q, sign):
    """``sum_{i<count} q^i`` from ``log|q|`` and ``sign(q)`` (arrays)."""
    count = np.asarray(count, dtype=np.float64)
    L = np.asarray(log_abs_q, dtype=np.float64)
    sign = np.asarray(sign, dtype=np.float64)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        pos = np.expm1(count * L) / np.expm1(L)
        even = np.mod(count, 2) == 0
        qn = np.exp(count * L)  # |q|^count
        num = np.where(even, -np.expm1(count * L), 1.0 + qn)
        neg = num / (1.0 + np.exp(L))
        out = np.where(sign > 0, pos, neg)
        out = np.where(L == 0.0, np.where(sign > 0, count, np.where(even, 0.0, 1.0)), out)
        out = np.where((sign == 0) | np.isneginf(L), 1.0, out)
    return out


def _as_result(val, *inputs):
    if all(np.ndim(v) == 0 for v in inputs):
        return float(val)
    return val


def variance_at(n: int, y):
    """``Var f_n(y) = sum_{i=0}^n y^(2i)`` for unit-variance coefficients."""
    y = np.asarray(y, dtype=np.float64)
    with np.errstate(divide="ignore"):
        L = 2.0 * np.log(np.abs(y))
    return _as_result(_geom(n + 1, L, 1.0), y)


def covariance_cn(n: int, x, y):
    """Normalized covariance of ``f_n(x)`` and ``f_n(y)`` (exact sums)."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if np.any(np.abs(x) >= 1) or np.any(np.abs(y) >= 1):
        raise DomainError("covariance_cn needs x, y in (-1, 1)")
    with np.errstate(divide="ignore"):
        lx = np.log(np.abs(x))
        ly = np.log(np.abs(y))
    cross = _geom(n + 1, lx + ly, np.sign(x) * np.sign(y))
    vx = _geom(n + 1, 2.0 * lx, 1.0)
    vy = _geom(n + 1, 2.0 * ly, 1.0)
    out = np.clip(cross / np.sqrt(vx * vy), -1.0, 1.0)
    out = np.where(x == y, 1.0, out)
    return _as_result(out, x, y)


def g_factor(x, y):
    """``G(x, y) = (1 - xy) / sqrt((1 - x^2)(1 - y^2))`` on (-1, 1)^2."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if np.any(np.abs(x) >= 1) or np.any(np.abs(y) >= 1):
        raise DomainError("g_factor needs |x| < 1 and |y| < 1")
    out = (1.0 - x * y) / np.sqrt((1.0 - x * x) * (1.0 - y * y))
    out = np.where(x == y, 1.0, out)
    return _as_result(out, x, y)


def covariance_cn_textbook(n: int, x, y):
    """The textbook form ``G(x^n, y^n) / G(x, y)``.

    Differs from :func:`covariance_cn` by ``O(y^(2n))`` because the exact
    sums run to power ``n + 1``.
    """
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    return _as_result(g_factor(x**n, y**n) / g_factor(x, y), x, y)


def sech_limit(s, t):
    """``sech((t - s) / 2)``, the bulk limit of ``covariance_cn``."""
    d = 0.5 * np.abs(np.asarray(t, dtype=np.float64) - np.asarray(s, dtype=np.float64))
    e = np.exp(-d)
    return _as_result(2.0 * e / (1.0 + e * e), s, t)


def map_region(p: KacPolynomial, r: Region) -> KacPolynomial:
    """Polynomial whose roots in [0, 1] mirror the roots of ``p`` in ``r``.

    ``x -> -x`` flips odd coefficients and ``x -> 1/x`` (times ``x^n``)
    reverses them.
    """
    c = p.coefficients
    if r is Region.UNIT_POS:
        return p
    flipped = c.copy()
    flipped[1::2] *= -1.0
    if r is Region.UNIT_NEG:
        return KacPolynomial(flipped)
    if r is Region.OUTER_POS:
        return KacPolynomial(c[::-1])
    return KacPolynomial(flipped[::-1])
