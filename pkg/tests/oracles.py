"""Independent reference counters used only by the tests.

Neither routine shares code with the package's counting engine: one is a
dense-grid sign scan with bisection at hidden extrema, the other exact
Sturm sequences over the rationals.
"""
from fractions import Fraction

import numpy as np

EPS = np.finfo(float).eps


def _exact_value(c, x):
    xf = Fraction(float(x))
    acc = Fraction(0)
    for v in reversed(c):
        acc = acc * xf + Fraction(float(v))
    return acc


def _signs(c, xs):
    """Signs of sum c_i x^i on ``xs``; exact arithmetic where floats are unsure."""
    c = np.asarray(c, dtype=float)
    n = c.size - 1
    vals = np.polynomial.polynomial.polyval(xs, c)
    bound = np.polynomial.polynomial.polyval(np.abs(xs), np.abs(c)) * (4 * n + 4) * EPS
    s = np.sign(vals).astype(int)
    for k in np.nonzero(np.abs(vals) <= bound)[0]:
        v = _exact_value(c, xs[k])
        s[k] = (v > 0) - (v < 0)
    return s


def grid_count(c, a, b, points=1 << 16, refine=60):
    """Distinct real roots of ``sum c_i x^i`` in closed ``[a, b]``.

    Counts sign changes and exact zeros on a uniform grid. Cells where f'
    changes sign but f does not are bisected on f' to the extremum; an
    opposite sign there reveals a hidden pair of roots.
    """
    c = np.trim_zeros(np.asarray(c, dtype=float), "b")
    if c.size <= 1:
        if c.size == 0:
            raise ValueError("zero polynomial")
        return 0
    xs = np.linspace(a, b, points)
    s = _signs(c, xs)
    count = int(np.count_nonzero(s == 0))
    nz = (s[:-1] != 0) & (s[1:] != 0)
    count += int(np.count_nonzero(nz & (s[:-1] != s[1:])))
    d = np.polynomial.polynomial.polyder(c)
    if d.size == 0 or not np.any(d):
        return count
    ds = np.sign(np.polynomial.polynomial.polyval(xs, d))
    cand = np.nonzero(nz & (s[:-1] == s[1:]) & (ds[:-1] * ds[1:] < 0))[0]
    if cand.size == 0:
        return count
    lo = xs[cand].copy()
    hi = xs[cand + 1].copy()
    slo = ds[cand]
    for _ in range(refine):
        mid = 0.5 * (lo + hi)
        sm = np.sign(np.polynomial.polynomial.polyval(mid, d))
        left = sm == slo
        lo = np.where(left, mid, lo)
        hi = np.where(left, hi, mid)
    ext = _signs(c, 0.5 * (lo + hi))
    side = s[cand]
    count += int(np.count_nonzero(ext == -side)) * 2
    count += int(np.count_nonzero(ext == 0))
    return count


# ---------------------------------------------------------------- Sturm

def _trim(p):
    while p and p[-1] == 0:
        p.pop()
    return p


def _rem(a, b):
    a = list(a)
    while len(a) >= len(b) and a:
        f = a[-1] / b[-1]
        shift = len(a) - len(b)
        for i, v in enumerate(b):
            a[shift + i] -= f * v
        a.pop()
        _trim(a)
    return a


def _div(a, b):
    a = list(a)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(a) >= len(b) and a:
        f = a[-1] / b[-1]
        shift = len(a) - len(b)
        q[shift] = f
        for i, v in enumerate(b):
            a[shift + i] -= f * v
        a.pop()
        _trim(a)
    return q


def _gcd(a, b):
    while b:
        a, b = b, _rem(a, b)
    return a


def _deriv(p):
    return [i * v for i, v in enumerate(p)][1:]


def _val(p, x):
    acc = Fraction(0)
    for v in reversed(p):
        acc = acc * x + v
    return acc


def _variations(seq, x):
    vals = [_val(p, x) for p in seq]
    vals = [v for v in vals if v != 0]
    return sum(1 for u, v in zip(vals, vals[1:]) if (u > 0) != (v > 0))


def sturm_count(c, a, b):
    """Exact number of distinct real roots in closed ``[a, b]``."""
    p = _trim([Fraction(v) for v in c])
    if len(p) <= 1:
        return 0
    g = _gcd(p, _deriv(p))
    if len(g) > 1:
        p = _trim(_div(p, g))
    seq = [p, _deriv(p)]
    while True:
        r = _rem(seq[-2], seq[-1])
        if not r:
            break
        seq.append([-v for v in r])
    a, b = Fraction(a), Fraction(b)
    return _variations(seq, a) - _variations(seq, b) + (1 if _val(p, a) == 0 else 0)
