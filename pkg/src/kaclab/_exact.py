"""Exact Descartes bisection over the integers.

Float coefficients are dyadic rationals, so after scaling by a common power
of two every polynomial here has integer coefficients and every subdivision
point is a dyadic rational. Sign variations of
``(x + 1)^n Q(1 / (x + 1))`` bound the number of roots of ``Q`` in the open
unit interval (Descartes); zero or one variation is exact.
"""
from __future__ import annotations

from fractions import Fraction
from math import gcd

__all__ = [
    "int_poly", "sqf_part", "count_open_unit", "count_closed", "exact_sign",
]


def int_poly(coeffs) -> list[int]:
    """Integer polynomial with the same roots as the float ``coeffs``."""
    fr = [Fraction(float(c)) for c in coeffs]
    den = 1
    for f in fr:
        den = max(den, f.denominator)
    out = [int(f * den) for f in fr]
    return _primitive(_strip(out))


def _strip(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def _primitive(p):
    g = 0
    for v in p:
        g = gcd(g, v)
    if g > 1:
        p = [v // g for v in p]
    return p


def _var(p) -> int:
    v = 0
    last = 0
    for a in p:
        if a:
            if last and (a > 0) != (last > 0):
                v += 1
            last = a
    return v


def _taylor_shift1(p):
    """Coefficients of ``p(x + 1)``."""
    a = list(p)
    n = len(a) - 1
    for i in range(n):
        for j in range(n - 1, i - 1, -1):
            a[j] += a[j + 1]
    return a


def _descartes(q) -> int:
    return _var(_taylor_shift1(q[::-1]))


def _scale_half(q):
    """``2^n q(x / 2)``."""
    n = len(q) - 1
    return [c << (n - i) for i, c in enumerate(q)]


def _compose_affine(p, lo: Fraction, width: Fraction):
    """Integer polynomial proportional to ``p(lo + width * x)``."""
    den = lo.denominator * width.denominator // gcd(lo.denominator, width.denominator)
    A = int(lo * den)
    W = int(width * den)
    n = len(p) - 1
    # Horner in polynomial arithmetic on den^n p((A + W x)/den)
    r = [p[n]]
    for i in range(n - 1, -1, -1):
        nr = [0] * (len(r) + 1)
        for k, c in enumerate(r):
            nr[k] += c * A
            nr[k + 1] += c * W
        nr[0] += p[i] * den ** (n - i)
        r = nr
    return _primitive(_strip(r))


def _poly_div_exact(p, d):
    """Quotient of ``p`` by ``d`` over the rationals (remainder ignored)."""
    p = [Fraction(c) for c in p]
    out = [Fraction(0)] * max(1, len(p) - len(d) + 1)
    lead = Fraction(d[-1])
    for k in range(len(p) - len(d), -1, -1):
        coef = p[k + len(d) - 1] / lead
        out[k] = coef
        for j, dj in enumerate(d):
            p[k + j] -= coef * dj
    return out


def _rem(a, b):
    a = list(a)
    while len(a) >= len(b) and any(a):
        coef = a[-1] / b[-1]
        shift = len(a) - len(b)
        for j, bj in enumerate(b):
            a[shift + j] -= coef * bj
        a.pop()
        a = _strip(a) if a else [Fraction(0)]
    return a


def _fraction_gcd(a, b):
    a = [Fraction(c) for c in _strip(a)]
    b = [Fraction(c) for c in _strip(b)]
    while any(b):
        a, b = b, _rem(a, b)
    return a


def _to_int(frs):
    den = 1
    for f in frs:
        den = den * f.denominator // gcd(den, f.denominator)
    return _primitive(_strip([int(f * den) for f in frs]))


def sqf_part(p: list[int]) -> list[int]:
    """Square-free part ``p / gcd(p, p')``; roots are kept, multiplicities dropped."""
    if len(p) <= 2:
        return p
    dp = [i * c for i, c in enumerate(p)][1:]
    g = _fraction_gcd(p, dp)
    if len(g) == 1:
        return p
    return _to_int(_poly_div_exact(p, g))


def exact_value(p: list[int], x: Fraction) -> Fraction:
    acc = Fraction(0)
    for c in reversed(p):
        acc = acc * x + c
    return acc


def exact_sign(p: list[int], x) -> int:
    """Exact sign of ``p`` at a dyadic (or any rational) point."""
    x = Fraction(x)
    num, den = x.numerator, x.denominator
    n = len(p) - 1
    acc = 0
    # den^n p(num/den) by integer Horner
    scale = 1
    for i in range(n, -1, -1):
        acc = acc * num + p[i] * scale
        scale *= den
    return (acc > 0) - (acc < 0)


def count_open_unit(q: list[int], depth_budget: int):
    """Distinct roots of ``q`` in (0, 1), by Descartes bisection.

    Returns ``(count, isolating, uncertain)`` where ``isolating`` lists
    ``(lo, hi)`` Fractions (``lo == hi`` for a root hit exactly at a split
    point) and ``uncertain`` lists ``(lo, hi, capacity)`` for cells that
    were still ambiguous at the depth budget.
    """
    count = 0
    isolating = []
    uncertain = []
    if len(q) <= 1:
        return count, isolating, uncertain
    stack = [(q, 0, 0)]  # polynomial on [k/2^d, (k+1)/2^d]
    while stack:
        poly, depth, k = stack.pop()
        v = _descartes(poly)
        if v == 0:
            continue
        lo = Fraction(k, 1 << depth)
        hi = Fraction(k + 1, 1 << depth)
        if v == 1:
            count += 1
            isolating.append((lo, hi))
            continue
        if depth >= depth_budget:
            uncertain.append((lo, hi, v))
            continue
        left = _primitive(_scale_half(poly))
        if sum(left) == 0:  # root exactly at the midpoint
            count += 1
            mid = Fraction(2 * k + 1, 1 << (depth + 1))
            isolating.append((mid, mid))
        right = _primitive(_taylor_shift1(left))
        stack.append((right, depth + 1, 2 * k + 1))
        stack.append((left, depth + 1, 2 * k))
    return count, isolating, uncertain


def count_closed(p: list[int], lo, hi, depth_budget: int, squarefree: bool = True):
    """Distinct roots of ``p`` in the closed interval ``[lo, hi]``.

    Returns ``(count, isolating, uncertain)`` in original coordinates.
    """
    lo = Fraction(lo)
    hi = Fraction(hi)
    p = _strip(p)
    if len(p) == 1:
        if p[0] == 0:
            raise ValueError("the zero polynomial has every point as a root")
        return 0, [], []
    if squarefree:
        p = sqf_part(p)
    width = hi - lo
    q = _compose_affine(p, lo, width)
    count, iso, unc = count_open_unit(q, depth_budget)
    iso = [(lo + a * width, lo + b * width) for a, b in iso]
    unc = [(lo + a * width, lo + b * width, v) for a, b, v in unc]
    if q[0] == 0:
        count += 1
        iso.append((lo, lo))
    if sum(q) == 0:
        count += 1
        iso.append((hi, hi))
    iso.sort()
    return count, iso, unc
