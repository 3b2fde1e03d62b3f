"""Compiled inner loops.

All bounds below are rigorous under IEEE-754 round-to-nearest with unit
roundoff ``EPS = 2**-53``: a Horner pass of length ``n`` commits at most
``gamma_2n * sum |c_i| |x|^i`` absolute error, and ``_err_factor`` covers
that with room for the extra accumulators.
"""
import math

import numpy as np
from numba import njit

EPS = 2.0**-53


@njit(cache=True)
def _err_factor(n):
    return 8.0 * (n + 4) * EPS


# ---------------------------------------------------------------- evaluation

@njit(cache=True)
def _two_sum(a, b):
    s = a + b
    z = s - a
    return s, (a - (s - z)) + (b - z)


@njit(cache=True)
def _split(a):
    t = 134217729.0 * a  # 2**27 + 1
    hi = t - (t - a)
    return hi, a - hi


@njit(cache=True)
def _two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    return p, al * bl - (((p - ah * bh) - al * bh) - ah * bl)


@njit(cache=True)
def comp_horner(c, xs):
    """Compensated Horner (Graillat, Langlois, Louvet) at each ``xs[j]``."""
    n = c.shape[0] - 1
    out = np.empty(xs.shape[0])
    for j in range(xs.shape[0]):
        x = xs[j]
        s = c[n]
        e = 0.0
        for i in range(n - 1, -1, -1):
            p, pe = _two_prod(s, x)
            s, se = _two_sum(p, c[i])
            e = e * x + (pe + se)
        out[j] = s + e
    return out


@njit(cache=True)
def taylor_at(c, ca, x):
    """Signed Taylor coefficients f^(k)(x)/k! for k<=3 and the matching
    absolute-coefficient sums S^(k)(|x|)/k! for k<=4."""
    n = c.shape[0] - 1
    ax = abs(x)
    q0 = 0.0
    q1 = 0.0
    q2 = 0.0
    q3 = 0.0
    s0 = 0.0
    s1 = 0.0
    s2 = 0.0
    s3 = 0.0
    s4 = 0.0
    for i in range(n, -1, -1):
        q3 = q3 * x + q2
        q2 = q2 * x + q1
        q1 = q1 * x + q0
        q0 = q0 * x + c[i]
        s4 = s4 * ax + s3
        s3 = s3 * ax + s2
        s2 = s2 * ax + s1
        s1 = s1 * ax + s0
        s0 = s0 * ax + ca[i]
    return q0, q1, q2, q3, s0, s1, s2, s3, s4


@njit(cache=True)
def certified_signs(c, ca, xs):
    """Sign of f at each point, or 2 where rounding error hides it."""
    n = c.shape[0] - 1
    err = _err_factor(n)
    out = np.empty(xs.shape[0], dtype=np.int64)
    for j in range(xs.shape[0]):
        x = xs[j]
        ax = abs(x)
        q = 0.0
        s = 0.0
        for i in range(n, -1, -1):
            q = q * x + c[i]
            s = s * ax + ca[i]
        bound = err * s * (1.0 + err)
        if q > bound:
            out[j] = 1
        elif q < -bound:
            out[j] = -1
        elif s == 0.0:
            out[j] = 0
        else:
            out[j] = 2
    return out


# ----------------------------------------------------------------- isolation

@njit(cache=True)
def isolate_cells(c, ca, breaks, depth_budget):
    """Split ``[breaks[0], breaks[-1]]`` (all >= 0) into certified cells.

    Returns ``(mono_a, mono_b, unres_a, unres_b, n_evals)``. Every part of
    the interval not covered by a returned cell is proven root free.
    Monotone cells carry a proof that f' has no zero on the closed cell,
    so each holds at most one root. Unresolved cells hit the depth budget
    or ran out of floating-point room (f and f' both below the rounding
    bound at the midpoint).
    """
    n = c.shape[0] - 1
    err = _err_factor(n)
    infl = 1.0 + err
    slack = 1.0 + 1e-12
    cap = 1024
    sa = np.empty(cap)
    sb = np.empty(cap)
    sd = np.empty(cap, dtype=np.int64)
    s4 = np.empty(cap)
    top = 0
    mono_a = []
    mono_b = []
    unres_a = []
    unres_b = []
    nev = 0
    # bounds at the right ends of the initial cells
    for k in range(breaks.shape[0] - 1, 0, -1):
        r = taylor_at(c, ca, breaks[k])
        nev += 1
        if top >= cap:
            cap *= 2
            sa = np.concatenate((sa, np.empty(cap - sa.shape[0])))
            sb = np.concatenate((sb, np.empty(cap - sb.shape[0])))
            sd = np.concatenate((sd, np.empty(cap - sd.shape[0], dtype=np.int64)))
            s4 = np.concatenate((s4, np.empty(cap - s4.shape[0])))
        sa[top] = breaks[k - 1]
        sb[top] = breaks[k]
        sd[top] = 0
        s4[top] = r[8]
        top += 1
    while top > 0:
        top -= 1
        a = sa[top]
        b = sb[top]
        d = sd[top]
        m4 = s4[top] * infl
        mid = 0.5 * (a + b)
        if not (a < mid < b) or not math.isfinite(m4):
            unres_a.append(a)
            unres_b.append(b)
            continue
        rad = max(mid - a, b - mid) * (1.0 + 4.0 * EPS)
        q0, q1, q2, q3, t0, t1, t2, t3, t4 = taylor_at(c, ca, mid)
        nev += 1
        a1 = abs(q1) + err * t1 * infl
        a2 = abs(q2) + err * t2 * infl
        a3 = abs(q3) + err * t3 * infl
        r2 = rad * rad
        lhs = abs(q0) - err * t0 * infl
        rhs = a1 * rad + a2 * r2 + a3 * r2 * rad + m4 * r2 * r2
        if lhs > rhs * slack:
            continue
        lhs = abs(q1) - err * t1 * infl
        rhs = 2.0 * a2 * rad + 3.0 * a3 * r2 + 4.0 * m4 * r2 * rad
        if lhs > rhs * slack:
            mono_a.append(a)
            mono_b.append(b)
            continue
        # f and f' both lost in rounding: splitting further cannot help
        noisy = (abs(q0) <= 2.0 * err * t0 * infl and abs(q1) <= 2.0 * err * t1 * infl)
        if d >= depth_budget or noisy:
            unres_a.append(a)
            unres_b.append(b)
            continue
        if top + 2 > cap:
            cap *= 2
            sa = np.concatenate((sa, np.empty(cap - sa.shape[0])))
            sb = np.concatenate((sb, np.empty(cap - sb.shape[0])))
            sd = np.concatenate((sd, np.empty(cap - sd.shape[0], dtype=np.int64)))
            s4 = np.concatenate((s4, np.empty(cap - s4.shape[0])))
        # right half reuses the popped slot, keeping the parent's bound at b
        sa[top] = mid
        sd[top] = d + 1
        top += 1
        sa[top] = a
        sb[top] = mid
        sd[top] = d + 1
        s4[top] = t4
        top += 1
    return (np.array(mono_a), np.array(mono_b), np.array(unres_a),
            np.array(unres_b), nev)


@njit(cache=True)
def refine_root(c, ca, a, b, sa, width):
    """Bisect a monotone sign-change cell down to ``width``.

    ``sa`` is the certified sign at ``a``. Midpoints whose sign is not
    certified are nudged; if that fails the current bracket is returned.
    """
    n = c.shape[0] - 1
    err = _err_factor(n)
    while b - a > width:
        mid = 0.5 * (a + b)
        if not (a < mid < b):
            break
        sgn = 0
        for trial in range(3):
            x = mid
            if trial == 1:
                x = mid - 0.25 * (b - a)
            elif trial == 2:
                x = mid + 0.25 * (b - a)
            q = 0.0
            s = 0.0
            ax = abs(x)
            for i in range(n, -1, -1):
                q = q * x + c[i]
                s = s * ax + ca[i]
            bound = err * s * (1.0 + err)
            if q > bound:
                sgn = 1
                mid = x
                break
            if q < -bound:
                sgn = -1
                mid = x
                break
        if sgn == 0:
            break
        if sgn == sa:
            a = mid
        else:
            b = mid
    return a, b


# -------------------------------------------------------------------- Jacobi

@njit(cache=True)
def jacobi_eigh(m, tol, max_sweeps):
    """Cyclic Jacobi eigendecomposition of a symmetric matrix.

    Sweeps stop once the off-diagonal Frobenius mass drops below ``tol``
    times the full Frobenius norm. Returns ``(w, v, sweeps)`` with
    ``m = v @ diag(w) @ v.T``.
    """
    a = m.copy()
    k = a.shape[0]
    v = np.eye(k)
    total = 0.0
    for i in range(k):
        for j in range(k):
            total += a[i, j] * a[i, j]
    total = math.sqrt(total)
    sweeps = 0
    for sweep in range(max_sweeps):
        off = 0.0
        for i in range(k):
            for j in range(i + 1, k):
                off += 2.0 * a[i, j] * a[i, j]
        if math.sqrt(off) <= tol * total or off == 0.0:
            break
        sweeps += 1
        for p in range(k - 1):
            for q in range(p + 1, k):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = 1.0 / (abs(theta) + math.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                cs = 1.0 / math.sqrt(t * t + 1.0)
                sn = t * cs
                for r in range(k):
                    arp = a[r, p]
                    arq = a[r, q]
                    a[r, p] = cs * arp - sn * arq
                    a[r, q] = sn * arp + cs * arq
                for r in range(k):
                    apr = a[p, r]
                    aqr = a[q, r]
                    a[p, r] = cs * apr - sn * aqr
                    a[q, r] = sn * apr + cs * aqr
                for r in range(k):
                    vrp = v[r, p]
                    vrq = v[r, q]
                    v[r, p] = cs * vrp - sn * vrq
                    v[r, q] = sn * vrp + cs * vrq
    w = np.empty(k)
    for i in range(k):
        w[i] = a[i, i]
    return w, v, sweeps


@njit(cache=True)
def max_abs_on_circle(c, center, radius, k):
    """Max of |p| over ``k`` equispaced points of a circle."""
    n = c.shape[0] - 1
    best = 0.0
    for j in range(k):
        th = 2.0 * math.pi * j / k
        z = complex(center + radius * math.cos(th), radius * math.sin(th))
        acc = complex(c[n], 0.0)
        for i in range(n - 1, -1, -1):
            acc = acc * z + c[i]
        v = abs(acc)
        if v > best:
            best = v
    return best
