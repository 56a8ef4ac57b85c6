"""Power sums, elementary symmetric polynomials, complete homogeneous sums.

All coefficient recursions in the library reduce to conversions between the
three families attached to a root tuple (b_1, ..., b_n):

    c_v = sum_j b_j^v                    (power sums)
    e_v = sum_{j1<...<jv} b_j1 ... b_jv  (elementary symmetric)
    h_m = sum over multisets of size m   (complete homogeneous)

linked by the recursion v*e_v = sum_{j=1}^{v} (-1)^(j-1) e_{v-j} c_j and the
generating-function identity (sum e_j (-x)^j)(sum h_m x^m) = 1.
"""

from __future__ import annotations

import numpy as np

from .util import InputError


def power_sums(roots, K: int) -> np.ndarray:
    """c_1..c_K for the given root tuple, returned as a length-K complex array."""
    if K < 1:
        raise InputError("K must be >= 1")
    r = np.asarray(roots, dtype=complex)
    if r.ndim != 1 or r.size == 0:
        raise InputError("roots must be a nonempty 1-d sequence")
    out = np.empty(K, dtype=complex)
    acc = np.ones_like(r)
    for v in range(K):
        acc = acc * r
        out[v] = acc.sum()
    return out


def elementary_from_power_sums(c, n: int) -> np.ndarray:
    """e_0..e_n from power sums c_1..c_{>=n} via the Newton recursion.

    e_0 = 1 by convention; e_v = 0 for v > n is the caller's convention and
    is not materialized here.
    """
    c = np.asarray(c, dtype=complex)
    if len(c) < n:
        raise InputError(f"need at least {n} power sums, got {len(c)}")
    e = np.zeros(n + 1, dtype=complex)
    e[0] = 1.0
    for v in range(1, n + 1):
        s = 0.0 + 0.0j
        for j in range(1, v + 1):
            sign = 1.0 if (j - 1) % 2 == 0 else -1.0
            s += sign * e[v - j] * c[j - 1]
        e[v] = s / v
    return e


def elementary_from_roots(roots) -> np.ndarray:
    """e_0..e_n by direct expansion of prod (x + b_j); independent of Newton.

    Kept separate so tests can cross-check the recursion against plain
    polynomial multiplication.
    """
    r = np.asarray(roots, dtype=complex)
    e = np.zeros(r.size + 1, dtype=complex)
    e[0] = 1.0
    for m, b in enumerate(r, start=1):
        e[1 : m + 1] = e[1 : m + 1] + b * e[0:m]
    return e


def complete_homogeneous_from_roots(roots, K: int) -> np.ndarray:
    """h_0..h_K, the coefficients of 1 / prod(1 - b_j x).

    Uses h_m = sum_{j=1}^{min(m,n)} (-1)^(j-1) e_j h_{m-j}, h_0 = 1.
    """
    if K < 0:
        raise InputError("K must be >= 0")
    r = np.asarray(roots, dtype=complex)
    n = r.size
    e = elementary_from_roots(r)
    h = np.zeros(K + 1, dtype=complex)
    h[0] = 1.0
    for m in range(1, K + 1):
        s = 0.0 + 0.0j
        for j in range(1, min(m, n) + 1):
            sign = 1.0 if (j - 1) % 2 == 0 else -1.0
            s += sign * e[j] * h[m - j]
        h[m] = s
    return h
