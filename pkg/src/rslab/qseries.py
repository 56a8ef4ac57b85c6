"""Exact integer q-expansions for the level-one holomorphic cusp forms.

The discriminant form is built as q * (prod_{m>=1} (1-q^m)^3)^8 using the
sparse cube expansion

    prod_{m>=1} (1-q^m)^3 = sum_{k>=0} (-1)^k (2k+1) q^{k(k+1)/2},

so only three truncated series squarings are needed.  The weight-16 form is
E4 * Delta with E4 = 1 + 240 sum sigma3(m) q^m.

Truncated products of integer series are computed exactly by packing the
coefficients into one big integer with fixed-width slots and letting GMP do
a single multiplication; the slot width is chosen from an a priori bound on
the result's coefficients, and an offset makes every slot nonnegative so
signed coefficients unpack unambiguously.
"""

from __future__ import annotations

import numpy as np
from gmpy2 import mpz

from .util import InputError

_table_cache: dict[tuple[int, int], list[int]] = {}


def _pack(coeffs: list[int], width: int) -> mpz:
    """Pack nonnegative coefficients into width-bit slots (width = 8k)."""
    nbytes = width // 8
    buf = bytearray(nbytes * len(coeffs))
    for i, c in enumerate(coeffs):
        if c:
            buf[i * nbytes : i * nbytes + nbytes] = int(c).to_bytes(
                nbytes, "little", signed=False
            )
    return mpz(int.from_bytes(buf, "little"))


def series_mul(a: list[int], b: list[int], length: int) -> list[int]:
    """Exact coefficients of (a * b) truncated to `length` terms.

    Both inputs are integer coefficient lists (index = exponent).  The
    convolution is done by one GMP multiplication on packed operands.
    """
    a = a[:length]
    b = b[:length]
    if not a or not b:
        return [0] * length
    max_a = max(1, max(abs(x) for x in a))
    max_b = max(1, max(abs(x) for x in b))
    bound = min(len(a), len(b)) * max_a * max_b
    width = ((bound.bit_length() + 2 + 7) // 8) * 8  # byte-aligned, sign headroom

    def split_pack(seq):
        pos = [x if x > 0 else 0 for x in seq]
        neg = [-x if x < 0 else 0 for x in seq]
        return _pack(pos, width) - _pack(neg, width)

    prod = split_pack(a) * split_pack(b)
    nslots = len(a) + len(b) - 1
    offset_slot = 1 << (width - 1)
    nbytes = width // 8
    offset = mpz(
        int.from_bytes(
            offset_slot.to_bytes(nbytes, "little") * nslots, "little"
        )
    )
    shifted = prod + offset
    if shifted < 0:
        raise AssertionError("packing width underestimated")
    raw = int(shifted).to_bytes(nslots * nbytes + 16, "little")
    out = []
    for i in range(min(length, nslots)):
        c = int.from_bytes(raw[i * nbytes : (i + 1) * nbytes], "little") - offset_slot
        out.append(c)
    out.extend([0] * (length - len(out)))
    return out


def eta_cube(length: int) -> list[int]:
    """Coefficients of prod (1-q^m)^3 = sum (-1)^k (2k+1) q^{k(k+1)/2}."""
    out = [0] * length
    k = 0
    while k * (k + 1) // 2 < length:
        out[k * (k + 1) // 2] = (2 * k + 1) * (1 if k % 2 == 0 else -1)
        k += 1
    return out


def sigma3_table(limit: int) -> np.ndarray:
    """sigma3(1..limit) as int64 (safe: sigma3(10^6) < 2^63)."""
    s = np.zeros(limit + 1, dtype=np.int64)
    for d in range(1, limit + 1):
        s[d::d] += np.int64(d) ** 3
    return s


def fourier_coefficients(weight: int, X: int) -> list[int]:
    """a(1..X) of the normalized level-one cusp form of the given weight.

    weight 12: Delta = q prod (1-q^m)^24.
    weight 16: E4 * Delta with E4 = 1 + 240 sum sigma3(m) q^m.

    Exact integers; index 0 of the returned list is a(1).  Arithmetic is
    arbitrary precision throughout, so the 64-bit overflow hazard of the
    naive approach does not arise (a(10^6) needs ~160 bits at weight 16).
    """
    if weight not in (12, 16):
        raise InputError(f"unsupported weight {weight}; expected 12 or 16")
    if X < 1:
        raise InputError("X must be >= 1")
    if X > 10**6:
        raise InputError("X above the 10^6 memory budget")
    key = (weight, X)
    if key in _table_cache:
        return _table_cache[key]
    if (12, X) in _table_cache:
        a24 = _table_cache[(12, X)]
    else:
        a3 = eta_cube(X)
        a6 = series_mul(a3, a3, X)
        a12 = series_mul(a6, a6, X)
        a24 = series_mul(a12, a12, X)  # tau(n) = a24[n-1]
        _table_cache[(12, X)] = a24
    if weight == 12:
        out = a24
    else:
        e4 = [1] + [240 * int(v) for v in sigma3_table(X - 1)[1:]]
        out = series_mul(e4, a24, X)
    _table_cache[key] = out
    return out


def hecke_eigenvalues_normalized(weight: int, X: int) -> np.ndarray:
    """lambda(n) = a(n) / n^((weight-1)/2) for 1 <= n <= X, float64.

    Index n of the returned array holds lambda(n); index 0 is unused (0).
    """
    coeffs = fourier_coefficients(weight, X)
    lam = np.zeros(X + 1)
    scale = np.arange(X + 1, dtype=float) ** ((weight - 1) / 2.0)
    for n in range(1, X + 1):
        lam[n] = coeffs[n - 1] / scale[n]
    return lam
