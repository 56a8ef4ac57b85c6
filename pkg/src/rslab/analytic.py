"""Smoothed sums and their arithmetic applications.

The test function V is pinned to one explicit construction so that every
build produces identical values: shoulders are integrals of the standard
mollifier exp(-1/(1-u^2)) rescaled to [0,1],

    B(t) = exp(-1/(1 - (2t-1)^2)),  R(t) = int_0^t B / int_0^1 B,

with V = R on the rising shoulder [1/2, 1], V = 1 on [1, 2], and the
mirrored ramp on [2, 5/2].  All derivatives of R vanish at 0 and 1, so V is
C-infinity everywhere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from . import lrep, numfield
from .lrep import RepModel
from .util import ContractError, InputError, blocked_sum, sieve_primes

_GL_NODES = 96


@lru_cache(maxsize=8)
def _leggauss(n: int):
    return np.polynomial.legendre.leggauss(n)


def _bump(u: np.ndarray) -> np.ndarray:
    """exp(-1/(1-u^2)) on (-1, 1), zero outside; vectorized and overflow-safe."""
    u = np.asarray(u, dtype=float)
    out = np.zeros_like(u)
    inside = np.abs(u) < 1.0
    ui = u[inside]
    out[inside] = np.exp(-1.0 / (1.0 - ui * ui))
    return out


def _shoulder_B(t: np.ndarray) -> np.ndarray:
    """The mollifier rescaled to [0, 1]: B(t) = exp(-1/(1-(2t-1)^2))."""
    return _bump(2.0 * np.asarray(t, dtype=float) - 1.0)


@lru_cache(maxsize=1)
def _shoulder_mass() -> float:
    x, w = _leggauss(_GL_NODES)
    t = 0.5 * (x + 1.0)
    return float(0.5 * np.dot(w, _shoulder_B(t)))


def _ramp(t: np.ndarray) -> np.ndarray:
    """R(t) = int_0^t B / int_0^1 B, clamped outside [0, 1]."""
    t = np.asarray(t, dtype=float)
    out = np.clip(t, 0.0, 1.0).copy()
    mid = (t > 0.0) & (t < 1.0)
    if mid.any():
        x, w = _leggauss(_GL_NODES)
        tm = t[mid]
        nodes = 0.5 * tm[:, None] * (x[None, :] + 1.0)
        vals = _shoulder_B(nodes)
        out[mid] = (0.5 * tm * (vals @ w)) / _shoulder_mass()
    return out


class TestFunctionV:
    """Smooth cutoff: 1 on [1, 2], supported on [1/2, 5/2], pinned shoulders."""

    support = (0.5, 2.5)
    plateau = (1.0, 2.0)

    def eval_array(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        out[(x >= 1.0) & (x <= 2.0)] = 1.0
        rise = (x > 0.5) & (x < 1.0)
        fall = (x > 2.0) & (x < 2.5)
        if rise.any():
            out[rise] = _ramp(2.0 * x[rise] - 1.0)
        if fall.any():
            out[fall] = _ramp(5.0 - 2.0 * x[fall])
        return out

    def __call__(self, x: float) -> float:
        return float(self.eval_array(np.array([x]))[0])

    def derivative_array(self, x, order: int) -> np.ndarray:
        """V^(order) by symbolic differentiation of the shoulder mollifier.

        On the rising shoulder V(x) = R(2x-1) with R' = bump(2t-1)/mass, so
        V^(m)(x) = 2^m * 2^(m-1) * bump^(m-1)(4x-3) / mass; the falling
        shoulder mirrors with (-2)^m.
        """
        if order < 0:
            raise InputError("derivative order must be >= 0")
        if order == 0:
            return self.eval_array(x)
        x = np.asarray(x, dtype=float)
        dfun = _bump_derivative(order - 1)
        inner = 2.0 ** (order - 1)
        out = np.zeros_like(x)
        rise = (x > 0.5) & (x < 1.0)
        fall = (x > 2.0) & (x < 2.5)
        if rise.any():
            t = 2.0 * x[rise] - 1.0
            out[rise] = (2.0**order) * inner * dfun(2.0 * t - 1.0) / _shoulder_mass()
        if fall.any():
            t = 5.0 - 2.0 * x[fall]
            out[fall] = ((-2.0) ** order) * inner * dfun(2.0 * t - 1.0) / _shoulder_mass()
        return out


@lru_cache(maxsize=16)
def _bump_derivative(m: int):
    """m-th derivative of u -> exp(-1/(1-u^2)) as a safe numpy callable."""
    import sympy as sp

    u = sp.Symbol("u")
    expr = sp.exp(-1 / (1 - u**2))
    for _ in range(m):
        expr = sp.diff(expr, u)
    raw = sp.lambdify(u, expr, "numpy")

    def fn(uu):
        uu = np.asarray(uu, dtype=float)
        out = np.zeros_like(uu)
        inside = np.abs(uu) < 1.0 - 1e-12
        if inside.any():
            with np.errstate(all="ignore"):
                out[inside] = raw(uu[inside])
        return out

    return fn


def v_mellin(s: complex, j: int = 0, rel_target: float = 1e-10) -> complex:
    """Mellin transform of V on the strip 0 < Re s <= 2.

    j = 0 integrates V x^(s-1) directly; j >= 1 uses the integration-by-parts
    form with the 1/(s (s+1) ... (s+j-1)) prefactor and V's j-th derivative,
    which exposes the |s|^-j decay without cancellation.  Adaptive composite
    Gauss-Legendre: subdivision doubles until two resolutions agree.
    """
    s = complex(s)
    if not (0.0 < s.real <= 2.0):
        raise ContractError(f"Re s = {s.real:g} outside the admissible strip (0, 2]")
    v = TestFunctionV()
    if j == 0:
        integrand = lambda x: v.eval_array(x) * x ** (s - 1.0)
        segs = [(0.5, 1.0), (1.0, 2.0), (2.0, 2.5)]
        pref = 1.0 + 0.0j
    else:
        integrand = lambda x: v.derivative_array(x, j) * x ** (s + j - 1.0)
        segs = [(0.5, 1.0), (2.0, 2.5)]
        pref = 1.0 + 0.0j
        for i in range(j):
            pref /= s + i
    # ~0.26|t| oscillations across the support; 100-point panels resolve ~30
    pieces = 1 + int(abs(s.imag) / 100.0)
    prev = None
    for _ in range(10):
        total = 0.0 + 0.0j
        x, w = _leggauss(100)
        for a, b in segs:
            width = (b - a) / pieces
            for i in range(pieces):
                lo = a + i * width
                xx = lo + 0.5 * width * (x + 1.0)
                total += 0.5 * width * np.dot(w, integrand(xx))
        if prev is not None and abs(total - prev) <= rel_target * max(abs(total), 1e-300):
            return pref * total
        prev = total
        pieces *= 2
    return pref * total


def mellin_decay_exponent(sigma: float, j: int, t_lo: float = 10.0, t_hi: float = 1000.0) -> float:
    """Fitted slope of log|Mellin(sigma + it)| against log t on [t_lo, t_hi]."""
    ts = np.geomspace(t_lo, t_hi, 9)
    vals = np.array([abs(v_mellin(complex(sigma, t), j=j)) for t in ts])
    slope = np.polyfit(np.log(ts), np.log(vals), 1)[0]
    return float(slope)


# -- sum reports -----------------------------------------------------------------


@dataclass
class SumReport:
    """A computed sum, an optional reference value, and their difference."""

    x: float
    value: complex
    comparison: complex
    residual: complex

    @staticmethod
    def make(x: float, value: complex, comparison: complex) -> "SumReport":
        return SumReport(x, value, comparison, value - comparison)


def standard_lambda_table(rep: RepModel, X: int) -> np.ndarray:
    """lambda_pi(n) for n <= X over Q (complex array; fast paths for the
    integer-backed models)."""
    if not rep.field.is_rational:
        raise InputError("norm-indexed tables are an over-Q operation")
    if rep.source == "gl1":
        out = np.ones(X + 1, dtype=complex)
        out[0] = 0.0
        return out
    if rep.weight is not None:
        return lrep.gl2_prime_eigenvalues(rep.weight, X).astype(complex)
    return lrep.build_coeff_table(rep, None, "lambda", X).values


def first_disagreement(
    table1: lrep.CoeffTable, table2: lrep.CoeffTable, tol: float = 1e-6
) -> int:
    """Smallest norm with |lam1 - lam2| > tol; 0 when none disagrees."""
    if table1.field != table2.field or table1.limit != table2.limit:
        raise InputError("tables must share field and limit")
    if table1.field.is_rational:
        diff = np.abs(table1.values - table2.values)
        hits = np.nonzero(diff[1:] > tol)[0]
        return int(hits[0] + 1) if hits.size else 0
    keys = sorted(
        set(table1.values) | set(table2.values),
        key=lambda k: (lrep.ideal_norm(k), k),
    )
    for key in keys:
        if abs(table1.value(key) - table2.value(key)) > tol:
            return lrep.ideal_norm(key)
    return 0


def twist_by_norm_power(table: lrep.CoeffTable, t: float) -> lrep.CoeffTable:
    """The |.|^{it} twist: multiply the coefficient at norm N by N^{it}."""
    if table.field.is_rational:
        n = np.arange(len(table.values), dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            factors = np.exp(1j * t * np.log(np.where(n > 0, n, 1.0)))
        vals = table.values * factors
        return lrep.CoeffTable(table.kind, table.field, table.limit,
                               table.rep_labels + (f"twist{t:g}",), vals)
    vals = {
        k: v * lrep.ideal_norm(k) ** (1j * t) for k, v in table.values.items()
    }
    return lrep.CoeffTable(table.kind, table.field, table.limit,
                           table.rep_labels + (f"twist{t:g}",), vals,
                           table.prime_index)


def smoothed_pair_sum(
    rep1: RepModel, rep2: RepModel, X: float, block_size: int = 4096
) -> SumReport:
    """sum_n lam_1(n) conj(lam_2(n)) V(n/X).

    For an identical pair the comparison holds the extrapolated main term
    X * (value at X/2) / (X/2), so the residual measures slope stabilization;
    otherwise the comparison is 0.
    """
    v = TestFunctionV()
    limit = int(math.floor(2.5 * X))
    if limit < 1:
        return SumReport.make(X, 0.0 + 0.0j, 0.0 + 0.0j)
    t1 = standard_lambda_table(rep1, limit)
    t2 = t1 if rep2 == rep1 else standard_lambda_table(rep2, limit)

    def weighted(Xeff: float) -> complex:
        lim = int(math.floor(2.5 * Xeff))
        n = np.arange(lim + 1, dtype=float)
        vals = t1[: lim + 1] * np.conj(t2[: lim + 1]) * v.eval_array(n / Xeff)
        return blocked_sum(vals, block_size)

    value = weighted(X)
    if rep1 == rep2:
        half = weighted(X / 2.0)
        comparison = 2.0 * half
    else:
        comparison = 0.0 + 0.0j
    return SumReport.make(X, value, comparison)


def _rs_pair_a_at_prime_power(rep1, rep2, rec, k: int) -> complex:
    lp1 = lrep.satake_at(rep1, rec)
    lp2 = lrep.satake_at(rep2, rec)
    params = lrep.rs_local_params(lp1, lp2)
    return complex(sum(g**k for g in params))


def prime_power_gap(
    rep1: RepModel, rep2: RepModel, x: float, y: float, K: int | None = None
) -> SumReport:
    """Higher-prime-power contribution on (x-y, x]:

        sum_{k>=2} sum_{x-y < Np^k <= x} a_{pi1 x pi2}(p^k) log Np,

    compared against x^(1 - 1/(max(n1,n2)^2+1)).
    """
    if not (0 < y <= x):
        raise InputError("need 0 < y <= x")
    fd = rep1.field
    if K is None:
        K = max(2, int(math.log2(max(x, 4))) + 1)
    total = 0.0 + 0.0j
    pmax = int(math.floor(x ** 0.5))
    if pmax >= 2:
        for rec in numfield.enumerate_prime_ideals(fd, pmax):
            logn = math.log(rec.norm)
            for k in range(2, K + 1):
                nk = rec.norm**k
                if nk > x:
                    break
                if nk > x - y:
                    total += _rs_pair_a_at_prime_power(rep1, rep2, rec, k) * logn
    nmax = max(rep1.degree, rep2.degree)
    comparison = x ** (1.0 - 1.0 / (nmax * nmax + 1))
    return SumReport.make(x, total, comparison)


def _self_pair_prime_values(rep: RepModel, x: int) -> tuple[np.ndarray, np.ndarray]:
    """(norms, a_{pi x ~pi}(p)) over prime ideals of norm <= x.

    At unramified primes a_{pi x ~pi}(p) = |lam_pi(p)|^2.
    """
    if rep.field.is_rational and rep.weight is not None:
        lam = lrep.gl2_prime_eigenvalues(rep.weight, x)
        ps = sieve_primes(x)
        return ps.astype(float), lam[ps] ** 2
    if rep.field.is_rational and rep.source == "gl1":
        ps = sieve_primes(x)
        return ps.astype(float), np.ones(len(ps))
    norms = []
    vals = []
    for rec in numfield.enumerate_prime_ideals(rep.field, x):
        lp = lrep.satake_at(rep, rec)
        s = complex(sum(lp.alphas))
        norms.append(float(rec.norm))
        vals.append(abs(s) ** 2)
    return np.array(norms), np.array(vals)


def pnt_partial(rep: RepModel, x: float, block_size: int = 4096) -> SumReport:
    """sum_{Np <= x} a_{pi x ~pi}(p) log Np, compared against x."""
    xi = int(math.floor(x))
    if xi < 2:
        return SumReport.make(x, 0.0 + 0.0j, complex(x))
    norms, vals = _self_pair_prime_values(rep, xi)
    value = blocked_sum(vals * np.log(norms), block_size)
    return SumReport.make(x, complex(value), complex(x))


def hoheisel_window(rep: RepModel, x: float, h: float, block_size: int = 4096) -> SumReport:
    """Von-Mangoldt-weighted self-pair sum over the window (x, x+h]:

        sum_{x < Np^k <= x+h} a_{pi x ~pi}(p^k) log Np,

    compared against h.
    """
    if h <= 0 or x < 0:
        raise InputError("need h > 0 and x >= 0")
    top = int(math.floor(x + h))
    if top < 2:
        return SumReport.make(x, 0.0 + 0.0j, complex(h))
    norms, vals = _self_pair_prime_values(rep, top)
    mask = norms > x
    value = complex(blocked_sum(vals[mask] * np.log(norms[mask]), block_size))
    # higher powers within the window
    rep_t = rep.contragredient()
    pmax = int(math.floor((x + h) ** 0.5))
    if pmax >= 2:
        for rec in numfield.enumerate_prime_ideals(rep.field, pmax):
            k = 2
            while rec.norm**k <= x + h:
                if rec.norm**k > x:
                    lp = lrep.satake_at(rep, rec)
                    params = lrep.rs_local_params(
                        lp, lrep.satake_at(rep_t, rec)
                    )
                    value += complex(sum(g**k for g in params)) * math.log(rec.norm)
                k += 1
    return SumReport.make(x, value, complex(h))


def selberg_sum(rep1: RepModel, rep2: RepModel, X: float, block_size: int = 4096) -> SumReport:
    """sum_{Np <= X} a_1(p) a_2(p) / Np, with comparison log log X on the
    contragredient diagonal and 0 otherwise (a(p) = lam(p) at primes)."""
    xi = int(math.floor(X))
    diagonal = rep2 == rep1.contragredient()
    comparison = complex(math.log(math.log(X))) if (diagonal and X > math.e) else 0.0 + 0.0j
    if xi < 2:
        return SumReport.make(X, 0.0 + 0.0j, comparison)
    fd = rep1.field
    if fd != rep2.field:
        raise InputError("pair models must share the base field")
    fast = (
        fd.is_rational
        and rep1.source in ("gl1", "gl2w12", "gl2w16")
        and rep2.source in ("gl1", "gl2w12", "gl2w16")
    )
    if fast:
        ps = sieve_primes(xi)
        lam1 = _prime_lambda_vector(rep1, ps, xi)
        lam2 = _prime_lambda_vector(rep2, ps, xi)
        value = blocked_sum(lam1 * lam2 / ps.astype(float), block_size)
    else:
        acc = []
        for rec in numfield.enumerate_prime_ideals(fd, xi):
            a1 = complex(sum(lrep.satake_at(rep1, rec).alphas))
            a2 = complex(sum(lrep.satake_at(rep2, rec).alphas))
            acc.append(a1 * a2 / rec.norm)
        value = blocked_sum(np.array(acc), block_size) if acc else 0.0 + 0.0j
    return SumReport.make(X, complex(value), comparison)


def _prime_lambda_vector(rep: RepModel, ps: np.ndarray, X: int) -> np.ndarray:
    if rep.source == "gl1":
        return np.ones(len(ps))
    return lrep.gl2_prime_eigenvalues(rep.weight, X)[ps]
