"""Truncated Euler products and Dirichlet tails over prime-power coefficients.

Covers the second-moment prime sums, the self-pair coefficient products with
their sigma-threshold contracts, the square-free diagnostic series, and the
local correction factors linking the naive convolution

    L(s, pi (x) pi') = sum lam_pi(n) lam_pi'(n) / Nn^s

to the structured pair convolution via L(naive) = L(pair) * H with local
coefficients b(k, p) = sum_v lam_pi(p^v) lam_pi'(p^v) mu_pair(p^{k-v}).

sigma contracts refuse anything below 1 - 1/(n^2+1) + eps (eps = 0.01 by
default, overridable); the artifact never extrapolates silently.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import lrep, numfield
from .lrep import RepModel
from .util import ContractError, InputError, is_squarefree_table

DEFAULT_EPS = 0.01


def sigma_threshold(n: int) -> float:
    return 1.0 - 1.0 / (n * n + 1)


def _require_sigma(sigma: float, n: int, eps: float) -> None:
    thr = sigma_threshold(n)
    if sigma < thr + eps - 1e-12:
        raise ContractError(
            f"sigma={sigma:g} below the admissible threshold "
            f"{thr:g}+{eps:g} for degree {n}"
        )


@dataclass
class ProductLedger:
    """A truncated Euler product with its per-prime factors and tail bound."""

    sigma: float
    kmin: int
    kmax: int
    per_prime_factors: list = dc_field(default_factory=list)  # (norm, factor)
    running_product: float = 1.0
    tail_estimate: float = 0.0

    def record(self, norm: int, factor: float) -> None:
        self.per_prime_factors.append((norm, factor))
        self.running_product *= factor


def hyp_h_partial(rep: RepModel, k: int, X: int) -> float:
    """sum_{Np <= X} (log Np)^2 |a_pi(p^k)|^2 / Np^k over enumerated primes."""
    if k < 2:
        raise InputError("k must be >= 2 for the second-moment prime sum")
    if X < 2:
        return 0.0
    total = 0.0
    for norm, apk in _a_pk_stream(rep, k, X):
        total += math.log(norm) ** 2 * abs(apk) ** 2 / norm**k
    return total


def hyp_h_dyadic_tails(rep: RepModel, k: int, X: int) -> list[tuple[int, float]]:
    """(j, T_j) with T_j the partial sum over 2^j < Np <= 2^(j+1)."""
    tails: dict[int, float] = {}
    for norm, apk in _a_pk_stream(rep, k, X):
        j = norm.bit_length() - 1  # 2^j <= norm < 2^(j+1)
        term = math.log(norm) ** 2 * abs(apk) ** 2 / norm**k
        tails[j] = tails.get(j, 0.0) + term
    return sorted(tails.items())


def _a_pk_stream(rep: RepModel, k: int, X: int):
    """Yields (Np, a_pi(p^k)) over primes of norm <= X.

    Fast path for the GL(2) models: a(p^k) = alpha^k + conj(alpha)^k =
    2 cos(k theta_p) computed from the eigenvalue table in one vector pass.
    """
    if rep.field.is_rational and rep.weight is not None:
        from .util import sieve_primes

        lam = lrep.gl2_prime_eigenvalues(rep.weight, X)
        ps = sieve_primes(X)
        half = np.clip(lam[ps] / 2.0, -1.0, 1.0)
        theta = np.arccos(half)
        vals = 2.0 * np.cos(k * theta)
        for p, v in zip(ps.tolist(), vals.tolist()):
            yield p, v
        return
    for rec in numfield.enumerate_prime_ideals(rep.field, X):
        lp = lrep.satake_at(rep, rec)
        yield rec.norm, complex(sum(a**k for a in lp.alphas))


def _self_pair_lambda_powers(rep: RepModel, rec, kmax: int) -> np.ndarray:
    lp = lrep.satake_at(rep, rec)
    conj = lrep.LocalParams(rec, tuple(np.conj(a) for a in lp.alphas))
    params = lrep.rs_local_params(lp, conj)
    return lrep.rs_lambda_local(params, kmax)


def _self_pair_a_powers(rep: RepModel, rec, kmax: int) -> np.ndarray:
    lp = lrep.satake_at(rep, rec)
    conj = lrep.LocalParams(rec, tuple(np.conj(a) for a in lp.alphas))
    params = lrep.rs_local_params(lp, conj)
    out = np.zeros(kmax + 1, dtype=complex)
    if kmax >= 1:
        out[1:] = lrep.rs_a_local(params, kmax)
    return out


def _tail_bound(norm: int, sigma: float, kmax: int, n: int, delta: float) -> float:
    """sum_{k > kmax} (k+1)^(n^2) Np^(2 k delta) Np^(-k sigma), summed until
    terms drop below 1e-18 of the partial (they decay geometrically)."""
    r = norm ** (2.0 * delta - sigma)
    if r >= 1.0:
        raise ContractError("tail bound divergent: sigma too small for delta")
    total = 0.0
    term_k = kmax + 1
    while True:
        term = (term_k + 1) ** (n * n) * r**term_k
        total += term
        term_k += 1
        if term <= 1e-18 * max(total, 1e-300) or term_k > kmax + 10000:
            break
    return total


def thm12_product(
    rep: RepModel,
    sigma: float,
    X: int,
    kmax: int | None = None,
    eps: float = DEFAULT_EPS,
    strict_grc: bool = False,
) -> ProductLedger:
    """prod_{Np <= X} (1 + sum_{k=2}^{kmax} lam_{pi x ~pi}(p^k) / Np^{k sigma}).

    kmax defaults to n^2 + 1; the contribution of larger exponents is folded
    into tail_estimate via |lam(p^k)| <= (k+1)^{n^2} Np^{2 k delta} with
    delta the unconditional parameter bound (or 0 under strict_grc).
    """
    return _pair_product(rep, sigma, X, kmax, eps, strict_grc, use_a=False)


def thm12_a_product(
    rep: RepModel,
    sigma: float,
    X: int,
    kmax: int | None = None,
    eps: float = DEFAULT_EPS,
    strict_grc: bool = False,
) -> ProductLedger:
    """Same product over the log-derivative coefficients a_{pi x ~pi}(p^k).

    Additionally verifies a(p^k) <= (n^2+1) lam(p^k) pointwise for
    k <= n^2 + 1, which follows from the non-negative recursion.
    """
    return _pair_product(rep, sigma, X, kmax, eps, strict_grc, use_a=True)


def _pair_product(rep, sigma, X, kmax, eps, strict_grc, use_a) -> ProductLedger:
    n = rep.degree
    _require_sigma(sigma, n, eps)
    if kmax is None:
        kmax = n * n + 1
    if kmax < n * n + 1:
        raise InputError(f"kmax must be at least n^2+1 = {n * n + 1}")
    delta = 0.0 if strict_grc else 0.5 - 1.0 / (n * n + 1)
    ledger = ProductLedger(sigma, 2, kmax)
    if X < 2:
        return ledger
    for rec in numfield.enumerate_prime_ideals(rep.field, X):
        lam = _self_pair_lambda_powers(rep, rec, kmax)
        if use_a:
            a = _self_pair_a_powers(rep, rec, kmax)
            for k in range(2, n * n + 2):
                if k <= kmax and a[k].real > (n * n + 1) * lam[k].real + 1e-9:
                    raise AssertionError(
                        f"a(p^{k}) exceeds (n^2+1) lam(p^{k}) at Np={rec.norm}"
                    )
            coeffs = a
        else:
            coeffs = lam
        factor = 1.0
        for k in range(2, kmax + 1):
            factor += coeffs[k].real / rec.norm ** (k * sigma)
        ledger.record(rec.norm, factor)
        ledger.tail_estimate += _tail_bound(rec.norm, sigma, kmax, n, delta)
    return ledger


def iterative_diagnostic_D(
    rep: RepModel, k: int, sigma: float, X: int
) -> float:
    """Square-free diagnostic sum: sum_{n squarefree <= X} lam(n^k) / n^{k sigma}.

    Diagnostic only; sigma is allowed down to 0.5 (exclusive) so the decay of
    increments can be observed on both sides of the product threshold.
    """
    if not (0.5 < sigma <= 1.1):
        raise ContractError("sigma must lie in (0.5, 1.1] for the diagnostic sum")
    if X < 1:
        raise InputError("X must be >= 1")
    if not rep.field.is_rational:
        raise InputError("the diagnostic sum is indexed by square-free integers")
    total = 1.0  # n = 1 term
    if X < 2:
        return total
    sf = is_squarefree_table(X)
    rep_t = rep.contragredient()
    kmax = k  # lam(n^k) for squarefree n needs local power exactly k
    # local lambda(p^k) per prime, then multiplicative over squarefree n
    primes = numfield.enumerate_prime_ideals(rep.field, X)
    lam_pk = np.zeros(X + 1, dtype=complex)
    for rec in primes:
        lam_pk[rec.norm] = _self_pair_lambda_powers(rep, rec, kmax)[k]
    value = np.zeros(X + 1, dtype=complex)
    value[1] = 1.0
    spf = np.zeros(X + 1, dtype=np.int64)
    for rec in primes:
        p = rec.norm
        sl = spf[p::p]
        sl[sl == 0] = p
    for m in range(2, X + 1):
        if not sf[m]:
            continue
        p = int(spf[m])
        value[m] = lam_pk[p] * value[m // p]
        total += value[m].real / float(m) ** (k * sigma)
    return total


# -- naive-convolution correction factors -----------------------------------------


def local_b_coeffs(rep1: RepModel, rep2: RepModel, rec, K: int) -> np.ndarray:
    """b(0..K) at one prime: conv of lam_1 lam_2 against the pair inverse."""
    lp1 = lrep.satake_at(rep1, rec)
    lp2 = lrep.satake_at(rep2, rec)
    lam1 = lrep.standard_lambda_local(lp1, K)
    lam2 = lrep.standard_lambda_local(lp2, K)
    mu12 = lrep.rs_mu_local(lrep.rs_local_params(lp1, lp2), K)
    prod = lam1 * lam2
    b = np.zeros(K + 1, dtype=complex)
    for kk in range(K + 1):
        b[kk] = np.dot(prod[: kk + 1], mu12[kk::-1])
    return b


def local_d_coeffs(rep: RepModel, rec, K: int) -> np.ndarray:
    """d(0..K) at one prime: pair coefficients against the naive inverse.

    The naive inverse follows mu_naive(p^m) = -sum_j |lam(p^j)|^2 mu_naive(p^{m-j}).
    """
    lp = lrep.satake_at(rep, rec)
    lam = lrep.standard_lambda_local(lp, K)
    lam_sq = np.abs(lam) ** 2
    mu_naive = np.zeros(K + 1, dtype=complex)
    mu_naive[0] = 1.0
    for m in range(1, K + 1):
        mu_naive[m] = -np.dot(lam_sq[1 : m + 1], mu_naive[m - 1 :: -1])
    pair = _self_pair_lambda_powers(rep, rec, K)
    d = np.zeros(K + 1, dtype=complex)
    for kk in range(K + 1):
        d[kk] = np.dot(pair[: kk + 1], mu_naive[kk::-1])
    return d


def H_partial(
    rep1: RepModel,
    rep2: RepModel,
    sigma: float,
    X: int,
    K: int | None = None,
    eps: float = DEFAULT_EPS,
) -> ProductLedger:
    """prod_{Np <= X} sum_{k<=K} b(k, p) Np^{-k sigma} with a truncation report.

    Converges for sigma past 1 - 1/(n^2+1); refused below threshold + eps.
    """
    n = max(rep1.degree, rep2.degree)
    _require_sigma(sigma, n, eps)
    if K is None:
        K = n * n + 1
    if K < 2:
        raise InputError("K must be >= 2")
    delta = 0.5 - 1.0 / (n * n + 1)
    ledger = ProductLedger(sigma, 0, K)
    if X < 2:
        return ledger
    for rec in numfield.enumerate_prime_ideals(rep1.field, X):
        b = local_b_coeffs(rep1, rep2, rec, K)
        factor = 0.0
        for k in range(K + 1):
            factor += b[k].real / rec.norm ** (k * sigma)
        ledger.record(rec.norm, factor)
        ledger.tail_estimate += _tail_bound(rec.norm, sigma, K, n, delta)
    return ledger


def G_partial(
    rep1: RepModel,
    rep2: RepModel,
    sigma: float,
    X: int,
    eps: float = DEFAULT_EPS,
) -> ProductLedger:
    """Square-free variant: local factor (1 + lam_1 lam_2 Np^-sigma) times the
    inverse pair local factor (exact polynomial, no truncation tail)."""
    n = max(rep1.degree, rep2.degree)
    _require_sigma(sigma, n, eps)
    deg = rep1.degree * rep2.degree
    ledger = ProductLedger(sigma, 0, deg)
    if X < 2:
        return ledger
    for rec in numfield.enumerate_prime_ideals(rep1.field, X):
        lp1 = lrep.satake_at(rep1, rec)
        lp2 = lrep.satake_at(rep2, rec)
        lam1 = complex(sum(lp1.alphas))
        lam2 = complex(sum(lp2.alphas))
        mu12 = lrep.rs_mu_local(lrep.rs_local_params(lp1, lp2), deg)
        x = rec.norm ** (-sigma)
        inv = 0.0 + 0.0j
        for k in range(deg + 1):
            inv += mu12[k] * x**k
        factor = ((1.0 + lam1 * lam2 * x) * inv).real
        ledger.record(rec.norm, factor)
    return ledger
