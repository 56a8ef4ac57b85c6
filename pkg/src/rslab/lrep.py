"""Satake-parameter models and Rankin-Selberg coefficient recursions.

A RepModel supplies local parameter tuples (alpha_1, ..., alpha_n) at each
unramified prime ideal (all supported models are unramified everywhere).
Pair convolutions use the unramified parameter products alpha_i * beta_j,
and the three coefficient families at a prime power p^v are

    a(p^v)      = sum gamma^v                  (log-derivative coefficients)
    v lam(p^v)  = sum_{l<=v} a(p^l) lam(p^{v-l})
    v mu(p^v)   = -sum_{l<=v} a(p^l) mu(p^{v-l}),  mu = 0 beyond degree.

Multiplicative extension turns local data into coefficient tables indexed by
ideal norm (Q) or by ideal factorization (quadratic fields).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field

import numpy as np

from . import numfield, qseries, symfunc
from .numfield import FieldDesc, PrimeIdealRecord
from .util import InputError, hash_unit

_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class RepModel:
    """A representation model: degree, base field, and parameter source.

    sources:
      gl1            trivial character, alphas = (1,)
      unitary        seeded synthetic, |alpha_j| = 1
      bounded        seeded synthetic, |alpha_j| <= Np^delta
      gl2w12/gl2w16  level-one holomorphic forms, unitary normalization
      conj:<base>    the contragredient of a base model
    """

    degree: int
    field: FieldDesc
    source: str
    seed: int = 0
    delta: float = 0.0
    conjugated: bool = False

    # -- constructors ----------------------------------------------------------

    @staticmethod
    def gl1_trivial(fd: FieldDesc | None = None) -> "RepModel":
        return RepModel(1, fd or FieldDesc.rationals(), "gl1")

    @staticmethod
    def synthetic_unitary(n: int, seed: int, fd: FieldDesc | None = None) -> "RepModel":
        if n < 1:
            raise InputError("degree must be >= 1")
        return RepModel(n, fd or FieldDesc.rationals(), "unitary", seed=seed)

    @staticmethod
    def synthetic_bounded(
        n: int, seed: int, delta: float, fd: FieldDesc | None = None
    ) -> "RepModel":
        cap = 0.5 - 1.0 / (n * n + 1)
        if not 0 <= delta <= cap + 1e-15:
            raise InputError(f"delta={delta} outside [0, {cap}] for degree {n}")
        return RepModel(n, fd or FieldDesc.rationals(), "bounded", seed=seed, delta=delta)

    @staticmethod
    def gl2_holomorphic(weight: int) -> "RepModel":
        if weight not in (12, 16):
            raise InputError("supported weights: 12, 16")
        return RepModel(2, FieldDesc.rationals(), f"gl2w{weight}")

    def contragredient(self) -> "RepModel":
        if self.is_self_dual:
            return self
        return RepModel(
            self.degree, self.field, self.source, self.seed, self.delta,
            not self.conjugated,
        )

    @property
    def is_self_dual(self) -> bool:
        # real-coefficient sources; synthetic models are complex in general
        return self.source in ("gl1", "gl2w12", "gl2w16")

    @property
    def weight(self) -> int | None:
        return int(self.source[4:]) if self.source.startswith("gl2w") else None

    def label(self) -> str:
        bits = [self.source]
        if self.source in ("unitary", "bounded"):
            bits.append(f"n{self.degree}")
            bits.append(f"s{self.seed}")
        if self.source == "bounded":
            bits.append(f"d{self.delta:g}")
        if self.conjugated:
            bits.insert(0, "conj")
        return ":".join(bits)

    def conductor_meta(self) -> dict:
        """Arithmetic conductor norm and archimedean parameters (metadata)."""
        if self.weight is not None:
            w = self.weight
            mu = [complex((w - 1) / 2), complex((w + 1) / 2)]
        else:
            mu = [0j] * self.degree
        return {"conductor_norm": 1, "archimedean": mu}


def analytic_conductor(rep: RepModel, t: float = 0.0) -> float:
    """D_F^n * Nq * prod_v prod_j (3 + |it + mu_j|^d(v)); reporting only."""
    meta = rep.conductor_meta()
    base = abs(rep.field.discriminant) ** rep.degree * meta["conductor_norm"]
    out = float(base)
    for mu in meta["archimedean"]:
        out *= 3.0 + abs(1j * t + mu)
    return out


@dataclass(frozen=True)
class LocalParams:
    """Satake tuple at one prime ideal."""

    prime: PrimeIdealRecord
    alphas: tuple


class _Gl2Cache:
    """Normalized prime eigenvalues lambda(p) for the two weights."""

    def __init__(self):
        self.tables: dict[int, tuple[int, np.ndarray]] = {}

    def lam(self, weight: int, p: int) -> float:
        have = self.tables.get(weight)
        if have is None or have[0] < p:
            limit = max(p, 10**4 if have is None else have[0] * 10)
            limit = min(max(limit, p), 10**6)
            self.tables[weight] = (limit, qseries.hecke_eigenvalues_normalized(weight, limit))
        return float(self.tables[weight][1][p])

    def ensure(self, weight: int, limit: int) -> np.ndarray:
        have = self.tables.get(weight)
        if have is None or have[0] < limit:
            self.tables[weight] = (limit, qseries.hecke_eigenvalues_normalized(weight, limit))
        return self.tables[weight][1]


_gl2_cache = _Gl2Cache()


def gl2_prime_eigenvalues(weight: int, limit: int) -> np.ndarray:
    """lambda(n) table to `limit` (cached; index = n)."""
    return _gl2_cache.ensure(weight, limit)


def satake_at(rep: RepModel, record: PrimeIdealRecord) -> LocalParams:
    """Local Satake tuple; deterministic in (source, seed, Np)."""
    if rep.field != record.field:
        raise InputError("prime record belongs to a different field")
    n = rep.degree
    Np = record.norm
    if rep.source == "gl1":
        alphas = (1.0 + 0.0j,)
    elif rep.source == "unitary":
        alphas = tuple(
            np.exp(2j * math.pi * hash_unit("u", rep.seed, Np, j)) for j in range(n)
        )
    elif rep.source == "bounded":
        alphas = []
        for j in range(n):
            theta = _TWO_PI * hash_unit("b-ang", rep.seed, Np, j)
            u = hash_unit("b-mod", rep.seed, Np, j)
            r = Np ** (rep.delta * (2.0 * u - 1.0))
            alphas.append(r * np.exp(1j * theta))
        alphas = tuple(alphas)
    elif rep.weight is not None:
        if not rep.field.is_rational:
            raise InputError("holomorphic GL(2) models live over Q")
        lam = _gl2_cache.lam(rep.weight, record.residue_char)
        # alpha + conj(alpha) = lam, alpha*conj(alpha) = 1
        half = lam / 2.0
        s = math.sqrt(max(0.0, 1.0 - half * half))
        alphas = (complex(half, s), complex(half, -s))
    else:
        raise InputError(f"unknown source {rep.source}")
    if rep.conjugated:
        alphas = tuple(np.conj(a) for a in alphas)
    return LocalParams(record, alphas)


def standard_lambda_local(lp: LocalParams, K: int) -> np.ndarray:
    """lam(p^0..p^K) of the standard L-function: complete homogeneous sums."""
    return symfunc.complete_homogeneous_from_roots(lp.alphas, K)


def rs_local_params(lp: LocalParams, lp2: LocalParams) -> tuple:
    """Pairwise parameter products alpha_i * beta_j, row-major."""
    if lp.prime != lp2.prime:
        raise InputError("mismatched primes in pair convolution")
    return tuple(a * b for a in lp.alphas for b in lp2.alphas)


def rs_a_local(params, K: int) -> np.ndarray:
    """a(p^1..p^K) = power sums of the pair parameters."""
    return symfunc.power_sums(params, K)


def rs_lambda_local(params, K: int) -> np.ndarray:
    """lam(p^0..p^K) by the log-derivative recursion v*lam_v = sum a_l lam_{v-l}."""
    a = symfunc.power_sums(params, K) if K >= 1 else np.zeros(0, dtype=complex)
    lam = np.zeros(K + 1, dtype=complex)
    lam[0] = 1.0
    for v in range(1, K + 1):
        lam[v] = np.dot(a[:v], lam[v - 1 :: -1]) / v
    return lam


def rs_mu_local(params, K: int) -> np.ndarray:
    """mu(p^0..p^K) by v*mu_v = -sum a_l mu_{v-l}.

    The inverse local factor is a polynomial of degree nn', so the recursion
    returns roundoff-size values past that index; they are not forced to
    zero, which lets tests observe the degree bound directly.
    """
    a = symfunc.power_sums(params, K) if K >= 1 else np.zeros(0, dtype=complex)
    mu = np.zeros(K + 1, dtype=complex)
    mu[0] = 1.0
    for v in range(1, K + 1):
        mu[v] = -np.dot(a[:v], mu[v - 1 :: -1]) / v
    return mu


# -- coefficient tables --------------------------------------------------------


@dataclass
class CoeffTable:
    """Multiplicative coefficient sequence over ideals of norm <= limit.

    Over Q, `values` is a complex array indexed by n (index 0 unused).  Over
    quadratic fields, `values` maps ideal keys to values, where an ideal key
    is a sorted tuple of ((norm, p, conj_index), exponent) prime-power pairs.
    For kind "a" only prime-power ideals carry values (von Mangoldt support).
    """

    kind: str
    field: FieldDesc
    limit: int
    rep_labels: tuple
    values: np.ndarray | dict
    prime_index: dict = dc_field(default_factory=dict)

    def value(self, key):
        if self.field.is_rational:
            if self.kind == "a":
                return self.values.get(key, 0.0 + 0.0j)
            return self.values[key]
        return self.values.get(key, 0.0 + 0.0j)

    def norm_aggregated(self) -> dict[int, complex]:
        """Optional view: sum of values over ideals of equal norm."""
        if self.field.is_rational:
            raise InputError("norm aggregation is a quadratic-field view")
        out: dict[int, complex] = {}
        for key, v in self.values.items():
            norm = ideal_norm(key)
            out[norm] = out.get(norm, 0.0 + 0.0j) + v
        return out


def ideal_norm(key) -> int:
    """Norm of a quadratic ideal key."""
    out = 1
    for (norm, _p, _i), e in key:
        out *= norm**e
    return out


def local_coefficients(
    rep: RepModel, rep2: RepModel | None, kind: str, record: PrimeIdealRecord, K: int
) -> np.ndarray:
    """Coefficient list at powers 0..K of one prime (kind lambda/mu/a).

    For kind "a" index 0 is set to 0 (the series starts at p^1).
    """
    lp = satake_at(rep, record)
    if rep2 is None:
        params = lp.alphas
    else:
        params = rs_local_params(lp, satake_at(rep2, record))
    if kind == "lambda":
        return rs_lambda_local(params, K)
    if kind == "mu":
        return rs_mu_local(params, K)
    if kind == "a":
        out = np.zeros(K + 1, dtype=complex)
        if K >= 1:
            out[1:] = rs_a_local(params, K)
        return out
    raise InputError(f"unknown coefficient kind {kind}")


def build_coeff_table(
    rep: RepModel, rep2: RepModel | None, kind: str, X: int
) -> CoeffTable:
    """Multiplicative extension of local data to all ideals of norm <= X."""
    fd = rep.field
    if rep2 is not None and rep2.field != fd:
        raise InputError("pair models must share the base field")
    if kind not in ("lambda", "mu", "a"):
        raise InputError(f"unknown coefficient kind {kind}")
    labels = (rep.label(),) if rep2 is None else (rep.label(), rep2.label())
    primes = numfield.enumerate_prime_ideals(fd, X) if X >= 2 else []
    local: dict = {}
    for rec in primes:
        K = int(math.log(X) / math.log(rec.norm))
        while rec.norm ** (K + 1) <= X:
            K += 1
        while K >= 1 and rec.norm**K > X:
            K -= 1
        local[rec] = local_coefficients(rep, rep2, kind, rec, K)
    if fd.is_rational:
        return _extend_rational(kind, fd, X, labels, local)
    return _extend_quadratic(kind, fd, X, labels, local)


def _extend_rational(kind, fd, X, labels, local) -> CoeffTable:
    if kind == "a":
        vals: dict[int, complex] = {}
        for rec, coeffs in local.items():
            p = rec.norm
            for e in range(1, len(coeffs)):
                vals[p**e] = coeffs[e]
        return CoeffTable(kind, fd, X, labels, vals)
    values = np.zeros(X + 1, dtype=complex)
    values[1] = 1.0
    # smallest-prime-factor pass: value(n) = local[p][e] * value(n / p^e)
    spf = np.zeros(X + 1, dtype=np.int64)
    for rec in local:
        p = rec.norm
        sl = spf[p::p]
        sl[sl == 0] = p
    by_p = {rec.norm: coeffs for rec, coeffs in local.items()}
    for n in range(2, X + 1):
        p = int(spf[n])
        m, e = n, 0
        while m % p == 0:
            m //= p
            e += 1
        values[n] = by_p[p][e] * values[m]
    return CoeffTable(kind, fd, X, labels, values)


def _extend_quadratic(kind, fd, X, labels, local) -> CoeffTable:
    recs = sorted(local, key=PrimeIdealRecord.sort_key)
    keys = [(rec.norm, rec.residue_char, rec.conjugate_index) for rec in recs]
    coeff = [local[rec] for rec in recs]
    vals: dict = {}

    if kind == "a":
        for k, c in zip(keys, coeff):
            for e in range(1, len(c)):
                vals[((k, e),)] = c[e]
        return CoeffTable(kind, fd, X, labels, vals, dict(zip(keys, recs)))

    def expand(i: int, norm: int, factors: tuple, value: complex):
        vals[factors] = value
        for j in range(i, len(recs)):
            pn = keys[j][0]
            if norm * pn > X:
                break
            e, cur = 1, norm * pn
            while cur <= X:
                expand(j + 1, cur, factors + ((keys[j], e),), value * coeff[j][e])
                e += 1
                cur *= pn

    expand(0, 1, (), 1.0 + 0.0j)
    return CoeffTable(kind, fd, X, labels, vals, dict(zip(keys, recs)))


# -- inequality verification ----------------------------------------------------


@dataclass
class Violation:
    prime_norm: int
    power: int
    inequality: str
    lhs: float
    rhs: float


def check_coefficient_inequalities(
    rep: RepModel,
    rep2: RepModel,
    primes: list[PrimeIdealRecord],
    K: int,
    tol: float = 1e-9,
) -> list[Violation]:
    """Verify the coefficient dominance inequalities at each prime power.

    At every listed prime and 1 <= v <= K:

        |mu_{pi x pi'}(p^v)|   <= sqrt(lam_{pi x ~pi} lam_{pi' x ~pi'}) + tol
        |a_{pi x pi'}(p^v)|    <= sqrt(a_{pi x ~pi} a_{pi' x ~pi'}) + tol
        |lam_{pi x pi'}(p^v)|  <= sqrt(lam_{pi x ~pi} lam_{pi' x ~pi'}) + tol
        |lam_pi(p^v)|^2        <= lam_{pi x ~pi}(p^v) + tol

    Violations are returned as data (expected empty).
    """
    out: list[Violation] = []
    for rec in primes:
        lp1 = satake_at(rep, rec)
        lp2 = satake_at(rep2, rec)
        pair = rs_local_params(lp1, lp2)
        self1 = rs_local_params(lp1, LocalParams(rec, tuple(np.conj(a) for a in lp1.alphas)))
        self2 = rs_local_params(lp2, LocalParams(rec, tuple(np.conj(a) for a in lp2.alphas)))
        mu12 = rs_mu_local(pair, K)
        lam12 = rs_lambda_local(pair, K)
        a12 = rs_a_local(pair, K)
        lam1 = rs_lambda_local(self1, K)
        lam2 = rs_lambda_local(self2, K)
        a1 = rs_a_local(self1, K)
        a2 = rs_a_local(self2, K)
        lam_std = standard_lambda_local(lp1, K)
        for v in range(1, K + 1):
            rhs_lam = math.sqrt(max(lam1[v].real, 0.0) * max(lam2[v].real, 0.0))
            rhs_a = math.sqrt(max(a1[v - 1].real, 0.0) * max(a2[v - 1].real, 0.0))
            checks = (
                ("mu-dominance", abs(mu12[v]), rhs_lam),
                ("a-dominance", abs(a12[v - 1]), rhs_a),
                ("lambda-dominance", abs(lam12[v]), rhs_lam),
                ("standard-pairing", abs(lam_std[v]) ** 2, max(lam1[v].real, 0.0)),
            )
            for name, lhs, rhs in checks:
                if lhs > rhs + tol:
                    out.append(Violation(rec.norm, v, name, float(lhs), float(rhs)))
    return out
