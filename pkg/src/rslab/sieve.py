"""Order-k character system over completely-split primes, and the power sieve.

For each prime ideal p in the sieve set P (norm <= P_cap, passing the
complete-splitting test, coprime to the avoided ideal) we fix the character

    chi(x) = e(ind_g(x) mod k / k),   g = designated residue-field generator,

which has exact order k because Np = 1 (mod k), and is trivial on unit
images because those are k-th powers by the membership test.  On ideals,
chi reads the residue of a canonical generator, so chi(b^k) = 1 whenever
(b, p) = 1: the detection property driving the sieve weight

    weight(n) = |sum_{p in P} chi_p(n) log Np|^2 + log^2(2 + N(a n)).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import lrep, numfield
from .numfield import FieldDesc, PrimeIdealRecord
from .util import ContractError, InputError

_ROOT_CACHE: dict[int, np.ndarray] = {}


def roots_of_unity(k: int) -> np.ndarray:
    if k not in _ROOT_CACHE:
        _ROOT_CACHE[k] = np.exp(2j * np.pi * np.arange(k) / k)
    return _ROOT_CACHE[k]


@dataclass
class PrimeCharacter:
    """chi on one sieve prime: exponent table over the residue field."""

    record: PrimeIdealRecord
    k: int
    exponents: np.ndarray | None  # residue -> exponent in Z/k; None above 10^4

    def exponent(self, residue: int) -> int:
        """ind_g(residue) mod k (residue nonzero)."""
        if self.exponents is not None:
            return int(self.exponents[residue])
        rf = numfield.residue_field(self.record)
        return rf.dlog(residue) % self.k

    def value(self, residue: int) -> complex:
        return complex(roots_of_unity(self.k)[self.exponent(residue)])


def build_character(fd: FieldDesc, record: PrimeIdealRecord, k: int) -> PrimeCharacter:
    """Order-k character at one prime; requires the complete-splitting test."""
    if not numfield.splits_completely_in_L(fd, k, record):
        raise ContractError(
            f"prime of norm {record.norm} fails the complete-splitting test for k={k}"
        )
    rf = numfield.residue_field(record)
    q = rf.q
    if q <= 10**4:
        table = np.zeros(q, dtype=np.int64)
        g = rf.generator()
        acc = 1
        for i in range(q - 1):
            table[acc] = i % k
            acc = rf.mul(acc, g)
        char = PrimeCharacter(record, k, table)
    else:
        char = PrimeCharacter(record, k, None)
    for u in numfield.unit_residues(record):
        if char.exponent(u) != 0:
            raise AssertionError("character not trivial on unit images")
    return char


@dataclass
class CharacterSystem:
    """The sieve data: field, order k, cap P, primes with their characters.

    `avoid` is a rational integer a generating the avoided ideal (a)O_F, so
    N(a) = a^degree and p | (a) iff p | a.
    """

    field: FieldDesc
    k: int
    P: int
    avoid: int
    primes: list[PrimeIdealRecord]
    characters: list[PrimeCharacter]

    @property
    def avoid_norm(self) -> int:
        return self.avoid ** self.field.degree

    def log_norms(self) -> np.ndarray:
        return np.log(np.array([rec.norm for rec in self.primes], dtype=float))


def build_system(
    fd: FieldDesc, k: int, P: int, avoid: int = 1
) -> CharacterSystem:
    """Characters for every qualifying prime of norm <= P, minus divisors of
    the avoided ideal (a rational integer generator, 1 for none)."""
    if k < 2:
        raise InputError("k must be >= 2")
    if avoid < 1:
        raise InputError("avoid must be a positive integer generator")
    primes = []
    for rec in numfield.enumerate_prime_ideals(fd, P):
        try:
            ok = numfield.splits_completely_in_L(fd, k, rec)
        except InputError:
            continue  # divides k * disc: excluded from the sieve set
        if not ok:
            continue
        if avoid != 1 and avoid % rec.residue_char == 0:
            continue
        primes.append(rec)
    if not primes:
        raise ContractError(
            f"empty sieve set for k={k}, P={P}; raise P (no prime of norm <= {P} "
            "passes the complete-splitting test)"
        )
    chars = [build_character(fd, rec, k) for rec in primes]
    return CharacterSystem(fd, k, P, avoid, primes, chars)


# -- evaluation on ideals --------------------------------------------------------


def _residue_of_ideal_q(char: PrimeCharacter, n: int) -> int:
    """Residue of the positive generator of (n) modulo the sieve prime."""
    return n % char.record.norm


def _residue_of_ideal_quad(char: PrimeCharacter, ideal_key) -> int:
    """Residue of the canonical generator: product of stored prime-ideal
    generators (character triviality on units makes the choice immaterial)."""
    rf = numfield.residue_field(char.record)
    fd = char.record.field
    acc = 1
    for (norm, p, conj), e in ideal_key:
        rec = None
        for cand in numfield.primes_over(fd, p):
            if (cand.norm, cand.residue_char, cand.conjugate_index) == (norm, p, conj):
                rec = cand
                break
        if rec is None:
            raise InputError(f"bad ideal key entry {(norm, p, conj)}")
        gen = numfield.prime_generator(rec)
        acc = rf.mul(acc, rf.pow(rf.embed(*gen), e))
    return acc


def char_on_ideal(system: CharacterSystem, prime_index: int, ideal) -> complex:
    """chi_p(n): zero when p | n, else the character of a generator residue."""
    char = system.characters[prime_index]
    if system.field.is_rational:
        n = int(ideal)
        if n <= 0:
            raise InputError("ideals of Q are indexed by positive integers")
        if n % char.record.norm == 0:
            return 0.0 + 0.0j
        return char.value(_residue_of_ideal_q(char, n))
    key = tuple(ideal)
    for (norm, p, conj), _e in key:
        if p == char.record.residue_char and (
            char.record.split_tag != numfield.TAG_SPLIT
            or conj == char.record.conjugate_index
        ):
            return 0.0 + 0.0j
    res = _residue_of_ideal_quad(char, key)
    if res == 0:
        return 0.0 + 0.0j
    return char.value(res)


@dataclass
class SieveWeightReport:
    ideal: object
    char_sum: complex
    weight: float


def char_sum_on_ideal(system: CharacterSystem, ideal) -> complex:
    total = 0.0 + 0.0j
    for i, rec in enumerate(system.primes):
        total += char_on_ideal(system, i, ideal) * math.log(rec.norm)
    return total


def char_value_table(system: CharacterSystem, X: int) -> np.ndarray:
    """Over Q: matrix chi_p(n) for p in the system, 1 <= n <= X (column 0 zero).

    Vectorized through the per-prime exponent tables; the workhorse behind
    repeated weight evaluations.
    """
    if not system.field.is_rational:
        raise InputError("value tables are an over-Q fast path")
    out = np.zeros((len(system.primes), X + 1), dtype=complex)
    n = np.arange(X + 1)
    for i, char in enumerate(system.characters):
        p = char.record.norm
        roots = roots_of_unity(char.k)
        if char.exponents is not None:
            exps = char.exponents
        else:
            # big prime: one full walk of the cyclic group builds the row
            rf = numfield.residue_field(char.record)
            exps = np.zeros(p, dtype=np.int64)
            g = rf.generator()
            acc = 1
            for idx in range(p - 1):
                exps[acc] = idx % char.k
                acc = rf.mul(acc, g)
        vals = roots[exps]
        vals[0] = 0.0 + 0.0j
        out[i] = vals[n % p]
    return out


def char_sum_table(system: CharacterSystem, X: int) -> np.ndarray:
    """Over Q: char_sum(n) for 0 <= n <= X in one vectorized pass."""
    table = char_value_table(system, X)
    return system.log_norms() @ table


def weight_table(system: CharacterSystem, X: int) -> np.ndarray:
    """Over Q: weight(n) for 0 <= n <= X (index 0 meaningless)."""
    cs = char_sum_table(system, X)
    n = np.arange(X + 1, dtype=float)
    logs = np.log(2.0 + system.avoid_norm * n)
    return np.abs(cs) ** 2 + logs**2


def ideal_norm_of(system: CharacterSystem, ideal) -> int:
    if system.field.is_rational:
        return int(ideal)
    return lrep.ideal_norm(tuple(ideal))


def sieve_weight(system: CharacterSystem, ideal) -> SieveWeightReport:
    """|char sum|^2 + log^2(2 + N(a n)), exactly as the sieve bound uses it."""
    s = char_sum_on_ideal(system, ideal)
    nn = ideal_norm_of(system, ideal) * system.avoid_norm
    w = abs(s) ** 2 + math.log(2 + nn) ** 2
    return SieveWeightReport(ideal, s, w)


@dataclass
class SieveBoundReport:
    lhs_power_sum: float
    rhs_raw: float  # P^-2 sum f(n) weight(n), inexplicit constants omitted
    ratio: float | None
    P: int
    k: int


def sieve_upper_bound(
    f: np.ndarray, system: CharacterSystem, weights: np.ndarray | None = None
) -> SieveBoundReport:
    """Both sides of the sieve inequality for f supported on 1..X over Q.

    lhs  = sum_m f(m^k); rhs_raw = P^-2 sum_n f(n) weight(n).  The inexplicit
    discriminant/order constants of the bound are not modeled; callers read
    the ratio.  A precomputed weight table may be passed when evaluating many
    sequences against one system.
    """
    if not system.field.is_rational:
        raise InputError("array-indexed sieve bounds are defined over Q")
    f = np.asarray(f, dtype=float)
    if f.ndim != 1:
        raise InputError("f must be a 1-d array indexed by n (index 0 unused)")
    if (f < 0).any():
        raise InputError("f must be non-negative")
    X = len(f) - 1
    lhs = 0.0
    m = 1
    while m**system.k <= X:
        lhs += f[m**system.k]
        m += 1
    if weights is None:
        weights = weight_table(system, X)
    rhs = float(np.dot(f[1:], weights[1 : X + 1])) / system.P**2
    ratio = (rhs / lhs) if lhs > 0 else None
    return SieveBoundReport(lhs, rhs, ratio, system.P, system.k)


@dataclass
class SpxReport:
    """Smoothed k-th-power coefficient sum next to its sieve bound."""

    direct: float
    sieve_bound_raw: float
    lhs_check: float
    P_used: int
    X: float
    k: int


def s_pi_experiment(
    rep: lrep.RepModel,
    k: int,
    X: float,
    P: int | None = None,
    v=None,
) -> SpxReport:
    """Sum of lam_{pi x ~pi}(n^k) V(n^k / X) against the sieve's raw bound.

    P defaults to ceil(X^(1/(n^2+1))), the balancing choice for the smoothed
    sum.  Negative roundoff in the non-negative coefficients is clipped at
    zero before entering the sieve weight.
    """
    from . import analytic  # deferred: analytic imports this module's sibling

    if v is None:
        v = analytic.TestFunctionV()
    n = rep.degree
    if P is None:
        P = max(2, math.ceil(X ** (1.0 / (n * n + 1))))
    system = build_system(rep.field, k, P)
    limit = int(math.floor(2.5 * X))
    rep_t = rep.contragredient()
    table = lrep.build_coeff_table(rep, rep_t, "lambda", max(limit, 2))
    if not rep.field.is_rational:
        raise InputError("the smoothed-power experiment runs over Q")
    lam = np.clip(table.values.real, 0.0, None)
    direct = 0.0
    m = 1
    while m**k <= limit:
        direct += lam[m**k] * v(m**k / X)
        m += 1
    idx = np.arange(limit + 1, dtype=float)
    f = lam[: limit + 1] * v.eval_array(idx / X)
    f[0] = 0.0
    bound = sieve_upper_bound(f, system)
    return SpxReport(direct, bound.rhs_raw, bound.lhs_power_sum, P, X, k)
