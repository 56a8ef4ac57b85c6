"""Prime-ideal arithmetic for Q and class-number-one quadratic fields.

Supported fields are Q and Q(sqrt(d)) for d in the fixed list
{-1, -2, -3, -7, -11, 2, 3, 5, 13}.  Every ideal is principal there, so
residue characters of prime ideals descend to ideal characters without
ray-class bookkeeping: the character of an ideal is the character of the
residue of any generator, well defined whenever the character kills unit
images.

Integral basis convention: O_F = Z[w] with

    w = sqrt(d)        and  w^2 = d              if d != 1 (mod 4),
    w = (1+sqrt(d))/2  and  w^2 = w + (d-1)/4    if d  = 1 (mod 4).

Field elements are (x, y) meaning x + y*w.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

from .util import InputError, kronecker, sieve_primes

SUPPORTED_D = (-1, -2, -3, -7, -11, 2, 3, 5, 13)

TAG_RATIONAL = "Rational"
TAG_SPLIT = "Split"
TAG_INERT = "Inert"
TAG_RAMIFIED = "Ramified"

# Fundamental units for the supported real fields, as (x, y) in the w-basis;
# verified against the norm equation at import (see _check_unit_table).
_FUNDAMENTAL_UNITS = {
    2: (1, 1),  # 1 + sqrt(2)
    3: (2, 1),  # 2 + sqrt(3)
    5: (0, 1),  # (1 + sqrt(5)) / 2
    13: (1, 1),  # (3 + sqrt(13)) / 2
}

# Torsion generators: -1 except for the two fields with extra roots of unity.
_TORSION = {-1: (0, 1), -3: (0, 1)}  # i, zeta_6
_TORSION_ORDER = {-1: 4, -3: 6}


@dataclass(frozen=True)
class FieldDesc:
    """Q or a supported quadratic field, with its basic invariants."""

    kind: str  # "Q" | "quadratic"
    d: int | None
    discriminant: int
    degree: int
    unit_rank: int

    @staticmethod
    def rationals() -> "FieldDesc":
        return FieldDesc("Q", None, 1, 1, 0)

    @staticmethod
    def quadratic(d: int) -> "FieldDesc":
        if d not in SUPPORTED_D:
            raise InputError(
                f"d={d} not in the supported class-number-one list {SUPPORTED_D}"
            )
        disc = d if d % 4 == 1 else 4 * d
        rank = 1 if d > 0 else 0
        return FieldDesc("quadratic", d, disc, 2, rank)

    @property
    def is_rational(self) -> bool:
        return self.kind == "Q"

    # -- O_F = Z[w] arithmetic ------------------------------------------------

    def _w_poly(self) -> tuple[int, int]:
        """(t, m) with w^2 = t*w + m."""
        d = self.d
        if d % 4 == 1:
            return 1, (d - 1) // 4
        return 0, d

    def elem_mul(self, a: tuple[int, int], b: tuple[int, int]) -> tuple[int, int]:
        t, m = self._w_poly()
        x1, y1 = a
        x2, y2 = b
        return (x1 * x2 + m * y1 * y2, x1 * y2 + x2 * y1 + t * y1 * y2)

    def elem_norm(self, a: tuple[int, int]) -> int:
        x, y = a
        d = self.d
        if d % 4 == 1:
            return x * x + x * y + y * y * (1 - d) // 4
        return x * x - d * y * y

    def elem_pow(self, a: tuple[int, int], e: int) -> tuple[int, int]:
        out = (1, 0)
        base = a
        while e:
            if e & 1:
                out = self.elem_mul(out, base)
            base = self.elem_mul(base, base)
            e >>= 1
        return out


@dataclass(frozen=True)
class UnitGenerators:
    """Torsion generator plus fundamental units (unit_rank of them)."""

    torsion_gen: tuple[int, int] | int
    torsion_order: int
    fundamental_units: tuple


def unit_generators(fd: FieldDesc) -> UnitGenerators:
    """Generators of O_F^x: precomputed, norm-checked table."""
    if fd.is_rational:
        return UnitGenerators(-1, 2, ())
    d = fd.d
    tors = _TORSION.get(d, (-1, 0))
    order = _TORSION_ORDER.get(d, 2)
    if d < 0:
        return UnitGenerators(tors, order, ())
    return UnitGenerators(tors, order, (_FUNDAMENTAL_UNITS[d],))


def _check_unit_table() -> None:
    for d, u in _FUNDAMENTAL_UNITS.items():
        fd = FieldDesc.quadratic(d)
        if fd.elem_norm(u) not in (1, -1):
            raise AssertionError(f"fundamental unit table broken at d={d}")
    for d, z in _TORSION.items():
        fd = FieldDesc.quadratic(d)
        order = _TORSION_ORDER[d]
        if fd.elem_pow(z, order) != (1, 0) or fd.elem_pow(z, order // 2) == (1, 0):
            raise AssertionError(f"torsion generator table broken at d={d}")


_check_unit_table()


@dataclass(frozen=True)
class PrimeIdealRecord:
    """A prime ideal of O_F, with enough residue data to evaluate characters.

    norm is p for degree-1 primes (Split / Ramified / Rational) and p^2 for
    Inert primes.  For degree-1 primes over a quadratic field, omega_root is
    the image of w in Z/p; Split conjugates are ordered by root value.
    """

    field: FieldDesc
    residue_char: int
    norm: int
    split_tag: str
    conjugate_index: int = 0
    omega_root: int | None = None

    def sort_key(self) -> tuple[int, int, int]:
        return (self.norm, self.residue_char, self.conjugate_index)


def splitting_type(fd: FieldDesc, p: int) -> str:
    """Splitting tag of the rational prime p, from the Kronecker symbol of
    the discriminant (Ramified exactly when p divides the discriminant)."""
    if fd.is_rational:
        return TAG_RATIONAL
    sym = kronecker(fd.discriminant, p)
    if sym == 0:
        return TAG_RAMIFIED
    return TAG_SPLIT if sym == 1 else TAG_INERT


def sqrt_mod_p(a: int, p: int) -> int | None:
    """A square root of a modulo an odd prime p (Tonelli-Shanks), or None."""
    a %= p
    if a == 0:
        return 0
    if kronecker(a, p) != 1:
        return None
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    # write p - 1 = q * 2^s with q odd
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = 2
    while kronecker(z, p) != -1:
        z += 1
    m, c, t, r = s, pow(z, q, p), pow(a, q, p), pow(a, (q + 1) // 2, p)
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        m, c = i, b * b % p
        t, r = t * c % p, r * b % p
    return r


def _minpoly_roots_mod_p(fd: FieldDesc, p: int) -> list[int]:
    """Roots of the minimal polynomial of w modulo p (0, 1, or 2 of them)."""
    t, m = fd._w_poly()
    if p == 2:
        return sorted(r for r in range(2) if (r * r - t * r - m) % 2 == 0)
    # x^2 - t x - m: roots (t +- s) / 2 with s^2 = t^2 + 4m = disc (mod p)
    s = sqrt_mod_p(fd.discriminant, p)
    if s is None:
        return []
    inv2 = pow(2, p - 2, p)
    return sorted({(t + s) * inv2 % p, (t - s) * inv2 % p})


def primes_over(fd: FieldDesc, p: int) -> list[PrimeIdealRecord]:
    """All prime ideals above the rational prime p, in conjugate order."""
    if fd.is_rational:
        return [PrimeIdealRecord(fd, p, p, TAG_RATIONAL)]
    tag = splitting_type(fd, p)
    if tag == TAG_INERT:
        return [PrimeIdealRecord(fd, p, p * p, TAG_INERT)]
    roots = _minpoly_roots_mod_p(fd, p)
    if tag == TAG_RAMIFIED:
        # unique double root
        return [PrimeIdealRecord(fd, p, p, TAG_RAMIFIED, 0, roots[0])]
    return [
        PrimeIdealRecord(fd, p, p, TAG_SPLIT, i, r) for i, r in enumerate(roots)
    ]


def enumerate_prime_ideals(fd: FieldDesc, X: int) -> list[PrimeIdealRecord]:
    """Every prime ideal of norm <= X, ascending by norm then residue
    characteristic then conjugate index.

    Rational primes come from an Eratosthenes sieve; classification is a
    Kronecker symbol per prime.
    """
    if X < 2:
        raise InputError("X must be >= 2")
    out: list[PrimeIdealRecord] = []
    for p in sieve_primes(X):
        for rec in primes_over(fd, int(p)):
            if rec.norm <= X:
                out.append(rec)
    out.sort(key=PrimeIdealRecord.sort_key)
    return out


class ResidueField:
    """Arithmetic in O_F/p, of size q = p (degree 1) or q = p^2 (inert).

    Elements are integers in [0, q).  Degree-2 elements encode a + b*wbar as
    a + b*p, where wbar satisfies wbar^2 = t*wbar + m (the minimal polynomial
    of w reduced mod p).
    """

    def __init__(self, record: PrimeIdealRecord):
        self.record = record
        self.p = record.residue_char
        self.q = record.norm
        self.deg = 1 if self.q == self.p else 2
        if record.field.is_rational:
            self._t, self._m = 0, 0
        else:
            self._t, self._m = record.field._w_poly()
            self._t %= self.p
            self._m %= self.p
        self._gen: int | None = None
        self._log: dict[int, int] | list[int] | None = None

    # -- element encoding -----------------------------------------------------

    def embed(self, x: int, y: int = 0) -> int:
        """Image of x + y*w in the residue field."""
        p = self.p
        if self.deg == 1:
            r = self.record.omega_root or 0
            return (x + y * r) % p
        return (x % p) + (y % p) * p

    def mul(self, a: int, b: int) -> int:
        p = self.p
        if self.deg == 1:
            return (a * b) % p
        a0, a1 = a % p, a // p
        b0, b1 = b % p, b // p
        cross = a1 * b1
        return ((a0 * b0 + self._m * cross) % p) + (
            (a0 * b1 + a1 * b0 + self._t * cross) % p
        ) * p

    def pow(self, a: int, e: int) -> int:
        if self.deg == 1:
            return pow(a, e, self.p)
        if a == 0:
            return 0 if e > 0 else 1
        e %= self.q - 1
        out = 1
        base = a
        while e:
            if e & 1:
                out = self.mul(out, base)
            base = self.mul(base, base)
            e >>= 1
        return out

    def units(self) -> range:
        """All nonzero elements in encoding order."""
        return range(1, self.q)

    # -- multiplicative structure ----------------------------------------------

    def order(self, a: int) -> int:
        """Multiplicative order of a (a != 0)."""
        n = self.q - 1
        order = n
        f = _factorize(n)
        for prime in f:
            while order % prime == 0 and self.pow(a, order // prime) == 1:
                order //= prime
        return order

    def generator(self) -> int:
        """Smallest element (in the fixed encoding order) of order q - 1."""
        if self._gen is None:
            n = self.q - 1
            f = _factorize(n)
            for cand in range(2, self.q):
                if self.deg == 2 and cand < self.p:
                    # prime subfield elements have order dividing p - 1 < q - 1
                    continue
                if all(self.pow(cand, n // r) != 1 for r in f):
                    self._gen = cand
                    break
            else:  # q = 2 or q = 3 edge: generator may be 1 only when q = 2
                self._gen = 1
        return self._gen

    def is_kth_power(self, x: int, k: int) -> bool:
        """x^((q-1)/gcd(k, q-1)) == 1; rejects x = 0."""
        if x % self.q == 0:
            raise InputError("zero residue rejected in power test")
        g = math.gcd(k, self.q - 1)
        return self.pow(x, (self.q - 1) // g) == 1

    def dlog(self, x: int) -> int:
        """Index of x with respect to the designated generator.

        Full lookup table for q <= 10^4, baby-step giant-step above.
        """
        if x == 0:
            raise InputError("dlog of zero")
        g = self.generator()
        if self.q <= 10**4:
            if self._log is None:
                table = [0] * self.q
                acc = 1
                for i in range(self.q - 1):
                    table[acc] = i
                    acc = self.mul(acc, g)
                self._log = table
            return self._log[x]
        return self._bsgs(g, x)

    def _bsgs(self, g: int, x: int) -> int:
        n = self.q - 1
        m = int(math.isqrt(n)) + 1
        baby: dict[int, int] = {}
        acc = 1
        for j in range(m):
            baby.setdefault(acc, j)
            acc = self.mul(acc, g)
        # g^{-m} = g^{n-m}
        gim = self.pow(g, n - m)
        gamma = x
        for i in range(m + 1):
            if gamma in baby:
                return (i * m + baby[gamma]) % n
            gamma = self.mul(gamma, gim)
        raise AssertionError("dlog failed; generator invariant broken")


@lru_cache(maxsize=None)
def residue_field(record: PrimeIdealRecord) -> ResidueField:
    return ResidueField(record)


def _factorize(n: int) -> dict[int, int]:
    out: dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def unit_residues(record: PrimeIdealRecord) -> list[int]:
    """Images of all unit generators (torsion first) in the residue field."""
    fd = record.field
    rf = residue_field(record)
    units = unit_generators(fd)
    if fd.is_rational:
        return [rf.embed(-1, 0)]
    out = [rf.embed(*units.torsion_gen)]
    out.extend(rf.embed(*u) for u in units.fundamental_units)
    return out


def residue_power_test(record: PrimeIdealRecord, x: int, k: int) -> bool:
    """Whether the residue x is a k-th power in O_F/p."""
    return residue_field(record).is_kth_power(x, k)


def splits_completely_in_L(fd: FieldDesc, k: int, record: PrimeIdealRecord) -> bool:
    """Membership test for the sieve prime set: Np = 1 (mod k) and every
    unit generator reduces to a k-th power in the residue field.

    Primes dividing k or the discriminant are rejected outright.
    """
    if k < 2:
        raise InputError("k must be >= 2")
    p = record.residue_char
    if k % p == 0 or (not fd.is_rational and fd.discriminant % p == 0):
        raise InputError(f"prime over {p} divides k*disc; excluded from the sieve set")
    if (record.norm - 1) % k != 0:
        return False
    rf = residue_field(record)
    return all(rf.is_kth_power(u, k) for u in unit_residues(record))


# -- principal generators of prime ideals (quadratic fields) -------------------


@lru_cache(maxsize=None)
def prime_generator(record: PrimeIdealRecord) -> tuple[int, int]:
    """An element generating the prime ideal (class number one).

    Inert primes are generated by p itself.  For degree-1 primes we search
    (x, y) with |N(x + y*w)| = p and x + y*omega_root = 0 (mod p); the search
    radius grows until a hit, which is guaranteed by principality.
    """
    fd = record.field
    if fd.is_rational:
        raise InputError("rational primes need no generator search")
    p = record.residue_char
    if record.split_tag == TAG_INERT:
        return (p, 0)
    r = record.omega_root
    bound = 4
    while bound < 10**7:
        for y in range(-bound, bound + 1):
            # x = -y*r (mod p); scan that congruence class
            x0 = (-y * r) % p
            for x in range(x0 - ((bound + x0) // p) * p, bound + 1, p):
                if x == 0 and y == 0:
                    continue
                if abs(fd.elem_norm((x, y))) == p:
                    return (x, y)
        bound *= 4
    raise AssertionError(f"no generator found for norm-{p} prime (d={fd.d})")
