"""Shared plumbing: error types, tolerances, hashing, formatting, reductions."""

from __future__ import annotations

import hashlib
import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

# Library-wide comparison policy: relative 1e-9 with an absolute floor near
# zero.  Double precision with n <= 8, k <= 30 keeps conditioning mild enough
# that nothing tighter is needed.
REL_TOL = 1e-9
ABS_TOL = 1e-12


class InputError(ValueError):
    """Bad user-supplied input (unknown field, missing file, negative weight)."""


class ContractError(RuntimeError):
    """A stated precondition is violated (sigma below threshold, strip exits)."""


def close(a, b, rel: float = REL_TOL, abs_floor: float = ABS_TOL) -> bool:
    """Tolerance comparison used across the library."""
    return abs(a - b) <= max(abs_floor, rel * max(abs(a), abs(b)))


def hash_unit(*key) -> float:
    """Deterministic uniform value in [0, 1) keyed by the given tuple.

    Platform-independent: BLAKE2b over the repr of the key, top 8 bytes
    mapped to [0, 1).  Used for reproducible synthetic Satake angles.
    """
    digest = hashlib.blake2b(
        ("|".join(repr(k) for k in key)).encode("ascii"), digest_size=8
    ).digest()
    return int.from_bytes(digest, "big") / 2.0**64


def format_sig(x: float) -> str:
    """Pinned 12-significant-digit decimal rendering for CSV/JSON output."""
    if isinstance(x, complex):
        raise TypeError("format complex parts separately")
    if math.isnan(x) or math.isinf(x):
        return repr(x)
    s = f"{x:.12g}"
    return "0" if s in ("-0", "-0.0") else s


def blocked_sum(values: np.ndarray, block_size: int = 4096) -> float | complex:
    """Fixed-order blocked reduction.

    Summing per block and then over blocks in index order gives the same
    bits for every run with the same block size, which is recorded in run
    configs.
    """
    n = len(values)
    if n == 0:
        return 0.0
    blocks = [values[i : i + block_size].sum() for i in range(0, n, block_size)]
    return sum(blocks)


def parallel_map(fn, items, workers: int = 1):
    """Map with optional thread pool; results always in input order."""
    if workers <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def sieve_primes(limit: int) -> np.ndarray:
    """Primes <= limit by Eratosthenes (numpy bool sieve)."""
    if limit < 2:
        return np.zeros(0, dtype=np.int64)
    mask = np.ones(limit + 1, dtype=bool)
    mask[:2] = False
    for p in range(2, int(limit**0.5) + 1):
        if mask[p]:
            mask[p * p :: p] = False
    return np.nonzero(mask)[0].astype(np.int64)


def is_squarefree_table(limit: int) -> np.ndarray:
    """Boolean table sf[n] for 0 <= n <= limit (sf[0] = False)."""
    sf = np.ones(limit + 1, dtype=bool)
    sf[0] = False
    for p in sieve_primes(int(limit**0.5)):
        sf[p * p :: p * p] = False
    return sf


def kronecker(a: int, n: int) -> int:
    """Kronecker symbol (a|n), full generality including n <= 0 and n even."""
    if n == 0:
        return 1 if a in (1, -1) else 0
    sign = 1
    if n < 0:
        n = -n
        if a < 0:
            sign = -1
    # factor out 2s from n; (a|2) = 0, 1, -1 for a even, a = +-1 mod 8, else
    while n % 2 == 0:
        n //= 2
        if a % 2 == 0:
            return 0
        if a % 8 in (3, 5):
            sign = -sign
    a %= n
    # now n odd positive: Jacobi via reciprocity
    while a != 0:
        while a % 2 == 0:
            a //= 2
            if n % 8 in (3, 5):
                sign = -sign
        if a % 4 == 3 and n % 4 == 3:
            sign = -sign
        a, n = n % a, a
    return sign if n == 1 else 0
