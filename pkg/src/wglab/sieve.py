"""Prime tables, prime counting and the von Mangoldt function."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterator

import numpy as np

from .errors import InvalidArgument, OutOfRange

DEFAULT_SEGMENT = 1 << 18


def _small_sieve(n: int) -> np.ndarray:
    flags = np.ones(n + 1, dtype=bool)
    flags[: min(2, n + 1)] = False
    for i in range(2, math.isqrt(n) + 1):
        if flags[i]:
            flags[i * i :: i] = False
    return flags


def iter_segments(lo: int, hi: int, segment_size: int = DEFAULT_SEGMENT) -> Iterator[np.ndarray]:
    """Yield ascending arrays of the primes in ``[lo, hi]``, one per segment.

    Memory is bounded by ``segment_size`` plus the base primes up to
    ``sqrt(hi)``, so this is the path for limits too large to tabulate.
    """
    if segment_size < 1:
        raise InvalidArgument("segment_size must be positive")
    lo = max(lo, 2)
    if hi < lo:
        return
    base = np.flatnonzero(_small_sieve(math.isqrt(hi)))
    for start in range(lo, hi + 1, segment_size):
        stop = min(start + segment_size, hi + 1)
        flags = np.ones(stop - start, dtype=bool)
        for p in base:
            p = int(p)
            if p * p >= stop:
                break
            first = max(p * p, -(-start // p) * p)
            flags[first - start :: p] = False
        yield np.flatnonzero(flags) + start


@dataclass(frozen=True)
class SieveTable:
    """Primes up to ``limit`` with flags and the prime-counting prefix.

    Attributes:
        limit: largest integer covered.
        is_prime: boolean array of length ``limit + 1``.
        primes: ascending int64 array of primes ``<= limit``.
        prime_count_prefix: ``prime_count_prefix[n] == pi(n)``.
    """

    limit: int
    is_prime: np.ndarray = field(repr=False)
    primes: np.ndarray = field(repr=False)
    prime_count_prefix: np.ndarray = field(repr=False)

    def pi(self, x: int) -> int:
        if x < 0:
            return 0
        if x > self.limit:
            raise OutOfRange(f"pi({x}) beyond sieve limit {self.limit}")
        return int(self.prime_count_prefix[x])

    def primes_upto(self, x: int) -> np.ndarray:
        return self.primes[: self.pi(x)]

    def prime_powers_upto(self, x: int, k: int) -> np.ndarray:
        """Primes ``p`` with ``p**k <= x`` (the set P_k(x))."""
        if k < 1:
            raise InvalidArgument("k must be >= 1")
        r = _iroot(x, k)
        return self.primes_upto(r)

    def mangoldt(self) -> np.ndarray:
        """Array ``L`` with ``L[n] = Lambda(n)`` for ``0 <= n <= limit``."""
        out = np.zeros(self.limit + 1)
        for p in self.primes:
            p = int(p)
            lp = math.log(p)
            q = p
            while q <= self.limit:
                out[q] = lp
                if q > self.limit // p:
                    break
                q *= p
        return out


def _iroot(x: int, k: int) -> int:
    """Largest integer r with r**k <= x."""
    if x < 1:
        return 0
    r = int(round(x ** (1.0 / k)))
    while r**k > x:
        r -= 1
    while (r + 1) ** k <= x:
        r += 1
    return r


def build_sieve(limit: int, segment_size: int = DEFAULT_SEGMENT) -> SieveTable:
    """Build the prime table up to ``limit`` with a segmented sieve."""
    if limit < 2:
        raise InvalidArgument(f"sieve limit must be >= 2, got {limit}")
    is_prime = np.zeros(limit + 1, dtype=bool)
    for seg in iter_segments(2, limit, segment_size):
        is_prime[seg] = True
    primes = np.flatnonzero(is_prime).astype(np.int64)
    prefix = np.cumsum(is_prime, dtype=np.int64)
    for arr in (is_prime, primes, prefix):
        arr.setflags(write=False)
    return SieveTable(limit, is_prime, primes, prefix)


@lru_cache(maxsize=8)
def _cached_sieve(size: int) -> SieveTable:
    return build_sieve(size)


def sieve_for(limit: int) -> SieveTable:
    """Shared table covering at least ``limit``, rounded up to a power of two."""
    return _cached_sieve(1 << max(10, (max(limit, 2) - 1).bit_length()))


def von_mangoldt(n: int) -> float:
    """Lambda(n): ``log p`` when ``n = p**j`` with ``j >= 1``, else 0."""
    if n < 1:
        raise InvalidArgument("von_mangoldt is defined for n >= 1")
    if n == 1:
        return 0.0
    p = smallest_prime_factor(n)
    m = n
    while m % p == 0:
        m //= p
    return math.log(p) if m == 1 else 0.0


def smallest_prime_factor(n: int) -> int:
    if n < 2:
        raise InvalidArgument("n must be >= 2")
    if n % 2 == 0:
        return 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return d
        d += 2
    return n


def factorize(n: int) -> dict[int, int]:
    """Prime factorization by trial division, ``{p: e}``."""
    if n < 1:
        raise InvalidArgument("n must be >= 1")
    out: dict[int, int] = {}
    while n > 1:
        p = smallest_prime_factor(n)
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        out[p] = e
    return out


def divisor_count(n: int) -> int:
    return math.prod(e + 1 for e in factorize(n).values())


def divisor_count_array(limit: int) -> np.ndarray:
    d = np.zeros(limit + 1, dtype=np.int64)
    for i in range(1, limit + 1):
        d[i::i] += 1
    return d
