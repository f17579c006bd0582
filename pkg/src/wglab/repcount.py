"""Exact counts of ordered Waring-Goldbach tuples.

Everything here is integer arithmetic on int64 arrays. The default
convolution is a direct shift-and-add over the sparser operand; the FFT
path is an optional accelerator that must agree with it exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Mapping, Union

import numpy as np

from .errors import DependencyError, InvalidArgument, OutOfRange
from .sieve import _iroot, sieve_for

GOLDBACH2 = "goldbach2"
TERNARY = "ternary"
QUINARY = "quinary"

MAX_TABLE = 10**8

Coeff = Union[Callable[[int], float], Mapping[int, float], np.ndarray, None]


def _check_limit(n: int) -> None:
    if n > MAX_TABLE:
        raise OutOfRange(f"{n} exceeds the table limit {MAX_TABLE}")


def prime_power_indicator(limit: int, k: int = 1) -> np.ndarray:
    """``ind[n] = 1`` iff ``n = p**k`` for a prime ``p``, for ``n <= limit``."""
    table = sieve_for(_iroot(limit, k))
    ind = np.zeros(limit + 1, dtype=np.int64)
    p = table.primes_upto(_iroot(limit, k))
    ind[p**k] = 1
    return ind


def convolve_direct(a: np.ndarray, b: np.ndarray, limit: int) -> np.ndarray:
    """``c[n] = sum_i a[i] b[n-i]`` for ``n <= limit`` in exact int64."""
    if np.count_nonzero(a) > np.count_nonzero(b):
        a, b = b, a
    out = np.zeros(limit + 1, dtype=np.int64)
    b = b[: limit + 1]
    for i in np.flatnonzero(a[: limit + 1]):
        i = int(i)
        width = min(len(b), limit + 1 - i)
        out[i : i + width] += int(a[i]) * b[:width]
    return out


def convolve_fft(a: np.ndarray, b: np.ndarray, limit: int) -> np.ndarray:
    """Floating-point transform convolution rounded back to integers.

    Raises :class:`ArithmeticError` if the rounding residue is not safely
    below 1/2 or the magnitudes approach 2**53.
    """
    a = np.asarray(a[: limit + 1], dtype=np.float64)
    b = np.asarray(b[: limit + 1], dtype=np.float64)
    bound = float(np.abs(a).sum() * np.abs(b).max()) if len(b) else 0.0
    if bound >= 2.0**52:
        raise ArithmeticError("convolution values too large for exact FFT rounding")
    n = 1 << (len(a) + len(b) - 1).bit_length()
    c = np.fft.irfft(np.fft.rfft(a, n) * np.fft.rfft(b, n), n)[: limit + 1]
    r = np.rint(c)
    if len(r) and np.max(np.abs(c - r)) > 0.25:
        raise ArithmeticError("FFT rounding residue too large")
    out = np.zeros(limit + 1, dtype=np.int64)
    out[: len(r)] = r.astype(np.int64)
    return out


def convolve(a: np.ndarray, b: np.ndarray, limit: int, method: str = "direct") -> np.ndarray:
    if method == "direct":
        return convolve_direct(a, b, limit)
    if method == "fft":
        return convolve_fft(a, b, limit)
    raise InvalidArgument(f"unknown convolution method {method!r}")


def _table_size(n: int) -> int:
    _check_limit(n)
    return 1 << max(10, int(n).bit_length())


@lru_cache(maxsize=4)
def _linear_tables(size: int) -> tuple[np.ndarray, np.ndarray]:
    ind = prime_power_indicator(size, 1)
    r2 = convolve_direct(ind, ind, size)
    for arr in (ind, r2):
        arr.setflags(write=False)
    return ind, r2


@lru_cache(maxsize=4)
def _square_tables(size: int) -> tuple[np.ndarray, ...]:
    sq = prime_power_indicator(size, 2)
    r2 = convolve_direct(sq, sq, size)
    r3 = convolve_direct(r2, sq, size)
    r4 = convolve_direct(r3, sq, size)
    for arr in (sq, r2, r3, r4):
        arr.setflags(write=False)
    return sq, r2, r3, r4


def goldbach_table(limit: int) -> np.ndarray:
    """``r2[m]`` = ordered prime pairs summing to ``m``, valid for ``m <= limit``."""
    return _linear_tables(_table_size(limit))[1]


def square_tables(limit: int) -> tuple[np.ndarray, ...]:
    """Indicator of prime squares and its 2-, 3- and 4-fold self-convolutions."""
    return _square_tables(_table_size(limit))


@dataclass(frozen=True)
class CountTable:
    """Exact ordered-tuple counts ``counts[N]`` for ``0 <= N <= limit``."""

    kind: str
    limit: int
    counts: np.ndarray = field(repr=False)

    def __getitem__(self, n: int) -> int:
        if n < 0 or n > self.limit:
            raise OutOfRange(f"N={n} outside table [0, {self.limit}]")
        return int(self.counts[n])


def count_goldbach2(M: int) -> int:
    """Ordered prime pairs ``(p1, p2)`` with ``p1 + p2 = M``."""
    if M < 4:
        return 0
    return int(goldbach_table(M)[M])


def count_ternary(N: int, ordered: bool = True) -> int:
    """Ordered prime triples summing to ``N`` (multisets if ``ordered=False``)."""
    if not ordered:
        return multiset_count(N, 1, 3)
    if N < 6:
        return 0
    _, r2 = _linear_tables(_table_size(N))
    p = sieve_for(N).primes_upto(N - 4)
    return int(r2[N - p].sum())


def count_ternary_range(X: int, method: str = "direct") -> CountTable:
    """Ternary counts for every ``N <= X`` via two self-convolutions."""
    if X < 6:
        raise InvalidArgument("range limit must be >= 6")
    _check_limit(X)
    ind = prime_power_indicator(X, 1)
    r2 = convolve(ind, ind, X, method)
    r3 = convolve(r2, ind, X, method)
    r3.setflags(write=False)
    return CountTable(TERNARY, X, r3)


def count_goldbach2_range(X: int, method: str = "direct") -> CountTable:
    if X < 4:
        raise InvalidArgument("range limit must be >= 4")
    _check_limit(X)
    ind = prime_power_indicator(X, 1)
    r2 = convolve(ind, ind, X, method)
    r2.setflags(write=False)
    return CountTable(GOLDBACH2, X, r2)


def count_quinary_squares(N: int, ordered: bool = True) -> int:
    """Ordered 5-tuples of primes with ``p1^2 + ... + p5^2 = N``.

    Meet in the middle: pairs of prime squares against triples.
    """
    if not ordered:
        return multiset_count(N, 2, 5)
    if N < 20:
        return 0
    _, r2, r3, _ = square_tables(N)
    m = np.flatnonzero(r2[: N + 1])
    return int(np.dot(r2[m], r3[N - m]))


def count_quinary_range(X: int, method: str = "direct") -> CountTable:
    if X < 20:
        raise InvalidArgument("range limit must be >= 20")
    _check_limit(X)
    sq = prime_power_indicator(X, 2)
    r2 = convolve(sq, sq, X, method)
    r3 = convolve(r2, sq, X, method)
    r5 = convolve(r3, r2, X, method)
    r5.setflags(write=False)
    return CountTable(QUINARY, X, r5)


def count_range(kind: str, X: int, method: str = "direct") -> CountTable:
    funcs = {GOLDBACH2: count_goldbach2_range, TERNARY: count_ternary_range, QUINARY: count_quinary_range}
    if kind not in funcs:
        raise InvalidArgument(f"unknown count kind {kind!r}")
    return funcs[kind](X, method)


def count_single(kind: str, N: int) -> int:
    funcs = {GOLDBACH2: count_goldbach2, TERNARY: count_ternary, QUINARY: count_quinary_squares}
    if kind not in funcs:
        raise InvalidArgument(f"unknown count kind {kind!r}")
    return funcs[kind](N)


def count_foursquare_diag(X: int) -> tuple[int, int]:
    """Solutions of ``p1^2 + p2^2 = p3^2 + p4^2`` with all primes ``<= X``.

    Returns ``(total, offdiag)`` where the diagonal is the ``2 pi(X)^2 - pi(X)``
    solutions with ``{p1, p2} = {p3, p4}``.
    """
    if X < 2:
        raise InvalidArgument("X must be >= 2")
    p = sieve_for(X).primes_upto(X)
    sq = p * p
    sums = (sq[:, None] + sq[None, :]).ravel()
    _, mult = np.unique(sums, return_counts=True)
    total = int(np.sum(mult.astype(np.int64) ** 2))
    n = len(p)
    return total, total - (2 * n * n - n)


def multiset_count(N: int, k: int, u: int) -> int:
    """Unordered count: non-decreasing prime u-tuples with sum of k-th powers N."""
    if N < u * 2**k:
        return 0
    powers = [int(p) ** k for p in sieve_for(_iroot(N, k)).primes_upto(_iroot(N, k))]

    def rec(rem: int, start: int, left: int) -> int:
        if left == 1:
            i = _bisect(powers, rem)
            return int(i >= start and i < len(powers) and powers[i] == rem)
        total = 0
        for i in range(start, len(powers)):
            if powers[i] * left > rem:
                break
            total += rec(rem - powers[i], i, left - 1)
        return total

    return rec(N, 0, u)


def _bisect(arr, x) -> int:
    import bisect

    return bisect.bisect_left(arr, x)


def coefficient_array(coeff: Coeff, primes: np.ndarray) -> np.ndarray:
    """Evaluate a prime-indexed coefficient at ``primes`` as a float array."""
    if coeff is None:
        return np.ones(len(primes))
    if isinstance(coeff, np.ndarray):
        if len(coeff) < len(primes):
            raise DependencyError("coefficient array shorter than the prime list")
        return np.asarray(coeff[: len(primes)], dtype=float)
    try:
        if callable(coeff):
            return np.array([coeff(int(p)) for p in primes], dtype=float)
        return np.array([coeff[int(p)] for p in primes], dtype=float)
    except (KeyError, IndexError) as exc:
        raise DependencyError(f"coefficient undefined at a needed prime: {exc}") from exc


def weighted_count(N: int, k: int, u: int, coeff: Coeff = None) -> float:
    """``sum over J_{k,u}(N)`` of ``coeff(p1)``, ordered tuples.

    Supported pairs are ``(k, u) = (1, 2), (1, 3), (2, 5)``.
    """
    if (k, u) not in {(1, 2), (1, 3), (2, 5)}:
        raise InvalidArgument(f"(k, u) = ({k}, {u}) is not supported")
    if N < u * 2**k:
        return 0.0
    r = _iroot(N, k)
    primes = sieve_for(r).primes_upto(r)
    c = coefficient_array(coeff, primes)
    if (k, u) == (1, 2):
        rest = prime_power_indicator(N, 1)
    elif (k, u) == (1, 3):
        rest = goldbach_table(N)
    else:
        rest = square_tables(N)[3]
    idx = N - primes**k
    keep = idx >= 0
    return float(np.dot(c[keep], rest[idx[keep]]))


def weighted_count_many(Ns, k: int, u: int, coeff_values: np.ndarray) -> np.ndarray:
    """Vectorized :func:`weighted_count` for several N sharing coefficient data.

    ``coeff_values`` is aligned with the ascending primes up to the largest
    ``max(Ns)**(1/k)``; more than one coefficient vector may be stacked as
    rows of a 2-D array.
    """
    Ns = [int(n) for n in Ns]
    top = max(Ns)
    r = _iroot(top, k)
    primes = sieve_for(r).primes_upto(r)
    cv = np.atleast_2d(np.asarray(coeff_values, dtype=float))[:, : len(primes)]
    if (k, u) == (1, 3):
        rest = goldbach_table(top)
    elif (k, u) == (2, 5):
        rest = square_tables(top)[3]
    else:
        raise InvalidArgument(f"(k, u) = ({k}, {u}) is not supported")
    pk = primes**k
    out = np.zeros((cv.shape[0], len(Ns)))
    for j, n in enumerate(Ns):
        m = np.count_nonzero(pk <= n)
        out[:, j] = cv[:, :m] @ rest[n - pk[:m]]
    return out if np.ndim(coeff_values) > 1 else out[0]

