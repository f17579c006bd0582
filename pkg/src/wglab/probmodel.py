"""Uniform probability model on compositions of ``N`` into three parts.

``Omega`` is the set of ordered triples of positive integers summing to
``N``. Event ``A`` fixes a prime first coordinate, ``A'`` asks the last two
coordinates to be primes, and their intersection is the ternary set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidArgument, UndefinedResult
from .repcount import count_ternary, goldbach_table
from .sieve import sieve_for
from .singular import singular_series_ternary


@dataclass(frozen=True)
class EventCounts:
    N: int
    omega_size: int
    count_A: int
    count_Aprime: int
    count_both: int

    @property
    def p_A(self) -> float:
        return self.count_A / self.omega_size

    @property
    def p_Aprime(self) -> float:
        return self.count_Aprime / self.omega_size

    @property
    def p_both(self) -> float:
        return self.count_both / self.omega_size


def _check_N(N: int) -> None:
    if N < 9 or N % 2 == 0:
        raise InvalidArgument("N must be odd and >= 9")


def omega_size(N: int) -> int:
    return (N * N - 3 * N + 2) // 2


def event_counts(N: int) -> EventCounts:
    """Exact cardinalities of ``Omega``, ``A``, ``A'`` and ``A & A'``.

    ``A'`` sums over first coordinates ``2 <= n1 <= N - 4``.
    """
    _check_N(N)
    p = sieve_for(N).primes_upto(N - 2).astype(np.int64)
    count_A = int(np.maximum(N - p - 1, 0).sum())
    r2 = goldbach_table(N)
    count_Aprime = int(r2[4 : N - 1].sum())
    return EventCounts(N, omega_size(N), count_A, count_Aprime, count_ternary(N))


def conjecture_ratio(N: int) -> float:
    """``P(A & A') / (P(A) P(A'))``."""
    ev = event_counts(N)
    denom = ev.count_A * ev.count_Aprime
    if denom == 0:
        raise UndefinedResult(f"P(A) P(A') vanishes at N={N}")
    return ev.count_both * ev.omega_size / denom


def goldbach_average_check(N: int) -> tuple[int, float, float]:
    """Sum of ordered Goldbach counts over even ``4 <= m <= N - 5`` against its prediction."""
    _check_N(N)
    r2 = goldbach_table(N)
    lhs = int(r2[4 : N - 4 : 2].sum())
    g = singular_series_ternary(N, 10**5).value
    rhs = g * N * N / (2 * math.log(N) ** 2)
    return lhs, rhs, lhs / rhs
