"""Singular series and main terms for the ternary and quinary problems."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath
import numpy as np
from scipy import integrate

from .errors import InvalidArgument
from .sieve import factorize, sieve_for

TERNARY_LOG = "ternary_log"
TERNARY_INTEGRAL = "ternary_integral"
QUINARY = "quinary"

SAFETY = 2.0


@dataclass(frozen=True)
class SeriesValue:
    """An Euler product truncated at ``cutoff`` with a relative error bound."""

    value: float
    tail_bound: float
    cutoff: int

    @property
    def interval(self) -> tuple[float, float]:
        return self.value * (1 - self.tail_bound), self.value * (1 + self.tail_bound)


def _primes_upto(c: int) -> np.ndarray:
    return sieve_for(c).primes_upto(c)


def _cube_tail(c: int) -> float:
    # sum_{m >= c} m^-3 <= c^-3 + 1/(2 c^2)
    return 1.0 / c**3 + 1.0 / (2.0 * c * c)


def singular_series_ternary(N: int, cutoff: int = 10**5, allow_even: bool = False) -> SeriesValue:
    """Ternary singular series; factors for every ``p | N`` are exact.

    Only primes above ``cutoff`` that do not divide ``N`` are left out, and
    each contributes a factor in ``(1, 1 + 1/(p-1)^3]``.
    """
    if cutoff < 100:
        raise InvalidArgument("cutoff must be >= 100")
    if N < 1:
        raise InvalidArgument("N must be positive")
    if N % 2 == 0:
        if allow_even:
            return SeriesValue(0.0, 0.0, cutoff)
        raise InvalidArgument("the ternary singular series vanishes for even N")
    divs = set(factorize(N))
    p = _primes_upto(cutoff).astype(float)
    div_mask = np.isin(p, list(divs))
    logs = np.log1p(1.0 / (p - 1) ** 3)
    logs[div_mask] = np.log1p(-1.0 / (p[div_mask] - 1) ** 2)
    big = [q for q in divs if q > cutoff]
    extra = math.fsum(math.log1p(-1.0 / (q - 1) ** 2) for q in big)
    value = math.exp(math.fsum(logs) + extra)
    tail = SAFETY * math.expm1(_cube_tail(cutoff))
    return SeriesValue(value, tail, cutoff)


@lru_cache(maxsize=8)
def twin_prime_constant(cutoff: int = 10**4) -> SeriesValue:
    """``C_2 = prod_{p >= 3} (1 - 1/(p-1)^2)``.

    Uses the explicit product up to ``cutoff`` and sums the rest through
    ``log(1 - 1/(p-1)^2) = -sum_{n>=2} (2^n - 2) p^-n / n`` with prime zeta
    values, which makes the tail error negligible.
    """
    if cutoff < 100:
        raise InvalidArgument("cutoff must be >= 100")
    p = _primes_upto(cutoff)
    p = p[p >= 3]
    with mpmath.workdps(40):
        head = mpmath.fsum(mpmath.log1p(-mpmath.mpf(1) / (int(x) - 1) ** 2) for x in p)
        c = mpmath.mpf(cutoff)
        tail = mpmath.mpf(0)
        n = 2
        while True:
            rest = mpmath.primezeta(n) - mpmath.fsum(mpmath.mpf(int(x)) ** -n for x in p) - mpmath.mpf(2) ** -n
            tail += (mpmath.mpf(2) ** n - 2) / n * rest
            # remaining terms: sum_{m>n} 2^m/m * c^(1-m)/(m-1), geometric with ratio 2/c
            rem = (mpmath.mpf(2) ** (n + 1)) * c ** (-n) / ((n + 1) * n) / (1 - 2 / c)
            if rem < mpmath.mpf(10) ** -30:
                break
            n += 1
        value = float(mpmath.exp(head - tail))
        err = float(rem) + 1e-25
    return SeriesValue(value, SAFETY * err, cutoff)


def hl_binary(M: int, cutoff: int = 10**4) -> SeriesValue:
    """Hardy-Littlewood main term for ordered Goldbach pairs of even ``M``."""
    if M % 2 or M < 6:
        raise InvalidArgument("M must be even and >= 6")
    c2 = twin_prime_constant(cutoff)
    factor = Fraction(1)
    for p in factorize(M):
        if p > 2:
            factor *= Fraction(p - 1, p - 2)
    value = 2 * c2.value * M / math.log(M) ** 2 * float(factor)
    return SeriesValue(value, c2.tail_bound, cutoff)


def odd_prime_product(M: int) -> Fraction:
    out = Fraction(1)
    for p in factorize(M):
        if p > 2:
            out *= Fraction(p - 1, p - 2)
    return out


# ---------------------------------------------------------------------------
# quinary local densities


@lru_cache(maxsize=4096)
def unit_square_counts(m: int) -> tuple[int, ...]:
    """``counts[r] = #{(x1..x5) units mod m : sum x_i^2 = r mod m}``."""
    s = np.zeros(m, dtype=np.int64)
    for x in range(m):
        if math.gcd(x, m) == 1:
            s[x * x % m] += 1
    acc = s.copy()
    for _ in range(4):
        full = np.convolve(acc, s)
        acc = full[:m].copy()
        acc[: len(full) - m] += full[m:]
    return tuple(int(v) for v in acc)


def local_density(p: int, N: int) -> Fraction:
    """``sigma_p(N) = (p/(p-1))^5 m^-4 #{units mod m, sum x^2 = N}``, ``m = 8`` at ``p = 2`` else ``p``."""
    m = 8 if p == 2 else p
    count = unit_square_counts(m)[N % m]
    return Fraction(p, p - 1) ** 5 * Fraction(count, m**4)


def density_deviation_bound(p: float) -> float:
    """Explicit bound on ``|sigma_p - 1|`` for odd p from Gauss-sum evaluation."""
    even = sum(math.comb(5, j) * p ** (j / 2) * (p - 1) for j in (0, 2, 4))
    odd = sum(math.comb(5, j) * p ** ((j + 1) / 2) for j in (1, 3, 5))
    return (even + odd) / (p - 1) ** 5


def singular_series_quinary(N: int, cutoff: int = 1000) -> SeriesValue:
    """Product of local densities for five prime squares, ``N = 5 mod 24``."""
    if N % 24 != 5:
        raise InvalidArgument("the quinary series is defined here for N = 5 mod 24")
    if cutoff < 3:
        raise InvalidArgument("cutoff must be >= 3")
    logs = [math.log(local_density(int(p), N)) for p in _primes_upto(cutoff)]
    value = math.exp(math.fsum(logs))
    # sum over integers n > cutoff of a decreasing bound, by an integral
    tail_sum, _ = integrate.quad(density_deviation_bound, cutoff, np.inf)
    return SeriesValue(value, SAFETY * math.expm1(tail_sum), cutoff)


# ---------------------------------------------------------------------------
# main terms


def _graded_rule(lo: float, hi: float, order: int = 16, smallest: float = 0.25):
    """Gauss-Legendre nodes on panels refined geometrically toward both ends."""
    x, w = np.polynomial.legendre.leggauss(order)
    half = (hi - lo) / 2
    edges = [0.0]
    d = smallest
    while d < half:
        edges.append(d)
        d *= 2
    edges.append(half)
    e = np.array(edges)
    cuts = np.concatenate([lo + e, hi - e[::-1][1:]])
    a, b = cuts[:-1], cuts[1:]
    mid, rad = (a + b) / 2, (b - a) / 2
    nodes = (mid[:, None] + rad[:, None] * x[None, :]).ravel()
    weights = (rad[:, None] * w[None, :]).ravel()
    return nodes, weights


def ternary_integral(N: float, order: int = 12) -> float:
    """``iint_{u, v >= 2, N-u-v >= 2} du dv / (log u log v log(N-u-v))``.

    The inner variable is mapped to ``[0, 1]`` so one graded rule serves
    every outer node and the whole integrand is evaluated as one array.
    """
    if N <= 6:
        return 0.0
    span = N - 6.0
    us, wu = _graded_rule(2.0, N - 4.0, order)
    t, wt = _graded_rule(0.0, 1.0, order, smallest=0.25 / span)
    width = (N - 4.0 - us)[:, None]
    vs = 2.0 + width * t[None, :]
    f = 1.0 / (np.log(vs) * np.log(N - us[:, None] - vs))
    inner = (f @ wt) * width[:, 0]
    return float(np.dot(wu, inner / np.log(us)))


def ternary_integral_reference(N: float) -> float:
    """Adaptive-quadrature version of :func:`ternary_integral` (slow)."""
    val, _ = integrate.dblquad(
        lambda v, u: 1.0 / (math.log(u) * math.log(v) * math.log(N - u - v)),
        2.0,
        N - 4.0,
        lambda u: 2.0,
        lambda u: N - 2.0 - u,
        epsabs=0,
        epsrel=1e-9,
    )
    return val


def main_term(N: int, kind: str, cutoff: int | None = None) -> float:
    """Asymptotic main term for ``#J_{1,3}(N)`` or ``#J_{2,5}(N)``."""
    if N < 100:
        raise InvalidArgument("main terms need N >= 100")
    if kind == TERNARY_LOG:
        g = singular_series_ternary(N, cutoff or 10**5).value
        return g * N * N / (2 * math.log(N) ** 3)
    if kind == TERNARY_INTEGRAL:
        g = singular_series_ternary(N, cutoff or 10**5).value
        return g * ternary_integral(N)
    if kind == QUINARY:
        g = singular_series_quinary(N, cutoff or 1000).value
        return g * math.pi**2 * N**1.5 / (24 * math.log(N) ** 5)
    raise InvalidArgument(f"unknown main-term kind {kind!r}")
