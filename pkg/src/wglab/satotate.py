"""Sato-Tate statistics over the ternary Goldbach set.

The smoothing functions are interval indicators on the circle convolved
with an ``R``-fold box kernel of total width ``delta'``. That gives the
exact plateau/zero regions and coefficient decay the circle-method
argument needs, and it can be evaluated both in closed form and through
its cosine series.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import fft as sp_fft
from scipy.special import comb, zeta

from .errors import InvalidArgument, OutOfRange
from .hecke import chebyshev_u_all, hecke_for, sym_values
from .repcount import count_ternary, goldbach_table, weighted_count, weighted_count_many
from .sieve import _iroot, sieve_for

MAJORANT = "majorant"
MINORANT = "minorant"
TAIL_TARGET = 1e-9


@dataclass(frozen=True)
class AngleInterval:
    lo: float
    hi: float

    def __post_init__(self):
        if not (0.0 <= self.lo <= self.hi <= math.pi):
            raise InvalidArgument(f"need 0 <= lo <= hi <= pi, got [{self.lo}, {self.hi}]")

    def contains(self, theta):
        return (theta >= self.lo) & (theta <= self.hi)

    @property
    def length(self) -> float:
        return self.hi - self.lo


FULL = AngleInterval(0.0, math.pi)


def st_measure(I: AngleInterval) -> float:
    """Sato-Tate measure ``(2/pi) int_I sin^2``."""
    return (I.hi - I.lo) / math.pi - (math.sin(2 * I.hi) - math.sin(2 * I.lo)) / (2 * math.pi)


def count_angles(x: int, I: AngleInterval) -> int:
    """Number of primes ``p <= x`` with ``theta_p`` in ``I`` (closed)."""
    table = hecke_for(x)
    return int(np.count_nonzero(I.contains(table.prime_thetas(x))))


def _coefficients(N: int, k: int, j: int, mode: str) -> np.ndarray:
    r = _iroot(N, k)
    return sym_values(hecke_for(max(r, 2)), j, r, mode)


def twisted_sum(N: int, k: int, u: int, j: int, mode: str = "sym") -> float:
    """``sum over J_{k,u}(N)`` of the ``mode`` coefficient of ``sym^j`` at ``p1``.

    ``sym`` is ``U_j(cos theta)``, ``tensor`` its square and ``adjoint``
    the square minus one.
    """
    if (k, u) not in {(1, 3), (2, 5)}:
        raise InvalidArgument("supported (k, u) are (1, 3) and (2, 5)")
    if j < 0:
        raise InvalidArgument("j must be >= 0")
    if N < u * 2**k:
        return 0.0
    return weighted_count(N, k, u, _coefficients(N, k, j, mode))


def twisted_sums(Ns, k: int, u: int, j: int, mode: str = "sym") -> np.ndarray:
    Ns = list(Ns)
    return weighted_count_many(Ns, k, u, _coefficients(max(Ns), k, j, mode))


def count_J_with_angle(N: int, I: AngleInterval) -> int:
    """Ordered prime triples summing to ``N`` with ``theta_{p1}`` in ``I``."""
    if N < 6:
        return 0
    mask = I.contains(hecke_for(N).prime_thetas(N)).astype(np.int64)
    p = sieve_for(N).primes_upto(N)
    r2 = goldbach_table(N)
    keep = p <= N - 4
    return int(np.dot(mask[: len(p)][keep], r2[N - p[keep]]))


# ---------------------------------------------------------------------------
# smoothing


def _box_cdf(t, width: float, R: int):
    """CDF of a sum of R independent uniforms on ``[-width/(2R), width/(2R)]``."""
    s = np.clip(np.asarray(t, dtype=float) * R / width + R / 2.0, 0.0, float(R))
    out = np.zeros_like(s)
    for kk in range(R + 1):
        out += (-1) ** kk * comb(R, kk) * np.where(s > kk, (s - kk) ** R, 0.0)
    return out / math.factorial(R)


def coefficient_bound(n, width: float, delta: float, R: int):
    """``min{2(b-a), 2/(n pi), 2/(n pi) (R/(pi n delta'))^R}``."""
    n = np.asarray(n, dtype=float)
    base = 2.0 / (n * np.pi)
    return np.minimum(np.minimum(2.0 * width, base), base * (R / (np.pi * n * delta)) ** R)


def _tail_bound(n_max: int, delta: float, R: int) -> float:
    """Bound on ``2 sum_{n > n_max} |a_n|`` from the third coefficient bound."""
    const = (2.0 / math.pi) * (R / (math.pi * delta)) ** R
    return 2.0 * const * float(zeta(R + 1, n_max + 1))


def _choose_nmax(delta: float, R: int, target: float = TAIL_TARGET) -> int:
    lo, hi = 1, 2
    while _tail_bound(hi, delta, R) >= target:
        hi *= 2
    while lo < hi:
        mid = (lo + hi) // 2
        if _tail_bound(mid, delta, R) < target:
            hi = mid
        else:
            lo = mid + 1
    return lo


@dataclass(frozen=True)
class SmoothingFunction:
    """Majorant or minorant ``G(theta) = g(theta/2pi) + g(-theta/2pi)`` of an angle interval.

    ``a_coeffs[0]`` is the constant term of ``G`` and ``a_coeffs[n]`` for
    ``n >= 1`` the cosine coefficients of ``g``, so that
    ``G(theta) = a_0 + 2 sum a_n cos(n theta)``. ``cheb_coeffs[n]`` are the
    coefficients of ``U_n(cos theta)`` in the same function.
    """

    interval: AngleInterval
    a: float
    b: float
    delta: float
    R: int
    side: str
    n_max: int
    a_coeffs: np.ndarray = field(repr=False)
    cheb_coeffs: np.ndarray = field(repr=False)
    tail_bound: float = 0.0

    @property
    def base(self) -> float:
        return self.b - self.a

    def g(self, y):
        """The periodic function on the circle, in closed form."""
        y = np.asarray(y, dtype=float)
        start = self.a - self.delta / 2
        t = start + np.mod(y - start, 1.0)
        return _box_cdf(t - self.a, self.delta, self.R) - _box_cdf(t - self.b, self.delta, self.R)

    def g_series(self, y):
        """The truncated cosine/sine series of ``g``."""
        y = np.atleast_1d(np.asarray(y, dtype=float))
        n = np.arange(1, self.n_max + 1)
        c = (self.a + self.b) / 2
        amp = self._amplitudes()
        out = np.full(y.shape, self.base)
        for chunk in np.array_split(np.arange(len(y)), max(1, len(y) * self.n_max // 5_000_000)):
            out[chunk] += np.cos(2 * np.pi * np.outer(y[chunk] - c, n)) @ amp
        return out

    def _amplitudes(self) -> np.ndarray:
        n = np.arange(1, self.n_max + 1, dtype=float)
        w = self.base
        return 2 * np.sin(np.pi * n * w) / (np.pi * n) * np.sinc(n * self.delta / self.R) ** self.R

    def __call__(self, theta):
        """``G(theta)``, evaluated in closed form."""
        y = np.asarray(theta, dtype=float) / (2 * np.pi)
        return self.g(y) + self.g(-y)

    def series(self, theta):
        """``G(theta)`` from the stored cosine coefficients."""
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        n = np.arange(1, self.n_max + 1)
        out = np.full(theta.shape, self.a_coeffs[0])
        for chunk in np.array_split(np.arange(len(theta)), max(1, len(theta) * self.n_max // 5_000_000)):
            out[chunk] += 2 * np.cos(np.outer(theta[chunk], n)) @ self.a_coeffs[1 : self.n_max + 1]
        return out

    def chebyshev(self, theta):
        """``G(theta)`` from the ``U_n`` expansion."""
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        s = np.sin(theta)
        n = np.arange(self.n_max + 1)
        out = np.empty(theta.shape)
        safe = np.abs(s) > 1e-8
        # U_n(cos t) = sin((n+1)t)/sin t away from the endpoints
        for chunk in np.array_split(np.arange(len(theta)), max(1, len(theta) * self.n_max // 5_000_000)):
            th = theta[chunk]
            u = np.sin(np.outer(th, n + 1)) / np.where(safe[chunk], s[chunk], 1.0)[:, None]
            edge = ~safe[chunk]
            if edge.any():
                sign = np.where(np.cos(th[edge]) > 0, 1.0, -1.0)
                u[edge] = (sign[:, None] ** n) * (n + 1)
            out[chunk] = u @ self.cheb_coeffs
        return out

    def grid(self, points: int) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
        """Evaluate on ``theta_j = pi j / (points - 1)``: closed form, cosine and U_n series.

        Both series use fast transforms on a refined grid of size ``L > n_max``
        and are subsampled, so ``points`` can be large.
        """
        m = max(1, -(-(self.n_max + 2) // (points - 1)))
        L = m * (points - 1)
        x = np.zeros(L + 1)
        x[: self.n_max + 1] = self.a_coeffs[: self.n_max + 1]
        # DCT-I: x_0 + (-1)^k x_L + 2 sum x_n cos(pi k n / L)
        cos_vals = sp_fft.dct(x, type=1)
        c = np.zeros(L - 1)
        c[: self.n_max + 1] = self.cheb_coeffs
        # DST-I: 2 sum c_n sin(pi (k+1)(n+1) / L)
        sin_vals = sp_fft.dst(c, type=1) / 2
        full = np.linspace(0.0, np.pi, L + 1)
        cheb = np.empty(L + 1)
        cheb[1:-1] = sin_vals / np.sin(full[1:-1])
        n = np.arange(self.n_max + 1)
        cheb[0] = np.dot(self.cheb_coeffs, n + 1)
        cheb[-1] = np.dot(self.cheb_coeffs, (-1.0) ** n * (n + 1))
        theta = full[::m]
        return theta, self(theta), cos_vals[::m], cheb[::m]

    @property
    def chebyshev_tail_bound(self) -> float:
        """Truncation bound for the ``U_n`` form.

        Telescoping gives the cosine partial sum minus
        ``a_{m+1} U_{m-1} + a_{m+2} U_m`` with ``|U_n| <= n + 1``.
        """
        m = self.n_max
        return self.tail_bound + m * abs(self.a_coeffs[m + 1]) + (m + 1) * abs(self.a_coeffs[m + 2])

    def mean_st(self) -> float:
        """``int G d mu_ST``, which equals the U_0 coefficient."""
        return float(self.cheb_coeffs[0])


def default_delta(N: int, I: AngleInterval, side: str, k1: int = 12, N1: int = 1) -> float:
    """``delta'`` from ``1/delta' = sqrt(log N) / log(k1 N1 log N)``, clamped so the smoothing constraints hold."""
    L = I.length / (2 * math.pi)
    raw = math.log(k1 * N1 * math.log(N)) / math.sqrt(math.log(N))
    cap = 0.49 if side == MAJORANT else L / 2
    if side == MAJORANT:
        cap = min(cap, (1 - L) / 2)
    return min(raw, cap * (1 - 1e-9))


def vaaler_smoothing(I: AngleInterval, delta: float, R: int = 2, side: str = MAJORANT) -> SmoothingFunction:
    """Build the majorant (``side='majorant'``) or minorant of ``chi_I``."""
    if not 0 < delta < 0.5:
        raise InvalidArgument("delta' must lie in (0, 1/2)")
    if R < 1:
        raise InvalidArgument("R must be >= 1")
    if side == MAJORANT:
        a, b = I.lo / (2 * math.pi) - delta / 2, I.hi / (2 * math.pi) + delta / 2
    elif side == MINORANT:
        a, b = I.lo / (2 * math.pi) + delta / 2, I.hi / (2 * math.pi) - delta / 2
    else:
        raise InvalidArgument(f"unknown side {side!r}")
    if not (delta <= b - a <= 1 - delta):
        raise InvalidArgument("interval too short or too long for this delta'")
    n_max = _choose_nmax(delta, R)
    n = np.arange(1, n_max + 3, dtype=float)
    w, c = b - a, (a + b) / 2
    amp = 2 * np.sin(np.pi * n * w) / (np.pi * n) * np.sinc(n * delta / R) ** R
    acoef = np.empty(n_max + 3)
    acoef[0] = 2 * w
    acoef[1:] = amp * np.cos(2 * np.pi * n * c)
    cheb = np.empty(n_max + 1)
    cheb[0] = acoef[0] - acoef[2]
    cheb[1:] = acoef[1 : n_max + 1] - acoef[3 : n_max + 3]
    for arr in (acoef, cheb):
        arr.setflags(write=False)
    return SmoothingFunction(I, a, b, delta, R, side, n_max, acoef, cheb, _tail_bound(n_max, delta, R))


def smoothed_count(N: int, G: SmoothingFunction, n_terms: int | None = None) -> tuple[float, float]:
    """``sum over J_{1,3}(N)`` of ``G(theta_{p1})``, directly and via ``U_n`` sums.

    The second value interchanges the summations, using twisted sums of
    ``sym^n`` up to ``n_terms`` (default: all stored coefficients).
    """
    p = sieve_for(N).primes_upto(max(N - 4, 2))
    p = p[p <= N - 4]
    r2 = goldbach_table(N)[N - p].astype(float)
    theta = hecke_for(N).prime_thetas(N)[: len(p)]
    direct = float(np.dot(G(theta), r2))
    m = G.n_max if n_terms is None else min(n_terms, G.n_max)
    U = chebyshev_u_all(m, np.cos(theta))
    expanded = float(G.cheb_coeffs[: m + 1] @ (U @ r2))
    return direct, expanded


def a_term(N: int, delta: float, R: int = 2, n_terms: int = 200) -> float:
    """Diagnostic error sum: weighted twisted sums of ``sym^n`` for ``n <= n_terms``."""
    p = sieve_for(N).primes_upto(max(N - 4, 2))
    p = p[p <= N - 4]
    r2 = goldbach_table(N)[N - p].astype(float)
    theta = hecke_for(N).prime_thetas(N)[: len(p)]
    sums = chebyshev_u_all(n_terms, np.cos(theta)) @ r2
    n = np.arange(1, n_terms + 1, dtype=float)
    cut = 1.0 / delta
    w = np.where(n >= cut, 4 / (n * np.pi) * (R / (np.pi * n * delta)) ** R, 2 / (n * np.pi))
    return float(np.dot(w, sums[1:]))


def equidistribution_report(N_list, I: AngleInterval) -> list[dict]:
    """Per-N comparison of the angle-restricted share of J_{1,3}(N) with mu_ST(I)."""
    mu = st_measure(I)
    rows = []
    for N in N_list:
        N = int(N)
        total = count_ternary(N)
        sub = count_J_with_angle(N, I)
        pi_n = sieve_for(N).pi(N)
        pi_i = count_angles(N, I)
        ratio = sub / total if total else math.nan
        rows.append(
            {
                "N": N,
                "count_J": total,
                "count_J_I": sub,
                "ratio": ratio,
                "pi_ratio": pi_i / pi_n,
                "mu_st": mu,
                "discrepancy": abs(ratio - mu) if total else math.nan,
            }
        )
    return rows
