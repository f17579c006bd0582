"""Circle-method exponential sums over primes and arc experiments."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import numpy as np

from .arith import ArcLabel, PRIMARY, classify_arc, classify_grid, dirichlet_approx, MAJOR, MINOR
from .errors import InvalidArgument
from .repcount import Coeff, coefficient_array, weighted_count
from .sieve import _iroot, divisor_count, sieve_for

Real = Union[float, int, Fraction]

_SPLIT = 134217729.0  # 2**27 + 1


def _split(a: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    t = _SPLIT * a
    hi = t - (t - a)
    return hi, a - hi


def frac_product(n: np.ndarray, alpha: float) -> np.ndarray:
    """``n * alpha mod 1`` for integer ``n < 2**53`` without losing the low bits.

    The product is carried as an unevaluated sum ``p + err`` (Dekker's
    two-product) so the fractional part keeps ~1e-16 absolute accuracy
    even when ``n * alpha`` is of size 1e8 or more.
    """
    a = np.asarray(n, dtype=np.float64)
    b = float(alpha)
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(np.float64(b))
    err = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    f = p - np.floor(p)
    f = f + err
    return f - np.floor(f)


def phases(powers: np.ndarray, alpha: Real) -> np.ndarray:
    """``e(m * alpha)`` for each integer ``m`` in ``powers``."""
    if isinstance(alpha, Fraction) or isinstance(alpha, int):
        alpha = Fraction(alpha)
        num, den = alpha.numerator, alpha.denominator
        if den < 2**31 and abs(num) < 2**31 and (len(powers) == 0 or int(np.max(powers)) < 2**31):
            r = (np.asarray(powers, dtype=np.int64) % den) * (num % den) % den
        else:
            r = np.array([(int(m) * num) % den for m in powers], dtype=np.float64)
        return np.exp(2j * np.pi * (r / den))
    return np.exp(2j * np.pi * frac_product(powers, alpha))


def _prime_powers(N: int, k: int) -> np.ndarray:
    r = _iroot(N, k)
    return sieve_for(max(r, 2)).primes_upto(r)


def h_sum(N: int, k: int, alpha: Real) -> complex:
    """``sum_{p^k <= N} e(p^k alpha)``."""
    if N < 2 or k < 1:
        raise InvalidArgument("need N >= 2 and k >= 1")
    p = _prime_powers(N, k)
    return complex(phases(p**k, alpha).sum())


def t_sum(N: int, k: int, alpha: Real, coeff: Coeff = None) -> complex:
    """``sum_{p^k <= N} coeff(p) e(p^k alpha)``."""
    if N < 2 or k < 1:
        raise InvalidArgument("need N >= 2 and k >= 1")
    p = _prime_powers(N, k)
    c = coefficient_array(coeff, p)
    return complex(np.dot(c, phases(p**k, alpha)))


def lambda_weighted_sum(x: int, k: int, alpha: Real, coeff: Coeff = None) -> complex:
    """``sum_{n <= x} Lambda(n) a(n) e(n^k alpha)`` with ``a`` defaulting to 1."""
    if x < 2:
        raise InvalidArgument("x must be >= 2")
    lam = sieve_for(x).mangoldt()[: x + 1]
    n = np.flatnonzero(lam)
    w = lam[n] * coefficient_array(coeff, n)
    if not isinstance(alpha, (int, Fraction)) and k * math.log2(x) >= 53:
        raise InvalidArgument("x**k must stay below 2**53 for a floating alpha")
    powers = n**k if k * math.log2(x) < 62 else np.array([int(m) ** k for m in n], dtype=object)
    return complex(np.dot(w, phases(powers, alpha)))


def grid_sums(N: int, k: int, M: int, coeff: Coeff = None) -> np.ndarray:
    """``t_sum(N, k, j/M)`` for every ``0 <= j < M`` in one transform."""
    p = _prime_powers(N, k)
    c = coefficient_array(coeff, p)
    residues = np.array([pow(int(x), k, M) for x in p], dtype=np.int64)
    vec = np.bincount(residues, weights=c, minlength=M).astype(complex)
    return np.fft.ifft(vec) * M


@dataclass(frozen=True)
class MinorBounds:
    vinogradov: float
    harman: float
    ren: float


def eval_minor_bounds(
    x: float, k: int, q: int, offset: float, eps1: float = 0.01, c_harman: float = 1.0, c_ren: float = 1.0
) -> MinorBounds:
    """Minor-arc bound shapes for ``sum_{m<=x} Lambda(m) e(m^k alpha)``.

    Implied constants are 1, so these are diagnostic curves, not proven
    inequalities. The Harman shape needs ``k >= 2`` and is NaN for ``k = 1``.
    """
    if x < 16 or q < 1 or k < 1:
        raise InvalidArgument("need x >= 16, q >= 1, k >= 1")
    K = 2 ** (k - 1)
    lx = math.log(x)
    if k == 1:
        vino = x * lx**3 * math.sqrt(1 / q + x ** (-2 / 5) + q / x)
        harman = math.nan
    else:
        bracket = 1 / q + x ** (-0.5) + q / x**k
        vino = x ** (1 + eps1) * bracket ** (1 / K**2)
        harman = x * lx**c_harman * bracket ** (1 / (2 * K**2))
    gamma = 0.5 + math.log(k) / math.log(2)
    s = math.sqrt(q * (1 + abs(offset) * x**k))
    ren = divisor_count(q) ** gamma * (math.sqrt(x) * s + x**0.8 + x / s) * lx**c_ren
    return MinorBounds(vino, harman, ren)


def hypothesis_parameters(N: int, delta: float = 0.5, k: int = 1) -> tuple[int, int]:
    """``(P, Q)`` with ``P = N^{(2/3)(1-delta)}`` (k=1) or ``N^{(1/3)(1-delta)}`` (k=2), ``Q = N // P``."""
    if not 0.5 <= delta < 1:
        raise InvalidArgument("delta must lie in [1/2, 1)")
    expo = (2 / 3 if k == 1 else 1 / 3) * (1 - delta)
    P = max(1, int(N**expo))
    return P, N // P


def refined_parameters(N: int) -> tuple[int, int]:
    P2 = _iroot(N, 3)
    return P2, N // P2


@dataclass(frozen=True)
class ExpSumSample:
    alpha: float
    k: int
    value: complex
    h_abs: float
    arc: ArcLabel
    refined: ArcLabel | None
    approx_q: int
    approx_a: int
    approx_offset: float
    bounds: MinorBounds

    def row(self) -> dict:
        label = self.refined if self.refined is not None else self.arc
        return {
            "alpha": self.alpha,
            "re": self.value.real,
            "im": self.value.imag,
            "abs": abs(self.value),
            "arckind": label.tag(),
            "q": self.approx_q,
            "a": self.approx_a,
            "vino": self.bounds.vinogradov,
            "harman": self.bounds.harman,
            "ren": self.bounds.ren,
        }


def arc_experiment(
    N: int,
    k: int,
    P: int,
    Q: int,
    grid_size: int,
    coeff: Coeff = None,
    eps1: float = 0.01,
    c_harman: float = 1.0,
    c_ren: float = 1.0,
) -> list[ExpSumSample]:
    """Evaluate sums and bound shapes on the grid ``alpha = j/grid_size``.

    Each point gets its ``(P, Q)`` label and, if minor there, a refined label
    against ``P' = N^{1/3}``, ``Q' = N // P'``.
    """
    if grid_size < 2:
        raise InvalidArgument("grid_size must be >= 2")
    if not (1 < 2 * P < Q):
        raise InvalidArgument(f"arc parameters need 1 < 2P < Q, got P={P}, Q={Q}")
    P2, Q2 = refined_parameters(N)
    refine = 1 < 2 * P2 < Q2
    tvals = grid_sums(N, k, grid_size, coeff)
    hvals = grid_sums(N, k, grid_size)
    qs, as_, major = classify_grid(grid_size, P, Q)
    x = float(_iroot(N, k))
    out = []
    for j in range(grid_size):
        alpha = Fraction(j, grid_size)
        if major[j]:
            arc = ArcLabel(MAJOR, PRIMARY, int(qs[j]), int(as_[j]), float(alpha - Fraction(int(as_[j]), int(qs[j]))))
            ref = None
        else:
            arc = ArcLabel(MINOR, PRIMARY)
            ref = classify_arc(alpha, P, Q, refined=(P2, Q2)) if refine else None
        r = dirichlet_approx(alpha, Q)
        bounds = eval_minor_bounds(max(x, 16.0), k, r.q, r.offset, eps1, c_harman, c_ren)
        out.append(
            ExpSumSample(float(alpha), k, complex(tvals[j]), float(abs(hvals[j])), arc, ref, r.q, r.a % r.q, r.offset, bounds)
        )
    return out


def parseval_count(N: int, k: int, u: int, coeff: Coeff = None, M: int | None = None) -> tuple[complex, complex]:
    """Weighted tuple count two ways: exact convolution and a discrete circle integral.

    The integral of ``T * H^(u-1) * e(-N alpha)`` over [0, 1) is replaced by the
    average over ``M >= uN + 1`` equispaced points, which is exact for
    trigonometric polynomials of that degree.
    """
    if (k, u) not in {(1, 3), (2, 5)}:
        raise InvalidArgument("supported (k, u) are (1, 3) and (2, 5)")
    if M is None:
        M = u * N + 1
    if M < u * N + 1:
        raise InvalidArgument(f"M={M} < uN+1 would alias frequencies")
    exact = weighted_count(N, k, u, coeff)
    if N < 2:
        return complex(exact), 0j
    T = grid_sums(N, k, M, coeff)
    H = grid_sums(N, k, M)
    j = np.arange(M)
    twist = np.exp(-2j * np.pi * ((j * (N % M)) % M) / M)
    dft = np.mean(T * H ** (u - 1) * twist)
    return complex(exact), complex(dft)


def samples_to_rows(samples: list[ExpSumSample]) -> list[dict]:
    return [s.row() for s in samples]


__all__ = [
    "ExpSumSample",
    "MinorBounds",
    "arc_experiment",
    "eval_minor_bounds",
    "frac_product",
    "grid_sums",
    "h_sum",
    "hypothesis_parameters",
    "lambda_weighted_sum",
    "parseval_count",
    "t_sum",
]
