"""Ramanujan tau, normalized Hecke eigenvalues and Sato-Tate angles of Delta.

``Delta = q prod (1 - q^n)^24``. The product is obtained from Jacobi's
identity for ``prod (1 - q^n)^3`` and three exact squarings (cube, sixth,
twelfth, twenty-fourth power), each done as one big-integer product by
packing coefficients into a single integer.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import gmpy2
import numpy as np

from .errors import InvalidArgument, OutOfRange
from .sieve import sieve_for

WEIGHT = 12


def eta_cubed(n_terms: int) -> list[int]:
    """Coefficients of ``prod (1 - q^n)^3`` up to ``q^(n_terms - 1)``."""
    out = [0] * n_terms
    k = 0
    while k * (k + 1) // 2 < n_terms:
        out[k * (k + 1) // 2] = (-1) ** k * (2 * k + 1)
        k += 1
    return out


def _pack(coeffs: list[int], width: int) -> gmpy2.mpz:
    half = 1 << (width * 8 - 1)
    raw = b"".join((c + half).to_bytes(width, "little") for c in coeffs)
    return gmpy2.mpz(int.from_bytes(raw, "little")) - _bias(len(coeffs), width)


@lru_cache(maxsize=16)
def _bias(n: int, width: int) -> gmpy2.mpz:
    # sum_i 2^(8*width*i + 8*width - 1) for i < n
    chunk = b"\x00" * (width - 1) + b"\x80"
    return gmpy2.mpz(int.from_bytes(chunk * n, "little"))


def _unpack(value: gmpy2.mpz, n: int, width: int) -> list[int]:
    half = 1 << (width * 8 - 1)
    shifted = int(value + _bias(n, width)) & ((1 << (8 * width * n)) - 1)
    raw = shifted.to_bytes(width * n, "little")
    return [int.from_bytes(raw[i * width : (i + 1) * width], "little") - half for i in range(n)]


def poly_mul_truncated(a: list[int], b: list[int], n_terms: int) -> list[int]:
    """Exact product of integer polynomials, truncated to ``n_terms`` terms."""
    a, b = a[:n_terms], b[:n_terms]
    ma, mb = max(map(abs, a)), max(map(abs, b))
    bound = max(ma * mb * min(len(a), len(b)), ma, mb)
    width = (bound.bit_length() + 2) // 8 + 1
    prod = _pack(a, width) * _pack(b, width)
    # coefficient j of the product only depends on chunks below j+1, and the
    # bias trick recovers signed chunks as long as |c| < 2^(8 width - 1)
    return _unpack(prod, n_terms, width)


def delta_coefficients(limit: int) -> list[int]:
    """``[0, tau(1), ..., tau(limit)]``."""
    n_terms = limit
    e3 = eta_cubed(n_terms)
    e6 = poly_mul_truncated(e3, e3, n_terms)
    e12 = poly_mul_truncated(e6, e6, n_terms)
    e24 = poly_mul_truncated(e12, e12, n_terms)
    return [0] + e24


@dataclass(frozen=True)
class HeckeTable:
    """Coefficients of Delta up to ``limit``.

    ``tau`` holds exact Python integers (index 0 unused), ``lam[n]`` is
    ``tau(n) / n^(11/2)``, and ``theta[i]`` is the angle of ``primes[i]``.
    """

    limit: int
    tau: tuple = field(repr=False)
    lam: np.ndarray = field(repr=False)
    primes: np.ndarray = field(repr=False)
    theta: np.ndarray = field(repr=False)

    def _prime_index(self, p: int) -> int:
        if p > self.limit:
            raise OutOfRange(f"p={p} beyond Hecke table limit {self.limit}")
        i = int(np.searchsorted(self.primes, p))
        if i >= len(self.primes) or self.primes[i] != p:
            raise InvalidArgument(f"{p} is not prime")
        return i

    def tau_at(self, n: int) -> int:
        if not 1 <= n <= self.limit:
            raise OutOfRange(f"n={n} outside [1, {self.limit}]")
        return self.tau[n]

    def lambda_at(self, n: int) -> float:
        if not 1 <= n <= self.limit:
            raise OutOfRange(f"n={n} outside [1, {self.limit}]")
        return float(self.lam[n])

    def theta_at(self, p: int) -> float:
        return float(self.theta[self._prime_index(p)])

    def prime_lambdas(self, x: int | None = None) -> np.ndarray:
        """``lambda_f(p)`` for primes ``p <= x`` in ascending order."""
        m = len(self.primes) if x is None else int(np.searchsorted(self.primes, x, side="right"))
        if x is not None and x > self.limit:
            raise OutOfRange(f"x={x} beyond Hecke table limit {self.limit}")
        return self.lam[self.primes[:m]]

    def prime_thetas(self, x: int | None = None) -> np.ndarray:
        if x is not None and x > self.limit:
            raise OutOfRange(f"x={x} beyond Hecke table limit {self.limit}")
        m = len(self.primes) if x is None else int(np.searchsorted(self.primes, x, side="right"))
        return self.theta[:m]

    def sym_coeff(self, j: int, p: int) -> float:
        return float(chebyshev_u(j, np.cos(self.theta_at(p))))

    def rankin_selberg_coeff(self, j: int, p: int) -> tuple[float, float]:
        t = self.sym_coeff(j, p) ** 2
        return t, t - 1.0


def build_hecke(limit: int) -> HeckeTable:
    if limit < 2:
        raise InvalidArgument("Hecke table limit must be >= 2")
    tau = delta_coefficients(limit)
    n = np.arange(limit + 1, dtype=float)
    n[0] = 1.0
    lam = np.array([float(t) for t in tau]) / n**5.5
    lam[0] = 0.0
    primes = sieve_for(limit).primes_upto(limit)
    theta = np.arccos(np.clip(lam[primes] / 2.0, -1.0, 1.0))
    for arr in (lam, theta):
        arr.setflags(write=False)
    return HeckeTable(limit, tuple(tau), lam, primes, theta)


@lru_cache(maxsize=4)
def _cached_hecke(size: int) -> HeckeTable:
    return build_hecke(size)


def hecke_for(limit: int) -> HeckeTable:
    """Shared table covering ``limit``, rounded up to a power of two."""
    return _cached_hecke(1 << max(10, (max(limit, 2) - 1).bit_length()))


def chebyshev_u(j: int, c):
    """``U_j(c)`` by the three-term recurrence; works on arrays.

    At ``c = +-1`` the recurrence gives the limits ``(+-1)^j (j + 1)``.
    """
    if j < 0:
        raise InvalidArgument("j must be >= 0")
    c = np.asarray(c, dtype=float)
    u0 = np.ones_like(c)
    if j == 0:
        return u0
    u1 = 2 * c
    for _ in range(j - 1):
        u0, u1 = u1, 2 * c * u1 - u0
    return u1


def chebyshev_u_all(j_max: int, c) -> np.ndarray:
    """Rows ``U_0(c) .. U_{j_max}(c)``."""
    c = np.asarray(c, dtype=float)
    out = np.empty((j_max + 1,) + c.shape)
    out[0] = 1.0
    if j_max >= 1:
        out[1] = 2 * c
    for j in range(2, j_max + 1):
        out[j] = 2 * c * out[j - 1] - out[j - 2]
    return out


def sym_values(table: HeckeTable, j: int, x: int, mode: str = "sym") -> np.ndarray:
    """Coefficient at each prime ``p <= x``: ``U_j``, ``U_j^2`` or ``U_j^2 - 1``."""
    u = chebyshev_u(j, np.cos(table.prime_thetas(x)))
    if mode == "sym":
        return u
    if mode == "tensor":
        return u * u
    if mode == "adjoint":
        return u * u - 1.0
    raise InvalidArgument(f"unknown coefficient mode {mode!r}")


def sym_coeff(j: int, p: int, table: HeckeTable | None = None) -> float:
    """``lambda_{sym^j f}(p) = U_j(cos theta_p)``."""
    if j < 0:
        raise InvalidArgument("j must be >= 0")
    table = table or hecke_for(p)
    return table.sym_coeff(j, p)


def rankin_selberg_coeff(j: int, p: int, table: HeckeTable | None = None) -> tuple[float, float]:
    """``(U_j^2, U_j^2 - 1)``: tensor-square and adjoint coefficients at ``p``."""
    if j < 0:
        raise InvalidArgument("j must be >= 0")
    table = table or hecke_for(p)
    return table.rankin_selberg_coeff(j, p)
