"""Rational approximation, arc classification and Dirichlet characters."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Union

import numpy as np

from .errors import InvalidArgument
from .sieve import factorize

Real = Union[float, int, Fraction]

MAJOR = "major"
MINOR = "minor"
PRIMARY = "primary"
REFINED = "refined"


def e(x) -> complex:
    """The additive character ``exp(2 pi i x)``."""
    return complex(math.cos(2 * math.pi * x), math.sin(2 * math.pi * x))


def euler_phi(n: int) -> int:
    if n < 1:
        raise InvalidArgument("phi is defined for n >= 1")
    out = n
    for p in factorize(n):
        out = out // p * (p - 1)
    return out


def mobius(n: int) -> int:
    f = factorize(n)
    if any(e > 1 for e in f.values()):
        return 0
    return -1 if len(f) % 2 else 1


def divisors(n: int) -> list[int]:
    out = [1]
    for p, k in factorize(n).items():
        out = [d * p**i for d in out for i in range(k + 1)]
    return sorted(out)


@dataclass(frozen=True)
class RationalApprox:
    """``alpha = a/q + offset`` with ``gcd(a, q) = 1`` and ``|offset| <= 1/(qQ)``."""

    a: int
    q: int
    offset: float


def convergents(alpha: Real):
    """Yield the continued-fraction convergents ``(h, k)`` of ``alpha``."""
    x = Fraction(alpha)
    h0, h1 = 0, 1
    k0, k1 = 1, 0
    while True:
        t = math.floor(x)
        h0, h1 = h1, t * h1 + h0
        k0, k1 = k1, t * k1 + k0
        yield h1, k1
        frac = x - t
        if frac == 0:
            return
        x = 1 / frac


def dirichlet_approx(alpha: Real, Q: int) -> RationalApprox:
    """Convergent ``a/q`` of ``alpha`` with the largest ``q <= Q``.

    Such a convergent satisfies ``|alpha - a/q| < 1/(q q_next) <= 1/(qQ)``.
    """
    if Q < 1:
        raise InvalidArgument("Q must be >= 1")
    x = Fraction(alpha)
    best = None
    for h, k in convergents(x):
        if k > Q:
            break
        best = (h, k)
    a, q = best
    return RationalApprox(a, q, float(x - Fraction(a, q)))


@dataclass(frozen=True)
class ArcLabel:
    """Arc membership of a point of the circle.

    At the primary level ``major`` means the point lies in some arc
    ``M(q, a)`` with ``q <= P``. A refined label re-examines a primary
    minor point against ``(P', Q')``: ``major`` there means the point lies
    in ``m \\ n`` and ``minor`` means it lies in ``n``.
    """

    kind: str
    level: str = PRIMARY
    q: int | None = None
    a: int | None = None
    offset: float | None = None

    @property
    def is_major(self) -> bool:
        return self.kind == MAJOR

    def tag(self) -> str:
        if self.level == PRIMARY:
            return self.kind
        return "minor:m-n" if self.kind == MAJOR else "minor:n"


def _check_arc_params(P: int, Q: int) -> None:
    if not (1 < 2 * P < Q):
        raise InvalidArgument(f"arc parameters need 1 < 2P < Q, got P={P}, Q={Q}")


def _major_hit(x: Fraction | float, P: int, Q: int):
    hits = []
    for q in range(1, P + 1):
        num = round(x * q)
        a = num % q
        if math.gcd(a, q) != 1:
            continue
        if abs(x * q - num) * Q <= 1:
            hits.append((q, a, x - Fraction(num, q) if isinstance(x, Fraction) else x - num / q))
    if len(hits) > 1:
        centers = {Fraction(a, q) for q, a, _ in hits}
        # arcs with q <= P < Q/2 are pairwise disjoint on the circle
        assert len(centers) == 1, f"overlapping major arcs {hits}"
    return hits[0] if hits else None


def classify_arc(alpha: Real, P: int, Q: int, refined: tuple[int, int] | None = None) -> ArcLabel:
    """Classify ``alpha`` (taken mod 1) into major or minor arcs for ``(P, Q)``.

    With ``refined=(P2, Q2)`` a primary minor point is re-classified against
    the second dissection and the returned label has level ``refined``.
    """
    _check_arc_params(P, Q)
    x = Fraction(alpha) if isinstance(alpha, (int, Fraction)) else float(alpha)
    hit = _major_hit(x, P, Q)
    if hit is not None:
        q, a, off = hit
        return ArcLabel(MAJOR, PRIMARY, q, a, float(off))
    if refined is None:
        return ArcLabel(MINOR, PRIMARY)
    P2, Q2 = refined
    _check_arc_params(P2, Q2)
    hit = _major_hit(x, P2, Q2)
    if hit is not None:
        q, a, off = hit
        return ArcLabel(MAJOR, REFINED, q, a, float(off))
    r = dirichlet_approx(x, Q2)
    return ArcLabel(MINOR, REFINED, r.q, r.a % r.q, r.offset)


def classify_grid(M: int, P: int, Q: int) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Exact primary classification of the grid ``j/M``, ``0 <= j < M``.

    Returns ``(q, a, major)`` arrays; ``q`` and ``a`` are 0 off the major arcs.
    """
    _check_arc_params(P, Q)
    j = np.arange(M, dtype=np.int64)
    qs = np.zeros(M, dtype=np.int64)
    as_ = np.zeros(M, dtype=np.int64)
    for q in range(1, P + 1):
        num = (2 * j * q + M) // (2 * M)
        a = num % q
        ok = (np.abs(j * q - num * M) * Q <= M) & (np.gcd(a, q) == 1)
        clash = ok & (qs > 0)
        assert not clash.any(), "overlapping major arcs"
        qs[ok] = q
        as_[ok] = a[ok]
    return qs, as_, qs > 0


@dataclass(frozen=True)
class DirichletCharacter:
    """A character mod ``modulus``; ``values[r]`` is 0 when ``gcd(r, modulus) > 1``."""

    modulus: int
    values: np.ndarray = field(repr=False)
    index: tuple = ()

    def __call__(self, n: int) -> complex:
        return complex(self.values[n % self.modulus])

    def conjugate(self) -> "DirichletCharacter":
        return DirichletCharacter(self.modulus, np.conj(self.values), self.index)

    @property
    def is_principal(self) -> bool:
        return all(i == 0 for i in self.index)


def _primitive_root(p: int) -> int:
    phi = p - 1
    fs = list(factorize(phi)) if phi > 1 else []
    for g in range(2, p):
        if all(pow(g, phi // f, p) != 1 for f in fs):
            return g
    return 1


def _cyclic_components(q: int) -> list[tuple[int, int, int]]:
    """Generators of ``(Z/q)^*`` as ``(prime power, generator, order)`` triples."""
    comps = []
    for p, k in factorize(q).items():
        pk = p**k
        if p == 2:
            if k >= 2:
                comps.append((pk, pk - 1, 2))
            if k >= 3:
                comps.append((pk, 5, 2 ** (k - 2)))
        else:
            g = _primitive_root(p)
            # a primitive root mod p^2 is one mod every p^k
            if k > 1 and pow(g, p - 1, p * p) == 1:
                g += p
            comps.append((pk, g, pk // p * (p - 1)))
    return comps


def _discrete_logs(q: int, comps) -> tuple[np.ndarray, np.ndarray]:
    """Exponent vectors of every unit mod q; ``mask`` flags the units."""
    logs = np.zeros((q, len(comps)), dtype=np.int64)
    mask = np.array([math.gcd(r, q) == 1 for r in range(q)])
    by_pk: dict[int, list[int]] = {}
    for i, (pk, _, _) in enumerate(comps):
        by_pk.setdefault(pk, []).append(i)
    for pk, idx in by_pk.items():
        table = {}
        if len(idx) == 1:
            _, g, order = comps[idx[0]]
            x = 1
            for t in range(order):
                table[x] = (t,)
                x = x * g % pk
        else:
            (_, g1, o1), (_, g2, o2) = comps[idx[0]], comps[idx[1]]
            for s in range(o1):
                x = pow(g1, s, pk)
                for t in range(o2):
                    table[x] = (s, t)
                    x = x * g2 % pk
        for r in range(q):
            if mask[r]:
                logs[r, idx] = table[r % pk]
    return logs, mask


@lru_cache(maxsize=256)
def characters_mod(q: int) -> tuple[DirichletCharacter, ...]:
    """All ``phi(q)`` Dirichlet characters mod ``q``, principal first."""
    if q < 1:
        raise InvalidArgument("modulus must be >= 1")
    if q == 1:
        return (DirichletCharacter(1, np.ones(1, dtype=complex), ()),)
    comps = _cyclic_components(q)
    logs, mask = _discrete_logs(q, comps)
    orders = [o for _, _, o in comps]
    out = []
    for index in np.ndindex(*orders):
        vals = np.zeros(q, dtype=complex)
        for r in np.flatnonzero(mask):
            # phase as an exact fraction of a full turn
            turns = sum(Fraction(int(j) * int(logs[r, c]), o) for c, (j, o) in enumerate(zip(index, orders)))
            turns -= math.floor(turns)
            vals[r] = _root_of_unity(turns)
        vals.setflags(write=False)
        out.append(DirichletCharacter(q, vals, tuple(int(i) for i in index)))
    return tuple(out)


def _root_of_unity(turns: Fraction) -> complex:
    if turns == 0:
        return 1.0 + 0j
    if turns == Fraction(1, 2):
        return -1.0 + 0j
    if turns == Fraction(1, 4):
        return 1j
    if turns == Fraction(3, 4):
        return -1j
    return e(turns)


def character_matrix(q: int) -> np.ndarray:
    """Rows are characters mod q, columns residues ``0..q-1``."""
    return np.array([chi.values for chi in characters_mod(q)])


def gauss_parseval_check(q: int, d: int, a: int, k: int) -> tuple[float, float]:
    """Both sides of the character-sum Parseval identity modulo ``q/d``.

    ``lhs = sum_chi |sum_{(h, q/d)=1} conj(chi(h)) e(a d^k h^k / q)|^2`` by
    direct double summation and ``rhs = phi(q/d)^2``.
    """
    if q < 1 or d < 1 or q % d:
        raise InvalidArgument("d must divide q")
    if math.gcd(a, q) != 1:
        raise InvalidArgument("a must be coprime to q")
    if k < 1:
        raise InvalidArgument("k must be >= 1")
    m = q // d
    chars = character_matrix(m)
    h = np.array([r for r in range(m) if math.gcd(r, m) == 1], dtype=np.int64)
    # reduce a d^k h^k mod q in exact integer arithmetic before taking phases
    num = np.array([(a * pow(d, k, q) * pow(int(x), k, q)) % q for x in h], dtype=np.float64)
    phases = np.exp(2j * np.pi * num / q)
    inner = np.conj(chars[:, h]) @ phases
    lhs = float(np.sum(np.abs(inner) ** 2))
    return lhs, float(euler_phi(m) ** 2)


def classify_grid_labels(M: int, P: int, Q: int, refined: tuple[int, int] | None = None) -> list[ArcLabel]:
    """:func:`classify_arc` for every ``j/M``, ``0 <= j < M``, in exact arithmetic."""
    if M < 1:
        raise InvalidArgument("grid size must be positive")
    return [classify_arc(Fraction(j, M), P, Q, refined) for j in range(M)]
