"""Picard lattice arithmetic for the plane blown up at k <= 8 points.

A class is stored as its coordinate vector ``(d; m_1, ..., m_k)`` in the
basis ``L, E_1, ..., E_k`` where ``L`` is the pullback of a line and ``E_i``
are the exceptional classes.  The intersection form is
``diag(1, -1, ..., -1)``, so that ``K = (-3; 1, ..., 1)``.

Example::

    >>> S = SurfaceLattice(6)
    >>> D = -2 * S.K - S.E(6)
    >>> str(D), arithmetic_genus(D)
    ('6;-2,-2,-2,-2,-2,-3', 2)
"""

from __future__ import annotations

import functools
import math
import re
from dataclasses import dataclass
from typing import Iterator

from .errors import CapabilityError, DimensionError, ParseError

__all__ = [
    "DivisorClass",
    "SurfaceLattice",
    "NodalPairLattice",
    "intersect",
    "arithmetic_genus",
    "minus_one_curves",
    "is_nef",
    "is_big",
    "is_effective",
    "parse_class",
]


@dataclass(frozen=True)
class DivisorClass:
    coeffs: tuple[int, ...]

    def __post_init__(self):
        if len(self.coeffs) < 1:
            raise DimensionError("a divisor class needs at least the L coefficient")
        object.__setattr__(self, "coeffs", tuple(int(c) for c in self.coeffs))

    @property
    def k(self) -> int:
        return len(self.coeffs) - 1

    @property
    def d(self) -> int:
        return self.coeffs[0]

    @property
    def m(self) -> tuple[int, ...]:
        return self.coeffs[1:]

    def _check(self, other: DivisorClass):
        if not isinstance(other, DivisorClass):
            return NotImplemented
        if len(other.coeffs) != len(self.coeffs):
            raise DimensionError(
                f"classes live on different lattices (k={self.k} vs k={other.k})"
            )
        return None

    def __add__(self, other: DivisorClass) -> DivisorClass:
        if self._check(other) is NotImplemented:
            return NotImplemented
        return DivisorClass(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: DivisorClass) -> DivisorClass:
        if self._check(other) is NotImplemented:
            return NotImplemented
        return DivisorClass(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> DivisorClass:
        return DivisorClass(tuple(-a for a in self.coeffs))

    def __mul__(self, n: int) -> DivisorClass:
        if not isinstance(n, int):
            return NotImplemented
        return DivisorClass(tuple(n * a for a in self.coeffs))

    __rmul__ = __mul__

    def dot(self, other: DivisorClass) -> int:
        return intersect(self, other)

    def mod2(self) -> str:
        """Canonical text of the class reduced modulo 2 (used for bh lookups)."""
        return str(DivisorClass(tuple(c % 2 for c in self.coeffs)))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __str__(self) -> str:
        d, *m = self.coeffs
        return f"{d};" + ",".join(str(x) for x in m)

    def __repr__(self) -> str:
        return f"DivisorClass({str(self)!r})"


_CLASS_RE = re.compile(r"^\s*(-?\d+)\s*(?:;\s*((?:-?\d+\s*(?:,\s*-?\d+\s*)*)?))?$")


def parse_class(text: str, k: int | None = None) -> DivisorClass:
    """Parse the canonical text form ``"d;m1,...,mk"``.

    ``k`` (if given) is checked against the number of multiplicities.
    """
    match = _CLASS_RE.match(text)
    if match is None:
        raise ParseError(f"cannot parse divisor class {text!r}; expected 'd;m1,m2,...'")
    d = int(match.group(1))
    rest = match.group(2)
    m = [int(x) for x in rest.split(",")] if rest and rest.strip() else []
    D = DivisorClass((d, *m))
    if k is not None and D.k != k:
        raise DimensionError(f"class {text!r} has {D.k} multiplicities, lattice needs {k}")
    return D


def intersect(D1: DivisorClass, D2: DivisorClass) -> int:
    if len(D1.coeffs) != len(D2.coeffs):
        raise DimensionError(f"cannot intersect classes of rank {D1.k} and {D2.k}")
    d1, *m1 = D1.coeffs
    d2, *m2 = D2.coeffs
    return d1 * d2 - sum(a * b for a, b in zip(m1, m2))


@dataclass(frozen=True)
class SurfaceLattice:
    """Picard lattice of a degree ``9 - k`` del Pezzo surface."""

    k: int

    def __post_init__(self):
        if not 0 <= self.k <= 8:
            raise CapabilityError(f"k must lie in 0..8, got {self.k}")

    @property
    def degree(self) -> int:
        return 9 - self.k

    @property
    def K(self) -> DivisorClass:
        return DivisorClass((-3,) + (1,) * self.k)

    @property
    def L(self) -> DivisorClass:
        return DivisorClass((1,) + (0,) * self.k)

    @property
    def zero(self) -> DivisorClass:
        return DivisorClass((0,) * (self.k + 1))

    def E(self, i: int) -> DivisorClass:
        """Exceptional class E_i, 1-based."""
        if not 1 <= i <= self.k:
            raise DimensionError(f"E_{i} does not exist on a lattice with k={self.k}")
        c = [0] * (self.k + 1)
        c[i] = 1
        return DivisorClass(tuple(c))

    def cls(self, d: int, *m: int) -> DivisorClass:
        if len(m) != self.k:
            raise DimensionError(f"expected {self.k} multiplicities, got {len(m)}")
        return DivisorClass((d, *m))

    def parse(self, text: str) -> DivisorClass:
        return parse_class(text, self.k)

    def contains(self, D: DivisorClass) -> bool:
        return D.k == self.k

    def minus_one_curves(self) -> list[DivisorClass]:
        return minus_one_curves(self)


@dataclass(frozen=True)
class NodalPairLattice:
    """A uninodal pair (Y, E): Y's lattice plus a (-2)-class E with K.E = 0."""

    base: SurfaceLattice
    e_class: DivisorClass

    def __post_init__(self):
        E = self.e_class
        if E.k != self.base.k:
            raise DimensionError("E must live on the base lattice")
        if intersect(E, E) != -2 or intersect(self.base.K, E) != 0:
            raise ValueError(f"{E} is not a (-2)-class orthogonal to K")

    @classmethod
    def standard(cls, k: int = 7) -> NodalPairLattice:
        """Pair with E = L - E_1 - E_2 - E_3 (three collinear blown-up points)."""
        S = SurfaceLattice(k)
        if k < 3:
            raise CapabilityError("the standard (-2)-class needs k >= 3")
        return cls(S, S.L - S.E(1) - S.E(2) - S.E(3))

    @property
    def K(self) -> DivisorClass:
        return self.base.K

    @property
    def E(self) -> DivisorClass:
        return self.e_class

    @property
    def degree(self) -> int:
        return self.base.degree

    def in_smoothing(self, D: DivisorClass) -> bool:
        """Classes orthogonal to E are those coming from the smoothing X."""
        return intersect(D, self.e_class) == 0

    def __str__(self) -> str:
        return f"deg{self.degree}:E={self.e_class}"


def arithmetic_genus(D: DivisorClass) -> int:
    K = DivisorClass((-3,) + (1,) * D.k)
    twice = intersect(D, D) + intersect(D, K)
    assert twice % 2 == 0, "D^2 + DK is always even on these lattices"
    return twice // 2 + 1


def _solutions(k: int, square_budget: int, total: int) -> Iterator[tuple[int, ...]]:
    """All integer vectors of length k with sum of squares and sum prescribed."""
    if k == 0:
        if square_budget == 0 and total == 0:
            yield ()
        return
    bound = math.isqrt(square_budget)
    for x in range(bound, -bound - 1, -1):
        q = square_budget - x * x
        s = total - x
        if (k - 1) == 0:
            if q == 0 and s == 0:
                yield (x,)
            continue
        # Cauchy-Schwarz: s^2 <= (k-1) * q is necessary
        if s * s > (k - 1) * q:
            continue
        for rest in _solutions(k - 1, q, s):
            yield (x, *rest)


def _minus_one_level(k: int, d: int) -> list[DivisorClass]:
    # E^2 = -1 and E.K = -1 in coordinates: sum m_i^2 = d^2 + 1, sum m_i = 1 - 3d
    return [DivisorClass((d, *m)) for m in _solutions(k, d * d + 1, 1 - 3 * d)]


@functools.lru_cache(maxsize=None)
def _minus_one_curves_cached(k: int) -> tuple[DivisorClass, ...]:
    found: list[DivisorClass] = []
    empty_run = 0
    d = 0
    while empty_run < 2:
        level = _minus_one_level(k, d)
        empty_run = 0 if level else empty_run + 1
        found.extend(sorted(level, key=lambda c: c.coeffs, reverse=True))
        d += 1
    return tuple(found)


def minus_one_curves(S: SurfaceLattice | int) -> list[DivisorClass]:
    """All classes with E^2 = -1 and K.E = -1, ordered by degree d."""
    k = S.k if isinstance(S, SurfaceLattice) else int(S)
    SurfaceLattice(k)
    return list(_minus_one_curves_cached(k))


def _extra_generators(k: int) -> list[DivisorClass]:
    # (-1)-curves alone do not generate the curve cone of P^2 and F_1
    if k == 0:
        return [DivisorClass((1,))]
    if k == 1:
        return [DivisorClass((1, -1))]
    return []


def _test_curves(k: int, pair: NodalPairLattice | None) -> list[DivisorClass]:
    curves = minus_one_curves(k) + _extra_generators(k)
    if pair is not None:
        curves.append(pair.e_class)
    return curves


def is_nef(D: DivisorClass, pair: NodalPairLattice | None = None) -> bool:
    """D pairs nonnegatively with every (-1)-curve (and with E on a pair)."""
    if pair is None and D.k == 8:
        raise CapabilityError("nef test is not supported on degree-1 surfaces (k=8)")
    if pair is not None and pair.base.k != D.k:
        raise DimensionError("class and pair live on different lattices")
    return all(intersect(D, C) >= 0 for C in _test_curves(D.k, pair))


def is_big(D: DivisorClass) -> bool:
    return intersect(D, D) > 0


def is_effective(D: DivisorClass, pair: NodalPairLattice | None = None) -> bool:
    """Cascade test: strip negative (-1)-curves (and E) until nef or hopeless.

    Each (-1)-curve subtraction lowers -K.D by one and subtracting E keeps it,
    while raising D.E by 2, so the loop stops once -K.D < 0.
    """
    if pair is not None and pair.base.k != D.k:
        raise DimensionError("class and pair live on different lattices")
    K = DivisorClass((-3,) + (1,) * D.k)
    curves = _test_curves(D.k, pair)
    while True:
        if -intersect(D, K) < 0:
            return False
        for C in curves:
            if intersect(D, C) < 0:
                D = D - C
                break
        else:
            return D.d >= 0
