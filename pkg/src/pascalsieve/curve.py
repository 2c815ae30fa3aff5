"""Monic odd-degree hyperelliptic models Y^2 = g(X) and exact point counts.

The central object is the quintic model of the target equation.  Completing
the square in 60*y*(y-1) = x(x-1)(x-2)(x-3)(x-4) gives
(30y - 15)^2 = 15*x(x-1)...(x-4) + 225; scaling X = 15x, Y = 225*(30y - 15)
clears denominators and makes the quintic monic:

    Y^2 = X(X-15)(X-30)(X-45)(X-60) + 11390625.

A monic odd-degree model has a single point at infinity, which is what the
Jacobian-side Mumford machinery requires.  The same class also carries the
demonstration elliptic models y^2 = x^3 + a*x + b (degree 3, genus 1).
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .arith import (
    factorize,
    int_poly_discriminant,
    legendre,
    smallest_nonresidue,
    PolyFp,
)
from .errors import BadPrimeError, ResourceLimitError


@dataclass(frozen=True)
class CurvePoint:
    """A point of Y^2 = g(X) over F_p; X is None for the point at infinity."""

    p: int
    X: int | None
    Y: int | None

    @classmethod
    def affine(cls, p: int, X: int, Y: int) -> "CurvePoint":
        return cls(p, X % p, Y % p)

    @classmethod
    def at_infinity(cls, p: int) -> "CurvePoint":
        return cls(p, None, None)

    @property
    def is_infinity(self) -> bool:
        return self.X is None


@dataclass(frozen=True)
class LocalCounts:
    """#C(F_p) and #C(F_{p^2}); n2 stays None until someone pays for it."""

    p: int
    n1: int
    n2: int | None = None

    def hasse_weil_ok(self, genus: int) -> bool:
        # |n - (q+1)| <= 2g*sqrt(q), checked exactly as (n-q-1)^2 <= 4g^2*q
        if (self.n1 - self.p - 1) ** 2 > 4 * genus * genus * self.p:
            return False
        if self.n2 is not None:
            q = self.p * self.p
            if (self.n2 - q - 1) ** 2 > 4 * genus * genus * q:
                return False
        return True


class HyperellipticModel:
    """Y^2 = g(X) with g monic of odd degree over Z."""

    def __init__(self, name: str, coeffs, extra_bad=()):
        self.name = name
        self.coeffs = tuple(int(c) for c in coeffs)
        if len(self.coeffs) % 2 != 0 or self.coeffs[-1] != 1:
            raise ValueError("model must be monic of odd degree")
        self.genus = (len(self.coeffs) - 2) // 2
        self.extra_bad = frozenset(extra_bad)
        self.discriminant = int_poly_discriminant(list(self.coeffs))
        if self.discriminant == 0:
            raise ValueError(f"{name}: g is not squarefree (singular model)")

    def g_int(self, x: int) -> int:
        r = 0
        for c in reversed(self.coeffs):
            r = r * x + c
        return r

    def g_mod(self, p: int) -> PolyFp:
        return PolyFp(self.coeffs, p)

    @functools.cached_property
    def bad_primes(self) -> frozenset[int]:
        """Primes dividing 2 * disc(g), plus any declared extras."""
        return frozenset(factorize(2 * abs(self.discriminant))) | self.extra_bad

    def is_good(self, p: int) -> bool:
        return p not in self.bad_primes

    def check_good(self, p: int):
        if not self.is_good(p):
            raise BadPrimeError(f"{self.name}: p={p} is a bad prime")

    # -- point enumeration over F_p ------------------------------------

    def _sqrt_table(self, p: int) -> list[int | None]:
        # smallest square root of each residue, None for non-residues;
        # consistent with arith.mod_sqrt's deterministic root choice
        table: list[int | None] = [None] * p
        for y in range(p // 2, -1, -1):
            table[y * y % p] = y
        return table

    def enumerate_points(self, p: int) -> list[CurvePoint]:
        """All points of C(F_p): infinity first, then X ascending with the
        smaller Y first.  Deterministic, so target sets built from this
        are byte-reproducible."""
        self.check_good(p)
        roots = self._sqrt_table(p)
        pts = [CurvePoint.at_infinity(p)]
        g = self.g_mod(p)
        for x in range(p):
            v = g(x)
            r = roots[v]
            if r is None:
                continue
            if r == 0:
                pts.append(CurvePoint.affine(p, x, 0))
            else:
                pts.append(CurvePoint.affine(p, x, r))
                pts.append(CurvePoint.affine(p, x, p - r))
        return pts

    def count_points(self, p: int) -> int:
        """n1 = #C(F_p), including the point at infinity."""
        self.check_good(p)
        sq = bytearray(p)
        for y in range(p // 2 + 1):
            sq[y * y % p] = 1
        g = self.g_mod(p)
        n = 1
        for x in range(p):
            v = g(x)
            if v == 0:
                n += 1
            elif sq[v]:
                n += 2
        return n

    def count_points_quadratic_ext(self, p: int, ceiling: int = 3000) -> int:
        """n2 = #C(F_{p^2}), exact, by enumerating F_{p^2} = F_p[t]/(t^2-d)
        with d the smallest non-residue.  Cost is O(p^2), hence the ceiling.

        The quadratic character of F_{p^2} is evaluated through the norm:
        chi_2(v) = chi(v^(p+1)) = chi(a^2 - d*b^2) for v = a + b*t, which
        keeps the inner loop in plain (numpy int64, exact) F_p arithmetic.
        """
        self.check_good(p)
        if p > ceiling:
            raise ResourceLimitError(
                f"p={p} exceeds the quadratic-extension ceiling {ceiling}"
            )
        d = smallest_nonresidue(p)
        gp = [c % p for c in self.coeffs]

        # chi table over F_p with chi[0] = 0
        chi = np.full(p, -1, dtype=np.int64)
        ys = np.arange(1, p, dtype=np.int64)
        chi[(ys * ys) % p] = 1
        chi[0] = 0

        # elements of F_p contribute 2 points unless g(X) = 0 (then 1)
        n = 1 + 2 * p
        gmod = self.g_mod(p)
        n -= sum(1 for x in range(p) if gmod(x) == 0)

        # conjugate pairs a +- b*t, b in [1, (p-1)/2], each counted twice
        a_row = np.arange(p, dtype=np.int64)
        total = 0
        chunk = max(1, (1 << 20) // p)
        for b0 in range(1, (p - 1) // 2 + 1, chunk):
            bs = np.arange(b0, min(b0 + chunk, (p - 1) // 2 + 1), dtype=np.int64)
            aa = np.broadcast_to(a_row, (len(bs), p))
            bb = bs[:, None]
            A = np.ones((len(bs), p), dtype=np.int64)
            B = np.zeros((len(bs), p), dtype=np.int64)
            for c in reversed(gp[:-1]):
                A, B = (A * aa + B * bb % p * d + c) % p, (A * bb + B * aa) % p
            norm = (A * A - d * (B * B % p)) % p
            total += int((1 + chi[norm]).sum())
        return n + 2 * total

    def local_counts(self, p: int, ext_ceiling: int = 3000) -> LocalCounts:
        n1 = self.count_points(p)
        n2 = None
        if self.genus >= 2:
            n2 = self.count_points_quadratic_ext(p, ext_ceiling)
        return LocalCounts(p=p, n1=n1, n2=n2)

    def good_primes(self, lo: int, hi: int) -> list[int]:
        """Good primes in [lo, hi]."""
        from .arith import primes_up_to

        return [p for p in primes_up_to(hi) if p >= lo and self.is_good(p)]

    def __repr__(self):
        return f"HyperellipticModel({self.name!r}, genus={self.genus})"


# ---------------------------------------------------------------------------
# the genus-2 model of C(y,2) = C(x,5)

# X(X-15)(X-30)(X-45)(X-60) + 11390625, expanded; 11390625 = 3375^2 = 15^6/15... = (15^3)^2
PASCAL_COEFFS = (11390625, 1215000, -168750, 7875, -150, 1)

# 3 and 5 are declared bad on top of disc (the X = 15x scaling degenerates
# there); both already divide disc(g) = 3^22 * 5^20 * 16399841.
PASCAL_CURVE = HyperellipticModel("pascal-quintic", PASCAL_COEFFS, extra_bad=(3, 5))


def to_model(x: int, y: int) -> tuple[int, int]:
    """(x, y) of the original equation -> (X, Y) on the quintic model."""
    return 15 * x, 225 * (30 * y - 15)


def from_model(X: int, Y: int):
    """Inverse of to_model, or None when (X, Y) is not an integer image."""
    if X % 15 != 0 or (Y + 3375) % 6750 != 0:
        return None
    return X // 15, (Y + 3375) // 6750


def elliptic_model(a: int, b: int) -> HyperellipticModel:
    """y^2 = x^3 + a*x + b as a genus-1 odd-degree model."""
    if -4 * a**3 - 27 * b**2 == 0:
        raise ValueError(f"singular curve: y^2 = x^3 + {a}x + {b}")
    return HyperellipticModel(f"elliptic[{a},{b}]", (b, a, 0, 1))
