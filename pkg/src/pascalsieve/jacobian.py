"""Jacobian groups J(F_p) of odd-degree hyperelliptic models.

Elements are Mumford pairs (u, v): u monic with deg u <= genus, deg v < deg u,
and u | v^2 - g.  The group law is Cantor's algorithm: composition through
extended polynomial gcds, then the reduction u <- (g - v^2)/u, v <- -v mod u
iterated until deg u <= genus.  Every element of an odd-degree model has a
unique reduced pair, with (1, 0) the identity.

Rational Jacobian points enter as input data only: Mumford pairs with
Fraction coefficients that get reduced coefficient-wise mod p.  There is no
rational-side group arithmetic here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .arith import (
    PolyFp,
    factorize,
    mod_sqrt,
    _padd,
    _pdivmod,
    _pmod,
    _pmonic,
    _pmul,
    _pneg,
    _psub,
    _pxgcd,
)
from .curve import CurvePoint, HyperellipticModel, LocalCounts, to_model
from .diophantine import check_equation
from .errors import BadReductionError, ResourceLimitError


@dataclass(frozen=True)
class MumfordDivisor:
    """An element of J(F_p) in reduced Mumford form."""

    u: PolyFp
    v: PolyFp

    @property
    def p(self) -> int:
        return self.u.p

    def is_identity(self) -> bool:
        return self.u.coeffs == (1,) and self.v.is_zero()

    def __repr__(self):
        return f"MumfordDivisor(u={list(self.u.coeffs)}, v={list(self.v.coeffs)}, p={self.p})"


def _cantor_add(u1, v1, u2, v2, g, p, genus):
    """Raw-tuple Cantor composition + reduction; returns reduced (u, v)."""
    # composition: d = gcd(u1, u2, v1 + v2) with full Bezout data
    d1, e1, e2 = _pxgcd(u1, u2, p)
    vs = _padd(v1, v2, p)
    if vs:
        d, c1, c2 = _pxgcd(d1, vs, p)
    else:
        d, c1, c2 = d1, (1,), ()
    s1 = _pmul(c1, e1, p)
    s2 = _pmul(c1, e2, p)
    u, r = _pdivmod(_pmul(u1, u2, p), _pmul(d, d, p), p)
    assert not r, "composition: d^2 must divide u1*u2"
    t = _padd(_pmul(_pmul(s1, u1, p), v2, p), _pmul(_pmul(s2, u2, p), v1, p), p)
    t = _padd(t, _pmul(c2, _padd(_pmul(v1, v2, p), g, p), p), p)
    t, r = _pdivmod(t, d, p)
    assert not r, "composition: d must divide the v-numerator"
    v = _pmod(t, u, p)
    # reduction: peel degrees off u until it fits the genus
    while len(u) - 1 > genus:
        u_next, r = _pdivmod(_psub(g, _pmul(v, v, p), p), u, p)
        assert not r, "reduction: u must divide g - v^2"
        v = _pmod(_pneg(v, p), u_next, p)
        u = u_next
    return _pmonic(u, p), v


class Jacobian:
    """J(F_p) for one good prime of one model; all operations are pure."""

    def __init__(self, model: HyperellipticModel, p: int):
        model.check_good(p)
        self.model = model
        self.p = p
        self.genus = model.genus
        self.g = model.g_mod(p)
        self.identity = MumfordDivisor(PolyFp.one(p), PolyFp.zero(p))

    def _wrap(self, u, v) -> MumfordDivisor:
        return MumfordDivisor(PolyFp._mk(u, self.p), PolyFp._mk(v, self.p))

    def _check(self, D: MumfordDivisor):
        if D.p != self.p:
            raise ValueError(f"divisor lives mod {D.p}, group is mod {self.p}")

    def is_element(self, D: MumfordDivisor) -> bool:
        """Reduced-pair validity: u monic of degree <= genus, deg v < deg u,
        and u | v^2 - g."""
        u, v = D.u, D.v
        if D.p != self.p or u.is_zero() or u.lc != 1 or u.degree > self.genus:
            return False
        if not v.is_zero() and v.degree >= u.degree:
            return False
        return ((v * v - self.g) % u).is_zero()

    def add(self, D1: MumfordDivisor, D2: MumfordDivisor) -> MumfordDivisor:
        self._check(D1)
        self._check(D2)
        if D1.is_identity():
            return D2
        if D2.is_identity():
            return D1
        u, v = _cantor_add(
            D1.u.coeffs, D1.v.coeffs, D2.u.coeffs, D2.v.coeffs,
            self.g.coeffs, self.p, self.genus,
        )
        return self._wrap(u, v)

    def negate(self, D: MumfordDivisor) -> MumfordDivisor:
        self._check(D)
        return self._wrap(D.u.coeffs, _pmod(_pneg(D.v.coeffs, self.p), D.u.coeffs, self.p))

    def scalar_mul(self, n: int, D: MumfordDivisor) -> MumfordDivisor:
        self._check(D)
        if n < 0:
            n, D = -n, self.negate(D)
        acc = self.identity
        sq = D
        while n:
            if n & 1:
                acc = self.add(acc, sq)
            n >>= 1
            if n:
                sq = self.add(sq, sq)
        return acc

    def embed(self, pt: CurvePoint) -> MumfordDivisor:
        """iota_p: affine (X, Y) -> (T - X, Y); infinity -> identity."""
        if pt.p != self.p:
            raise ValueError("point/group modulus mismatch")
        if pt.is_infinity:
            return self.identity
        u = ((-pt.X) % self.p, 1)
        v = (pt.Y,) if pt.Y else ()
        return self._wrap(u, v)

    def enumerate_group(self) -> list[MumfordDivisor]:
        """All reduced Mumford pairs, by brute force.  Only for tiny p (the
        degree-2 scan costs p^4); serves as the independent order oracle."""
        if self.p > 13:
            raise ResourceLimitError(f"enumerate_group is limited to p <= 13, got {self.p}")
        p, g = self.p, self.g
        out = [self.identity]
        for pt in self.model.enumerate_points(p):
            if not pt.is_infinity:
                out.append(self.embed(pt))
        if self.genus >= 2:
            # u = T^2 + u1*T + u0, v = v1*T + v0; reducing v^2 - g mod u via
            # T^2 = -u1*T - u0 gives v^2 = (2*v1*v0 - v1^2*u1)*T + (v0^2 - v1^2*u0),
            # which must match g mod u coefficient by coefficient
            for u1 in range(p):
                for u0 in range(p):
                    u = PolyFp._mk((u0, u1, 1), p)
                    gm = g % u
                    g1 = gm.coeffs[1] if gm.degree >= 1 else 0
                    g0 = gm.coeffs[0] if gm.degree >= 0 else 0
                    for v1 in range(p):
                        w1 = v1 * v1 % p
                        for v0 in range(p):
                            if (2 * v1 * v0 - w1 * u1) % p != g1:
                                continue
                            if (v0 * v0 - w1 * u0) % p == g0:
                                out.append(self._wrap((u0, u1, 1), _trimmed_v(v0, v1)))
        return out

    def random_element(self, rng) -> MumfordDivisor:
        """A pseudo-random element: the sum of two random point embeds.
        Deterministic under a seeded rng."""
        D = self.identity
        for _ in range(2):
            while True:
                x = rng.randrange(self.p)
                r = mod_sqrt(self.g(x), self.p)
                if r is None:
                    continue
                y = r if rng.randrange(2) == 0 else (-r) % self.p
                D = self.add(D, self.embed(CurvePoint.affine(self.p, x, y)))
                break
        return D


def _trimmed_v(v0: int, v1: int) -> tuple[int, ...]:
    if v1:
        return (v0, v1)
    if v0:
        return (v0,)
    return ()


# ---------------------------------------------------------------------------
# order of J(F_p) through the zeta function


@dataclass(frozen=True)
class JacobianLocal:
    """Order data for J(F_p), derived from point counts over F_p and F_{p^2}."""

    p: int
    counts: LocalCounts
    c1: int
    c2: int | None
    order: int

    def weil_interval_ok(self) -> bool:
        """(sqrt(p) - 1)^(2g) <= order <= (sqrt(p) + 1)^(2g), checked exactly."""
        g = 2 if self.c2 is not None else 1
        return _weil_ok(self.p, self.order, g)


def _weil_ok(p: int, order: int, genus: int) -> bool:
    if genus == 1:
        return (order - p - 1) ** 2 <= 4 * p
    # genus 2: (s -+ 1)^4 = p^2 + 6p + 1 -+ (4p + 4)s with s = sqrt(p)
    mid = p * p + 6 * p + 1
    slack = order - mid
    # order <= mid + (4p+4)s  and  order >= mid - (4p+4)s
    if slack > 0 and slack * slack > 16 * (p + 1) ** 2 * p:
        return False
    if slack < 0 and slack * slack > 16 * (p + 1) ** 2 * p:
        return False
    return True


def group_order(model: HyperellipticModel, p: int, ext_ceiling: int = 3000) -> JacobianLocal:
    """#J(F_p) = L(1) with L the numerator of the local zeta function.

    Genus 1: L(T) = 1 + c1*T + p*T^2, so the order is just #C(F_p).
    Genus 2: L(T) = 1 + c1*T + c2*T^2 + p*c1*T^3 + p^2*T^4 with
    c1 = n1 - p - 1 and c2 = (c1^2 + n2 - p^2 - 1)/2; the division by 2
    must be exact, which makes it a sharp detector of counting bugs.
    """
    counts = model.local_counts(p, ext_ceiling)
    c1 = counts.n1 - p - 1
    if model.genus == 1:
        return JacobianLocal(p=p, counts=counts, c1=c1, c2=None, order=counts.n1)
    if model.genus != 2:
        raise NotImplementedError("group_order handles genus 1 and 2")
    num = c1 * c1 + counts.n2 - p * p - 1
    if num % 2:
        raise ArithmeticError(f"p={p}: c2 parity failure, point counts are wrong")
    c2 = num // 2
    order = 1 + c1 + c2 + p * c1 + p * p
    return JacobianLocal(p=p, counts=counts, c1=c1, c2=c2, order=order)


def element_order(jac: Jacobian, D: MumfordDivisor, group_size: int,
                  factors: dict[int, int] | None = None) -> int:
    """Order of D given the group size (or any annihilating multiple)."""
    if factors is None:
        factors = factorize(group_size)
    o = group_size
    for q in factors:
        while o % q == 0 and jac.scalar_mul(o // q, D).is_identity():
            o //= q
    return o


# ---------------------------------------------------------------------------
# rational Jacobian points (input data) and their reduction


def _q_trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def _q_mul(a, b):
    if not a or not b:
        return ()
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _q_trim(out)


def _q_sub(a, b):
    n = max(len(a), len(b))
    return _q_trim(
        [
            (a[i] if i < len(a) else Fraction(0)) - (b[i] if i < len(b) else Fraction(0))
            for i in range(n)
        ]
    )


def _q_mod(a, b):
    a = list(a)
    while len(a) >= len(b) and a:
        c = a[-1] / b[-1]
        for i in range(len(b)):
            a[len(a) - len(b) + i] -= c * b[i]
        a = list(_q_trim(a))
    return tuple(a)


@dataclass(frozen=True)
class RationalJacobianPoint:
    """A Mumford pair over Q: exact input data for generator images."""

    u: tuple[Fraction, ...]
    v: tuple[Fraction, ...]

    @classmethod
    def identity(cls) -> "RationalJacobianPoint":
        return cls(u=(Fraction(1),), v=())

    @classmethod
    def from_pair(cls, u, v, model: HyperellipticModel) -> "RationalJacobianPoint":
        u = _q_trim(Fraction(c) for c in u)
        v = _q_trim(Fraction(c) for c in v)
        if not u or u[-1] != 1:
            raise ValueError("u must be monic")
        if len(u) - 1 > model.genus:
            raise ValueError(f"deg u = {len(u) - 1} exceeds genus {model.genus}")
        if len(v) >= len(u):
            raise ValueError("deg v must be < deg u")
        g = tuple(Fraction(c) for c in model.coeffs)
        if _q_mod(_q_sub(_q_mul(v, v), g), u):
            raise ValueError("u does not divide v^2 - g over Q")
        return cls(u=u, v=v)

    @classmethod
    def from_curve_point(cls, x, y, model: HyperellipticModel) -> "RationalJacobianPoint":
        """Embed an affine rational curve point: (x, y) -> (T - x, y)."""
        return cls.from_pair((-Fraction(x), Fraction(1)), (Fraction(y),), model)


def reduce_rational_point(jac: Jacobian, P: RationalJacobianPoint) -> MumfordDivisor:
    """Coefficient-wise reduction mod p; the commuting square in action."""
    p = jac.p

    def red(frac: Fraction) -> int:
        den = frac.denominator % p
        if den == 0:
            raise BadReductionError(f"denominator of {frac} vanishes mod {p}")
        return frac.numerator * pow(den, p - 2, p) % p

    D = MumfordDivisor(PolyFp([red(c) for c in P.u], p), PolyFp([red(c) for c in P.v], p))
    if not jac.is_element(D):
        raise ValueError("reduction is not a valid Mumford pair (bad input point?)")
    return D


# ---------------------------------------------------------------------------
# naive height on the quintic model


def _log_int(n: int) -> float:
    bl = n.bit_length()
    if bl <= 900:
        return math.log(n)
    return math.log(n >> (bl - 900)) + (bl - 900) * math.log(2)


def naive_height(x: int, y: int) -> str:
    """log max(|X|, |Y|) of the integral model point of a solution (x, y).

    The Mumford pair of iota(x, y) over Q is (T - X, Y), so its integer
    coordinates are exactly X and Y.  Returned as a decimal string with 15
    significant digits for reproducible reports.
    """
    if not check_equation(x, y):
        raise ValueError(f"({x}, {y}) does not solve the equation")
    if abs(x) < 2:
        raise ValueError("height is only meaningful for |x| >= 2")
    X, Y = to_model(x, y)
    return format(_log_int(max(abs(X), abs(Y))), ".15g")
