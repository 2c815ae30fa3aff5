"""Exact integer, modular and polynomial arithmetic.

Everything in this module is integer-exact: no floats, no rounding.
Python's built-in int carries the arbitrary-precision load; rationals
elsewhere in the package use fractions.Fraction.  All values are
immutable and all functions are pure.
"""

from __future__ import annotations

import math

# ---------------------------------------------------------------------------
# integers


def binomial(n: int, k: int) -> int:
    """Exact C(n, k); zero when k > n."""
    if n < 0 or k < 0:
        raise ValueError(f"binomial requires n, k >= 0, got ({n}, {k})")
    return math.comb(n, k)


def legendre(a: int, p: int) -> int:
    """Legendre symbol (a/p) for odd prime p: 1, -1, or 0."""
    a %= p
    if a == 0:
        return 0
    r = pow(a, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def mod_sqrt(a: int, p: int):
    """Square root of a mod p (odd prime), or None for a non-residue.

    Tonelli-Shanks with a deterministic choice: of the two roots the
    smaller representative in [0, p) is returned, so every enumeration
    built on top of this is reproducible.
    """
    if p == 2:
        raise ValueError("mod_sqrt requires an odd prime modulus")
    a %= p
    if a == 0:
        return 0
    if legendre(a, p) != 1:
        return None
    if p % 4 == 3:
        r = pow(a, (p + 1) // 4, p)
        return min(r, p - r)
    # write p - 1 = q * 2^s with q odd
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    z = smallest_nonresidue(p)
    c = pow(z, q, p)
    r = pow(a, (q + 1) // 2, p)
    t = pow(a, q, p)
    m = s
    while t != 1:
        # order of t is 2^i
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (m - i - 1), p)
        r = r * b % p
        c = b * b % p
        t = t * c % p
        m = i
    return min(r, p - r)


def smallest_nonresidue(p: int) -> int:
    """Smallest quadratic non-residue mod odd prime p."""
    for z in range(2, p):
        if legendre(z, p) == -1:
            return z
    raise ValueError(f"no non-residue mod {p}; is it prime?")


def primes_up_to(n: int) -> list[int]:
    """All primes <= n by a plain Eratosthenes sieve."""
    if n < 2:
        return []
    mark = bytearray([1]) * (n + 1)
    mark[0] = mark[1] = 0
    for i in range(2, math.isqrt(n) + 1):
        if mark[i]:
            mark[i * i :: i] = bytes(len(range(i * i, n + 1, i)))
    return [i for i in range(2, n + 1) if mark[i]]


# Deterministic Miller-Rabin witness set, valid for all n < 3.317e24.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
_MR_LIMIT = 3_317_044_064_679_887_385_961_981


def is_prime(n: int) -> bool:
    """Deterministic primality test for n < 3.3e24 (covers desk scale)."""
    if n >= _MR_LIMIT:
        raise ValueError(f"is_prime supports n < {_MR_LIMIT}")
    if n < 2:
        return False
    for w in _MR_WITNESSES:
        if n % w == 0:
            return n == w
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for w in _MR_WITNESSES:
        x = pow(w, d, n)
        if x == 1 or x == n - 1:
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


_TRIAL_LIMIT = 10**6


def _rho_split(n: int) -> int:
    """A nontrivial factor of composite odd n via Brent's cycle method.

    Deterministic: the polynomial offset c is stepped 1, 2, 3, ... until a
    split is found, so repeated runs factor identically.
    """
    for c in range(1, 100):
        y, m, g, r, q = 2, 128, 1, 1, 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g
    raise ArithmeticError(f"rho failed to split {n}")


def factorize(n: int) -> dict[int, int]:
    """Exact prime factorization {p: exponent} of n >= 1.

    Trial division below 10^6, then Brent rho on what remains; each
    surviving factor is certified prime by the deterministic test.
    """
    if n <= 0:
        raise ValueError(f"factorize requires n >= 1, got {n}")
    out: dict[int, int] = {}
    for q in (2, 3, 5):
        while n % q == 0:
            out[q] = out.get(q, 0) + 1
            n //= q
    q = 7
    while q <= _TRIAL_LIMIT and q * q <= n:
        while n % q == 0:
            out[q] = out.get(q, 0) + 1
            n //= q
        q += 2
    if n == 1:
        return out
    stack = [n]
    while stack:
        m = stack.pop()
        if is_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        d = _rho_split(m)
        stack.append(d)
        stack.append(m // d)
    return out


# ---------------------------------------------------------------------------
# integer polynomials: resultant / discriminant (Bareiss, fraction-free)


def int_poly_resultant(a: list[int], b: list[int]) -> int:
    """Resultant of two integer polynomials (coefficients low -> high)."""
    a = _int_trim(a)
    b = _int_trim(b)
    if not a or not b:
        return 0
    da, db = len(a) - 1, len(b) - 1
    if da == 0:
        return a[0] ** db
    if db == 0:
        return b[0] ** da
    size = da + db
    rows = []
    for i in range(db):
        rows.append([0] * i + list(reversed(a)) + [0] * (db - 1 - i))
    for i in range(da):
        rows.append([0] * i + list(reversed(b)) + [0] * (da - 1 - i))
    # Bareiss fraction-free elimination: exact over Z
    sign = 1
    prev = 1
    for k in range(size - 1):
        if rows[k][k] == 0:
            for j in range(k + 1, size):
                if rows[j][k] != 0:
                    rows[k], rows[j] = rows[j], rows[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                rows[i][j] = (rows[i][j] * rows[k][k] - rows[i][k] * rows[k][j]) // prev
            rows[i][k] = 0
        prev = rows[k][k]
    return sign * rows[size - 1][size - 1]


def int_poly_discriminant(g: list[int]) -> int:
    """Discriminant of an integer polynomial via resultant(g, g')."""
    g = _int_trim(g)
    n = len(g) - 1
    if n < 1:
        raise ValueError("discriminant needs degree >= 1")
    dg = [i * c for i, c in enumerate(g)][1:]
    res = int_poly_resultant(g, dg)
    sign = -1 if (n * (n - 1) // 2) % 2 else 1
    num = sign * res
    assert num % g[-1] == 0
    return num // g[-1]


def _int_trim(c: list[int]) -> list[int]:
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return c


# ---------------------------------------------------------------------------
# polynomials over a prime field
#
# Raw kernels work on trimmed coefficient tuples (low -> high) with all
# entries already reduced mod p; PolyFp is the hashable wrapper around them.
# The zero polynomial is the empty tuple, degree sentinel -1.


def _trim(c: tuple[int, ...]) -> tuple[int, ...]:
    n = len(c)
    while n and c[n - 1] == 0:
        n -= 1
    return c[:n]


def _padd(a, b, p):
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, x in enumerate(b):
        out[i] = (out[i] + x) % p
    return _trim(tuple(out))


def _psub(a, b, p):
    n = max(len(a), len(b))
    out = [0] * n
    for i in range(n):
        x = a[i] if i < len(a) else 0
        y = b[i] if i < len(b) else 0
        out[i] = (x - y) % p
    return _trim(tuple(out))


def _pneg(a, p):
    return tuple((-x) % p for x in a)


def _pmul(a, b, p):
    if not a or not b:
        return ()
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return _trim(tuple(v % p for v in out))


def _pscale(a, c, p):
    c %= p
    if c == 0:
        return ()
    return tuple(x * c % p for x in a)


def _pdivmod(a, b, p):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return (), a
    inv = pow(b[-1], p - 2, p)
    rem = list(a)
    q = [0] * (len(a) - len(b) + 1)
    for shift in range(len(a) - len(b), -1, -1):
        c = rem[shift + len(b) - 1] * inv % p
        if c:
            q[shift] = c
            for i, y in enumerate(b):
                rem[shift + i] = (rem[shift + i] - c * y) % p
    return _trim(tuple(q)), _trim(tuple(rem))


def _pmod(a, b, p):
    return _pdivmod(a, b, p)[1]


def _pmonic(a, p):
    if not a or a[-1] == 1:
        return a
    return _pscale(a, pow(a[-1], p - 2, p), p)


def _pgcd(a, b, p):
    while b:
        a, b = b, _pmod(a, b, p)
    return _pmonic(a, p)


def _pxgcd(a, b, p):
    """(g, s, t) with s*a + t*b = g, g monic."""
    r0, r1 = a, b
    s0, s1 = (1,), ()
    t0, t1 = (), (1,)
    while r1:
        q, r = _pdivmod(r0, r1, p)
        r0, r1 = r1, r
        s0, s1 = s1, _psub(s0, _pmul(q, s1, p), p)
        t0, t1 = t1, _psub(t0, _pmul(q, t1, p), p)
    if r0 and r0[-1] != 1:
        inv = pow(r0[-1], p - 2, p)
        r0 = _pscale(r0, inv, p)
        s0 = _pscale(s0, inv, p)
        t0 = _pscale(t0, inv, p)
    return r0, s0, t0


def _peval(a, x, p):
    r = 0
    for c in reversed(a):
        r = (r * x + c) % p
    return r


class PolyFp:
    """Polynomial over F_p: trimmed coefficient tuple (low -> high), immutable."""

    __slots__ = ("coeffs", "p")

    def __init__(self, coeffs, p: int):
        self.p = p
        self.coeffs = _trim(tuple(c % p for c in coeffs))

    @staticmethod
    def _mk(coeffs: tuple[int, ...], p: int) -> "PolyFp":
        poly = object.__new__(PolyFp)
        poly.coeffs = coeffs
        poly.p = p
        return poly

    @classmethod
    def zero(cls, p: int) -> "PolyFp":
        return cls._mk((), p)

    @classmethod
    def one(cls, p: int) -> "PolyFp":
        return cls._mk((1,), p)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1  # -1 for the zero polynomial

    @property
    def lc(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def monic(self) -> "PolyFp":
        return PolyFp._mk(_pmonic(self.coeffs, self.p), self.p)

    def _check(self, other: "PolyFp"):
        if self.p != other.p:
            raise ValueError(f"modulus mismatch: {self.p} vs {other.p}")

    def __add__(self, other):
        self._check(other)
        return PolyFp._mk(_padd(self.coeffs, other.coeffs, self.p), self.p)

    def __sub__(self, other):
        self._check(other)
        return PolyFp._mk(_psub(self.coeffs, other.coeffs, self.p), self.p)

    def __neg__(self):
        return PolyFp._mk(_pneg(self.coeffs, self.p), self.p)

    def __mul__(self, other):
        self._check(other)
        return PolyFp._mk(_pmul(self.coeffs, other.coeffs, self.p), self.p)

    def __divmod__(self, other):
        self._check(other)
        q, r = _pdivmod(self.coeffs, other.coeffs, self.p)
        return PolyFp._mk(q, self.p), PolyFp._mk(r, self.p)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __call__(self, x: int) -> int:
        return _peval(self.coeffs, x, self.p)

    def __eq__(self, other):
        return (
            isinstance(other, PolyFp)
            and self.p == other.p
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.p, self.coeffs))

    def __repr__(self):
        return f"PolyFp({list(self.coeffs)}, p={self.p})"


def poly_divmod(a: PolyFp, b: PolyFp) -> tuple[PolyFp, PolyFp]:
    """(q, r) with a = q*b + r and deg r < deg b."""
    return divmod(a, b)


def poly_gcd(a: PolyFp, b: PolyFp) -> PolyFp:
    """Monic gcd; gcd(a, 0) is the monic scaling of a."""
    a._check(b)
    return PolyFp._mk(_pgcd(a.coeffs, b.coeffs, a.p), a.p)


def poly_xgcd(a: PolyFp, b: PolyFp) -> tuple[PolyFp, PolyFp, PolyFp]:
    """(g, s, t) with s*a + t*b = g and g the monic gcd."""
    a._check(b)
    g, s, t = _pxgcd(a.coeffs, b.coeffs, a.p)
    return PolyFp._mk(g, a.p), PolyFp._mk(s, a.p), PolyFp._mk(t, a.p)


def poly_eval(a: PolyFp, x: int) -> int:
    """a(x) in F_p."""
    return a(x)
