"""Dense univariate polynomials over a prime field ``F_p``.

Coefficients are stored constant term first and reduced into ``[0, p)``;
the zero polynomial has no coefficients. Factorization is delegated to
sympy's finite-field routines.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from sympy import factorint, isprime
from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_factor

MAX_PRIME = 97


class FieldError(ValueError):
    pass


def check_prime(p: int) -> int:
    if not (isinstance(p, int) and 2 <= p <= MAX_PRIME and isprime(p)):
        raise FieldError(f"characteristic must be a prime <= {MAX_PRIME}, got {p!r}")
    return p


class Poly:
    __slots__ = ("p", "coeffs")

    def __init__(self, p: int, coeffs=()):
        self.p = p
        c = [int(x) % p for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs = tuple(c)

    @classmethod
    def constant(cls, p: int, c: int) -> "Poly":
        return cls(p, [c])

    @classmethod
    def monomial(cls, p: int, n: int, c: int = 1) -> "Poly":
        return cls(p, [0] * n + [c])

    @classmethod
    def x(cls, p: int) -> "Poly":
        return cls(p, [0, 1])

    # ---- basic structure ---------------------------------------------------------

    @property
    def degree(self) -> int:
        """Degree, with ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.coeffs == (1,)

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def is_monic(self) -> bool:
        return self.lead == 1

    def monic(self) -> "Poly":
        if self.is_zero():
            raise FieldError("the zero polynomial has no monic associate")
        return self * pow(self.lead, -1, self.p)

    def reverse(self, n: int | None = None) -> "Poly":
        """``t^n f(1/t)``; ``n`` defaults to the degree."""
        n = self.degree if n is None else n
        if n < self.degree:
            raise FieldError("reversal degree below the polynomial degree")
        return Poly(self.p, (list(self.coeffs) + [0] * (n - self.degree))[::-1])

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = (acc * x + c) % self.p
        return acc

    def __eq__(self, other):
        return isinstance(other, Poly) and self.p == other.p and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.p, self.coeffs))

    def __lt__(self, other: "Poly"):
        # degree first, then coefficients from the top: a stable order for places
        return (self.degree, self.coeffs[::-1]) < (other.degree, other.coeffs[::-1])

    def __repr__(self):
        return f"Poly({self.p}, {list(self.coeffs)})"

    def __str__(self):
        if self.is_zero():
            return "0"
        terms = []
        for n in range(self.degree, -1, -1):
            c = self.coeffs[n]
            if not c:
                continue
            mono = "" if n == 0 else ("t" if n == 1 else f"t^{n}")
            coef = str(c) if (c != 1 or n == 0) else ""
            terms.append(coef + ("*" if coef and mono else "") + mono)
        return " + ".join(terms)

    # ---- ring operations -----------------------------------------------------------

    def _same(self, other) -> "Poly":
        if isinstance(other, int):
            return Poly(self.p, [other])
        if not isinstance(other, Poly) or other.p != self.p:
            raise FieldError("polynomials over different fields")
        return other

    def __add__(self, other):
        other = self._same(other)
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return Poly(self.p, [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.p, [-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-self._same(other))

    def __rsub__(self, other):
        return self._same(other) - self

    def __mul__(self, other):
        other = self._same(other)
        if self.is_zero() or other.is_zero():
            return Poly(self.p)
        out = [0] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    out[i + j] += a * b
        return Poly(self.p, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise FieldError("negative power of a polynomial")
        out, base = Poly(self.p, [1]), self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def __divmod__(self, other):
        other = self._same(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        p = self.p
        rem = list(self.coeffs)
        inv = pow(other.lead, -1, p)
        dq = len(rem) - len(other.coeffs)
        if dq < 0:
            return Poly(p), self
        quot = [0] * (dq + 1)
        for k in range(dq, -1, -1):
            c = rem[k + other.degree] * inv % p
            quot[k] = c
            if c:
                for i, b in enumerate(other.coeffs):
                    rem[k + i] = (rem[k + i] - c * b) % p
        return Poly(p, quot), Poly(p, rem)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def divides(self, other: "Poly") -> bool:
        return (other % self).is_zero()

    def derivative(self) -> "Poly":
        return Poly(self.p, [i * c for i, c in enumerate(self.coeffs)][1:])


def gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd (zero if both are zero)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic() if not a.is_zero() else a


def ext_gcd(a: Poly, b: Poly) -> tuple[Poly, Poly, Poly]:
    """``(g, u, v)`` with ``u a + v b = g`` and ``g`` monic."""
    p = a.p
    r0, r1 = a, b
    s0, s1 = Poly(p, [1]), Poly(p)
    t0, t1 = Poly(p), Poly(p, [1])
    while not r1.is_zero():
        q, r = divmod(r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    inv = pow(r0.lead, -1, p)
    return r0 * inv, s0 * inv, t0 * inv


def powmod(base: Poly, n: int, modulus: Poly) -> Poly:
    out, b = Poly(base.p, [1]) % modulus, base % modulus
    while n:
        if n & 1:
            out = out * b % modulus
        b = b * b % modulus
        n >>= 1
    return out


def is_irreducible(f: Poly) -> bool:
    """Rabin's test: ``t^(p^d) = t mod f`` and ``gcd(t^(p^(d/r)) - t, f) = 1`` for primes ``r | d``."""
    d = f.degree
    if d < 1:
        return False
    if d == 1:
        return True
    p = f.p
    t = Poly.x(p)
    f = f.monic()
    for r in factorint(d):
        h = powmod(t, p ** (d // r), f) - t
        if not gcd(h, f).is_one():
            return False
    return (powmod(t, p ** d, f) - t).is_zero()


def factor(f: Poly) -> tuple[int, list[tuple[Poly, int]]]:
    """``(lead, [(monic irreducible, multiplicity), ...])`` sorted by the place order."""
    if f.is_zero():
        raise FieldError("cannot factor the zero polynomial")
    if f.degree == 0:
        return f.lead, []
    lead, parts = gf_factor([int(c) for c in reversed(f.coeffs)], f.p, ZZ)
    out = [(Poly(f.p, [int(c) for c in reversed(g)]), int(m)) for g, m in parts]
    return int(lead) % f.p, sorted(out, key=lambda gm: gm[0])


@lru_cache(maxsize=None)
def monic_polys(p: int, d: int) -> tuple[Poly, ...]:
    """All monic polynomials of degree ``d`` in a fixed order."""
    return tuple(Poly(p, list(c)[::-1] + [1]) for c in itertools.product(range(p), repeat=d))


@lru_cache(maxsize=None)
def irreducibles(p: int, d: int) -> tuple[Poly, ...]:
    return tuple(f for f in monic_polys(p, d) if is_irreducible(f))
