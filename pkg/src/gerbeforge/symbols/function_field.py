"""Rational functions over ``F_p``, their places, valuations and tame symbols.

A finite place is a monic irreducible ``pi``; its residue field is
``F_p[t]/(pi)``. The place at infinity is handled by substituting
``t = 1/u`` and working at ``u = 0``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from .field import FieldElement, FiniteField
from .poly import FieldError, Poly, check_prime, factor, gcd, irreducibles, is_irreducible


class RationalFunction:
    """``num / den`` in lowest terms with ``den`` monic."""

    __slots__ = ("p", "num", "den")

    def __init__(self, num: Poly, den: Poly | None = None):
        p = num.p
        den = Poly(p, [1]) if den is None else den
        if den.p != p:
            raise FieldError("numerator and denominator over different fields")
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        if num.is_zero():
            num, den = num, Poly(p, [1])
        else:
            g = gcd(num, den)
            num, den = num // g, den // g
            c = pow(den.lead, -1, p)
            num, den = num * c, den * c
        self.p, self.num, self.den = p, num, den

    @classmethod
    def from_coeffs(cls, p: int, num, den=(1,)) -> "RationalFunction":
        check_prime(p)
        return cls(Poly(p, num), Poly(p, den))

    @classmethod
    def constant(cls, p: int, c: int) -> "RationalFunction":
        return cls(Poly(p, [c]))

    @classmethod
    def t(cls, p: int) -> "RationalFunction":
        return cls(Poly.x(p))

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def is_one(self) -> bool:
        return self.num.is_one() and self.den.is_one()

    def is_constant(self) -> bool:
        return self.num.is_constant() and self.den.is_constant()

    def _coerce(self, other) -> "RationalFunction":
        if isinstance(other, int):
            return RationalFunction.constant(self.p, other)
        if isinstance(other, Poly):
            return RationalFunction(other)
        if not isinstance(other, RationalFunction) or other.p != self.p:
            raise FieldError("rational functions over different fields")
        return other

    def __add__(self, other):
        o = self._coerce(other)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        o = self._coerce(other)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFunction":
        if self.is_zero():
            raise ZeroDivisionError("zero has no inverse")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __rtruediv__(self, other):
        return self._coerce(other) * self.inverse()

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        return RationalFunction(self.num ** n, self.den ** n)

    def __eq__(self, other):
        if isinstance(other, int):
            other = RationalFunction.constant(self.p, other)
        return isinstance(other, RationalFunction) and (self.p, self.num, self.den) == (other.p, other.num, other.den)

    def __hash__(self):
        return hash((self.p, self.num, self.den))

    def __repr__(self):
        return f"RationalFunction({self.p}, {list(self.num.coeffs)}, {list(self.den.coeffs)})"

    def __str__(self):
        if self.den.is_one():
            return f"({self.num})"
        return f"({self.num}) / ({self.den})"

    @property
    def height(self) -> int:
        return max(self.num.degree, self.den.degree)

    def at_infinity(self) -> "RationalFunction":
        """``f(1/u)`` as a rational function of ``u``."""
        dn, dd = self.num.degree, self.den.degree
        if self.is_zero():
            return self
        num, den = self.num.reverse(), self.den.reverse()
        shift = dd - dn
        if shift >= 0:
            num = num * Poly.monomial(self.p, shift)
        else:
            den = den * Poly.monomial(self.p, -shift)
        return RationalFunction(num, den)

    def to_json(self) -> dict:
        return {"p": self.p, "num": list(self.num.coeffs), "den": list(self.den.coeffs)}


def random_rational_function(rng: random.Random, p: int, max_degree: int = 4) -> RationalFunction:
    """Nonzero ``num / den`` with both degrees at most ``max_degree``."""
    while True:
        num = Poly(p, [rng.randrange(p) for _ in range(rng.randint(1, max_degree + 1))])
        den = Poly(p, [rng.randrange(p) for _ in range(rng.randint(1, max_degree + 1))])
        if not num.is_zero() and not den.is_zero():
            return RationalFunction(num, den)


@dataclass(frozen=True, order=True)
class Place:
    """A monic irreducible ``pi``, or infinity when ``pi`` is ``None``."""

    p: int
    pi: Poly | None = field(default=None, compare=False)
    _key: tuple = field(init=False, repr=False)

    def __post_init__(self):
        check_prime(self.p)
        if self.pi is not None:
            if self.pi.p != self.p:
                raise FieldError("place polynomial over a different field")
            if not self.pi.is_monic() or not is_irreducible(self.pi):
                raise FieldError(f"{self.pi} is not monic irreducible over F_{self.p}")
        # finite places sort by degree then coefficients; infinity last
        key = (1,) if self.pi is None else (0, self.pi.degree, self.pi.coeffs[::-1])
        object.__setattr__(self, "_key", key)

    @classmethod
    def infinity(cls, p: int) -> "Place":
        return cls(p, None)

    @classmethod
    def finite(cls, pi: Poly) -> "Place":
        return cls(pi.p, pi)

    @property
    def is_infinite(self) -> bool:
        return self.pi is None

    @property
    def degree(self) -> int:
        return 1 if self.pi is None else self.pi.degree

    def residue_field(self) -> FiniteField:
        return FiniteField(self.p, None if self.pi is None or self.pi.degree == 1 else self.pi)

    def _local(self, f: RationalFunction) -> tuple[RationalFunction, Poly]:
        """``f`` moved to the finite chart together with the uniformizing polynomial."""
        if self.pi is None:
            return f.at_infinity(), Poly.x(self.p)
        return f, self.pi

    def __str__(self):
        return "inf" if self.pi is None else f"({self.pi})"

    def to_json(self):
        return "inf" if self.pi is None else list(self.pi.coeffs)


def place_from_json(p: int, d) -> Place:
    if d == "inf":
        return Place.infinity(p)
    return Place.finite(Poly(p, d))


def _multiplicity(pi: Poly, f: Poly) -> int:
    n = 0
    while True:
        q, r = divmod(f, pi)
        if not r.is_zero():
            return n
        f, n = q, n + 1


def ord_at(v: Place, f: RationalFunction) -> int:
    """Valuation of ``f`` at ``v``."""
    if f.is_zero():
        raise FieldError("the valuation of zero is undefined")
    if v.pi is None:
        return f.den.degree - f.num.degree
    return _multiplicity(v.pi, f.num) - _multiplicity(v.pi, f.den)


def residue(v: Place, f: RationalFunction) -> FieldElement:
    """Image of a unit at ``v`` in the residue field."""
    g, pi = v._local(f)
    k = v.residue_field()
    num, den = g.num % pi, g.den % pi
    if num.is_zero() or den.is_zero():
        raise FieldError(f"{f} is not a unit at {v}")
    # modulo a linear pi the remainders are constants, which F_p = F_p[t]/(t) keeps as is
    return k(num) / k(den)


def tame_symbol(v: Place, f: RationalFunction, g: RationalFunction) -> FieldElement:
    """``(-1)^(a b) f^b / g^a`` reduced at ``v``, with ``a = ord f`` and ``b = ord g``."""
    if f.is_zero() or g.is_zero():
        raise FieldError("tame symbol of zero")
    a, b = ord_at(v, f), ord_at(v, g)
    unit = (f ** b) / (g ** a)
    if (a * b) % 2:
        unit = -unit
    return residue(v, unit)


class Divisor:
    """Finite formal sum of places with integer coefficients."""

    def __init__(self, p: int, coeffs: dict[Place, int] | None = None):
        self.p = check_prime(p)
        self.coeffs = {}
        for v, n in (coeffs or {}).items():
            if v.p != p:
                raise FieldError("place over a different field")
            if n:
                self.coeffs[v] = self.coeffs.get(v, 0) + int(n)
        self.coeffs = {v: n for v, n in sorted(self.coeffs.items()) if n}

    @classmethod
    def point(cls, v: Place, n: int = 1) -> "Divisor":
        return cls(v.p, {v: n})

    @property
    def degree(self) -> int:
        return sum(n * v.degree for v, n in self.coeffs.items())

    @property
    def support(self) -> list[Place]:
        return list(self.coeffs)

    def __getitem__(self, v: Place) -> int:
        return self.coeffs.get(v, 0)

    def __add__(self, other: "Divisor") -> "Divisor":
        out = dict(self.coeffs)
        for v, n in other.coeffs.items():
            out[v] = out.get(v, 0) + n
        return Divisor(self.p, out)

    def __neg__(self):
        return Divisor(self.p, {v: -n for v, n in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, k: int):
        return Divisor(self.p, {v: k * n for v, n in self.coeffs.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, Divisor) and self.p == other.p and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.p, tuple(self.coeffs.items())))

    def is_zero(self) -> bool:
        return not self.coeffs

    def __repr__(self):
        if not self.coeffs:
            return "Divisor(0)"
        return "Divisor(" + " + ".join(f"{n}*{v}" for v, n in self.coeffs.items()) + ")"

    def to_json(self) -> list:
        return [[v.to_json(), n] for v, n in self.coeffs.items()]


def random_divisor(rng: random.Random, p: int, max_place_degree: int = 2, terms: int = 4) -> Divisor:
    """Up to ``terms`` random places of small degree with coefficients in ``[-3, 3]``."""
    places = [Place.infinity(p)] + [Place.finite(pi) for d in range(1, max_place_degree + 1) for pi in irreducibles(p, d)]
    return Divisor(p, {rng.choice(places): rng.randint(-3, 3) for _ in range(rng.randint(0, terms))})


def divisor_from_json(p: int, d) -> Divisor:
    return Divisor(p, {place_from_json(p, v): n for v, n in d})


def divisor(f: RationalFunction) -> Divisor:
    """Zeros minus poles of ``f``, including the place at infinity."""
    if f.is_zero():
        raise FieldError("the divisor of zero is undefined")
    coeffs = {}
    for poly, sign in ((f.num, 1), (f.den, -1)):
        for pi, m in factor(poly)[1]:
            v = Place.finite(pi)
            coeffs[v] = coeffs.get(v, 0) + sign * m
    coeffs[Place.infinity(f.p)] = f.den.degree - f.num.degree
    return Divisor(f.p, coeffs)


@dataclass
class ReciprocityReport:
    f: RationalFunction
    g: RationalFunction
    local: list[tuple[Place, FieldElement, int]]  # (place, symbol, norm)
    product: int

    @property
    def holds(self) -> bool:
        return self.product == 1

    def to_json(self) -> dict:
        return {
            "f": self.f.to_json(),
            "g": self.g.to_json(),
            "places": [{"place": v.to_json(), "symbol": s.to_json(), "norm": n} for v, s, n in self.local],
            "product": self.product,
            "holds": self.holds,
        }


def weil_reciprocity(f: RationalFunction, g: RationalFunction) -> ReciprocityReport:
    """Product over the relevant places of the norms of the tame symbols."""
    if f.p != g.p:
        raise FieldError("rational functions over different fields")
    places = sorted(set(divisor(f).support) | set(divisor(g).support) | {Place.infinity(f.p)})
    local, prod = [], 1
    for v in places:
        s = tame_symbol(v, f, g)
        n = s.norm()
        local.append((v, s, n))
        prod = prod * n % f.p
    return ReciprocityReport(f, g, local, prod)
