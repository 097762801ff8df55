"""Finite fields ``F_p[t]/(pi)`` used as residue fields of places."""

from __future__ import annotations

from .poly import FieldError, Poly, check_prime, ext_gcd, is_irreducible


class FiniteField:
    """``F_p`` when ``modulus`` is omitted or linear, else ``F_p[t]/(modulus)``."""

    def __init__(self, p: int, modulus: Poly | None = None):
        self.p = check_prime(p)
        if modulus is None:
            modulus = Poly.x(p)
        if modulus.p != p:
            raise FieldError("modulus is over a different prime field")
        if not modulus.is_monic():
            raise FieldError("modulus must be monic")
        if not is_irreducible(modulus):
            raise FieldError(f"modulus {modulus} is not irreducible over F_{p}")
        self.modulus = modulus

    @property
    def degree(self) -> int:
        return self.modulus.degree

    @property
    def order(self) -> int:
        return self.p ** self.degree

    def __eq__(self, other):
        return isinstance(other, FiniteField) and self.p == other.p and self.modulus == other.modulus

    def __hash__(self):
        return hash((self.p, self.modulus))

    def __repr__(self):
        if self.degree == 1:
            return f"FiniteField({self.p})"
        return f"FiniteField({self.p}, {self.modulus})"

    def __call__(self, value) -> "FieldElement":
        if isinstance(value, int):
            value = Poly(self.p, [value])
        return FieldElement(self, value % self.modulus)

    def zero(self) -> "FieldElement":
        return self(0)

    def one(self) -> "FieldElement":
        return self(1)


class FieldElement:
    __slots__ = ("field", "value")

    def __init__(self, field: FiniteField, value: Poly):
        self.field, self.value = field, value

    def _coerce(self, other) -> "FieldElement":
        if isinstance(other, int):
            return self.field(other)
        if not isinstance(other, FieldElement) or other.field != self.field:
            raise FieldError("elements of different fields")
        return other

    def __add__(self, other):
        return FieldElement(self.field, self.value + self._coerce(other).value)

    def __sub__(self, other):
        return FieldElement(self.field, self.value - self._coerce(other).value)

    def __neg__(self):
        return FieldElement(self.field, -self.value)

    def __mul__(self, other):
        return FieldElement(self.field, self.value * self._coerce(other).value % self.field.modulus)

    __rmul__ = __mul__

    def inverse(self) -> "FieldElement":
        if self.is_zero():
            raise ZeroDivisionError("zero has no inverse")
        g, u, _ = ext_gcd(self.value, self.field.modulus)
        return FieldElement(self.field, u % self.field.modulus)

    def __truediv__(self, other):
        return self * self._coerce(other).inverse()

    def __pow__(self, n: int):
        base = self if n >= 0 else self.inverse()
        n = abs(n)
        out = self.field.one()
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def is_zero(self) -> bool:
        return self.value.is_zero()

    def is_one(self) -> bool:
        return self.value.is_one()

    def norm(self) -> int:
        """Norm to ``F_p``: ``x^(1 + p + ... + p^(d-1))``."""
        d = self.field.degree
        e = (self.field.p ** d - 1) // (self.field.p - 1)
        v = (self ** e).value
        if v.degree > 0:
            raise FieldError("norm did not land in the prime field")
        return v.lead

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.field(other)
        return isinstance(other, FieldElement) and self.field == other.field and self.value == other.value

    def __hash__(self):
        return hash((self.field, self.value))

    def __repr__(self):
        return f"FieldElement({self.value})"

    def __str__(self):
        return str(self.value)

    def to_json(self):
        return list(self.value.coeffs)
