"""The Heisenberg central extension ``0 -> A(x)B -> H(A,B) -> A x B -> 0``.

Elements are triples ``(a, b, t)`` written additively; the product is

    (a, b, t) * (a', b', t') = (a + a', b + b', t + t' + a (x) b')

The set-theoretic section is fixed to ``s(a, b) = (a, b, 0)``, so the
extension cocycle is exactly ``(a, b), (a', b') |-> a (x) b'``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator

from .groups import FgAbGroup, GroupElement, GroupHom, ParentMismatch, TensorProduct, tensor, tensor_hom


@dataclass(frozen=True)
class HeisenbergElement:
    group: "HeisenbergGroup"
    a: GroupElement
    b: GroupElement
    t: GroupElement

    def __mul__(self, other: "HeisenbergElement") -> "HeisenbergElement":
        return self.group.mul(self, other)

    def inverse(self) -> "HeisenbergElement":
        return self.group.inv(self)

    def as_coords(self) -> dict[str, list[int]]:
        return {"a": list(self.a.coords), "b": list(self.b.coords), "t": list(self.t.coords)}


@dataclass(frozen=True)
class HeisenbergGroup:
    a_group: FgAbGroup
    b_group: FgAbGroup

    @property
    def tensor(self) -> TensorProduct:
        return tensor(self.a_group, self.b_group)

    @property
    def tensor_group(self) -> FgAbGroup:
        return self.tensor.group

    def element(self, a, b, t=None) -> HeisenbergElement:
        a = a if isinstance(a, GroupElement) else self.a_group.element(a)
        b = b if isinstance(b, GroupElement) else self.b_group.element(b)
        if t is None:
            t = self.tensor_group.zero()
        elif not isinstance(t, GroupElement):
            t = self.tensor_group.element(t)
        self.a_group._check(a)
        self.b_group._check(b)
        self.tensor_group._check(t)
        return HeisenbergElement(self, a, b, t)

    def identity(self) -> HeisenbergElement:
        return HeisenbergElement(self, self.a_group.zero(), self.b_group.zero(), self.tensor_group.zero())

    def section(self, a: GroupElement, b: GroupElement) -> HeisenbergElement:
        return self.element(a, b)

    def center(self, t: GroupElement) -> HeisenbergElement:
        return self.element(self.a_group.zero(), self.b_group.zero(), t)

    def _check(self, h: HeisenbergElement):
        if h.group != self:
            raise ParentMismatch("Heisenberg elements from different groups")

    def mul(self, h: HeisenbergElement, h2: HeisenbergElement) -> HeisenbergElement:
        self._check(h)
        self._check(h2)
        return HeisenbergElement(self, h.a + h2.a, h.b + h2.b, h.t + h2.t + self.tensor.pair(h.a, h2.b))

    def inv(self, h: HeisenbergElement) -> HeisenbergElement:
        self._check(h)
        return HeisenbergElement(self, -h.a, -h.b, -h.t + self.tensor.pair(h.a, h.b))

    def commutator(self, h: HeisenbergElement, h2: HeisenbergElement) -> HeisenbergElement:
        return self.mul(self.mul(h, h2), self.mul(self.inv(h), self.inv(h2)))

    def cocycle(self, a, b, a2, b2) -> GroupElement:
        """Extension 2-cocycle relative to the section ``(a, b) -> (a, b, 0)``."""
        for x, g in ((a, self.a_group), (b, self.b_group), (a2, self.a_group), (b2, self.b_group)):
            g._check(x)
        return self.tensor.pair(a, b2)

    def alternation(self, a, b, a2, b2) -> GroupElement:
        return self.cocycle(a, b, a2, b2) - self.cocycle(a2, b2, a, b)

    def project(self, h: HeisenbergElement) -> tuple[GroupElement, GroupElement]:
        self._check(h)
        return h.a, h.b

    def elements(self) -> Iterator[HeisenbergElement]:
        for a in self.a_group.elements():
            for b in self.b_group.elements():
                for t in self.tensor_group.elements():
                    yield HeisenbergElement(self, a, b, t)

    def order(self) -> int | None:
        orders = [g.order() for g in (self.a_group, self.b_group, self.tensor_group)]
        return None if None in orders else orders[0] * orders[1] * orders[2]

    def index_of(self, h: HeisenbergElement) -> int:
        nb, nt = self.b_group.order(), self.tensor_group.order()
        return (self.a_group.index_of(h.a) * nb + self.b_group.index_of(h.b)) * nt + self.tensor_group.index_of(h.t)


def heisenberg_map(f: GroupHom, g: GroupHom, h: HeisenbergElement) -> HeisenbergElement:
    """Image of ``h`` under ``H(f, g) : H(A, B) -> H(A', B')``."""
    if f.source != h.group.a_group or g.source != h.group.b_group:
        raise ValueError("homs do not start at the groups of the Heisenberg element")
    target = HeisenbergGroup(f.target, g.target)
    return HeisenbergElement(target, f(h.a), g(h.b), tensor_hom(f, g)(h.t))


@dataclass(frozen=True)
class UAElement:
    group: "PoonenRainsGroup"
    a: GroupElement
    t: GroupElement

    def __mul__(self, other: "UAElement") -> "UAElement":
        return self.group.mul(self, other)


@dataclass(frozen=True)
class PoonenRainsGroup:
    """``U(A)``: the pullback of ``H(A, A)`` along the diagonal ``A -> A x A``.

    Law: ``(a, t)(a', t') = (a + a', t + t' + a (x) a')``.
    """

    a_group: FgAbGroup

    @property
    def heisenberg(self) -> HeisenbergGroup:
        return HeisenbergGroup(self.a_group, self.a_group)

    @property
    def tensor_group(self) -> FgAbGroup:
        return self.heisenberg.tensor_group

    def element(self, a, t=None) -> UAElement:
        a = a if isinstance(a, GroupElement) else self.a_group.element(a)
        if t is None:
            t = self.tensor_group.zero()
        elif not isinstance(t, GroupElement):
            t = self.tensor_group.element(t)
        return UAElement(self, a, t)

    def identity(self) -> UAElement:
        return self.element(self.a_group.zero())

    def mul(self, x: UAElement, y: UAElement) -> UAElement:
        if x.group != self or y.group != self:
            raise ParentMismatch("U(A) elements from different groups")
        return UAElement(self, x.a + y.a, x.t + y.t + self.heisenberg.tensor.pair(x.a, y.a))

    def inv(self, x: UAElement) -> UAElement:
        return UAElement(self, -x.a, -x.t + self.heisenberg.tensor.pair(x.a, x.a))

    def cocycle(self, a: GroupElement, a2: GroupElement) -> GroupElement:
        return self.heisenberg.tensor.pair(a, a2)

    def to_heisenberg(self, x: UAElement) -> HeisenbergElement:
        """The diagonal embedding ``U(A) -> H(A, A)``, ``(a, t) -> (a, a, t)``."""
        return HeisenbergElement(self.heisenberg, x.a, x.a, x.t)


def poonen_rains(a_group: FgAbGroup) -> PoonenRainsGroup:
    return PoonenRainsGroup(a_group)
