"""Finitely generated abelian groups in invariant-factor normal form.

A group ``Z/d1 + ... + Z/dk + Z^r`` has coordinate vectors of length
``k + r``; torsion coordinates are kept reduced to ``[0, di)``.
Group equality is equality of the normal form.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd, prod
from typing import Iterator, Sequence

from .linalg import IntMatrix, _SNF, kernel_lattice, lattice_basis


class ParentMismatch(ValueError):
    """Raised when elements of different groups are combined."""


@dataclass(frozen=True)
class FgAbGroup:
    invariant_factors: tuple[int, ...] = ()
    free_rank: int = 0
    moduli: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "invariant_factors", tuple(int(d) for d in self.invariant_factors))
        object.__setattr__(self, "moduli", self.invariant_factors + (0,) * self.free_rank)
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        for d in self.invariant_factors:
            if d < 2:
                raise ValueError(f"invariant factor {d} is not >= 2")
        for a, b in zip(self.invariant_factors, self.invariant_factors[1:]):
            if b % a:
                raise ValueError(f"invariant factors {a}, {b} do not form a divisibility chain")

    @classmethod
    def from_orders(cls, orders: Sequence[int]) -> "FgAbGroup":
        """Normal form of a direct sum of cyclic groups ``Z/n`` (``n = 0`` for ``Z``)."""
        return cokernel(IntMatrix.diagonal(list(orders)))

    @property
    def dim(self) -> int:
        return len(self.invariant_factors) + self.free_rank

    @property
    def is_finite(self) -> bool:
        return self.free_rank == 0

    @property
    def is_trivial(self) -> bool:
        return self.dim == 0

    def order(self) -> int | None:
        return prod(self.invariant_factors) if self.is_finite else None

    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors and self.is_finite else (1 if self.is_trivial else 0)

    def element(self, coords: Sequence[int]) -> "GroupElement":
        if len(coords) != self.dim:
            raise ValueError(f"{self} needs {self.dim} coordinates, got {len(coords)}")
        return GroupElement(self, _reduce([int(c) for c in coords], self.moduli))

    def zero(self) -> "GroupElement":
        return GroupElement(self, (0,) * self.dim)

    def gens(self) -> list["GroupElement"]:
        return [self.element([int(i == j) for j in range(self.dim)]) for i in range(self.dim)]

    def elements(self) -> Iterator["GroupElement"]:
        if not self.is_finite:
            raise ValueError(f"cannot enumerate the infinite group {self}")
        for coords in itertools.product(*(range(d) for d in self.invariant_factors)):
            yield GroupElement(self, coords)

    def index_of(self, x: "GroupElement") -> int:
        """Position of ``x`` in the order produced by :meth:`elements`."""
        self._check(x)
        idx = 0
        for c, d in zip(x.coords, self.invariant_factors):
            idx = idx * d + c
        return idx

    def random_element(self, rng: random.Random, bound: int = 5) -> "GroupElement":
        return self.element(
            [rng.randrange(d) for d in self.invariant_factors]
            + [rng.randint(-bound, bound) for _ in range(self.free_rank)]
        )

    def _check(self, x: "GroupElement"):
        if x.parent is not self and x.parent != self:
            raise ParentMismatch(f"element of {x.parent} used as element of {self}")

    def __str__(self):
        parts = [f"Z/{d}" for d in self.invariant_factors]
        if self.free_rank == 1:
            parts.append("Z")
        elif self.free_rank:
            parts.append(f"Z^{self.free_rank}")
        return " + ".join(parts) if parts else "0"


def cyclic(n: int) -> FgAbGroup:
    """``Z/n``; ``cyclic(0)`` is ``Z`` and ``cyclic(1)`` the trivial group."""
    return FgAbGroup.from_orders([n])


Z = FgAbGroup(free_rank=1)
TRIVIAL = FgAbGroup()


def _reduce(coords: Sequence[int], moduli: Sequence[int]) -> tuple[int, ...]:
    return tuple(c % m if m else c for c, m in zip(coords, moduli))


@dataclass(frozen=True)
class GroupElement:
    parent: FgAbGroup
    coords: tuple[int, ...]

    def _same(self, other: "GroupElement"):
        if other.__class__ is GroupElement and other.parent is self.parent:
            return
        if not isinstance(other, GroupElement) or other.parent != self.parent:
            raise ParentMismatch(f"cannot combine elements of {self.parent} and {getattr(other, 'parent', other)}")

    def __add__(self, other: "GroupElement") -> "GroupElement":
        self._same(other)
        return GroupElement(self.parent, _reduce([a + b for a, b in zip(self.coords, other.coords)], self.parent.moduli))

    def __sub__(self, other: "GroupElement") -> "GroupElement":
        self._same(other)
        return GroupElement(self.parent, _reduce([a - b for a, b in zip(self.coords, other.coords)], self.parent.moduli))

    def __neg__(self) -> "GroupElement":
        return GroupElement(self.parent, _reduce([-a for a in self.coords], self.parent.moduli))

    def __mul__(self, n: int) -> "GroupElement":
        if not isinstance(n, int):
            return NotImplemented
        return GroupElement(self.parent, _reduce([n * a for a in self.coords], self.parent.moduli))

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not any(self.coords)

    def order(self) -> int:
        """Additive order; 0 for elements of infinite order."""
        if any(c for c, m in zip(self.coords, self.parent.moduli) if m == 0):
            return 0
        n = 1
        for c, m in zip(self.coords, self.parent.moduli):
            if m:
                k = m // gcd(c, m)
                n = n * k // gcd(n, k)
        return n

    def __repr__(self):
        return f"{list(self.coords)} in {self.parent}"


@dataclass(frozen=True)
class GroupHom:
    """Homomorphism given by a matrix acting on coordinate column vectors."""

    source: FgAbGroup
    target: FgAbGroup
    matrix: IntMatrix

    def __post_init__(self):
        m = self.matrix
        if (m.rows, m.cols) != (self.target.dim, self.source.dim):
            raise ValueError(
                f"matrix is {m.rows}x{m.cols}, need {self.target.dim}x{self.source.dim} for {self.source} -> {self.target}"
            )
        tm = self.target.moduli
        reduced = IntMatrix(m.rows, m.cols, tuple(
            (x % tm[k // m.cols]) if tm[k // m.cols] else x for k, x in enumerate(m.entries)
        ))
        object.__setattr__(self, "matrix", reduced)
        for j, d in enumerate(self.source.invariant_factors):
            if any(_reduce([d * x for x in reduced.column(j)], tm)):
                raise ValueError(f"generator {j} of order {d} is not sent to an element killed by {d}")

    @classmethod
    def from_images(cls, source: FgAbGroup, target: FgAbGroup, images: Sequence[GroupElement]) -> "GroupHom":
        for y in images:
            target._check(y)
        return cls(source, target, IntMatrix.from_columns([y.coords for y in images], target.dim))

    @classmethod
    def identity(cls, g: FgAbGroup) -> "GroupHom":
        return cls(g, g, IntMatrix.identity(g.dim))

    @classmethod
    def zero(cls, source: FgAbGroup, target: FgAbGroup) -> "GroupHom":
        return cls(source, target, IntMatrix.zeros(target.dim, source.dim))

    def __call__(self, x: GroupElement) -> GroupElement:
        self.source._check(x)
        return GroupElement(self.target, _reduce(self.matrix.apply(x.coords), self.target.moduli))

    def __matmul__(self, other: "GroupHom") -> "GroupHom":
        """``(self @ other)(x) == self(other(x))``."""
        return hom_compose(other, self)

    def __add__(self, other: "GroupHom") -> "GroupHom":
        if (self.source, self.target) != (other.source, other.target):
            raise ValueError("cannot add homs with different source/target")
        return GroupHom(self.source, self.target, self.matrix + other.matrix)

    def __neg__(self) -> "GroupHom":
        return GroupHom(self.source, self.target, -self.matrix)

    def is_zero(self) -> bool:
        return not any(self.matrix.entries)

    def kernel(self) -> FgAbGroup:
        return hom_kernel(self)

    def image(self) -> FgAbGroup:
        return hom_image(self)


def random_hom(rng: random.Random, a: FgAbGroup, b: FgAbGroup, bound: int = 3) -> GroupHom:
    """A random hom: each generator goes to a random element its order allows."""
    images = []
    for d in a.moduli:
        while True:
            y = b.random_element(rng, bound=bound)
            if d == 0 or (d * y).is_zero():
                break
        images.append(y)
    return GroupHom.from_images(a, b, images)


def hom_compose(f: GroupHom, g: GroupHom) -> GroupHom:
    """``g`` after ``f``."""
    if f.target != g.source:
        raise ValueError(f"cannot compose {f.source} -> {f.target} with {g.source} -> {g.target}")
    return GroupHom(f.source, g.target, g.matrix @ f.matrix)


class Subquotient:
    """The group ``L / R`` for lattices ``R <= L <= Z^n``.

    ``L`` is given by a basis, ``R`` by generators (which must lie in ``L``).
    ``project`` sends a vector of ``L`` to its class, ``lift`` picks a
    representative vector for a class.
    """

    def __init__(self, ambient_dim: int, basis: Sequence[Sequence[int]], relations: Sequence[Sequence[int]]):
        self.ambient_dim = ambient_dim
        self.basis = [list(b) for b in basis]
        r = len(self.basis)
        if r:
            self._bsnf = _SNF([[b[i] for b in self.basis] for i in range(ambient_dim)], ambient_dim, r).run()
        rel_coords = []
        for x in relations:
            c = self.coordinates(x)
            if c is None:
                raise ValueError("relation does not lie in the lattice")
            if any(c):
                rel_coords.append(c)
        if rel_coords and r:
            s = _SNF([[c[i] for c in rel_coords] for i in range(r)], r, len(rel_coords)).run()
            diag = [s.d[i][i] if i < len(rel_coords) else 0 for i in range(r)]
            self._u, self._uinv = s.u, s.uinv
        else:
            diag = [0] * r
            self._u = self._uinv = [[int(i == j) for j in range(r)] for i in range(r)]
        self._positions = [i for i in range(r) if diag[i] != 1]
        self._moduli = [diag[i] for i in self._positions]
        torsion = [d for d in self._moduli if d]
        self.group = FgAbGroup(tuple(torsion), len(self._moduli) - len(torsion))

    def coordinates(self, x: Sequence[int]) -> list[int] | None:
        """Coordinates of ``x`` in the lattice basis, ``None`` if ``x`` is not in ``L``."""
        if len(x) != self.ambient_dim:
            raise ValueError("vector length does not match the ambient lattice")
        r = len(self.basis)
        if not r:
            return [] if not any(x) else None
        s = self._bsnf
        ux = [sum(a * b for a, b in zip(row, x) if b) for row in s.u]
        w = []
        for i in range(self.ambient_dim):
            di = s.d[i][i] if i < r else 0
            if di:
                if ux[i] % di:
                    return None
                w.append(ux[i] // di)
            elif ux[i]:
                return None
        return [sum(a * b for a, b in zip(row, w)) for row in s.v]

    def contains(self, x: Sequence[int]) -> bool:
        return self.coordinates(x) is not None

    def project(self, x: Sequence[int]) -> GroupElement:
        c = self.coordinates(x)
        if c is None:
            raise ValueError("vector is not in the lattice")
        y = [sum(a * b for a, b in zip(row, c)) for row in self._u]
        return self.group.element([y[i] for i in self._positions])

    def lift(self, g: GroupElement) -> list[int]:
        self.group._check(g)
        y = [0] * len(self.basis)
        for i, c in zip(self._positions, g.coords):
            y[i] = c
        c = [sum(a * b for a, b in zip(row, y)) for row in self._uinv]
        return [sum(b[i] * ci for b, ci in zip(self.basis, c)) for i in range(self.ambient_dim)]


def _unit_vectors(n: int) -> list[list[int]]:
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _torsion_relations(moduli: Sequence[int]) -> list[list[int]]:
    n = len(moduli)
    return [[q * int(i == j) for j in range(n)] for i, q in enumerate(moduli) if q]


def homology_lattice(
    moduli: Sequence[int],
    outgoing: IntMatrix | None = None,
    outgoing_moduli: Sequence[int] | None = None,
    incoming: IntMatrix | None = None,
) -> Subquotient:
    """``ker(outgoing) / (im(incoming) + torsion)`` on ``Z^n / diag(moduli)``."""
    n = len(moduli)
    if outgoing is None or outgoing.rows == 0:
        basis = _unit_vectors(n)
    else:
        basis = kernel_lattice(outgoing, outgoing_moduli)
    rels = _torsion_relations(moduli)
    if incoming is not None:
        rels += [incoming.column(j) for j in range(incoming.cols)]
    return Subquotient(n, basis, rels)


def cokernel(m: IntMatrix) -> FgAbGroup:
    """``Z^cols`` modulo the row space of ``m``, in normal form."""
    return Subquotient(m.cols, _unit_vectors(m.cols), m.tolist()).group


def kernel_inclusion(h: GroupHom) -> GroupHom:
    """The inclusion ``ker h -> source``."""
    sq = homology_lattice(h.source.moduli, h.matrix, h.target.moduli)
    return GroupHom.from_images(sq.group, h.source, [h.source.element(sq.lift(g)) for g in sq.group.gens()])


def hom_kernel(h: GroupHom) -> FgAbGroup:
    return kernel_inclusion(h).source


def image_factorization(h: GroupHom) -> tuple[FgAbGroup, GroupHom, GroupHom]:
    """Split ``h`` as ``source ->> C >-> target`` with ``C`` the image."""
    n = h.target.dim
    gens = [h.matrix.column(j) for j in range(h.matrix.cols)] + _torsion_relations(h.target.moduli)
    sq = Subquotient(n, lattice_basis(gens, n), _torsion_relations(h.target.moduli))
    c = sq.group
    epi = GroupHom.from_images(h.source, c, [sq.project(h.matrix.column(j)) for j in range(h.source.dim)])
    mono = GroupHom.from_images(c, h.target, [h.target.element(sq.lift(g)) for g in c.gens()])
    return c, epi, mono


def hom_image(h: GroupHom) -> FgAbGroup:
    return image_factorization(h)[0]


def hom_cokernel(h: GroupHom) -> tuple[FgAbGroup, GroupHom]:
    """Cokernel group together with the quotient map from the target."""
    n = h.target.dim
    rels = [h.matrix.column(j) for j in range(h.matrix.cols)] + _torsion_relations(h.target.moduli)
    sq = Subquotient(n, _unit_vectors(n), rels)
    return sq.group, GroupHom.from_images(h.target, sq.group, [sq.project(e) for e in _unit_vectors(n)])


def is_injective(h: GroupHom) -> bool:
    return hom_kernel(h).is_trivial


def is_surjective(h: GroupHom) -> bool:
    return hom_cokernel(h)[0].is_trivial


def preimage(h: GroupHom, y: GroupElement) -> GroupElement | None:
    """Some ``x`` with ``h(x) == y``, or ``None``."""
    from .linalg import solve

    h.target._check(y)
    x = solve(h.matrix, list(y.coords), h.target.moduli)
    return None if x is None else h.source.element(x)


@dataclass(frozen=True)
class DirectSum:
    group: FgAbGroup
    summands: tuple[FgAbGroup, ...]
    injections: tuple[GroupHom, ...]
    projections: tuple[GroupHom, ...]

    def combine(self, parts: Sequence[GroupElement]) -> GroupElement:
        out = self.group.zero()
        for inj, x in zip(self.injections, parts):
            out = out + inj(x)
        return out

    def split(self, x: GroupElement) -> list[GroupElement]:
        return [p(x) for p in self.projections]


@lru_cache(maxsize=None)
def direct_sum(*groups: FgAbGroup) -> DirectSum:
    moduli = [q for g in groups for q in g.moduli]
    n = len(moduli)
    sq = Subquotient(n, _unit_vectors(n), _torsion_relations(moduli))
    g = sq.group
    injections, projections, offset = [], [], 0
    for s in groups:
        injections.append(GroupHom.from_images(s, g, [sq.project(
            [int(i == offset + k) for i in range(n)]) for k in range(s.dim)]))
        lifts = [sq.lift(x) for x in g.gens()]
        projections.append(GroupHom.from_images(g, s, [s.element(v[offset:offset + s.dim]) for v in lifts]))
        offset += s.dim
    return DirectSum(g, tuple(groups), tuple(injections), tuple(projections))


@dataclass(frozen=True)
class TensorProduct:
    """``A (x) B`` with its bilinear map.

    ``projection`` takes Kronecker coordinates (index ``i * dim B + j`` for
    the generator pair ``(i, j)``) to coordinates of ``group``; ``section``
    goes back.
    """

    left: FgAbGroup
    right: FgAbGroup
    group: FgAbGroup
    projection: IntMatrix
    section: IntMatrix = field(repr=False)

    def pair(self, x: GroupElement, y: GroupElement) -> GroupElement:
        self.left._check(x)
        self.right._check(y)
        kron = [a * b for a in x.coords for b in y.coords]
        return self.group.element(self.projection.apply(kron))

    def __call__(self, x: GroupElement, y: GroupElement) -> GroupElement:
        return self.pair(x, y)


@lru_cache(maxsize=None)
def tensor(a: FgAbGroup, b: FgAbGroup) -> TensorProduct:
    """Tensor product via the Kronecker presentation.

    Generator pair ``(i, j)`` is killed by ``gcd(m_i, n_j)`` where ``m``,
    ``n`` are the coordinate moduli (0 for free coordinates).
    """
    n = a.dim * b.dim
    rels = []
    for i, p in enumerate(a.moduli):
        for j, q in enumerate(b.moduli):
            g = gcd(p, q)
            if g:
                rels.append([g * int(k == i * b.dim + j) for k in range(n)])
    sq = Subquotient(n, _unit_vectors(n), rels)
    proj = IntMatrix.from_columns([sq.project(e).coords for e in _unit_vectors(n)], sq.group.dim)
    sect = IntMatrix.from_columns([sq.lift(g) for g in sq.group.gens()], n)
    return TensorProduct(a, b, sq.group, proj, sect)


def tensor_elements(x: GroupElement, y: GroupElement) -> GroupElement:
    return tensor(x.parent, y.parent).pair(x, y)


@lru_cache(maxsize=None)
def tensor_hom(f: GroupHom, g: GroupHom) -> GroupHom:
    """``f (x) g : A (x) B -> A' (x) B'``."""
    src = tensor(f.source, g.source)
    tgt = tensor(f.target, g.target)
    fm, gm = f.matrix, g.matrix
    kron = IntMatrix.from_rows(
        [[fm[i1, j1] * gm[i2, j2] for j1 in range(fm.cols) for j2 in range(gm.cols)]
         for i1 in range(fm.rows) for i2 in range(gm.rows)],
        fm.cols * gm.cols,
    )
    return GroupHom(src.group, tgt.group, tgt.projection @ kron @ src.section)
