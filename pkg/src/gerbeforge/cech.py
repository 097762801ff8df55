"""Čech cochains on finite cover nerves.

A nerve records which intersections ``U_{i0} ∩ ... ∩ U_{ip}`` are nonempty
(faces up to four indices). A coefficient system puts an abelian group on
every face and a restriction homomorphism on every inclusion ``S ⊂ T``;
larger faces are smaller opens, so restriction goes from ``S`` to ``T``.

Cochains live on ordered faces ``i0 < ... < ip`` only. The differential is

    (δc)_{i0..i(p+1)} = Σ_k (-1)^k  c_{i0..^ik..i(p+1)} restricted

What gets computed is the Čech cohomology of this particular cover. It
agrees with sheaf cohomology only when the cover is acyclic; no
refinement is attempted.
"""

from __future__ import annotations

import itertools
import random
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from .groups import (
    FgAbGroup,
    GroupElement,
    GroupHom,
    IntMatrix,
    Subquotient,
    Z,
    cyclic,
    homology_lattice,
    solve,
    tensor,
    tensor_hom,
)

Face = tuple[int, ...]
MAX_FACE_SIZE = 4


class CechError(ValueError):
    pass


class CoverNerve:
    """Nonempty faces of a finite cover, downward closed, at most 4 indices."""

    def __init__(self, index_count: int, faces: Iterable[Sequence[int]] = ()):
        if index_count < 1:
            raise CechError("a nerve needs at least one index")
        closed = {(i,) for i in range(index_count)}
        for f in faces:
            f = tuple(sorted(set(f)))
            if not f:
                continue
            if len(f) > MAX_FACE_SIZE:
                raise CechError(f"face {f} has more than {MAX_FACE_SIZE} indices")
            if f[0] < 0 or f[-1] >= index_count:
                raise CechError(f"face {f} uses an index outside 0..{index_count - 1}")
            for k in range(1, len(f) + 1):
                closed.update(itertools.combinations(f, k))
        self.index_count = index_count
        self.faces = frozenset(closed)
        self._by_degree = {
            p: sorted(f for f in self.faces if len(f) == p + 1) for p in range(MAX_FACE_SIZE)
        }

    @classmethod
    def full_simplex(cls, n: int) -> "CoverNerve":
        return cls(n, itertools.combinations(range(n), min(n, MAX_FACE_SIZE)))

    @classmethod
    def circle(cls, n: int = 3) -> "CoverNerve":
        """``n`` opens arranged in a cycle: pairwise consecutive overlaps, no triple ones."""
        if n < 3:
            raise CechError("a circle nerve needs at least 3 opens")
        return cls(n, [(i, (i + 1) % n) for i in range(n)])

    @classmethod
    def sphere(cls) -> "CoverNerve":
        """Boundary of a tetrahedron: all triples of 4 opens meet, the quadruple does not."""
        return cls(4, itertools.combinations(range(4), 3))

    @classmethod
    def projective_plane(cls) -> "CoverNerve":
        """The 6-vertex triangulation of RP^2."""
        tris = [(0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 5), (0, 1, 5),
                (1, 2, 4), (2, 3, 5), (1, 3, 4), (2, 4, 5), (1, 3, 5)]
        return cls(6, tris)

    @classmethod
    def torus(cls) -> "CoverNerve":
        """The 7-vertex triangulation of the torus."""
        tris = [(i, (i + 1) % 7, (i + 3) % 7) for i in range(7)] + [(i, (i + 2) % 7, (i + 3) % 7) for i in range(7)]
        return cls(7, tris)

    @classmethod
    def two_charts(cls) -> "CoverNerve":
        return cls(2, [(0, 1)])

    def faces_of_degree(self, p: int) -> list[Face]:
        return self._by_degree.get(p, [])

    def maximal_faces(self) -> list[Face]:
        return sorted(f for f in self.faces if not any(set(f) < set(g) for g in self.faces))

    def __contains__(self, face) -> bool:
        return tuple(face) in self.faces

    def __eq__(self, other):
        return isinstance(other, CoverNerve) and (self.index_count, self.faces) == (other.index_count, other.faces)

    def __hash__(self):
        return hash((self.index_count, self.faces))

    def __repr__(self):
        return f"CoverNerve({self.index_count}, {self.maximal_faces()})"


def _codim1(nerve: CoverNerve):
    for t in sorted(nerve.faces):
        if len(t) > 1:
            for k in range(len(t)):
                yield t[:k] + t[k + 1:], t


class CoefficientSystem:
    """Abelian groups on faces with restriction maps along face inclusions.

    ``maps`` gives the restriction for every codimension-one inclusion
    ``(S, T)``; longer inclusions are composites. Functoriality (all paths
    agree) is checked on construction.
    """

    def __init__(self, nerve: CoverNerve, groups: Mapping[Face, FgAbGroup], maps: Mapping[tuple[Face, Face], GroupHom]):
        self.nerve = nerve
        self.groups = {tuple(f): groups[tuple(f)] for f in sorted(nerve.faces)}
        self.maps = {}
        for s, t in _codim1(nerve):
            try:
                h = maps[(s, t)]
            except KeyError:
                raise CechError(f"missing restriction map {s} -> {t}") from None
            if h.source != self.groups[s] or h.target != self.groups[t]:
                raise CechError(f"restriction {s} -> {t} has the wrong source or target")
            self.maps[(s, t)] = h
        self._restrictions: dict[tuple[Face, Face], GroupHom] = {}
        self._cache: dict = {}
        self._check_functorial()
        self._key = (nerve, tuple(self.groups.items()), tuple(self.maps.items()))

    @classmethod
    def constant(cls, nerve: CoverNerve, group: FgAbGroup) -> "CoefficientSystem":
        ident = GroupHom.identity(group)
        return cls(nerve, {f: group for f in nerve.faces}, {st: ident for st in _codim1(nerve)})

    def _check_functorial(self):
        for v in self.nerve.faces:
            for s in itertools.combinations(v, len(v) - 2) if len(v) >= 3 else ():
                paths = []
                for x in set(v) - set(s):
                    mid = tuple(sorted(set(v) - {x}))
                    paths.append(self.maps[(mid, v)] @ self.maps[(s, mid)])
                if any(p != paths[0] for p in paths):
                    raise CechError(f"restrictions {s} -> {v} depend on the path")

    def group_at(self, face: Sequence[int]) -> FgAbGroup:
        return self.groups[tuple(face)]

    def restrict(self, s: Sequence[int], t: Sequence[int]) -> GroupHom:
        s, t = tuple(s), tuple(t)
        if not set(s) <= set(t) or t not in self.nerve:
            raise CechError(f"{s} is not a face of {t}")
        if s == t:
            return GroupHom.identity(self.groups[s])
        key = (s, t)
        if key not in self._restrictions:
            if len(t) == len(s) + 1:
                self._restrictions[key] = self.maps[key]
            else:
                x = min(set(t) - set(s))
                mid = tuple(sorted(set(t) - {x}))
                self._restrictions[key] = self.maps[(mid, t)] @ self.restrict(s, mid)
        return self._restrictions[key]

    def restrict_element(self, s, t, x: GroupElement) -> GroupElement:
        return self.restrict(s, t)(x)

    def __eq__(self, other):
        return isinstance(other, CoefficientSystem) and self._key == other._key

    def __hash__(self):
        return hash(self._key)

    def __repr__(self):
        kinds = sorted({str(g) for g in self.groups.values()})
        return f"CoefficientSystem({self.nerve!r}, groups={kinds})"


@lru_cache(maxsize=256)
def tensor_system(a: CoefficientSystem, b: CoefficientSystem) -> CoefficientSystem:
    """Facewise ``A (x) B`` with restrictions ``r_A (x) r_B``."""
    if a.nerve != b.nerve:
        raise CechError("systems live on different nerves")
    groups = {f: tensor(a.groups[f], b.groups[f]).group for f in a.nerve.faces}
    maps = {st: tensor_hom(a.maps[st], b.maps[st]) for st in a.maps}
    return CoefficientSystem(a.nerve, groups, maps)


class SystemMap:
    """A morphism of coefficient systems: facewise homs commuting with restriction."""

    def __init__(self, source: CoefficientSystem, target: CoefficientSystem, components: Mapping[Face, GroupHom]):
        if source.nerve != target.nerve:
            raise CechError("system map between different nerves")
        self.source, self.target = source, target
        self.components = {}
        for f in sorted(source.nerve.faces):
            h = components[f]
            if h.source != source.groups[f] or h.target != target.groups[f]:
                raise CechError(f"component at {f} has the wrong source or target")
            self.components[f] = h
        for s, t in _codim1(source.nerve):
            if self.components[t] @ source.maps[(s, t)] != target.maps[(s, t)] @ self.components[s]:
                raise CechError(f"map does not commute with restriction {s} -> {t}")

    @classmethod
    def identity(cls, system: CoefficientSystem) -> "SystemMap":
        return cls(system, system, {f: GroupHom.identity(g) for f, g in system.groups.items()})

    @classmethod
    def constant(cls, nerve: CoverNerve, h: GroupHom) -> "SystemMap":
        src = CoefficientSystem.constant(nerve, h.source)
        tgt = CoefficientSystem.constant(nerve, h.target)
        return cls(src, tgt, {f: h for f in nerve.faces})

    def __getitem__(self, face) -> GroupHom:
        return self.components[tuple(face)]

    def __matmul__(self, other: "SystemMap") -> "SystemMap":
        if other.target != self.source:
            raise CechError("system maps are not composable")
        return SystemMap(other.source, self.target, {f: self.components[f] @ other.components[f] for f in self.components})

    def push(self, c: "Cochain") -> "Cochain":
        if c.system != self.source:
            raise CechError("cochain does not live on the source system")
        return Cochain(self.target, c.degree, {f: self.components[f](x) for f, x in c.components.items()})


def tensor_map(f: SystemMap, g: SystemMap) -> SystemMap:
    return SystemMap(
        tensor_system(f.source, g.source),
        tensor_system(f.target, g.target),
        {face: tensor_hom(f.components[face], g.components[face]) for face in f.components},
    )


class Cochain:
    """A Čech p-cochain: one group element per ordered p-face."""

    def __init__(self, system: CoefficientSystem, degree: int, components: Mapping[Face, GroupElement] | None = None):
        if not 0 <= degree < MAX_FACE_SIZE:
            raise CechError(f"unsupported cochain degree {degree}")
        self.system, self.degree = system, degree
        components = dict(components or {})
        out = {}
        for f in system.nerve.faces_of_degree(degree):
            g = system.groups[f]
            x = components.pop(f, None)
            if x is None:
                out[f] = g.zero()
            elif isinstance(x, GroupElement):
                g._check(x)
                out[f] = x
            else:
                out[f] = g.element(x)
        if components:
            raise CechError(f"components on faces that are not {degree}-faces of the nerve: {sorted(components)}")
        self.components = out

    @classmethod
    def zero(cls, system: CoefficientSystem, degree: int) -> "Cochain":
        return cls(system, degree)

    @classmethod
    def from_vector(cls, system: CoefficientSystem, degree: int, vec: Sequence[int]) -> "Cochain":
        faces, offsets, _ = _layout(system, degree)
        comps = {}
        for f, off in zip(faces, offsets):
            g = system.groups[f]
            comps[f] = g.element(vec[off:off + g.dim])
        return cls(system, degree, comps)

    @classmethod
    def random(cls, system: CoefficientSystem, degree: int, rng: random.Random, bound: int = 3) -> "Cochain":
        return cls(system, degree, {
            f: system.groups[f].random_element(rng, bound) for f in system.nerve.faces_of_degree(degree)
        })

    def vector(self) -> list[int]:
        return [c for f in self.system.nerve.faces_of_degree(self.degree) for c in self.components[f].coords]

    def __getitem__(self, face) -> GroupElement:
        return self.components[tuple(face)]

    def _same(self, other: "Cochain"):
        if not isinstance(other, Cochain) or other.degree != self.degree or other.system != self.system:
            raise CechError("cochains of different systems or degrees")

    def __add__(self, other: "Cochain") -> "Cochain":
        self._same(other)
        return Cochain(self.system, self.degree, {f: x + other.components[f] for f, x in self.components.items()})

    def __sub__(self, other: "Cochain") -> "Cochain":
        self._same(other)
        return Cochain(self.system, self.degree, {f: x - other.components[f] for f, x in self.components.items()})

    def __neg__(self) -> "Cochain":
        return Cochain(self.system, self.degree, {f: -x for f, x in self.components.items()})

    def __mul__(self, n: int) -> "Cochain":
        return Cochain(self.system, self.degree, {f: n * x for f, x in self.components.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return (
            isinstance(other, Cochain)
            and other.degree == self.degree
            and other.system == self.system
            and other.components == self.components
        )

    def is_zero(self) -> bool:
        return all(x.is_zero() for x in self.components.values())

    def is_cocycle(self) -> bool:
        return self.degree + 1 >= MAX_FACE_SIZE or differential(self).is_zero()

    def __repr__(self):
        nz = {f: list(x.coords) for f, x in self.components.items() if not x.is_zero()}
        return f"Cochain(degree={self.degree}, {nz})"


def _layout(system: CoefficientSystem, p: int):
    key = ("layout", p)
    if key not in system._cache:
        faces = system.nerve.faces_of_degree(p)
        offsets, moduli, off = [], [], 0
        for f in faces:
            offsets.append(off)
            moduli.extend(system.groups[f].moduli)
            off += system.groups[f].dim
        system._cache[key] = (faces, offsets, moduli)
    return system._cache[key]


def differential_matrix(system: CoefficientSystem, p: int) -> IntMatrix:
    """Matrix of δ: C^p -> C^(p+1) on concatenated face coordinates."""
    key = ("delta", p)
    if key not in system._cache:
        src_faces, src_off, src_mod = _layout(system, p)
        tgt_faces, tgt_off, tgt_mod = _layout(system, p + 1)
        index = {f: o for f, o in zip(src_faces, src_off)}
        rows = [[0] * len(src_mod) for _ in tgt_mod]
        for t, toff in zip(tgt_faces, tgt_off):
            for k in range(len(t)):
                s = t[:k] + t[k + 1:]
                m = system.restrict(s, t).matrix
                sign = -1 if k % 2 else 1
                soff = index[s]
                for i in range(m.rows):
                    for j in range(m.cols):
                        rows[toff + i][soff + j] += sign * m[i, j]
        system._cache[key] = IntMatrix.from_rows(rows, len(src_mod))
    return system._cache[key]


def differential(c: Cochain) -> Cochain:
    if c.degree + 1 >= MAX_FACE_SIZE:
        raise CechError(f"no differential out of degree {c.degree}")
    system, p = c.system, c.degree
    out = {}
    for t in system.nerve.faces_of_degree(p + 1):
        acc = system.groups[t].zero()
        for k in range(len(t)):
            s = t[:k] + t[k + 1:]
            y = system.restrict(s, t)(c.components[s])
            acc = acc - y if k % 2 else acc + y
        out[t] = acc
    return Cochain(system, p + 1, out)


class Cohomology:
    """``H^p`` of a coefficient system together with class/representative maps."""

    def __init__(self, system: CoefficientSystem, degree: int):
        if degree not in (0, 1, 2):
            raise CechError("cohomology is available in degrees 0, 1, 2")
        self.system, self.degree = system, degree
        _, _, moduli = _layout(system, degree)
        _, _, out_mod = _layout(system, degree + 1)
        outgoing = differential_matrix(system, degree) if out_mod else None
        incoming = differential_matrix(system, degree - 1) if degree > 0 else None
        self._sq: Subquotient = homology_lattice(moduli, outgoing, out_mod, incoming)
        self.group: FgAbGroup = self._sq.group

    def class_of(self, c: Cochain) -> GroupElement:
        if c.system != self.system or c.degree != self.degree:
            raise CechError("cochain does not belong to this cohomology group")
        if not self._sq.contains(c.vector()):
            raise CechError("cochain is not a cocycle")
        return self._sq.project(c.vector())

    def representative(self, x: GroupElement) -> Cochain:
        return Cochain.from_vector(self.system, self.degree, self._sq.lift(x))

    def generators(self) -> list[Cochain]:
        return [self.representative(g) for g in self.group.gens()]


def cohomology(system: CoefficientSystem, p: int) -> Cohomology:
    key = ("H", p)
    if key not in system._cache:
        system._cache[key] = Cohomology(system, p)
    return system._cache[key]


def is_coboundary(c: Cochain) -> Cochain | None:
    """A cochain ``b`` with ``δb == c``, or ``None`` if ``c`` is not a coboundary."""
    if c.degree == 0:
        raise CechError("degree-0 cochains have no coboundary witnesses")
    if not c.is_cocycle():
        raise CechError("input is not a cocycle")
    _, _, moduli = _layout(c.system, c.degree)
    x = solve(differential_matrix(c.system, c.degree - 1), c.vector(), moduli)
    return None if x is None else Cochain.from_vector(c.system, c.degree - 1, x)


def cup(a: Cochain, b: Cochain) -> Cochain:
    """Čech cup product ``(a ∪ b)_{i0..i(p+q)} = a_{i0..ip} (x) b_{ip..i(p+q)}``.

    Values land in the facewise tensor system; both factors are restricted
    to the full face first.
    """
    if a.system.nerve != b.system.nerve:
        raise CechError("cup of cochains on different nerves")
    p, q = a.degree, b.degree
    if p + q >= MAX_FACE_SIZE:
        raise CechError(f"cup of degrees {p} and {q} exceeds the nerve cap")
    target = tensor_system(a.system, b.system)
    out = {}
    for f in target.nerve.faces_of_degree(p + q):
        front, back = f[:p + 1], f[p:]
        x = a.system.restrict(front, f)(a.components[front])
        y = b.system.restrict(back, f)(b.components[back])
        out[f] = tensor(x.parent, y.parent).pair(x, y)
    return Cochain(target, p + q, out)


def baer_sum(p: Cochain, q: Cochain) -> Cochain:
    """Sum of torsor (or gerbe) cocycles; realizes addition of classes."""
    p._same(q)
    return p + q


def random_system(rng: random.Random, nerve: CoverNerve, count: int = 2, groups=None) -> CoefficientSystem:
    """A direct sum of ``count`` random constant, supported and cone systems."""
    groups = groups or [cyclic(2), cyclic(3), cyclic(4), FgAbGroup((2, 2)), Z]
    parts = []
    for _ in range(count):
        g = rng.choice(groups)
        kind = rng.randrange(3)
        if kind == 0:
            parts.append(CoefficientSystem.constant(nerve, g))
        elif kind == 1:
            w = [v for v in range(nerve.index_count) if rng.random() < 0.7]
            parts.append(supported_system(nerve, g, w))
        else:
            parts.append(cone_system(CoefficientSystem.constant(nerve, g), rng.randrange(nerve.index_count))[0])
    return direct_sum_system(*parts)[0]


def random_cocycle(system: CoefficientSystem, degree: int, rng: random.Random, bound: int = 3) -> Cochain:
    """A cocycle with a random class plus a random coboundary."""
    h = cohomology(system, degree)
    c = h.representative(h.group.random_element(rng, bound))
    if degree > 0:
        c = c + differential(Cochain.random(system, degree - 1, rng, bound))
    return c


def global_sections(system: CoefficientSystem) -> Cohomology:
    return cohomology(system, 0)


def is_global_section(c: Cochain) -> bool:
    return c.degree == 0 and differential(c).is_zero()


# ---- builders -----------------------------------------------------------

def direct_sum_system(*systems: CoefficientSystem) -> tuple[CoefficientSystem, list[SystemMap], list[SystemMap]]:
    """Facewise direct sum with its injections and projections."""
    from .groups import direct_sum

    nerve = systems[0].nerve
    if any(s.nerve != nerve for s in systems):
        raise CechError("systems live on different nerves")
    sums = {f: direct_sum(*(s.groups[f] for s in systems)) for f in nerve.faces}
    maps = {}
    for st in _codim1(nerve):
        s, t = st
        ds, dt = sums[s], sums[t]
        maps[st] = GroupHom.from_images(ds.group, dt.group, [
            dt.combine([sys.maps[st](x) for sys, x in zip(systems, ds.split(g))]) for g in ds.group.gens()
        ])
    total = CoefficientSystem(nerve, {f: d.group for f, d in sums.items()}, maps)
    inj = [SystemMap(s, total, {f: sums[f].injections[k] for f in nerve.faces}) for k, s in enumerate(systems)]
    proj = [SystemMap(total, s, {f: sums[f].projections[k] for f in nerve.faces}) for k, s in enumerate(systems)]
    return total, inj, proj


def supported_system(nerve: CoverNerve, group: FgAbGroup, within: Iterable[int]) -> CoefficientSystem:
    """``group`` on faces contained in ``within``, zero elsewhere."""
    w = set(within)
    zero = FgAbGroup()
    groups = {f: group if set(f) <= w else zero for f in nerve.faces}
    maps = {}
    for s, t in _codim1(nerve):
        if groups[t] == zero:
            maps[(s, t)] = GroupHom.zero(groups[s], zero)
        else:
            maps[(s, t)] = GroupHom.identity(group)
    return CoefficientSystem(nerve, groups, maps)


def meeting_system(nerve: CoverNerve, group: FgAbGroup, meeting: Iterable[int]) -> CoefficientSystem:
    """``group`` on faces that meet ``meeting``, zero elsewhere."""
    w = set(meeting)
    zero = FgAbGroup()
    groups = {f: group if set(f) & w else zero for f in nerve.faces}
    maps = {}
    for s, t in _codim1(nerve):
        if groups[s] == zero:
            maps[(s, t)] = GroupHom.zero(zero, groups[t])
        else:
            maps[(s, t)] = GroupHom.identity(group)
    return CoefficientSystem(nerve, groups, maps)


def constant_on(source: CoefficientSystem, target: CoefficientSystem, h: GroupHom) -> SystemMap:
    """``h`` on every face where source and target carry ``h``'s groups, zero elsewhere."""
    comps = {}
    for f in source.nerve.faces:
        s, t = source.groups[f], target.groups[f]
        comps[f] = GroupHom(s, t, h.matrix) if (s, t) == (h.source, h.target) else GroupHom.zero(s, t)
    return SystemMap(source, target, comps)


def cone_system(system: CoefficientSystem, apex: int) -> tuple[CoefficientSystem, SystemMap]:
    """``S -> C(S ∪ {apex})`` where that is a face, zero elsewhere, with the map from ``C``.

    The cone system has no Čech cohomology in positive degrees, and the
    sum of the cone maps over all apexes is injective, so these give
    acyclic embeddings.
    """
    nerve = system.nerve
    zero = FgAbGroup()

    def up(f):
        g = tuple(sorted(set(f) | {apex}))
        return g if g in nerve else None

    groups = {f: system.groups[up(f)] if up(f) else zero for f in nerve.faces}
    maps = {}
    for s, t in _codim1(nerve):
        if up(t):
            maps[(s, t)] = system.restrict(up(s), up(t))
        else:
            maps[(s, t)] = GroupHom.zero(groups[s], groups[t])
    cone = CoefficientSystem(nerve, groups, maps)
    comps = {
        f: system.restrict(f, up(f)) if up(f) else GroupHom.zero(system.groups[f], zero) for f in nerve.faces
    }
    return cone, SystemMap(system, cone, comps)


def acyclic_embedding(system: CoefficientSystem) -> tuple[CoefficientSystem, SystemMap]:
    """An injective map of ``system`` into a Čech-acyclic system (sum of cones)."""
    cones = [cone_system(system, v) for v in range(system.nerve.index_count)]
    total, inj, _ = direct_sum_system(*(c for c, _ in cones))
    comps = {}
    for f in system.nerve.faces:
        h = None
        for (_, m), i in zip(cones, inj):
            term = i.components[f] @ m.components[f]
            h = term if h is None else h + term
        comps[f] = h
    return total, SystemMap(system, total, comps)


def _induced(src_proj: GroupHom, tgt_proj: GroupHom, restriction: GroupHom) -> GroupHom:
    """The map on quotients induced by ``restriction`` (``src_proj`` must be onto)."""
    from .groups import preimage

    images = []
    for g in src_proj.target.gens():
        x = preimage(src_proj, g)
        images.append(tgt_proj(restriction(x)))
    return GroupHom.from_images(src_proj.target, tgt_proj.target, images)


def cokernel_system(phi: SystemMap) -> tuple[CoefficientSystem, SystemMap]:
    """Facewise cokernel of ``phi`` with the quotient map from its target."""
    from .groups import hom_cokernel

    nerve = phi.source.nerve
    quots = {f: hom_cokernel(phi.components[f]) for f in nerve.faces}
    maps = {
        (s, t): _induced(quots[s][1], quots[t][1], phi.target.maps[(s, t)]) for s, t in _codim1(nerve)
    }
    q = CoefficientSystem(nerve, {f: g for f, (g, _) in quots.items()}, maps)
    return q, SystemMap(phi.target, q, {f: h for f, (_, h) in quots.items()})


def image_system(phi: SystemMap) -> tuple[CoefficientSystem, SystemMap, SystemMap]:
    """Facewise image ``C`` of ``phi`` with ``source ->> C >-> target``."""
    from .groups import image_factorization

    nerve = phi.source.nerve
    facts = {f: image_factorization(phi.components[f]) for f in nerve.faces}
    maps = {(s, t): _induced(facts[s][1], facts[t][1], phi.source.maps[(s, t)]) for s, t in _codim1(nerve)}
    c = CoefficientSystem(nerve, {f: v[0] for f, v in facts.items()}, maps)
    epi = SystemMap(phi.source, c, {f: v[1] for f, v in facts.items()})
    mono = SystemMap(c, phi.target, {f: v[2] for f, v in facts.items()})
    return c, epi, mono
