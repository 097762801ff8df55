"""Boundary maps of central extensions ``0 -> A -> E -> G -> 0`` on a nerve.

An extension is given facewise by the group law of ``E``, its projection
to ``G`` and a set-theoretic section ``s``. From these:

* ``boundary0`` turns a global section of ``G`` into an A-torsor cocycle
  ``a_ij = s(g_i) s(g_j)^-1``;
* ``boundary1`` turns a G-valued 1-cocycle into the A-valued 2-cocycle
  ``a_ijk = s(g_ij) s(g_jk) s(g_ik)^-1`` of the gerbe of local lifts.

Sections are evaluated on the face where the cochain component lives and
the resulting elements of ``E`` are then restricted to the larger face.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterable, Mapping

from .cech import (
    CechError,
    Cochain,
    CoefficientSystem,
    CoverNerve,
    SystemMap,
    cohomology,
    cup,
    is_coboundary,
    tensor_system,
)
from .groups import FgAbGroup, GroupElement, GroupHom, is_injective, is_surjective, kernel_inclusion, preimage
from .heisenberg import HeisenbergElement, HeisenbergGroup, heisenberg_map

Face = tuple[int, ...]
SectionShift = Callable[[Face, object], GroupElement]


class LiftingError(ValueError):
    pass


class NoLiftError(LiftingError):
    """A base element has no preimage in ``E`` on some face."""

    def __init__(self, face, message=None):
        self.face = face
        super().__init__(message or f"no local lift on face {face}")


class CentralExtension:
    """Facewise central extension; subclasses supply the law.

    ``shift`` perturbs the section: ``s'(g) = s(g) + shift(face, g)`` with
    ``shift`` valued in the kernel at ``face``.
    """

    kernel: CoefficientSystem

    def __init__(self, kernel: CoefficientSystem, shift: SectionShift | None = None):
        self.kernel = kernel
        self.nerve: CoverNerve = kernel.nerve
        self.shift = shift

    # -- E
    def e_mul(self, face, x, y): raise NotImplementedError
    def e_inv(self, face, x): raise NotImplementedError
    def e_restrict(self, s, t, x): raise NotImplementedError
    def e_project(self, face, x): raise NotImplementedError
    def include(self, face, a: GroupElement): raise NotImplementedError
    def kernel_part(self, face, x) -> GroupElement: raise NotImplementedError

    # -- G
    def g_mul(self, face, g, h): raise NotImplementedError
    def g_inv(self, face, g): raise NotImplementedError
    def g_restrict(self, s, t, g): raise NotImplementedError
    def g_identity(self, face): raise NotImplementedError

    def base_section(self, face, g): raise NotImplementedError

    def section(self, face: Face, g):
        e = self.base_section(face, g)
        if self.shift is not None:
            e = self.e_mul(face, e, self.include(face, self.shift(face, g)))
        return e

    def lift_to_kernel(self, face, x) -> GroupElement:
        if self.e_project(face, x) != self.g_identity(face):
            raise LiftingError(f"element on {face} does not lie in the kernel")
        return self.kernel_part(face, x)


def _restricted(ext: CentralExtension, face: Face, big: Face, g):
    return ext.e_restrict(face, big, ext.section(face, g))


def check_base_cocycle(ext: CentralExtension, g: Mapping[Face, object]):
    """Raise unless ``g_ik == g_ij g_jk`` on every triple face."""
    for f in ext.nerve.faces_of_degree(2):
        i, j, k = f
        gij = ext.g_restrict((i, j), f, g[(i, j)])
        gjk = ext.g_restrict((j, k), f, g[(j, k)])
        gik = ext.g_restrict((i, k), f, g[(i, k)])
        if ext.g_mul(f, gij, gjk) != gik:
            raise LiftingError(f"base cochain is not a cocycle on {f}")


def boundary1(ext: CentralExtension, g: Mapping[Face, object]) -> Cochain:
    """The 2-cocycle ``s(g_ij) s(g_jk) s(g_ik)^-1`` of the gerbe of lifts of ``g``."""
    check_base_cocycle(ext, g)
    out = {}
    for f in ext.nerve.faces_of_degree(2):
        i, j, k = f
        eij = _restricted(ext, (i, j), f, g[(i, j)])
        ejk = _restricted(ext, (j, k), f, g[(j, k)])
        eik = _restricted(ext, (i, k), f, g[(i, k)])
        out[f] = ext.lift_to_kernel(f, ext.e_mul(f, ext.e_mul(f, eij, ejk), ext.e_inv(f, eik)))
    return Cochain(ext.kernel, 2, out)


def boundary0(ext: CentralExtension, g0: Mapping[Face, object]) -> Cochain:
    """The torsor cocycle ``a_ij = s(g_i) s(g_j)^-1`` of the fiber over a global section."""
    for e in ext.nerve.faces_of_degree(1):
        i, j = e
        if ext.g_restrict((i,), e, g0[(i,)]) != ext.g_restrict((j,), e, g0[(j,)]):
            raise LiftingError(f"not a global section: values disagree on {e}")
    out = {}
    for e in ext.nerve.faces_of_degree(1):
        i, j = e
        ei = _restricted(ext, (i,), e, g0[(i,)])
        ej = _restricted(ext, (j,), e, g0[(j,)])
        out[e] = ext.lift_to_kernel(e, ext.e_mul(e, ei, ext.e_inv(e, ej)))
    return Cochain(ext.kernel, 1, out)


# ---- Heisenberg -------------------------------------------------------------

class HeisenbergExtension(CentralExtension):
    """``0 -> A(x)B -> H(A, B) -> A x B -> 0`` facewise, section ``(a, b) -> (a, b, 0)``.

    Base elements are pairs ``(a, b)`` of group elements.
    """

    def __init__(self, a_sys: CoefficientSystem, b_sys: CoefficientSystem, shift: SectionShift | None = None):
        if a_sys.nerve != b_sys.nerve:
            raise CechError("systems live on different nerves")
        super().__init__(tensor_system(a_sys, b_sys), shift)
        self.a_sys, self.b_sys = a_sys, b_sys

    def group_at(self, face) -> HeisenbergGroup:
        return HeisenbergGroup(self.a_sys.group_at(face), self.b_sys.group_at(face))

    def e_mul(self, face, x, y):
        return x * y

    def e_inv(self, face, x):
        return x.inverse()

    def e_restrict(self, s, t, x: HeisenbergElement):
        return heisenberg_map(self.a_sys.restrict(s, t), self.b_sys.restrict(s, t), x)

    def e_project(self, face, x):
        return (x.a, x.b)

    def include(self, face, a):
        return self.group_at(face).center(a)

    def kernel_part(self, face, x):
        return x.t

    def g_mul(self, face, g, h):
        return (g[0] + h[0], g[1] + h[1])

    def g_inv(self, face, g):
        return (-g[0], -g[1])

    def g_restrict(self, s, t, g):
        return (self.a_sys.restrict(s, t)(g[0]), self.b_sys.restrict(s, t)(g[1]))

    def g_identity(self, face):
        return (self.a_sys.group_at(face).zero(), self.b_sys.group_at(face).zero())

    def base_section(self, face, g):
        return self.group_at(face).section(g[0], g[1])

    @staticmethod
    def pair_cochain(p: Cochain, q: Cochain) -> dict:
        if p.degree != q.degree:
            raise LiftingError("component cochains have different degrees")
        return {f: (p.components[f], q.components[f]) for f in p.components}


@dataclass
class GerbeReport:
    cocycle: Cochain
    cohomology_class: GroupElement
    cup_class: GroupElement
    equals_cup: bool
    trivial: bool
    witness: Cochain | None

    def summary(self) -> dict:
        return {
            "class": list(self.cohomology_class.coords),
            "h2": str(self.cohomology_class.parent),
            "equals_cup": self.equals_cup,
            "trivial": self.trivial,
            "witness": None if self.witness is None else {
                ",".join(map(str, f)): list(x.coords) for f, x in self.witness.components.items()
            },
        }


def heisenberg_gerbe(a_sys: CoefficientSystem, b_sys: CoefficientSystem, p: Cochain, q: Cochain,
                     shift: SectionShift | None = None) -> GerbeReport:
    """Gerbe of local lifts of ``(P, Q)`` to the Heisenberg extension."""
    if p.system != a_sys or q.system != b_sys or p.degree != 1 or q.degree != 1:
        raise LiftingError("p and q must be 1-cochains of the given systems")
    for c, name in ((p, "p"), (q, "q")):
        if not c.is_cocycle():
            raise LiftingError(f"{name} is not a cocycle")
    ext = HeisenbergExtension(a_sys, b_sys, shift)
    cocycle = boundary1(ext, HeisenbergExtension.pair_cochain(p, q))
    h2 = cohomology(ext.kernel, 2)
    cls = h2.class_of(cocycle)
    cup_cochain = cup(p, q)
    witness = is_coboundary(cocycle)
    return GerbeReport(
        cocycle=cocycle,
        cohomology_class=cls,
        cup_class=h2.class_of(cup_cochain),
        equals_cup=cocycle == cup_cochain,
        trivial=witness is not None,
        witness=witness,
    )


# ---- abelian extensions -----------------------------------------------------

class AbelianExtension(CentralExtension):
    """A facewise exact sequence ``0 -> A -> E -> G`` of coefficient systems.

    ``require_surjective=False`` allows ``E -> G`` to miss elements on some
    faces; sections then raise :class:`NoLiftError` where no lift exists.
    Sections are the first preimage in enumeration order for finite ``E``
    and a solver preimage otherwise.
    """

    def __init__(self, incl: SystemMap, proj: SystemMap, shift: SectionShift | None = None,
                 require_surjective: bool = True):
        if incl.target != proj.source:
            raise CechError("maps are not composable")
        super().__init__(incl.source, shift)
        self.incl, self.proj = incl, proj
        self.e_sys, self.g_sys = incl.target, proj.target
        for f in sorted(self.nerve.faces):
            i, p = incl[f], proj[f]
            if not is_injective(i):
                raise LiftingError(f"A -> E is not injective on {f}")
            if not exact_at(i, p):
                raise LiftingError(f"sequence is not exact at E on {f}")
            if require_surjective and not is_surjective(p):
                raise LiftingError(f"E -> G is not surjective on {f}")
        self._tables: dict[Face, dict] = {}

    def e_mul(self, face, x, y):
        return x + y

    def e_inv(self, face, x):
        return -x

    def e_restrict(self, s, t, x):
        return self.e_sys.restrict(s, t)(x)

    def e_project(self, face, x):
        return self.proj[face](x)

    def include(self, face, a):
        return self.incl[face](a)

    def kernel_part(self, face, x):
        a = preimage(self.incl[face], x)
        if a is None:
            raise LiftingError(f"element on {face} is not in the image of A")
        return a

    def g_mul(self, face, g, h):
        return g + h

    def g_inv(self, face, g):
        return -g

    def g_restrict(self, s, t, g):
        return self.g_sys.restrict(s, t)(g)

    def g_identity(self, face):
        return self.g_sys.group_at(face).zero()

    def base_section(self, face, g):
        e_grp = self.e_sys.group_at(face)
        if e_grp.is_finite:
            if face not in self._tables:
                table = {}
                for x in e_grp.elements():
                    table.setdefault(self.proj[face](x), x)
                self._tables[face] = table
            x = self._tables[face].get(g)
        else:
            x = preimage(self.proj[face], g)
        if x is None:
            raise NoLiftError(face)
        return x


def exact_at(f: GroupHom, g: GroupHom) -> bool:
    """``im f == ker g``."""
    if not (g @ f).is_zero():
        return False
    k = kernel_inclusion(g)
    return all(preimage(f, k(x)) is not None for x in k.source.gens())


def constant_heisenberg_search(nerve: CoverNerve, group: FgAbGroup, sections: int = 4) -> list[dict]:
    """Search systems with ``group`` on every face and restrictions in ``{0, id}``
    for a global section of ``A x B`` whose ``boundary0`` class is nonzero.

    Returns the examples found (the canonical section commutes with every
    restriction, so this list is expected to be empty).
    """
    import itertools

    inclusions = [(s, t) for t in sorted(nerve.faces) if len(t) > 1 for s in _facets(t)]
    ident, zero = GroupHom.identity(group), GroupHom.zero(group, group)
    systems = []
    for choice in itertools.product((ident, zero), repeat=len(inclusions)):
        try:
            systems.append(CoefficientSystem(nerve, {f: group for f in nerve.faces}, dict(zip(inclusions, choice))))
        except CechError:
            continue
    found = []
    for a_sys, b_sys in itertools.product(systems, repeat=2):
        ext = HeisenbergExtension(a_sys, b_sys)
        h1 = cohomology(ext.kernel, 1)
        ha, hb = cohomology(a_sys, 0), cohomology(b_sys, 0)
        for x, y in itertools.islice(itertools.product(list(ha.group.elements()), list(hb.group.elements())), sections):
            ra, rb = ha.representative(x), hb.representative(y)
            g0 = {f: (ra.components[f], rb.components[f]) for f in nerve.faces_of_degree(0)}
            cls = h1.class_of(boundary0(ext, g0))
            if not cls.is_zero():
                found.append({"a_system": a_sys, "b_system": b_sys, "section": g0, "class": cls})
    return found


def _facets(t: Face) -> Iterable[Face]:
    return [t[:k] + t[k + 1:] for k in range(len(t))]
