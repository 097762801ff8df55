"""Four-term exact complexes ``0 -> A -> L1 -> L0 -> B -> 0`` and their
iterated boundary ``d2 : H^0(B) -> H^2(A)``.

For a global section ``beta`` of ``B`` the recipe is

    x_i   in L0(U_i)      with p(x_i) = beta_i
    c_ij  = x_i - x_j     lies in C = im(d) = ker(p)
    l_ij  in L1(U_ij)     with d(l_ij) = c_ij
    a_ijk = l_ij + l_jk - l_ik   lies in ker(d) = A

and ``a`` is a 2-cocycle whose class does not depend on the choices.

A complex built with ``strict=False`` may have ``p`` non-surjective on
some faces; this models a cover too coarse for ``beta`` to lift locally,
and ``d2`` then reports the face where the lift fails.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping

from .cech import (
    Cochain,
    CoefficientSystem,
    SystemMap,
    cohomology,
    differential,
    image_system,
    is_coboundary,
)
from .groups import GroupElement, GroupHom, is_injective, is_surjective, preimage
from .lifting import AbelianExtension, NoLiftError, boundary0, boundary1, exact_at

Face = tuple[int, ...]


class ExactnessError(ValueError):
    def __init__(self, face, where: str):
        self.face, self.where = face, where
        super().__init__(f"complex is not exact at {where} on face {face}")


class FourTermError(ValueError):
    pass


class FourTermComplex:
    """``A --iota--> L1 --d--> L0 --p--> B`` on a shared nerve, validated on construction."""

    def __init__(self, iota: SystemMap, d: SystemMap, p: SystemMap, strict: bool = True, name: str = ""):
        if iota.target != d.source or d.target != p.source:
            raise FourTermError("maps are not composable")
        self.iota, self.d, self.p = iota, d, p
        self.a_sys, self.l1_sys, self.l0_sys, self.b_sys = iota.source, d.source, p.source, p.target
        self.nerve = self.a_sys.nerve
        self.strict, self.name = strict, name
        for f in sorted(self.nerve.faces):
            if not is_injective(iota[f]):
                raise ExactnessError(f, "A")
            if not exact_at(iota[f], d[f]):
                raise ExactnessError(f, "L1")
            if not exact_at(d[f], p[f]):
                raise ExactnessError(f, "L0")
            if strict and not is_surjective(p[f]):
                raise ExactnessError(f, "B")
        self._splice = None

    def __repr__(self):
        return f"FourTermComplex({self.name or '?'}, nerve={self.nerve!r})"


@dataclass
class MiddleImage:
    """``C = im(d)`` with ``d = j o pi``."""

    c_sys: CoefficientSystem
    pi: SystemMap
    j: SystemMap


def splice(ft: FourTermComplex) -> MiddleImage:
    """Split the complex into ``0 -> A -> L1 -> C -> 0`` and ``0 -> C -> L0 -> B``."""
    if ft._splice is None:
        c, pi, j = image_system(ft.d)
        ft._splice = MiddleImage(c, pi, j)
    return ft._splice


def _lift(h: GroupHom, y: GroupElement, face, cache: dict) -> GroupElement:
    """A preimage of ``y``: first in enumeration order when finite, solver otherwise."""
    if h.source.is_finite:
        key = (face, h)
        if key not in cache:
            table = {}
            for x in h.source.elements():
                table.setdefault(h(x), x)
            cache[key] = table
        x = cache[key].get(y)
    else:
        x = preimage(h, y)
    if x is None:
        raise NoLiftError(face)
    return x


@dataclass
class D2Result:
    cocycle: Cochain
    cohomology_class: GroupElement
    x: dict = field(repr=False)
    c: Cochain = field(repr=False)
    l: dict = field(repr=False)

    @property
    def is_zero(self) -> bool:
        return self.cohomology_class.is_zero()


def check_global_section(ft: FourTermComplex, beta: Cochain):
    if beta.system != ft.b_sys or beta.degree != 0:
        raise FourTermError("beta must be a 0-cochain of the B system")
    if not differential(beta).is_zero():
        raise FourTermError("beta is not a global section")


def d2(ft: FourTermComplex, beta: Cochain,
       x_shift: Mapping[Face, GroupElement] | None = None,
       l_shift: Mapping[Face, GroupElement] | None = None) -> D2Result:
    """Iterated boundary of ``beta``.

    ``x_shift`` adds ``j(y_i)`` (``y_i`` in ``C``) to the chosen lifts
    ``x_i``; ``l_shift`` adds ``iota(a_ij)`` to the lifts ``l_ij``. Both
    change the result by a coboundary only.
    """
    check_global_section(ft, beta)
    mid = splice(ft)
    nerve, cache = ft.nerve, {}
    x = {}
    for v in nerve.faces_of_degree(0):
        x[v] = _lift(ft.p[v], beta[v], v, cache)
        if x_shift and v in x_shift:
            x[v] = x[v] + mid.j[v](x_shift[v])
    c, l = {}, {}
    for e in nerve.faces_of_degree(1):
        i, k = e
        diff = ft.l0_sys.restrict((i,), e)(x[(i,)]) - ft.l0_sys.restrict((k,), e)(x[(k,)])
        ce = preimage(mid.j[e], diff)
        if ce is None:
            raise FourTermError(f"difference of lifts on {e} is not in the image of d")
        c[e] = ce
        l[e] = _lift(mid.pi[e], ce, e, cache)
        if l_shift and e in l_shift:
            l[e] = l[e] + ft.iota[e](l_shift[e])
    a = {}
    for t in nerve.faces_of_degree(2):
        i, j, k = t
        r = ft.l1_sys.restrict
        s = r((i, j), t)(l[(i, j)]) + r((j, k), t)(l[(j, k)]) - r((i, k), t)(l[(i, k)])
        at = preimage(ft.iota[t], s)
        if at is None:
            raise FourTermError(f"cocycle value on {t} is not in the image of A")
        a[t] = at
    cocycle = Cochain(ft.a_sys, 2, a)
    cls = cohomology(ft.a_sys, 2).class_of(cocycle)
    return D2Result(cocycle, cls, x, Cochain(mid.c_sys, 1, c), l)


def d2_composite(ft: FourTermComplex, beta: Cochain) -> tuple[Cochain, Cochain]:
    """``d2`` as two single boundary maps: ``boundary0`` for ``C -> L0 -> B``
    then ``boundary1`` for ``A -> L1 -> C``. Returns both cocycles."""
    check_global_section(ft, beta)
    mid = splice(ft)
    outer = AbelianExtension(mid.j, ft.p, require_surjective=ft.strict)
    inner = AbelianExtension(ft.iota, mid.pi)
    c = boundary0(outer, beta.components)
    return c, boundary1(inner, c.components)


def d2_matches_composite(ft: FourTermComplex, beta: Cochain) -> bool:
    direct = d2(ft, beta)
    _, composite = d2_composite(ft, beta)
    return direct.cohomology_class == cohomology(ft.a_sys, 2).class_of(composite)


def global_sections(ft: FourTermComplex) -> list[Cochain]:
    """Representatives of the generators of ``H^0(B)``."""
    return cohomology(ft.b_sys, 0).generators()


def d2_class_map(ft: FourTermComplex) -> list[GroupElement]:
    """Classes of ``d2`` on the generators of ``H^0(B)``."""
    return [d2(ft, beta).cohomology_class for beta in global_sections(ft)]


def choice_change_witness(ft: FourTermComplex, beta: Cochain, x_shift=None, l_shift=None) -> Cochain | None:
    """Coboundary witness between ``d2`` with and without the given perturbations."""
    base = d2(ft, beta).cocycle
    moved = d2(ft, beta, x_shift, l_shift).cocycle
    return is_coboundary(moved - base)


ENUMERATION_LIMIT = 1 << 16


def fiber_groupoid_report(ft: FourTermComplex, beta: Cochain, face, max_pairs: int = 16) -> dict:
    """The groupoid of lifts of ``beta`` on one face.

    Objects are ``g`` in ``L0`` with ``p(g) = beta``; morphisms ``g -> g'``
    are ``h`` in ``L1`` with ``d(h) = g - g'``. Every nonempty Hom-set is an
    ``A``-torsor, so automorphism groups are ``A(face)``.
    """
    check_global_section(ft, beta)
    face = tuple(face)
    l0, l1 = ft.l0_sys.group_at(face), ft.l1_sys.group_at(face)
    a_grp = ft.a_sys.group_at(face)
    b_val = ft.b_sys.restrict((face[0],), face)(beta[(face[0],)])
    report = {"face": list(face), "A": str(a_grp), "L1": str(l1), "L0": str(l0)}
    if not (l0.is_finite and l1.is_finite) or l0.order() > ENUMERATION_LIMIT or l1.order() > ENUMERATION_LIMIT:
        has_lift = preimage(ft.p[face], b_val) is not None
        report.update({
            "enumerated": False,
            "objects": f"torsor under ker(p) on {face}" if has_lift else "empty",
            "nonempty": has_lift,
            "automorphisms": str(a_grp),
        })
        return report
    objects = [g for g in l0.elements() if ft.p[face](g) == b_val]
    d = ft.d[face]
    by_image: dict = {}
    for h in l1.elements():
        by_image.setdefault(d(h), []).append(h)
    pairs = [(g, g2) for g in objects for g2 in objects][:max_pairs]
    hom_sizes = [len(by_image.get(g - g2, [])) for g, g2 in pairs]
    auts = by_image.get(l0.zero(), [])
    report.update({
        "enumerated": True,
        "objects": len(objects),
        "nonempty": bool(objects),
        "sampled_pairs": len(pairs),
        "hom_sizes": hom_sizes,
        "automorphisms": len(auts),
        "automorphisms_match_A": len(auts) == a_grp.order() and all(
            preimage(ft.iota[face], h) is not None for h in auts),
    })
    return report
