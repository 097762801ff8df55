"""Divisors on the projective line as torsor cocycles for the unit sheaf.

The cover is ``U0 = P^1 - {inf}`` and ``U1 = P^1 - {0}`` with overlap
``G_m``. Units are ``F_p^*`` on each chart and ``F_p^* x t^Z`` on the
overlap; a unit ``c t^n`` has coordinates ``(log c, n)`` for a fixed
primitive root. A divisor ``D`` gets local equations ``f_i`` with
``div(f_i) = D`` on ``U_i`` and transition ``g_01 = f_0 / f_1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from sympy import primitive_root

from ..cech import Cochain, CoefficientSystem, CoverNerve, baer_sum, cohomology
from ..groups import FgAbGroup, GroupElement, Z, cyclic, direct_sum
from .function_field import Divisor, Place, RationalFunction, divisor
from .poly import FieldError, Poly, check_prime


class NonPrincipalError(FieldError):
    pass


@lru_cache(maxsize=None)
def _log_table(p: int) -> dict[int, int]:
    if p == 2:
        return {1: 0}
    g = primitive_root(p)
    return {pow(g, k, p): k for k in range(p - 1)}


def unit_group(p: int) -> FgAbGroup:
    return cyclic(p - 1) if p > 2 else FgAbGroup()


@lru_cache(maxsize=None)
def unit_system(p: int) -> CoefficientSystem:
    """Units of the two charts and their overlap."""
    check_prime(p)
    nerve = CoverNerve.two_charts()
    k = unit_group(p)
    overlap = direct_sum(k, Z)
    inc = overlap.injections[0]
    return CoefficientSystem(nerve, {(0,): k, (1,): k, (0, 1): overlap.group},
                             {((0,), (0, 1)): inc, ((1,), (0, 1)): inc})


def unit_coords(p: int, u: RationalFunction) -> GroupElement:
    """Coordinates of a unit ``c t^n`` of ``G_m`` in the overlap group."""
    if u.is_zero() or any(u.num.coeffs[:-1]) or any(u.den.coeffs[:-1]):
        raise NonPrincipalError(f"{u} is not a unit on the overlap")
    k = unit_group(p)
    log = k.element([_log_table(p)[u.num.lead]] if k.dim else [])
    return direct_sum(k, Z).combine([log, Z.element([u.num.degree - u.den.degree])])


def _chart_part(d: Divisor, chart: int) -> Divisor:
    t = Place.finite(Poly.x(d.p))
    drop = Place.infinity(d.p) if chart == 0 else t
    return Divisor(d.p, {v: n for v, n in d.coeffs.items() if v != drop})


def local_equations(d: Divisor) -> tuple[RationalFunction, RationalFunction]:
    """``(f_0, f_1)`` with ``div(f_i)`` equal to ``d`` on ``U_i``."""
    p = d.p
    t = RationalFunction.t(p)
    f0 = RationalFunction.constant(p, 1)
    f1 = RationalFunction.constant(p, 1)
    for v, n in d.coeffs.items():
        if v.is_infinite:
            f1 = f1 * t ** (-n)
            continue
        pi = RationalFunction(v.pi)
        f0 = f0 * pi ** n
        if v.pi != Poly.x(p):
            # pi / t^deg is a unit at infinity and a local equation of v on U1
            f1 = f1 * (pi / t ** v.pi.degree) ** n
    for chart, f in ((0, f0), (1, f1)):
        if _chart_part(divisor(f), chart) != _chart_part(d, chart):
            raise NonPrincipalError(f"no local equation for {d} on chart {chart}")
    return f0, f1


@dataclass
class TorsorCocycle:
    divisor: Divisor
    f0: RationalFunction
    f1: RationalFunction
    transition: RationalFunction
    cocycle: Cochain

    def to_json(self) -> dict:
        return {
            "divisor": self.divisor.to_json(),
            "f0": self.f0.to_json(),
            "f1": self.f1.to_json(),
            "transition": self.transition.to_json(),
            "cocycle": list(self.cocycle[(0, 1)].coords),
            "degree": picard_degree(self.cocycle),
        }


def divisor_torsor_cocycle(d: Divisor) -> TorsorCocycle:
    """The unit 1-cocycle ``g_01 = f_0 / f_1`` of the line bundle of ``d``."""
    f0, f1 = local_equations(d)
    g = f0 / f1
    coc = Cochain(unit_system(d.p), 1, {(0, 1): unit_coords(d.p, g)})
    return TorsorCocycle(d, f0, f1, g, coc)


def picard_degree(cocycle: Cochain) -> int:
    """The class of ``cocycle`` in ``H^1 = Pic(P^1) = Z``, counted in multiples of the class of ``O(1)``."""
    sys = cocycle.system
    h = cohomology(sys, 1)
    if h.group != Z:
        raise FieldError("unexpected H^1 of the unit system")
    # O(1) has transition t, i.e. coordinates (log 1, 1)
    k = sys.group_at((0,))
    one = Cochain(sys, 1, {(0, 1): direct_sum(k, Z).combine([k.zero(), Z.element([1])])})
    gen = h.class_of(one).coords[0]
    return h.class_of(cocycle).coords[0] // gen


def check_torsor_additivity(d: Divisor, e: Divisor) -> bool:
    """``cocycle(d + e)`` is the Baer sum of the two cocycles and every degree is recovered."""
    cd, ce, cde = (divisor_torsor_cocycle(x) for x in (d, e, d + e))
    return (cde.cocycle == baer_sum(cd.cocycle, ce.cocycle)
            and all(picard_degree(c.cocycle) == c.divisor.degree for c in (cd, ce, cde)))
