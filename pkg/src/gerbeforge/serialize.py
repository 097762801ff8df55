"""JSON encoding of groups, nerves, coefficient systems, maps and cochains.

Integers whose absolute value exceeds 2**53 are written as decimal strings
so that the files survive readers with double-precision numbers; both
forms are accepted on input. Faces are written as index lists in
lexicographic order.
"""

from __future__ import annotations

import re
from typing import Any

from .cech import Cochain, CoefficientSystem, CoverNerve, SystemMap
from .groups import FgAbGroup, GroupElement, GroupHom, IntMatrix

SAFE_INT = 2 ** 53


class FormatError(ValueError):
    pass


def enc_int(x: int) -> int | str:
    return x if -SAFE_INT <= x <= SAFE_INT else str(x)


def dec_int(x: Any) -> int:
    if isinstance(x, bool):
        raise FormatError(f"expected an integer, got {x!r}")
    if isinstance(x, int):
        return x
    if isinstance(x, str):
        try:
            return int(x, 10)
        except ValueError:
            pass
    raise FormatError(f"expected an integer, got {x!r}")


def enc_ints(xs) -> list:
    return [enc_int(int(x)) for x in xs]


def dec_ints(xs) -> list[int]:
    if not isinstance(xs, list):
        raise FormatError(f"expected a list of integers, got {xs!r}")
    return [dec_int(x) for x in xs]


def group_to_json(g: FgAbGroup) -> dict:
    return {"invariant_factors": enc_ints(g.invariant_factors), "free_rank": g.free_rank}


def group_from_json(d: Any) -> FgAbGroup:
    """Accepts the normal form or ``{"orders": [...]}`` (0 for a free summand)."""
    if isinstance(d, dict) and "orders" in d:
        return FgAbGroup.from_orders(dec_ints(d["orders"]))
    try:
        return FgAbGroup(tuple(dec_ints(d.get("invariant_factors", []))), int(d.get("free_rank", 0)))
    except (AttributeError, TypeError) as e:
        raise FormatError(f"bad group {d!r}") from e


_SUMMAND = re.compile(r"^(?:Z/(\d+)|Z(?:\^(\d+))?|(\d+))$")


def parse_group_spec(spec: str) -> FgAbGroup:
    """``"Z/2+Z/4+Z^2"``-style text; ``"0"`` is the trivial group."""
    text = spec.replace(" ", "")
    if text in ("0", "1", "trivial", ""):
        return FgAbGroup()
    orders = []
    for part in re.split(r"[+x]", text):
        m = _SUMMAND.match(part)
        if not m:
            raise FormatError(f"cannot read group {spec!r}")
        if m.group(1):
            orders.append(int(m.group(1)))
        elif m.group(3):
            # a bare integer n is Z/n
            orders.append(int(m.group(3)))
        else:
            orders.extend([0] * int(m.group(2) or 1))
    return FgAbGroup.from_orders(orders)


def element_to_json(x: GroupElement) -> list:
    return enc_ints(x.coords)


def hom_to_json(h: GroupHom) -> dict:
    return {
        "source": group_to_json(h.source),
        "target": group_to_json(h.target),
        "matrix": [enc_ints(r) for r in h.matrix.tolist()],
    }


def matrix_from_json(rows, cols: int) -> IntMatrix:
    return IntMatrix.from_rows([dec_ints(r) for r in rows], cols)


def hom_from_json(d: dict) -> GroupHom:
    src, tgt = group_from_json(d["source"]), group_from_json(d["target"])
    return GroupHom(src, tgt, matrix_from_json(d["matrix"], src.dim))


def nerve_to_json(n: CoverNerve) -> dict:
    return {"index_count": n.index_count, "faces": [list(f) for f in n.maximal_faces()]}


NAMED_NERVES = {
    "circle": lambda k=3: CoverNerve.circle(k),
    "sphere": lambda: CoverNerve.sphere(),
    "projective_plane": lambda: CoverNerve.projective_plane(),
    "torus": lambda: CoverNerve.torus(),
    "two_charts": lambda: CoverNerve.two_charts(),
    "simplex": lambda k=3: CoverNerve.full_simplex(k),
}


def nerve_from_json(d: Any) -> CoverNerve:
    """``{"index_count", "faces"}`` or ``{"named": "circle", "size": 5}``."""
    if isinstance(d, dict) and "named" in d:
        try:
            make = NAMED_NERVES[d["named"]]
        except KeyError:
            raise FormatError(f"unknown nerve {d['named']!r}") from None
        return make(d["size"]) if "size" in d else make()
    try:
        return CoverNerve(int(d["index_count"]), [tuple(f) for f in d.get("faces", [])])
    except (KeyError, TypeError) as e:
        raise FormatError(f"bad nerve {d!r}") from e


def parse_nerve_spec(spec: str) -> CoverNerve:
    """``"circle:5"``, ``"simplex:3"``, ``"sphere"`` and the other named nerves."""
    name, _, size = spec.partition(":")
    d = {"named": name}
    if size:
        try:
            d["size"] = int(size)
        except ValueError:
            raise FormatError(f"bad nerve size in {spec!r}") from None
    return nerve_from_json(d)


def system_to_json(s: CoefficientSystem) -> dict:
    faces = sorted(s.nerve.faces)
    groups = {f: s.groups[f] for f in faces}
    if len(set(groups.values())) == 1:
        g = groups[faces[0]]
        if all(h == GroupHom.identity(g) for h in s.maps.values()):
            return {"nerve": nerve_to_json(s.nerve), "constant": group_to_json(g)}
    return {
        "nerve": nerve_to_json(s.nerve),
        "groups": [{"face": list(f), "group": group_to_json(groups[f])} for f in faces],
        "maps": [
            {"from": list(a), "to": list(b), "matrix": [enc_ints(r) for r in h.matrix.tolist()]}
            for (a, b), h in sorted(s.maps.items())
        ],
    }


def system_from_json(d: dict, nerve: CoverNerve | None = None) -> CoefficientSystem:
    if nerve is None:
        nerve = nerve_from_json(d["nerve"])
    if "constant" in d:
        return CoefficientSystem.constant(nerve, group_from_json(d["constant"]))
    groups = {tuple(e["face"]): group_from_json(e["group"]) for e in d["groups"]}
    maps = {}
    for e in d["maps"]:
        a, b = tuple(e["from"]), tuple(e["to"])
        maps[(a, b)] = GroupHom(groups[a], groups[b], matrix_from_json(e["matrix"], groups[a].dim))
    return CoefficientSystem(nerve, groups, maps)


def system_map_to_json(m: SystemMap) -> list:
    return [{"face": list(f), "matrix": [enc_ints(r) for r in m.components[f].matrix.tolist()]}
            for f in sorted(m.components)]


def system_map_from_json(d: Any, source: CoefficientSystem, target: CoefficientSystem) -> SystemMap:
    """A list of facewise matrices, or ``{"constant": matrix}`` used on every face."""
    comps = {}
    if isinstance(d, dict) and "constant" in d:
        for f in source.nerve.faces:
            comps[f] = GroupHom(source.groups[f], target.groups[f], matrix_from_json(d["constant"], source.groups[f].dim))
        return SystemMap(source, target, comps)
    for e in d:
        f = tuple(e["face"])
        comps[f] = GroupHom(source.groups[f], target.groups[f], matrix_from_json(e["matrix"], source.groups[f].dim))
    return SystemMap(source, target, comps)


def cochain_to_json(c: Cochain, skip_zero: bool = False) -> dict:
    return {
        "degree": c.degree,
        "components": [
            {"face": list(f), "coords": element_to_json(x)}
            for f, x in sorted(c.components.items()) if not (skip_zero and x.is_zero())
        ],
    }


def cochain_from_json(d: dict, system: CoefficientSystem) -> Cochain:
    comps = {tuple(e["face"]): system.group_at(tuple(e["face"])).element(dec_ints(e["coords"]))
             for e in d.get("components", [])}
    return Cochain(system, int(d["degree"]), comps)
