"""Synthetic four-term complexes shipped with the package.

The complexes are built from small pieces: constant and supported
systems, Bockstein-type short exact sequences, and acyclic cone
embeddings (``C -> P(C) -> P(C)/C``). The JSON file under ``data/`` is
generated by this module and is what the CLI loads; ``python3 -m
gerbeforge.library`` regenerates it.
"""

from __future__ import annotations

import argparse
import json
from functools import lru_cache
from importlib import resources
from pathlib import Path

from .cech import (
    CoefficientSystem,
    CoverNerve,
    SystemMap,
    acyclic_embedding,
    cokernel_system,
    constant_on,
    meeting_system,
    supported_system,
)
from .fourterm import FourTermComplex
from .groups import TRIVIAL, FgAbGroup, GroupHom, IntMatrix, Z, cyclic
from .serialize import (
    nerve_from_json,
    nerve_to_json,
    system_from_json,
    system_map_from_json,
    system_map_to_json,
    system_to_json,
)

DATA_FILE = "fourterm_library.json"


def _hom(src: FgAbGroup, tgt: FgAbGroup, rows) -> GroupHom:
    return GroupHom(src, tgt, IntMatrix.from_rows(rows, src.dim))


def _const(nerve, h: GroupHom) -> SystemMap:
    return SystemMap.constant(nerve, h)


def resolve_tail(iota: SystemMap, pi: SystemMap, name: str, strict=True) -> FourTermComplex:
    """Complete ``0 -> A -> L1 -> C -> 0`` to a four-term complex with ``L0 = P(C)``."""
    big, emb = acyclic_embedding(pi.target)
    quot, q = cokernel_system(emb)
    return FourTermComplex(iota, emb @ pi, q, strict=strict, name=name)


def split_zero() -> FourTermComplex:
    nerve = CoverNerve.circle(3)
    a, b = cyclic(2), cyclic(3)
    return FourTermComplex(
        _const(nerve, GroupHom.identity(a)),
        _const(nerve, GroupHom.zero(a, b)),
        _const(nerve, GroupHom.identity(b)),
        name="split_zero",
    )


def z_doubling() -> FourTermComplex:
    nerve = CoverNerve.circle(3)
    return FourTermComplex(
        _const(nerve, GroupHom.zero(TRIVIAL, Z)),
        _const(nerve, _hom(Z, Z, [[2]])),
        _const(nerve, _hom(Z, cyclic(2), [[1]])),
        name="z_doubling",
    )


def z4_doubling() -> FourTermComplex:
    nerve = CoverNerve.circle(3)
    z2, z4 = cyclic(2), cyclic(4)
    return FourTermComplex(
        _const(nerve, _hom(z2, z4, [[2]])),
        _const(nerve, _hom(z4, z4, [[2]])),
        _const(nerve, _hom(z4, z2, [[1]])),
        name="z4_doubling",
    )


def koszul(x: int, y: int, nerve=None, name=None) -> FourTermComplex:
    """``0 -> Z -> Z^2 -> Z -> Z/gcd -> 0`` from the Koszul complex of ``(x, y)``."""
    from math import gcd

    nerve = nerve or CoverNerve.circle(3)
    g = gcd(x, y)
    z2 = FgAbGroup(free_rank=2)
    tail = cyclic(g) if g > 1 else TRIVIAL
    p = _hom(Z, tail, [[1]] if g > 1 else [])
    return FourTermComplex(
        _const(nerve, _hom(Z, z2, [[-y // g], [x // g]])),
        _const(nerve, _hom(z2, Z, [[x, y]])),
        _const(nerve, p),
        name=name or f"koszul_{x}_{y}",
    )


def supported_koszul() -> FourTermComplex:
    """The ``(4, 6)`` Koszul complex on the faces inside ``{0, 1}`` of a circle nerve, zero elsewhere."""
    nerve = CoverNerve.circle(4)
    w = [0, 1]
    z2 = FgAbGroup(free_rank=2)
    sa, s1, s0, sb = (supported_system(nerve, g, w) for g in (Z, z2, Z, cyclic(2)))
    return FourTermComplex(
        constant_on(sa, s1, _hom(Z, z2, [[-3], [2]])),
        constant_on(s1, s0, _hom(z2, Z, [[4, 6]])),
        constant_on(s0, sb, _hom(Z, cyclic(2), [[1]])),
        name="supported_koszul",
    )


def bockstein(nerve: CoverNerve, n: int, name: str) -> FourTermComplex:
    """``0 -> Z/n -> Z/n^2 -> P(Z/n) -> P(Z/n)/(Z/n) -> 0``: ``d2`` is the Bockstein after ``boundary0``."""
    small, big = cyclic(n), cyclic(n * n)
    iota = _const(nerve, _hom(small, big, [[n]]))
    pi = _const(nerve, _hom(big, small, [[1]]))
    return resolve_tail(iota, pi, name)


def double_resolution(nerve: CoverNerve, group: FgAbGroup, name: str) -> FourTermComplex:
    """``0 -> A -> P(A) -> P(C) -> P(C)/C -> 0`` with ``C = P(A)/A``; ``d2`` is onto ``H^2(A)``."""
    a_sys = CoefficientSystem.constant(nerve, group)
    _, emb = acyclic_embedding(a_sys)
    _, q = cokernel_system(emb)
    return resolve_tail(emb, q, name)


def coarse_cover() -> FourTermComplex:
    """``L0 -> B`` misses ``B`` on faces away from ``{0, 1}``: no local lift at vertex 2."""
    nerve = CoverNerve.circle(3)
    z2 = cyclic(2)
    l0 = meeting_system(nerve, z2, [0, 1])
    b = CoefficientSystem.constant(nerve, z2)
    zero = CoefficientSystem.constant(nerve, TRIVIAL)
    return FourTermComplex(
        SystemMap(zero, zero, {f: GroupHom.identity(TRIVIAL) for f in nerve.faces}),
        constant_on(zero, l0, GroupHom.zero(TRIVIAL, z2)),
        constant_on(l0, b, GroupHom.identity(z2)),
        strict=False,
        name="coarse_cover",
    )


# name -> (builder, description, some d2 class nonzero)
BUILDERS = {
    "split_zero": (split_zero, "A = L1, L0 = B, d = 0 on a circle nerve; C = 0", False),
    "z_doubling": (z_doubling, "0 -> 0 -> Z -2-> Z -> Z/2 -> 0 on a circle nerve; C = 2Z", False),
    "z4_doubling": (z4_doubling, "0 -> Z/2 -> Z/4 -2-> Z/4 -> Z/2 -> 0 on a circle nerve", False),
    "koszul_2_3": (lambda: koszul(2, 3), "Koszul complex of (2, 3) over Z, B = 0", False),
    "koszul_4_6": (lambda: koszul(4, 6), "Koszul complex of (4, 6) over Z, B = Z/2", False),
    "supported_koszul": (supported_koszul, "Koszul (4, 6) supported on two opens of a 4-cycle", False),
    "circle_bockstein": (lambda: bockstein(CoverNerve.circle(3), 2, "circle_bockstein"),
                         "Z/2 -> Z/4 Bockstein resolved by cones; H^2 = 0 on the circle", False),
    "rp2_bockstein": (lambda: bockstein(CoverNerve.projective_plane(), 2, "rp2_bockstein"),
                      "Z/2 -> Z/4 Bockstein on RP^2; d2 hits the nonzero class of H^2(Z/2)", True),
    "rp2_bockstein_mod3": (lambda: bockstein(CoverNerve.projective_plane(), 3, "rp2_bockstein_mod3"),
                           "Z/3 -> Z/9 Bockstein on RP^2; H^1(Z/3) = 0 so d2 vanishes", False),
    "simplex_resolution": (lambda: double_resolution(CoverNerve.full_simplex(3), cyclic(2), "simplex_resolution"),
                           "double cone resolution of Z/2 on a 2-simplex; H^2 = 0", False),
    "sphere_free_resolution": (lambda: double_resolution(CoverNerve.sphere(), Z, "sphere_free_resolution"),
                               "double cone resolution of Z on the sphere nerve; d2 onto H^2 = Z", True),
    "coarse_cover": (coarse_cover, "non-strict: B = Z/2 is not reached on vertex 2", None),
}


def complex_to_json(ft: FourTermComplex) -> dict:
    return {
        "name": ft.name,
        "strict": ft.strict,
        "nerve": nerve_to_json(ft.nerve),
        "systems": {k: system_to_json(s) for k, s in
                    (("A", ft.a_sys), ("L1", ft.l1_sys), ("L0", ft.l0_sys), ("B", ft.b_sys))},
        "maps": {"iota": system_map_to_json(ft.iota), "d": system_map_to_json(ft.d), "p": system_map_to_json(ft.p)},
    }


def complex_from_json(d: dict) -> FourTermComplex:
    nerve = nerve_from_json(d["nerve"])
    sys = {k: system_from_json(v, nerve) for k, v in d["systems"].items()}
    iota = system_map_from_json(d["maps"]["iota"], sys["A"], sys["L1"])
    dm = system_map_from_json(d["maps"]["d"], sys["L1"], sys["L0"])
    p = system_map_from_json(d["maps"]["p"], sys["L0"], sys["B"])
    return FourTermComplex(iota, dm, p, strict=d.get("strict", True), name=d.get("name", ""))


def library_json() -> dict:
    entries = []
    for name, (build, desc, nonzero) in BUILDERS.items():
        entries.append({"description": desc, "expect_nonzero": nonzero, "complex": complex_to_json(build())})
    return {"version": 1, "complexes": entries}


@lru_cache(maxsize=1)
def _raw() -> dict:
    return json.loads(resources.files("gerbeforge").joinpath("data", DATA_FILE).read_text())


def load_library(strict_only: bool = False) -> dict[str, tuple[FourTermComplex, dict]]:
    """The shipped complexes by name, with their metadata."""
    out = {}
    for e in _raw()["complexes"]:
        if strict_only and not e["complex"].get("strict", True):
            continue
        ft = complex_from_json(e["complex"])
        out[ft.name] = (ft, {"description": e["description"], "expect_nonzero": e["expect_nonzero"]})
    return out


def main(argv=None):
    ap = argparse.ArgumentParser(description="Regenerate the shipped four-term complex library.")
    ap.add_argument("--out", type=Path, default=Path(__file__).parent / "data" / DATA_FILE)
    args = ap.parse_args(argv)
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(json.dumps(library_json(), indent=1, sort_keys=True) + "\n")
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
