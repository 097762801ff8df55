"""Declarative job files: named definitions plus tasks with optional expectations.

A job is validated against ``data/job.schema.json``. Anywhere a task or a
definition expects an object of some kind, it may give either the name of
a definition of that kind or an inline value. Tasks run independently;
a task that raises a domain error (any ``ValueError``) is recorded with
status ``error``, anything else is an internal failure.
"""

from __future__ import annotations

import itertools
import json
import random
from concurrent.futures import ProcessPoolExecutor
from functools import lru_cache
from importlib import resources
from typing import Any, Callable

import jsonschema

from .cech import Cochain, CoefficientSystem, SystemMap, cohomology, cup, is_coboundary
from .fourterm import FourTermComplex, d2, d2_matches_composite, fiber_groupoid_report, global_sections
from .groups import FgAbGroup, GroupElement, GroupHom, tensor
from .heisenberg import HeisenbergGroup
from .library import complex_from_json, load_library
from .lifting import heisenberg_gerbe
from .serialize import (
    FormatError,
    cochain_from_json,
    cochain_to_json,
    dec_int,
    dec_ints,
    element_to_json,
    group_from_json,
    group_to_json,
    matrix_from_json,
    nerve_from_json,
    parse_group_spec,
    parse_nerve_spec,
    system_from_json,
)
from .simplicial import aw_cup, bar_simplex, dold_kan_homology
from .symbols import (
    Divisor,
    Place,
    RationalFunction,
    divisor,
    divisor_torsor_cocycle,
    ord_at,
    place_from_json,
    random_rational_function,
    tame_symbol,
    unit_system,
    weil_reciprocity,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INTERNAL = 0, 1, 2, 3


class JobError(Exception):
    """Schema violation, unknown reference or reference cycle (exit code 2)."""


@lru_cache(maxsize=1)
def job_schema() -> dict:
    return json.loads(resources.files("gerbeforge").joinpath("data", "job.schema.json").read_text())


def validate_job(job: Any):
    try:
        jsonschema.validate(job, job_schema())
    except jsonschema.ValidationError as e:
        where = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise JobError(f"job does not match the schema at {where}: {e.message}") from None
    names = [d["name"] for d in job.get("definitions", [])]
    dup = {n for n in names if names.count(n) > 1}
    if dup:
        raise JobError(f"duplicate definition names: {sorted(dup)}")
    tnames = [t["name"] for t in job["tasks"]]
    dup = {n for n in tnames if tnames.count(n) > 1}
    if dup:
        raise JobError(f"duplicate task names: {sorted(dup)}")


# ---- definitions ------------------------------------------------------------------

class Resolver:
    """Builds definitions on demand, detecting unknown names and cycles."""

    def __init__(self, job: dict):
        self.defs = {d["name"]: d for d in job.get("definitions", [])}
        self.values: dict[str, Any] = {}
        self._active: list[str] = []

    def resolve(self, name: str, kind: str | None = None):
        if name not in self.defs:
            raise JobError(f"unknown reference {name!r}")
        d = self.defs[name]
        if kind is not None and d["kind"] != kind:
            raise JobError(f"{name!r} is a {d['kind']}, expected a {kind}")
        if name not in self.values:
            if name in self._active:
                raise JobError("reference cycle: " + " -> ".join(self._active + [name]))
            self._active.append(name)
            try:
                self.values[name] = self.build(d["kind"], d["value"])
            except (KeyError, TypeError) as e:
                raise JobError(f"definition {name!r} is malformed: {e!r}") from None
            finally:
                self._active.pop()
        return self.values[name]

    def get(self, ref: Any, kind: str):
        """A definition by name, or an inline value of the given kind."""
        if isinstance(ref, str) and ref in self.defs:
            return self.resolve(ref, kind)
        if isinstance(ref, str) and kind not in ("group", "nerve"):
            raise JobError(f"unknown reference {ref!r}")
        return self.build(kind, ref)

    def check_all(self):
        for name in self.defs:
            self.resolve(name)

    def build(self, kind: str, v: Any):
        return getattr(self, f"_build_{kind}")(v)

    def _build_group(self, v) -> FgAbGroup:
        if isinstance(v, str):
            # another definition's name makes an alias
            return self.resolve(v, "group") if v in self.defs else parse_group_spec(v)
        return group_from_json(v)

    def _build_nerve(self, v):
        if isinstance(v, str):
            return self.resolve(v, "nerve") if v in self.defs else parse_nerve_spec(v)
        return nerve_from_json(v)

    def _build_system(self, v) -> CoefficientSystem:
        if "unit_system" in v:
            return unit_system(dec_int(v["unit_system"]))
        if "fourterm" in v:
            ft = self.get(v["fourterm"], "fourterm")
            return {"A": ft.a_sys, "L1": ft.l1_sys, "L0": ft.l0_sys, "B": ft.b_sys}[v["term"]]
        nerve = self.get(v["nerve"], "nerve")
        if "constant" in v:
            return CoefficientSystem.constant(nerve, self.get(v["constant"], "group"))
        return system_from_json(v, nerve)

    def _build_hom(self, v) -> GroupHom:
        src, tgt = self.get(v["source"], "group"), self.get(v["target"], "group")
        return GroupHom(src, tgt, matrix_from_json(v["matrix"], src.dim))

    def _build_system_map(self, v) -> SystemMap:
        """``{"source", "target"}`` plus a ``"constant"`` matrix and/or per-face ``"components"``."""
        src, tgt = self.get(v["source"], "system"), self.get(v["target"], "system")
        rows = {f: v["constant"] for f in src.nerve.faces} if "constant" in v else {}
        rows.update({tuple(e["face"]): e["matrix"] for e in v.get("components", [])})
        missing = sorted(set(src.nerve.faces) - set(rows))
        if missing:
            raise FormatError(f"system map has no matrix on faces {missing}")
        return SystemMap(src, tgt, {f: GroupHom(src.group_at(f), tgt.group_at(f), matrix_from_json(m, src.group_at(f).dim))
                                    for f, m in rows.items()})

    def _build_cochain(self, v) -> Cochain:
        sys = self.get(v["system"], "system")
        p = int(v["degree"])
        if "generator" in v:
            gens = cohomology(sys, p).generators()
            k = int(v["generator"])
            if not 0 <= k < len(gens):
                raise JobError(f"H^{p} has {len(gens)} generators, no generator {k}")
            return gens[k]
        if "class" in v:
            h = cohomology(sys, p)
            return h.representative(h.group.element(dec_ints(v["class"])))
        return cochain_from_json(v, sys)

    def _build_fourterm(self, v) -> FourTermComplex:
        if "library" in v:
            lib = load_library()
            if v["library"] not in lib:
                raise JobError(f"no library complex {v['library']!r}")
            return lib[v["library"]][0]
        return complex_from_json(v)

    def _build_rational_function(self, v) -> RationalFunction:
        return RationalFunction.from_coeffs(dec_int(v["p"]), dec_ints(v["num"]), dec_ints(v.get("den", [1])))

    def _build_place(self, v) -> Place:
        return place_from_json(dec_int(v["p"]), v["place"])

    def _build_divisor(self, v) -> Divisor:
        if "of" in v:
            return divisor(self.get(v["of"], "rational_function"))
        p = dec_int(v["p"])
        return Divisor(p, {place_from_json(p, pl): dec_int(n) for pl, n in v.get("terms", [])})


# ---- tasks --------------------------------------------------------------------------

def _class_json(x: GroupElement) -> dict:
    return {"coords": element_to_json(x), "order": x.order(), "group": group_to_json(x.parent)}


def op_cohomology(r: Resolver, a: dict, rng) -> dict:
    h = cohomology(r.get(a["system"], "system"), int(a["degree"]))
    return {
        "group": group_to_json(h.group),
        "invariant_factors": list(h.group.invariant_factors),
        "free_rank": h.group.free_rank,
        "order": h.group.order(),
        "generators": [cochain_to_json(g, skip_zero=True) for g in h.generators()],
    }


def op_cup(r: Resolver, a: dict, rng) -> dict:
    x, y = r.get(a["a"], "cochain"), r.get(a["b"], "cochain")
    c = cup(x, y)
    out = {"cocycle": cochain_to_json(c, skip_zero=True)}
    if c.degree <= 2 and x.is_cocycle() and y.is_cocycle():
        cls = cohomology(c.system, c.degree).class_of(c)
        out.update({"class": _class_json(cls), "class_order": cls.order(), "zero": cls.is_zero()})
    return out


def op_lift(r: Resolver, a: dict, rng) -> dict:
    p, q = r.get(a["p"], "cochain"), r.get(a["q"], "cochain")
    rep = heisenberg_gerbe(p.system, q.system, p, q)
    out = {
        "cocycle": cochain_to_json(rep.cocycle, skip_zero=True),
        "class": _class_json(rep.cohomology_class),
        "class_order": rep.cohomology_class.order(),
        "cup_class": _class_json(rep.cup_class),
        "equals_cup": rep.equals_cup,
        "trivial": rep.trivial,
    }
    if rep.witness is not None:
        out["witness"] = cochain_to_json(rep.witness, skip_zero=True)
    return out


def op_is_coboundary(r: Resolver, a: dict, rng) -> dict:
    w = is_coboundary(r.get(a["cochain"], "cochain"))
    out = {"coboundary": w is not None}
    if w is not None:
        out["witness"] = cochain_to_json(w, skip_zero=True)
    return out


def op_heisenberg_axioms(r: Resolver, a: dict, rng) -> dict:
    h = HeisenbergGroup(r.get(a["a"], "group"), r.get(a["b"], "group"))
    if h.order() is None:
        raise FormatError("exhaustive checks need finite groups")
    elems = list(h.elements())
    assoc = all(h.mul(h.mul(x, y), z) == h.mul(x, h.mul(y, z)) for x, y, z in itertools.product(elems, repeat=3))
    inv = all(h.mul(x, h.inv(x)) == h.identity() == h.mul(h.inv(x), x) for x in elems)
    return {"order": h.order(), "associative": assoc, "inverses": inv}


def op_d2(r: Resolver, a: dict, rng) -> dict:
    ft = r.get(a["complex"], "fourterm")
    betas = [r.get(a["section"], "cochain")] if "section" in a else global_sections(ft)
    classes = [d2(ft, b).cohomology_class for b in betas]
    return {
        "target_group": group_to_json(cohomology(ft.a_sys, 2).group),
        "classes": [_class_json(c) for c in classes],
        "nonzero": any(not c.is_zero() for c in classes),
        "matches_composite": all(d2_matches_composite(ft, b) for b in betas),
    }


def op_fiber_groupoid(r: Resolver, a: dict, rng) -> dict:
    ft = r.get(a["complex"], "fourterm")
    beta = r.get(a["section"], "cochain") if "section" in a else global_sections(ft)[0]
    return fiber_groupoid_report(ft, beta, tuple(a["face"]))


def op_dk_verify(r: Resolver, a: dict, rng) -> dict:
    groups = [r.get(g, "group") for g in a["groups"]]
    aw_bad, dk_bad, checked = [], [], 0
    for ga, gb in itertools.product([g for g in groups if g.is_finite], repeat=2):
        c, h = aw_cup(ga, gb), HeisenbergGroup(ga, gb)
        for x, x2, y, y2 in itertools.product(list(ga.elements()), list(ga.elements()),
                                              list(gb.elements()), list(gb.elements())):
            checked += 1
            if c(bar_simplex(ga, x, x2), bar_simplex(gb, y, y2)) != h.cocycle(x, y, x2, y2):
                aw_bad.append(f"{ga} x {gb}")
                break
    for m in groups:
        for i in (1, 2):
            hom = dold_kan_homology(m, i)
            if any(g != (m if n == i else FgAbGroup()) for n, g in hom.items()):
                dk_bad.append(f"K({m}, {i})")
    return {"aw_pairs_checked": checked, "aw_matches": not aw_bad, "dold_kan": not dk_bad,
            "failures": aw_bad + dk_bad}


def op_aw_cup(r: Resolver, a: dict, rng) -> dict:
    ga, gb = r.get(a["a"], "group"), r.get(a["b"], "group")
    x, x2 = (ga.element(dec_ints(c)) for c in a["x"])
    y, y2 = (gb.element(dec_ints(c)) for c in a["y"])
    val = aw_cup(ga, gb)(bar_simplex(ga, x, x2), bar_simplex(gb, y, y2))
    ref = HeisenbergGroup(ga, gb).cocycle(x, y, x2, y2)
    return {"value": element_to_json(val), "heisenberg_cocycle": element_to_json(ref), "equal": val == ref,
            "group": group_to_json(tensor(ga, gb).group)}


def op_ord(r: Resolver, a: dict, rng) -> dict:
    return {"ord": ord_at(r.get(a["place"], "place"), r.get(a["f"], "rational_function"))}


def op_tame(r: Resolver, a: dict, rng) -> dict:
    v = r.get(a["place"], "place")
    s = tame_symbol(v, r.get(a["f"], "rational_function"), r.get(a["g"], "rational_function"))
    return {"value": s.to_json(), "residue_degree": v.degree, "norm": s.norm()}


def op_reciprocity(r: Resolver, a: dict, rng) -> dict:
    return weil_reciprocity(r.get(a["f"], "rational_function"), r.get(a["g"], "rational_function")).to_json()


def op_reciprocity_battery(r: Resolver, a: dict, rng) -> dict:
    primes = [dec_int(p) for p in a.get("primes", [2, 3, 5])]
    pairs, deg = int(a.get("pairs", 100)), int(a.get("max_degree", 4))
    fails = 0
    for k in range(pairs):
        p = primes[k % len(primes)]
        if not weil_reciprocity(random_rational_function(rng, p, deg), random_rational_function(rng, p, deg)).holds:
            fails += 1
    return {"pairs": pairs, "failures": fails, "holds": fails == 0}


def op_divisor(r: Resolver, a: dict, rng) -> dict:
    d = divisor(r.get(a["f"], "rational_function"))
    return {"divisor": d.to_json(), "degree": d.degree}


def op_torsor_cocycle(r: Resolver, a: dict, rng) -> dict:
    return divisor_torsor_cocycle(r.get(a["divisor"], "divisor")).to_json()


OPS: dict[str, Callable[[Resolver, dict, random.Random], dict]] = {
    "cohomology": op_cohomology,
    "cup": op_cup,
    "lift": op_lift,
    "is_coboundary": op_is_coboundary,
    "heisenberg_axioms": op_heisenberg_axioms,
    "d2": op_d2,
    "fiber_groupoid": op_fiber_groupoid,
    "dk_verify": op_dk_verify,
    "aw_cup": op_aw_cup,
    "ord": op_ord,
    "tame": op_tame,
    "reciprocity": op_reciprocity,
    "reciprocity_battery": op_reciprocity_battery,
    "divisor": op_divisor,
    "torsor_cocycle": op_torsor_cocycle,
}


def _normalize(x):
    return json.loads(json.dumps(x, sort_keys=True))


def compare(expect: dict, result: dict) -> list[dict]:
    """Mismatches between an expectation block and a result."""
    out = []
    for key, want in sorted(expect.items()):
        if key not in result:
            out.append({"key": key, "expected": want, "actual": None})
        elif _normalize(result[key]) != _normalize(want):
            out.append({"key": key, "expected": want, "actual": result[key]})
    return out


def run_task(resolver: Resolver, task: dict, index: int, seed: int) -> dict:
    """Run one task; its random stream depends only on the seed and its position."""
    entry = {"name": task["name"], "op": task["op"]}
    rng = random.Random(seed * 100_003 + index)
    try:
        result = OPS[task["op"]](resolver, task.get("args", {}), rng)
    except JobError:
        raise
    except ValueError as e:
        entry.update({"status": "error", "error": f"{type(e).__name__}: {e}"})
        return entry
    except Exception as e:  # invariant breach inside the library
        entry.update({"status": "internal_error", "error": f"{type(e).__name__}: {e}"})
        return entry
    entry["result"] = _normalize(result)
    if "expect" in task:
        mism = compare(task["expect"], result)
        entry["status"] = "fail" if mism else "pass"
        if mism:
            entry["mismatches"] = _normalize(mism)
    else:
        entry["status"] = "computed"
    return entry


_WORKER: dict = {}


def _worker_init(job: dict):
    _WORKER["job"], _WORKER["resolver"] = job, Resolver(job)


def _worker_run(args: tuple[int, int]) -> dict:
    index, seed = args
    return run_task(_WORKER["resolver"], _WORKER["job"]["tasks"][index], index, seed)


def _check_refs(resolver: Resolver, task: dict):
    # a bare string argument must name a definition or be a group or nerve spec
    for val in task.get("args", {}).values():
        if not isinstance(val, str) or val in resolver.defs:
            continue
        try:
            parse_group_spec(val)
        except FormatError:
            try:
                parse_nerve_spec(val)
            except ValueError:
                raise JobError(f"task {task['name']!r}: unknown reference {val!r}") from None


def run_job(job: dict, seed: int | None = None, jobs: int = 1, fallback_seed: int = 0) -> dict:
    """Validate, resolve every definition, run the tasks; the report keeps the job-file order.

    An explicit ``seed`` wins over the job's own ``seed`` field, which wins over ``fallback_seed``.
    """
    validate_job(job)
    if seed is None:
        seed = dec_int(job["seed"]) if "seed" in job else fallback_seed
    resolver = Resolver(job)
    try:
        resolver.check_all()
    except ValueError as e:
        raise JobError(f"invalid definition: {type(e).__name__}: {e}") from None
    tasks = job["tasks"]
    for t in tasks:
        _check_refs(resolver, t)
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs, initializer=_worker_init, initargs=(job,)) as pool:
            entries = list(pool.map(_worker_run, [(i, seed) for i in range(len(tasks))]))
    else:
        entries = [run_task(resolver, t, i, seed) for i, t in enumerate(tasks)]
    counts = {s: sum(1 for e in entries if e["status"] == s)
              for s in ("pass", "fail", "computed", "error", "internal_error")}
    return {"job": job.get("name", ""), "seed": seed, "tasks": entries, "summary": counts}


def exit_code(report: dict) -> int:
    s = report["summary"]
    if s["internal_error"]:
        return EXIT_INTERNAL
    return EXIT_FAIL if s["fail"] or s["error"] else EXIT_OK
