"""The acceptance battery behind ``gerbeforge selftest``.

Each check takes a seeded ``random.Random`` and returns whether it passed,
how many cases it examined and a small dictionary of details. Reports
contain no timing unless asked, so equal seeds give identical bytes.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field

import numpy as np

from .cech import (
    Cochain,
    CoefficientSystem,
    CoverNerve,
    SystemMap,
    cohomology,
    cup,
    differential,
    is_coboundary,
    random_cocycle,
    random_system,
    tensor_map,
)
from .fourterm import d2, d2_matches_composite, global_sections
from .groups import TRIVIAL, FgAbGroup, Z, cyclic, random_hom
from .heisenberg import HeisenbergGroup, poonen_rains
from .library import load_library
from .lifting import HeisenbergExtension, boundary1, heisenberg_gerbe
from .simplicial import aw_cup, bar_simplex, dold_kan_homology
from .symbols import (
    Place,
    check_torsor_additivity,
    divisor,
    random_divisor,
    random_rational_function,
    tame_symbol,
    weil_reciprocity,
)

# all abelian groups of order <= 8 and <= 9, up to isomorphism
ORDER_8 = [cyclic(2), cyclic(3), cyclic(4), FgAbGroup((2, 2)), cyclic(5), cyclic(6), cyclic(7), cyclic(8),
           FgAbGroup((2, 4)), FgAbGroup((2, 2, 2))]
ORDER_9 = [TRIVIAL] + ORDER_8 + [cyclic(9), FgAbGroup((3, 3))]
AXIOM_GROUPS = [cyclic(2), cyclic(3), cyclic(4), FgAbGroup((2, 2)), cyclic(6)]
COEFFICIENTS = [cyclic(2), cyclic(3), cyclic(4), FgAbGroup((2, 2)), Z]


@dataclass
class CriterionResult:
    number: int
    title: str
    passed: bool
    cases: int
    limit_seconds: float | None
    details: dict = field(default_factory=dict)
    seconds: float = 0.0
    error: str | None = None

    @property
    def within_limit(self) -> bool:
        return self.limit_seconds is None or self.seconds < self.limit_seconds

    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return f"[{mark}] {self.number}. {self.title} ({self.cases} cases)"

    def to_json(self, timing: bool = False) -> dict:
        out = {"criterion": self.number, "title": self.title, "passed": self.passed, "cases": self.cases,
               "details": self.details}
        if self.error:
            out["error"] = self.error
        if timing:
            out["seconds"] = round(self.seconds, 3)
            out["limit_seconds"] = self.limit_seconds
        return out


# ---- 1: Heisenberg group law -------------------------------------------------------

def check_heisenberg_axioms(rng: random.Random) -> tuple[bool, int, dict]:
    """Associativity through a multiplication table and the inverse law, for every pair."""
    cases, bad = 0, []
    for a, b in itertools.product(AXIOM_GROUPS, repeat=2):
        h = HeisenbergGroup(a, b)
        elems = list(h.elements())
        n = len(elems)
        table = np.empty((n, n), dtype=np.int64)
        for i, x in enumerate(elems):
            for j, y in enumerate(elems):
                table[i, j] = h.index_of(h.mul(x, y))
        # (xy)z against x(yz) for all triples at once
        assoc = bool(np.array_equal(table[table, :], table[:, table]))
        e = h.index_of(h.identity())
        inverse = all(
            table[i, h.index_of(h.inv(x))] == e == table[h.index_of(h.inv(x)), i]
            and h.inv(x) == h.element(-x.a, -x.b, -x.t + h.tensor.pair(x.a, x.b))
            for i, x in enumerate(elems))
        unit = bool(np.all(table[e, :] == np.arange(n)) and np.all(table[:, e] == np.arange(n)))
        cases += n ** 3
        if not (assoc and inverse and unit):
            bad.append(f"{a} x {b}")
    return not bad, cases, {"pairs": len(AXIOM_GROUPS) ** 2, "failures": bad}


# ---- 2: boundary of the Heisenberg extension is the cup product ------------------------------

CUP_NERVES = [
    ("circle3", CoverNerve.circle(3)), ("circle5", CoverNerve.circle(5)),
    ("simplex3", CoverNerve.full_simplex(3)), ("simplex4", CoverNerve.full_simplex(4)),
    ("sphere", CoverNerve.sphere()), ("projective_plane", CoverNerve.projective_plane()),
    ("torus", CoverNerve.torus()),
]


def check_boundary_is_cup(rng: random.Random, per_nerve: int = 3) -> tuple[bool, int, dict]:
    cases, bad, nonzero = 0, [], 0
    for name, nerve in CUP_NERVES:
        for k in range(per_nerve):
            a_sys, b_sys = random_system(rng, nerve, 1), random_system(rng, nerve, 1)
            p, q = random_cocycle(a_sys, 1, rng), random_cocycle(b_sys, 1, rng)
            ext = HeisenbergExtension(a_sys, b_sys)
            out = boundary1(ext, HeisenbergExtension.pair_cochain(p, q))
            expected = cup(p, q)
            cases += 1
            if out != expected:
                bad.append(f"{name}#{k}")
            elif is_coboundary(out) is None:
                nonzero += 1
    return not bad, cases, {"configurations": cases, "nontrivial_classes": nonzero, "failures": bad}


# ---- 3: functoriality and triviality ----------------------------------------------

FUNCTOR_NERVES = [CoverNerve.circle(3), CoverNerve.circle(4), CoverNerve.full_simplex(3), CoverNerve.sphere(),
                  CoverNerve.projective_plane()]


def check_functoriality_and_triviality(rng: random.Random, cases_each: int = 60) -> tuple[bool, int, dict]:
    finite = COEFFICIENTS[:-1]
    bad_f, bad_t = [], []
    for k in range(cases_each):
        nerve = rng.choice(FUNCTOR_NERVES)
        a, b = rng.choice(COEFFICIENTS), rng.choice(COEFFICIENTS)
        f = SystemMap.constant(nerve, random_hom(rng, a, rng.choice(finite)))
        g = SystemMap.constant(nerve, random_hom(rng, b, rng.choice(finite)))
        p, q = random_cocycle(f.source, 1, rng), random_cocycle(g.source, 1, rng)
        before = heisenberg_gerbe(f.source, g.source, p, q).cocycle
        after = heisenberg_gerbe(f.target, g.target, f.push(p), g.push(q)).cocycle
        if tensor_map(f, g).push(before) != after:
            bad_f.append(k)
    for k in range(cases_each):
        nerve = rng.choice(FUNCTOR_NERVES)
        a_sys, b_sys = random_system(rng, nerve, 1), random_system(rng, nerve, 1)
        p, q = random_cocycle(a_sys, 1, rng), random_cocycle(b_sys, 1, rng)
        # make one side a coboundary
        if k % 2:
            p = differential(Cochain.random(a_sys, 0, rng))
        else:
            q = differential(Cochain.random(b_sys, 0, rng))
        rep = heisenberg_gerbe(a_sys, b_sys, p, q)
        if rep.witness is None or differential(rep.witness) != rep.cocycle:
            bad_t.append(k)
    ok = not bad_f and not bad_t
    return ok, 2 * cases_each, {"functoriality_failures": bad_f, "triviality_failures": bad_t}


# ---- 4: Alexander-Whitney and Dold-Kan ------------------------------------------------

def check_aw_and_dold_kan(rng: random.Random) -> tuple[bool, int, dict]:
    cases, bad = 0, []
    for a, b in itertools.product(ORDER_8, repeat=2):
        c = aw_cup(a, b)
        h = HeisenbergGroup(a, b)
        xs = [(x, x2, bar_simplex(a, x, x2)) for x in a.elements() for x2 in a.elements()]
        ys = [(y, y2, bar_simplex(b, y, y2)) for y in b.elements() for y2 in b.elements()]
        for (x, x2, u), (y, y2, v) in itertools.product(xs, ys):
            cases += 1
            if c(u, v) != h.cocycle(x, y, x2, y2):
                bad.append(f"{a} x {b}")
                break
    dk_bad = []
    for m in ORDER_8 + [Z, FgAbGroup((2,), 1)]:
        for i in (1, 2):
            hom = dold_kan_homology(m, i)
            cases += 1
            if any(g != (m if n == i else TRIVIAL) for n, g in hom.items()):
                dk_bad.append(f"K({m}, {i})")
    return not bad and not dk_bad, cases, {"aw_failures": bad, "dold_kan_failures": dk_bad}


# ---- 5: iterated boundary of four-term complexes ------------------------------------

def check_four_term(rng: random.Random, extra_sections: int = 2) -> tuple[bool, int, dict]:
    lib = load_library(strict_only=True)
    cases, bad, nonzero_seen = 0, [], []
    for name, (ft, meta) in lib.items():
        h0 = cohomology(ft.b_sys, 0)
        betas = global_sections(ft) + [h0.representative(h0.group.random_element(rng, 2))
                                       for _ in range(extra_sections)]
        classes = []
        for beta in betas:
            cases += 1
            if not d2_matches_composite(ft, beta):
                bad.append(f"{name}: composite")
            classes.append(d2(ft, beta).cohomology_class)
        any_nonzero = any(not c.is_zero() for c in classes)
        if any_nonzero:
            nonzero_seen.append(name)
        if meta["expect_nonzero"] is not None and any_nonzero != meta["expect_nonzero"]:
            bad.append(f"{name}: expected nonzero={meta['expect_nonzero']}")
        for b1, b2 in zip(betas, betas[1:]):
            cases += 1
            lhs = d2(ft, b1 + b2).cohomology_class
            if lhs != d2(ft, b1).cohomology_class + d2(ft, b2).cohomology_class:
                bad.append(f"{name}: additivity")
    ok = not bad and len(lib) >= 10 and bool(nonzero_seen)
    return ok, cases, {"complexes": len(lib), "nonzero": nonzero_seen, "failures": bad}


# ---- 6: Cech fixtures ----------------------------------------------------------------

def check_cech_fixtures(rng: random.Random) -> tuple[bool, int, dict]:
    bad, cases = [], 0
    for size in (3, 4, 5):
        nerve = CoverNerve.circle(size)
        for g in [Z] + [cyclic(n) for n in (2, 3, 4, 6)]:
            cases += 1
            if cohomology(CoefficientSystem.constant(nerve, g), 1).group != g:
                bad.append(f"H^1(circle{size}, {g})")
    for size in (2, 3, 4, 5):
        nerve = CoverNerve.full_simplex(size)
        for g in COEFFICIENTS + [cyclic(6)]:
            sys = CoefficientSystem.constant(nerve, g)
            for p in (1, 2):
                cases += 1
                if not cohomology(sys, p).group.is_trivial:
                    bad.append(f"H^{p}(simplex{size}, {g})")
    return not bad, cases, {"failures": bad}


# ---- 7: tame symbols, reciprocity, divisors -------------------------------------------

def _places_for(*fs):
    out = {Place.infinity(fs[0].p)}
    for f in fs:
        out |= set(divisor(f).support)
    return sorted(out)


def check_symbols(rng: random.Random, pairs: int = 500, divisor_pairs: int = 100) -> tuple[bool, int, dict]:
    counts = {"steinberg": 0, "reciprocity": 0, "degree_zero": 0, "torsor": 0}
    bad = []
    for k in range(pairs):
        p = (2, 3, 5)[k % 3]
        f, g = random_rational_function(rng, p), random_rational_function(rng, p)
        if not weil_reciprocity(f, g).holds:
            bad.append(f"reciprocity #{k}")
        counts["reciprocity"] += 1
        for h in (f, g):
            if divisor(h).degree != 0:
                bad.append(f"degree #{k}")
            counts["degree_zero"] += 1
            if h.is_constant() and h.num.lead in (0, 1):
                continue
            if not all(tame_symbol(v, h, 1 - h).is_one() for v in _places_for(h, 1 - h)):
                bad.append(f"steinberg #{k}")
            counts["steinberg"] += 1
    for k in range(divisor_pairs):
        p = (2, 3, 5)[k % 3]
        d, e = random_divisor(rng, p), random_divisor(rng, p)
        if not check_torsor_additivity(d, e):
            bad.append(f"torsor #{k}")
        counts["torsor"] += 1
    return not bad, sum(counts.values()), {"counts": counts, "failures": bad[:20]}


# ---- 8: the Poonen-Rains group as a diagonal pullback ----------------------------------

def check_poonen_rains(rng: random.Random) -> tuple[bool, int, dict]:
    """The cocycle read off the law of U(A) equals the Heisenberg cocycle on the diagonal."""
    bad, cases = [], 0
    for a in ORDER_9:
        ua = poonen_rains(a)
        h = ua.heisenberg
        elems = list(a.elements())
        for x, y in itertools.product(elems, repeat=2):
            cases += 1
            # s(x) s(y) s(x + y)^(-1) with s(a) = (a, 0), in both groups
            su = ua.mul(ua.mul(ua.element(x), ua.element(y)), ua.inv(ua.element(x + y)))
            sh = h.mul(h.mul(h.section(x, x), h.section(y, y)), h.inv(h.section(x + y, x + y)))
            ok = (su.a.is_zero() and sh.a.is_zero() and sh.b.is_zero() and su.t == sh.t
                  and su.t == ua.cocycle(x, y) == h.cocycle(x, x, y, y))
            u, v = ua.element(x), ua.element(y, h.tensor_group.random_element(rng))
            ok = ok and ua.to_heisenberg(u * v) == ua.to_heisenberg(u) * ua.to_heisenberg(v)
            if not ok:
                bad.append(str(a))
                break
    return not bad, cases, {"groups": len(ORDER_9), "failures": bad}


CRITERIA = {
    1: ("Heisenberg group law: associativity and inverses", check_heisenberg_axioms, 10.0),
    2: ("boundary of the Heisenberg extension equals the cup cocycle", check_boundary_is_cup, 30.0),
    3: ("functoriality and triviality of the Heisenberg gerbe", check_functoriality_and_triviality, 60.0),
    4: ("Alexander-Whitney cup equals the Heisenberg cocycle; Dold-Kan round trip", check_aw_and_dold_kan, 30.0),
    5: ("iterated boundary equals the composite of single boundaries", check_four_term, 30.0),
    6: ("Cech fixtures on circle and simplex nerves", check_cech_fixtures, 5.0),
    7: ("Steinberg, Weil reciprocity, divisor degrees, divisor torsors", check_symbols, 60.0),
    8: ("Poonen-Rains cocycle is the diagonal pullback", check_poonen_rains, 5.0),
}


def run_criterion(number: int, seed: int) -> CriterionResult:
    title, check, limit = CRITERIA[number]
    rng = random.Random(seed * 1000 + number)
    start = time.perf_counter()
    try:
        passed, cases, details = check(rng)
        error = None
    except Exception as e:  # recorded, not fatal
        passed, cases, details, error = False, 0, {}, f"{type(e).__name__}: {e}"
    return CriterionResult(number, title, passed, cases, limit, details, time.perf_counter() - start, error)


def run_acceptance(seed: int, only=None) -> list[CriterionResult]:
    return [run_criterion(n, seed) for n in sorted(only or CRITERIA)]


def acceptance_report(results: list[CriterionResult], seed: int, timing: bool = False) -> dict:
    return {
        "seed": seed,
        "passed": all(r.passed for r in results),
        "criteria": [r.to_json(timing) for r in results],
    }
