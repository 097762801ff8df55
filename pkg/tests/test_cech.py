import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gerbeforge.cech import (
    CechError,
    Cochain,
    CoefficientSystem,
    CoverNerve,
    SystemMap,
    acyclic_embedding,
    baer_sum,
    cohomology,
    cokernel_system,
    cone_system,
    cup,
    differential,
    direct_sum_system,
    image_system,
    is_coboundary,
    random_cocycle,
    random_system,
    supported_system,
    tensor_map,
    tensor_system,
)
from gerbeforge.groups import FgAbGroup, GroupHom, IntMatrix, Z, cyclic

from gerbeforge.groups import random_hom

NERVES = {
    "simplex3": CoverNerve.full_simplex(3),
    "simplex5": CoverNerve.full_simplex(5),
    "circle3": CoverNerve.circle(3),
    "circle5": CoverNerve.circle(5),
    "sphere": CoverNerve.sphere(),
    "rp2": CoverNerve.projective_plane(),
}
FINITE = [cyclic(2), cyclic(3), cyclic(4), FgAbGroup((2, 2))]


def brute_cohomology_order(system, p):
    """|ker δ_p| / |im δ_(p-1)| by enumerating all cochains."""
    def cochains(q):
        faces = system.nerve.faces_of_degree(q)
        for combo in itertools.product(*(list(system.group_at(f).elements()) for f in faces)):
            yield Cochain(system, q, dict(zip(faces, combo)))

    cocycles = sum(1 for c in cochains(p) if not system.nerve.faces_of_degree(p + 1) or differential(c).is_zero())
    if p == 0:
        return cocycles
    boundaries = {tuple(differential(b).vector()) for b in cochains(p - 1)}
    assert cocycles % len(boundaries) == 0
    return cocycles // len(boundaries)


# ---- nerves and systems ---------------------------------------------------

def test_nerve_downward_closed():
    n = CoverNerve(4, [(0, 1, 2)])
    assert (0, 2) in n and (1, 2) in n and (3,) in n
    assert (2, 3) not in n
    assert n.maximal_faces() == [(0, 1, 2), (3,)]


def test_nerve_rejects_bad_faces():
    with pytest.raises(CechError):
        CoverNerve(3, [(0, 5)])
    with pytest.raises(CechError):
        CoverNerve(5, [(0, 1, 2, 3, 4)])
    with pytest.raises(CechError):
        CoverNerve(0)


def test_rp2_is_a_closed_surface():
    n = NERVES["rp2"]
    tris = n.faces_of_degree(2)
    assert len(tris) == 10 and len(n.faces_of_degree(1)) == 15
    for e in n.faces_of_degree(1):
        assert sum(set(e) <= set(t) for t in tris) == 2


def test_system_functoriality_enforced():
    nerve = CoverNerve.full_simplex(3)
    g = cyclic(4)
    ident = GroupHom.identity(g)
    twice = GroupHom(g, g, IntMatrix.from_rows([[3]]))
    maps = {}
    for s, t in [((0,), (0, 1)), ((1,), (0, 1)), ((0,), (0, 2)), ((2,), (0, 2)), ((1,), (1, 2)), ((2,), (1, 2)),
                 ((0, 1), (0, 1, 2)), ((0, 2), (0, 1, 2)), ((1, 2), (0, 1, 2))]:
        maps[(s, t)] = ident
    maps[((0,), (0, 1))] = twice
    with pytest.raises(CechError):
        CoefficientSystem(nerve, {f: g for f in nerve.faces}, maps)
    del maps[((0,), (0, 1))]
    with pytest.raises(CechError):
        CoefficientSystem(nerve, {f: g for f in nerve.faces}, maps)


@pytest.mark.parametrize("seed", range(8))
def test_restrictions_compose_on_all_chains(seed):
    rng = random.Random(seed)
    sys = random_system(rng, rng.choice(list(NERVES.values())))
    faces = sorted(sys.nerve.faces)
    for s, t, v in itertools.product(faces, repeat=3):
        if set(s) <= set(t) <= set(v):
            assert sys.restrict(t, v) @ sys.restrict(s, t) == sys.restrict(s, v)
    for f in faces:
        assert sys.restrict(f, f) == GroupHom.identity(sys.group_at(f))


def test_system_map_naturality_enforced():
    nerve = NERVES["circle3"]
    src = CoefficientSystem.constant(nerve, Z)
    tgt = supported_system(nerve, Z, [0, 1])
    comps = {f: GroupHom.identity(Z) if set(f) <= {0, 1} else GroupHom.zero(Z, tgt.group_at(f))
             for f in nerve.faces}
    SystemMap(src, tgt, comps)
    comps[(1,)] = GroupHom.zero(Z, Z)
    with pytest.raises(CechError):
        SystemMap(src, tgt, comps)


# ---- differential ---------------------------------------------------------

def test_constant_zero_cochain_differential():
    sys = CoefficientSystem.constant(NERVES["simplex3"], cyclic(5))
    c = Cochain(sys, 0, {(i,): sys.group_at((i,)).element([3]) for i in range(3)})
    assert differential(c).is_zero()


def test_circle_degree_one_differential_is_zero():
    sys = CoefficientSystem.constant(NERVES["circle3"], Z)
    rng = random.Random(0)
    for _ in range(10):
        c = Cochain.random(sys, 1, rng)
        assert differential(c).is_zero()
        assert c.is_cocycle()


def test_differential_formula_by_hand():
    sys = CoefficientSystem.constant(CoverNerve.full_simplex(3), Z)
    c = Cochain(sys, 1, {(0, 1): Z.element([2]), (0, 2): Z.element([7]), (1, 2): Z.element([4])})
    # (δc)_012 = c_12 - c_02 + c_01
    assert differential(c)[(0, 1, 2)] == Z.element([4 - 7 + 2])
    x = Cochain(sys, 0, {(0,): Z.element([1]), (1,): Z.element([5]), (2,): Z.element([2])})
    assert differential(x)[(0, 1)] == Z.element([5 - 1])


@pytest.mark.parametrize("seed", range(25))
def test_delta_squared_is_zero(seed):
    rng = random.Random(seed)
    nerve = rng.choice(list(NERVES.values()))
    sys = random_system(rng, nerve, rng.randint(1, 3))
    for p in (0, 1):
        c = Cochain.random(sys, p, rng)
        assert differential(differential(c)).is_zero()


def test_differential_degree_overflow():
    sys = CoefficientSystem.constant(NERVES["simplex5"], Z)
    with pytest.raises(CechError):
        differential(Cochain.zero(sys, 3))


# ---- cohomology -----------------------------------------------------------

@pytest.mark.parametrize("nerve,group,expected", [
    ("simplex3", Z, ["Z", "0", "0"]),
    ("simplex5", cyclic(6), ["Z/6", "0", "0"]),
    ("circle3", Z, ["Z", "Z", "0"]),
    ("circle3", cyclic(5), ["Z/5", "Z/5", "0"]),
    ("circle5", cyclic(4), ["Z/4", "Z/4", "0"]),
    ("sphere", Z, ["Z", "0", "Z"]),
    ("sphere", cyclic(3), ["Z/3", "0", "Z/3"]),
    ("rp2", Z, ["Z", "0", "Z/2"]),
    ("rp2", cyclic(2), ["Z/2", "Z/2", "Z/2"]),
    ("rp2", cyclic(3), ["Z/3", "0", "0"]),
])
def test_constant_cohomology(nerve, group, expected):
    sys = CoefficientSystem.constant(NERVES[nerve], group)
    assert [str(cohomology(sys, p).group) for p in range(3)] == expected


def test_torus_cohomology():
    sys = CoefficientSystem.constant(CoverNerve.torus(), Z)
    assert [str(cohomology(sys, p).group) for p in range(3)] == ["Z", "Z^2", "Z"]


def test_circle_differential_snf():
    # δ_0 on the circle is the 3x3 signed incidence matrix; its SNF is diag(1, 1, 0)
    from gerbeforge.cech import differential_matrix
    from gerbeforge.groups import smith_normal_form

    sys = CoefficientSystem.constant(NERVES["circle3"], Z)
    _, d, _ = smith_normal_form(differential_matrix(sys, 0))
    assert d.diagonal_entries() == [1, 1, 0]


@pytest.mark.parametrize("seed", range(12))
def test_cohomology_order_matches_enumeration(seed):
    rng = random.Random(seed)
    nerve = rng.choice([NERVES["circle3"], NERVES["simplex3"], CoverNerve(4, [(0, 1, 2), (2, 3), (0, 3)])])
    parts = []
    for _ in range(rng.randint(1, 2)):
        g = rng.choice(FINITE[:3])
        parts.append(rng.choice([
            CoefficientSystem.constant(nerve, g),
            supported_system(nerve, g, rng.sample(range(nerve.index_count), 2)),
            cone_system(CoefficientSystem.constant(nerve, g), 0)[0],
        ]))
    sys = direct_sum_system(*parts)[0]
    for p in (0, 1, 2):
        total = 1
        for f in nerve.faces_of_degree(p) + (nerve.faces_of_degree(p - 1) if p else []):
            total *= sys.group_at(f).order()
        if total > 20_000:
            continue
        assert cohomology(sys, p).group.order() == brute_cohomology_order(sys, p)


def test_sphere_z2_h2_by_enumeration():
    sys = CoefficientSystem.constant(NERVES["sphere"], cyclic(2))
    assert brute_cohomology_order(sys, 2) == 2 == cohomology(sys, 2).group.order()


@pytest.mark.parametrize("seed", range(10))
def test_class_and_representative_roundtrip(seed):
    rng = random.Random(seed)
    sys = random_system(rng, rng.choice(list(NERVES.values())))
    for p in (0, 1, 2):
        h = cohomology(sys, p)
        for _ in range(5):
            x = h.group.random_element(rng)
            rep = h.representative(x)
            assert rep.is_cocycle()
            assert h.class_of(rep) == x
            if p:
                moved = rep + differential(Cochain.random(sys, p - 1, rng))
                assert h.class_of(moved) == x


def test_class_of_rejects_non_cocycle():
    sys = CoefficientSystem.constant(NERVES["simplex3"], Z)
    c = Cochain(sys, 1, {(0, 1): Z.element([1])})
    with pytest.raises(CechError):
        cohomology(sys, 1).class_of(c)


def test_cone_and_acyclic_embedding():
    for name in ("sphere", "rp2", "circle5"):
        sys = CoefficientSystem.constant(NERVES[name], cyclic(2))
        for v in range(NERVES[name].index_count):
            cone, _ = cone_system(sys, v)
            assert cohomology(cone, 1).group.is_trivial and cohomology(cone, 2).group.is_trivial
        big, emb = acyclic_embedding(sys)
        assert all(emb[f].kernel().is_trivial for f in sys.nerve.faces)
        quotient, _ = cokernel_system(emb)
        # the quotient shifts cohomology down by one
        assert cohomology(quotient, 1).group == cohomology(sys, 2).group
        assert cohomology(quotient, 0).group.order() == cohomology(big, 0).group.order() // 2 * cohomology(sys, 1).group.order()


def test_image_system_factorizes():
    nerve = NERVES["circle3"]
    double = GroupHom(Z, Z, IntMatrix.from_rows([[2]]))
    phi = SystemMap.constant(nerve, double)
    c, epi, mono = image_system(phi)
    assert all(c.group_at(f) == Z for f in nerve.faces)
    for f in nerve.faces:
        assert mono[f] @ epi[f] == phi[f]


# ---- coboundary witnesses -------------------------------------------------

def test_zero_cocycle_has_zero_witness():
    sys = CoefficientSystem.constant(NERVES["circle3"], Z)
    w = is_coboundary(Cochain.zero(sys, 1))
    assert w is not None and differential(w).is_zero()


def test_circle_generator_has_no_witness():
    sys = CoefficientSystem.constant(NERVES["circle3"], Z)
    gen = cohomology(sys, 1).generators()[0]
    assert is_coboundary(gen) is None
    c = Cochain(sys, 1, {(0, 1): Z.element([1])})
    assert is_coboundary(c) is None


@pytest.mark.parametrize("seed", range(15))
def test_coboundaries_have_witnesses(seed):
    rng = random.Random(seed)
    sys = random_system(rng, rng.choice(list(NERVES.values())))
    for p in (1, 2):
        b = Cochain.random(sys, p - 1, rng)
        w = is_coboundary(differential(b))
        assert w is not None
        assert differential(w) == differential(b)


@pytest.mark.parametrize("seed", range(10))
def test_witness_iff_zero_class(seed):
    rng = random.Random(100 + seed)
    sys = random_system(rng, rng.choice([NERVES["rp2"], NERVES["sphere"], NERVES["circle5"]]))
    for p in (1, 2):
        c = random_cocycle(sys, p, rng)
        zero = cohomology(sys, p).class_of(c).is_zero()
        assert (is_coboundary(c) is not None) == zero


def test_is_coboundary_rejects_non_cocycle():
    sys = CoefficientSystem.constant(NERVES["simplex3"], Z)
    with pytest.raises(CechError):
        is_coboundary(Cochain(sys, 1, {(0, 1): Z.element([1])}))
    with pytest.raises(CechError):
        is_coboundary(Cochain.zero(sys, 0))


# ---- cup and Baer sum -----------------------------------------------------

def test_cup_with_zero_is_zero():
    sys = CoefficientSystem.constant(NERVES["sphere"], cyclic(4))
    rng = random.Random(1)
    b = Cochain.random(sys, 1, rng)
    assert cup(Cochain.zero(sys, 1), b).is_zero()
    assert cup(b, Cochain.zero(sys, 1)).is_zero()


def test_cup_formula_single_triangle():
    nerve = CoverNerve(3, [(0, 1, 2)])
    sys = CoefficientSystem.constant(nerve, cyclic(2))
    one = cyclic(2).element([1])
    a = Cochain(sys, 1, {(0, 1): one, (0, 2): one})
    b = Cochain(sys, 1, {(1, 2): one, (0, 2): one})
    c = cup(a, b)
    assert c[(0, 1, 2)] == c.system.group_at((0, 1, 2)).element([1])
    assert c.system == tensor_system(sys, sys)


def test_cup_uses_restrictions_and_tensor():
    nerve = CoverNerve(3, [(0, 1, 2)])
    sa = CoefficientSystem.constant(nerve, cyclic(4))
    sb = CoefficientSystem.constant(nerve, cyclic(6))
    a = Cochain(sa, 1, {(0, 1): cyclic(4).element([3])})
    b = Cochain(sb, 1, {(1, 2): cyclic(6).element([5])})
    # 3 (x) 5 in Z/4 (x) Z/6 = Z/2 is 15 mod 2 = 1
    assert cup(a, b)[(0, 1, 2)] == cyclic(2).element([1])


@pytest.mark.parametrize("seed", range(12))
def test_cup_of_cocycles_is_cocycle(seed):
    rng = random.Random(seed)
    nerve = rng.choice([NERVES["rp2"], NERVES["sphere"], NERVES["simplex5"], CoverNerve.torus()])
    sa, sb = random_system(rng, nerve, 1), random_system(rng, nerve, 1)
    a, b = random_cocycle(sa, 1, rng), random_cocycle(sb, 1, rng)
    assert cup(a, b).is_cocycle()


@pytest.mark.parametrize("seed", range(12))
def test_cup_leibniz(seed):
    rng = random.Random(seed)
    nerve = rng.choice([NERVES["rp2"], NERVES["simplex5"], NERVES["sphere"]])
    sa, sb = random_system(rng, nerve, 1), random_system(rng, nerve, 1)
    for p, q in [(0, 1), (1, 0), (1, 1), (0, 2), (2, 0)]:
        a, b = Cochain.random(sa, p, rng), Cochain.random(sb, q, rng)
        lhs = differential(cup(a, b))
        rhs = cup(differential(a), b) + (-1) ** p * cup(a, differential(b))
        assert lhs == rhs


@pytest.mark.parametrize("seed", range(8))
def test_cup_with_coboundary_is_coboundary(seed):
    rng = random.Random(seed)
    nerve = rng.choice([NERVES["rp2"], NERVES["sphere"], CoverNerve.torus()])
    sa, sb = random_system(rng, nerve, 1), random_system(rng, nerve, 1)
    x = Cochain.random(sa, 0, rng)
    b = random_cocycle(sb, 1, rng)
    assert is_coboundary(cup(differential(x), b)) is not None
    assert is_coboundary(cup(b, differential(Cochain.random(sa, 0, rng)))) is not None


@pytest.mark.parametrize("seed", range(8))
def test_cup_bilinear_on_classes(seed):
    rng = random.Random(seed)
    nerve = rng.choice([NERVES["rp2"], CoverNerve.torus()])
    sa, sb = random_system(rng, nerve, 1), random_system(rng, nerve, 1)
    a, a2, b = random_cocycle(sa, 1, rng), random_cocycle(sa, 1, rng), random_cocycle(sb, 1, rng)
    diff = cup(baer_sum(a, a2), b) - (cup(a, b) + cup(a2, b))
    assert is_coboundary(diff) is not None


def test_rp2_generator_squares_nontrivially():
    sys = CoefficientSystem.constant(NERVES["rp2"], cyclic(2))
    (x,) = cohomology(sys, 1).generators()
    sq = cup(x, x)
    assert not cohomology(sq.system, 2).class_of(sq).is_zero()


def test_torus_cup_is_antisymmetric_pairing():
    sys = CoefficientSystem.constant(CoverNerve.torus(), Z)
    a, b = cohomology(sys, 1).generators()
    h2 = cohomology(tensor_system(sys, sys), 2)
    ab, ba = h2.class_of(cup(a, b)), h2.class_of(cup(b, a))
    assert ab == -ba and abs(ab.coords[0]) == 1
    assert h2.class_of(cup(a, a)).is_zero()


def test_cup_nerve_mismatch():
    a = Cochain.zero(CoefficientSystem.constant(NERVES["circle3"], Z), 1)
    b = Cochain.zero(CoefficientSystem.constant(NERVES["sphere"], Z), 1)
    with pytest.raises(CechError):
        cup(a, b)


def test_cup_natural_under_system_maps():
    rng = random.Random(4)
    nerve = NERVES["rp2"]
    for _ in range(10):
        a_grp, b_grp = rng.choice(FINITE), rng.choice(FINITE)
        f = SystemMap.constant(nerve, random_hom(rng, a_grp, rng.choice(FINITE)))
        g = SystemMap.constant(nerve, random_hom(rng, b_grp, rng.choice(FINITE)))
        a = Cochain.random(f.source, 1, rng)
        b = Cochain.random(g.source, 1, rng)
        assert tensor_map(f, g).push(cup(a, b)) == cup(f.push(a), g.push(b))


def test_baer_sum_examples():
    rng = random.Random(3)
    sys = CoefficientSystem.constant(NERVES["circle3"], cyclic(4))
    p = random_cocycle(sys, 1, rng)
    assert baer_sum(p, Cochain.zero(sys, 1)) == p
    assert cohomology(sys, 1).class_of(baer_sum(p, -p)).is_zero()
    with pytest.raises(CechError):
        baer_sum(p, Cochain.zero(CoefficientSystem.constant(NERVES["circle3"], cyclic(2)), 1))


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000))
def test_baer_sum_adds_classes(seed):
    rng = random.Random(seed)
    sys = random_system(rng, rng.choice([NERVES["circle5"], NERVES["rp2"]]))
    h = cohomology(sys, 1)
    p, q = random_cocycle(sys, 1, rng), random_cocycle(sys, 1, rng)
    assert h.class_of(baer_sum(p, q)) == h.class_of(p) + h.class_of(q)


def test_trivial_factor_gives_trivial_cup():
    rng = random.Random(8)
    nerve = CoverNerve.torus()
    sa, sb = CoefficientSystem.constant(nerve, Z), CoefficientSystem.constant(nerve, cyclic(3))
    for _ in range(5):
        a = differential(Cochain.random(sa, 0, rng))
        b = random_cocycle(sb, 1, rng)
        assert is_coboundary(a) is not None
        assert is_coboundary(cup(a, b)) is not None
