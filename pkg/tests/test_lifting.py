import random

import pytest

from gerbeforge.cech import (
    Cochain,
    CoefficientSystem,
    CoverNerve,
    SystemMap,
    acyclic_embedding,
    cohomology,
    cokernel_system,
    cup,
    differential,
    is_coboundary,
    random_cocycle,
    tensor_map,
)
from gerbeforge.groups import GroupHom, IntMatrix, Z, cyclic
from gerbeforge.lifting import (
    AbelianExtension,
    HeisenbergExtension,
    LiftingError,
    NoLiftError,
    boundary0,
    boundary1,
    constant_heisenberg_search,
    heisenberg_gerbe,
)

from gerbeforge.cech import random_system

from test_cech import FINITE
from gerbeforge.groups import random_hom

SURFACES = [CoverNerve.projective_plane(), CoverNerve.sphere(), CoverNerve.torus(), CoverNerve.full_simplex(5)]


def random_shift(rng, ext):
    """A memoized random facewise function from base elements to the kernel."""
    table = {}

    def shift(face, g):
        key = (face, tuple(tuple(x.coords) for x in g) if isinstance(g, tuple) else tuple(g.coords))
        if key not in table:
            table[key] = ext.kernel.group_at(face).random_element(rng, 2)
        return table[key]

    return shift


def heis_inputs(rng, nerve=None):
    nerve = nerve or rng.choice(SURFACES)
    a_sys, b_sys = random_system(rng, nerve, 1), random_system(rng, nerve, 1)
    return a_sys, b_sys, random_cocycle(a_sys, 1, rng), random_cocycle(b_sys, 1, rng)


def test_trivial_base_cocycle_gives_zero():
    nerve = CoverNerve.projective_plane()
    a_sys = CoefficientSystem.constant(nerve, cyclic(2))
    ext = HeisenbergExtension(a_sys, a_sys)
    zero = Cochain.zero(a_sys, 1)
    assert boundary1(ext, HeisenbergExtension.pair_cochain(zero, zero)).is_zero()


@pytest.mark.parametrize("seed", range(20))
def test_heisenberg_boundary_is_cup_on_the_nose(seed):
    rng = random.Random(seed)
    a_sys, b_sys, p, q = heis_inputs(rng)
    ext = HeisenbergExtension(a_sys, b_sys)
    out = boundary1(ext, HeisenbergExtension.pair_cochain(p, q))
    assert out == cup(p, q)
    assert out.is_cocycle()


@pytest.mark.parametrize("seed", range(12))
def test_section_change_moves_by_coboundary(seed):
    rng = random.Random(seed)
    a_sys, b_sys, p, q = heis_inputs(rng, rng.choice(SURFACES[:2] + [CoverNerve.circle(5)]))
    plain = HeisenbergExtension(a_sys, b_sys)
    shifted = HeisenbergExtension(a_sys, b_sys, shift=random_shift(rng, plain))
    g = HeisenbergExtension.pair_cochain(p, q)
    c0, c1 = boundary1(plain, g), boundary1(shifted, g)
    assert c1.is_cocycle()
    w = is_coboundary(c1 - c0)
    assert w is not None and differential(w) == c1 - c0


def test_section_change_on_abelian_extension():
    rng = random.Random(3)
    nerve = CoverNerve.projective_plane()
    a_sys = CoefficientSystem.constant(nerve, cyclic(2))
    big, emb = acyclic_embedding(a_sys)
    quot, q = cokernel_system(emb)
    plain = AbelianExtension(emb, q)
    shifted = AbelianExtension(emb, q, shift=random_shift(rng, plain))
    for _ in range(4):
        g = random_cocycle(quot, 1, rng)
        c0, c1 = boundary1(plain, g.components), boundary1(shifted, g.components)
        assert is_coboundary(c1 - c0) is not None


def test_boundary1_rejects_non_cocycle():
    nerve = CoverNerve.full_simplex(3)
    sys = CoefficientSystem.constant(nerve, Z)
    ext = HeisenbergExtension(sys, sys)
    bad = Cochain(sys, 1, {(0, 1): Z.element([1])})
    with pytest.raises(LiftingError):
        boundary1(ext, HeisenbergExtension.pair_cochain(bad, Cochain.zero(sys, 1)))


@pytest.mark.parametrize("seed", range(8))
def test_boundary1_additive_in_each_slot(seed):
    rng = random.Random(seed)
    a_sys, b_sys, p, q = heis_inputs(rng, rng.choice(SURFACES[:3]))
    p2, q2 = random_cocycle(a_sys, 1, rng), random_cocycle(b_sys, 1, rng)
    ext = HeisenbergExtension(a_sys, b_sys)
    h2 = cohomology(ext.kernel, 2)

    def cls(x, y):
        return h2.class_of(boundary1(ext, HeisenbergExtension.pair_cochain(x, y)))

    assert cls(p + p2, q) == cls(p, q) + cls(p2, q)
    assert cls(p, q + q2) == cls(p, q) + cls(p, q2)


def test_heisenberg_boundary_is_central():
    rng = random.Random(1)
    a_sys, b_sys, p, q = heis_inputs(rng, CoverNerve.projective_plane())
    ext = HeisenbergExtension(a_sys, b_sys)
    out = boundary1(ext, HeisenbergExtension.pair_cochain(p, q))
    for f, t in out.components.items():
        h = ext.group_at(f)
        z = h.center(t)
        for _ in range(20):
            x = h.element(h.a_group.random_element(rng), h.b_group.random_element(rng),
                          h.tensor_group.random_element(rng))
            assert z * x == x * z


# ---- boundary0 -------------------------------------------------------------

def test_boundary0_of_identity_is_zero():
    nerve = CoverNerve.circle(4)
    sys = CoefficientSystem.constant(nerve, cyclic(2))
    ext = HeisenbergExtension(sys, sys)
    g0 = {(i,): ext.g_identity((i,)) for i in range(4)}
    assert boundary0(ext, g0).is_zero()


def test_boundary0_rejects_non_global_section():
    nerve = CoverNerve.circle(3)
    sys = CoefficientSystem.constant(nerve, cyclic(2))
    ext = HeisenbergExtension(sys, sys)
    one, zero = cyclic(2).element([1]), cyclic(2).zero()
    g0 = {(0,): (one, zero), (1,): (zero, zero), (2,): (zero, zero)}
    with pytest.raises(LiftingError):
        boundary0(ext, g0)


@pytest.mark.parametrize("seed", range(6))
def test_heisenberg_boundary0_vanishes_for_canonical_section(seed):
    rng = random.Random(seed)
    nerve = rng.choice([CoverNerve.circle(3), CoverNerve.circle(5), CoverNerve.projective_plane()])
    a_sys, b_sys = random_system(rng, nerve, 1), random_system(rng, nerve, 1)
    ext = HeisenbergExtension(a_sys, b_sys)
    ha, hb = cohomology(a_sys, 0), cohomology(b_sys, 0)
    ra = ha.representative(ha.group.random_element(rng))
    rb = hb.representative(hb.group.random_element(rng))
    g0 = {f: (ra[f], rb[f]) for f in nerve.faces_of_degree(0)}
    assert boundary0(ext, g0).is_zero()
    shifted = HeisenbergExtension(a_sys, b_sys, shift=random_shift(rng, ext))
    assert is_coboundary(boundary0(shifted, g0)) is not None


def test_exhaustive_search_finds_no_heisenberg_torsor_class():
    assert constant_heisenberg_search(CoverNerve.circle(3), cyclic(2)) == []


def circle_extension(n=2, opens=3):
    """``0 -> Z/n -> P -> P/(Z/n) -> 0`` with ``P`` acyclic on a circle nerve."""
    nerve = CoverNerve.circle(opens)
    a_sys = CoefficientSystem.constant(nerve, cyclic(n))
    big, emb = acyclic_embedding(a_sys)
    quot, q = cokernel_system(emb)
    return a_sys, AbelianExtension(emb, q), quot


def test_boundary0_nonzero_class_for_abelian_extension():
    a_sys, ext, quot = circle_extension()
    h0, h1 = cohomology(quot, 0), cohomology(a_sys, 1)
    classes = set()
    for x in h0.group.elements():
        g0 = h0.representative(x)
        c = boundary0(ext, g0.components)
        assert c.is_cocycle()
        classes.add(h1.class_of(c))
    # H^1(P) = 0 so the connecting map onto H^1(Z/2) = Z/2 is surjective
    assert classes == set(h1.group.elements()) and len(classes) == 2


def test_boundary0_is_coboundary_when_section_lifts():
    a_sys, ext, quot = circle_extension(4, 4)
    h0e = cohomology(ext.e_sys, 0)
    rng = random.Random(0)
    for _ in range(5):
        e = h0e.representative(h0e.group.random_element(rng))
        g0 = {f: ext.proj[f](x) for f, x in e.components.items()}
        assert is_coboundary(boundary0(ext, g0)) is not None


def test_abelian_extension_validation():
    nerve = CoverNerve.circle(3)
    double = SystemMap.constant(nerve, GroupHom(Z, Z, IntMatrix.from_rows([[2]])))
    mod4 = SystemMap.constant(nerve, GroupHom(Z, cyclic(4), IntMatrix.from_rows([[1]])))
    with pytest.raises(LiftingError):
        AbelianExtension(double, mod4)  # image 2Z, kernel 4Z
    mod2 = SystemMap.constant(nerve, GroupHom(Z, cyclic(2), IntMatrix.from_rows([[1]])))
    ext = AbelianExtension(double, mod2)
    assert ext.kernel == CoefficientSystem.constant(nerve, Z)
    assert ext.section((1,), cyclic(2).element([1])) == Z.element([1])


def test_non_surjective_extension_reports_missing_lift():
    nerve = CoverNerve.circle(3)
    double = SystemMap.constant(nerve, GroupHom(cyclic(2), cyclic(4), IntMatrix.from_rows([[2]])))
    halve = SystemMap.constant(nerve, GroupHom(cyclic(4), cyclic(4), IntMatrix.from_rows([[2]])))
    with pytest.raises(LiftingError):
        AbelianExtension(double, halve)
    ext = AbelianExtension(double, halve, require_surjective=False)
    one = cyclic(4).element([1])
    with pytest.raises(NoLiftError) as info:
        ext.section((0,), one)
    assert info.value.face == (0,)


def test_abelian_boundary1_is_connecting_isomorphism():
    # P acyclic makes H^1(P/A) -> H^2(A) an isomorphism
    rng = random.Random(5)
    nerve = CoverNerve.projective_plane()
    a_sys = CoefficientSystem.constant(nerve, cyclic(2))
    big, emb = acyclic_embedding(a_sys)
    quot, q = cokernel_system(emb)
    ext = AbelianExtension(emb, q)
    h1, h2 = cohomology(quot, 1), cohomology(a_sys, 2)
    assert h1.group == h2.group == cyclic(2)
    images = {h2.class_of(boundary1(ext, h1.representative(x).components)) for x in h1.group.elements()}
    assert len(images) == 2
    for _ in range(5):
        g, g2 = random_cocycle(quot, 1, rng), random_cocycle(quot, 1, rng)
        lhs = h2.class_of(boundary1(ext, (g + g2).components))
        assert lhs == h2.class_of(boundary1(ext, g.components)) + h2.class_of(boundary1(ext, g2.components))


# ---- Heisenberg gerbe report ------------------------------------------------

@pytest.mark.parametrize("seed", range(6))
def test_trivial_factor_gives_trivial_gerbe(seed):
    rng = random.Random(seed)
    a_sys, b_sys, p, _ = heis_inputs(rng, rng.choice(SURFACES[:3]))
    q = differential(Cochain.random(b_sys, 0, rng))
    rep = heisenberg_gerbe(a_sys, b_sys, p, q)
    assert rep.trivial and rep.cohomology_class.is_zero()
    assert differential(rep.witness) == rep.cocycle
    rep2 = heisenberg_gerbe(a_sys, b_sys, differential(Cochain.random(a_sys, 0, rng)), random_cocycle(b_sys, 1, rng))
    assert rep2.trivial


def test_circle_generators_gerbe_matches_cup():
    nerve = CoverNerve.circle(3)
    sys = CoefficientSystem.constant(nerve, cyclic(2))
    (x,) = cohomology(sys, 1).generators()
    rep = heisenberg_gerbe(sys, sys, x, x)
    assert rep.equals_cup and rep.cohomology_class == rep.cup_class
    # the circle nerve has no triple overlaps, so the class lives in H^2 = 0
    assert rep.cohomology_class.parent.is_trivial


def test_rp2_gerbe_is_nontrivial():
    nerve = CoverNerve.projective_plane()
    sys = CoefficientSystem.constant(nerve, cyclic(2))
    (x,) = cohomology(sys, 1).generators()
    rep = heisenberg_gerbe(sys, sys, x, x)
    assert rep.equals_cup and not rep.trivial and rep.witness is None
    assert rep.cohomology_class == rep.cup_class == cyclic(2).element([1])
    assert rep.summary()["class"] == [1]


@pytest.mark.parametrize("seed", range(10))
def test_gerbe_functorial(seed):
    rng = random.Random(seed)
    nerve = rng.choice(SURFACES[:3])
    a, b = rng.choice(FINITE + [Z]), rng.choice(FINITE + [Z])
    a2, b2 = rng.choice(FINITE), rng.choice(FINITE)
    f = SystemMap.constant(nerve, random_hom(rng, a, a2))
    g = SystemMap.constant(nerve, random_hom(rng, b, b2))
    p, q = random_cocycle(f.source, 1, rng), random_cocycle(g.source, 1, rng)
    before = heisenberg_gerbe(f.source, g.source, p, q).cocycle
    after = heisenberg_gerbe(f.target, g.target, f.push(p), g.push(q)).cocycle
    assert tensor_map(f, g).push(before) == after


def test_gerbe_input_validation():
    nerve = CoverNerve.full_simplex(3)
    sys = CoefficientSystem.constant(nerve, Z)
    bad = Cochain(sys, 1, {(0, 1): Z.element([1])})
    with pytest.raises(LiftingError):
        heisenberg_gerbe(sys, sys, bad, Cochain.zero(sys, 1))
    other = CoefficientSystem.constant(nerve, cyclic(2))
    with pytest.raises(LiftingError):
        heisenberg_gerbe(sys, sys, Cochain.zero(other, 1), Cochain.zero(sys, 1))
