import itertools
import random
from math import comb

import pytest

from gerbeforge.groups import FgAbGroup, GroupHom, Z, cyclic, direct_sum
from gerbeforge.heisenberg import HeisenbergGroup
from gerbeforge.simplicial import (
    SimplicialError,
    aw_cup,
    back_face,
    bar_components,
    bar_simplex,
    constant_simplicial,
    dold_kan_homology,
    front_face,
    km,
    normalized_complex,
    surjections,
)

BATTERY = [cyclic(2), cyclic(3), cyclic(4), FgAbGroup((2, 2)), cyclic(6), FgAbGroup((2, 4)), cyclic(8),
           FgAbGroup((2, 2, 2)), Z, FgAbGroup((3,), 1)]
UP_TO_8 = [g for g in BATTERY if g.is_finite]


@pytest.mark.parametrize("n,i", [(n, i) for n in range(6) for i in (1, 2)])
def test_surjection_count(n, i):
    s = surjections(n, i)
    assert len(s) == comb(n, i)
    assert list(s) == sorted(s)
    for t in s:
        assert t[0] == 0 and t[-1] == i


def test_level_examples():
    m = cyclic(5)
    k2 = km(m, 2)
    assert k2.levels[2] == m
    assert k2.levels[0].is_trivial and k2.levels[1].is_trivial
    k1 = km(m, 1)
    assert k1.levels[2] == FgAbGroup((5, 5))
    assert k1.levels[0].is_trivial
    assert surjections(2, 1) == ((0, 0, 1), (0, 1, 1))


def test_km_rejects_unsupported():
    with pytest.raises(SimplicialError):
        km(Z, 3)
    with pytest.raises(SimplicialError):
        km(Z, 1, 5)


@pytest.mark.parametrize("m", BATTERY)
@pytest.mark.parametrize("i", [1, 2])
def test_simplicial_identities(m, i):
    assert km(m, i).identity_failures() == []


def test_identity_check_catches_a_broken_face():
    x = km(cyclic(3), 1)
    x.d[(2, 1)] = GroupHom.zero(x.levels[2], x.levels[1])
    assert x.identity_failures()


@pytest.mark.parametrize("m", BATTERY)
@pytest.mark.parametrize("i", [1, 2])
def test_dold_kan_roundtrip(m, i):
    hom = dold_kan_homology(m, i)
    for n, h in hom.items():
        assert h == (m if n == i else FgAbGroup())


@pytest.mark.parametrize("m", [cyclic(3), Z, FgAbGroup((2, 4))])
def test_normalized_groups(m):
    # N_n(K(M, i)) is M in degree i and zero elsewhere
    for i in (1, 2):
        nc = normalized_complex(km(m, i))
        for n, g in enumerate(nc.groups):
            assert g == (m if n == i else FgAbGroup())
        for n, d in nc.differentials.items():
            assert d.is_zero()


def test_constant_simplicial_group():
    m = FgAbGroup((2,), 1)
    x = constant_simplicial(m)
    assert x.identity_failures() == []
    hom = normalized_complex(x).homology
    assert hom[0] == m and all(h.is_trivial for n, h in hom.items() if n > 0)


@pytest.mark.parametrize("m", [cyclic(4), FgAbGroup((2, 2)), Z])
def test_bar_faces(m):
    x = km(m, 1, 2)
    rng = random.Random(0)
    for _ in range(20):
        g1, g2 = m.random_element(rng), m.random_element(rng)
        s = bar_simplex(m, g1, g2)
        one = direct_sum(m).projections[0]
        assert one(x.d[(2, 0)](s)) == g2
        assert one(x.d[(2, 1)](s)) == g1 + g2
        assert one(x.d[(2, 2)](s)) == g1
        assert bar_components(m, s) == (g1, g2)


def test_front_and_back_faces():
    x = km(cyclic(7), 2, 4)
    assert front_face(x, 4, 4) == GroupHom.identity(x.levels[4])
    assert front_face(x, 4, 2) == x.d[(3, 3)] @ x.d[(4, 4)]
    assert back_face(x, 4, 2) == x.d[(3, 0)] @ x.d[(4, 0)]


def test_aw_cup_examples():
    z2 = cyclic(2)
    cup = aw_cup(z2, z2)
    one, zero = z2.element([1]), z2.zero()
    for a, b in itertools.product([zero, one], repeat=2):
        assert cup(bar_simplex(z2, a, zero), bar_simplex(z2, b, zero)).is_zero()
    assert cup(bar_simplex(z2, one, zero), bar_simplex(z2, zero, one)) == z2.element([1])
    assert cup(bar_simplex(z2, one, one), bar_simplex(z2, one, one)) == z2.element([1])


@pytest.mark.parametrize("a", UP_TO_8)
@pytest.mark.parametrize("b", UP_TO_8)
def test_aw_cup_is_heisenberg_cocycle_exhaustive(a, b):
    cup = aw_cup(a, b)
    h = HeisenbergGroup(a, b)
    xs = {(p, p2): bar_simplex(a, p, p2) for p in a.elements() for p2 in a.elements()}
    ys = {(q, q2): bar_simplex(b, q, q2) for q in b.elements() for q2 in b.elements()}
    for (p, p2), x in xs.items():
        for (q, q2), y in ys.items():
            assert cup(x, y) == h.cocycle(p, q, p2, q2)


def test_aw_cup_randomized_with_free_parts():
    rng = random.Random(4)
    for a, b in [(FgAbGroup((2, 12), 1), FgAbGroup((4,), 2)), (Z, FgAbGroup((3, 9)))]:
        cup = aw_cup(a, b)
        h = HeisenbergGroup(a, b)
        for _ in range(200):
            p, p2, q, q2 = a.random_element(rng), a.random_element(rng), b.random_element(rng), b.random_element(rng)
            assert cup(bar_simplex(a, p, p2), bar_simplex(b, q, q2)) == h.cocycle(p, q, p2, q2)
