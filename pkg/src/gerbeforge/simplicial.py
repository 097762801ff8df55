"""Low-degree Dold–Kan and Alexander–Whitney checks.

``K(M, i)_n`` is a direct sum of copies of ``M`` indexed by the monotone
surjections ``s : [n] -> [i]``. Since ``M[i]`` has zero differential, the
face ``d_k`` sends the summand ``s`` to the summand ``s o delta_k`` when that
composite is still surjective and to zero otherwise; the degeneracy
``s_k`` sends ``s`` to ``s o sigma_k``. A surjection is stored as the tuple
of its values ``(s(0), ..., s(n))``, so precomposition with ``delta_k``
deletes entry ``k`` and precomposition with ``sigma_k`` repeats it.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

from .groups import (
    FgAbGroup,
    GroupElement,
    GroupHom,
    IntMatrix,
    direct_sum,
    homology_lattice,
    preimage,
    tensor,
    vstack,
)

MAX_LEVEL = 4


class SimplicialError(ValueError):
    pass


@lru_cache(maxsize=None)
def surjections(n: int, i: int) -> tuple[tuple[int, ...], ...]:
    """Monotone surjections ``[n] -> [i]`` in lexicographic order."""
    out = []
    for vals in itertools.product(range(i + 1), repeat=n + 1):
        if all(a <= b for a, b in zip(vals, vals[1:])) and set(vals) == set(range(i + 1)):
            out.append(vals)
    return tuple(out)


@dataclass
class SimplicialAbelianGroup:
    """Levels ``0..max_level`` with faces ``d[(n, k)] : X_n -> X_(n-1)`` and
    degeneracies ``s[(n, k)] : X_n -> X_(n+1)``."""

    levels: list[FgAbGroup]
    d: dict[tuple[int, int], GroupHom]
    s: dict[tuple[int, int], GroupHom]
    summands: list[tuple] = field(default_factory=list)

    @property
    def max_level(self) -> int:
        return len(self.levels) - 1

    def identity_failures(self) -> list[str]:
        """Every simplicial identity that fails, as readable strings."""
        bad = []
        top = self.max_level

        def eq(lhs, rhs, label):
            if lhs != rhs:
                bad.append(label)

        for n in range(2, top + 1):
            for i in range(n):
                for j in range(i + 1, n + 1):
                    eq(self.d[(n - 1, i)] @ self.d[(n, j)], self.d[(n - 1, j - 1)] @ self.d[(n, i)],
                       f"d{i} d{j} = d{j - 1} d{i} at level {n}")
        for n in range(0, top):
            ident = GroupHom.identity(self.levels[n])
            for j in range(n + 1):
                sj = self.s[(n, j)]
                eq(self.d[(n + 1, j)] @ sj, ident, f"d{j} s{j} = id at level {n}")
                eq(self.d[(n + 1, j + 1)] @ sj, ident, f"d{j + 1} s{j} = id at level {n}")
                for i in range(n + 2):
                    if i < j:
                        eq(self.d[(n + 1, i)] @ sj, self.s[(n - 1, j - 1)] @ self.d[(n, i)],
                           f"d{i} s{j} = s{j - 1} d{i} at level {n}")
                    elif i > j + 1:
                        eq(self.d[(n + 1, i)] @ sj, self.s[(n - 1, j)] @ self.d[(n, i - 1)],
                           f"d{i} s{j} = s{j} d{i - 1} at level {n}")
        for n in range(0, top - 1):
            for i in range(n + 1):
                for j in range(i, n + 1):
                    eq(self.s[(n + 1, i)] @ self.s[(n, j)], self.s[(n + 1, j + 1)] @ self.s[(n, i)],
                       f"s{i} s{j} = s{j + 1} s{i} at level {n}")
        return bad


def _summand_hom(src_idx, tgt_idx, src: FgAbGroup, tgt: FgAbGroup, m: FgAbGroup, rule) -> GroupHom:
    """Hom between sums of copies of ``m`` sending summand ``s`` to ``rule(s)`` (or to zero)."""
    ds, dt = direct_sum(*([m] * len(src_idx))), direct_sum(*([m] * len(tgt_idx)))
    pos = {s: k for k, s in enumerate(tgt_idx)}
    images = []
    for g in src.gens():
        parts = [m.zero() for _ in tgt_idx]
        for s, x in zip(src_idx, ds.split(g) if src_idx else []):
            t = rule(s)
            if t is not None and t in pos:
                parts[pos[t]] = parts[pos[t]] + x
        images.append(dt.combine(parts) if tgt_idx else tgt.zero())
    return GroupHom.from_images(src, tgt, images)


def km(m: FgAbGroup, i: int, max_level: int = MAX_LEVEL) -> SimplicialAbelianGroup:
    """The Eilenberg–MacLane simplicial group ``K(m, i)`` through ``max_level``."""
    if i not in (1, 2):
        raise SimplicialError(f"K(M, {i}) is not supported; use i in (1, 2)")
    if not 0 <= max_level <= MAX_LEVEL:
        raise SimplicialError(f"levels above {MAX_LEVEL} are not supported")
    idx = [surjections(n, i) for n in range(max_level + 2)]
    groups = [direct_sum(*([m] * len(ix))).group if ix else FgAbGroup() for ix in idx]
    d, s = {}, {}
    for n in range(1, max_level + 1):
        for k in range(n + 1):
            def face(t, k=k):
                u = t[:k] + t[k + 1:]
                return u if set(u) == set(range(i + 1)) else None
            d[(n, k)] = _summand_hom(idx[n], idx[n - 1], groups[n], groups[n - 1], m, face)
    for n in range(0, max_level):
        for k in range(n + 1):
            s[(n, k)] = _summand_hom(idx[n], idx[n + 1], groups[n], groups[n + 1], m,
                                     lambda t, k=k: t[:k + 1] + t[k:])
    return SimplicialAbelianGroup(groups[:max_level + 1], d, s, [idx[n] for n in range(max_level + 1)])


def constant_simplicial(m: FgAbGroup, max_level: int = MAX_LEVEL) -> SimplicialAbelianGroup:
    ident = GroupHom.identity(m)
    d = {(n, k): ident for n in range(1, max_level + 1) for k in range(n + 1)}
    s = {(n, k): ident for n in range(0, max_level) for k in range(n + 1)}
    return SimplicialAbelianGroup([m] * (max_level + 1), d, s)


@dataclass
class NormalizedComplex:
    """``N_n = ∩_{k>0} ker d_k`` with differential ``d_0``; ``inclusions[n] : N_n -> X_n``."""

    groups: list[FgAbGroup]
    inclusions: list[GroupHom]
    differentials: dict[int, GroupHom]
    homology: dict[int, FgAbGroup]


def _stacked(x: SimplicialAbelianGroup, n: int, ks) -> tuple[IntMatrix, list[int]]:
    mats = [x.d[(n, k)].matrix for k in ks]
    moduli = [q for _ in ks for q in x.levels[n - 1].moduli]
    return vstack(mats) if mats else IntMatrix.zeros(0, x.levels[n].dim), moduli


def normalized_complex(x: SimplicialAbelianGroup) -> NormalizedComplex:
    """The normalized chain complex and its homology below the top level."""
    top = x.max_level
    incs = []
    for n in range(top + 1):
        if n == 0:
            incs.append(GroupHom.identity(x.levels[0]))
            continue
        mat, mod = _stacked(x, n, range(1, n + 1))
        sq = homology_lattice(x.levels[n].moduli, mat, mod)
        incs.append(GroupHom.from_images(sq.group, x.levels[n], [x.levels[n].element(sq.lift(g)) for g in sq.group.gens()]))
    groups = [h.source for h in incs]
    diffs = {}
    for n in range(1, top + 1):
        into = x.d[(n, 0)] @ incs[n]
        # d_0 of a normalized chain is normalized; factor through N_(n-1)
        images = []
        for g in groups[n].gens():
            y = preimage(incs[n - 1], into(g))
            if y is None:
                raise SimplicialError(f"d0 leaves the normalized subgroup at level {n}")
            images.append(y)
        diffs[n] = GroupHom.from_images(groups[n], groups[n - 1], images)
    homology = {}
    for n in range(top):
        moduli = list(x.levels[n].moduli)
        if n == 0:
            outgoing, out_mod = None, None
        else:
            outgoing, out_mod = _stacked(x, n, range(0, n + 1))
        incoming_hom = x.d[(n + 1, 0)] @ incs[n + 1]
        homology[n] = homology_lattice(moduli, outgoing, out_mod, incoming_hom.matrix).group
    return NormalizedComplex(groups, incs, diffs, homology)


def dold_kan_homology(m: FgAbGroup, i: int, max_level: int = MAX_LEVEL) -> dict[int, FgAbGroup]:
    return normalized_complex(km(m, i, max_level)).homology


# ---- the level-2 cup map ------------------------------------------------------

def bar_simplex(grp: FgAbGroup, g1: GroupElement, g2: GroupElement) -> GroupElement:
    """The 2-simplex of ``K(grp, 1)`` with faces ``d0 = g2``, ``d1 = g1 + g2``, ``d2 = g1``."""
    idx = surjections(2, 1)
    parts = {(0, 0, 1): g2, (0, 1, 1): g1}
    return direct_sum(*([grp] * len(idx))).combine([parts[s] for s in idx])


def bar_components(grp: FgAbGroup, x: GroupElement) -> tuple[GroupElement, GroupElement]:
    idx = surjections(2, 1)
    parts = dict(zip(idx, direct_sum(*([grp] * len(idx))).split(x)))
    return parts[(0, 1, 1)], parts[(0, 0, 1)]


def front_face(x: SimplicialAbelianGroup, n: int, p: int) -> GroupHom:
    """``d_(p+1) ... d_n`` : keeps vertices ``0..p``."""
    h = GroupHom.identity(x.levels[n])
    for k in range(n, p, -1):
        h = x.d[(k, k)] @ h
    return h


def back_face(x: SimplicialAbelianGroup, n: int, p: int) -> GroupHom:
    """``d_0^p`` : keeps vertices ``p..n``."""
    h = GroupHom.identity(x.levels[n])
    for k in range(n, n - p, -1):
        h = x.d[(k, 0)] @ h
    return h


def aw_cup(a_grp: FgAbGroup, b_grp: FgAbGroup):
    """Level-2 map ``(K(A,1) x K(B,1))_2 -> K(A(x)B, 2)_2 = A(x)B``.

    Sums the Alexander–Whitney terms ``front_p(x) (x) back_(2-p)(y)``;
    the ``p = 0`` and ``p = 2`` terms pass through ``K(-, 1)_0 = 0``, and
    the middle term identifies ``K(A,1)_1 (x) K(B,1)_1 = A (x) B`` with
    level 2 of ``K(A(x)B, 2)``.
    """
    ka, kb = km(a_grp, 1, 2), km(b_grp, 1, 2)
    target = tensor(a_grp, b_grp)
    one_a, one_b = direct_sum(a_grp).projections[0], direct_sum(b_grp).projections[0]
    terms = []
    for p in range(3):
        fa, bb = front_face(ka, 2, p), back_face(kb, 2, p)
        if fa.target.is_trivial or bb.target.is_trivial:
            continue
        # level 1 of K(-,1) is a single copy of the group
        terms.append((one_a @ fa, one_b @ bb))

    def cup(x: GroupElement, y: GroupElement) -> GroupElement:
        ka.levels[2]._check(x)
        kb.levels[2]._check(y)
        total = target.group.zero()
        for fa, bb in terms:
            total = total + target.pair(fa(x), bb(y))
        return total

    cup.source_levels = (ka.levels[2], kb.levels[2])
    return cup
