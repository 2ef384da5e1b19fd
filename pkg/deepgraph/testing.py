"""
Parameter grids and named element sets shared by the verification suite and
the tests.
"""

from __future__ import annotations

import itertools
from typing import Iterator, List, Sequence, Tuple

import numpy as np

from .catalog import (
    Abelian,
    AbelianP,
    Alternating,
    CoprimeProduct,
    Cyclic,
    Dihedral,
    GroupSpec,
    Heisenberg,
    Metacyclic,
    MetacyclicParams,
    PermutationGroup,
    Quaternion,
    Symmetric,
    Unsupported,
    build_group,
    multiplier_order,
    schur_cover_presentation,
)
from .config import ClaimGrid
from .fpgroup import Presentation
from .graph import Graph, enhanced_power_graph

Cycles = Tuple[Tuple[int, ...], ...]

# Induced 5-cycles, listed in cycle order.
S6_HOLE: Tuple[Cycles, ...] = (
    ((1, 2, 3),),
    ((4, 5, 6),),
    ((1, 2),),
    ((1, 2), (3, 4), (5, 6)),
    ((5, 6),),
)
A8_HOLE: Tuple[Cycles, ...] = (
    ((1, 2, 3),),
    ((4, 5, 6),),
    ((1, 7, 8),),
    ((2, 3, 4),),
    ((5, 6, 7),),
)


def elements_of(G: PermutationGroup, cycle_sets: Sequence[Cycles]) -> List[int]:
    return [G.from_cycles(*cycles) for cycles in cycle_sets]


def rank_tuples(max_ranks: Sequence[int]) -> Iterator[Tuple[int, ...]]:
    "Descending rank tuples bounded position-wise by `max_ranks`."
    for k in range(1, len(max_ranks) + 1):
        for ranks in itertools.product(*(range(1, r + 1) for r in max_ranks[:k])):
            if list(ranks) == sorted(ranks, reverse=True):
                yield tuple(ranks)


def abelian_grid(grid: ClaimGrid) -> List[AbelianP]:
    out = []
    for p in grid.primes:
        for ranks in rank_tuples(grid.max_ranks):
            spec = AbelianP(p, ranks)
            if spec.order <= grid.max_abelian_order:
                out.append(spec)
    return out


def mixed_abelian_grid(grid: ClaimGrid, max_order: int = 2000) -> List[Abelian]:
    "Abelian groups with two Sylow parts, ranks at most 2 in each."
    small = [s for s in abelian_grid(grid) if len(s.ranks) <= 2 and max(s.ranks) <= 2]
    out = []
    for a, b in itertools.combinations(small, 2):
        if a.p < b.p and a.order * b.order <= max_order:
            out.append(Abelian((a, b)))
    return out


def nilpotent_products(grid: ClaimGrid) -> List[CoprimeProduct]:
    "Non-abelian nilpotent groups built from catalog p-groups."
    h3 = Heisenberg(3, 1)
    return [
        CoprimeProduct((Dihedral(4), Cyclic(3))),
        CoprimeProduct((Dihedral(4), AbelianP(3, (1, 1)))),
        CoprimeProduct((Quaternion(2), Cyclic(9))),
        CoprimeProduct((h3, Cyclic(4))),
        CoprimeProduct((h3, AbelianP(2, (1, 1)))),
        CoprimeProduct((Dihedral(4), h3)),
    ]


def dihedral_grid(grid: ClaimGrid) -> List[Dihedral]:
    return [Dihedral(n) for n in range(3, grid.max_dihedral_n + 1)]


def quaternion_grid(grid: ClaimGrid) -> List[Quaternion]:
    return [Quaternion(n) for n in range(2, grid.max_quaternion_n + 1)]


def heisenberg_grid(grid: ClaimGrid) -> List[Heisenberg]:
    return [Heisenberg(p, k) for p, k in grid.heisenberg]


def extraspecial_grid() -> List[Tuple[GroupSpec, bool]]:
    "Extraspecial groups with whether their deep commuting graph is the enhanced power graph."
    return [
        (Dihedral(4), True),
        (Quaternion(2), True),
        (Heisenberg(3, 1), True),
        (Heisenberg(5, 1), True),
        (Metacyclic(MetacyclicParams.extraspecial(3)), False),
        (Metacyclic(MetacyclicParams.extraspecial(5)), False),
    ]


def catalog_grid(grid: ClaimGrid, max_order: int) -> List[GroupSpec]:
    "Every catalog group of the grids with order at most `max_order`."
    specs: List[GroupSpec] = [Cyclic(n) for n in (1, 2, 3, 4, 6, 7, 8, 9, 12, 15, 30)]
    specs += abelian_grid(grid) + mixed_abelian_grid(grid)
    specs += dihedral_grid(grid) + quaternion_grid(grid) + heisenberg_grid(grid)
    specs += [s for s, _ in extraspecial_grid() if isinstance(s, Metacyclic)]
    specs += [Symmetric(n) for n in range(3, grid.symmetric_full + 1)]
    specs += [Alternating(n) for n in range(3, grid.alternating_full + 1)]
    specs += nilpotent_products(grid)
    seen, out = set(), []
    for s in specs:
        if s.order <= max_order and s not in seen:
            seen.add(s)
            out.append(s)
    return out


def has_presentation(spec: GroupSpec) -> bool:
    try:
        return isinstance(schur_cover_presentation(spec), Presentation)
    except Unsupported:
        return False


def engine_grid(grid: ClaimGrid) -> List[GroupSpec]:
    "Groups with a presented cover of order at most `grid.max_cover_order`."
    specs: List[GroupSpec] = list(abelian_grid(grid))
    specs += [Dihedral(n) for n in range(4, grid.max_dihedral_n + 1, 2)]
    specs += heisenberg_grid(grid)
    specs += [Symmetric(n) for n in range(4, grid.symmetric_full + 1)]
    specs += [Alternating(n) for n in (6, 7)]
    return [
        s
        for s in specs
        if has_presentation(s) and s.order * multiplier_order(s) <= grid.max_cover_order
    ]


def heisenberg_k1_expected(p: int) -> Graph:
    "Deep commuting graph of $H_3(\\mathbb{Z}/p)$: `x ~ y` iff $\\langle x, y \\rangle$ is cyclic."
    return enhanced_power_graph(build_group(Heisenberg(p, 1)))


def small_graphs(max_n: int) -> Iterator[Graph]:
    "Every labelled graph on `1 .. max_n` vertices."
    for n in range(1, max_n + 1):
        pairs = list(itertools.combinations(range(n), 2))
        for mask in range(1 << len(pairs)):
            yield Graph.from_edges(n, [e for k, e in enumerate(pairs) if mask >> k & 1])


def disjoint_pair(n: int, rng: np.random.Generator) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """
    Two random permutations of `n` points with disjoint supports, each moving
    at least two points.
    """
    points = rng.permutation(n)
    cut = int(rng.integers(2, n - 1))
    out = []
    for block in (points[:cut], points[cut:]):
        perm = np.arange(n)
        size = int(rng.integers(2, block.shape[0] + 1))
        moved = block[:size]
        perm[moved] = moved[rng.permutation(size)]
        if (perm[moved] == moved).all():
            perm[moved] = np.roll(moved, 1)
        out.append(tuple(int(v) for v in perm))
    return out[0], out[1]
