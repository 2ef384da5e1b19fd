from typing import List, Tuple

import numpy as np
from hypothesis import settings
from hypothesis.strategies import (
    DrawFn,
    composite,
    integers,
    lists,
    permutations,
    sampled_from,
)

from deepgraph import AbelianP, Graph, GroupHandle

settings.register_profile("ci", deadline=None, max_examples=50)
settings.load_profile("ci")


small_primes = sampled_from([2, 3, 5])
seeds = integers(min_value=0, max_value=2**32 - 1)


@composite
def abelian_p_specs(draw: DrawFn, max_order: int = 243) -> AbelianP:
    p = draw(small_primes)
    ranks = draw(lists(integers(min_value=1, max_value=3), min_size=1, max_size=3))
    ranks = sorted(ranks, reverse=True)
    while len(ranks) > 1 and p ** sum(ranks) > max_order:
        ranks.pop()
    while p ** sum(ranks) > max_order:
        ranks[0] -= 1
    return AbelianP(p, tuple(ranks))


@composite
def elements(draw: DrawFn, G: GroupHandle) -> int:
    return draw(integers(min_value=0, max_value=G.size - 1))


@composite
def element_pairs(draw: DrawFn, G: GroupHandle) -> Tuple[int, int]:
    return draw(elements(G)), draw(elements(G))


@composite
def perms(draw: DrawFn, n: int) -> Tuple[int, ...]:
    out: List[int] = draw(permutations(range(n)))
    return tuple(out)


@composite
def graphs(draw: DrawFn, max_n: int = 8) -> Graph:
    n = draw(integers(min_value=1, max_value=max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    keep = draw(lists(sampled_from([True, False]), min_size=len(pairs), max_size=len(pairs)))
    return Graph.from_edges(n, [e for e, k in zip(pairs, keep) if k])


def rng_for(seed: int) -> np.random.Generator:
    return np.random.default_rng(seed)
