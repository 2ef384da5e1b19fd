"""
Graph analytics: degrees and Eulerian tests, dominant vertices and reduced
graphs, components and diameters, closed-twin contraction, odd hole and
antihole search, exact clique and chromatic numbers, perfectness verdicts and
the universality embedding.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import numpy.typing as npt
from numba import njit, prange
from typing_extensions import Literal

from .catalog import (
    Abelian,
    AbelianP,
    CoprimeProduct,
    Dihedral,
    GroupSpec,
    Heisenberg,
    ProductGroup,
    build_group,
    format_spec,
)
from .config import Budget, Config
from .graph import Graph, UnknownVertex, edge_compare, induced_subgraph, unpack_rows
from .operators import CapExceeded, bits, smallest_primes

log = logging.getLogger(__name__)

Vertices = npt.NDArray[np.int64]


class EmbeddingError(RuntimeError):
    "Exception raised when an embedding fails its induced-subgraph check."
    pass


# ## Degrees, dominant vertices, components


@dataclass(frozen=True)
class BasicStats:
    degrees: Vertices
    is_complete: bool
    is_eulerian: bool


def basic_stats(g: Graph) -> BasicStats:
    """
    Degrees, completeness and the Eulerian criterion (all degrees even and
    every edge in one component).
    """
    deg = g.degrees()
    complete = bool((deg == g.n - 1).all())
    eulerian = bool((deg % 2 == 0).all())
    if eulerian:
        busy = [c for c in components(g) if c.shape[0] > 1]
        eulerian = len(busy) <= 1
    return BasicStats(deg, complete, eulerian)


def closed_neighbourhood_sizes(g: Graph) -> Vertices:
    return g.degrees() + 1


def dominant_vertices(g: Graph) -> Vertices:
    "Vertices adjacent to every other vertex."
    return np.flatnonzero(g.degrees() == g.n - 1).astype(np.int64)


def reduced_graph(g: Graph) -> Tuple[Graph, Vertices]:
    """
    Induced subgraph on the non-dominant vertices.

    Returns:
        The reduced graph and the original index of each of its vertices
    """
    keep = np.flatnonzero(g.degrees() != g.n - 1).astype(np.int64)
    return induced_subgraph(g, keep), keep


def components(g: Graph) -> List[Vertices]:
    "Connected components as sorted vertex arrays, ordered by smallest vertex."
    seen = np.zeros(g.n, np.bool_)
    out = []
    for s in range(g.n):
        if seen[s]:
            continue
        seen[s] = True
        comp = [np.array([s], np.int64)]
        frontier = comp[0]
        while frontier.shape[0]:
            reach = np.bitwise_or.reduce(g.rows[frontier], axis=0)
            nb = np.flatnonzero(unpack_rows(reach[None, :], g.n)[0] & ~seen)
            seen[nb] = True
            comp.append(nb)
            frontier = nb
        out.append(np.sort(np.concatenate(comp)).astype(np.int64))
    return out


def twin_contraction(g: Graph) -> Tuple[Graph, Vertices]:
    """
    Contract every class of closed twins (identical closed neighbourhoods) to
    its first vertex.

    Returns:
        The contracted graph (an induced subgraph on one vertex per class, in
        order of first appearance) and the class index of every vertex
    """
    closed = g.rows.copy()
    idx = np.arange(g.n)
    closed[idx, idx >> 6] |= np.uint64(1) << (idx & 63).astype(np.uint64)
    classes: Dict[bytes, int] = {}
    class_map = np.empty(g.n, np.int64)
    reps = []
    for i in range(g.n):
        key = closed[i].tobytes()
        if key not in classes:
            classes[key] = len(reps)
            reps.append(i)
        class_map[i] = classes[key]
    return induced_subgraph(g, reps), class_map


def _csr(g: Graph) -> Tuple[Vertices, Vertices]:
    adj = g.adjacency_matrix()
    ptr = np.zeros(g.n + 1, np.int64)
    ptr[1:] = np.cumsum(adj.sum(axis=1))
    cols = np.nonzero(adj)[1].astype(np.int64)
    return ptr, cols


def _eccentricities(ptr: Vertices, cols: Vertices, out: Vertices) -> None:
    n = out.shape[0]
    for s in prange(n):
        dist = np.full(n, -1, np.int64)
        queue = np.empty(n, np.int64)
        dist[s] = 0
        queue[0] = s
        head, tail = 0, 1
        far = 0
        while head < tail:
            v = queue[head]
            head += 1
            for k in range(ptr[v], ptr[v + 1]):
                w = cols[k]
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    far = dist[w]
                    queue[tail] = w
                    tail += 1
        out[s] = far


eccentricities = njit(parallel=True)(_eccentricities)


def diameter(g: Graph) -> int:
    """
    Diameter of a connected graph, computed on its twin contraction (closed
    twins are at distance one and share all other distances).
    """
    if g.n <= 1:
        return 0
    h, _ = twin_contraction(g)
    if h.n == 1:
        return 1
    ptr, cols = _csr(h)
    ecc = np.zeros(h.n, np.int64)
    eccentricities(ptr, cols, ecc)
    return max(int(ecc.max()), 1)


def components_and_diameter(g: Graph) -> Tuple[List[Vertices], List[int]]:
    comps = components(g)
    return comps, [diameter(induced_subgraph(g, c)) for c in comps]


# ## Odd holes


def verify_odd_hole(g: Graph, cycle: Sequence[int]) -> bool:
    "True iff `cycle` is an induced cycle of odd length at least 5."
    k = len(cycle)
    if k < 5 or k % 2 == 0 or len(set(cycle)) != k:
        return False
    for i in range(k):
        for j in range(i + 1, k):
            consecutive = j == i + 1 or (i == 0 and j == k - 1)
            if g.has_edge(cycle[i], cycle[j]) != consecutive:
                return False
    return True


def verify_odd_antihole(g: Graph, cycle: Sequence[int]) -> bool:
    "True iff `cycle` is an odd hole of the complement."
    sub = induced_subgraph(g, list(cycle)).complement()
    return verify_odd_hole(sub, list(range(len(cycle))))


class _Steps:
    def __init__(self, limit: int):
        self.limit = limit
        self.used = 0

    def tick(self) -> None:
        self.used += 1
        if self.used > self.limit:
            raise CapExceeded(f"hole search exceeded {self.limit} steps")


def _hole_in(nbrs: List[int], verts: List[int], max_len: int, steps: _Steps) -> Optional[List[int]]:
    """
    Induced odd cycle among `verts`, found by extending induced paths from
    their smallest vertex `v0`; a cycle is reported once, with its second
    vertex below its last.
    """
    everything = 0
    for v in verts:
        everything |= 1 << v
    for v0 in verts:
        higher = everything & ~((2 << v0) - 1)
        n0 = nbrs[v0]
        for v1 in bits(n0 & higher):
            path = [v0, v1]
            forbid = [1 << v0]
            stack = [iter(bits(nbrs[v1] & higher & ~forbid[0]))]
            while stack:
                u = next(stack[-1], None)
                if u is None:
                    stack.pop()
                    path.pop()
                    forbid.pop()
                    continue
                steps.tick()
                k = len(path) - 1
                if (n0 >> u) & 1:
                    if k >= 3 and k % 2 == 1 and u > v1:
                        return path + [u]
                    continue
                if k + 3 > max_len:
                    continue
                last = path[-1]
                f = forbid[-1] | nbrs[last] | (1 << last)
                path.append(u)
                forbid.append(f)
                stack.append(iter(bits(nbrs[u] & higher & ~f)))
    return None


def _search(
    g: Graph, max_len: Optional[int], steps: _Steps, complement: bool
) -> Optional[List[int]]:
    reduced, keep = reduced_graph(g)
    contracted, class_map = twin_contraction(reduced)
    reps = np.array([int(np.flatnonzero(class_map == c)[0]) for c in range(contracted.n)], np.int64)
    nbrs = contracted.bitsets()
    for comp in components(contracted):
        if comp.shape[0] < 5:
            continue
        verts = [int(v) for v in comp]
        local = nbrs
        if complement:
            mask = 0
            for v in verts:
                mask |= 1 << v
            local = list(nbrs)
            for v in verts:
                local[v] = mask & ~nbrs[v] & ~(1 << v)
        bound = comp.shape[0] if max_len is None else min(max_len, comp.shape[0])
        found = _hole_in(local, verts, bound, steps)
        if found is not None:
            return [int(keep[reps[v]]) for v in found]
    return None


def odd_hole_search(
    g: Graph, max_len: Optional[int] = None, step_limit: int = 2_000_000
) -> Optional[List[int]]:
    """
    Search for an induced odd cycle of length at least 5.

    Args:
        g: graph
        max_len: longest cycle considered; all lengths if omitted
        step_limit: search steps before giving up

    Returns:
        Vertices of a hole in cycle order, or None if there is none within `max_len`

    Raises:
        CapExceeded: if the step limit is reached
    """
    if max_len is not None and max_len < 5:
        raise ValueError(f"max_len must be at least 5, got {max_len}")
    return _search(g, max_len, _Steps(step_limit), complement=False)


def odd_antihole_search(
    g: Graph, max_len: Optional[int] = None, step_limit: int = 2_000_000
) -> Optional[List[int]]:
    "As `odd_hole_search`, for induced complements of odd cycles."
    if max_len is not None and max_len < 5:
        raise ValueError(f"max_len must be at least 5, got {max_len}")
    return _search(g, max_len, _Steps(step_limit), complement=True)


# ## Clique and chromatic numbers


def _color_classes(nbrs: List[int], P: int) -> List[Tuple[int, int]]:
    "Greedy colouring of `P`; `(vertex, colour)` pairs with non-decreasing colour."
    out = []
    uncolored = P
    color = 0
    while uncolored:
        color += 1
        Q = uncolored
        while Q:
            v = (Q & -Q).bit_length() - 1
            Q &= ~(1 << v)
            Q &= ~nbrs[v]
            uncolored &= ~(1 << v)
            out.append((v, color))
    return out


def max_clique(g: Graph) -> List[int]:
    "A maximum clique, by branch and bound with greedy colouring bounds."
    nbrs = g.bitsets()
    best: List[int] = []

    def expand(R: List[int], P: int) -> None:
        nonlocal best
        for v, bound in reversed(_color_classes(nbrs, P)):
            if len(R) + bound <= len(best):
                return
            P2 = P & nbrs[v]
            if P2:
                expand(R + [v], P2)
            elif len(R) + 1 > len(best):
                best = R + [v]
            P &= ~(1 << v)

    expand([], (1 << g.n) - 1)
    return sorted(best)


def chromatic_number(g: Graph, lower: int = 0) -> int:
    "Exact chromatic number by DSATUR branch and bound."
    n = g.n
    if n == 0:
        return 0
    nbrs = [bits(x) for x in g.bitsets()]
    colors = [-1] * n
    best = n + 1

    def greedy() -> int:
        cols = [-1] * n
        for v in sorted(range(n), key=lambda v: -len(nbrs[v])):
            used = {cols[w] for w in nbrs[v]}
            c = 0
            while c in used:
                c += 1
            cols[v] = c
        return max(cols) + 1

    best = greedy()

    def pick() -> int:
        choice, key = -1, (-1, -1)
        for v in range(n):
            if colors[v] >= 0:
                continue
            sat = len({colors[w] for w in nbrs[v] if colors[w] >= 0})
            k = (sat, len(nbrs[v]))
            if k > key:
                choice, key = v, k
        return choice

    def dsatur(done: int, used: int) -> None:
        nonlocal best
        if used >= best:
            return
        if done == n:
            best = used
            return
        v = pick()
        taken = {colors[w] for w in nbrs[v]}
        for c in range(min(used + 1, best - 1)):
            if c in taken:
                continue
            colors[v] = c
            dsatur(done + 1, max(used, c + 1))
            colors[v] = -1
            if best <= lower:
                return

    dsatur(0, 0)
    return best


def clique_and_chromatic(g: Graph, cap: int = 64) -> Tuple[int, int]:
    """
    Exact clique and chromatic numbers.

    Args:
        g: graph
        cap: largest vertex count accepted

    Returns:
        `(omega, chi)`

    Raises:
        CapExceeded: if `g.n > cap`
    """
    if g.n > cap:
        raise CapExceeded(f"exact solvers limited to {cap} vertices, got {g.n}")
    omega = len(max_clique(g))
    return omega, chromatic_number(g, lower=omega)


# ## Perfectness


@dataclass(frozen=True)
class Perfect:
    contracted_size: int
    search_bound: int
    clique: Optional[int] = None
    chromatic: Optional[int] = None
    status: Literal["perfect"] = "perfect"


@dataclass(frozen=True)
class NotPerfect:
    witness: List[int]
    kind: Literal["hole", "antihole"]
    labels: List[str] = field(default_factory=list)
    status: Literal["not-perfect"] = "not-perfect"


@dataclass(frozen=True)
class Unknown:
    reason: str
    status: Literal["unknown"] = "unknown"


PerfectnessVerdict = Union[Perfect, NotPerfect, Unknown]


def perfectness_verdict(
    g: Graph, budget: Optional[Budget] = None, witness: Optional[Sequence[int]] = None
) -> PerfectnessVerdict:
    """
    Decide perfectness by exhaustive odd hole and antihole search on the
    contracted reduced graph.

    Args:
        g: graph
        budget: step and size limits
        witness: known odd hole, checked first

    Returns:
        `Perfect`, `NotPerfect` with a verified witness, or `Unknown` when the
        search budget runs out
    """
    budget = budget or Budget()
    if witness is not None and verify_odd_hole(g, witness):
        return NotPerfect(list(witness), "hole", [g.labels[v] for v in witness])
    if g.n > budget.max_vertices:
        return Unknown(f"{g.n} vertices exceed the limit {budget.max_vertices}")
    steps = _Steps(budget.hole_steps)
    try:
        for kind, complement in (("hole", False), ("antihole", True)):
            found = _search(g, None, steps, complement)
            if found is not None:
                ok = verify_odd_antihole(g, found) if complement else verify_odd_hole(g, found)
                if not ok:
                    raise AssertionError(f"search returned an invalid {kind}: {found}")
                return NotPerfect(found, kind, [g.labels[v] for v in found])  # type: ignore
    except CapExceeded as e:
        return Unknown(str(e))
    reduced, _ = reduced_graph(g)
    contracted, _ = twin_contraction(reduced)
    largest = max((c.shape[0] for c in components(contracted)), default=0)
    omega = chi = None
    if contracted.n <= budget.clique_cap:
        omega, chi = clique_and_chromatic(contracted, budget.clique_cap)
    return Perfect(contracted.n, largest, omega, chi)


# ## Universality


@dataclass(frozen=True)
class EmbeddingResult:
    spec: GroupSpec
    vertex_map: List[int]
    labels: List[str]


EmbedKind = Literal["abelian", "nonabelian"]


def _noncyclic_factor(p: int, kind: EmbedKind) -> Tuple[GroupSpec, Tuple[int, int]]:
    "A non-cyclic p-group with two distinct non-adjacent elements."
    if kind == "abelian":
        spec: GroupSpec = AbelianP(p, (1, 1))
        G = build_group(spec)
        k1, k2 = G.generators()
    elif p == 2:
        spec = Dihedral(4)
        D = build_group(spec)
        k1, k2 = D.reflection(0), D.reflection(1)  # type: ignore
    else:
        spec = Heisenberg(p, 1)
        k1, k2 = build_group(spec).generators()[:2]
    return spec, (k1, k2)


def universality_embed(
    target: Graph, kind: EmbedKind = "abelian", config: Optional[Config] = None
) -> EmbeddingResult:
    """
    Realize `target` as an induced subgraph of the deep commuting graph of a
    product of non-cyclic p-groups for distinct primes.

    Vertex `v_i` adds a factor `K_i` with non-adjacent `k1, k2`: earlier
    vertices adjacent to `v_i` get coordinate `e`, the others `k1`, and `v_i`
    itself is `(e, ..., e, k2)`.

    Args:
        target: graph with at least one vertex
        kind: `"abelian"` ($C_p \\times C_p$ factors) or `"nonabelian"`
            ($D_8$ and $H_3(\\mathbb{Z}/p)$ factors)
        config: budgets; `embed_cap` bounds the vertex count

    Returns:
        Group spec and the element index of every vertex

    Raises:
        CapExceeded: if the target has more than `embed_cap` vertices
        EmbeddingError: if the induced subgraph check fails
    """
    from .oracles import oracle_for

    config = config or Config.from_env()
    n = target.n
    if n < 1:
        raise ValueError("target graph needs a vertex")
    if n > config.budget.embed_cap:
        raise CapExceeded(f"embedding limited to {config.budget.embed_cap} vertices, got {n}")
    primes = smallest_primes(n)
    factors = [_noncyclic_factor(p, kind) for p in primes]
    coords = [[0] * n for _ in range(n)]
    for i in range(1, n):
        k1, k2 = factors[i][1]
        for v in range(i):
            coords[v][i] = 0 if target.has_edge(v, i) else k1
        coords[i][i] = k2
    specs = tuple(f[0] for f in factors)
    if kind == "abelian":
        spec: GroupSpec = Abelian(tuple(s for s in specs if isinstance(s, AbelianP)))
    else:
        spec = CoprimeProduct(specs)
    G = build_group(spec)
    assert isinstance(G, ProductGroup)
    vertex_map = [
        int(G.combine([np.array([c]) for c in coords[v]])[0]) for v in range(n)
    ]
    oracle = oracle_for(spec, config)
    edges = [
        (i, j) for i in range(n) for j in range(i + 1, n) if oracle(vertex_map[i], vertex_map[j])
    ]
    image = Graph.from_edges(n, edges, [G.label(x) for x in vertex_map])
    diff = edge_compare(target, image)
    if diff:
        raise EmbeddingError(f"embedding into {format_spec(spec)} differs: {diff}")
    log.info("embedded %d vertices into %s of order %d", n, format_spec(spec), G.size)
    return EmbeddingResult(spec, vertex_map, image.labels)


def parse_edge_list(text: str) -> Graph:
    "Graph from `n:i-j,i-j,...`, e.g. `3:0-1,1-2`."
    head, _, body = text.strip().partition(":")
    try:
        n = int(head)
        edges = [
            (int(a), int(b)) for a, b in (e.split("-") for e in body.split(",") if e)
        ]
    except ValueError as e:
        raise ValueError(f"bad edge list {text!r}") from e
    try:
        return Graph.from_edges(n, edges)
    except UnknownVertex as e:
        raise ValueError(f"bad edge list {text!r}: {e}") from e


# ## Reports


REPORT_FIELDS = [
    "spec",
    "graph_kind",
    "vertices",
    "edges",
    "complete",
    "eulerian",
    "dominant",
    "components",
    "diameter",
    "verdict",
    "witness",
]


def report_row(g: Graph, budget: Optional[Budget] = None, verdict: bool = True) -> Dict[str, str]:
    """
    One CSV row of analytics for a graph.

    Args:
        g: graph (with `spec` and `kind` set)
        budget: limits for the perfectness search
        verdict: run the perfectness search

    Returns:
        Mapping of `REPORT_FIELDS` to text
    """
    stats = basic_stats(g)
    dom = dominant_vertices(g)
    reduced, _ = reduced_graph(g)
    comps = components(reduced)
    diam = diameter(reduced) if len(comps) == 1 else -1
    row = {
        "spec": g.spec,
        "graph_kind": g.kind,
        "vertices": str(g.n),
        "edges": str(g.edge_count),
        "complete": str(stats.is_complete).lower(),
        "eulerian": str(stats.is_eulerian).lower(),
        "dominant": str(dom.shape[0]),
        "components": str(len(comps)),
        "diameter": str(diam),
        "verdict": "",
        "witness": "",
    }
    if verdict:
        v = perfectness_verdict(g, budget)
        row["verdict"] = v.status
        if isinstance(v, NotPerfect):
            row["witness"] = " ".join(v.labels)
    return row


def write_report_csv(rows: Sequence[Dict[str, str]], path: Union[str, Path], append: bool = False) -> Path:
    path = Path(path)
    new = not (append and path.exists())
    with path.open("a" if append else "w", newline="") as f:
        writer = csv.DictWriter(f, fieldnames=REPORT_FIELDS)
        if new:
            writer.writeheader()
        writer.writerows(rows)
    return path
