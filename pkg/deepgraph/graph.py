"""
Simple undirected graphs stored as rows of 64-bit words, and the four graphs
of the hierarchy power graph, enhanced power graph, deep commuting graph and
commuting graph.
"""

from __future__ import annotations

import json
import logging
import os
import tempfile
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Set, Tuple, Union

import networkx as nx
import numpy as np
import numpy.typing as npt
from numba import njit, prange
from typing_extensions import TypeAlias

from .catalog import GroupHandle, format_spec
from .fpgroup import PermRep
from .oracles import CoverOracle

log = logging.getLogger(__name__)

Rows: TypeAlias = npt.NDArray[np.uint64]
Vertices: TypeAlias = npt.NDArray[np.int64]
Edge = Tuple[int, int]


class UnknownVertex(IndexError):
    "Exception raised for a vertex outside the graph."
    pass


class ArityMismatch(ValueError):
    "Exception raised when a generalized join gets the wrong number of parts."
    pass


class BadBijection(ValueError):
    "Exception raised for a vertex map that is not injective or out of range."
    pass


def words_for(n: int) -> int:
    return (n + 63) >> 6


def pack_rows(adj: npt.NDArray[np.bool_]) -> Rows:
    "Pack a boolean matrix `(k, n)` into `(k, ceil(n / 64))` words, bit `j` at `[i, j >> 6]`."
    k, n = adj.shape
    padded = np.zeros((k, words_for(n) * 64), np.bool_)
    padded[:, :n] = adj
    packed = np.packbits(padded, axis=1, bitorder="little")
    return np.ascontiguousarray(packed).view("<u8").astype(np.uint64)


def unpack_rows(rows: Rows, n: int) -> npt.NDArray[np.bool_]:
    raw = np.ascontiguousarray(rows.astype("<u8")).view(np.uint8)
    return np.unpackbits(raw, axis=1, bitorder="little")[:, :n].astype(np.bool_)


# ## Bitset kernels


def _set_pairs(rows: Rows, a: Vertices, b: Vertices) -> None:
    "Set both `(a[k], b[k])` and `(b[k], a[k])`."
    for k in range(a.shape[0]):
        x, y = a[k], b[k]
        rows[x, y >> 6] |= np.uint64(1) << np.uint64(y & 63)
        rows[y, x >> 6] |= np.uint64(1) << np.uint64(x & 63)


set_pairs = njit(_set_pairs)


def _set_blocks(rows: Rows, members: Vertices, ptr: Vertices) -> None:
    "Make each block `members[ptr[k]:ptr[k + 1]]` a clique (diagonal included)."
    for k in range(ptr.shape[0] - 1):
        lo, hi = ptr[k], ptr[k + 1]
        for i in range(lo, hi):
            x = members[i]
            for j in range(lo, hi):
                y = members[j]
                rows[x, y >> 6] |= np.uint64(1) << np.uint64(y & 63)


set_blocks = njit(_set_blocks)


def _clear_diagonal(rows: Rows) -> None:
    for i in prange(rows.shape[0]):
        rows[i, i >> 6] &= ~(np.uint64(1) << np.uint64(i & 63))


clear_diagonal = njit(parallel=True)(_clear_diagonal)


def _popcounts(rows: Rows, out: Vertices) -> None:
    for i in prange(rows.shape[0]):
        c = 0
        for w in range(rows.shape[1]):
            x = rows[i, w]
            while x:
                x &= x - np.uint64(1)
                c += 1
        out[i] = c


popcounts = njit(parallel=True)(_popcounts)


# ## Graph


class Graph:
    """
    Finite simple undirected graph.

    Vertices are `0 .. n - 1`, each with a label (a group element label for
    graphs built from groups). Rows are read-only; every operation returns a
    new graph.
    """

    def __init__(
        self,
        rows: Rows,
        n: int,
        labels: Optional[Sequence[str]] = None,
        spec: str = "",
        kind: str = "",
    ):
        rows = np.ascontiguousarray(rows, dtype=np.uint64)
        if rows.shape != (n, words_for(n)):
            raise ValueError(f"rows of shape {rows.shape} do not fit {n} vertices")
        rows.flags.writeable = False
        self.rows = rows
        self.n = n
        self.labels = list(labels) if labels is not None else [str(i) for i in range(n)]
        if len(self.labels) != n:
            raise ValueError(f"{len(self.labels)} labels for {n} vertices")
        self.spec = spec
        self.kind = kind

    def __repr__(self) -> str:
        tag = f" {self.kind}({self.spec})" if self.kind else ""
        return f"<Graph{tag} n={self.n} m={self.edge_count}>"

    @classmethod
    def from_matrix(cls, adj: npt.NDArray[np.bool_], labels: Optional[Sequence[str]] = None) -> Graph:
        adj = np.asarray(adj, dtype=np.bool_)
        if (adj != adj.T).any():
            raise ValueError("adjacency is not symmetric")
        adj = adj.copy()
        np.fill_diagonal(adj, False)
        return cls(pack_rows(adj), adj.shape[0], labels)

    @classmethod
    def from_edges(
        cls, n: int, edges: Iterable[Edge], labels: Optional[Sequence[str]] = None
    ) -> Graph:
        pairs = np.array([(int(a), int(b)) for a, b in edges], np.int64).reshape(-1, 2)
        if pairs.size and (pairs.min() < 0 or pairs.max() >= n):
            raise UnknownVertex(f"edge endpoint outside 0..{n - 1}")
        rows = np.zeros((n, words_for(n)), np.uint64)
        set_pairs(rows, pairs[:, 0], pairs[:, 1])
        clear_diagonal(rows)
        return cls(rows, n, labels)

    @classmethod
    def empty(cls, n: int) -> Graph:
        return cls(np.zeros((n, words_for(n)), np.uint64), n)

    @classmethod
    def complete(cls, n: int) -> Graph:
        return cls.from_matrix(np.ones((n, n), np.bool_))

    @classmethod
    def cycle(cls, n: int) -> Graph:
        return cls.from_edges(n, [(i, (i + 1) % n) for i in range(n)])

    @classmethod
    def path(cls, n: int) -> Graph:
        return cls.from_edges(n, [(i, i + 1) for i in range(n - 1)])

    @property
    def vertex_count(self) -> int:
        return self.n

    def _check(self, v: int) -> int:
        if not 0 <= v < self.n:
            raise UnknownVertex(f"vertex {v} not in 0..{self.n - 1}")
        return int(v)

    def has_edge(self, i: int, j: int) -> bool:
        i, j = self._check(i), self._check(j)
        return bool((int(self.rows[i, j >> 6]) >> (j & 63)) & 1)

    def row_int(self, i: int) -> int:
        "Neighbourhood of `i` as a Python integer bitset."
        return int.from_bytes(self.rows[self._check(i)].astype("<u8").tobytes(), "little")

    def bitsets(self) -> List[int]:
        return [self.row_int(i) for i in range(self.n)]

    def neighbors(self, i: int) -> Vertices:
        row = unpack_rows(self.rows[self._check(i) : i + 1], self.n)[0]
        return np.flatnonzero(row).astype(np.int64)

    def degrees(self) -> Vertices:
        out = np.zeros(self.n, np.int64)
        if self.n:
            popcounts(self.rows, out)
        return out

    @property
    def edge_count(self) -> int:
        return int(self.degrees().sum()) // 2

    def adjacency_matrix(self) -> npt.NDArray[np.bool_]:
        return unpack_rows(self.rows, self.n)

    def edges(self) -> List[Edge]:
        "Sorted edges `(i, j)` with `i < j`."
        out: List[Edge] = []
        for i in range(self.n):
            nb = self.neighbors(i)
            out.extend((i, int(j)) for j in nb[nb > i])
        return out

    def complement(self) -> Graph:
        adj = ~self.adjacency_matrix()
        np.fill_diagonal(adj, False)
        return Graph(pack_rows(adj), self.n, self.labels, self.spec, f"co-{self.kind}")

    def is_subgraph_of(self, other: Graph) -> bool:
        "Edge-set inclusion on the same vertex set."
        return self.n == other.n and not (self.rows & ~other.rows).any()

    def edge_equal(self, other: Graph) -> bool:
        return self.n == other.n and bool(np.array_equal(self.rows, other.rows))

    def with_meta(self, spec: str = "", kind: str = "") -> Graph:
        return Graph(self.rows, self.n, self.labels, spec or self.spec, kind or self.kind)

    def to_networkx(self) -> nx.Graph:
        G = nx.Graph()
        for i, label in enumerate(self.labels):
            G.add_node(i, label=label)
        G.add_edges_from(self.edges())
        return G


# ## Hierarchy


def _empty_rows(n: int) -> Rows:
    return np.zeros((n, words_for(n)), np.uint64)


def _power_pairs(G: GroupHandle) -> Tuple[Vertices, Vertices]:
    "All pairs `(x, x^k)`."
    orders = G.orders()
    table = G.power_table()
    mask = np.arange(table.shape[1])[None, :] < orders[:, None]
    xs = np.repeat(G.all(), orders)
    return xs, table[mask]


def power_graph(G: GroupHandle) -> Graph:
    "`x ~ y` when one of them is a power of the other."
    rows = _empty_rows(G.size)
    a, b = _power_pairs(G)
    set_pairs(rows, a, b)
    clear_diagonal(rows)
    return Graph(rows, G.size, G.labels(), format_spec(G.spec), "power")


def maximal_cyclic_subgroups(G: GroupHandle) -> List[Vertices]:
    """
    The maximal cyclic subgroups, each as a sorted element array.

    A cyclic subgroup $\\langle x \\rangle$ is maximal when no element of larger
    order has `x` among its powers.
    """
    orders = G.orders()
    a, b = _power_pairs(G)
    best = orders.copy()
    np.maximum.at(best, b, orders[a])
    seen: Set[bytes] = set()
    out = []
    table = G.power_table()
    for x in np.flatnonzero(best == orders):
        members = np.sort(table[x, : orders[x]])
        key = members.tobytes()
        if key not in seen:
            seen.add(key)
            out.append(members)
    return out


def enhanced_power_graph(G: GroupHandle) -> Graph:
    "`x ~ y` when $\\langle x, y \\rangle$ is cyclic, i.e. both lie in one maximal cyclic subgroup."
    rows = _empty_rows(G.size)
    blocks = maximal_cyclic_subgroups(G)
    members = np.concatenate(blocks) if blocks else np.zeros(0, np.int64)
    ptr = np.cumsum([0] + [b.shape[0] for b in blocks]).astype(np.int64)
    set_blocks(rows, members, ptr)
    clear_diagonal(rows)
    return Graph(rows, G.size, G.labels(), format_spec(G.spec), "enhanced")


def _partner_graph(G: GroupHandle, oracle: Optional[CoverOracle], kind: str) -> Graph:
    rows = _empty_rows(G.size)
    for x in range(G.size):
        ys = G.commuting_partners(x)
        ys = ys[ys > x]
        if oracle is not None and ys.shape[0]:
            ys = ys[oracle.adjacent_many(x, ys)]
        if ys.shape[0]:
            set_pairs(rows, np.full(ys.shape[0], x, np.int64), ys)
    return Graph(rows, G.size, G.labels(), format_spec(G.spec), kind)


def commuting_graph(G: GroupHandle) -> Graph:
    return _partner_graph(G, None, "commuting")


def cover_commuting_graph(rep: PermRep, name: str = "") -> Graph:
    "Commuting graph of a cover on its points `0 .. degree - 1`."
    n = rep.degree
    rows = _empty_rows(n)
    pts = np.arange(n, dtype=np.int64)
    for x in range(n - 1):
        ys = pts[x + 1 :]
        ys = ys[rep.commutes_many(np.full(ys.shape[0], x, np.int64), ys)]
        if ys.shape[0]:
            set_pairs(rows, np.full(ys.shape[0], x, np.int64), ys)
    return Graph(rows, n, None, name, "commuting")


def deep_commuting_graph(G: GroupHandle, oracle: CoverOracle) -> Graph:
    """
    Deep commuting graph: distinct elements whose lifts to a Schur cover commute.

    Args:
        G: group
        oracle: cover oracle of `G`

    Returns:
        The graph on the elements of `G`
    """
    if oracle.G.spec != G.spec:
        raise ValueError(f"oracle is for {format_spec(oracle.G.spec)}, not {format_spec(G.spec)}")
    return _partner_graph(G, oracle, "deep")


GRAPH_KINDS = ("power", "enhanced", "deep", "commuting")


@dataclass(frozen=True)
class Hierarchy:
    P: Graph
    Pe: Graph
    DeltaD: Graph
    Delta: Graph

    def graphs(self) -> List[Graph]:
        return [self.P, self.Pe, self.DeltaD, self.Delta]

    def get(self, kind: str) -> Graph:
        return dict(zip(GRAPH_KINDS, self.graphs()))[kind]

    def inclusion_violations(self) -> List[Tuple[str, str, Edge]]:
        "Edges of a smaller graph missing from the next larger one."
        out = []
        pairs = zip(GRAPH_KINDS, self.graphs(), GRAPH_KINDS[1:], self.graphs()[1:])
        for ka, a, kb, b in pairs:
            extra = a.rows & ~b.rows
            for i in np.flatnonzero(extra.any(axis=1)):
                nb = np.flatnonzero(unpack_rows(extra[i : i + 1], a.n)[0])
                out.extend((ka, kb, (int(i), int(j))) for j in nb)
        return out


def build_hierarchy(G: GroupHandle, oracle: CoverOracle) -> Hierarchy:
    """
    All four graphs of a group on the same vertex set.

    Args:
        G: group
        oracle: cover oracle of `G`

    Returns:
        `Hierarchy(P, Pe, DeltaD, Delta)`
    """
    log.info("building hierarchy of %s (%d elements)", format_spec(G.spec), G.size)
    return Hierarchy(
        power_graph(G),
        enhanced_power_graph(G),
        deep_commuting_graph(G, oracle),
        commuting_graph(G),
    )


def build_graph(G: GroupHandle, kind: str, oracle: Optional[CoverOracle] = None) -> Graph:
    if kind == "power":
        return power_graph(G)
    if kind == "enhanced":
        return enhanced_power_graph(G)
    if kind == "commuting":
        return commuting_graph(G)
    if kind == "deep":
        if oracle is None:
            raise ValueError("deep commuting graph needs an oracle")
        return deep_commuting_graph(G, oracle)
    raise ValueError(f"unknown graph kind {kind!r}")


# ## Operations


def induced_subgraph(g: Graph, vertices: Union[Set[int], Sequence[int], Vertices]) -> Graph:
    """
    Subgraph induced on `vertices`.

    Args:
        g: graph
        vertices: a set (taken in increasing order) or a sequence giving the
            new vertex order

    Returns:
        Graph whose vertex `k` is the `k`-th chosen vertex

    Raises:
        UnknownVertex: for a vertex outside `g`
    """
    order = sorted(vertices) if isinstance(vertices, (set, frozenset)) else list(vertices)
    idx = np.array([int(v) for v in order], np.int64)
    if idx.size and (idx.min() < 0 or idx.max() >= g.n):
        bad = idx[(idx < 0) | (idx >= g.n)][0]
        raise UnknownVertex(f"vertex {bad} not in 0..{g.n - 1}")
    if np.unique(idx).shape[0] != idx.shape[0]:
        raise ValueError("repeated vertex")
    sub = unpack_rows(g.rows[idx], g.n)[:, idx] if idx.size else np.zeros((0, 0), np.bool_)
    return Graph(pack_rows(sub), idx.shape[0], [g.labels[i] for i in idx], g.spec, g.kind)


def closed_rows(g: Graph) -> npt.NDArray[np.bool_]:
    adj = g.adjacency_matrix()
    np.fill_diagonal(adj, True)
    return adj


def strong_product(g1: Graph, g2: Graph) -> Graph:
    """
    Strong product: `(a, b) ~ (c, d)` when the pairs differ and each coordinate
    is equal or adjacent. Vertex `(a, b)` has index `a * g2.n + b`.
    """
    n1, n2 = g1.n, g2.n
    c1, c2 = closed_rows(g1), closed_rows(g2)
    rows = np.zeros((n1 * n2, words_for(n1 * n2)), np.uint64)
    for i in range(n1):
        block = np.kron(c1[i : i + 1], c2).astype(np.bool_)
        rows[i * n2 : (i + 1) * n2] = pack_rows(block)
    clear_diagonal(rows)
    labels = [f"({a},{b})" for a in g1.labels for b in g2.labels]
    return Graph(rows, n1 * n2, labels)


def generalized_join(base: Graph, parts: Sequence[Graph]) -> Graph:
    """
    Replace every vertex `u` of `base` by `parts[u]`, joining all of
    `parts[u]` to all of `parts[v]` whenever `u ~ v`.

    Args:
        base: graph on `k` vertices
        parts: `k` graphs

    Returns:
        The generalized join, parts laid out consecutively

    Raises:
        ArityMismatch: if `len(parts) != base.n`
    """
    if len(parts) != base.n:
        raise ArityMismatch(f"{len(parts)} parts for a base of {base.n} vertices")
    sizes = [p.n for p in parts]
    offsets = np.cumsum([0] + sizes)
    total = int(offsets[-1])
    member = np.repeat(np.arange(base.n), sizes)
    base_adj = base.adjacency_matrix()
    rows = np.zeros((total, words_for(total)), np.uint64)
    for u, part in enumerate(parts):
        if not part.n:
            continue
        block = np.zeros((part.n, total), np.bool_)
        block[:, base_adj[u][member]] = True
        block[:, offsets[u] : offsets[u + 1]] = part.adjacency_matrix()
        rows[offsets[u] : offsets[u + 1]] = pack_rows(block)
    labels = [f"{base.labels[u]}/{lab}" for u, p in enumerate(parts) for lab in p.labels]
    return Graph(rows, total, labels)


def fiber_bijection(projection: Vertices, size: int, m: int) -> Vertices:
    """
    Map points of a cover onto a generalized join with parts of size `m`:
    point `c` goes to `projection[c] * m + (rank of c in its fiber)`.

    Raises:
        BadBijection: if some fiber does not have exactly `m` points
    """
    projection = np.asarray(projection, np.int64)
    counts = np.bincount(projection, minlength=size)
    if projection.shape[0] != size * m or (counts != m).any():
        raise BadBijection(f"fibers are not all of size {m}")
    order = np.argsort(projection, kind="stable")
    rank = np.empty_like(order)
    rank[order] = np.arange(order.shape[0]) % m
    return projection * m + rank


@dataclass(frozen=True)
class EdgeDiff:
    "Edges present on one side only, as label pairs."

    only_a: List[Tuple[str, str]] = field(default_factory=list)
    only_b: List[Tuple[str, str]] = field(default_factory=list)

    @property
    def is_empty(self) -> bool:
        return not self.only_a and not self.only_b

    def __bool__(self) -> bool:
        return not self.is_empty


def edge_compare(a: Graph, b: Graph, bijection: Optional[Sequence[int]] = None) -> EdgeDiff:
    """
    Compare edge sets through a vertex map.

    Args:
        a: first graph
        b: second graph
        bijection: image in `b` of every vertex of `a`; identity if omitted

    Returns:
        Edges of `a` not mapped onto edges of `b`, and edges of `b` among the
        image vertices with no preimage edge

    Raises:
        BadBijection: if the map is not injective or leaves `b`'s vertex range
    """
    m = np.arange(a.n) if bijection is None else np.asarray(bijection, np.int64)
    if m.shape != (a.n,):
        raise BadBijection(f"map has {m.shape[0]} entries for {a.n} vertices")
    if m.size and (m.min() < 0 or m.max() >= b.n):
        raise BadBijection("map leaves the target vertex range")
    if np.unique(m).shape[0] != m.shape[0]:
        raise BadBijection("map is not injective")
    image = induced_subgraph(b, m)
    extra_a = a.rows & ~image.rows
    extra_b = image.rows & ~a.rows
    only_a, only_b = [], []
    for extra, out, labels in ((extra_a, only_a, a.labels), (extra_b, only_b, image.labels)):
        for i in np.flatnonzero(extra.any(axis=1)):
            nb = np.flatnonzero(unpack_rows(extra[i : i + 1], a.n)[0])
            out.extend((labels[i], labels[j]) for j in nb if j > i)
    return EdgeDiff(only_a, only_b)


# ## Output


def to_dot(g: Graph) -> str:
    "DOT text; node ids are vertex indices with the element label as `label`."
    G = g.to_networkx()
    G.graph["name"] = g.kind or "G"
    return str(nx.nx_pydot.to_pydot(G).to_string())


def to_json(g: Graph) -> str:
    payload = {
        "spec": g.spec,
        "graph_kind": g.kind,
        "n": g.n,
        "edges": [list(e) for e in g.edges()],
        "labels": g.labels,
    }
    return json.dumps(payload, separators=(",", ":")) + "\n"


def atomic_write(path: Union[str, Path], data: Union[str, bytes]) -> Path:
    "Write through a temporary file in the same directory and rename into place."
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "wb") as f:
            f.write(data.encode() if isinstance(data, str) else data)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def write_graph(g: Graph, path: Union[str, Path], fmt: str = "dot") -> Path:
    if fmt not in ("dot", "json"):
        raise ValueError(f"unknown format {fmt!r}")
    return atomic_write(path, to_dot(g) if fmt == "dot" else to_json(g))
