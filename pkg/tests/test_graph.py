import json

import pytest
from hypothesis import given

from deepgraph import (
    AbelianP,
    ArityMismatch,
    BadBijection,
    Config,
    Cyclic,
    Dihedral,
    Graph,
    Symmetric,
    UnknownVertex,
    build_graph,
    build_group,
    build_hierarchy,
    commuting_graph,
    coset_enumerate,
    cover_commuting_graph,
    deep_commuting_graph,
    edge_compare,
    enhanced_power_graph,
    fiber_bijection,
    generalized_join,
    induced_subgraph,
    maximal_cyclic_subgroups,
    oracle_for,
    power_graph,
    schur_cover_presentation,
    strong_product,
    to_dot,
    to_json,
    write_graph,
)

from .strategies import graphs

# ## Graph type


@pytest.mark.graph
def test_constructors() -> None:
    assert Graph.complete(4).edge_count == 6
    assert Graph.empty(3).edge_count == 0
    assert Graph.path(4).edges() == [(0, 1), (1, 2), (2, 3)]
    c = Graph.cycle(5)
    assert c.degrees().tolist() == [2] * 5
    assert c.labels == ["0", "1", "2", "3", "4"]
    with pytest.raises(UnknownVertex):
        Graph.from_edges(3, [(0, 3)])
    with pytest.raises(ValueError):
        Graph.from_matrix([[False, True], [False, False]])  # type: ignore
    with pytest.raises(UnknownVertex):
        c.has_edge(0, 5)


@pytest.mark.graph
def test_wide_rows() -> None:
    g = Graph.cycle(130)
    assert g.edge_count == 130
    assert g.has_edge(129, 0) and g.has_edge(63, 64)
    assert not g.has_edge(0, 64)
    assert g.neighbors(64).tolist() == [63, 65]
    assert g.row_int(0) == (1 << 1) | (1 << 129)


@pytest.mark.graph
def test_complement() -> None:
    g = Graph.cycle(5).with_meta("x", "deep")
    co = g.complement()
    assert co.edge_count == 5
    assert co.kind == "co-deep"
    assert not co.has_edge(0, 1) and co.has_edge(0, 2)


@pytest.mark.graph
@given(graphs())
def test_complement_involution(g: Graph) -> None:
    assert g.complement().complement().edge_equal(g)
    assert g.edge_count + g.complement().edge_count == g.n * (g.n - 1) // 2
    assert g.to_networkx().number_of_edges() == g.edge_count


# ## Group graphs


@pytest.mark.graph
def test_power_graph() -> None:
    g = power_graph(build_group(Cyclic(6)))
    assert not g.has_edge(2, 3)
    assert g.has_edge(1, 2) and g.has_edge(2, 4)
    assert g.kind == "power" and g.spec == "cyc:6"


@pytest.mark.graph
def test_enhanced_and_commuting() -> None:
    assert enhanced_power_graph(build_group(AbelianP(2, (1, 1)))).edge_count == 3
    S3 = build_group(Symmetric(3))
    assert commuting_graph(S3).edge_count == 6
    assert len(maximal_cyclic_subgroups(S3)) == 4
    assert enhanced_power_graph(build_group(Cyclic(7))).edge_count == 21


@pytest.mark.graph
def test_deep_dihedral_is_enhanced(config: Config) -> None:
    G = build_group(Dihedral(4))
    deep = deep_commuting_graph(G, oracle_for(Dihedral(4), config))
    assert deep.edge_equal(enhanced_power_graph(G))
    assert deep.kind == "deep"
    with pytest.raises(ValueError):
        deep_commuting_graph(build_group(Dihedral(5)), oracle_for(Dihedral(4), config))


@pytest.mark.graph
def test_hierarchy(config: Config) -> None:
    G = build_group(Symmetric(4))
    h = build_hierarchy(G, oracle_for(Symmetric(4), config))
    assert h.inclusion_violations() == []
    sizes = [g.edge_count for g in h.graphs()]
    assert sizes == sorted(sizes)
    assert h.get("deep") is h.DeltaD
    assert build_graph(G, "commuting").edge_equal(h.Delta)
    with pytest.raises(ValueError):
        build_graph(G, "deep")
    with pytest.raises(ValueError):
        build_graph(G, "cayley")


@pytest.mark.graph
def test_cover_commuting_graph() -> None:
    pres = schur_cover_presentation(Dihedral(4))
    rep = coset_enumerate(pres)  # type: ignore
    g = cover_commuting_graph(rep, "cover")
    assert g.n == 16
    assert g.degrees()[0] == 15
    central = set(rep.central_points().tolist())
    assert all(g.degrees()[c] == 15 for c in central)


# ## Operations


@pytest.mark.graph
def test_induced_subgraph() -> None:
    c = Graph.cycle(5)
    assert induced_subgraph(c, {2, 0, 1}).edges() == [(0, 1), (1, 2)]
    flipped = induced_subgraph(c, [2, 1, 0])
    assert flipped.labels == ["2", "1", "0"]
    assert flipped.edges() == [(0, 1), (1, 2)]
    assert induced_subgraph(c, [0, 2, 4]).edges() == [(0, 2)]
    with pytest.raises(UnknownVertex):
        induced_subgraph(c, [7])
    with pytest.raises(ValueError):
        induced_subgraph(c, [1, 1])


@pytest.mark.graph
def test_strong_product() -> None:
    assert strong_product(Graph.complete(2), Graph.complete(3)).edge_equal(Graph.complete(6))
    p = strong_product(Graph.path(3), Graph.empty(2))
    assert p.n == 6
    assert p.has_edge(0 * 2 + 1, 1 * 2 + 1)
    assert not p.has_edge(0, 1)
    assert p.has_edge(0, 2) and not p.has_edge(0, 3)


@pytest.mark.graph
def test_generalized_join() -> None:
    g = generalized_join(Graph.complete(2), [Graph.complete(1), Graph.empty(2)])
    assert g.n == 3
    assert g.edges() == [(0, 1), (0, 2)]
    assert g.labels == ["0/0", "1/0", "1/1"]
    with pytest.raises(ArityMismatch):
        generalized_join(Graph.complete(2), [Graph.complete(1)])


@pytest.mark.graph
def test_fiber_bijection() -> None:
    assert fiber_bijection([0, 1, 0, 1], 2, 2).tolist() == [0, 2, 1, 3]  # type: ignore
    with pytest.raises(BadBijection):
        fiber_bijection([0, 0, 0, 1], 2, 2)  # type: ignore


@pytest.mark.graph
def test_edge_compare() -> None:
    diff = edge_compare(Graph.path(3), Graph.complete(3))
    assert diff
    assert diff.only_a == [] and diff.only_b == [("0", "2")]
    assert not edge_compare(Graph.path(3), Graph.path(3))
    assert not edge_compare(Graph.path(3), Graph.path(3), [2, 1, 0])
    with pytest.raises(BadBijection):
        edge_compare(Graph.path(3), Graph.path(3), [0, 0, 1])
    with pytest.raises(BadBijection):
        edge_compare(Graph.path(3), Graph.path(3), [0, 1])


# ## Output


@pytest.mark.graph
def test_json() -> None:
    g = Graph.path(3).with_meta("cyc:3", "deep")
    text = to_json(g)
    assert text.endswith("\n")
    doc = json.loads(text)
    assert doc == {
        "spec": "cyc:3",
        "graph_kind": "deep",
        "n": 3,
        "edges": [[0, 1], [1, 2]],
        "labels": ["0", "1", "2"],
    }


@pytest.mark.graph
def test_dot() -> None:
    g = enhanced_power_graph(build_group(Symmetric(3)))
    text = to_dot(g)
    assert text.count("--") == g.edge_count
    assert text.count("label=") == 6
    assert "enhanced" in text


@pytest.mark.graph
def test_write_graph(tmp_path) -> None:  # type: ignore
    g = Graph.cycle(4)
    path = write_graph(g, tmp_path / "out" / "c4.json", "json")
    assert json.loads(path.read_text())["n"] == 4
    assert write_graph(g, tmp_path / "c4.dot").read_text().count("--") == 4
    with pytest.raises(ValueError):
        write_graph(g, tmp_path / "c4.xml", "xml")
    assert sorted(p.name for p in tmp_path.iterdir()) == ["c4.dot", "out"]
