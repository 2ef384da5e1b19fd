import csv
from itertools import combinations

import networkx as nx
import pytest
from hypothesis import given

from deepgraph import (
    Budget,
    CapExceeded,
    Config,
    Graph,
    NotPerfect,
    Perfect,
    Symmetric,
    Unknown,
    basic_stats,
    build_group,
    clique_and_chromatic,
    components,
    components_and_diameter,
    diameter,
    dominant_vertices,
    max_clique,
    odd_antihole_search,
    odd_hole_search,
    oracle_for,
    parse_edge_list,
    perfectness_verdict,
    reduced_graph,
    report_row,
    twin_contraction,
    universality_embed,
    verify_odd_antihole,
    verify_odd_hole,
    write_report_csv,
)
from deepgraph.testing import S6_HOLE, elements_of

from .strategies import graphs


def petersen() -> Graph:
    return Graph.from_edges(10, nx.petersen_graph().edges())


def star(leaves: int) -> Graph:
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


# ## Stats


@pytest.mark.analytics
def test_basic_stats() -> None:
    c5 = basic_stats(Graph.cycle(5))
    assert c5.is_eulerian and not c5.is_complete
    k5 = basic_stats(Graph.complete(5))
    assert k5.is_eulerian and k5.is_complete
    assert not basic_stats(Graph.complete(4)).is_eulerian
    assert not basic_stats(Graph.path(3)).is_eulerian
    triangles = Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)])
    assert not basic_stats(triangles).is_eulerian
    isolated = Graph.from_edges(4, [(0, 1), (1, 2), (0, 2)])
    assert basic_stats(isolated).is_eulerian


@pytest.mark.analytics
def test_dominant_and_reduced() -> None:
    g = star(3)
    assert dominant_vertices(g).tolist() == [0]
    reduced, keep = reduced_graph(g)
    assert keep.tolist() == [1, 2, 3]
    assert reduced.edge_count == 0
    assert dominant_vertices(Graph.complete(3)).tolist() == [0, 1, 2]


@pytest.mark.analytics
def test_components() -> None:
    g = Graph.from_edges(5, [(0, 1), (3, 4)])
    assert [c.tolist() for c in components(g)] == [[0, 1], [2], [3, 4]]
    comps, diams = components_and_diameter(g)
    assert len(comps) == 3 and diams == [1, 0, 1]


@pytest.mark.analytics
def test_twin_contraction() -> None:
    h, class_map = twin_contraction(Graph.complete(3))
    assert h.n == 1 and class_map.tolist() == [0, 0, 0]
    g = Graph.from_edges(4, [(0, 1), (0, 2), (1, 2), (2, 3)])
    h, class_map = twin_contraction(g)
    assert h.n == 3
    assert class_map.tolist() == [0, 0, 1, 2]


@pytest.mark.analytics
def test_diameter() -> None:
    assert diameter(Graph.path(5)) == 4
    assert diameter(Graph.cycle(6)) == 3
    assert diameter(Graph.complete(4)) == 1
    assert diameter(Graph.complete(1)) == 0
    assert diameter(star(4)) == 2


@pytest.mark.analytics
@given(graphs())
def test_diameter_matches_networkx(g: Graph) -> None:
    for comp in components(g):
        nxg = g.to_networkx().subgraph(comp.tolist())
        sub = Graph.from_edges(
            comp.shape[0], [(comp.tolist().index(a), comp.tolist().index(b)) for a, b in nxg.edges()]
        )
        assert diameter(sub) == nx.diameter(nxg)


# ## Holes


@pytest.mark.analytics
def test_hole_search() -> None:
    hole = odd_hole_search(Graph.cycle(5))
    assert hole is not None and sorted(hole) == [0, 1, 2, 3, 4]
    assert verify_odd_hole(Graph.cycle(5), hole)
    assert odd_hole_search(Graph.cycle(6)) is None
    assert odd_hole_search(Graph.complete(6)) is None
    long = odd_hole_search(Graph.cycle(9))
    assert long is not None and len(long) == 9
    assert odd_hole_search(Graph.cycle(9), max_len=7) is None
    with pytest.raises(ValueError):
        odd_hole_search(Graph.cycle(5), max_len=3)


@pytest.mark.analytics
def test_hole_ignores_dominant_vertices() -> None:
    g = Graph.from_edges(6, [(i, (i + 1) % 5) for i in range(5)] + [(5, i) for i in range(5)])
    hole = odd_hole_search(g)
    assert hole is not None and 5 not in hole
    assert verify_odd_hole(g, hole)


@pytest.mark.analytics
def test_antihole_search() -> None:
    g = Graph.cycle(7).complement()
    assert odd_hole_search(g) is None
    anti = odd_antihole_search(g)
    assert anti is not None and len(anti) == 7
    assert verify_odd_antihole(g, anti)
    assert not verify_odd_hole(g, anti)


@pytest.mark.analytics
def test_verify_rejects() -> None:
    c = Graph.cycle(7)
    assert not verify_odd_hole(c, [0, 1, 2, 3])
    assert not verify_odd_hole(c, [0, 1, 2, 3, 4])
    assert not verify_odd_hole(Graph.cycle(6), list(range(6)))
    assert verify_odd_hole(c, list(range(7)))


@pytest.mark.analytics
@given(graphs(max_n=7))
def test_holes_are_induced(g: Graph) -> None:
    hole = odd_hole_search(g)
    if hole is not None:
        assert verify_odd_hole(g, hole)
    else:
        for k in (5, 7):
            for vs in combinations(range(g.n), k):
                sub = g.to_networkx().subgraph(vs)
                assert not (nx.is_connected(sub) and all(d == 2 for _, d in sub.degree()))


# ## Clique and chromatic


@pytest.mark.analytics
def test_exact_solvers() -> None:
    assert clique_and_chromatic(petersen()) == (2, 3)
    assert clique_and_chromatic(Graph.cycle(5)) == (2, 3)
    assert clique_and_chromatic(Graph.complete(5)) == (5, 5)
    assert sorted(max_clique(Graph.from_edges(4, [(0, 1), (1, 2), (0, 2), (2, 3)]))) == [0, 1, 2]
    with pytest.raises(CapExceeded):
        clique_and_chromatic(Graph.cycle(10), cap=8)


# ## Perfectness


@pytest.mark.analytics
def test_perfectness() -> None:
    v = perfectness_verdict(Graph.cycle(6))
    assert isinstance(v, Perfect)
    assert v.contracted_size == 6 and v.clique == 2 and v.chromatic == 2
    hole = perfectness_verdict(Graph.cycle(5))
    assert isinstance(hole, NotPerfect) and hole.kind == "hole"
    anti = perfectness_verdict(Graph.cycle(7).complement())
    assert isinstance(anti, NotPerfect) and anti.kind == "antihole"
    assert anti.status == "not-perfect"


@pytest.mark.analytics
def test_perfectness_budget() -> None:
    assert isinstance(perfectness_verdict(petersen(), Budget(hole_steps=1)), Unknown)
    assert isinstance(perfectness_verdict(Graph.cycle(5), Budget(max_vertices=3)), Unknown)
    known = perfectness_verdict(Graph.cycle(5), Budget(max_vertices=3), witness=[0, 1, 2, 3, 4])
    assert isinstance(known, NotPerfect)


@pytest.mark.analytics
def test_symmetric_hole_witness(config: Config) -> None:
    G = build_group(Symmetric(6))
    oracle = oracle_for(Symmetric(6), config)
    xs = elements_of(G, S6_HOLE)  # type: ignore
    edges = [(i, j) for i in range(5) for j in range(i + 1, 5) if oracle(xs[i], xs[j])]
    assert verify_odd_hole(Graph.from_edges(5, edges), list(range(5)))


# ## Universality


@pytest.mark.analytics
@pytest.mark.parametrize("text, order", [("3:0-1,1-2", 900), ("2:", 36), ("1:", 4)])
def test_universality_abelian(text: str, order: int, config: Config) -> None:
    result = universality_embed(parse_edge_list(text), "abelian", config)
    assert result.spec.order == order
    assert len(result.vertex_map) == len(result.labels) == int(text.split(":")[0])


@pytest.mark.analytics
def test_universality_nonabelian(config: Config) -> None:
    result = universality_embed(parse_edge_list("2:"), "nonabelian", config)
    assert result.spec.order == 8 * 27
    assert not build_group(result.spec).abelian
    assert len(set(result.vertex_map)) == 2


@pytest.mark.analytics
def test_universality_limits(config: Config) -> None:
    with pytest.raises(CapExceeded):
        universality_embed(Graph.path(5), "abelian", config)
    with pytest.raises(ValueError):
        universality_embed(Graph.empty(0), "abelian", config)


@pytest.mark.analytics
def test_parse_edge_list() -> None:
    g = parse_edge_list("4:0-1,2-3")
    assert g.n == 4 and g.edges() == [(0, 1), (2, 3)]
    assert parse_edge_list("3:").edge_count == 0
    for bad in ("x:0-1", "3:0", "3:0-a", "3:0-5"):
        with pytest.raises(ValueError):
            parse_edge_list(bad)


# ## Reports


@pytest.mark.analytics
def test_report_rows(tmp_path) -> None:  # type: ignore
    row = report_row(Graph.cycle(5).with_meta("cyc:5", "deep"))
    assert row["verdict"] == "not-perfect"
    assert len(row["witness"].split()) == 5
    assert row["components"] == "1" and row["diameter"] == "2"
    assert row["eulerian"] == "true"
    quick = report_row(Graph.complete(3), verdict=False)
    assert quick["verdict"] == "" and quick["dominant"] == "3"

    path = tmp_path / "report.csv"
    write_report_csv([row], path, append=True)
    write_report_csv([quick], path, append=True)
    with path.open() as f:
        rows = list(csv.DictReader(f))
    assert [r["spec"] for r in rows] == ["cyc:5", ""]
    write_report_csv([row], path)
    assert len(path.read_text().splitlines()) == 2
