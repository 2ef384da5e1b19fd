import numpy as np
import pytest
from hypothesis import given
from hypothesis.strategies import DataObject, data, sampled_from

from deepgraph import (
    Abelian,
    AbelianP,
    Alternating,
    CoprimeProduct,
    Cyclic,
    Dihedral,
    Heisenberg,
    InvalidParams,
    InvalidSpec,
    Metacyclic,
    MetacyclicParams,
    NotCoprime,
    Quaternion,
    SelfCover,
    SpecSyntaxError,
    Symmetric,
    Unsupported,
    build_group,
    cycles_to_perm,
    format_spec,
    is_p_group,
    metacyclic_multiplier_order,
    multiplier_order,
    pair_generates_cyclic,
    parse_spec,
    perm_cycles,
    perm_label,
    perm_parity,
    power_adjacent,
    schur_cover_presentation,
    sylow_factors,
)

from .strategies import elements

SMALL = [
    Cyclic(6),
    AbelianP(2, (2, 1)),
    Dihedral(4),
    Dihedral(5),
    Quaternion(2),
    Quaternion(3),
    Heisenberg(3, 1),
    Symmetric(4),
    Alternating(4),
    Metacyclic(MetacyclicParams.extraspecial(3)),
    CoprimeProduct((Dihedral(4), Cyclic(3))),
]


# ## Text form


@pytest.mark.catalog
@pytest.mark.parametrize(
    "text, spec",
    [
        ("cyc:7", Cyclic(7)),
        ("abelianp:3:2,1", AbelianP(3, (2, 1))),
        ("dih:8", Dihedral(4)),
        ("quat:8", Quaternion(2)),
        ("heis:5:1", Heisenberg(5, 1)),
        ("sym:6", Symmetric(6)),
        ("alt:8", Alternating(8)),
        ("meta:9:3:9:4", Metacyclic(MetacyclicParams(9, 3, 9, 4))),
        (
            "abelian(abelianp:2:1,1;abelianp:3:1)",
            Abelian((AbelianP(2, (1, 1)), AbelianP(3, (1,)))),
        ),
        ("prod(dih:8;cyc:9)", CoprimeProduct((Dihedral(4), Cyclic(9)))),
    ],
)
def test_parse_format(text: str, spec) -> None:  # type: ignore
    assert parse_spec(text) == spec
    assert format_spec(spec) == text
    assert str(spec) == text


@pytest.mark.catalog
@pytest.mark.parametrize(
    "text, error",
    [
        ("cyc:0", InvalidSpec),
        ("cyc:x", SpecSyntaxError),
        ("dih:7", InvalidSpec),
        ("dih:4", InvalidSpec),
        ("quat:6", InvalidSpec),
        ("abelianp:4:1", InvalidSpec),
        ("abelianp:2:1,2", InvalidSpec),
        ("heis:2:1", InvalidSpec),
        ("sym:2", InvalidSpec),
        ("meta:4:2:4:2", InvalidSpec),
        ("abelian(abelianp:2:1;abelianp:2:2)", NotCoprime),
        ("prod(dih:8;cyc:4)", NotCoprime),
        ("prod(dih:8;cyc:3", SpecSyntaxError),
        ("tor:3", SpecSyntaxError),
    ],
)
def test_parse_errors(text: str, error: type) -> None:
    with pytest.raises(error):
        parse_spec(text)


# ## Handles


@pytest.mark.catalog
@pytest.mark.parametrize("spec", SMALL)
def test_sizes(spec) -> None:  # type: ignore
    G = build_group(spec)
    assert G.size == spec.order == len(G)
    assert G.multiply(0, 0) == 0
    assert G.subgroup_closure(G.generators()).shape[0] == G.size


@pytest.mark.catalog
@given(data())
def test_group_axioms(d: DataObject) -> None:
    G = build_group(d.draw(sampled_from(SMALL)))
    x, y, z = (d.draw(elements(G)) for _ in range(3))
    assert G.multiply(G.multiply(x, y), z) == G.multiply(x, G.multiply(y, z))
    assert G.multiply(x, G.inverse(x)) == 0
    assert G.multiply(0, x) == x
    assert G.power(np.array([x]), int(G.orders()[x]))[0] == 0


@pytest.mark.catalog
@given(data())
def test_commuting_partners(d: DataObject) -> None:
    G = build_group(d.draw(sampled_from(SMALL)))
    x = d.draw(elements(G))
    brute = np.flatnonzero(G.commutes(np.full(G.size, x), G.all()))
    assert np.array_equal(G.commuting_partners(x), brute)


@pytest.mark.catalog
def test_symmetric_orders() -> None:
    G = build_group(Symmetric(4))
    counts = np.bincount(G.orders())
    assert counts[2] == 9 and counts[3] == 8 and counts[4] == 6
    assert G.label(0) == "e"
    assert G.label(G.from_cycles((1, 2, 3))) == "(1,2,3)"


@pytest.mark.catalog
@pytest.mark.parametrize(
    "spec, size",
    [(Dihedral(4), 2), (Quaternion(2), 2), (Heisenberg(3, 1), 3), (Symmetric(4), 1), (Dihedral(5), 1)],
)
def test_center(spec, size: int) -> None:  # type: ignore
    assert build_group(spec).center().shape[0] == size


@pytest.mark.catalog
def test_derived_and_classes() -> None:
    assert build_group(Symmetric(4)).derived_subgroup().shape[0] == 12
    assert build_group(Heisenberg(3, 1)).derived_subgroup().shape[0] == 3
    assert len(build_group(Symmetric(5)).conjugacy_classes()) == 7
    assert len(build_group(Dihedral(4)).conjugacy_classes()) == 5


@pytest.mark.catalog
def test_cyclic_predicates() -> None:
    C = build_group(Cyclic(6))
    assert C.is_cyclic()
    assert pair_generates_cyclic(C, 2, 3)
    V = build_group(AbelianP(2, (1, 1)))
    assert not V.is_cyclic()
    assert not pair_generates_cyclic(V, 1, 2)
    D = build_group(Dihedral(4))
    a = D.generators()[0]
    assert power_adjacent(D, a, D.multiply(a, a))
    assert not power_adjacent(D, a, D.generators()[1])


@pytest.mark.catalog
def test_product_coordinates() -> None:
    G = build_group(CoprimeProduct((Dihedral(4), Cyclic(3))))
    x = G.combine([np.array([3]), np.array([2])])[0]
    assert G.element(int(x)) == (3, 2)
    assert int(x) == 3 * 3 + 2
    assert not G.abelian


@pytest.mark.catalog
@pytest.mark.parametrize(
    "spec, code",
    [
        (AbelianP(3, (1, 1)), [0, 3]),
        (AbelianP(3, (1, 1)), [-1, 0]),
        (AbelianP(2, (2, 1)), [4, 0]),
        (AbelianP(2, (2, 1)), [0, 0, 0]),
        (Dihedral(5), [0, 5]),
        (Dihedral(5), [2, 0]),
    ],
)
def test_index_of_rejects_non_elements(spec, code) -> None:  # type: ignore
    G = build_group(spec)
    with pytest.raises(KeyError):
        G.index_of([code])  # type: ignore
    with pytest.raises(KeyError):
        G.index_of([[0] * len(code), code])  # type: ignore


@pytest.mark.catalog
def test_index_of_round_trip() -> None:
    G = build_group(AbelianP(3, (2, 1)))
    idx = G.index_of(G.codes)  # type: ignore
    assert idx.tolist() == list(range(G.size))
    assert G.element(int(G.index_of([[3, 1]])[0])) == (3, 1)  # type: ignore


@pytest.mark.catalog
def test_is_p_group() -> None:
    assert is_p_group(AbelianP(3, (2, 1))) == 3
    assert is_p_group(Dihedral(4)) == 2
    assert is_p_group(Heisenberg(5, 1)) == 5
    assert is_p_group(Symmetric(3)) is None
    assert is_p_group(Cyclic(1)) is None


# ## Permutations


@pytest.mark.catalog
def test_permutation_helpers() -> None:
    p = cycles_to_perm(5, [(1, 2, 3), (4, 5)])
    assert p == (1, 2, 0, 4, 3)
    assert perm_cycles(p) == [(1, 2, 3), (4, 5)]
    assert perm_label(p) == "(1,2,3)(4,5)"
    assert perm_label(tuple(range(4))) == "e"
    assert perm_parity(p) == 1
    assert perm_parity(cycles_to_perm(4, [(1, 2), (3, 4)])) == 0


@pytest.mark.catalog
def test_alternating_is_even() -> None:
    A = build_group(Alternating(5))
    assert A.size == 60
    assert not A.parity(A.all()).any()
    assert A.support(A.from_cycles((1, 2, 3))) == 0b111


# ## Multipliers


@pytest.mark.catalog
@pytest.mark.parametrize(
    "spec, k",
    [
        (Dihedral(4), 2),
        (Dihedral(5), 1),
        (Quaternion(3), 1),
        (AbelianP(3, (2, 1)), 3),
        (AbelianP(2, (1, 1, 1)), 8),
        (Heisenberg(3, 1), 9),
        (Symmetric(5), 2),
        (Alternating(6), 6),
        (Alternating(8), 2),
        (Cyclic(12), 1),
    ],
)
def test_multiplier_order(spec, k: int) -> None:  # type: ignore
    assert multiplier_order(spec) == k


@pytest.mark.catalog
def test_metacyclic_formula() -> None:
    for n in range(3, 20):
        assert metacyclic_multiplier_order(MetacyclicParams.dihedral(n)) == (2 if n % 2 == 0 else 1)
    for n in range(2, 20):
        assert metacyclic_multiplier_order(MetacyclicParams.quaternion(n)) == 1
    assert metacyclic_multiplier_order(MetacyclicParams(6, 2, 6, 5)) == 2
    with pytest.raises(InvalidParams):
        metacyclic_multiplier_order(MetacyclicParams(4, 2, 4, 2))
    with pytest.raises(InvalidParams):
        MetacyclicParams(0, 2, 4, 3).validate()


@pytest.mark.catalog
def test_cover_presentations() -> None:
    assert isinstance(schur_cover_presentation(Quaternion(2)), SelfCover)
    assert isinstance(schur_cover_presentation(Dihedral(5)), SelfCover)
    assert isinstance(schur_cover_presentation(Cyclic(9)), SelfCover)
    with pytest.raises(Unsupported):
        schur_cover_presentation(Alternating(5))


@pytest.mark.catalog
def test_sylow_factors() -> None:
    spec = CoprimeProduct((Dihedral(4), Cyclic(9)))
    assert sylow_factors(spec) == {2: [Dihedral(4)], 3: [Cyclic(9)]}
    assert sylow_factors(Cyclic(12)) == {2: [Cyclic(4)], 3: [Cyclic(3)]}
    with pytest.raises(Unsupported):
        sylow_factors(Symmetric(3))
