import numpy as np
import pytest

from deepgraph import (
    AbelianP,
    Alternating,
    Config,
    CoprimeProduct,
    CoverCache,
    Cyclic,
    Dihedral,
    Heisenberg,
    NotCoprime,
    Quaternion,
    SpinOracle,
    Symmetric,
    Unsupported,
    abelian_oracle,
    build_group,
    coprime_product_oracle,
    cross_validate,
    deep_commuting_graph,
    dihedral_oracle,
    engine_for,
    oracle_for,
    perturbed_adjacent,
    quaternion_oracle,
)
from deepgraph.testing import heisenberg_k1_expected

from .strategies import rng_for

# ## Closed forms


@pytest.mark.oracles
def test_abelian_closed_form() -> None:
    adj = abelian_oracle(3, (2, 1))
    assert not adj((1, 0), (0, 1))
    assert adj((3, 0), (0, 1))
    assert adj((1, 0), (2, 0))
    assert not adj((1, 1), (1, 1))


@pytest.mark.oracles
def test_dihedral_closed_form() -> None:
    adj = dihedral_oracle(4)
    assert not adj((0, 2), (1, 0))
    assert adj((0, 0), (1, 3))
    assert adj((0, 1), (0, 3))
    assert not adj((1, 0), (1, 2))
    odd = dihedral_oracle(5)
    assert odd((1, 0), (0, 0))
    assert not odd((1, 0), (1, 1))


@pytest.mark.oracles
def test_quaternion_closed_form() -> None:
    adj = quaternion_oracle(2)
    assert not adj((0, 1), (1, 0))
    assert adj((0, 2), (1, 0))
    assert adj((1, 0), (1, 2))
    assert not adj((1, 1), (1, 1))


@pytest.mark.oracles
def test_closed_forms_match_oracles(config: Config) -> None:
    for spec, form in (
        (AbelianP(3, (2, 1)), abelian_oracle(3, (2, 1))),
        (Dihedral(4), dihedral_oracle(4)),
        (Dihedral(6), dihedral_oracle(6)),
        (Quaternion(3), quaternion_oracle(3)),
    ):
        G = build_group(spec)
        oracle = oracle_for(spec, config)
        for x in range(G.size):
            mask = oracle.adjacent_many(x, G.all())
            expected = [form(G.element(x), G.element(y)) for y in range(G.size)]  # type: ignore
            assert mask.tolist() == expected, spec


# ## Dispatch


@pytest.mark.oracles
@pytest.mark.parametrize(
    "spec, provenance",
    [
        (Cyclic(5), "closed-form"),
        (AbelianP(2, (1, 1)), "closed-form"),
        (Quaternion(2), "closed-form"),
        (Dihedral(4), "closed-form"),
        (Symmetric(4), "spin"),
        (Alternating(5), "spin"),
        (Heisenberg(3, 1), "engine"),
        (CoprimeProduct((Dihedral(4), Cyclic(3))), "product"),
    ],
)
def test_provenance(spec, provenance: str, config: Config) -> None:  # type: ignore
    assert oracle_for(spec, config).provenance == provenance


@pytest.mark.oracles
def test_prefer_engine(config: Config, cache: CoverCache) -> None:
    assert oracle_for(Dihedral(4), config, cache, prefer="engine").provenance == "engine"
    assert oracle_for(Cyclic(4), config, cache, prefer="engine").provenance == "closed-form"


@pytest.mark.oracles
def test_no_oracle(config: Config) -> None:
    with pytest.raises(Unsupported):
        engine_for(Cyclic(5), config)
    with pytest.raises(Unsupported):
        engine_for(Quaternion(2), config)


@pytest.mark.oracles
@pytest.mark.parametrize("spec", [Symmetric(4), Dihedral(6), AbelianP(2, (2, 1))])
def test_cross_validation(spec, config: Config, cache: CoverCache) -> None:  # type: ignore
    G = build_group(spec)
    a = oracle_for(spec, config, cache)
    b = oracle_for(spec, config, cache, prefer="engine")
    assert a.provenance != "engine" and b.provenance == "engine"
    assert cross_validate(a, b, G) == []


@pytest.mark.oracles
def test_cross_validation_reports_disagreement(config: Config) -> None:
    G = build_group(Dihedral(4))
    deep = oracle_for(Dihedral(4), config)
    plain = oracle_for(Dihedral(4), config)
    plain._lift_commute = lambda x, ys: np.ones(ys.shape[0], np.bool_)  # type: ignore
    diff = cross_validate(deep, plain, G)
    assert diff
    assert all(x < y for x, y in diff)


# ## Engine


@pytest.mark.oracles
def test_engine_orders(config: Config, cache: CoverCache) -> None:
    s4 = engine_for(Symmetric(4), config, cache)
    assert s4.order == 48
    assert s4.multiplier_order == 2
    h = engine_for(Heisenberg(3, 1), config, cache)
    assert h.order == 243
    assert h.multiplier_order == 9


@pytest.mark.oracles
def test_heisenberg_deep_graph(config: Config, cache: CoverCache) -> None:
    G = build_group(Heisenberg(3, 1))
    deep = deep_commuting_graph(G, oracle_for(Heisenberg(3, 1), config, cache))
    assert deep.edge_equal(heisenberg_k1_expected(3))


@pytest.mark.oracles
def test_lift_independence(config: Config, cache: CoverCache) -> None:
    spec = Dihedral(4)
    G = build_group(spec)
    oracle = oracle_for(spec, config, cache, prefer="engine")
    rng = rng_for(7)
    for x in range(G.size):
        for y in range(G.size):
            assert perturbed_adjacent(oracle, x, y, rng) == oracle.adjacent(x, y)  # type: ignore


@pytest.mark.oracles
def test_lift_commutator_in_kernel(config: Config, cache: CoverCache) -> None:
    spec = Symmetric(4)
    G = build_group(spec)
    oracle = oracle_for(spec, config, cache, prefer="engine")
    kernel = set(oracle.projection.kernel.tolist())  # type: ignore
    for x in range(G.size):
        for y in G.commuting_partners(x):
            c = oracle.lift_commutator(x, int(y))  # type: ignore
            assert c in kernel
            assert (c == 0) == (x == y or oracle.adjacent(x, int(y)))


# ## Spin and products


@pytest.mark.oracles
def test_spin_oracle_pairs() -> None:
    G = build_group(Symmetric(5))
    a, b = G.from_cycles((1, 2)), G.from_cycles((3, 4))  # type: ignore
    c = G.from_cycles((3, 4, 5))  # type: ignore
    oracle = SpinOracle(G)  # type: ignore
    assert not oracle(a, b)
    assert oracle(a, c)
    assert not oracle(a, a)


@pytest.mark.oracles
def test_product_oracle(config: Config) -> None:
    spec = CoprimeProduct((Dihedral(4), Cyclic(3)))
    G = build_group(spec)
    D, C = build_group(Dihedral(4)), build_group(Cyclic(3))
    form = coprime_product_oracle([oracle_for(Dihedral(4), config), oracle_for(Cyclic(3), config)], [D, C])
    oracle = oracle_for(spec, config)
    for x in range(G.size):
        mask = oracle.adjacent_many(x, G.all())
        assert mask.tolist() == [form(G.element(x), G.element(y)) for y in range(G.size)]  # type: ignore
    with pytest.raises(NotCoprime):
        coprime_product_oracle([], [D, build_group(Cyclic(4))])
