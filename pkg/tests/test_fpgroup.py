import numpy as np
import pytest
from hypothesis import given
from hypothesis.strategies import integers

from deepgraph import Dihedral, Heisenberg, Symmetric, build_group, cover_images, schur_cover_presentation
from deepgraph.fpgroup import (
    BadImages,
    BudgetExceeded,
    InvalidWord,
    PermRep,
    Presentation,
    commutator_word,
    coset_enumerate,
    cyclic_reduce,
    element_order,
    eval_word,
    free_reduce,
    homomorphism_images,
    identify_quotient,
    kernel_elements,
    parse_word,
    point_orders,
    project_and_lift,
    relator_violations,
    word_inverse,
    word_power,
)

S3 = Presentation(("a", "b"), ((1, 1, 1), (2, 2), (1, 2, 1, 2)))


def dihedral_cover() -> PermRep:
    pres = schur_cover_presentation(Dihedral(4))
    assert isinstance(pres, Presentation)
    return coset_enumerate(pres)


@pytest.mark.fpgroup
def test_words() -> None:
    assert free_reduce((1, -1, 2, 3, -3)) == (2,)
    assert cyclic_reduce((-1, 2, 1)) == (2,)
    assert word_inverse((1, 2, -3)) == (3, -2, -1)
    assert word_power((1, 2), -2) == (-2, -1, -2, -1)
    assert commutator_word((1,), (2,)) == (-1, -2, 1, 2)
    assert parse_word("a^2 b^-1", ["a", "b"]) == (1, 1, -2)
    assert parse_word("a*b", ["a", "b"]) == (1, 2)
    with pytest.raises(InvalidWord):
        parse_word("c", ["a", "b"])
    with pytest.raises(InvalidWord):
        parse_word("a^x", ["a", "b"])
    with pytest.raises(InvalidWord):
        Presentation(("a",), ((1, 2),))


@pytest.mark.fpgroup
def test_fingerprint() -> None:
    same = Presentation(("a", "b"), ((1, 1, 1), (2, 2), (1, 2, 1, 2)))
    assert S3.fingerprint() == same.fingerprint()
    other = Presentation(("a", "b"), ((1, 1, 1), (2, 2)))
    assert S3.fingerprint() != other.fingerprint()


@pytest.mark.fpgroup
def test_enumerate_small() -> None:
    cyclic = coset_enumerate(Presentation(("a",), ((1,) * 6,)))
    assert cyclic.degree == 6
    rep = coset_enumerate(S3)
    assert rep.degree == 6
    assert relator_violations(rep, S3) == []
    assert coset_enumerate(S3, subgroup=[(2,)]).degree == 3


@pytest.mark.fpgroup
@pytest.mark.parametrize("spec", [Dihedral(4), Dihedral(6), Symmetric(4), Heisenberg(3, 1)])
def test_strategies_agree(spec) -> None:  # type: ignore
    pres = schur_cover_presentation(spec)
    assert isinstance(pres, Presentation)
    hlt = coset_enumerate(pres, strategy="hlt")
    felsch = coset_enumerate(pres, strategy="felsch")
    assert np.array_equal(hlt.table, felsch.table)


@pytest.mark.fpgroup
def test_budget() -> None:
    free_abelian = Presentation(("a", "b"), (commutator_word((1,), (2,)),))
    with pytest.raises(BudgetExceeded):
        coset_enumerate(free_abelian, max_cosets=200)
    pres = schur_cover_presentation(Symmetric(4))
    assert isinstance(pres, Presentation)
    with pytest.raises(BudgetExceeded):
        coset_enumerate(pres, max_cosets=20)


@pytest.mark.fpgroup
def test_arithmetic() -> None:
    rep = coset_enumerate(S3)
    a, b = rep.generator_point(0), rep.generator_point(1)
    assert rep.multiply(a, rep.inverse(a)) == 0
    assert rep.order(a) == 3 and rep.order(b) == 2
    assert rep.power(a, 3) == 0 and rep.power(a, -1) == rep.inverse(a)
    assert rep.commutator(a, b) != 0
    assert not rep.commutes(a, b)
    assert rep.conjugate(a, b) == rep.inverse(a)
    assert sorted(point_orders(rep).values()) == [1, 2, 2, 2, 3, 3]
    assert element_order(rep, eval_word(rep, (1, 2))) == 2
    assert eval_word(rep, (1, 1, 1)).point_image == 0
    assert rep.derived_subgroup([a, b]).shape[0] == 3


@pytest.mark.fpgroup
@given(integers(min_value=0, max_value=15), integers(min_value=0, max_value=15))
def test_table_matches_words(x: int, y: int) -> None:
    rep = dihedral_cover()
    assert rep.trace(0, rep.word_of(x)) == x
    assert rep.multiply(x, y) == rep.trace(x, rep.word_of(y))
    table = rep.multiplication_table(4096)
    assert table is not None and table[x, y] == rep.multiply(x, y)


@pytest.mark.fpgroup
def test_images_round_trip() -> None:
    rep = dihedral_cover()
    again = PermRep.from_images(rep.generator_images, rep.generator_names)
    assert np.array_equal(again.table, rep.table)


@pytest.mark.fpgroup
def test_dihedral_cover_projection() -> None:
    spec = Dihedral(4)
    pres = schur_cover_presentation(spec)
    assert isinstance(pres, Presentation)
    rep = coset_enumerate(pres)
    assert rep.degree == 16
    cp = project_and_lift(rep, pres)
    assert cp.quotient_order == 8
    assert cp.kernel.shape[0] == 2
    assert set(cp.kernel.tolist()) <= set(rep.central_points().tolist())
    assert all(cp.project(k) == cp.project(eval_word(rep, ())) for k in kernel_elements(rep, cp))

    G = build_group(spec)
    named = identify_quotient(rep, cp, cover_images(spec, G), G.mul, G.size)
    images = homomorphism_images(rep, cover_images(spec, G), G.mul)
    assert np.array_equal(named.projection, images)
    assert np.array_equal(named.projection[named.lift], np.arange(G.size))


@pytest.mark.fpgroup
def test_bad_images() -> None:
    spec = Dihedral(4)
    pres = schur_cover_presentation(spec)
    assert isinstance(pres, Presentation)
    rep = coset_enumerate(pres)
    G = build_group(spec)
    rotation = G.generators()[0]
    with pytest.raises(BadImages):
        homomorphism_images(rep, [0, rotation, 0], G.mul)
    with pytest.raises(BadImages):
        homomorphism_images(rep, [0, 0], G.mul)
