import numpy as np
import pytest

from deepgraph import (
    CacheError,
    Config,
    CoverCache,
    Cyclic,
    Dihedral,
    Graph,
    Presentation,
    Symmetric,
    build_group,
    coset_enumerate,
    decode_cover,
    encode_cover,
    engine_for,
    read_header,
    schur_cover_presentation,
    warm,
)


def dihedral_cover():  # type: ignore
    pres = schur_cover_presentation(Dihedral(4))
    assert isinstance(pres, Presentation)
    return pres, coset_enumerate(pres)


@pytest.mark.cache
def test_codec() -> None:
    pres, rep = dihedral_cover()
    data = encode_cover(pres, rep, "dih:8")
    header, offset = read_header(data)
    assert header["spec"] == "dih:8"
    assert header["degree"] == 16 and header["generator_count"] == 3
    assert len(data) - offset == 4 * 3 * 16
    again = decode_cover(data, pres)
    assert np.array_equal(again.table, rep.table)


@pytest.mark.cache
def test_codec_rejects() -> None:
    pres, rep = dihedral_cover()
    data = encode_cover(pres, rep)
    other = schur_cover_presentation(Symmetric(4))
    with pytest.raises(CacheError):
        decode_cover(data, other)  # type: ignore
    with pytest.raises(CacheError):
        decode_cover(data[:-4], pres)
    with pytest.raises(CacheError):
        decode_cover(b"not a cover", pres)
    with pytest.raises(CacheError):
        read_header(data.replace(b'"version": 1', b'"version": 9'))


@pytest.mark.cache
def test_store_load(cache: CoverCache) -> None:
    pres, rep = dihedral_cover()
    assert cache.load_cover(pres) is None
    path = cache.store_cover(pres, rep, "dih:8")
    assert path.exists() and path.parent == cache.cover_dir
    loaded = cache.load_cover(pres)
    assert loaded is not None and np.array_equal(loaded.table, rep.table)
    [entry] = cache.entries()
    assert entry.spec == "dih:8" and entry.degree == 16
    assert entry.fingerprint == pres.fingerprint()


@pytest.mark.cache
def test_corrupt_file_is_a_miss(cache: CoverCache) -> None:
    pres, rep = dihedral_cover()
    path = cache.store_cover(pres, rep)
    path.write_bytes(path.read_bytes()[:-8])
    assert cache.load_cover(pres) is None
    path.write_bytes(b"garbage")
    assert cache.load_cover(pres) is None
    assert cache.entries() == []


@pytest.mark.cache
def test_warm_and_clear(config: Config, cache: CoverCache) -> None:
    entry = warm(Symmetric(5), config, cache)
    assert entry.degree == 240
    assert entry.spec == "sym:5"
    assert [e.spec for e in cache.entries()] == ["sym:5"]
    with pytest.raises(CacheError):
        warm(Cyclic(3), config, cache)
    assert cache.clear() == 1
    assert cache.entries() == []


@pytest.mark.cache
def test_engine_uses_cache(config: Config, cache: CoverCache) -> None:
    first = engine_for(Dihedral(6), config, cache)
    assert len(cache.entries()) == 1
    second = engine_for(Dihedral(6), config, cache)
    assert np.array_equal(first.rep.table, second.rep.table)
    assert np.array_equal(first.projection.lift, second.projection.lift)


@pytest.mark.cache
def test_graph_store(cache: CoverCache) -> None:
    spec = Cyclic(5)
    labels = build_group(spec).labels()
    g = Graph.cycle(5).with_meta("cyc:5", "deep")
    cache.store_graph(spec, g, "closed-form")
    loaded = cache.load_graph(spec, "deep", "closed-form", labels)
    assert loaded is not None and loaded.edge_equal(g)
    assert loaded.labels == labels and loaded.kind == "deep"
    assert cache.load_graph(spec, "deep", "engine", labels) is None
    assert cache.load_graph(spec, "deep", "closed-form", labels[:3]) is None
    assert cache.clear() == 1
