"""
On-disk cache of enumerated covers and materialized adjacency.

A cover file is a magic line, one line of JSON header, then the generator
images as little-endian int32 arrays (`generator_count x degree`). Files are
keyed by the presentation fingerprint, so a hit is the same table a cold run
would produce.
"""

from __future__ import annotations

import hashlib
import io
import json
import logging
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np

from .catalog import GroupSpec, SelfCover, format_spec, schur_cover_presentation
from .config import Config
from .fpgroup import PermRep, Presentation, coset_enumerate
from .graph import Graph, atomic_write, words_for

log = logging.getLogger(__name__)

MAGIC = b"DEEPGRAPH-COVER\n"
FORMAT_VERSION = 1


class CacheError(RuntimeError):
    "Exception raised for an unreadable or mismatched cache file."
    pass


@dataclass(frozen=True)
class CacheEntry:
    path: Path
    fingerprint: str
    spec: str
    degree: int
    generator_count: int


def encode_cover(pres: Presentation, rep: PermRep, spec: str = "") -> bytes:
    header = {
        "version": FORMAT_VERSION,
        "fingerprint": pres.fingerprint(),
        "spec": spec,
        "generators": list(rep.generator_names),
        "degree": rep.degree,
        "generator_count": rep.generator_count,
    }
    body = rep.generator_images.astype("<i4").tobytes()
    return MAGIC + json.dumps(header, sort_keys=True).encode() + b"\n" + body


def read_header(data: bytes) -> Tuple[Dict[str, Any], int]:
    "Parse the header; returns it with the offset of the image block."
    if not data.startswith(MAGIC):
        raise CacheError("missing cover file magic")
    end = data.find(b"\n", len(MAGIC))
    if end < 0:
        raise CacheError("truncated cover header")
    try:
        header = json.loads(data[len(MAGIC) : end])
    except json.JSONDecodeError as e:
        raise CacheError(f"bad cover header: {e}") from e
    if header.get("version") != FORMAT_VERSION:
        raise CacheError(f"unsupported cover format version {header.get('version')}")
    return header, end + 1


def decode_cover(data: bytes, pres: Optional[Presentation] = None) -> PermRep:
    """
    Rebuild a cover from its file contents.

    Args:
        data: file bytes
        pres: presentation the file must belong to

    Returns:
        The representation, identical to the stored one

    Raises:
        CacheError: for corrupt files or a fingerprint mismatch
    """
    header, offset = read_header(data)
    if pres is not None and header["fingerprint"] != pres.fingerprint():
        raise CacheError("cover file belongs to another presentation")
    k, degree = int(header["generator_count"]), int(header["degree"])
    body = data[offset:]
    if len(body) != 4 * k * degree:
        raise CacheError(f"expected {4 * k * degree} bytes of images, got {len(body)}")
    images = np.frombuffer(body, dtype="<i4").reshape(k, degree).astype(np.int32)
    try:
        return PermRep.from_images(images, header["generators"])
    except (ValueError, RuntimeError) as e:
        raise CacheError(f"cover images do not form a table: {e}") from e


class CoverCache:
    "Cache rooted at a directory, with `covers/` and `graphs/` below it."

    def __init__(self, root: Union[str, Path]):
        self.root = Path(root)

    @classmethod
    def from_config(cls, config: Config) -> CoverCache:
        return cls(config.ensure_cache_dir())

    @property
    def cover_dir(self) -> Path:
        return self.root / "covers"

    @property
    def graph_dir(self) -> Path:
        return self.root / "graphs"

    def cover_path(self, pres: Presentation) -> Path:
        return self.cover_dir / f"{pres.fingerprint()[:32]}.cover"

    def store_cover(self, pres: Presentation, rep: PermRep, spec: str = "") -> Path:
        path = self.cover_path(pres)
        try:
            atomic_write(path, encode_cover(pres, rep, spec))
        except OSError as e:
            raise CacheError(f"cannot write {path}: {e}") from e
        log.debug("stored cover %s (degree %d)", path, rep.degree)
        return path

    def load_cover(self, pres: Presentation) -> Optional[PermRep]:
        "The cached cover, or None on a miss or an unreadable file."
        path = self.cover_path(pres)
        if not path.exists():
            log.debug("cache miss %s", path)
            return None
        try:
            rep = decode_cover(path.read_bytes(), pres)
        except (CacheError, OSError) as e:
            log.warning("ignoring cache file %s: %s", path, e)
            return None
        log.debug("cache hit %s", path)
        return rep

    def entries(self) -> List[CacheEntry]:
        out = []
        for path in sorted(self.cover_dir.glob("*.cover")):
            try:
                with path.open("rb") as f:
                    head = f.read(len(MAGIC)) + f.readline()
                header, _ = read_header(head)
            except (CacheError, OSError) as e:
                log.warning("unreadable cache file %s: %s", path, e)
                continue
            out.append(
                CacheEntry(
                    path,
                    header["fingerprint"],
                    header.get("spec", ""),
                    int(header["degree"]),
                    int(header["generator_count"]),
                )
            )
        return out

    def clear(self) -> int:
        "Delete every cache file; returns how many were removed."
        removed = 0
        for d, pattern in ((self.cover_dir, "*.cover"), (self.graph_dir, "*.npz")):
            for path in d.glob(pattern):
                try:
                    path.unlink()
                except OSError as e:
                    raise CacheError(f"cannot remove {path}: {e}") from e
                removed += 1
        return removed

    # Adjacency

    def graph_path(self, spec: GroupSpec, kind: str, provenance: str) -> Path:
        key = hashlib.sha256(f"{format_spec(spec)}|{kind}|{provenance}".encode()).hexdigest()
        return self.graph_dir / f"{key[:32]}.npz"

    def store_graph(self, spec: GroupSpec, g: Graph, provenance: str) -> Path:
        path = self.graph_path(spec, g.kind, provenance)
        buf = io.BytesIO()
        np.savez_compressed(buf, rows=g.rows, n=np.array([g.n], np.int64))
        try:
            atomic_write(path, buf.getvalue())
        except OSError as e:
            raise CacheError(f"cannot write {path}: {e}") from e
        return path

    def load_graph(
        self, spec: GroupSpec, kind: str, provenance: str, labels: List[str]
    ) -> Optional[Graph]:
        path = self.graph_path(spec, kind, provenance)
        if not path.exists():
            return None
        try:
            with np.load(path) as data:
                n = int(data["n"][0])
                rows = data["rows"]
        except (OSError, KeyError, ValueError) as e:
            log.warning("ignoring cache file %s: %s", path, e)
            return None
        if n != len(labels) or rows.shape != (n, words_for(n)):
            log.warning("ignoring cache file %s: shape mismatch", path)
            return None
        log.debug("cache hit %s", path)
        return Graph(rows, n, labels, format_spec(spec), kind)


def warm(spec: GroupSpec, config: Config, cache: CoverCache) -> CacheEntry:
    """
    Enumerate the cover of `spec` and store it.

    Args:
        spec: catalog group with a cover presentation
        config: budgets
        cache: target cache

    Returns:
        The stored entry

    Raises:
        CacheError: if the group is its own cover
    """
    pres = schur_cover_presentation(spec)
    if isinstance(pres, SelfCover):
        raise CacheError(f"{format_spec(spec)} is its own cover; nothing to store")
    rep = cache.load_cover(pres)
    if rep is None:
        rep = coset_enumerate(pres, max_cosets=config.budget.max_cosets)
    path = cache.store_cover(pres, rep, format_spec(spec))
    return CacheEntry(path, pres.fingerprint(), format_spec(spec), rep.degree, rep.generator_count)
