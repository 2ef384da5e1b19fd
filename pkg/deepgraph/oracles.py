"""
Adjacency oracles of the deep commuting graph: two distinct elements are
adjacent when their preimages commute in a Schur cover. The kernel of a cover
is central, so the answer does not depend on which preimages are taken.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable, List, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt
from typing_extensions import Literal

from .catalog import (
    Abelian,
    AbelianGroup,
    AbelianP,
    Alternating,
    CoprimeProduct,
    Dihedral,
    DihedralGroup,
    GroupHandle,
    GroupSpec,
    Heisenberg,
    NotCoprime,
    PermutationGroup,
    ProductGroup,
    SelfCover,
    Symmetric,
    Unsupported,
    build_group,
    cover_images,
    format_spec,
    schur_cover_presentation,
)
from .config import Config
from .fpgroup import (
    CoverProjection,
    PermRep,
    Presentation,
    coset_enumerate,
    identify_quotient,
    project_and_lift,
)
from .operators import CapExceeded, pairwise_coprime
from .spin import SpinTable

if TYPE_CHECKING:
    from .cache import CoverCache

log = logging.getLogger(__name__)

Provenance = Literal["closed-form", "spin", "engine", "product"]
Mask = npt.NDArray[np.bool_]


class CoverOracle:
    """
    Adjacency predicate of the deep commuting graph of a fixed group.

    Subclasses implement `_lift_commute(x, ys)`, which is only asked about
    elements `ys` that commute with `x` in the group.
    """

    provenance: Provenance = "closed-form"

    def __init__(self, G: GroupHandle):
        self.G = G

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {format_spec(self.G.spec)} [{self.provenance}]>"

    def _lift_commute(self, x: int, ys: npt.NDArray[np.int64]) -> Mask:
        raise NotImplementedError

    def adjacent_many(self, x: int, ys: Sequence[int]) -> Mask:
        """
        Adjacency of `x` to each of `ys`.

        Args:
            x: element index
            ys: element indices

        Returns:
            Boolean array aligned with `ys`; `x` itself is never adjacent
        """
        ys = np.asarray(ys, dtype=np.int64)
        out = np.zeros(ys.shape[0], np.bool_)
        ok = (ys != x) & self.G.commutes(np.full(ys.shape[0], x), ys)
        idx = np.flatnonzero(ok)
        if idx.shape[0]:
            out[idx] = self._lift_commute(x, ys[idx])
        return out

    def adjacent(self, x: int, y: int) -> bool:
        return bool(self.adjacent_many(x, [y])[0])

    def __call__(self, x: int, y: int) -> bool:
        return self.adjacent(x, y)


class SelfCoverOracle(CoverOracle):
    "Groups with trivial multiplier: adjacency is commuting."

    def _lift_commute(self, x: int, ys: npt.NDArray[np.int64]) -> Mask:
        return np.ones(ys.shape[0], np.bool_)


# ## Closed forms


def abelian_oracle(p: int, ranks: Sequence[int]) -> Callable[[Sequence[int], Sequence[int]], bool]:
    """
    Closed-form adjacency on $C_{p^{r_1}} \\times \\dots \\times C_{p^{r_k}}$.

    Args:
        p: prime
        ranks: descending exponents

    Returns:
        Predicate on exponent tuples: for all `i < j`,
        $s_i t_j \\equiv s_j t_i \\pmod{p^{r_j}}$
    """
    moduli = [p**r for r in ranks]

    def adjacent(s: Sequence[int], t: Sequence[int]) -> bool:
        if tuple(s) == tuple(t):
            return False
        for i in range(len(moduli)):
            for j in range(i + 1, len(moduli)):
                if (s[i] * t[j] - s[j] * t[i]) % moduli[j]:
                    return False
        return True

    return adjacent


class AbelianOracle(CoverOracle):
    def __init__(self, G: AbelianGroup, p: int, ranks: Sequence[int]):
        super().__init__(G)
        self.codes = G.codes
        self.moduli = np.array([p**r for r in ranks], np.int64)

    def _lift_commute(self, x: int, ys: npt.NDArray[np.int64]) -> Mask:
        s = self.codes[x]
        t = self.codes[ys]
        ok = np.ones(ys.shape[0], np.bool_)
        k = self.moduli.shape[0]
        for i in range(k):
            for j in range(i + 1, k):
                ok &= (s[i] * t[:, j] - s[j] * t[:, i]) % self.moduli[j] == 0
        return ok


def dihedral_oracle(n: int) -> Callable[[Tuple[int, int], Tuple[int, int]], bool]:
    """
    Closed-form adjacency on the dihedral group of order `2n`.

    Args:
        n: number of rotations

    Returns:
        Predicate on codes `(s, i)` for $a^i b^s$
    """

    def commute(x: Tuple[int, int], y: Tuple[int, int]) -> bool:
        (s, i), (t, j) = x, y
        if s == 0 and t == 0:
            return True
        if s == 1 and t == 1:
            return (2 * (i - j)) % n == 0
        rot = i if s == 0 else j
        return (2 * rot) % n == 0

    def adjacent(x: Tuple[int, int], y: Tuple[int, int]) -> bool:
        if tuple(x) == tuple(y) or not commute(x, y):
            return False
        if n % 2:
            return True
        (s, i), (t, j) = x, y
        if s == 0 and t == 0:
            return True
        if s == 1 and t == 1:
            return False
        return (i if s == 0 else j) == 0

    return adjacent


class DihedralOracle(CoverOracle):
    def __init__(self, G: DihedralGroup):
        super().__init__(G)
        self.codes = G.codes
        self.odd = G.n % 2 == 1

    def _lift_commute(self, x: int, ys: npt.NDArray[np.int64]) -> Mask:
        if self.odd:
            return np.ones(ys.shape[0], np.bool_)
        s, i = self.codes[x]
        t, j = self.codes[ys, 0], self.codes[ys, 1]
        if s == 0:
            return (t == 0) | (i == 0)
        return (t == 0) & (j == 0)


def quaternion_oracle(n: int) -> Callable[[Tuple[int, int], Tuple[int, int]], bool]:
    "Adjacency on the quaternion group of order `4n`: distinct and commuting."

    def adjacent(x: Tuple[int, int], y: Tuple[int, int]) -> bool:
        (s, i), (t, j) = x, y
        if (s, i % (2 * n)) == (t, j % (2 * n)):
            return False
        if s == 0 and t == 0:
            return True
        if s == 1 and t == 1:
            return (2 * (i - j)) % (2 * n) == 0
        rot = i if s == 0 else j
        return (2 * rot) % (2 * n) == 0

    return adjacent


# ## Spin and engine


class SpinOracle(CoverOracle):
    "Symmetric and alternating groups through Clifford-algebra lifts."

    provenance: Provenance = "spin"

    def __init__(self, G: PermutationGroup, cap: int = 12):
        super().__init__(G)
        self.table = SpinTable(G, cap)

    def _lift_commute(self, x: int, ys: npt.NDArray[np.int64]) -> Mask:
        return self.table.commute_many(x, ys)


@dataclass
class EngineCover:
    "A Schur cover realized by coset enumeration and identified with its quotient."

    spec: GroupSpec
    presentation: Presentation
    rep: PermRep
    projection: CoverProjection

    @property
    def order(self) -> int:
        return self.rep.degree

    @property
    def multiplier_order(self) -> int:
        return int(self.projection.kernel.shape[0])


class EngineOracle(CoverOracle):
    provenance: Provenance = "engine"

    def __init__(self, G: GroupHandle, rep: PermRep, projection: CoverProjection):
        super().__init__(G)
        if projection.quotient_order != G.size:
            raise ValueError(
                f"cover quotient has order {projection.quotient_order}, group has {G.size}"
            )
        self.rep = rep
        self.projection = projection

    def _lift_commute(self, x: int, ys: npt.NDArray[np.int64]) -> Mask:
        lift = self.projection.lift
        return self.rep.commutes_many(np.full(ys.shape[0], lift[x]), lift[ys])

    def lift_commutator(self, x: int, y: int) -> int:
        "Point of $[\\tilde{x}, \\tilde{y}]$ in the cover."
        lift = self.projection.lift
        return self.rep.commutator(int(lift[x]), int(lift[y]))


def engine_oracle(G: GroupHandle, rep: PermRep, projection: CoverProjection) -> EngineOracle:
    return EngineOracle(G, rep, projection)


def engine_for(
    spec: GroupSpec, config: Optional[Config] = None, cache: Optional[CoverCache] = None
) -> EngineCover:
    """
    Enumerate (or load) the presented Schur cover of a catalog group and
    identify its quotient with the group's own elements.

    Args:
        spec: catalog group with a cover presentation
        config: budgets; defaults from the environment
        cache: cover cache to read and fill

    Returns:
        The identified cover

    Raises:
        Unsupported: if the group has no presentation or is its own cover
        BudgetExceeded: if enumeration exceeds `max_cosets`
    """
    config = config or Config.from_env()
    pres = schur_cover_presentation(spec)
    if isinstance(pres, SelfCover):
        raise Unsupported(f"{format_spec(spec)} is its own Schur cover")
    G = build_group(spec)
    rep = cache.load_cover(pres) if cache is not None else None
    if rep is None:
        log.debug("enumerating cover of %s", format_spec(spec))
        rep = coset_enumerate(pres, max_cosets=config.budget.max_cosets)
        if cache is not None:
            cache.store_cover(pres, rep, format_spec(spec))
    else:
        log.debug("cover of %s loaded from cache", format_spec(spec))
    rep.multiplication_table(config.budget.table_limit)
    cp = project_and_lift(rep, pres)
    cp = identify_quotient(rep, cp, cover_images(spec, G), G.mul, G.size)
    return EngineCover(spec, pres, rep, cp)


# ## Products


def coprime_product_oracle(
    factor_oracles: Sequence[Callable[[int, int], bool]], factor_handles: Sequence[GroupHandle]
) -> Callable[[Sequence[int], Sequence[int]], bool]:
    """
    Strong-product adjacency on coordinate tuples.

    Args:
        factor_oracles: adjacency of each factor
        factor_handles: the factors

    Returns:
        Predicate: distinct tuples whose coordinates are pairwise equal or adjacent

    Raises:
        NotCoprime: if the factor orders are not pairwise coprime
    """
    if not pairwise_coprime([h.size for h in factor_handles]):
        raise NotCoprime("factor orders are not pairwise coprime")

    def adjacent(x: Sequence[int], y: Sequence[int]) -> bool:
        if tuple(x) == tuple(y):
            return False
        return all(a == b or f(a, b) for f, a, b in zip(factor_oracles, x, y))

    return adjacent


class CoprimeProductOracle(CoverOracle):
    provenance: Provenance = "product"

    def __init__(self, G: ProductGroup, factors: Sequence[CoverOracle]):
        super().__init__(G)
        if not pairwise_coprime([f.size for f in G.factors]):
            raise NotCoprime(f"{format_spec(G.spec)} factors are not coprime")
        self.factors = list(factors)

    def _lift_commute(self, x: int, ys: npt.NDArray[np.int64]) -> Mask:
        G = self.G
        assert isinstance(G, ProductGroup)
        ok = np.ones(ys.shape[0], np.bool_)
        for f, cx, cys in zip(self.factors, G.coords(np.array([x])), G.coords(ys)):
            c = int(cx[0])
            same = cys == c
            ok &= same | f.adjacent_many(c, cys)
        return ok


# ## Dispatch and validation


def _is_self_cover(spec: GroupSpec) -> bool:
    try:
        return isinstance(schur_cover_presentation(spec), SelfCover)
    except Unsupported:
        return False


def oracle_for(
    spec: GroupSpec,
    config: Optional[Config] = None,
    cache: Optional[CoverCache] = None,
    prefer: Optional[Provenance] = None,
) -> CoverOracle:
    """
    Choose the oracle of a catalog group: closed forms where they exist, spin
    lifts for symmetric and alternating groups, coset enumeration otherwise.

    Args:
        spec: catalog group
        config: budgets
        cache: cover cache for engine-backed oracles
        prefer: `"engine"` to force the presented cover when one exists

    Returns:
        The oracle

    Raises:
        Unsupported: for groups with no available cover
        CapExceeded: for permutation groups beyond the spin cap
    """
    config = config or Config.from_env()
    G = build_group(spec)
    if prefer == "engine" and not _is_self_cover(spec):
        ec = engine_for(spec, config, cache)
        return EngineOracle(G, ec.rep, ec.projection)
    if isinstance(spec, (Abelian, CoprimeProduct)):
        assert isinstance(G, ProductGroup)
        parts = spec.parts if isinstance(spec, Abelian) else spec.factors
        oracle: CoverOracle = CoprimeProductOracle(
            G, [oracle_for(f, config, cache, prefer) for f in parts]
        )
    elif _is_self_cover(spec):
        oracle = SelfCoverOracle(G)
    elif isinstance(spec, AbelianP):
        assert isinstance(G, AbelianGroup)
        oracle = AbelianOracle(G, spec.p, spec.ranks)
    elif isinstance(spec, Dihedral):
        assert isinstance(G, DihedralGroup)
        oracle = DihedralOracle(G)
    elif isinstance(spec, Symmetric) or (
        isinstance(spec, Alternating) and spec.n not in (6, 7)
    ):
        assert isinstance(G, PermutationGroup)
        if G.n > config.budget.spin_cap:
            raise CapExceeded(f"{format_spec(spec)} exceeds spin cap {config.budget.spin_cap}")
        oracle = SpinOracle(G, config.budget.spin_cap)
    elif isinstance(spec, (Heisenberg, Alternating)):
        ec = engine_for(spec, config, cache)
        oracle = EngineOracle(G, ec.rep, ec.projection)
    else:
        raise Unsupported(f"no oracle for {format_spec(spec)}")
    log.debug("oracle for %s: %s", format_spec(spec), oracle.provenance)
    return oracle


def cross_validate(a: CoverOracle, b: CoverOracle, G: GroupHandle) -> List[Tuple[int, int]]:
    """
    Compare two oracles on every pair of distinct commuting elements.

    Args:
        a: first oracle
        b: second oracle
        G: the group both are defined on

    Returns:
        Disagreeing pairs `(x, y)` with `x < y`; empty certifies agreement
    """
    out = []
    for x in range(G.size):
        ys = G.commuting_partners(x)
        ys = ys[ys > x]
        if not ys.shape[0]:
            continue
        diff = a.adjacent_many(x, ys) != b.adjacent_many(x, ys)
        out.extend((x, int(y)) for y in ys[diff])
    if out:
        log.warning("%d disagreements between %r and %r", len(out), a, b)
    return out


def perturbed_adjacent(
    oracle: EngineOracle, x: int, y: int, rng: np.random.Generator
) -> bool:
    """
    Adjacency recomputed with both lifts multiplied by random kernel elements.

    Args:
        oracle: engine-backed oracle
        x: element index
        y: element index
        rng: random source

    Returns:
        Whether the perturbed lifts commute
    """
    kernel = oracle.projection.kernel
    lift = oracle.projection.lift
    kx, ky = (int(k) for k in rng.choice(kernel, size=2))
    lx = oracle.rep.multiply(int(lift[x]), kx)
    ly = oracle.rep.multiply(int(lift[y]), ky)
    return x != y and oracle.rep.commutes(lx, ly)
