"""
Executable claims about the graph hierarchy of the catalog groups.

Each claim is a function registered with `@claim(id, reference)`. It runs on
the finite grids of `ClaimGrid`, returns a short detail string on success and
raises `ClaimFailure` with a serialisable counterexample otherwise. Budget
exhaustion turns a claim into `skipped`, never `pass`.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import re
import time
from dataclasses import asdict, dataclass, field
from itertools import permutations
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
from colorama import Fore, Style
from typing_extensions import Literal

from .analytics import (
    NotPerfect,
    Perfect,
    Unknown,
    basic_stats,
    closed_neighbourhood_sizes,
    components,
    components_and_diameter,
    dominant_vertices,
    perfectness_verdict,
    reduced_graph,
    universality_embed,
    verify_odd_hole,
)
from .cache import CoverCache
from .catalog import (
    Abelian,
    AbelianGroup,
    AbelianP,
    Alternating,
    Dihedral,
    GroupHandle,
    GroupSpec,
    Heisenberg,
    MetacyclicParams,
    PermutationGroup,
    Symmetric,
    build_group,
    cycles_to_perm,
    extraspecial_exponent_p2_multiplier,
    format_spec,
    is_p_group,
    metacyclic_multiplier_order,
    multiplier_order,
    pair_generates_cyclic,
    perm_cycles,
    perm_parity,
    sylow_factors,
)
from .config import Config
from .fpgroup import BudgetExceeded
from .graph import (
    Graph,
    Hierarchy,
    build_graph,
    cover_commuting_graph,
    edge_compare,
    fiber_bijection,
    generalized_join,
    strong_product,
)
from .operators import CapExceeded, factorial, factorize, is_prime, lcm_list, prod, smallest_primes
from .oracles import CoverOracle, EngineCover, EngineOracle, cross_validate, engine_for, oracle_for, perturbed_adjacent
from .spin import spin_commute
from .testing import (
    A8_HOLE,
    S6_HOLE,
    abelian_grid,
    catalog_grid,
    dihedral_grid,
    disjoint_pair,
    elements_of,
    engine_grid,
    extraspecial_grid,
    heisenberg_grid,
    heisenberg_k1_expected,
    mixed_abelian_grid,
    nilpotent_products,
    quaternion_grid,
    small_graphs,
)

log = logging.getLogger(__name__)

Status = Literal["pass", "fail", "skipped"]
Mode = Literal["full", "spot"]


class ClaimFailure(AssertionError):
    "Exception raised by a check, carrying the inputs that refute the claim."

    def __init__(self, message: str, counterexample: Dict[str, Any]):
        super().__init__(message)
        self.counterexample = counterexample


class ClaimTimeout(RuntimeError):
    "Exception raised when a claim runs past its time limit."
    pass


class ClaimSkipped(RuntimeError):
    "Exception raised when a check cannot decide within its budget."
    pass


def fail(message: str, **counterexample: Any) -> None:
    raise ClaimFailure(message, counterexample)


@dataclass(frozen=True)
class Claim:
    claim_id: str
    reference: str
    mode: Mode
    check: Callable[[ClaimContext], Optional[str]]


REGISTRY: Dict[str, Claim] = {}


def claim(
    claim_id: str, reference: str, mode: Mode = "full"
) -> Callable[[Callable[[ClaimContext], Optional[str]]], Callable[[ClaimContext], Optional[str]]]:
    "Register a check under `claim_id`."

    def register(fn: Callable[[ClaimContext], Optional[str]]) -> Callable[[ClaimContext], Optional[str]]:
        if claim_id in REGISTRY:
            raise ValueError(f"claim {claim_id} registered twice")
        REGISTRY[claim_id] = Claim(claim_id, reference, mode, fn)
        return fn

    return register


class ClaimContext:
    """
    Shared state of one verification run: configuration, cover cache, seeded
    random source and memoized groups, oracles, covers and graphs.
    """

    def __init__(self, config: Config, cache: Optional[CoverCache] = None):
        self.config = config
        self.grid = config.grid
        self.budget = config.budget
        self.cache = cache
        self.rng = np.random.default_rng(config.grid.seed)
        self.deadline: Optional[float] = None
        self._oracles: Dict[Tuple[GroupSpec, Optional[str]], CoverOracle] = {}
        self._engines: Dict[GroupSpec, EngineCover] = {}
        self._graphs: Dict[Tuple[GroupSpec, str, Optional[str]], Graph] = {}

    def start(self) -> None:
        self.deadline = time.monotonic() + self.budget.time_limit
        self.rng = np.random.default_rng(self.grid.seed)

    def tick(self) -> None:
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise ClaimTimeout(f"time limit of {self.budget.time_limit:.0f}s exceeded")

    def group(self, spec: GroupSpec) -> GroupHandle:
        return build_group(spec)

    def oracle(self, spec: GroupSpec, prefer: Optional[str] = None) -> CoverOracle:
        key = (spec, prefer)
        if key not in self._oracles:
            self.tick()
            self._oracles[key] = oracle_for(spec, self.config, self.cache, prefer)  # type: ignore
        return self._oracles[key]

    def engine(self, spec: GroupSpec) -> EngineCover:
        if spec not in self._engines:
            self.tick()
            self._engines[spec] = engine_for(spec, self.config, self.cache)
        return self._engines[spec]

    def graph(self, spec: GroupSpec, kind: str, prefer: Optional[str] = None) -> Graph:
        key = (spec, kind, prefer)
        if key in self._graphs:
            return self._graphs[key]
        self.tick()
        G = self.group(spec)
        if G.size > self.budget.max_vertices:
            raise ClaimSkipped(f"{format_spec(spec)} has {G.size} elements")
        oracle = self.oracle(spec, prefer) if kind == "deep" else None
        g = None
        if oracle is not None and self.cache is not None:
            g = self.cache.load_graph(spec, kind, oracle.provenance, G.labels())
        if g is None:
            g = build_graph(G, kind, oracle)
            if oracle is not None and self.cache is not None:
                self.cache.store_graph(spec, g, oracle.provenance)
        self._graphs[key] = g
        return g

    def deep(self, spec: GroupSpec, prefer: Optional[str] = None) -> Graph:
        return self.graph(spec, "deep", prefer)

    def hierarchy(self, spec: GroupSpec) -> Hierarchy:
        return Hierarchy(
            self.graph(spec, "power"),
            self.graph(spec, "enhanced"),
            self.deep(spec),
            self.graph(spec, "commuting"),
        )


# ## Reports


@dataclass
class ClaimResult:
    claim_id: str
    status: Status
    reference: str
    mode: Mode
    seconds: float
    detail: str = ""
    counterexample: Optional[Dict[str, Any]] = None


@dataclass
class VerificationReport:
    results: List[ClaimResult]
    seed: int
    version: str
    budget: Dict[str, Any] = field(default_factory=dict)

    @property
    def failed(self) -> List[ClaimResult]:
        return [r for r in self.results if r.status == "fail"]

    @property
    def exit_code(self) -> int:
        return 1 if self.failed else 0

    def counts(self) -> Dict[str, int]:
        out = {"pass": 0, "fail": 0, "skipped": 0}
        for r in self.results:
            out[r.status] += 1
        return out

    def to_csv(self) -> str:
        "One row per claim. Timings live in `timings_csv` so this stays byte-stable."
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["claim_id", "status", "mode", "reference", "detail"])
        for r in self.results:
            writer.writerow([r.claim_id, r.status, r.mode, r.reference, r.detail])
        return buf.getvalue()

    def timings_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["claim_id", "seconds"])
        for r in self.results:
            writer.writerow([r.claim_id, f"{r.seconds:.3f}"])
        return buf.getvalue()

    def to_text(self, color: bool = False) -> str:
        marks = {
            "pass": (Fore.GREEN, "PASS"),
            "fail": (Fore.RED, "FAIL"),
            "skipped": (Fore.YELLOW, "SKIP"),
        }
        lines = [f"deepgraph {self.version}, seed {self.seed}"]
        for r in self.results:
            tint, word = marks[r.status]
            mark = f"{tint}{word}{Style.RESET_ALL}" if color else word
            spot = " [spot]" if r.mode == "spot" else ""
            lines.append(f"{mark} {r.claim_id}{spot} {r.detail}".rstrip())
            if r.counterexample:
                lines.append(f"     counterexample: {json.dumps(r.counterexample, sort_keys=True)}")
        c = self.counts()
        lines.append(f"{c['pass']} passed, {c['fail']} failed, {c['skipped']} skipped")
        return "\n".join(lines) + "\n"

    def replay(self) -> str:
        "JSON with the seed, budget and every counterexample."
        payload = {
            "version": self.version,
            "seed": self.seed,
            "budget": self.budget,
            "failures": [
                {"claim_id": r.claim_id, "detail": r.detail, "counterexample": r.counterexample}
                for r in self.failed
            ],
        }
        return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def run_claim(c: Claim, ctx: ClaimContext) -> ClaimResult:
    log.info("claim %s", c.claim_id)
    ctx.start()
    t0 = time.monotonic()
    counterexample = None
    try:
        detail = c.check(ctx) or ""
        status: Status = "pass"
    except ClaimFailure as e:
        status, detail, counterexample = "fail", str(e), e.counterexample
    except (ClaimSkipped, ClaimTimeout, BudgetExceeded, CapExceeded) as e:
        status, detail = "skipped", f"{type(e).__name__}: {e}"
    except Exception as e:
        log.exception("claim %s raised", c.claim_id)
        status, detail = "fail", f"error: {type(e).__name__}: {e}"
        counterexample = {"error": repr(e)}
    seconds = time.monotonic() - t0
    level = logging.WARNING if status != "pass" else logging.INFO
    log.log(level, "claim %s: %s in %.1fs %s", c.claim_id, status, seconds, detail)
    return ClaimResult(c.claim_id, status, c.reference, c.mode, seconds, detail, counterexample)


def select(pattern: str = ".*") -> List[Claim]:
    "Registered claims whose id matches `pattern` in full, sorted by id."
    try:
        rx = re.compile(pattern)
    except re.error as e:
        raise ValueError(f"bad claim filter {pattern!r}: {e}") from e
    return [REGISTRY[k] for k in sorted(REGISTRY) if rx.fullmatch(k)]


def run_claims(
    pattern: str = ".*", config: Optional[Config] = None, cache: Optional[CoverCache] = None
) -> VerificationReport:
    """
    Run every claim matching `pattern`.

    Args:
        pattern: regular expression matched against whole claim ids
        config: budgets and grids
        cache: cover cache shared by engine-backed claims

    Returns:
        Report sorted by claim id
    """
    from . import version

    config = config or Config.from_env()
    ctx = ClaimContext(config, cache)
    results = [run_claim(c, ctx) for c in select(pattern)]
    return VerificationReport(results, config.grid.seed, version, asdict(config.budget))


# ## Shared helpers


def _reduced_components(g: Graph) -> int:
    return len(components(reduced_graph(g)[0]))


def _strict(a: Graph, b: Graph) -> bool:
    return a.is_subgraph_of(b) and not a.edge_equal(b)


def _label_pair(g: Graph, edge: Tuple[int, int]) -> List[str]:
    return [g.labels[edge[0]], g.labels[edge[1]]]


def _subgroup_map(small: PermutationGroup, big: PermutationGroup) -> np.ndarray:
    "Index in `big` of every element of `small`, fixing the extra points."
    extra = np.tile(np.arange(small.n, big.n), (small.size, 1))
    return big.index_of(np.concatenate([small.codes, extra], axis=1))


def _sylow_parts(spec: GroupSpec) -> List[GroupSpec]:
    return [f for fs in sylow_factors(spec).values() for f in fs]


def _abelian_parts(spec: GroupSpec) -> List[AbelianP]:
    if isinstance(spec, Abelian):
        return list(spec.parts)
    assert isinstance(spec, AbelianP)
    return [spec]


# ## The hierarchy


@claim("inclusion.chain", "E(P) ⊆ E(Pe) ⊆ E(ΔD) ⊆ E(Δ) for every finite group")
def inclusion_chain(ctx: ClaimContext) -> str:
    specs = catalog_grid(ctx.grid, ctx.grid.inclusion_order)
    for spec in specs:
        ctx.tick()
        h = ctx.hierarchy(spec)
        bad = h.inclusion_violations()
        if bad:
            small, large, edge = bad[0]
            fail(
                f"{format_spec(spec)}: edge of {small} missing from {large}",
                spec=format_spec(spec),
                graphs=[small, large],
                vertices=_label_pair(h.P, edge),
            )
    return f"{len(specs)} groups"


@claim("complete.cyclic", "ΔD(G) is complete iff G is cyclic")
def complete_cyclic(ctx: ClaimContext) -> str:
    specs = catalog_grid(ctx.grid, ctx.grid.inclusion_order)
    for spec in specs:
        ctx.tick()
        complete = basic_stats(ctx.deep(spec)).is_complete
        if complete != ctx.group(spec).is_cyclic():
            fail(f"{format_spec(spec)}: complete={complete}", spec=format_spec(spec))
    return f"{len(specs)} groups"


@claim("eulerian.odd", "ΔD(G) is Eulerian iff |G| is odd")
def eulerian_odd(ctx: ClaimContext) -> str:
    specs = catalog_grid(ctx.grid, ctx.grid.inclusion_order)
    for spec in specs:
        ctx.tick()
        eulerian = basic_stats(ctx.deep(spec)).is_eulerian
        if eulerian != (spec.order % 2 == 1):
            fail(f"{format_spec(spec)}: eulerian={eulerian}", spec=format_spec(spec))
    return f"{len(specs)} groups"


@claim("eulerian.neighbourhoods", "|N[g]| divides |G| in ΔD(G)")
def eulerian_neighbourhoods(ctx: ClaimContext) -> str:
    specs = catalog_grid(ctx.grid, ctx.grid.inclusion_order)
    for spec in specs:
        ctx.tick()
        g = ctx.deep(spec)
        sizes = closed_neighbourhood_sizes(g)
        bad = np.flatnonzero(spec.order % sizes != 0)
        if bad.shape[0]:
            v = int(bad[0])
            fail(
                f"{format_spec(spec)}: |N[{g.labels[v]}]| = {sizes[v]}",
                spec=format_spec(spec),
                vertex=g.labels[v],
            )
    return f"{len(specs)} groups"


# ## Abelian groups


@claim("abelian.oracle_agreement", "closed commutator form of the abelian cover agrees with coset enumeration")
def abelian_oracle_agreement(ctx: ClaimContext) -> str:
    checked = over = 0
    for spec in abelian_grid(ctx.grid):
        if len(spec.ranks) < 2:
            continue
        if spec.order * multiplier_order(spec) > ctx.grid.max_cover_order:
            over += 1
            continue
        ctx.tick()
        bad = cross_validate(ctx.oracle(spec), ctx.oracle(spec, "engine"), ctx.group(spec))
        if bad:
            G = ctx.group(spec)
            fail(
                f"{format_spec(spec)}: {len(bad)} disagreeing pairs",
                spec=format_spec(spec),
                vertices=[G.label(bad[0][0]), G.label(bad[0][1])],
            )
        checked += 1
    return f"{checked} groups, {over} covers over budget"


@claim("abelian.enhanced_equality", "non-cyclic abelian p-group: ΔD = Pe iff elementary abelian")
def abelian_enhanced_equality(ctx: ClaimContext) -> str:
    specs = abelian_grid(ctx.grid)
    for spec in specs:
        ctx.tick()
        equal = ctx.deep(spec).edge_equal(ctx.graph(spec, "enhanced"))
        expected = len(spec.ranks) == 1 or spec.ranks[0] == 1
        if equal != expected:
            fail(f"{format_spec(spec)}: ΔD = Pe is {equal}", spec=format_spec(spec))
    return f"{len(specs)} groups"


@claim("abelian.enhanced_corollary", "abelian A: ΔD = Pe iff every Sylow subgroup is cyclic or elementary abelian")
def abelian_enhanced_corollary(ctx: ClaimContext) -> str:
    specs: List[GroupSpec] = list(mixed_abelian_grid(ctx.grid))
    for spec in specs:
        ctx.tick()
        equal = ctx.deep(spec).edge_equal(ctx.graph(spec, "enhanced"))
        expected = all(len(q.ranks) == 1 or q.ranks[0] == 1 for q in _abelian_parts(spec))
        if equal != expected:
            fail(f"{format_spec(spec)}: ΔD = Pe is {equal}", spec=format_spec(spec))
    return f"{len(specs)} groups"


@claim("abelian.dominant", "dominant vertices of ΔD(A) form <x1^(p^r2)> of order p^(r1 - r2)")
def abelian_dominant(ctx: ClaimContext) -> str:
    specs = abelian_grid(ctx.grid)
    for spec in specs:
        ctx.tick()
        G = ctx.group(spec)
        assert isinstance(G, AbelianGroup)
        got = set(dominant_vertices(ctx.deep(spec)).tolist())
        if len(spec.ranks) == 1:
            expected = set(range(G.size))
        else:
            p, (r1, r2) = spec.p, spec.ranks[:2]
            code = [p**r2 % p**r1] + [0] * (len(spec.ranks) - 1)
            x = int(G.index_of([code])[0])
            expected = set(G.cyclic_subgroup(x).tolist())
            if len(expected) != p ** (r1 - r2):
                fail(f"{format_spec(spec)}: subgroup of order {len(expected)}", spec=format_spec(spec))
        if got != expected:
            odd = sorted(got ^ expected)[0]
            fail(
                f"{format_spec(spec)}: {len(got)} dominant vertices, expected {len(expected)}",
                spec=format_spec(spec),
                vertex=G.label(odd),
            )
    return f"{len(specs)} groups"


@claim("abelian.connectivity", "non-cyclic abelian p-group: ΔD* disconnected iff r2 = 1")
def abelian_connectivity(ctx: ClaimContext) -> str:
    specs = [s for s in abelian_grid(ctx.grid) if len(s.ranks) >= 2]
    for spec in specs:
        ctx.tick()
        disconnected = _reduced_components(ctx.deep(spec)) > 1
        if disconnected != (spec.ranks[1] == 1):
            fail(f"{format_spec(spec)}: disconnected={disconnected}", spec=format_spec(spec))
    return f"{len(specs)} groups"


@claim("abelian.diameter", "connected ΔD(A)* has diameter at most 4")
def abelian_diameter(ctx: ClaimContext) -> str:
    specs: List[GroupSpec] = [s for s in abelian_grid(ctx.grid) if len(s.ranks) >= 2]
    specs += mixed_abelian_grid(ctx.grid)
    worst, connected = 0, 0
    for spec in specs:
        ctx.tick()
        reduced, _ = reduced_graph(ctx.deep(spec))
        comps, diams = components_and_diameter(reduced)
        if len(comps) != 1:
            continue
        connected += 1
        worst = max(worst, diams[0])
        if diams[0] > 4:
            fail(f"{format_spec(spec)}: diameter {diams[0]}", spec=format_spec(spec))
    return f"{connected} connected reduced graphs, largest diameter {worst}"


@claim(
    "abelian.disconnection",
    "non-cyclic abelian A: ΔD(A)* disconnected iff A is cyclic times an elementary abelian p-group",
)
def abelian_disconnection(ctx: ClaimContext) -> str:
    specs: List[GroupSpec] = [s for s in abelian_grid(ctx.grid) if len(s.ranks) >= 2]
    specs += mixed_abelian_grid(ctx.grid)
    checked = 0
    for spec in specs:
        ctx.tick()
        parts = _abelian_parts(spec)
        noncyclic = [q for q in parts if len(q.ranks) >= 2]
        if not noncyclic:
            continue
        expected = len(noncyclic) == 1 and noncyclic[0].ranks[1] == 1
        disconnected = _reduced_components(ctx.deep(spec)) > 1
        if disconnected != expected:
            fail(f"{format_spec(spec)}: disconnected={disconnected}", spec=format_spec(spec))
        checked += 1
    return f"{checked} groups"


@claim("abelian.induced_counterexample", "ΔD(C_p² × C_p²) restricted to its order-p subgroup differs from ΔD(C_p × C_p)")
def abelian_induced_counterexample(ctx: ClaimContext) -> str:
    details = []
    for p in (2, 3):
        big, small = AbelianP(p, (2, 2)), AbelianP(p, (1, 1))
        Gb, Gs = ctx.group(big), ctx.group(small)
        assert isinstance(Gb, AbelianGroup) and isinstance(Gs, AbelianGroup)
        bij = Gb.index_of(Gs.codes * p)
        diff = edge_compare(ctx.deep(small), ctx.deep(big), bij)
        if not diff:
            fail(f"{format_spec(big)}: restriction equals {format_spec(small)}", spec=format_spec(big))
        image = ctx.deep(big)
        sub = edge_compare(Graph.complete(Gs.size), image, bij)
        if sub:
            fail(f"{format_spec(big)}: order-{p} subgroup does not induce a clique", spec=format_spec(big))
        details.append(f"p={p}: {len(diff.only_b)} extra edges")
    return ", ".join(details)


# ## Products and covers


@claim("product.strong", "ΔD(G × H) = ΔD(G) ⊠ ΔD(H) for coprime orders")
def product_strong(ctx: ClaimContext) -> str:
    checked = over = 0
    for spec in mixed_abelian_grid(ctx.grid):
        if spec.order * multiplier_order(spec) > ctx.grid.max_cover_order:
            over += 1
            continue
        if ctx.group(spec).is_cyclic():
            continue
        ctx.tick()
        a, b = spec.parts
        expected = strong_product(ctx.deep(a), ctx.deep(b))
        got = ctx.deep(spec, "engine")
        if not got.edge_equal(expected):
            diff = edge_compare(got, expected)
            fail(f"{format_spec(spec)}: {diff}", spec=format_spec(spec))
        checked += 1
    return f"{checked} groups, {over} covers over budget"


@claim("nilpotent.connectivity", "nilpotent G: ΔD(G)* connectivity from its non-cyclic Sylow subgroups")
def nilpotent_connectivity(ctx: ClaimContext) -> str:
    specs: List[GroupSpec] = list(mixed_abelian_grid(ctx.grid)) + list(nilpotent_products(ctx.grid))
    checked = 0
    for spec in specs:
        ctx.tick()
        noncyclic = [s for s in _sylow_parts(spec) if not ctx.group(s).is_cyclic()]
        if not noncyclic:
            continue
        connected = _reduced_components(ctx.deep(spec)) == 1
        if len(noncyclic) >= 2:
            expected = True
        else:
            expected = _reduced_components(ctx.deep(noncyclic[0])) == 1
        if connected != expected:
            fail(f"{format_spec(spec)}: connected={connected}", spec=format_spec(spec))
        checked += 1
    return f"{checked} groups"


@claim("cover.generalized_join", "Δ(G̃) = ΔD(G)[K_m, ..., K_m] under the fibers of the projection")
def cover_generalized_join(ctx: ClaimContext) -> str:
    specs = engine_grid(ctx.grid)
    for spec in specs:
        ctx.tick()
        ec = ctx.engine(spec)
        base = ctx.deep(spec)
        m = ec.multiplier_order
        join = generalized_join(base, [Graph.complete(m)] * base.n)
        cover = cover_commuting_graph(ec.rep, format_spec(spec))
        bij = fiber_bijection(ec.projection.projection, base.n, m)
        diff = edge_compare(cover, join, bij)
        if diff:
            fail(f"{format_spec(spec)}: {len(diff.only_a)} + {len(diff.only_b)} edges differ", spec=format_spec(spec))
    return f"{len(specs)} covers"


@claim("cover.dominant_center", "dominant vertices of ΔD(G) are the image of Z(G̃)")
def cover_dominant_center(ctx: ClaimContext) -> str:
    specs = engine_grid(ctx.grid)
    for spec in specs:
        ctx.tick()
        ec = ctx.engine(spec)
        expected = set(np.unique(ec.projection.projection[ec.rep.central_points()]).tolist())
        got = set(dominant_vertices(ctx.deep(spec)).tolist())
        if got != expected:
            G = ctx.group(spec)
            fail(
                f"{format_spec(spec)}: {len(got)} dominant vertices, center image {len(expected)}",
                spec=format_spec(spec),
                vertex=G.label(sorted(got ^ expected)[0]),
            )
    return f"{len(specs)} covers"


@claim("cover.lift_independence", "adjacency does not depend on the chosen preimages", mode="spot")
def cover_lift_independence(ctx: ClaimContext) -> str:
    specs = [s for s in engine_grid(ctx.grid) if not isinstance(s, AbelianP)]
    samples = 0
    for spec in specs:
        ctx.tick()
        oracle = ctx.oracle(spec, "engine")
        assert isinstance(oracle, EngineOracle)
        G = ctx.group(spec)
        for _ in range(50):
            x = int(ctx.rng.integers(G.size))
            partners = G.commuting_partners(x)
            y = int(partners[ctx.rng.integers(partners.shape[0])])
            if perturbed_adjacent(oracle, x, y, ctx.rng) != oracle(x, y):
                fail(f"{format_spec(spec)}: adjacency changed under kernel perturbation",
                     spec=format_spec(spec), vertices=[G.label(x), G.label(y)])
            samples += 1
    return f"{samples} pairs in {len(specs)} covers"


@claim("oracles.cross_validation", "closed-form and spin adjacency agree with coset enumeration")
def oracles_cross_validation(ctx: ClaimContext) -> str:
    specs: List[GroupSpec] = [Symmetric(4), Symmetric(5)]
    specs += [Dihedral(n) for n in range(4, 13, 2)]
    for spec in specs:
        ctx.tick()
        G = ctx.group(spec)
        bad = cross_validate(ctx.oracle(spec), ctx.oracle(spec, "engine"), G)
        if bad:
            fail(f"{format_spec(spec)}: {len(bad)} disagreeing pairs", spec=format_spec(spec),
                 vertices=[G.label(bad[0][0]), G.label(bad[0][1])])
    for p, k in ctx.grid.heisenberg:
        if k != 1:
            continue
        spec = Heisenberg(p, 1)
        diff = edge_compare(ctx.deep(spec), heisenberg_k1_expected(p))
        if diff:
            fail(f"{format_spec(spec)}: engine adjacency is not the cyclic-pair relation",
                 spec=format_spec(spec), diff=str(diff))
    return f"{len(specs)} groups cross-validated"


# ## Dihedral, quaternion, Heisenberg, extraspecial


@claim("metacyclic.multiplier", "metacyclic multiplier order: M(D_2n) = 2 iff n even, M(Q_4n) = 1")
def metacyclic_multiplier(ctx: ClaimContext) -> str:
    for n in range(3, ctx.grid.max_dihedral_n + 1):
        k = metacyclic_multiplier_order(MetacyclicParams.dihedral(n))
        if k != (2 if n % 2 == 0 else 1):
            fail(f"dih:{2 * n}: multiplier {k}", spec=f"dih:{2 * n}")
    for n in range(2, ctx.grid.max_quaternion_n + 1):
        k = metacyclic_multiplier_order(MetacyclicParams.quaternion(n))
        if k != 1:
            fail(f"quat:{4 * n}: multiplier {k}", spec=f"quat:{4 * n}")
    for n in range(4, 13, 2):
        ctx.tick()
        k = ctx.engine(Dihedral(n)).multiplier_order
        if k != 2:
            fail(f"dih:{2 * n}: enumerated kernel of order {k}", spec=f"dih:{2 * n}")
    return "formula and enumeration agree"


@claim("dihedral.equality", "ΔD(D_2n) = Pe(D_2n) for even n")
def dihedral_equality(ctx: ClaimContext) -> str:
    specs = [s for s in dihedral_grid(ctx.grid) if s.n % 2 == 0]
    for spec in specs:
        ctx.tick()
        diff = edge_compare(ctx.deep(spec), ctx.graph(spec, "enhanced"))
        if diff:
            fail(f"{format_spec(spec)}: {diff}", spec=format_spec(spec))
    return f"{len(specs)} groups"


@claim("quaternion.self_cover", "Q_4n is its own cover: ΔD(Q_4n) = Δ(Q_4n)")
def quaternion_self_cover(ctx: ClaimContext) -> str:
    specs = quaternion_grid(ctx.grid)
    for spec in specs:
        ctx.tick()
        diff = edge_compare(ctx.deep(spec), ctx.graph(spec, "commuting"))
        if diff:
            fail(f"{format_spec(spec)}: {diff}", spec=format_spec(spec))
    return f"{len(specs)} groups"


@claim("heis.cover_order", "the cover of H3(Z/p^k) has order p^(5k)")
def heis_cover_order(ctx: ClaimContext) -> str:
    out = []
    for spec in heisenberg_grid(ctx.grid):
        ctx.tick()
        order = ctx.engine(spec).order
        if order != spec.p ** (5 * spec.k):
            fail(f"{format_spec(spec)}: cover of order {order}", spec=format_spec(spec))
        out.append(f"{format_spec(spec)}→{order}")
    return ", ".join(out)


@claim("heis.equality", "ΔD(H3(Z/p^k)) = Pe iff k = 1; strictly between Pe and Δ for k ≥ 2")
def heis_equality(ctx: ClaimContext) -> str:
    for spec in heisenberg_grid(ctx.grid):
        ctx.tick()
        deep, enhanced = ctx.deep(spec), ctx.graph(spec, "enhanced")
        equal = deep.edge_equal(enhanced)
        if equal != (spec.k == 1):
            fail(f"{format_spec(spec)}: ΔD = Pe is {equal}", spec=format_spec(spec))
        if spec.k >= 2:
            if not (_strict(enhanced, deep) and _strict(deep, ctx.graph(spec, "commuting"))):
                fail(f"{format_spec(spec)}: Pe ⊊ ΔD ⊊ Δ fails", spec=format_spec(spec))
    return f"{len(ctx.grid.heisenberg)} groups"


@claim("heis.dominant", "ΔD(H3(Z/p^k)) has only the identity as dominant vertex")
def heis_dominant(ctx: ClaimContext) -> str:
    for spec in heisenberg_grid(ctx.grid):
        ctx.tick()
        dom = dominant_vertices(ctx.deep(spec)).tolist()
        if dom != [0]:
            fail(f"{format_spec(spec)}: {len(dom)} dominant vertices", spec=format_spec(spec))
    return f"{len(ctx.grid.heisenberg)} groups"


@claim("heis.connectivity", "ΔD(H3(Z/p^k))* is disconnected iff k = 1, with diameter at most 4 otherwise")
def heis_connectivity(ctx: ClaimContext) -> str:
    diams = []
    for spec in heisenberg_grid(ctx.grid):
        ctx.tick()
        reduced, _ = reduced_graph(ctx.deep(spec))
        comps = components(reduced)
        if (len(comps) > 1) != (spec.k == 1):
            fail(f"{format_spec(spec)}: {len(comps)} components", spec=format_spec(spec))
        if spec.k >= 2:
            _, (d,) = components_and_diameter(reduced)
            if d > 4:
                fail(f"{format_spec(spec)}: diameter {d}", spec=format_spec(spec))
            diams.append(f"{format_spec(spec)} diameter {d}")
    return ", ".join(diams) or "no k ≥ 2 groups in the grid"


@claim("extraspecial.checklist", "extraspecial G: ΔD = Pe iff G is D8, Q8 or H3(Z/p)")
def extraspecial_checklist(ctx: ClaimContext) -> str:
    cases = extraspecial_grid()
    for spec, expected in cases:
        ctx.tick()
        equal = ctx.deep(spec).edge_equal(ctx.graph(spec, "enhanced"))
        if equal != expected:
            fail(f"{format_spec(spec)}: ΔD = Pe is {equal}", spec=format_spec(spec))
    return f"{len(cases)} groups"


@claim("extraspecial.exponent_p2", "the order-p³ group of exponent p² is its own cover, with α2 ~ α in ΔD but not in Pe")
def extraspecial_exponent_p2(ctx: ClaimContext) -> str:
    for p in (3, 5):
        k = extraspecial_exponent_p2_multiplier(p)
        if k != 1:
            fail(f"p={p}: multiplier {k}", p=p)
        spec = [s for s, eq in extraspecial_grid() if not eq and s.order == p**3][0]
        G = ctx.group(spec)
        b, ap = (int(v) for v in G.index_of([[1, 0], [0, p]]))  # type: ignore
        if not ctx.deep(spec).has_edge(b, ap) or ctx.graph(spec, "enhanced").has_edge(b, ap):
            fail(f"{format_spec(spec)}: b ~ a^{p} pattern fails", spec=format_spec(spec),
                 vertices=[G.label(b), G.label(ap)])
    return "p = 3, 5"


def _commutator_condition(G: GroupHandle, p: int) -> bool:
    "G' non-cyclic, or some g of order > p has <g> ∩ G' = {e}."
    derived = G.derived_subgroup()
    orders = G.orders()
    if int(orders[derived].max()) != derived.shape[0]:
        return True
    inside = np.zeros(G.size, np.bool_)
    inside[derived] = True
    for g in np.flatnonzero(orders > p):
        if inside[G.cyclic_subgroup(int(g))].sum() == 1:
            return True
    return False


@claim("commutator.sufficiency", "non-cyclic commutator conditions force Pe ⊊ ΔD on p-groups without quaternion subgroups")
def commutator_sufficiency(ctx: ClaimContext) -> str:
    specs: List[GroupSpec] = [s for s in abelian_grid(ctx.grid) if len(s.ranks) >= 2]
    specs += [s for s in heisenberg_grid(ctx.grid)]
    specs += [Dihedral(n) for n in (4, 8, 16)]
    specs += [s for s, eq in extraspecial_grid() if not eq]
    hits = converse = 0
    for spec in specs:
        ctx.tick()
        p = is_p_group(spec)
        assert p is not None
        G = ctx.group(spec)
        condition = _commutator_condition(G, p)
        strict = _strict(ctx.graph(spec, "enhanced"), ctx.deep(spec))
        if condition and not strict:
            fail(f"{format_spec(spec)}: condition holds but Pe = ΔD", spec=format_spec(spec))
        hits += condition
        converse += strict and not condition
    return f"{hits} groups meet the condition, {converse} strict without it"


# ## Symmetric and alternating groups


@claim("sym.equality", "ΔD(S_n) = Pe(S_n) for n = 4, 5")
def sym_equality(ctx: ClaimContext) -> str:
    for n in (4, 5):
        spec = Symmetric(n)
        diff = edge_compare(ctx.deep(spec), ctx.graph(spec, "enhanced"))
        if diff:
            fail(f"{format_spec(spec)}: {diff}", spec=format_spec(spec))
    return "S4, S5"


@claim("alt.equality", "ΔD(A_n) = Pe(A_n) for n ≤ 7")
def alt_equality(ctx: ClaimContext) -> str:
    for n in range(4, 8):
        ctx.tick()
        spec = Alternating(n)
        diff = edge_compare(ctx.deep(spec), ctx.graph(spec, "enhanced"))
        if diff:
            fail(f"{format_spec(spec)}: {diff}", spec=format_spec(spec))
    return "A4 to A7"


@claim("containment.pairs", "(123)–(456) ∈ ΔD(S6)∖Pe, (12)–(34) ∈ Δ(S4)∖ΔD, (12)(34)–(13)(24) ∈ Δ(A6)∖ΔD")
def containment_pairs(ctx: ClaimContext) -> str:
    cases = [
        (Symmetric(6), ((1, 2, 3),), ((4, 5, 6),), True, False),
        (Symmetric(4), ((1, 2),), ((3, 4),), False, False),
        (Alternating(6), ((1, 2), (3, 4)), ((1, 3), (2, 4)), False, False),
    ]
    for spec, a, b, deep, enhanced in cases:
        ctx.tick()
        G = ctx.group(spec)
        assert isinstance(G, PermutationGroup)
        x, y = G.from_cycles(*a), G.from_cycles(*b)
        commute = bool(G.commutes(np.array([x]), np.array([y]))[0])
        got = (commute, ctx.oracle(spec)(x, y), pair_generates_cyclic(G, x, y))
        if got != (True, deep, enhanced):
            fail(f"{format_spec(spec)}: (Δ, ΔD, Pe) = {got}", spec=format_spec(spec),
                 vertices=[G.label(x), G.label(y)])
    return f"{len(cases)} pairs"


@claim("sym.containment", "Pe(S_n) ⊆ ΔD(S_n) ⊊ Δ(S_n), strict on the left iff n ≥ 6")
def sym_containment(ctx: ClaimContext) -> str:
    for n in range(4, ctx.grid.symmetric_full + 1):
        ctx.tick()
        spec = Symmetric(n)
        enhanced, deep, commuting = ctx.graph(spec, "enhanced"), ctx.deep(spec), ctx.graph(spec, "commuting")
        if not _strict(deep, commuting) or _strict(enhanced, deep) != (n >= 6):
            fail(f"{format_spec(spec)}: containment pattern fails", spec=format_spec(spec))
    return f"S4 to S{ctx.grid.symmetric_full}"


@claim("alt.containment", "Pe(A_n) ⊆ ΔD(A_n) ⊊ Δ(A_n), strict on the left iff n ≥ 8")
def alt_containment(ctx: ClaimContext) -> str:
    for n in range(4, ctx.grid.alternating_full + 1):
        ctx.tick()
        spec = Alternating(n)
        enhanced, deep, commuting = ctx.graph(spec, "enhanced"), ctx.deep(spec), ctx.graph(spec, "commuting")
        if not _strict(deep, commuting) or _strict(enhanced, deep) != (n >= 8):
            fail(f"{format_spec(spec)}: containment pattern fails", spec=format_spec(spec))
    return f"A4 to A{ctx.grid.alternating_full}"


@claim("sym.induced", "ΔD(S_n) restricted to S_m is ΔD(S_m)")
def sym_induced(ctx: ClaimContext) -> str:
    pairs = [(m, m + 1) for m in range(4, ctx.grid.symmetric_full)]
    for m, n in pairs:
        ctx.tick()
        small, big = Symmetric(m), Symmetric(n)
        Gs, Gb = ctx.group(small), ctx.group(big)
        assert isinstance(Gs, PermutationGroup) and isinstance(Gb, PermutationGroup)
        diff = edge_compare(ctx.deep(small), ctx.deep(big), _subgroup_map(Gs, Gb))
        if diff:
            fail(f"{format_spec(big)} on S{m}: {diff}", spec=format_spec(big))
    return ", ".join(f"S{n}|S{m}" for m, n in pairs)


@claim("alt.induced", "ΔD(A_n) restricted to A_m is ΔD(A_m) for m, n ∉ {6, 7}, and ΔD(A7)|A6 = ΔD(A6)")
def alt_induced(ctx: ClaimContext) -> str:
    pairs = [(4, 5), (6, 7)]
    if ctx.grid.alternating_full >= 8:
        pairs.append((5, 8))
    for m, n in pairs:
        ctx.tick()
        small, big = Alternating(m), Alternating(n)
        Gs, Gb = ctx.group(small), ctx.group(big)
        assert isinstance(Gs, PermutationGroup) and isinstance(Gb, PermutationGroup)
        diff = edge_compare(ctx.deep(small), ctx.deep(big), _subgroup_map(Gs, Gb))
        if diff:
            fail(f"{format_spec(big)} on A{m}: {diff}", spec=format_spec(big))
    return ", ".join(f"A{n}|A{m}" for m, n in pairs)


@claim("alt.over_sym", "ΔD(S_n) restricted to A_n is ΔD(A_n) for n ∉ {6, 7}")
def alt_over_sym(ctx: ClaimContext) -> str:
    for n in (4, 5):
        ctx.tick()
        Ga, Gs = ctx.group(Alternating(n)), ctx.group(Symmetric(n))
        assert isinstance(Ga, PermutationGroup) and isinstance(Gs, PermutationGroup)
        diff = edge_compare(ctx.deep(Alternating(n)), ctx.deep(Symmetric(n)), Gs.index_of(Ga.codes))
        if diff:
            fail(f"sym:{n} on A{n}: {diff}", spec=f"sym:{n}")
    return "n = 4, 5"


def _identity_only_dominant(ctx: ClaimContext, specs: Sequence[GroupSpec]) -> str:
    for spec in specs:
        ctx.tick()
        dom = dominant_vertices(ctx.deep(spec)).tolist()
        if dom != [0]:
            fail(f"{format_spec(spec)}: {len(dom)} dominant vertices", spec=format_spec(spec))
    return f"{len(specs)} groups"


@claim("sym.dominant", "ΔD(S_n) has only the identity as dominant vertex for n ≥ 4")
def sym_dominant(ctx: ClaimContext) -> str:
    return _identity_only_dominant(ctx, [Symmetric(n) for n in range(4, ctx.grid.symmetric_full + 1)])


@claim("alt.dominant", "ΔD(A_n) has only the identity as dominant vertex for n ≥ 4")
def alt_dominant(ctx: ClaimContext) -> str:
    return _identity_only_dominant(ctx, [Alternating(n) for n in range(4, ctx.grid.alternating_full + 1)])


def sym_component_count(n: int) -> int:
    "Components of ΔD(S_n)* for n ≥ 6."
    if is_prime(n):
        return factorial(n - 2) + 1
    if is_prime(n - 1):
        return n * factorial(n - 3) + 1
    return 1


def alt_component_count(n: int) -> int:
    "Components of ΔD(A_n)* for n ≥ 8."
    count = 1
    if is_prime(n):
        count += factorial(n - 2)
    if is_prime(n - 1):
        count += n * factorial(n - 3)
    if is_prime(n - 2):
        count += n * (n - 1) * factorial(n - 4) // 2
    return count


@claim("sym.components", "ΔD(S_n)* has (n-2)!+1 components for prime n and n(n-3)!+1 for prime n-1")
def sym_components(ctx: ClaimContext) -> str:
    out = []
    for n in range(6, ctx.grid.symmetric_full + 1):
        ctx.tick()
        count = _reduced_components(ctx.deep(Symmetric(n)))
        if count != sym_component_count(n):
            fail(f"sym:{n}: {count} components, expected {sym_component_count(n)}", spec=f"sym:{n}")
        out.append(f"S{n}: {count}")
    return ", ".join(out)


@claim("alt.components", "ΔD(A_n)* component counts; ΔD(A7)* is disconnected")
def alt_components(ctx: ClaimContext) -> str:
    ctx.tick()
    out = []
    count = _reduced_components(ctx.deep(Alternating(7)))
    if count <= 1:
        fail("alt:7: reduced graph is connected", spec="alt:7")
    out.append(f"A7: {count}")
    for n in range(8, ctx.grid.alternating_full + 1):
        ctx.tick()
        count = _reduced_components(ctx.deep(Alternating(n)))
        if count != alt_component_count(n):
            fail(f"alt:{n}: {count} components, expected {alt_component_count(n)}", spec=f"alt:{n}")
        out.append(f"A{n}: {count}")
    return ", ".join(out)


# Permutations as 0-based image tuples; `_compose(a, b)` applies `a` first.


def _compose(a: Sequence[int], b: Sequence[int]) -> Tuple[int, ...]:
    return tuple(b[i] for i in a)


def _perm_power(a: Sequence[int], k: int) -> Tuple[int, ...]:
    out = tuple(range(len(a)))
    for _ in range(k):
        out = _compose(out, a)
    return out


def _perm_order(a: Sequence[int]) -> int:
    return lcm_list(len(c) for c in perm_cycles(a))


def _lifts_commute(a: Sequence[int], b: Sequence[int], cap: int) -> bool:
    if tuple(a) == tuple(b) or _compose(a, b) != _compose(b, a):
        return False
    return spin_commute(a, b, cap)


def _support(a: Sequence[int]) -> List[int]:
    return [i + 1 for i, v in enumerate(a) if v != i]


def _to_transposition(n: int, x: Tuple[int, ...]) -> List[Tuple[int, ...]]:
    "Path from `x` to a transposition: a prime-order power, an even part of it, a disjoint transposition."
    path = [x]
    o = _perm_order(x)
    q = 2 if o % 2 == 0 else min(factorize(o))
    y = _perm_power(x, o // q)
    if y != x:
        path.append(y)
    cycles = perm_cycles(y)
    if q == 2 and len(cycles) == 1:
        return path
    lam = cycles_to_perm(n, cycles[:2] if q == 2 else cycles[:1])
    if lam != y:
        path.append(lam)
    free = [v for v in range(1, n + 1) if v not in _support(lam)]
    path.append(cycles_to_perm(n, [tuple(free[:2])]))
    return path


def _bridge(n: int, a: Tuple[int, ...], b: Tuple[int, ...]) -> List[Tuple[int, ...]]:
    "Inner vertices of a path between two transpositions."
    if a == b:
        return []
    sa, sb = _support(a), _support(b)
    free = [v for v in range(1, n + 1) if v not in sa and v not in sb]
    if set(sa) & set(sb):
        return [cycles_to_perm(n, [tuple(free[:3])])]
    return [cycles_to_perm(n, [tuple(sa), tuple(sb), tuple(free[:2])])]


def sym_reduced_path(n: int, x: Tuple[int, ...], y: Tuple[int, ...]) -> List[Tuple[int, ...]]:
    "Candidate path between non-identity permutations in ΔD(S_n)* for composite n and n - 1."
    left, right = _to_transposition(n, x), _to_transposition(n, y)
    path = left + _bridge(n, left[-1], right[-1]) + right[::-1]
    out = [path[0]]
    for v in path[1:]:
        if v != out[-1]:
            out.append(v)
    return out


@claim("sym.connected_spot", "ΔD(S_n)* is connected iff neither n nor n-1 is prime", mode="spot")
def sym_connected_spot(ctx: ClaimContext) -> str:
    cap = ctx.budget.spin_cap
    out = []
    for n in ctx.grid.symmetric_spot:
        ctx.tick()
        identity = tuple(range(n))
        if is_prime(n) or is_prime(n - 1):
            p = n if is_prime(n) else n - 1
            sigma = cycles_to_perm(n, [tuple(range(1, p + 1))])
            powers = {_perm_power(sigma, k) for k in range(p)}
            perms = np.array(list(permutations(range(n))), np.int64)
            s = np.array(sigma, np.int64)
            commute = (perms[:, s] == s[perms]).all(axis=1)
            cent = {tuple(int(v) for v in row) for row in perms[commute]}
            if cent != powers:
                fail(f"sym:{n}: centralizer of a {p}-cycle has {len(cent)} elements", spec=f"sym:{n}")
            out.append(f"S{n}: {p}-cycles isolated")
            continue
        for _ in range(ctx.grid.path_samples):
            ctx.tick()
            x, y = (tuple(int(v) for v in ctx.rng.permutation(n)) for _ in range(2))
            if identity in (x, y):
                continue
            path = sym_reduced_path(n, x, y)
            for a, b in zip(path, path[1:]):
                if a == identity or not _lifts_commute(a, b, cap):
                    fail(f"sym:{n}: path step fails", spec=f"sym:{n}",
                         vertices=[list(a), list(b)], endpoints=[list(x), list(y)])
        out.append(f"S{n}: {ctx.grid.path_samples} sampled paths")
    return ", ".join(out)


@claim("sym.disjoint", "disjoint σ, τ in S_n are adjacent iff one is even; always adjacent in A_n for n ≥ 8", mode="spot")
def sym_disjoint(ctx: ClaimContext) -> str:
    n, cap = 10, ctx.budget.spin_cap
    even_pairs = 0
    for _ in range(ctx.grid.disjoint_samples):
        ctx.tick()
        a, b = disjoint_pair(n, ctx.rng)
        adjacent = spin_commute(a, b, cap)
        if perm_parity(a) == 0 and perm_parity(b) == 0:
            even_pairs += 1
            # the cover of A_n (n >= 8) sits inside the double cover of S_n
            if not adjacent:
                fail(f"A{n}: disjoint even pair is not adjacent", vertices=[list(a), list(b)])
        elif adjacent != (perm_parity(a) == 0 or perm_parity(b) == 0):
            fail(f"S{n}: disjoint pair breaks the parity rule", vertices=[list(a), list(b)])
    if not even_pairs:
        raise ClaimSkipped(f"no pair of even permutations among {ctx.grid.disjoint_samples} samples")
    return f"{ctx.grid.disjoint_samples} pairs in S{n}, {even_pairs} inside A{n}"


# ## Perfectness


def _expect_verdict(ctx: ClaimContext, spec: GroupSpec, perfect: bool) -> str:
    verdict = perfectness_verdict(ctx.deep(spec), ctx.budget)
    if isinstance(verdict, Unknown):
        raise ClaimSkipped(f"{format_spec(spec)}: {verdict.reason}")
    if isinstance(verdict, Perfect) != perfect:
        witness = verdict.labels if isinstance(verdict, NotPerfect) else []
        fail(f"{format_spec(spec)}: {verdict.status}", spec=format_spec(spec), witness=witness)
    return f"{format_spec(spec)} {verdict.status}"


def _expect_hole(ctx: ClaimContext, spec: GroupSpec, cycles: Sequence[Any]) -> None:
    G = ctx.group(spec)
    assert isinstance(G, PermutationGroup)
    hole = elements_of(G, cycles)
    if not verify_odd_hole(ctx.deep(spec), hole):
        fail(f"{format_spec(spec)}: named 5-set is not an induced cycle", spec=format_spec(spec),
             vertices=[G.label(v) for v in hole])


@claim("sym.perfect", "ΔD(S_n) is perfect iff n ≤ 5")
def sym_perfect(ctx: ClaimContext) -> str:
    out = [_expect_verdict(ctx, Symmetric(n), n <= 5) for n in (4, 5, 6)]
    _expect_hole(ctx, Symmetric(6), S6_HOLE)
    return ", ".join(out)


@claim("alt.perfect", "ΔD(A_n) is perfect for n ≤ 7")
def alt_perfect(ctx: ClaimContext) -> str:
    return ", ".join(_expect_verdict(ctx, Alternating(n), True) for n in range(4, 8))


@claim("alt.perfect.a8", "ΔD(A_n) is not perfect for n ≥ 8: {(123),(456),(178),(234),(567)} induces a 5-cycle")
def alt_perfect_a8(ctx: ClaimContext) -> str:
    _expect_hole(ctx, Alternating(8), A8_HOLE)
    return _expect_verdict(ctx, Alternating(8), False)


@claim("perfect.cover_transfer", "ΔD(G) is perfect iff Δ(G̃) is perfect")
def perfect_cover_transfer(ctx: ClaimContext) -> str:
    decided = undecided = 0
    for spec in engine_grid(ctx.grid):
        ctx.tick()
        ec = ctx.engine(spec)
        a = perfectness_verdict(ctx.deep(spec), ctx.budget)
        b = perfectness_verdict(cover_commuting_graph(ec.rep), ctx.budget)
        if isinstance(a, Unknown) or isinstance(b, Unknown):
            undecided += 1
            continue
        if a.status != b.status:
            fail(f"{format_spec(spec)}: {a.status} but cover graph {b.status}", spec=format_spec(spec))
        decided += 1
    return f"{decided} covers agree, {undecided} undecided"


# ## Universality


def _universality(ctx: ClaimContext, kind: str) -> str:
    count = 0
    for target in small_graphs(3):
        ctx.tick()
        result = universality_embed(target, kind, ctx.config)  # type: ignore
        if kind == "abelian":
            expected = prod(p * p for p in smallest_primes(target.n))
            if result.spec.order != expected:
                fail(f"{target.n} vertices embedded in order {result.spec.order}",
                     edges=target.edges(), spec=format_spec(result.spec))
        elif ctx.group(result.spec).abelian:
            fail("embedding group is abelian", spec=format_spec(result.spec))
        count += 1
    return f"{count} graphs on at most 3 vertices"


@claim("universality.abelian", "every graph is an induced subgraph of ΔD of a product of C_p × C_p")
def universality_abelian(ctx: ClaimContext) -> str:
    return _universality(ctx, "abelian")


@claim("universality.nonabelian", "every graph is an induced subgraph of ΔD of a non-abelian nilpotent group")
def universality_nonabelian(ctx: ClaimContext) -> str:
    return _universality(ctx, "nonabelian")
