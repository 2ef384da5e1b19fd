"""
Finitely presented groups: coset enumeration, permutation representations of
covers, element arithmetic, center and the projection onto a central quotient.
"""

from __future__ import annotations

import hashlib
import json
import logging
from dataclasses import dataclass, field
from typing import (
    Callable,
    Dict,
    Iterable,
    List,
    Optional,
    Sequence,
    Set,
    Tuple,
)

import numpy as np
import numpy.typing as npt
from numba import njit, prange
from typing_extensions import Literal, TypeAlias

log = logging.getLogger(__name__)

Word: TypeAlias = Tuple[int, ...]
Table: TypeAlias = npt.NDArray[np.int32]
Points: TypeAlias = npt.NDArray[np.int64]
Strategy: TypeAlias = Literal["hlt", "felsch"]

MAX_DEDUCTIONS = 10_000


class InvalidWord(ValueError):
    "Exception raised for letters that do not name a generator."
    pass


class BudgetExceeded(RuntimeError):
    "Exception raised when a computation would exceed its configured budget."
    pass


class NonCentralKernel(RuntimeError):
    "Exception raised when a designated kernel generator is not central."
    pass


class BadImages(ValueError):
    "Exception raised when generator images do not define a homomorphism."
    pass


# ## Words
#
# Letters are signed 1-based generator numbers: `2` is the second generator
# and `-2` its inverse.


def check_word(w: Sequence[int], generator_count: int) -> None:
    for letter in w:
        if not isinstance(letter, (int, np.integer)) or letter == 0:
            raise InvalidWord(f"bad letter {letter!r} in {tuple(w)}")
        if abs(int(letter)) > generator_count:
            raise InvalidWord(
                f"letter {letter} out of range for {generator_count} generators"
            )


def free_reduce(w: Iterable[int]) -> Word:
    "Cancel adjacent inverse letters."
    out: List[int] = []
    for letter in w:
        if out and out[-1] == -letter:
            out.pop()
        else:
            out.append(int(letter))
    return tuple(out)


def cyclic_reduce(w: Iterable[int]) -> Word:
    "Free reduction followed by cancelling inverse letters at the two ends."
    r = free_reduce(w)
    i, j = 0, len(r) - 1
    while i < j and r[i] == -r[j]:
        i += 1
        j -= 1
    return r[i : j + 1]


def word_inverse(w: Sequence[int]) -> Word:
    return tuple(-letter for letter in reversed(w))


def word_power(w: Sequence[int], k: int) -> Word:
    "$w^k$, negative exponents allowed."
    base = tuple(w) if k >= 0 else word_inverse(w)
    return base * abs(k)


def commutator_word(a: Sequence[int], b: Sequence[int]) -> Word:
    "$[a, b] = a^{-1} b^{-1} a b$"
    return word_inverse(a) + word_inverse(b) + tuple(a) + tuple(b)


def parse_word(text: str, names: Sequence[str]) -> Word:
    """
    Parse a word such as ``"g1^2 z^-1"`` or ``"a*b^-1"``.

    Args:
        text: letters separated by spaces or `*`, each optionally `^k`
        names: generator names

    Returns:
        The word as signed generator numbers

    Raises:
        InvalidWord: for unknown names or malformed exponents
    """
    index = {name: i + 1 for i, name in enumerate(names)}
    out: List[int] = []
    for token in text.replace("*", " ").split():
        name, _, exp = token.partition("^")
        if name not in index:
            raise InvalidWord(f"unknown generator {name!r}")
        try:
            k = int(exp) if exp else 1
        except ValueError as e:
            raise InvalidWord(f"bad exponent in {token!r}") from e
        out.extend(word_power((index[name],), k))
    return tuple(out)


def _column(letter: int) -> int:
    return 2 * (abs(letter) - 1) + (1 if letter < 0 else 0)


@dataclass(frozen=True)
class Presentation:
    """
    A finite presentation together with the generators spanning the kernel of
    the projection onto the group it covers.
    """

    generator_names: Tuple[str, ...]
    relators: Tuple[Word, ...]
    kernel_generators: Tuple[int, ...] = ()

    def __post_init__(self) -> None:
        for r in self.relators:
            check_word(r, self.generator_count)
        for k in self.kernel_generators:
            if not 0 <= k < self.generator_count:
                raise InvalidWord(f"kernel generator {k} is not a generator index")

    @property
    def generator_count(self) -> int:
        return len(self.generator_names)

    def word(self, text: str) -> Word:
        return parse_word(text, self.generator_names)

    def fingerprint(self) -> str:
        "sha256 of a canonical JSON form; the cover-cache key."
        doc = {
            "generators": list(self.generator_names),
            "relators": [list(r) for r in self.relators],
            "kernel": list(self.kernel_generators),
        }
        raw = json.dumps(doc, sort_keys=True, separators=(",", ":")).encode()
        return hashlib.sha256(raw).hexdigest()


# ## Coset enumeration


class _TableFull(Exception):
    pass


class CosetTable:
    """
    Coset table over a subgroup, filled either HLT-style (relator scans with
    definitions, lookahead when the table is full) or Felsch-style
    (definitions in row order, consequences pushed through a deduction stack).

    Column `2i` holds the action of generator `i`, column `2i + 1` its
    inverse, `-1` marks an undefined entry.
    """

    def __init__(
        self,
        presentation: Presentation,
        subgroup: Sequence[Word] = (),
        max_cosets: int = 200_000,
        strategy: Strategy = "hlt",
    ):
        if max_cosets < 1:
            raise BudgetExceeded(f"max_cosets must be positive, got {max_cosets}")
        if strategy not in ("hlt", "felsch"):
            raise ValueError(f"unknown strategy {strategy!r}")
        for w in subgroup:
            check_word(w, presentation.generator_count)
        self.presentation = presentation
        self.width = 2 * presentation.generator_count
        self.max_cosets = max_cosets
        self.strategy = strategy
        self.table: List[List[int]] = [[-1] * self.width]
        self.p: List[int] = [0]
        self.live_count = 1
        self.defined = 1

        relators: List[Word] = []
        for r in presentation.relators:
            c = cyclic_reduce(r)
            if c and c not in relators:
                relators.append(c)
        self.relators = [[_column(x) for x in r] for r in relators]
        self.subgroup = [
            [_column(x) for x in free_reduce(w)] for w in subgroup if free_reduce(w)
        ]

        self.deductions: List[Tuple[int, int]] = []
        self._record = strategy == "felsch"
        self._overflowed = False
        self._by_first: List[List[List[int]]] = [[] for _ in range(self.width)]
        if self._record:
            for r in relators:
                for w in (r, word_inverse(r)):
                    for k in range(len(w)):
                        cols = [_column(x) for x in w[k:] + w[:k]]
                        if cols not in self._by_first[cols[0]]:
                            self._by_first[cols[0]].append(cols)

    def is_live(self, c: int) -> bool:
        return self.p[c] == c

    # ### primitive steps

    def _define(self, c: int, x: int) -> None:
        if self.live_count >= self.max_cosets:
            raise _TableFull()
        d = len(self.table)
        self.table.append([-1] * self.width)
        self.p.append(d)
        self.table[c][x] = d
        self.table[d][x ^ 1] = c
        self.live_count += 1
        self.defined += 1
        if self._record:
            self.deductions.append((c, x))

    def _rep(self, k: int) -> int:
        p = self.p
        lam = k
        rho = p[lam]
        while rho != lam:
            lam = rho
            rho = p[lam]
        mu = k
        rho = p[mu]
        while rho != lam:
            p[mu] = lam
            mu = rho
            rho = p[mu]
        return lam

    def _merge(self, k: int, lam: int, q: List[int]) -> None:
        phi = self._rep(k)
        psi = self._rep(lam)
        if phi != psi:
            mu, v = min(phi, psi), max(phi, psi)
            self.p[v] = mu
            self.live_count -= 1
            q.append(v)

    def _coincidence(self, a: int, b: int) -> None:
        table = self.table
        q: List[int] = []
        self._merge(a, b, q)
        while q:
            gamma = q.pop(0)
            for x in range(self.width):
                delta = table[gamma][x]
                if delta == -1:
                    continue
                table[delta][x ^ 1] = -1
                mu = self._rep(gamma)
                nu = self._rep(delta)
                if table[mu][x] != -1:
                    self._merge(nu, table[mu][x], q)
                elif table[nu][x ^ 1] != -1:
                    self._merge(mu, table[nu][x ^ 1], q)
                else:
                    table[mu][x] = nu
                    table[nu][x ^ 1] = mu
                    if self._record:
                        self.deductions.append((mu, x))

    def _scan(self, c: int, word: List[int], fill: bool) -> None:
        table = self.table
        f, b = c, c
        i, j = 0, len(word) - 1
        while True:
            while i <= j and table[f][word[i]] != -1:
                f = table[f][word[i]]
                i += 1
            if i > j:
                if f != b:
                    self._coincidence(f, b)
                return
            while j >= i and table[b][word[j] ^ 1] != -1:
                b = table[b][word[j] ^ 1]
                j -= 1
            if j < i:
                self._coincidence(f, b)
                return
            if j == i:
                table[f][word[i]] = b
                table[b][word[i] ^ 1] = f
                if self._record:
                    self.deductions.append((f, word[i]))
                return
            if not fill:
                return
            self._define(f, word[i])

    # ### strategies

    def _lookahead(self, alpha: int) -> Optional[int]:
        "Scan without defining; returns the shifted row pointer if cosets were freed."
        before = self.live_count
        for beta in range(alpha, len(self.table)):
            if not self.is_live(beta):
                continue
            for w in self.relators:
                if not self.is_live(beta):
                    break
                self._scan(beta, w, fill=False)
        log.debug("lookahead: %d -> %d live cosets", before, self.live_count)
        if self.live_count >= before:
            return None
        self.deductions.clear()
        return self._compress_from(alpha)

    def _compress_from(self, alpha: int) -> int:
        live = [c for c in range(len(self.table)) if self.is_live(c)]
        new = {c: i for i, c in enumerate(live)}
        rows = []
        for c in live:
            rows.append([new[self._rep(t)] if t != -1 else -1 for t in self.table[c]])
        self.table = rows
        self.p = list(range(len(rows)))
        return sum(1 for c in live if c < alpha)

    def _process_deductions(self) -> None:
        while self.deductions:
            if len(self.deductions) > MAX_DEDUCTIONS:
                self.deductions.clear()
                self._overflowed = True
                return
            alpha, x = self.deductions.pop()
            if not self.is_live(alpha):
                continue
            for w in self._by_first[x]:
                if not self.is_live(alpha):
                    break
                self._scan(alpha, w, fill=False)
            if not self.is_live(alpha):
                continue
            beta = self.table[alpha][x]
            if beta == -1 or not self.is_live(beta):
                continue
            for w in self._by_first[x ^ 1]:
                if not self.is_live(beta):
                    break
                self._scan(beta, w, fill=False)

    def _settle(self) -> None:
        "Rescan a complete table until every relator closes at every coset."
        while True:
            before = self.live_count
            for beta in range(len(self.table)):
                for w in self.relators:
                    if not self.is_live(beta):
                        break
                    self._scan(beta, w, fill=False)
            self.deductions.clear()
            if self.live_count == before:
                return

    def _hlt(self) -> None:
        for w in self.subgroup:
            self._scan(0, w, fill=True)
        alpha = 0
        while alpha < len(self.table):
            if self.is_live(alpha):
                try:
                    for w in self.relators:
                        if not self.is_live(alpha):
                            break
                        self._scan(alpha, w, fill=True)
                    if self.is_live(alpha):
                        row = self.table[alpha]
                        for x in range(self.width):
                            if row[x] == -1:
                                self._define(alpha, x)
                except _TableFull:
                    shifted = self._lookahead(alpha)
                    if shifted is None:
                        raise BudgetExceeded(
                            f"coset table did not close within {self.max_cosets} cosets"
                        )
                    alpha = shifted
                    continue
            alpha += 1

    def _felsch(self) -> None:
        for w in self.subgroup:
            self._scan(0, w, fill=True)
            self._process_deductions()
        alpha = 0
        while alpha < len(self.table):
            if self.is_live(alpha):
                for x in range(self.width):
                    if not self.is_live(alpha):
                        break
                    if self.table[alpha][x] != -1:
                        continue
                    try:
                        self._define(alpha, x)
                    except _TableFull:
                        shifted = self._lookahead(0)
                        if shifted is None:
                            raise BudgetExceeded(
                                f"coset table did not close within {self.max_cosets} cosets"
                            )
                        self._overflowed = True
                        alpha = -1
                        break
                    self._process_deductions()
            alpha += 1
        if self._overflowed:
            self._settle()

    def run(self) -> None:
        if self.strategy == "hlt":
            self._hlt()
        else:
            self._felsch()
        self._compress_from(0)
        log.debug(
            "%s enumeration closed: %d cosets (%d defined)",
            self.strategy,
            self.live_count,
            self.defined,
        )

    def standardize(self) -> PermRep:
        "Renumber cosets in first-appearance order along positive generators."
        raw = np.array(self.table, dtype=np.int64)
        if (raw < 0).any():
            raise RuntimeError("coset table is incomplete")
        return PermRep.from_table(raw, self.presentation.generator_names)


# ## Permutation representations


@njit(cache=True)
def _spanning_tree(
    table: npt.NDArray[np.int64],
) -> Tuple[npt.NDArray[np.int64], npt.NDArray[np.int64], npt.NDArray[np.int64]]:
    n = table.shape[0]
    gens = table.shape[1] // 2
    new = np.full(n, -1, np.int64)
    order = np.empty(n, np.int64)
    parent = np.full(n, -1, np.int64)
    letter = np.zeros(n, np.int64)
    new[0] = 0
    order[0] = 0
    size = 1
    head = 0
    while head < size:
        c = order[head]
        for g in range(gens):
            d = table[c, 2 * g]
            if new[d] == -1:
                new[d] = size
                order[size] = d
                parent[size] = head
                letter[size] = g + 1
                size += 1
        head += 1
    return order[:size], parent[:size], letter[:size]


@njit(cache=True)
def _tree_words(
    parent: npt.NDArray[np.int32], letter: npt.NDArray[np.int32]
) -> Tuple[npt.NDArray[np.int64], npt.NDArray[np.int32], npt.NDArray[np.int32]]:
    n = parent.shape[0]
    depth = np.zeros(n, np.int32)
    for c in range(1, n):
        depth[c] = depth[parent[c]] + 1
    ptr = np.zeros(n + 1, np.int64)
    for c in range(n):
        ptr[c + 1] = ptr[c] + depth[c]
    cols = np.empty(ptr[n], np.int32)
    for c in range(1, n):
        start = ptr[c]
        pstart = ptr[parent[c]]
        for k in range(depth[c] - 1):
            cols[start + k] = cols[pstart + k]
        cols[start + depth[c] - 1] = 2 * (letter[c] - 1)
    return ptr, cols, depth


@njit(inline="always")
def _mul(
    table: Table, ptr: npt.NDArray[np.int64], cols: npt.NDArray[np.int32], a: int, b: int
) -> int:
    c = a
    for k in range(ptr[b], ptr[b + 1]):
        c = table[c, cols[k]]
    return c


@njit(inline="always")
def _inv(
    table: Table, parent: npt.NDArray[np.int32], letter: npt.NDArray[np.int32], a: int
) -> int:
    c = 0
    x = a
    while x != 0:
        c = table[c, 2 * (letter[x] - 1) + 1]
        x = parent[x]
    return c


@njit(parallel=True, cache=True)
def _multiply_many(
    table: Table,
    ptr: npt.NDArray[np.int64],
    cols: npt.NDArray[np.int32],
    xs: Points,
    ys: Points,
) -> Points:
    out = np.empty(xs.shape[0], np.int64)
    for i in prange(xs.shape[0]):
        out[i] = _mul(table, ptr, cols, xs[i], ys[i])
    return out


@njit(parallel=True, cache=True)
def _inverse_many(
    table: Table, parent: npt.NDArray[np.int32], letter: npt.NDArray[np.int32], xs: Points
) -> Points:
    out = np.empty(xs.shape[0], np.int64)
    for i in prange(xs.shape[0]):
        out[i] = _inv(table, parent, letter, xs[i])
    return out


@njit(parallel=True, cache=True)
def _commute_many(
    table: Table,
    ptr: npt.NDArray[np.int64],
    cols: npt.NDArray[np.int32],
    xs: Points,
    ys: Points,
) -> npt.NDArray[np.bool_]:
    out = np.empty(xs.shape[0], np.bool_)
    for i in prange(xs.shape[0]):
        out[i] = _mul(table, ptr, cols, xs[i], ys[i]) == _mul(table, ptr, cols, ys[i], xs[i])
    return out


@njit(parallel=True, cache=True)
def _multiplication_table(
    table: Table, parent: npt.NDArray[np.int32], letter: npt.NDArray[np.int32]
) -> npt.NDArray[np.int32]:
    n = table.shape[0]
    out = np.empty((n, n), np.int32)
    for a in prange(n):
        out[a, 0] = a
        for b in range(1, n):
            out[a, b] = table[out[a, parent[b]], 2 * (letter[b] - 1)]
    return out


@njit(parallel=True, cache=True)
def _central_mask(
    table: Table, ptr: npt.NDArray[np.int64], cols: npt.NDArray[np.int32]
) -> npt.NDArray[np.bool_]:
    n = table.shape[0]
    gens = table.shape[1] // 2
    out = np.ones(n, np.bool_)
    for p in prange(n):
        for g in range(gens):
            if table[p, 2 * g] != _mul(table, ptr, cols, table[0, 2 * g], p):
                out[p] = False
                break
    return out


@njit(cache=True)
def _kernel_classes(
    table: Table, ptr: npt.NDArray[np.int64], cols: npt.NDArray[np.int32], kernel: Points
) -> Tuple[Points, Points]:
    n = table.shape[0]
    proj = np.full(n, -1, np.int64)
    lift = np.empty(n // kernel.shape[0], np.int64)
    cls = 0
    for p in range(n):
        if proj[p] == -1:
            lift[cls] = p
            for k in range(kernel.shape[0]):
                proj[_mul(table, ptr, cols, p, kernel[k])] = cls
            cls += 1
    return proj, lift


class PermRep:
    """
    Regular permutation representation of a finitely presented group on the
    cosets of the trivial subgroup (or the transitive action on the cosets of
    a subgroup).

    Points are numbered in first-appearance order from the identity coset 0,
    so every point `c > 0` has a tree parent `parent[c] < c` with
    `c = parent[c] * g_{letter[c]}`. For the regular action a point is also
    the group element it is the image of 0 under.
    """

    def __init__(self, table: Table, generator_names: Sequence[str]):
        self.table = np.ascontiguousarray(table, dtype=np.int32)
        self.table.flags.writeable = False
        self.generator_names = tuple(generator_names)
        order, parent, letter = _spanning_tree(self.table.astype(np.int64))
        if order.shape[0] != self.degree or not (order == np.arange(self.degree)).all():
            raise ValueError("table is not standardized")
        self.parent = parent.astype(np.int32)
        self.letter = letter.astype(np.int32)
        self._ptr, self._cols, self.depth = _tree_words(self.parent, self.letter)
        self._mult: Optional[npt.NDArray[np.int32]] = None

    @classmethod
    def from_table(cls, raw: npt.NDArray[np.int64], names: Sequence[str]) -> PermRep:
        "Standardize an arbitrary complete table."
        order, _, _ = _spanning_tree(raw)
        if order.shape[0] != raw.shape[0]:
            raise RuntimeError("coset table action is not transitive")
        new = np.empty(raw.shape[0], np.int64)
        new[order] = np.arange(raw.shape[0])
        return cls(new[raw[order]].astype(np.int32), names)

    @classmethod
    def from_images(cls, images: npt.NDArray[np.int32], names: Sequence[str]) -> PermRep:
        """
        Rebuild a representation from the generator images alone.

        Args:
            images: array (generators, degree), row `i` the permutation of `g_i`
            names: generator names

        Returns:
            The representation; identical to the one the images came from
        """
        images = np.asarray(images, dtype=np.int64)
        gens, degree = images.shape
        raw = np.empty((degree, 2 * gens), np.int64)
        for i in range(gens):
            if not (np.sort(images[i]) == np.arange(degree)).all():
                raise ValueError(f"image of generator {i} is not a permutation")
            raw[:, 2 * i] = images[i]
            raw[images[i], 2 * i + 1] = np.arange(degree)
        return cls.from_table(raw, names)

    @property
    def degree(self) -> int:
        return int(self.table.shape[0])

    @property
    def generator_count(self) -> int:
        return len(self.generator_names)

    @property
    def generator_images(self) -> npt.NDArray[np.int32]:
        return np.ascontiguousarray(self.table[:, 0::2].T)

    def generator_point(self, i: int) -> int:
        "The element `g_i` (0-based)."
        return int(self.table[0, 2 * i])

    def word_of(self, point: int) -> Word:
        "Positive tree word reaching `point` from the identity coset."
        out: List[int] = []
        while point != 0:
            out.append(int(self.letter[point]))
            point = int(self.parent[point])
        return tuple(reversed(out))

    def trace(self, point: int, w: Sequence[int]) -> int:
        check_word(w, self.generator_count)
        c = point
        for letter in free_reduce(w):
            c = int(self.table[c, _column(letter)])
        return c

    def multiplication_table(self, limit: int) -> Optional[npt.NDArray[np.int32]]:
        "Full table `M[a, b] = a * b`, materialized only when `degree <= limit`."
        if self._mult is None and self.degree <= limit:
            self._mult = _multiplication_table(self.table, self.parent, self.letter)
            self._mult.flags.writeable = False
        return self._mult

    def multiply_many(self, xs: Points, ys: Points) -> Points:
        xs = np.asarray(xs, dtype=np.int64)
        ys = np.asarray(ys, dtype=np.int64)
        if self._mult is not None:
            return self._mult[xs, ys].astype(np.int64)
        return _multiply_many(self.table, self._ptr, self._cols, xs, ys)

    def multiply(self, a: int, b: int) -> int:
        return int(self.multiply_many(np.array([a]), np.array([b]))[0])

    def inverse_many(self, xs: Points) -> Points:
        return _inverse_many(self.table, self.parent, self.letter, np.asarray(xs, np.int64))

    def inverse(self, a: int) -> int:
        return int(self.inverse_many(np.array([a]))[0])

    def commutes_many(self, xs: Points, ys: Points) -> npt.NDArray[np.bool_]:
        xs = np.asarray(xs, dtype=np.int64)
        ys = np.asarray(ys, dtype=np.int64)
        if self._mult is not None:
            return self._mult[xs, ys] == self._mult[ys, xs]
        return _commute_many(self.table, self._ptr, self._cols, xs, ys)

    def commutes(self, a: int, b: int) -> bool:
        return bool(self.commutes_many(np.array([a]), np.array([b]))[0])

    def commutator(self, a: int, b: int) -> int:
        ia, ib = self.inverse(a), self.inverse(b)
        return self.multiply(self.multiply(self.multiply(ia, ib), a), b)

    def conjugate(self, a: int, s: int) -> int:
        "$s^{-1} a s$"
        return self.multiply(self.multiply(self.inverse(s), a), s)

    def power(self, a: int, k: int) -> int:
        if k < 0:
            a, k = self.inverse(a), -k
        result, base = 0, a
        while k:
            if k & 1:
                result = self.multiply(result, base)
            base = self.multiply(base, base)
            k >>= 1
        return result

    def order(self, a: int) -> int:
        m, c = 1, a
        while c != 0:
            c = self.multiply(c, a)
            m += 1
        return m

    def right_action(self, x: int) -> Points:
        "Permutation of all points under right multiplication by `x`."
        pts = np.arange(self.degree, dtype=np.int64)
        return self.multiply_many(pts, np.full(self.degree, x, np.int64))

    def central_points(self) -> Points:
        return np.flatnonzero(_central_mask(self.table, self._ptr, self._cols)).astype(
            np.int64
        )

    def subgroup_closure(self, generators: Iterable[int]) -> Points:
        "Sorted points of the subgroup generated by `generators`."
        gens = np.array(sorted(set(int(g) for g in generators)), dtype=np.int64)
        seen = np.zeros(self.degree, np.bool_)
        seen[0] = True
        frontier = np.array([0], np.int64)
        while frontier.shape[0] and gens.shape[0]:
            xs = np.repeat(frontier, gens.shape[0])
            ys = np.tile(gens, frontier.shape[0])
            nxt = np.unique(self.multiply_many(xs, ys))
            nxt = nxt[~seen[nxt]]
            seen[nxt] = True
            frontier = nxt
        return np.flatnonzero(seen).astype(np.int64)

    def derived_subgroup(self, generators: Iterable[int]) -> Points:
        "Derived subgroup of the subgroup generated by `generators`."
        gens = sorted(set(int(g) for g in generators))
        normal: Set[int] = {self.commutator(a, b) for a in gens for b in gens}
        queue = list(normal)
        while queue:
            c = queue.pop()
            for s in gens:
                d = self.conjugate(c, s)
                if d not in normal:
                    normal.add(d)
                    queue.append(d)
        return self.subgroup_closure(normal)


@dataclass(frozen=True)
class CoverElement:
    "An element of a presented group, compared by the point it sends coset 0 to."

    point_image: int
    word: Word = field(default=(), compare=False)


def coset_enumerate(
    p: Presentation,
    subgroup: Sequence[Word] = (),
    max_cosets: int = 200_000,
    strategy: Strategy = "hlt",
) -> PermRep:
    """
    Todd-Coxeter coset enumeration.

    Args:
        p: presentation of a finite group
        subgroup: words generating the subgroup whose cosets are enumerated
        max_cosets: largest number of simultaneously live cosets allowed
        strategy: `"hlt"` (with lookahead) or `"felsch"`

    Returns:
        Standardized permutation representation on the cosets

    Raises:
        BudgetExceeded: if the table does not close within `max_cosets`
        InvalidWord: for out-of-range letters
    """
    ct = CosetTable(p, subgroup, max_cosets, strategy)
    ct.run()
    rep = ct.standardize()
    log.info("enumerated %d cosets (%s)", rep.degree, strategy)
    return rep


def eval_word(rep: PermRep, w: Sequence[int]) -> CoverElement:
    "Compose generator images left to right; the empty word is the identity."
    return CoverElement(rep.trace(0, w), tuple(w))


def element_commutator(rep: PermRep, x: CoverElement, y: CoverElement) -> CoverElement:
    "$[x, y] = x^{-1} y^{-1} x y$"
    return CoverElement(
        rep.commutator(x.point_image, y.point_image), commutator_word(x.word, y.word)
    )


def element_order(rep: PermRep, x: CoverElement) -> int:
    return rep.order(x.point_image)


def center(rep: PermRep) -> Set[CoverElement]:
    "Elements commuting with every generator."
    return {CoverElement(int(c), rep.word_of(int(c))) for c in rep.central_points()}


@dataclass(frozen=True)
class CoverProjection:
    """
    Projection of a cover onto its quotient by the kernel subgroup.

    `projection[point]` is a quotient index, `lift[index]` a fixed preimage
    point and `kernel` the sorted kernel points.
    """

    projection: Points
    lift: Points
    kernel: Points

    @property
    def quotient_order(self) -> int:
        return int(self.lift.shape[0])

    def project(self, x: CoverElement) -> int:
        return int(self.projection[x.point_image])

    def lift_element(self, rep: PermRep, g: int) -> CoverElement:
        c = int(self.lift[g])
        return CoverElement(c, rep.word_of(c))

    def relabel(self, mapping: Points) -> CoverProjection:
        "Rename quotient index `i` to `mapping[i]`."
        mapping = np.asarray(mapping, dtype=np.int64)
        lift = np.empty_like(self.lift)
        lift[mapping] = self.lift
        return CoverProjection(mapping[self.projection], lift, self.kernel)


def project_and_lift(rep: PermRep, p: Presentation) -> CoverProjection:
    """
    Quotient of `rep` by the subgroup spanned by `p.kernel_generators`.

    Args:
        rep: regular representation of the cover
        p: the presentation it was enumerated from

    Returns:
        Projection with quotient indices in first-appearance order

    Raises:
        NonCentralKernel: if a kernel generator is not central
    """
    gens = [rep.generator_point(i) for i in range(rep.generator_count)]
    kernel_gens = [rep.generator_point(k) for k in p.kernel_generators]
    for k, kp in zip(p.kernel_generators, kernel_gens):
        if not all(rep.commutes(kp, g) for g in gens):
            raise NonCentralKernel(f"kernel generator {p.generator_names[k]} is not central")
    kernel = rep.subgroup_closure(kernel_gens)
    proj, lift = _kernel_classes(rep.table, rep._ptr, rep._cols, kernel)
    return CoverProjection(proj, lift, kernel)


def homomorphism_images(
    rep: PermRep, images: Sequence[int], mul: Callable[[Points, Points], Points]
) -> Points:
    """
    Extend generator images to every point and check the result is a homomorphism.

    Args:
        rep: regular representation of the cover
        images: image of each generator in the target group (element indices)
        mul: vectorized multiplication of the target group

    Returns:
        Image of every point

    Raises:
        BadImages: if some relation of the cover is not respected
    """
    gimg = np.asarray(images, dtype=np.int64)
    if gimg.shape[0] != rep.generator_count:
        raise BadImages(f"expected {rep.generator_count} images, got {gimg.shape[0]}")
    img = np.zeros(rep.degree, np.int64)
    for d in range(1, int(rep.depth.max(initial=0)) + 1):
        pts = np.flatnonzero(rep.depth == d)
        img[pts] = mul(img[rep.parent[pts]], gimg[rep.letter[pts] - 1])
    for i in range(rep.generator_count):
        moved = img[rep.table[:, 2 * i]]
        if not np.array_equal(moved, mul(img, np.full(rep.degree, gimg[i]))):
            raise BadImages(f"image of {rep.generator_names[i]} breaks a relation")
    return img


def identify_quotient(
    rep: PermRep,
    cp: CoverProjection,
    images: Sequence[int],
    mul: Callable[[Points, Points], Points],
    order: int,
) -> CoverProjection:
    """
    Relabel the quotient of a cover by the elements of a concrete group.

    Args:
        rep: regular representation of the cover
        cp: projection from `project_and_lift`
        images: image of each cover generator in the group
        mul: vectorized multiplication of the group
        order: order of the group

    Returns:
        Projection whose quotient indices are the group's element indices

    Raises:
        BadImages: if the images do not induce an isomorphism of the quotient
    """
    img = homomorphism_images(rep, images, mul)
    named = img[cp.lift]
    if cp.quotient_order != order or np.unique(named).shape[0] != order:
        raise BadImages(
            f"quotient of order {cp.quotient_order} does not match group of order {order}"
        )
    if not np.array_equal(img, named[cp.projection]):
        raise BadImages("images are not constant on kernel cosets")
    return cp.relabel(named)


def kernel_elements(rep: PermRep, cp: CoverProjection) -> List[CoverElement]:
    return [CoverElement(int(k), rep.word_of(int(k))) for k in cp.kernel]


def relator_violations(rep: PermRep, p: Presentation) -> List[Word]:
    "Relators that do not evaluate to the identity (empty for a valid cover)."
    return [r for r in p.relators if rep.trace(0, r) != 0]


def point_orders(rep: PermRep, points: Optional[Points] = None) -> Dict[int, int]:
    pts = range(rep.degree) if points is None else points
    return {int(c): rep.order(int(c)) for c in pts}
