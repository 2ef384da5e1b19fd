"""
The group families the graphs are built over: specs and their text form,
vectorized element arithmetic, Schur cover presentations, the metacyclic
multiplier formula and coprime decompositions.
"""

from __future__ import annotations

import itertools
import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import numpy.typing as npt
from typing_extensions import TypeAlias

from .fpgroup import Presentation, Word, commutator_word, word_inverse, word_power
from .operators import (
    factorial,
    factorize,
    gcd,
    geometric_sum,
    is_prime,
    is_prime_power,
    pairwise_coprime,
    prod,
)

log = logging.getLogger(__name__)

Elements: TypeAlias = npt.NDArray[np.int64]
Codes: TypeAlias = npt.NDArray[np.int64]


class InvalidSpec(ValueError):
    "Exception raised for group parameters outside a family's bounds."
    pass


class NotCoprime(InvalidSpec):
    "Exception raised when product factors have orders that are not coprime."
    pass


class SpecSyntaxError(InvalidSpec):
    "Exception raised for text that is not a group spec."
    pass


class InvalidParams(ValueError):
    "Exception raised for metacyclic parameters that do not define a group."
    pass


class Unsupported(RuntimeError):
    "Exception raised for a cover the catalog cannot present."
    pass


# ## Specs


class GroupSpec:
    "Base of the tagged group descriptions."

    @property
    def order(self) -> int:
        raise NotImplementedError

    def __str__(self) -> str:
        return format_spec(self)


@dataclass(frozen=True)
class Cyclic(GroupSpec):
    n: int

    def __post_init__(self) -> None:
        if self.n < 1:
            raise InvalidSpec(f"cyclic group needs n >= 1, got {self.n}")

    @property
    def order(self) -> int:
        return self.n


@dataclass(frozen=True)
class AbelianP(GroupSpec):
    "$C_{p^{r_1}} \\times \\dots \\times C_{p^{r_k}}$ with $r_1 \\geq \\dots \\geq r_k$."

    p: int
    ranks: Tuple[int, ...]

    def __post_init__(self) -> None:
        if not is_prime(self.p):
            raise InvalidSpec(f"{self.p} is not prime")
        if not self.ranks or min(self.ranks) < 1:
            raise InvalidSpec(f"ranks must be positive, got {self.ranks}")
        if list(self.ranks) != sorted(self.ranks, reverse=True):
            raise InvalidSpec(f"ranks must be descending, got {self.ranks}")

    @property
    def order(self) -> int:
        return int(self.p ** sum(self.ranks))

    @property
    def moduli(self) -> Tuple[int, ...]:
        return tuple(self.p**r for r in self.ranks)


@dataclass(frozen=True)
class Abelian(GroupSpec):
    "Product of abelian p-groups for distinct primes."

    parts: Tuple[AbelianP, ...]

    def __post_init__(self) -> None:
        if not self.parts:
            raise InvalidSpec("abelian group needs at least one part")
        primes = [q.p for q in self.parts]
        if len(set(primes)) != len(primes):
            raise NotCoprime(f"repeated prime in {primes}")

    @property
    def order(self) -> int:
        return prod(q.order for q in self.parts)


@dataclass(frozen=True)
class Dihedral(GroupSpec):
    "Dihedral group of order 2n."

    n: int

    def __post_init__(self) -> None:
        if self.n < 3:
            raise InvalidSpec(f"dihedral group needs n >= 3, got {self.n}")

    @property
    def order(self) -> int:
        return 2 * self.n


@dataclass(frozen=True)
class Quaternion(GroupSpec):
    "Generalized quaternion (dicyclic) group of order 4n."

    n: int

    def __post_init__(self) -> None:
        if self.n < 2:
            raise InvalidSpec(f"quaternion group needs n >= 2, got {self.n}")

    @property
    def order(self) -> int:
        return 4 * self.n


@dataclass(frozen=True)
class Heisenberg(GroupSpec):
    "Heisenberg group over $\\mathbb{Z}/p^k$."

    p: int
    k: int

    def __post_init__(self) -> None:
        if not is_prime(self.p) or self.p == 2:
            raise InvalidSpec(f"Heisenberg group needs an odd prime, got {self.p}")
        if self.k < 1:
            raise InvalidSpec(f"Heisenberg group needs k >= 1, got {self.k}")

    @property
    def order(self) -> int:
        return int(self.p ** (3 * self.k))


@dataclass(frozen=True)
class Symmetric(GroupSpec):
    n: int

    def __post_init__(self) -> None:
        if self.n < 3:
            raise InvalidSpec(f"symmetric group needs n >= 3, got {self.n}")

    @property
    def order(self) -> int:
        return factorial(self.n)


@dataclass(frozen=True)
class Alternating(GroupSpec):
    n: int

    def __post_init__(self) -> None:
        if self.n < 3:
            raise InvalidSpec(f"alternating group needs n >= 3, got {self.n}")

    @property
    def order(self) -> int:
        return factorial(self.n) // 2


@dataclass(frozen=True)
class MetacyclicParams:
    "$\\langle a, b \\mid a^m, b^s = a^t, b^{-1} a b = a^r \\rangle$"

    m: int
    s: int
    t: int
    r: int

    def validate(self) -> None:
        if min(self.m, self.s, self.t, self.r) < 1:
            raise InvalidParams(f"parameters must be positive: {self}")
        if pow(self.r, self.s, self.m) != 1 % self.m:
            raise InvalidParams(f"r^s is not 1 mod m: {self}")
        if (self.t * (self.r - 1)) % self.m != 0:
            raise InvalidParams(f"m does not divide t(r - 1): {self}")
        if self.m % self.t != 0:
            raise InvalidParams(f"t does not divide m: {self}")

    @classmethod
    def dihedral(cls, n: int) -> MetacyclicParams:
        return cls(n, 2, n, n - 1)

    @classmethod
    def quaternion(cls, n: int) -> MetacyclicParams:
        return cls(2 * n, 2, n, 2 * n - 1)

    @classmethod
    def extraspecial(cls, p: int) -> MetacyclicParams:
        "The non-abelian group of order $p^3$ and exponent $p^2$."
        return cls(p * p, p, p * p, 1 + p)


@dataclass(frozen=True)
class Metacyclic(GroupSpec):
    params: MetacyclicParams

    def __post_init__(self) -> None:
        try:
            self.params.validate()
        except InvalidParams as e:
            raise InvalidSpec(str(e)) from e

    @property
    def order(self) -> int:
        return self.params.m * self.params.s


@dataclass(frozen=True)
class CoprimeProduct(GroupSpec):
    factors: Tuple[GroupSpec, ...]

    def __post_init__(self) -> None:
        if not self.factors:
            raise InvalidSpec("product needs at least one factor")
        orders = [f.order for f in self.factors]
        if not pairwise_coprime(orders):
            raise NotCoprime(f"factor orders {orders} are not pairwise coprime")

    @property
    def order(self) -> int:
        return prod(f.order for f in self.factors)


@dataclass(frozen=True)
class SelfCover:
    "Marker: the group is its own Schur cover (trivial multiplier)."

    spec: GroupSpec


# ## Text form


def _split_top(text: str) -> List[str]:
    out, depth, start = [], 0, 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
            if depth < 0:
                raise SpecSyntaxError(f"unbalanced parentheses in {text!r}")
        elif ch == ";" and depth == 0:
            out.append(text[start:i])
            start = i + 1
    if depth != 0:
        raise SpecSyntaxError(f"unbalanced parentheses in {text!r}")
    out.append(text[start:])
    return out


def _ints(text: str, sep: str = ",") -> Tuple[int, ...]:
    try:
        return tuple(int(x) for x in text.split(sep))
    except ValueError as e:
        raise SpecSyntaxError(f"expected integers, got {text!r}") from e


def parse_spec(text: str) -> GroupSpec:
    """
    Parse the canonical text form, e.g. ``abelianp:3:2,1``, ``sym:6``,
    ``dih:12`` or ``prod(abelianp:2:1,1;cyc:9)``.

    Args:
        text: spec text

    Returns:
        The spec

    Raises:
        SpecSyntaxError: for text that does not parse
        InvalidSpec: for parameters out of range
    """
    s = text.strip().replace(" ", "")
    for head, build in (("prod(", "prod"), ("abelian(", "abelian")):
        if s.startswith(head):
            if not s.endswith(")"):
                raise SpecSyntaxError(f"missing ')' in {text!r}")
            inner = [parse_spec(x) for x in _split_top(s[len(head) : -1])]
            if build == "prod":
                return CoprimeProduct(tuple(inner))
            if not all(isinstance(x, AbelianP) for x in inner):
                raise SpecSyntaxError(f"abelian(...) takes abelianp parts: {text!r}")
            return Abelian(tuple(x for x in inner if isinstance(x, AbelianP)))
    kind, _, rest = s.partition(":")
    args = rest.split(":") if rest else []
    try:
        if kind == "cyc" and len(args) == 1:
            return Cyclic(int(args[0]))
        if kind == "abelianp" and len(args) == 2:
            return AbelianP(int(args[0]), _ints(args[1]))
        if kind == "dih" and len(args) == 1:
            order = int(args[0])
            if order % 2:
                raise InvalidSpec(f"dihedral order must be even, got {order}")
            return Dihedral(order // 2)
        if kind == "quat" and len(args) == 1:
            order = int(args[0])
            if order % 4:
                raise InvalidSpec(f"quaternion order must be divisible by 4, got {order}")
            return Quaternion(order // 4)
        if kind == "heis" and len(args) == 2:
            return Heisenberg(int(args[0]), int(args[1]))
        if kind == "sym" and len(args) == 1:
            return Symmetric(int(args[0]))
        if kind == "alt" and len(args) == 1:
            return Alternating(int(args[0]))
        if kind == "meta" and len(args) == 4:
            m, s_, t, r = (int(a) for a in args)
            return Metacyclic(MetacyclicParams(m, s_, t, r))
    except ValueError as e:
        if isinstance(e, InvalidSpec):
            raise
        raise SpecSyntaxError(f"bad number in {text!r}") from e
    raise SpecSyntaxError(f"unknown group spec {text!r}")


def format_spec(spec: GroupSpec) -> str:
    "Canonical text form; `parse_spec(format_spec(s)) == s`."
    if isinstance(spec, Cyclic):
        return f"cyc:{spec.n}"
    if isinstance(spec, AbelianP):
        return f"abelianp:{spec.p}:{','.join(str(r) for r in spec.ranks)}"
    if isinstance(spec, Abelian):
        return "abelian(" + ";".join(format_spec(q) for q in spec.parts) + ")"
    if isinstance(spec, Dihedral):
        return f"dih:{spec.order}"
    if isinstance(spec, Quaternion):
        return f"quat:{spec.order}"
    if isinstance(spec, Heisenberg):
        return f"heis:{spec.p}:{spec.k}"
    if isinstance(spec, Symmetric):
        return f"sym:{spec.n}"
    if isinstance(spec, Alternating):
        return f"alt:{spec.n}"
    if isinstance(spec, Metacyclic):
        q = spec.params
        return f"meta:{q.m}:{q.s}:{q.t}:{q.r}"
    if isinstance(spec, CoprimeProduct):
        return "prod(" + ";".join(format_spec(f) for f in spec.factors) + ")"
    raise InvalidSpec(f"not a group spec: {spec!r}")


# ## Group handles


class GroupHandle:
    """
    Uniform finite-group interface. Elements are indices `0 .. size - 1`,
    index 0 is the identity, and every operation is vectorized over index
    arrays.
    """

    spec: GroupSpec
    size: int
    abelian: bool = False
    identity = 0

    def mul(self, xs: Elements, ys: Elements) -> Elements:
        raise NotImplementedError

    def inv(self, xs: Elements) -> Elements:
        raise NotImplementedError

    def label(self, x: int) -> str:
        raise NotImplementedError

    def generators(self) -> List[int]:
        raise NotImplementedError

    def __len__(self) -> int:
        return self.size

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {format_spec(self.spec)} of order {self.size}>"

    def all(self) -> Elements:
        return np.arange(self.size, dtype=np.int64)

    def labels(self) -> List[str]:
        return [self.label(x) for x in range(self.size)]

    def multiply(self, x: int, y: int) -> int:
        return int(self.mul(np.array([x]), np.array([y]))[0])

    def inverse(self, x: int) -> int:
        return int(self.inv(np.array([x]))[0])

    def commutes(self, xs: Elements, ys: Elements) -> npt.NDArray[np.bool_]:
        xs, ys = np.asarray(xs, np.int64), np.asarray(ys, np.int64)
        return self.mul(xs, ys) == self.mul(ys, xs)

    def conjugate(self, xs: Elements, cs: Elements) -> Elements:
        "$c^{-1} x c$"
        cs = np.asarray(cs, np.int64)
        return self.mul(self.mul(self.inv(cs), np.asarray(xs, np.int64)), cs)

    def power(self, xs: Elements, k: int) -> Elements:
        xs = np.asarray(xs, np.int64)
        if k < 0:
            xs, k = self.inv(xs), -k
        result = np.zeros_like(xs)
        base = xs
        while k:
            if k & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            k >>= 1
        return result

    def orders(self) -> Elements:
        "Order of every element."
        cache = self.__dict__.get("_orders")
        if cache is None:
            xs = self.all()
            cur = xs.copy()
            cache = np.ones(self.size, np.int64)
            active = np.flatnonzero(cur != 0)
            while active.shape[0]:
                cur[active] = self.mul(cur[active], xs[active])
                cache[active] += 1
                active = active[cur[active] != 0]
            cache.flags.writeable = False
            self.__dict__["_orders"] = cache
        return cache

    def power_table(self) -> npt.NDArray[np.int64]:
        "`T[x, k] = x^k` for `k` below the largest element order."
        cache = self.__dict__.get("_powers")
        if cache is None:
            width = int(self.orders().max())
            xs = self.all()
            cache = np.zeros((self.size, width), np.int64)
            for k in range(1, width):
                cache[:, k] = self.mul(cache[:, k - 1], xs)
            cache.flags.writeable = False
            self.__dict__["_powers"] = cache
        return cache

    def cyclic_subgroup(self, x: int) -> Elements:
        "Elements of $\\langle x \\rangle$ in power order."
        return self.power_table()[x, : self.orders()[x]]

    def is_cyclic(self) -> bool:
        return int(self.orders().max()) == self.size

    def centralizer(self, x: int) -> Elements:
        xs = self.all()
        return xs[self.commutes(np.full(self.size, x), xs)]

    def conjugacy_data(self) -> Tuple[Elements, List[int], Elements]:
        """
        Conjugacy classes with a transporting element for every member.

        Returns:
            `(class_of, reps, conjugator)` with
            `x == conjugate(reps[class_of[x]], conjugator[x])`
        """
        cache = self.__dict__.get("_classes")
        if cache is not None:
            return cache  # type: ignore
        if self.abelian:
            cache = (self.all(), list(range(self.size)), np.zeros(self.size, np.int64))
        else:
            class_of = np.full(self.size, -1, np.int64)
            conjugator = np.zeros(self.size, np.int64)
            reps: List[int] = []
            cs = self.all()
            for x in range(self.size):
                if class_of[x] != -1:
                    continue
                images = self.conjugate(np.full(self.size, x), cs)
                uniq, first = np.unique(images, return_index=True)
                class_of[uniq] = len(reps)
                conjugator[uniq] = cs[first]
                reps.append(x)
            cache = (class_of, reps, conjugator)
            log.debug("%s: %d conjugacy classes", format_spec(self.spec), len(reps))
        self.__dict__["_classes"] = cache
        return cache

    def conjugacy_classes(self) -> List[Elements]:
        class_of, reps, _ = self.conjugacy_data()
        return [np.flatnonzero(class_of == i) for i in range(len(reps))]

    def commuting_partners(self, x: int) -> Elements:
        "Sorted centralizer of `x`, transported from its class representative."
        if self.abelian:
            return self.all()
        class_of, reps, conjugator = self.conjugacy_data()
        r = reps[int(class_of[x])]
        cents: Dict[int, Elements] = self.__dict__.setdefault("_centralizers", {})
        if r not in cents:
            cents[r] = self.centralizer(r)
        c = int(conjugator[x])
        return np.sort(self.conjugate(cents[r], np.full(cents[r].shape[0], c)))

    def subgroup_closure(self, generators: Sequence[int]) -> Elements:
        gens = np.array(sorted(set(int(g) for g in generators)), np.int64)
        seen = np.zeros(self.size, np.bool_)
        seen[0] = True
        frontier = np.array([0], np.int64)
        while frontier.shape[0] and gens.shape[0]:
            nxt = np.unique(
                self.mul(np.repeat(frontier, gens.shape[0]), np.tile(gens, frontier.shape[0]))
            )
            nxt = nxt[~seen[nxt]]
            seen[nxt] = True
            frontier = nxt
        return np.flatnonzero(seen).astype(np.int64)

    def derived_subgroup(self) -> Elements:
        "Normal closure of the commutators of the generators."
        gens = self.generators()
        comms = set()
        for a in gens:
            for b in gens:
                c = self.mul(
                    self.mul(self.inv(np.array([a])), self.inv(np.array([b]))),
                    self.mul(np.array([a]), np.array([b])),
                )
                comms.add(int(c[0]))
        cs = self.all()
        conj = set()
        for c in comms:
            conj.update(int(v) for v in np.unique(self.conjugate(np.full(self.size, c), cs)))
        return self.subgroup_closure(sorted(conj))

    def center(self) -> Elements:
        xs = self.all()
        mask = np.ones(self.size, np.bool_)
        for g in self.generators():
            mask &= self.commutes(xs, np.full(self.size, g))
        return xs[mask]


class CodedGroup(GroupHandle):
    """
    Group whose elements are rows of an integer code array, located through a
    dense key lookup.
    """

    def __init__(self, spec: GroupSpec, codes: Codes, key_space: int, abelian: bool):
        self.spec = spec
        self.codes = np.ascontiguousarray(codes, dtype=np.int64)
        self.codes.flags.writeable = False
        self.size = int(self.codes.shape[0])
        self.abelian = abelian
        self._lookup = np.full(key_space, -1, np.int64)
        self._lookup[self._key(self.codes)] = np.arange(self.size)
        if self.size != spec.order:
            raise InvalidSpec(f"built {self.size} elements for {spec}, expected {spec.order}")

    def _key(self, codes: Codes) -> Elements:
        raise NotImplementedError

    def _mul_codes(self, a: Codes, b: Codes) -> Codes:
        raise NotImplementedError

    def _inv_codes(self, a: Codes) -> Codes:
        raise NotImplementedError

    def index_of(self, codes: Union[Codes, Sequence[Sequence[int]]]) -> Elements:
        """
        Element indices of the given codes.

        Args:
            codes: array (k, d) of element codes

        Returns:
            Indices

        Raises:
            KeyError: for a code that is not an element
        """
        arr = np.atleast_2d(np.asarray(codes, dtype=np.int64))
        if arr.shape[1] != self.codes.shape[1]:
            raise KeyError(f"not an element of {format_spec(self.spec)}: code width {arr.shape[1]}")
        keys = self._key(arr)
        idx = np.full(arr.shape[0], -1, np.int64)
        inside = (keys >= 0) & (keys < self._lookup.shape[0])
        idx[inside] = self._lookup[keys[inside]]
        # keys alias for codes outside the radix; only stored codes count
        found = idx >= 0
        found[found] = (self.codes[idx[found]] == arr[found]).all(axis=1)
        if not found.all():
            raise KeyError(f"not an element of {format_spec(self.spec)}: {arr[~found][0]}")
        return idx

    def element(self, x: int) -> Tuple[int, ...]:
        return tuple(int(v) for v in self.codes[x])

    def mul(self, xs: Elements, ys: Elements) -> Elements:
        return self._lookup[
            self._key(self._mul_codes(self.codes[np.asarray(xs)], self.codes[np.asarray(ys)]))
        ]

    def inv(self, xs: Elements) -> Elements:
        return self._lookup[self._key(self._inv_codes(self.codes[np.asarray(xs)]))]


class MixedRadixGroup(CodedGroup):
    "Codes are tuples with coordinate `i` taken mod `radix[i]`."

    def __init__(self, spec: GroupSpec, radix: Sequence[int], codes: Codes, abelian: bool):
        self.radix = np.array(radix, dtype=np.int64)
        weights = np.ones(len(radix), np.int64)
        for i in range(len(radix) - 2, -1, -1):
            weights[i] = weights[i + 1] * radix[i + 1]
        self._weights = weights
        super().__init__(spec, codes, prod(radix), abelian)

    def _key(self, codes: Codes) -> Elements:
        return codes @ self._weights


class AbelianGroup(MixedRadixGroup):
    def __init__(self, spec: GroupSpec, moduli: Sequence[int]):
        codes = np.array(list(itertools.product(*(range(m) for m in moduli))), np.int64)
        super().__init__(spec, moduli, codes.reshape(-1, len(moduli)), abelian=True)

    def _mul_codes(self, a: Codes, b: Codes) -> Codes:
        return (a + b) % self.radix

    def _inv_codes(self, a: Codes) -> Codes:
        return (-a) % self.radix

    def label(self, x: int) -> str:
        if x == 0:
            return "e"
        return "(" + ",".join(str(v) for v in self.codes[x]) + ")"

    def generators(self) -> List[int]:
        units = np.eye(len(self.radix), dtype=np.int64)[self.radix > 1]
        if not units.shape[0]:
            return []
        return [int(i) for i in self.index_of(units)]


class DihedralGroup(MixedRadixGroup):
    "Codes `(s, i)` for $a^i b^s$, rotations first."

    def __init__(self, spec: Dihedral):
        n = spec.n
        codes = np.array([(s, i) for s in range(2) for i in range(n)], np.int64)
        super().__init__(spec, (2, n), codes, abelian=False)
        self.n = n

    def _mul_codes(self, a: Codes, b: Codes) -> Codes:
        s, i = a[:, 0], a[:, 1]
        t, j = b[:, 0], b[:, 1]
        sign = 1 - 2 * s
        return np.stack([(s + t) % 2, (i + sign * j) % self.n], axis=1)

    def _inv_codes(self, a: Codes) -> Codes:
        s, i = a[:, 0], a[:, 1]
        return np.stack([s, np.where(s == 0, (-i) % self.n, i)], axis=1)

    def rotation(self, i: int) -> int:
        return int(self.index_of([[0, i % self.n]])[0])

    def reflection(self, i: int) -> int:
        "$a^i b$"
        return int(self.index_of([[1, i % self.n]])[0])

    def label(self, x: int) -> str:
        s, i = self.codes[x]
        rot = "" if i == 0 else ("a" if i == 1 else f"a^{i}")
        if s == 0:
            return rot or "e"
        return f"{rot}b" if rot else "b"

    def generators(self) -> List[int]:
        return [self.rotation(1), self.reflection(0)]


class QuaternionGroup(MixedRadixGroup):
    "$a^{2n} = e$, $b^2 = a^n$, $b^{-1} a b = a^{-1}$; codes `(s, i)` for $a^i b^s$."

    def __init__(self, spec: Quaternion):
        n = spec.n
        codes = np.array([(s, i) for s in range(2) for i in range(2 * n)], np.int64)
        super().__init__(spec, (2, 2 * n), codes, abelian=False)
        self.n = n

    def _mul_codes(self, a: Codes, b: Codes) -> Codes:
        s, i = a[:, 0], a[:, 1]
        t, j = b[:, 0], b[:, 1]
        sign = 1 - 2 * s
        return np.stack([(s + t) % 2, (i + sign * j + self.n * s * t) % (2 * self.n)], axis=1)

    def _inv_codes(self, a: Codes) -> Codes:
        s, i = a[:, 0], a[:, 1]
        return np.stack([s, np.where(s == 0, -i, i + self.n) % (2 * self.n)], axis=1)

    def element_at(self, i: int, s: int) -> int:
        return int(self.index_of([[s, i % (2 * self.n)]])[0])

    def label(self, x: int) -> str:
        s, i = self.codes[x]
        rot = "" if i == 0 else ("a" if i == 1 else f"a^{i}")
        if s == 0:
            return rot or "e"
        return f"{rot}b" if rot else "b"

    def generators(self) -> List[int]:
        return [self.element_at(1, 0), self.element_at(0, 1)]


class HeisenbergGroup(MixedRadixGroup):
    """
    Codes `(i1, i2, i3)` for $y_1^{i_1} y_2^{i_2} w^{i_3}$ over $\\mathbb{Z}/p^k$,
    multiplied in closed form with $[y_1, y_2] = w$ central.
    """

    def __init__(self, spec: Heisenberg):
        q = spec.p**spec.k
        codes = np.array(list(itertools.product(range(q), repeat=3)), np.int64)
        super().__init__(spec, (q, q, q), codes, abelian=False)
        self.q = q

    def _mul_codes(self, a: Codes, b: Codes) -> Codes:
        out = a + b
        out[:, 2] -= a[:, 1] * b[:, 0]
        return out % self.q

    def _inv_codes(self, a: Codes) -> Codes:
        out = -a
        out[:, 2] = -a[:, 0] * a[:, 1] - a[:, 2]
        return out % self.q

    def word_power_code(self, code: Sequence[int], l: int) -> Tuple[int, int, int]:
        "$(y_1^{i_1} y_2^{i_2} w^{i_3})^l$ by the closed power formula."
        i1, i2, i3 = code
        return (
            (l * i1) % self.q,
            (l * i2) % self.q,
            (l * i3 - (l * (l - 1) // 2) * i1 * i2) % self.q,
        )

    def label(self, x: int) -> str:
        parts = []
        for name, v in zip(("y1", "y2", "w"), self.codes[x]):
            if v == 1:
                parts.append(name)
            elif v:
                parts.append(f"{name}^{v}")
        return " ".join(parts) or "e"

    def generators(self) -> List[int]:
        return [int(i) for i in self.index_of([[1, 0, 0], [0, 1, 0], [0, 0, 1]])]


class MetacyclicGroup(MixedRadixGroup):
    "Codes `(j, i)` for $b^j a^i$."

    def __init__(self, spec: Metacyclic):
        q = spec.params
        codes = np.array([(j, i) for j in range(q.s) for i in range(q.m)], np.int64)
        self.params = q
        self._rpow = np.array([pow(q.r, j, q.m) for j in range(q.s)], np.int64)
        super().__init__(spec, (q.s, q.m), codes, abelian=False)

    def _mul_codes(self, a: Codes, b: Codes) -> Codes:
        q = self.params
        j, i = a[:, 0], a[:, 1]
        l, k = b[:, 0], b[:, 1]
        wrap = (j + l) >= q.s
        return np.stack(
            [(j + l) % q.s, (i * self._rpow[l] + k + q.t * wrap) % q.m], axis=1
        )

    def _inv_codes(self, a: Codes) -> Codes:
        q = self.params
        j, i = a[:, 0], a[:, 1]
        jj = (-j) % q.s
        ii = -(i * self._rpow[jj] + q.t * (j > 0))
        return np.stack([jj, ii % q.m], axis=1)

    def label(self, x: int) -> str:
        j, i = self.codes[x]
        parts = []
        if j:
            parts.append("b" if j == 1 else f"b^{j}")
        if i:
            parts.append("a" if i == 1 else f"a^{i}")
        return " ".join(parts) or "e"

    def generators(self) -> List[int]:
        return [int(i) for i in self.index_of([[0, 1], [1, 0]])]


def cycles_to_perm(n: int, cycles: Sequence[Sequence[int]]) -> Tuple[int, ...]:
    "Image array (0-based) of a product of disjoint 1-based cycles."
    perm = list(range(n))
    for cyc in cycles:
        for a, b in zip(cyc, tuple(cyc[1:]) + (cyc[0],)):
            perm[a - 1] = b - 1
    return tuple(perm)


def perm_cycles(perm: Sequence[int]) -> List[Tuple[int, ...]]:
    "Non-trivial cycles (1-based), each starting at its smallest point, in increasing order."
    seen = [False] * len(perm)
    out = []
    for start in range(len(perm)):
        if seen[start]:
            continue
        cyc = []
        x = start
        while not seen[x]:
            seen[x] = True
            cyc.append(x + 1)
            x = int(perm[x])
        if len(cyc) > 1:
            out.append(tuple(cyc))
    return out


def perm_label(perm: Sequence[int]) -> str:
    cycles = perm_cycles(perm)
    if not cycles:
        return "e"
    return "".join("(" + ",".join(str(v) for v in c) + ")" for c in cycles)


def perm_parity(perm: Sequence[int]) -> int:
    "0 for even permutations, 1 for odd."
    return sum(len(c) - 1 for c in perm_cycles(perm)) % 2


class PermutationGroup(CodedGroup):
    """
    $S_n$ or $A_n$ with elements in lexicographic order of image arrays.
    `mul(x, y)` applies `x` first, then `y`.
    """

    def __init__(self, spec: Union[Symmetric, Alternating]):
        n = spec.n
        perms = np.array(list(itertools.permutations(range(n))), np.int64)
        self.n = n
        self.even_only = isinstance(spec, Alternating)
        if self.even_only:
            perms = perms[np.array([perm_parity(p) == 0 for p in perms])]
        self._fact = np.array([factorial(n - 1 - i) for i in range(n)], np.int64)
        super().__init__(spec, perms, factorial(n), abelian=False)

    def _key(self, codes: Codes) -> Elements:
        rank = np.zeros(codes.shape[0], np.int64)
        for i in range(self.n - 1):
            smaller = (codes[:, i + 1 :] < codes[:, i : i + 1]).sum(axis=1)
            rank += smaller * self._fact[i]
        return rank

    def _mul_codes(self, a: Codes, b: Codes) -> Codes:
        return np.take_along_axis(b, a, axis=1)

    def _inv_codes(self, a: Codes) -> Codes:
        return np.argsort(a, axis=1)

    def from_cycles(self, *cycles: Sequence[int]) -> int:
        "Index of a product of disjoint 1-based cycles, e.g. `from_cycles((1, 2, 3))`."
        return int(self.index_of([cycles_to_perm(self.n, cycles)])[0])

    def parity(self, xs: Elements) -> npt.NDArray[np.int64]:
        "Parity of each element (0 even)."
        return np.array([perm_parity(self.codes[x]) for x in np.asarray(xs)], np.int64)

    def support(self, x: int) -> int:
        "Bitmask of moved points (bit `i` for point `i + 1`)."
        p = self.codes[x]
        moved = np.flatnonzero(p != np.arange(self.n))
        return int(sum(1 << int(i) for i in moved))

    def label(self, x: int) -> str:
        return perm_label(self.codes[x])

    def generators(self) -> List[int]:
        if self.even_only:
            return [self.from_cycles((1, 2, i)) for i in range(3, self.n + 1)]
        return [self.from_cycles((1, 2)), self.from_cycles(tuple(range(1, self.n + 1)))]


class ProductGroup(GroupHandle):
    "Direct product; index is mixed radix over factor indices, first factor most significant."

    def __init__(self, spec: GroupSpec, factors: Sequence[GroupHandle]):
        self.spec = spec
        self.factors = list(factors)
        self.sizes = np.array([f.size for f in self.factors], np.int64)
        self.size = int(prod(int(s) for s in self.sizes))
        self.abelian = all(f.abelian for f in self.factors)
        strides = np.ones(len(self.factors), np.int64)
        for i in range(len(self.factors) - 2, -1, -1):
            strides[i] = strides[i + 1] * self.sizes[i + 1]
        self.strides = strides

    def coords(self, xs: Elements) -> List[Elements]:
        xs = np.asarray(xs, np.int64)
        return [(xs // s) % n for s, n in zip(self.strides, self.sizes)]

    def combine(self, coords: Sequence[Elements]) -> Elements:
        out = np.zeros_like(np.asarray(coords[0], np.int64))
        for c, s in zip(coords, self.strides):
            out = out + np.asarray(c, np.int64) * s
        return out

    def mul(self, xs: Elements, ys: Elements) -> Elements:
        return self.combine(
            [f.mul(a, b) for f, a, b in zip(self.factors, self.coords(xs), self.coords(ys))]
        )

    def inv(self, xs: Elements) -> Elements:
        return self.combine([f.inv(a) for f, a in zip(self.factors, self.coords(xs))])

    def element(self, x: int) -> Tuple[int, ...]:
        return tuple(int(c[0]) for c in self.coords(np.array([x])))

    def label(self, x: int) -> str:
        if x == 0:
            return "e"
        parts = [f.label(int(c[0])) for f, c in zip(self.factors, self.coords(np.array([x])))]
        return "(" + ",".join(parts) + ")"

    def generators(self) -> List[int]:
        out = []
        for i, f in enumerate(self.factors):
            for g in f.generators():
                coords = [np.zeros(1, np.int64) for _ in self.factors]
                coords[i] = np.array([g])
                out.append(int(self.combine(coords)[0]))
        return out


@lru_cache(maxsize=64)
def build_group(spec: GroupSpec) -> GroupHandle:
    """
    Construct the handle of a catalog group.

    Args:
        spec: group spec

    Returns:
        Handle with `size == spec.order`

    Raises:
        InvalidSpec: for specs outside the catalog
    """
    log.debug("building %s", format_spec(spec))
    if isinstance(spec, Cyclic):
        return AbelianGroup(spec, (spec.n,))
    if isinstance(spec, AbelianP):
        return AbelianGroup(spec, spec.moduli)
    if isinstance(spec, Abelian):
        return ProductGroup(spec, [build_group(q) for q in spec.parts])
    if isinstance(spec, Dihedral):
        return DihedralGroup(spec)
    if isinstance(spec, Quaternion):
        return QuaternionGroup(spec)
    if isinstance(spec, Heisenberg):
        return HeisenbergGroup(spec)
    if isinstance(spec, (Symmetric, Alternating)):
        return PermutationGroup(spec)
    if isinstance(spec, Metacyclic):
        return MetacyclicGroup(spec)
    if isinstance(spec, CoprimeProduct):
        return ProductGroup(spec, [build_group(f) for f in spec.factors])
    raise InvalidSpec(f"not a catalog spec: {spec!r}")


def pair_generates_cyclic(G: GroupHandle, x: int, y: int) -> bool:
    "True iff $\\langle x, y \\rangle$ is cyclic."
    if x == y:
        return True
    if not G.commutes(np.array([x]), np.array([y]))[0]:
        return False
    a, b = G.cyclic_subgroup(x), G.cyclic_subgroup(y)
    closure = np.unique(G.mul(np.repeat(a, b.shape[0]), np.tile(b, a.shape[0])))
    return int(G.orders()[closure].max()) == closure.shape[0]


def power_adjacent(G: GroupHandle, x: int, y: int) -> bool:
    "True iff one of `x`, `y` is a power of the other."
    return bool(np.isin(y, G.cyclic_subgroup(x)) or np.isin(x, G.cyclic_subgroup(y)))


# ## Multipliers and covers


def metacyclic_multiplier_order(p: MetacyclicParams) -> int:
    """
    Order of the Schur multiplier of a metacyclic group,
    $\\gcd(r - 1, m) \\cdot l / m$ with $l = \\gcd(1 + r + \\dots + r^{s-1}, t)$.

    Args:
        p: metacyclic parameters

    Returns:
        The multiplier order

    Raises:
        InvalidParams: if the parameters do not define a metacyclic group
    """
    p.validate()
    l = gcd(geometric_sum(p.r, p.s), p.t)
    num = gcd(p.r - 1, p.m) * l
    if num % p.m:
        raise InvalidParams(f"multiplier formula is not integral for {p}")
    return num // p.m


def _g(i: int) -> Word:
    return (i + 1,)


def _abelian_cover(moduli: Sequence[int], names: Sequence[str]) -> Presentation:
    k = len(moduli)
    pairs = [(j, l) for j in range(k) for l in range(j + 1, k)]
    a_index = {pair: k + n for n, pair in enumerate(pairs)}
    gen_names = list(names) + [f"a{j + 1}{l + 1}" for j, l in pairs]
    rels: List[Word] = [word_power(_g(i), moduli[i]) for i in range(k)]
    for (j, l), a in a_index.items():
        rels.append(commutator_word(_g(j), _g(l)) + word_inverse(_g(a)))
        rels.append(word_power(_g(a), gcd(moduli[j], moduli[l])))
        for i in range(k):
            rels.append(commutator_word(_g(a), _g(i)))
    avals = list(a_index.values())
    for n, a in enumerate(avals):
        for b in avals[n + 1 :]:
            rels.append(commutator_word(_g(a), _g(b)))
    return Presentation(tuple(gen_names), tuple(rels), tuple(avals))


def invariant_factors(spec: Union[AbelianP, Abelian, Cyclic]) -> Tuple[int, ...]:
    "Invariant factors $n_1, n_2, \\dots$ with $n_{i+1} \\mid n_i$."
    if isinstance(spec, Cyclic):
        return (spec.n,)
    parts = [spec] if isinstance(spec, AbelianP) else list(spec.parts)
    k = max(len(q.ranks) for q in parts)
    return tuple(
        prod(q.p ** q.ranks[i] for q in parts if i < len(q.ranks)) for i in range(k)
    )


def schur_cover_presentation(spec: GroupSpec) -> Union[Presentation, SelfCover]:
    """
    Presentation of a Schur cover with the kernel generators marked.

    Args:
        spec: catalog group

    Returns:
        The cover presentation, or `SelfCover` when the multiplier is trivial

    Raises:
        Unsupported: for groups the catalog has no cover presentation for
    """
    if isinstance(spec, Cyclic) or isinstance(spec, Quaternion):
        return SelfCover(spec)
    if isinstance(spec, (AbelianP, Abelian)):
        moduli = invariant_factors(spec)
        if len(moduli) < 2:
            return SelfCover(spec)
        return _abelian_cover(moduli, [f"x{i + 1}" for i in range(len(moduli))])
    if isinstance(spec, Dihedral):
        n = spec.n
        if n % 2:
            return SelfCover(spec)
        a, b, c = _g(0), _g(1), _g(2)
        rels = (
            word_power(a, 2 * n),
            word_power(b, 2),
            word_power(a + b, 2),
            word_inverse(c) + word_power(a, n),
        )
        return Presentation(("a", "b", "c"), rels, (2,))
    if isinstance(spec, Heisenberg):
        q = spec.p**spec.k
        y1, y2, w, w1, w2 = (_g(i) for i in range(5))
        rels = [word_power(x, q) for x in (y1, y2, w, w1, w2)]
        rels += [
            commutator_word(y1, y2) + word_inverse(w),
            commutator_word(y1, w) + word_inverse(w1),
            commutator_word(y2, w) + word_inverse(w2),
        ]
        rels += [commutator_word(z, x) for z in (w1, w2) for x in (y1, y2, w)]
        rels.append(commutator_word(w1, w2))
        return Presentation(("y1", "y2", "w", "w1", "w2"), tuple(rels), (3, 4))
    if isinstance(spec, Symmetric):
        n = spec.n
        if n < 4:
            return SelfCover(spec)
        z = _g(n - 1)
        zi = word_inverse(z)
        rels = [word_power(_g(i), 2) + zi for i in range(n - 1)]
        rels += [word_power(_g(j) + _g(j + 1), 3) + zi for j in range(n - 2)]
        rels += [
            word_power(_g(k) + _g(l), 2) + zi
            for k in range(n - 1)
            for l in range(k + 2, n - 1)
        ]
        rels.append(word_power(z, 2))
        rels += [commutator_word(z, _g(i)) for i in range(n - 1)]
        names = tuple(f"g{i + 1}" for i in range(n - 1)) + ("z",)
        return Presentation(names, tuple(rels), (n - 1,))
    if isinstance(spec, Alternating):
        n = spec.n
        if n == 3:
            return SelfCover(spec)
        if n not in (6, 7):
            raise Unsupported(f"{format_spec(spec)}: use the spin oracle")
        m = n - 2
        h = [_g(i) for i in range(m)]
        z = _g(m)
        z3 = word_power(z, -3)
        rels = [word_power(h[0], 3) + z3]
        rels += [word_power(h[i], 2) + z3 for i in range(1, m)]
        rels += [word_power(h[i - 1] + h[i], 3) + z3 for i in range(1, m)]
        rels += [
            word_power(h[j] + h[k], 2) + z3
            for k in range(m)
            for j in range(k - 1)
            if (j, k) != (0, 3)
        ]
        rels.append(word_power(h[0] + h[3], 2) + word_inverse(z))
        rels.append(word_power(z, 6))
        rels += [commutator_word(z, h[t]) for t in range(m)]
        names = tuple(f"h{i + 1}" for i in range(m)) + ("z",)
        return Presentation(names, tuple(rels), (m,))
    if isinstance(spec, Metacyclic):
        if metacyclic_multiplier_order(spec.params) == 1:
            return SelfCover(spec)
        raise Unsupported(f"{format_spec(spec)} has a non-trivial multiplier")
    raise Unsupported(f"no cover presentation for {format_spec(spec)}")


def cover_images(spec: GroupSpec, G: GroupHandle) -> List[int]:
    """
    Image in `G` of every generator of `schur_cover_presentation(spec)`.

    Args:
        spec: catalog group with a cover presentation
        G: its handle

    Returns:
        Element indices, kernel generators mapping to the identity
    """
    pres = schur_cover_presentation(spec)
    if isinstance(pres, SelfCover):
        raise Unsupported(f"{format_spec(spec)} is its own cover")
    kernel = [0] * len(pres.kernel_generators)
    if isinstance(spec, (AbelianP, Abelian)):
        moduli = invariant_factors(spec)
        parts = [spec] if isinstance(spec, AbelianP) else list(spec.parts)
        out = []
        for i in range(len(moduli)):
            codes = [
                np.eye(len(q.ranks), dtype=np.int64)[i]
                if i < len(q.ranks)
                else np.zeros(len(q.ranks), np.int64)
                for q in parts
            ]
            if isinstance(G, ProductGroup):
                factor_idx = [
                    f.index_of([c]) for f, c in zip(G.factors, codes)  # type: ignore
                ]
                out.append(int(G.combine(factor_idx)[0]))
            else:
                out.append(int(G.index_of([codes[0]])[0]))  # type: ignore
        return out + kernel
    if isinstance(spec, Dihedral) and isinstance(G, DihedralGroup):
        return [G.rotation(1), G.reflection(0)] + kernel
    if isinstance(spec, Heisenberg) and isinstance(G, HeisenbergGroup):
        return G.generators() + kernel
    if isinstance(spec, Symmetric) and isinstance(G, PermutationGroup):
        return [G.from_cycles((i, i + 1)) for i in range(1, spec.n)] + kernel
    if isinstance(spec, Alternating) and isinstance(G, PermutationGroup):
        hs = [G.from_cycles((1, 2, 3))]
        hs += [G.from_cycles((1, 2), (i + 1, i + 2)) for i in range(2, spec.n - 1)]
        return hs + kernel
    raise Unsupported(f"no generator images for {format_spec(spec)}")


def multiplier_order(spec: GroupSpec) -> int:
    "Order of the Schur multiplier of a catalog group with a known cover."
    if isinstance(spec, CoprimeProduct):
        return prod(multiplier_order(f) for f in spec.factors)
    if isinstance(spec, Alternating) and spec.n >= 4 and spec.n not in (6, 7):
        return 2
    pres = schur_cover_presentation(spec)
    if isinstance(pres, SelfCover):
        return 1
    if isinstance(spec, (AbelianP, Abelian)):
        moduli = invariant_factors(spec)
        return prod(gcd(moduli[j], moduli[l]) for j in range(len(moduli)) for l in range(j + 1, len(moduli)))
    if isinstance(spec, Dihedral):
        return metacyclic_multiplier_order(MetacyclicParams.dihedral(spec.n))
    if isinstance(spec, Heisenberg):
        return (spec.p**spec.k) ** 2
    if isinstance(spec, Symmetric):
        return 2
    if isinstance(spec, Alternating):
        return 6
    raise Unsupported(f"unknown multiplier for {format_spec(spec)}")


def coprime_split(spec: GroupSpec) -> List[Tuple[GroupSpec, Elements]]:
    """
    Split a group into pairwise coprime factors.

    Args:
        spec: any catalog group

    Returns:
        `(factor spec, coordinate map)` pairs; the coordinate map sends each
        element of `build_group(spec)` to its factor's element index

    Raises:
        NotCoprime: if the factors are not pairwise coprime
    """
    G = build_group(spec)
    if isinstance(spec, (Abelian, CoprimeProduct)):
        factors = spec.parts if isinstance(spec, Abelian) else spec.factors
        if not pairwise_coprime([f.order for f in factors]):
            raise NotCoprime(f"{format_spec(spec)} factors are not coprime")
        assert isinstance(G, ProductGroup)
        return list(zip(factors, G.coords(G.all())))
    if isinstance(spec, Cyclic) and len(factorize(spec.n)) > 1:
        return [
            (Cyclic(p**e), G.all() % (p**e)) for p, e in factorize(spec.n).items()
        ]
    return [(spec, G.all())]


def is_p_group(spec: GroupSpec) -> Optional[int]:
    "The prime `p` if the group has order a power of `p`."
    if not is_prime_power(spec.order):
        return None
    return next(iter(factorize(spec.order)))


def sylow_factors(spec: GroupSpec) -> Dict[int, List[GroupSpec]]:
    """
    Group the coprime factors of a nilpotent catalog group by prime.

    Args:
        spec: abelian, cyclic or coprime product of p-groups

    Returns:
        Mapping prime -> factor specs whose orders are powers of it

    Raises:
        Unsupported: if a factor is not a p-group
    """
    out: Dict[int, List[GroupSpec]] = {}
    pending = [spec]
    while pending:
        s = pending.pop(0)
        if isinstance(s, CoprimeProduct):
            pending.extend(s.factors)
            continue
        for f, _ in coprime_split(s):
            if f.order == 1:
                continue
            p = is_p_group(f)
            if p is None:
                raise Unsupported(f"{format_spec(f)} is not a p-group")
            out.setdefault(p, []).append(f)
    return dict(sorted(out.items()))


def extraspecial_exponent_p2_multiplier(p: int) -> int:
    "Multiplier order of the order-$p^3$ group of exponent $p^2$."
    return metacyclic_multiplier_order(MetacyclicParams.extraspecial(p))
