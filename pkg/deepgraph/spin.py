"""
Lifts of permutations into the Clifford algebra with $e_i^2 = 1$ and
$e_i e_j = -e_j e_i$. A transposition $(a\\,b)$ lifts to $(e_a - e_b)/\\sqrt{2}$;
products of these realize a double cover of $S_n$, and two commuting
permutations are adjacent in the deep commuting graph exactly when their
lifts commute.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Dict, List, Sequence, Tuple

import numpy as np
import numpy.typing as npt
from numba import njit, prange
from typing_extensions import TypeAlias

from .catalog import PermutationGroup, perm_cycles
from .operators import CapExceeded

log = logging.getLogger(__name__)

Masks: TypeAlias = npt.NDArray[np.int64]
Coefs: TypeAlias = npt.NDArray[np.int64]

# TIP: Use `NUMBA_DISABLE_JIT=1 pytest tests/ -m oracles` to debug these kernels.


def popcount(x: int) -> int:
    c = 0
    while x:
        x &= x - 1
        c += 1
    return c


popcount_ = njit(inline="always")(popcount)


def blade_sign(a: int, b: int) -> int:
    "Sign of $e_A e_B$ against $e_{A \\triangle B}$ for bitmasks `a`, `b`."
    s = 0
    a >>= 1
    while a:
        s += popcount_(a & b)
        a >>= 1
    return 1 - 2 * (s & 1)


blade_sign_ = njit(inline="always")(blade_sign)


@njit
def _accumulate(ma: Masks, ca: Coefs, mb: Masks, cb: Coefs, out: Coefs) -> None:
    out[:] = 0
    for i in range(ma.shape[0]):
        for j in range(mb.shape[0]):
            out[ma[i] ^ mb[j]] += blade_sign_(ma[i], mb[j]) * ca[i] * cb[j]


@njit
def _product(
    ma: Masks, ca: Coefs, mb: Masks, cb: Coefs, size: int
) -> Tuple[Masks, Coefs]:
    buf = np.zeros(size, np.int64)
    _accumulate(ma, ca, mb, cb, buf)
    nz = np.nonzero(buf)[0].astype(np.int64)
    return nz, buf[nz]


@njit
def _commutes(ma: Masks, ca: Coefs, mb: Masks, cb: Coefs, size: int) -> bool:
    ab = np.zeros(size, np.int64)
    ba = np.zeros(size, np.int64)
    _accumulate(ma, ca, mb, cb, ab)
    _accumulate(mb, cb, ma, ca, ba)
    for i in range(size):
        if ab[i] != ba[i]:
            return False
    return True


def _commute_batch(
    ptr: npt.NDArray[np.int64],
    masks: Masks,
    coefs: Coefs,
    x: int,
    size: int,
    out: npt.NDArray[np.bool_],
) -> None:
    "`out[k]` = lift of `x` commutes with lift `k + 1` of the CSR batch."
    lo, hi = ptr[x], ptr[x + 1]
    for k in prange(out.shape[0]):
        a, b = ptr[k + 1], ptr[k + 2]
        out[k] = _commutes(masks[lo:hi], coefs[lo:hi], masks[a:b], coefs[a:b], size)


commute_batch = njit(parallel=True)(_commute_batch)


@dataclass(frozen=True, eq=False)
class SpinLift:
    """
    Algebra element $(\\sqrt{2})^{-\\text{scale}} \\sum_A c_A e_A$ with
    monomials `A` stored as bitmasks (bit `i - 1` for $e_i$).
    """

    n: int
    terms: Dict[int, int]
    scale: int

    @property
    def masks(self) -> Masks:
        return np.array(sorted(self.terms), np.int64)

    @property
    def coefs(self) -> Coefs:
        return np.array([self.terms[m] for m in sorted(self.terms)], np.int64)

    def __mul__(self, other: SpinLift) -> SpinLift:
        n = max(self.n, other.n)
        masks, coefs = _product(self.masks, self.coefs, other.masks, other.coefs, 1 << n)
        return SpinLift(n, dict(zip(masks.tolist(), coefs.tolist())), self.scale + other.scale)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SpinLift):
            return NotImplemented
        a, b = self.normalized(), other.normalized()
        return a.scale == b.scale and a.terms == b.terms

    def __neg__(self) -> SpinLift:
        return SpinLift(self.n, {m: -c for m, c in self.terms.items()}, self.scale)

    def normalized(self) -> SpinLift:
        "Pull common factors of 2 out of the coefficients into the scale."
        terms, scale = dict(self.terms), self.scale
        while scale >= 2 and terms and all(c % 2 == 0 for c in terms.values()):
            terms = {m: c // 2 for m, c in terms.items()}
            scale -= 2
        return SpinLift(self.n, terms, scale)

    def is_scalar(self) -> bool:
        return set(self.terms) <= {0}

    def parity(self) -> int:
        "Common parity of the monomial degrees."
        degrees = {popcount(m) % 2 for m in self.terms}
        if len(degrees) != 1:
            raise ValueError("lift has mixed parity")
        return degrees.pop()


def transposition_factors(perm: Sequence[int]) -> List[Tuple[int, int]]:
    """
    Transpositions (1-based, `a < b`) whose left-to-right product is `perm`:
    cycles in increasing order of their smallest point, each cycle
    $(a_1 \\dots a_r)$ written as $(a_1 a_2)(a_2 a_3) \\dots (a_{r-1} a_r)$.
    """
    out = []
    for cyc in perm_cycles(perm):
        for a, b in zip(cyc, cyc[1:]):
            out.append((min(a, b), max(a, b)))
    return out


def _check_cap(n: int, cap: int) -> None:
    if n > cap:
        raise CapExceeded(f"spin lifts limited to n <= {cap}, got {n}")


def _vector(a: int, b: int) -> Tuple[Masks, Coefs]:
    return (
        np.array([1 << (a - 1), 1 << (b - 1)], np.int64),
        np.array([1, -1], np.int64),
    )


def _lift_arrays(perm: Sequence[int]) -> Tuple[Masks, Coefs, int]:
    size = 1 << len(perm)
    masks = np.zeros(1, np.int64)
    coefs = np.ones(1, np.int64)
    factors = transposition_factors(perm)
    for a, b in factors:
        vm, vc = _vector(a, b)
        masks, coefs = _product(masks, coefs, vm, vc, size)
    return masks, coefs, len(factors)


def spin_lift(perm: Sequence[int], cap: int = 12) -> SpinLift:
    """
    Lift of a permutation.

    Args:
        perm: image array (0-based) of a permutation of `n` points
        cap: largest supported `n`

    Returns:
        Product of the transposition vectors, scale = number of factors

    Raises:
        CapExceeded: if `n > cap`
    """
    _check_cap(len(perm), cap)
    masks, coefs, scale = _lift_arrays(perm)
    return SpinLift(len(perm), dict(zip(masks.tolist(), coefs.tolist())), scale)


def spin_commute(sigma: Sequence[int], tau: Sequence[int], cap: int = 12) -> bool:
    """
    Whether the lifts of two permutations commute.

    Args:
        sigma: image array
        tau: image array of the same degree
        cap: largest supported degree

    Returns:
        True if the lifts commute as algebra elements

    Raises:
        CapExceeded: if the degree exceeds `cap`
    """
    n = len(sigma)
    _check_cap(n, cap)
    ma, ca, _ = _lift_arrays(sigma)
    mb, cb, _ = _lift_arrays(tau)
    return bool(_commutes(ma, ca, mb, cb, 1 << n))


class SpinTable:
    "Lifts of the elements of a permutation group, computed on demand and kept."

    def __init__(self, G: PermutationGroup, cap: int = 12):
        _check_cap(G.n, cap)
        self.G = G
        self.size = 1 << G.n
        self._lifts: Dict[int, Tuple[Masks, Coefs]] = {}

    def lift(self, x: int) -> Tuple[Masks, Coefs]:
        if x not in self._lifts:
            masks, coefs, _ = _lift_arrays(self.G.codes[x])
            self._lifts[x] = (masks, coefs)
        return self._lifts[x]

    def __len__(self) -> int:
        return len(self._lifts)

    def commute(self, x: int, y: int) -> bool:
        ma, ca = self.lift(x)
        mb, cb = self.lift(y)
        return bool(_commutes(ma, ca, mb, cb, self.size))

    def commute_many(self, x: int, ys: npt.NDArray[np.int64]) -> npt.NDArray[np.bool_]:
        """
        Lift commutation of `x` against every element of `ys`.

        Args:
            x: element index
            ys: element indices

        Returns:
            Boolean array aligned with `ys`
        """
        parts = [self.lift(x)] + [self.lift(int(y)) for y in ys]
        lengths = np.array([0] + [m.shape[0] for m, _ in parts], np.int64)
        ptr = np.cumsum(lengths)
        masks = np.concatenate([m for m, _ in parts])
        coefs = np.concatenate([c for _, c in parts])
        out = np.zeros(len(ys), np.bool_)
        commute_batch(ptr, masks, coefs, 0, self.size, out)
        return out
