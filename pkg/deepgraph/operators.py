"""
Collection of the small number-theoretic operators used throughout the code base.
"""

import math
from typing import Callable, Dict, Iterable, List, Sequence, TypeVar

T = TypeVar("T")


class CapExceeded(RuntimeError):
    "Exception raised when an exact solver is asked to exceed its configured cap."
    pass


# ## Prelude of elementary integer functions.


def mul(x: int, y: int) -> int:
    "$f(x, y) = x * y$"
    return x * y


def add(x: int, y: int) -> int:
    "$f(x, y) = x + y$"
    return x + y


def gcd(x: int, y: int) -> int:
    "$f(x, y) = \\gcd(x, y)$"
    return math.gcd(x, y)


def lcm(x: int, y: int) -> int:
    "$f(x, y) = \\operatorname{lcm}(x, y)$"
    if x == 0 or y == 0:
        return 0
    return abs(x * y) // math.gcd(x, y)


def coprime(x: int, y: int) -> bool:
    "$f(x, y) =$ True if gcd(x, y) is 1"
    return math.gcd(x, y) == 1


def is_prime(n: int) -> bool:
    """
    Trial-division primality test.

    Args:
        n: integer to test

    Returns:
        True if `n` is a prime number
    """
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def factorize(n: int) -> Dict[int, int]:
    """
    Prime factorization of a positive integer.

    Args:
        n: positive integer

    Returns:
        Mapping prime -> exponent, in increasing prime order
    """
    if n < 1:
        raise ValueError(f"cannot factor {n}")
    out: Dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime_power(n: int) -> bool:
    "True if `n` is $p^k$ for a prime p and k >= 1"
    return n > 1 and len(factorize(n)) == 1


def smallest_primes(count: int, avoid: Iterable[int] = ()) -> List[int]:
    """
    The `count` smallest primes not listed in `avoid`.

    Args:
        count: how many primes to return
        avoid: primes that must be skipped

    Returns:
        Increasing list of primes
    """
    skip = set(avoid)
    out: List[int] = []
    n = 2
    while len(out) < count:
        if is_prime(n) and n not in skip:
            out.append(n)
        n += 1
    return out


def factorial(n: int) -> int:
    "$f(n) = n!$"
    return math.factorial(n)


def geometric_sum(r: int, s: int) -> int:
    "$f(r, s) = 1 + r + \\dots + r^{s-1}$"
    return reduce(add, start=0)(r**i for i in range(s))


def popcount(x: int) -> int:
    "Number of set bits of a non-negative integer."
    return bin(x).count("1")


def bits(x: int) -> List[int]:
    "Positions of the set bits of `x`, lowest first."
    out = []
    while x:
        low = x & -x
        out.append(low.bit_length() - 1)
        x ^= low
    return out


# ## Folds over integer lists.


def reduce(fn: Callable[[T, T], T], start: T) -> Callable[[Iterable[T]], T]:
    r"""
    Higher-order reduce.

    Args:
        fn: combine two values
        start: start value $x_0$

    Returns:
        Function that takes a list `ls` of elements
        $x_1 \ldots x_n$ and computes $fn(x_n, \ldots fn(x_1, x_0))$
    """

    def apply(ls: Iterable[T]) -> T:
        res = start
        for e in ls:
            res = fn(e, res)
        return res

    return apply


def prod(ls: Iterable[int]) -> int:
    "Product of a list using `reduce` and `mul`."
    return reduce(mul, start=1)(ls)


def lcm_list(ls: Iterable[int]) -> int:
    "lcm of a list using `reduce`."
    return reduce(lcm, start=1)(ls)


def pairwise_coprime(ls: Sequence[int]) -> bool:
    "True if every two entries of `ls` are coprime."
    return all(coprime(a, b) for i, a in enumerate(ls) for b in ls[i + 1 :])
