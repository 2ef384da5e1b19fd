from typing import List

import pytest
from hypothesis import given
from hypothesis.strategies import integers, lists

from deepgraph.operators import (
    bits,
    factorial,
    factorize,
    gcd,
    geometric_sum,
    is_prime,
    is_prime_power,
    lcm,
    lcm_list,
    pairwise_coprime,
    popcount,
    prod,
    smallest_primes,
)

positive = integers(min_value=1, max_value=10_000)


@pytest.mark.operators
def test_primes() -> None:
    assert [n for n in range(20) if is_prime(n)] == [2, 3, 5, 7, 11, 13, 17, 19]
    assert smallest_primes(4) == [2, 3, 5, 7]
    assert smallest_primes(3, avoid=[3]) == [2, 5, 7]
    assert is_prime_power(27) and is_prime_power(2) and not is_prime_power(12)
    assert not is_prime_power(1)


@pytest.mark.operators
@given(positive)
def test_factorize(n: int) -> None:
    f = factorize(n)
    assert all(is_prime(p) for p in f)
    assert prod(p**e for p, e in f.items()) == n


@pytest.mark.operators
@given(positive, positive)
def test_gcd_lcm(a: int, b: int) -> None:
    assert gcd(a, b) * lcm(a, b) == a * b
    assert a % gcd(a, b) == 0 and lcm(a, b) % b == 0


@pytest.mark.operators
@given(lists(positive, min_size=1, max_size=5))
def test_list_reductions(ls: List[int]) -> None:
    m = lcm_list(ls)
    assert all(m % x == 0 for x in ls)
    assert m == prod(ls) or not pairwise_coprime(ls)


@pytest.mark.operators
def test_small_values() -> None:
    assert factorial(0) == 1 and factorial(6) == 720
    assert geometric_sum(4, 3) == 1 + 4 + 16
    assert popcount(0b101101) == 4
    assert bits(0b10110) == [1, 2, 4]
    assert pairwise_coprime([4, 9, 25]) and not pairwise_coprime([4, 6])
    assert prod([]) == 1 and lcm_list([]) == 1
