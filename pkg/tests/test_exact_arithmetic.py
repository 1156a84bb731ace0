from fractions import Fraction

import pytest

from dynres import (
    INFINITY,
    FactoredIdeal,
    InvalidArgumentError,
    UnfactoredResidueError,
    factor_integer,
    ideal_norm,
    is_prime,
    primes_up_to,
    rational_from_string,
    rational_to_string,
    valuation,
)
from dynres.exact_arithmetic import is_perfect_square


def test_valuation_examples():
    assert valuation(48, 2) == 4
    assert valuation(0, 7) is INFINITY
    assert valuation(Fraction(3, 8), 2) == -3


def test_valuation_rejects_non_prime():
    with pytest.raises(InvalidArgumentError):
        valuation(10, 6)
    with pytest.raises(InvalidArgumentError):
        valuation(10, 1)


def test_valuation_multiplicative(rng):
    for _ in range(200):
        p = rng.choice([2, 3, 5, 7, 11])
        x = Fraction(rng.randint(-50, 50), rng.randint(1, 50))
        y = Fraction(rng.randint(-50, 50), rng.randint(1, 50))
        if x == 0 or y == 0:
            continue
        assert valuation(x * y, p) == valuation(x, p) + valuation(y, p)


def test_ideal_norm_examples():
    assert ideal_norm(FactoredIdeal.unit()) == 1
    assert ideal_norm(FactoredIdeal.from_map({2: 3})) == 8
    assert ideal_norm(FactoredIdeal.from_map({2: 1, 3: 2})) == 18


def test_ideal_norm_multiplicative(rng):
    for _ in range(50):
        a = FactoredIdeal.from_map({p: rng.randint(0, 3) for p in (2, 3, 5, 7)})
        b = FactoredIdeal.from_map({p: rng.randint(0, 3) for p in (3, 5, 11)})
        assert ideal_norm(a.mul(b)) == ideal_norm(a) * ideal_norm(b)


def test_factored_ideal_validation():
    with pytest.raises(InvalidArgumentError):
        FactoredIdeal(((4, 1),))
    with pytest.raises(InvalidArgumentError):
        FactoredIdeal(((2, 0),))
    with pytest.raises(InvalidArgumentError):
        FactoredIdeal(((3, 1), (2, 1)))  # must be ascending


def test_factored_ideal_json_round_trip():
    ideal = FactoredIdeal.from_map({2: 3, 11: 1})
    assert ideal.to_json() == {"2": 3, "11": 1}
    assert FactoredIdeal.from_json(ideal.to_json()) == ideal


def test_primes_up_to_examples():
    assert primes_up_to(8) == [2, 3, 5, 7]
    assert primes_up_to(1) == []
    assert primes_up_to(10) == [2, 3, 5, 7]
    assert primes_up_to(Fraction(19, 2)) == [2, 3, 5, 7]


def test_primes_up_to_against_trial_division():
    def trial_prime(n):
        if n < 2:
            return False
        f = 2
        while f * f <= n:
            if n % f == 0:
                return False
            f += 1
        return True

    expected = [n for n in range(2, 10**4 + 1) if trial_prime(n)]
    assert primes_up_to(10**4) == expected


def test_factor_integer_round_trip(rng):
    for _ in range(100):
        n = rng.randint(1, 10**9)
        factors = factor_integer(n)
        prod = 1
        for p, e in factors.items():
            assert is_prime(p)
            assert e >= 1
            prod *= p**e
        assert prod == n


def test_factor_integer_large_prime_cofactor():
    p = 1000003
    factors = factor_integer(4 * p)
    assert factors == {2: 2, p: 1}


def test_factor_integer_loud_failure():
    # two primes beyond the trial bound and rho disabled: must refuse, not lie
    n = (10**9 + 7) * (10**9 + 9)
    with pytest.raises(UnfactoredResidueError) as info:
        factor_integer(n, rho_rounds=0)
    assert info.value.cofactor == n


def test_is_perfect_square():
    squares = {k * k for k in range(100)}
    for n in range(-5, 5000):
        assert is_perfect_square(n) == (n in squares)


def test_rational_strings():
    assert rational_to_string(Fraction(3, 8)) == "3/8"
    assert rational_to_string(Fraction(-4, 2)) == "-2"
    assert rational_from_string("3/8") == Fraction(3, 8)
    assert rational_from_string("-2") == -2
    with pytest.raises(InvalidArgumentError):
        rational_from_string("x+1")
