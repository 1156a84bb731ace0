from fractions import Fraction

import pytest

from conftest import binary, bq, random_morphism, twist, z_squared
from dynres import (
    FactoredIdeal,
    InvalidArgumentError,
    LinearMap,
    LocalExponent,
    NotAMorphismError,
    SearchBudget,
    conjugate,
    default_budget,
    has_good_reduction,
    local_exponent,
    macaulay_resultant,
    minimize_exponent,
    normalize_primitive,
    reduction_report,
    s_b_primes,
    valuation,
)
from dynres.reduction_theory import ZERO_BUDGET, conjugated_exponent, exponent_step, search_moves


def test_local_exponent_examples():
    assert local_exponent(twist(2), 2) == 1
    for p in (2, 3, 5, 7, 11):
        assert local_exponent(z_squared(), p) == 0
    scaled = bq(2, 0, 4, 0, 6, 0)
    assert valuation(macaulay_resultant(scaled).value, 2) == 5
    assert local_exponent(scaled, 2) == 1
    assert local_exponent(bq(1, 0, 2, 0, 3, 0), 2) == 1


def test_local_exponent_rejects_degenerate():
    with pytest.raises(NotAMorphismError):
        local_exponent(bq(0, 1, 0, 0, 0, 1), 2)


def test_local_exponent_model_independent(rng):
    for _ in range(60):
        m = random_morphism(rng, 1, rng.choice([2, 3]))
        lam = Fraction(rng.choice([2, -2, 3, 5, 7]), rng.choice([1, 2, 3]))
        p = rng.choice([2, 3, 5])
        assert local_exponent(m.scale(lam), p) == local_exponent(m, p)


def test_local_exponent_unimodular_invariance(rng):
    checked = 0
    while checked < 40:
        m = random_morphism(rng, 1, rng.choice([2, 3]))
        rows = [[rng.randint(-3, 3) for _ in range(2)] for _ in range(2)]
        det = rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0]
        if det not in (1, -1):
            continue
        p = rng.choice([2, 3, 5])
        f = LinearMap.from_rows(rows)
        assert local_exponent(conjugate(m, f), p) == local_exponent(m, p)
        checked += 1


def test_local_exponent_support(rng):
    for _ in range(20):
        m = normalize_primitive(random_morphism(rng, 1, 2))
        res = abs(int(macaulay_resultant(m).value))
        for p in (2, 3, 5, 7, 11, 13):
            if res % p:
                assert local_exponent(m, p) == 0


def test_conjugated_exponent_matches_direct_route(rng):
    # the covariance identity used by the search, against the from-scratch path
    checked = 0
    while checked < 40:
        m = normalize_primitive(random_morphism(rng, 1, rng.choice([2, 3]), bound=6))
        p = rng.choice([2, 3, 5])
        rows = [[rng.randint(-4, 4) for _ in range(2)] for _ in range(2)]
        if rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0] == 0:
            continue
        v_res = valuation(macaulay_resultant(m).value, p)
        fast = conjugated_exponent(m, p, v_res, tuple(tuple(r) for r in rows))
        slow = local_exponent(conjugate(m, LinearMap.from_rows(rows)), p)
        assert fast == slow
        checked += 1


def test_conjugated_exponent_matches_direct_route_n2(rng):
    checked = 0
    while checked < 6:
        m = normalize_primitive(random_morphism(rng, 2, 2, bound=2))
        p = rng.choice([2, 3])
        rows = [[rng.randint(-2, 2) for _ in range(3)] for _ in range(3)]
        try:
            f = LinearMap.from_rows(rows)
        except InvalidArgumentError:
            continue
        v_res = valuation(macaulay_resultant(m).value, p)
        fast = conjugated_exponent(m, p, v_res, tuple(tuple(r) for r in rows))
        slow = local_exponent(conjugate(m, f), p)
        assert fast == slow
        checked += 1


def test_exponent_step_values():
    assert exponent_step(1, 2) == 2
    assert exponent_step(1, 3) == 6
    assert exponent_step(2, 2) == 4


def test_minimize_examples():
    budget = default_budget(2)
    four = binary(2, [4, 0, 0], [0, 0, 1])
    entry = minimize_exponent(four, 2, budget)
    assert entry == LocalExponent(p=2, e_model=4, eps_estimate=0, certified=True)
    entry = minimize_exponent(twist(2), 2, budget)
    assert entry == LocalExponent(p=2, e_model=1, eps_estimate=1, certified=False)
    entry = minimize_exponent(z_squared(), 5, budget)
    assert entry == LocalExponent(p=5, e_model=0, eps_estimate=0, certified=True)


def test_minimize_zero_budget():
    four = binary(2, [4, 0, 0], [0, 0, 1])
    entry = minimize_exponent(four, 2, ZERO_BUDGET)
    assert entry.eps_estimate == 4 and not entry.certified
    entry = minimize_exponent(z_squared(), 2, ZERO_BUDGET)
    assert entry.eps_estimate == 0 and entry.certified


def test_minimize_monotone_in_budget(rng):
    budgets = [ZERO_BUDGET, SearchBudget(1, 1, 0), SearchBudget(2, 1, 0), default_budget(2)]
    for _ in range(15):
        m = random_morphism(rng, 1, 2, bound=4)
        p = rng.choice([2, 3])
        estimates = [minimize_exponent(m, p, b).eps_estimate for b in budgets]
        assert estimates == sorted(estimates, reverse=True)


def test_search_moves_monotone_sets():
    small = {m for m in search_moves(1, 2, SearchBudget(1, 1, 0))}
    big = {m for m in search_moves(1, 2, SearchBudget(2, 2, 0))}
    assert small <= big
    assert not list(search_moves(1, 2, ZERO_BUDGET))


def test_reduction_report_examples():
    budget = default_budget(2)
    rep = reduction_report(z_squared(), budget)
    assert rep.minimal_resultant == FactoredIdeal.unit()
    assert rep.norm == 1 and rep.fully_certified

    rep = reduction_report(binary(2, [4, 0, 0], [0, 0, 1]), budget)
    assert rep.minimal_resultant == FactoredIdeal.unit()
    assert rep.norm == 1 and rep.fully_certified

    # z + 8/z is conjugate to z + 2/z by z -> 2z, so the searched minimum at 2 is 1
    rep = reduction_report(twist(8), budget)
    assert rep.res == 8
    assert rep.minimal_resultant == FactoredIdeal.from_map({2: 1})
    assert rep.norm == 2
    assert rep.bad_primes() == (2,)
    assert not rep.fully_certified
    assert rep.certified_norm_lower_bound() == 1


def test_reduction_report_local_entries():
    rep = reduction_report(bq(1, 0, 6, 0, 1, 0), default_budget(2))  # Res = 6
    assert [e.p for e in rep.local] == [2, 3]
    assert all(e.e_model == 1 and e.eps_estimate == 1 and not e.certified for e in rep.local)
    assert rep.norm == 6


def test_has_good_reduction():
    budget = default_budget(2)
    assert has_good_reduction(z_squared(), 3, budget) == "good_certified"
    assert has_good_reduction(twist(2), 2, budget) == "bad_upper_bound"
    assert has_good_reduction(binary(2, [4, 0, 0], [0, 0, 1]), 2, budget) == "good_certified"


def test_s_b_primes():
    assert s_b_primes(8) == [2, 3, 5, 7]
    assert s_b_primes(1) == []
    assert s_b_primes(30) == [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    with pytest.raises(InvalidArgumentError):
        s_b_primes(Fraction(1, 2))


def test_local_exponent_type_invariants():
    with pytest.raises(InvalidArgumentError):
        LocalExponent(2, 1, 2, False)  # estimate above the model exponent
    with pytest.raises(InvalidArgumentError):
        LocalExponent(2, 3, 1, True)  # only zero certifies


def test_minimize_certifies_only_zero(rng):
    for _ in range(20):
        m = random_morphism(rng, 1, 2, bound=3)
        entry = minimize_exponent(m, 2, default_budget(2))
        assert entry.certified == (entry.eps_estimate == 0)
        assert 0 <= entry.eps_estimate <= entry.e_model
