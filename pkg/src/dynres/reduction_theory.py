"""Per-prime resultant exponents, conjugation search, minimal resultant ideals.

The resultant exponent of a model at p is

    e_p = ord_p(Res) - (n+1) d^n * (minimal coefficient valuation),

independent of the scaling of the model.  The minimal exponent over the
Q-rational conjugacy class is approached by a budgeted search over diagonal
p-power scalings and (for n = 1) p-adic triangular translations.  Only a
minimum of 0 is certified exact; every positive minimum is an upper bound.

The search scores a conjugate without recomputing its resultant: for an
integer matrix F,

    ord_p(Res(adj(F) * Phi(F X))) = d^n (n+d) ord_p(det F) + ord_p(Res(Phi)),

an exact covariance identity that is cross-checked against the direct
resultant route in the test suite.  It also forces every exponent in a class
to be congruent mod gcd(d^n (n+d), (n+1) d^n), which the search uses as a
stopping floor.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import _matrix
from .errors import InvalidArgumentError, NotAMorphismError
from .exact_arithmetic import FactoredIdeal, _ord_int, factor_integer, primes_up_to, valuation
from .morphism_space import (
    MorphismModel,
    conjugate_integer_rows,
    min_coeff_valuation,
    normalize_primitive,
)
from .resultants import macaulay_resultant

GOOD = "good"
GOOD_CERTIFIED = "good_certified"
BAD_UPPER_BOUND = "bad_upper_bound"


@dataclass(frozen=True, slots=True)
class SearchBudget:
    """Bounds for conjugator searches.

    a_max bounds |exponent| in diagonal p-power moves, translation_depth is
    the p-adic digit depth of triangular moves, matrix_bound caps the entry
    height of conjugacy-witness matrices.
    """

    a_max: int
    translation_depth: int = 2
    matrix_bound: int = 3

    def __post_init__(self):
        if self.a_max < 0 or self.translation_depth < 0 or self.matrix_bound < 0:
            raise InvalidArgumentError("budget fields must be non-negative")


def default_budget(d: int) -> SearchBudget:
    return SearchBudget(a_max=d + 2, translation_depth=2, matrix_bound=3)


ZERO_BUDGET = SearchBudget(a_max=0, translation_depth=0, matrix_bound=0)


@dataclass(frozen=True, slots=True)
class LocalExponent:
    p: int
    e_model: int
    eps_estimate: int
    certified: bool

    def __post_init__(self):
        if not 0 <= self.eps_estimate <= self.e_model:
            raise InvalidArgumentError("need 0 <= eps_estimate <= e_model")
        if self.certified and self.eps_estimate != 0:
            raise InvalidArgumentError("only a zero minimum is certified")


@dataclass(frozen=True, slots=True)
class ReductionReport:
    morphism: MorphismModel
    res: Fraction
    local: tuple[LocalExponent, ...]
    minimal_resultant: FactoredIdeal
    norm: int
    fully_certified: bool

    def bad_primes(self) -> tuple[int, ...]:
        return self.minimal_resultant.primes()

    def certified_norm_lower_bound(self) -> int:
        """Norm with every uncertified exponent dropped to 0."""
        n = 1
        for entry in self.local:
            if entry.certified:
                n *= entry.p**entry.eps_estimate
        return n


def local_exponent(model: MorphismModel, p: int) -> int:
    """ord_p(Res) - (n+1) d^n min_val; model-independent, >= 0 on primitive models."""
    res = macaulay_resultant(model).value
    if res == 0:
        raise NotAMorphismError("resultant vanishes; not a morphism")
    return valuation(res, p) - (model.n + 1) * model.d**model.n * min_coeff_valuation(model, p)


def exponent_step(n: int, d: int) -> int:
    """Conjugation changes e_p by multiples of this (see module docstring)."""
    return math.gcd(d**n * (n + d), (n + 1) * d**n)


def _canonical_int_matrix(rows) -> tuple[tuple[int, ...], ...]:
    """Scale a rational matrix to a primitive integer one with positive lead."""
    flat = [Fraction(x) for row in rows for x in row]
    lcm = 1
    for x in flat:
        lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
    ints = [int(x * lcm) for x in flat]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    lead = next(v for v in ints if v)
    if lead < 0:
        g = -g
    ints = [v // g for v in ints]
    size = len(rows)
    return tuple(tuple(ints[i * size : (i + 1) * size]) for i in range(size))


def search_moves(n: int, p: int, budget: SearchBudget):
    """Deterministic conjugator candidates as primitive integer matrices.

    Diagonal p-power scalings first (cheapest wins come early), then for
    n = 1 the triangular translate-and-scale moves and their diagonal
    products.
    """
    amp = 2 * budget.a_max
    seen = set()

    def emit(rows):
        key = _canonical_int_matrix(rows)
        if key not in seen:
            seen.add(key)
            return key
        return None

    if n == 1:
        for a in sorted(range(-amp, amp + 1), key=lambda x: (abs(x), x)):
            if a == 0:
                continue
            mv = emit([[1, 0], [0, Fraction(p) ** a]])
            if mv:
                yield mv
        depth = budget.translation_depth
        for beta in range(1, p**depth):
            for b in range(-depth, depth + 1):
                off = beta * Fraction(p) ** b
                for a in sorted(range(-amp, amp + 1), key=lambda x: (abs(x), x)):
                    mv = emit([[1, off], [0, Fraction(p) ** a]])
                    if mv:
                        yield mv
    else:
        exps = sorted(range(-amp, amp + 1), key=lambda x: (abs(x), x))
        stack = [()]
        for _ in range(n):
            stack = [t + (a,) for t in stack for a in exps]
        for tail in sorted(stack, key=lambda t: (max(abs(a) for a in t), t)):
            if all(a == 0 for a in tail):
                continue
            rows = [[Fraction(0)] * (n + 1) for _ in range(n + 1)]
            rows[0][0] = Fraction(1)
            for i, a in enumerate(tail, start=1):
                rows[i][i] = Fraction(p) ** a
            mv = emit(rows)
            if mv:
                yield mv


def conjugated_exponent(prim: MorphismModel, p: int, v_res: int, fmat) -> int:
    """e_p of the conjugate by the integer matrix fmat, via the covariance identity."""
    n, d = prim.n, prim.d
    det = _matrix.det_bareiss_int([list(r) for r in fmat])
    if det == 0:
        raise InvalidArgumentError("conjugator must be invertible")
    coeff_rows = [[int(c) for c in f.coeffs] for f in prim.forms]
    conj = conjugate_integer_rows(coeff_rows, n, d, fmat)
    minval = min(_ord_int(c, p) for row in conj for c in row if c)
    return v_res + d**n * (n + d) * _ord_int(det, p) - (n + 1) * d**n * minval


def _minimize(prim: MorphismModel, p: int, v_res: int, budget: SearchBudget) -> LocalExponent:
    e_model = v_res  # primitive model has minimal coefficient valuation 0
    if e_model == 0:
        return LocalExponent(p, 0, 0, True)
    floor = e_model % exponent_step(prim.n, prim.d)
    best = e_model
    if best > floor:
        for fmat in search_moves(prim.n, p, budget):
            e = conjugated_exponent(prim, p, v_res, fmat)
            if e < best:
                best = e
                if best <= floor:
                    break
    return LocalExponent(p, e_model, best, best == 0)


def minimize_exponent(model: MorphismModel, p: int, budget: SearchBudget) -> LocalExponent:
    """Search the conjugacy class for a smaller exponent at p.

    Certified only when the minimum found is 0 (then it is exactly the class
    minimum, since exponents are never negative); a positive result is an
    upper bound for the class minimum.
    """
    prim = normalize_primitive(model)
    res = macaulay_resultant(prim).value
    if res == 0:
        raise NotAMorphismError("resultant vanishes; not a morphism")
    return _minimize(prim, p, valuation(res, p), budget)


def reduction_report(model: MorphismModel, budget: SearchBudget) -> ReductionReport:
    """Factor Res of the primitive model and minimize every positive exponent."""
    prim = normalize_primitive(model)
    res = macaulay_resultant(prim).value
    if res == 0:
        raise NotAMorphismError("resultant vanishes; not a morphism")
    factors = factor_integer(abs(int(res)))
    local = []
    estimate: dict[int, int] = {}
    for p in sorted(factors):
        entry = _minimize(prim, p, factors[p], budget)
        local.append(entry)
        if entry.eps_estimate > 0:
            estimate[p] = entry.eps_estimate
    ideal = FactoredIdeal.from_map(estimate)
    return ReductionReport(
        morphism=prim,
        res=res,
        local=tuple(local),
        minimal_resultant=ideal,
        norm=ideal.norm(),
        fully_certified=all(entry.certified for entry in local),
    )


def has_good_reduction(model: MorphismModel, p: int, budget: SearchBudget) -> str:
    """good_certified when the class minimum at p is provably 0, else bad_upper_bound."""
    entry = minimize_exponent(model, p, budget)
    return GOOD_CERTIFIED if entry.certified else BAD_UPPER_BOUND


def s_b_primes(B) -> list[int]:
    """All primes of norm <= B; over Q the norm of (p) is p."""
    if Fraction(B) < 1:
        raise InvalidArgumentError("bound must be >= 1")
    return primes_up_to(B)
