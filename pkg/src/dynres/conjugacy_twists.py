"""PGL_2(Q)-conjugacy testing, twist bucketing, and the quadratic twist family.

Conjugacy over Q is a semidecision: a definite yes comes with a re-verified
witness matrix, a definite no comes from a separating conjugation invariant,
and an exhausted search stays honestly unknown.  The family z + b/z supplies
exactly solvable instances: two members are Q-isomorphic precisely when the
ratio of their parameters is a rational square.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from .errors import InvalidArgumentError, NotAMorphismError
from .exact_arithmetic import is_perfect_square
from .moduli_invariants import sigma_invariants
from .morphism_space import (
    LinearMap,
    MorphismModel,
    canonical_integer_rows,
    conjugate,
    conjugate_integer_rows,
    normalize_primitive,
)
from .reduction_theory import SearchBudget
from .resultants import macaulay_resultant

CONJUGATE = "conjugate"
NOT_CONJUGATE = "not_conjugate"
UNKNOWN = "unknown"


@dataclass(frozen=True, slots=True)
class ConjugacyVerdict:
    status: str
    witness: LinearMap | None = None
    separating_invariant: str | None = None


@dataclass(frozen=True, slots=True)
class TwistBucket:
    """One Qbar-class key with its discovered K-classes.

    classes holds proven-conjugate groups of models; every pair of distinct
    classes in a bucket is an unresolved (unknown) pair, since a definite
    conjugacy would have merged them and a definite refusal is impossible
    inside one sigma fiber.
    """

    qbar_class_key: tuple[Fraction, Fraction]
    classes: tuple[tuple[MorphismModel, ...], ...]
    unknown_pairs: tuple[tuple[int, int], ...]

    def representatives(self) -> tuple[MorphismModel, ...]:
        return tuple(cls[0] for cls in self.classes)


def quadratic_twist_model(b) -> MorphismModel:
    """The map z + b/z as the model [X^2 + b Y^2 : XY]."""
    b = Fraction(b)
    if b == 0:
        raise InvalidArgumentError("twist parameter must be nonzero")
    return MorphismModel.from_coeff_lists(1, 2, [[1, 0, b], [0, 1, 0]])


def twist_family_test(b, c) -> bool:
    """True iff z + b/z and z + c/z are Q-isomorphic, i.e. b/c is a square in Q."""
    b, c = Fraction(b), Fraction(c)
    if b == 0 or c == 0:
        raise InvalidArgumentError("twist parameters must be nonzero")
    ratio = b / c
    return ratio > 0 and is_perfect_square(ratio.numerator) and is_perfect_square(ratio.denominator)


@lru_cache(maxsize=None)
def _witness_candidates(bound: int) -> tuple[tuple[tuple[int, int], tuple[int, int]], ...]:
    """Primitive sign-canonical invertible integer 2x2 matrices, small first."""
    seen = set()
    out = []
    for entries in itertools.product(range(-bound, bound + 1), repeat=4):
        a, b, c, d = entries
        if a * d - b * c == 0:
            continue
        g = math.gcd(math.gcd(abs(a), abs(b)), math.gcd(abs(c), abs(d)))
        flat = tuple(v // g for v in entries)
        first = next(v for v in flat if v)
        if first < 0:
            flat = tuple(-v for v in flat)
        if flat not in seen:
            seen.add(flat)
            out.append(flat)
    out.sort(key=lambda t: (max(abs(v) for v in t), sum(1 for v in t if v < 0), t))
    return tuple(((t[0], t[1]), (t[2], t[3])) for t in out)


def _search_witness(phi: MorphismModel, psi: MorphismModel, budget: SearchBudget) -> LinearMap | None:
    """An integer matrix f with conjugate(psi, f) projectively equal to phi, if found."""
    phi_key = canonical_integer_rows([[c for c in f.coeffs] for f in normalize_primitive(phi).forms])
    psi_prim = normalize_primitive(psi)
    psi_rows = [[int(c) for c in f.coeffs] for f in psi_prim.forms]
    for fmat in _witness_candidates(budget.matrix_bound):
        conj = conjugate_integer_rows(psi_rows, 1, 2, fmat)
        if canonical_integer_rows(conj) == phi_key:
            return LinearMap.from_rows(fmat)
    return None


def conjugacy_test(phi: MorphismModel, psi: MorphismModel, budget: SearchBudget) -> ConjugacyVerdict:
    """Semidecide whether psi is a PGL_2(Q)-conjugate of phi (both quadratic on P^1)."""
    for m in (phi, psi):
        if (m.n, m.d) != (1, 2):
            raise InvalidArgumentError("conjugacy testing is implemented for n = 1, d = 2")
        if macaulay_resultant(m).value == 0:
            raise NotAMorphismError("resultant vanishes; not a morphism")
    if sigma_invariants(phi) != sigma_invariants(psi):
        return ConjugacyVerdict(NOT_CONJUGATE, separating_invariant="sigma_invariants")
    if phi.projectively_equal(psi):
        return ConjugacyVerdict(CONJUGATE, witness=LinearMap.identity(1))
    witness = _search_witness(phi, psi, budget)
    if witness is not None:
        # soundness: the witness must re-verify through the public conjugation
        if not conjugate(psi, witness).projectively_equal(phi):
            raise InvalidArgumentError("witness failed re-verification")
        return ConjugacyVerdict(CONJUGATE, witness=witness)
    return ConjugacyVerdict(UNKNOWN)


def bucket_twists(models, budget: SearchBudget) -> list[TwistBucket]:
    """Group by exact sigma key, then partition each group by proven conjugacy."""
    ordered = sorted(models, key=lambda m: m.canonical_key())
    groups: dict[tuple[Fraction, Fraction], list[list[MorphismModel]]] = {}
    for model in ordered:
        if (model.n, model.d) != (1, 2):
            raise InvalidArgumentError("twist bucketing is implemented for n = 1, d = 2")
        key = sigma_invariants(model)
        classes = groups.setdefault(key, [])
        hits = []
        for i, cls in enumerate(classes):
            if model.projectively_equal(cls[0]) or _search_witness(cls[0], model, budget) is not None:
                hits.append(i)
        if not hits:
            classes.append([model])
        else:
            # the new model links every hit class into one
            merged = classes[hits[0]]
            merged.append(model)
            for i in reversed(hits[1:]):
                merged.extend(classes.pop(i))
    buckets = []
    for key in sorted(groups):
        classes = tuple(tuple(cls) for cls in groups[key])
        unknown = tuple((i, j) for i in range(len(classes)) for j in range(i + 1, len(classes)))
        buckets.append(TwistBucket(key, classes, unknown))
    return buckets
