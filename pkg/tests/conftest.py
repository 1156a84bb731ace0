import random
from fractions import Fraction

import pytest

from dynres import MorphismModel, macaulay_resultant
from dynres.morphism_space import monomials


def binary(d, c0, c1) -> MorphismModel:
    """Binary model from two coefficient lists in descending x-power order."""
    return MorphismModel.from_coeff_lists(1, d, [c0, c1])


def bq(a, b, c, e, f, g) -> MorphismModel:
    """Quadratic model [a X^2 + b XY + c Y^2 : e X^2 + f XY + g Y^2]."""
    return binary(2, [a, b, c], [e, f, g])


def twist(b) -> MorphismModel:
    """z + b/z."""
    return bq(1, 0, Fraction(b), 0, 1, 0)


def z_squared() -> MorphismModel:
    return bq(1, 0, 0, 0, 0, 1)


def random_model(rng: random.Random, n: int, d: int, bound: int = 5) -> MorphismModel:
    per_form = len(monomials(n, d))
    while True:
        lists = [[rng.randint(-bound, bound) for _ in range(per_form)] for _ in range(n + 1)]
        if any(any(row) for row in lists):
            return MorphismModel.from_coeff_lists(n, d, lists)


def random_morphism(rng: random.Random, n: int, d: int, bound: int = 5) -> MorphismModel:
    while True:
        m = random_model(rng, n, d, bound)
        if macaulay_resultant(m).value != 0:
            return m


def proj_eq(a, b) -> bool:
    """Projective equality of coordinate tuples."""
    a = [Fraction(x) for x in a]
    b = [Fraction(x) for x in b]
    if len(a) != len(b) or all(x == 0 for x in a) or all(x == 0 for x in b):
        return False
    for i in range(len(a)):
        for j in range(len(a)):
            if a[i] * b[j] != a[j] * b[i]:
                return False
    return True


@pytest.fixture
def rng():
    return random.Random(20140508)
