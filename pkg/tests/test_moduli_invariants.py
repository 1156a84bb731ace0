import math
from fractions import Fraction

import pytest
import sympy

from conftest import bq, random_morphism, twist, z_squared
from dynres import (
    DegenerateInputError,
    InvalidArgumentError,
    LinearMap,
    MorphismModel,
    NotAMorphismError,
    conjugate,
    fixed_point_form,
    moduli_height,
    multiplier_power_sums,
    sigma_invariants,
    sigma_invariants_full,
)
from dynres.moduli_invariants import elementary_to_power_sums, power_sums_to_elementary


def test_fixed_point_form_examples():
    # z^2: Y X^2 - X Y^2 = XY(X - Y)
    assert fixed_point_form(z_squared()).coeffs == (0, 1, -1, 0)
    # z + 2/z: 2 Y^3
    assert fixed_point_form(twist(2)).coeffs == (0, 0, 0, 2)
    # [X^2 + XY : Y^2]: X^2 Y
    assert fixed_point_form(bq(1, 1, 0, 0, 0, 1)).coeffs == (0, 1, 0, 0)


def test_fixed_point_form_degenerate():
    ident = MorphismModel.from_coeff_lists(1, 1, [[1, 0], [0, 1]])
    with pytest.raises(DegenerateInputError):
        fixed_point_form(ident)


def test_power_sums_z_squared():
    assert multiplier_power_sums(z_squared(), 3) == [2, 4, 8]


def test_power_sums_z2_minus_2z():
    m = bq(1, -2, 0, 0, 0, 1)
    assert multiplier_power_sums(m, 1) == [2]
    assert multiplier_power_sums(m, 3) == [2, 20, 56]  # multipliers {-2, 4, 0}


def test_power_sums_triple_fixed_point_at_infinity():
    assert multiplier_power_sums(twist(2), 3) == [3, 3, 3]
    assert multiplier_power_sums(twist(1), 3) == [3, 3, 3]


def test_power_sums_requires_morphism():
    with pytest.raises(NotAMorphismError):
        multiplier_power_sums(bq(0, 1, 0, 0, 0, 1), 2)
    with pytest.raises(InvalidArgumentError):
        multiplier_power_sums(MorphismModel.from_coeff_lists(2, 2, [[1, 0, 0, 0, 0, 0], [0, 0, 0, 1, 0, 0], [0, 0, 0, 0, 0, 1]]), 2)


def test_power_sums_numeric_cross_check(rng):
    # numeric fixed points + multipliers from an independent symbolic route
    z = sympy.Symbol("z")
    for _ in range(8):
        m = random_morphism(rng, 1, 2, bound=4)
        p0 = sum(int(c) * z ** (2 - i) for i, c in enumerate(m.forms[0].coeffs))
        p1 = sum(int(c) * z ** (2 - i) for i, c in enumerate(m.forms[1].coeffs))
        fix = sympy.expand(p0 - z * p1)
        phi_prime = sympy.diff(p0 / p1, z)
        total = Fraction(0)
        degree_drop = 3 - sympy.degree(fix, z)
        if degree_drop:
            # multiplier at infinity in the w = 1/z chart
            w = sympy.Symbol("w")
            psi = (p1 / p0).subs(z, 1 / w)
            lam_inf = sympy.simplify(sympy.diff(sympy.simplify(psi), w).subs(w, 0))
            total += Fraction(str(lam_inf)) * degree_drop
        expected_p1 = multiplier_power_sums(m, 1)[0]
        numeric = complex(total)
        for root in sympy.Poly(fix, z).all_roots():
            numeric += complex(phi_prime.subs(z, root).evalf(30))
        assert abs(numeric - complex(Fraction(expected_p1))) < 1e-12


def test_sigma_examples():
    assert sigma_invariants(z_squared()) == (2, 0)
    assert sigma_invariants(bq(1, -2, 0, 0, 0, 1)) == (2, -8)
    assert sigma_invariants(twist(2)) == sigma_invariants(twist(1)) == (3, 3)


def test_sigma_degree2_relation(rng):
    for model in (z_squared(), bq(1, -2, 0, 0, 0, 1), twist(2), twist(3)):
        s1, _, s3 = sigma_invariants_full(model)
        assert s3 == s1 - 2
    for _ in range(25):
        s1, _, s3 = sigma_invariants_full(random_morphism(rng, 1, 2))
        assert s3 == s1 - 2


def test_multiplier_spectrum_type(rng):
    from dynres import multiplier_spectrum
    from dynres.moduli_invariants import MultiplierSpectrum

    spec = multiplier_spectrum(z_squared())
    assert spec.power_sums == (2, 4, 8)
    assert spec.elementary_symmetric == (2, 0, 0)
    with pytest.raises(InvalidArgumentError):
        MultiplierSpectrum((Fraction(1), Fraction(2)), (Fraction(1), Fraction(5)))
    for _ in range(5):
        m = random_morphism(rng, 1, 2)
        spec = multiplier_spectrum(m)
        assert len(spec.power_sums) == 3
        assert spec.elementary_symmetric[:2] == sigma_invariants(m)


def test_newton_round_trip(rng):
    for _ in range(40):
        elem = [Fraction(rng.randint(-9, 9), rng.randint(1, 5)) for _ in range(3)]
        psums = elementary_to_power_sums(elem, 3)
        assert power_sums_to_elementary(psums) == elem


def test_sigma_conjugation_invariance(rng):
    for _ in range(20):
        m = random_morphism(rng, 1, 2)
        while True:
            rows = [[rng.randint(-3, 3) for _ in range(2)] for _ in range(2)]
            if rows[0][0] * rows[1][1] - rows[0][1] * rows[1][0] != 0:
                break
        f = LinearMap.from_rows(rows)
        assert sigma_invariants(conjugate(m, f)) == sigma_invariants(m)
        assert sigma_invariants(conjugate(m, f.inverse())) == sigma_invariants(m)


def test_sigma_chart_independence(rng):
    for _ in range(10):
        m = random_morphism(rng, 1, 2)
        t = rng.randint(1, 5)
        shifted = conjugate(m, LinearMap.from_rows([[1, t], [0, 1]]))
        assert sigma_invariants(shifted) == sigma_invariants(m)


def test_moduli_height_z_squared():
    mp = moduli_height(z_squared())
    assert mp.kind == "sigma_invariants"
    assert mp.point == (2, 0, 1)
    assert mp.mult_height == 2
    assert mp.height == math.log(2)


def test_moduli_height_common_across_twists():
    heights = {moduli_height(twist(b)).mult_height for b in (1, 2, 3)}
    assert heights == {3}  # sigma = (3, 3) -> [3 : 3 : 1]


def test_moduli_height_proxy():
    m = MorphismModel.from_coeff_lists(2, 2, [[1, 0, 0, 0, 0, 0], [0, 0, 0, 1, 0, 0], [0, 0, 0, 0, 0, 1]])
    mp = moduli_height(m)
    assert mp.kind == "coefficient_proxy"
    assert mp.sigma is None and mp.point is None
    assert mp.mult_height == 1 and mp.height == 0.0


def test_moduli_height_rejects_degenerate():
    with pytest.raises(NotAMorphismError):
        moduli_height(bq(0, 1, 0, 0, 0, 1))


def test_sigma_rational_denominators(rng):
    # maps with non-trivial denominators exercise the exact point clearing
    m = bq(2, 1, -1, 1, 3, 1)
    s1, s2 = sigma_invariants(m)
    mp = moduli_height(m)
    x, y, z = mp.point
    assert Fraction(x, z) == s1 and Fraction(y, z) == s2
    assert math.gcd(math.gcd(abs(x), abs(y)), z) == 1
