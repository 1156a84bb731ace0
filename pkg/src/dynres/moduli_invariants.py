"""Moduli-point invariants: multiplier spectra and sigma invariants on P^1.

For (n, d) = (1, 2) the pair (sigma_1, sigma_2) of elementary symmetric
functions of the three fixed-point multipliers pins the conjugacy class, and
the moduli height is the height of [sigma_1 : sigma_2 : 1].  Away from that
case the coefficient height of the primitive model stands in as an explicitly
flagged, model-dependent proxy.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from . import _matrix
from .errors import DegenerateInputError, InvalidArgumentError, NotAMorphismError
from .morphism_space import (
    HomogeneousForm,
    LinearMap,
    MorphismModel,
    conjugate,
    max_abs_coefficient,
)
from .resultants import macaulay_resultant

SIGMA_INVARIANTS = "sigma_invariants"
COEFFICIENT_PROXY = "coefficient_proxy"


@dataclass(frozen=True, slots=True)
class MultiplierSpectrum:
    """Power sums and elementary symmetric functions of the fixed-point multipliers.

    The two lists determine each other through Newton's identities, which the
    constructor re-checks.
    """

    power_sums: tuple[Fraction, ...]
    elementary_symmetric: tuple[Fraction, ...]

    def __post_init__(self):
        if tuple(power_sums_to_elementary(self.power_sums)) != self.elementary_symmetric:
            raise InvalidArgumentError("power sums and elementary symmetric functions disagree")


@dataclass(frozen=True, slots=True)
class ModuliPoint:
    """Invariants identifying the conjugacy class, with an exact height witness.

    mult_height is the multiplicative height (max |coordinate| of the coprime
    integer point for sigma kind, max |coefficient| of the primitive model for
    the proxy kind); height = log(mult_height).  The proxy kind is
    model-dependent, not class-invariant.
    """

    kind: str
    sigma: tuple[Fraction, Fraction] | None
    point: tuple[int, int, int] | None
    mult_height: int
    height: float


def fixed_point_form(model: MorphismModel) -> HomogeneousForm:
    """Y*phi0 - X*phi1: the degree d+1 binary form cutting out the fixed points."""
    if model.n != 1:
        raise InvalidArgumentError("fixed points as a binary form need n = 1")
    f = model.forms[0].mul_variable(1).sub(model.forms[1].mul_variable(0))
    if f.is_zero():
        raise DegenerateInputError("every point is fixed; no fixed-point form")
    return f


# --- univariate polynomial helpers (ascending coefficient lists over Q) -------


def _poly_trim(p: list[Fraction]) -> list[Fraction]:
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_mul(a, b):
    out = [Fraction(0)] * (len(a) + len(b) - 1) if a and b else []
    for i, x in enumerate(a):
        if x == 0:
            continue
        for j, y in enumerate(b):
            out[i + j] += x * y
    return _poly_trim(out)


def _poly_deriv(a):
    return _poly_trim([i * c for i, c in enumerate(a)][1:])


def _poly_sub(a, b):
    out = [Fraction(0)] * max(len(a), len(b))
    for i, x in enumerate(a):
        out[i] += x
    for i, y in enumerate(b):
        out[i] -= y
    return _poly_trim(out)


def _poly_mod(a, m):
    a = [Fraction(c) for c in a]
    dm = len(m) - 1
    lead = m[-1]
    while len(a) - 1 >= dm and a:
        shift = len(a) - 1 - dm
        q = a[-1] / lead
        for i in range(dm + 1):
            a[shift + i] -= q * m[i]
        _poly_trim(a)
    return a


def _poly_gcd(a, b):
    a, b = [Fraction(c) for c in a], [Fraction(c) for c in b]
    while b:
        a, b = b, _poly_mod(a, b)
    return a


def _poly_eval_matrix(p, C):
    n = len(C)
    acc = _matrix.mat_scale(_matrix.identity(n), Fraction(0))
    power = _matrix.identity(n)
    for i, c in enumerate(p):
        if c != 0:
            acc = [[acc[r][s] + c * power[r][s] for s in range(n)] for r in range(n)]
        if i + 1 < len(p):
            power = _matrix.mat_mul(power, C)
    return acc


def _companion(monic):
    """Companion matrix of a monic polynomial given ascending (constant first)."""
    m = len(monic) - 1
    C = [[Fraction(0)] * m for _ in range(m)]
    for i in range(1, m):
        C[i][i - 1] = Fraction(1)
    for i in range(m):
        C[i][m - 1] = -monic[i]
    return C


def power_sums_to_elementary(psums) -> list[Fraction]:
    """Newton's identities: (p_1..p_k) -> (e_1..e_k)."""
    psums = [Fraction(p) for p in psums]
    elem = [Fraction(1)]
    for k in range(1, len(psums) + 1):
        acc = Fraction(0)
        for i in range(1, k + 1):
            acc += (-1) ** (i - 1) * elem[k - i] * psums[i - 1]
        elem.append(acc / k)
    return elem[1:]


def elementary_to_power_sums(elem, k: int) -> list[Fraction]:
    """Newton's identities in reverse; e_j = 0 past the end of the list."""
    elem = [Fraction(e) for e in elem]

    def e(j):
        return elem[j - 1] if 1 <= j <= len(elem) else Fraction(0)

    psums: list[Fraction] = []
    for j in range(1, k + 1):
        acc = (-1) ** (j - 1) * j * e(j)
        for i in range(1, j):
            acc += (-1) ** (i - 1) * e(i) * psums[j - i - 1]
        psums.append(acc)
    return psums


def _affine_multiplier_operator(model: MorphismModel, fixpoly):
    """r(C) * s(C)^-1 for the multiplier function phi'(z) = r/s mod the fixed polynomial.

    Returns None when s is not invertible mod the fixed-point polynomial (a
    pole sits on a fixed point chart boundary; callers retry in a shifted
    chart).
    """
    p0 = [Fraction(c) for c in model.forms[0].dehomogenized()]
    p1 = [Fraction(c) for c in model.forms[1].dehomogenized()]
    r = _poly_sub(_poly_mul(_poly_deriv(p0), p1), _poly_mul(p0, _poly_deriv(p1)))
    s = _poly_mul(p1, p1)
    g = _poly_gcd(s, fixpoly)
    if len(g) - 1 > 0:
        return None
    C = _companion(fixpoly)
    S = _poly_eval_matrix(_poly_mod(s, fixpoly), C)
    R = _poly_eval_matrix(_poly_mod(r, fixpoly), C)
    return _matrix.mat_mul(R, _matrix.mat_inverse(S))


def multiplier_power_sums(model: MorphismModel, k: int) -> list[Fraction]:
    """p_j = sum of j-th powers of the d+1 fixed-point multipliers, j = 1..k.

    Multiple fixed points keep their multiplicity; the fixed point at infinity
    (when present) is handled in the w = 1/z chart.
    """
    if model.n != 1 or model.d < 2:
        raise InvalidArgumentError("multiplier spectrum needs n = 1 and d >= 2")
    if k < 0:
        raise InvalidArgumentError("need k >= 0")
    if macaulay_resultant(model).value == 0:
        raise NotAMorphismError("resultant vanishes; not a morphism")
    return _power_sums_checked(model, k, retries=8)


def _power_sums_checked(model: MorphismModel, k: int, retries: int) -> list[Fraction]:
    d = model.d
    F = fixed_point_form(model)
    fixpoly = _poly_trim([Fraction(c) for c in F.dehomogenized()])
    m = len(fixpoly) - 1
    inf_mult = (d + 1) - m

    lam_inf = Fraction(0)
    if inf_mult > 0:
        # phi fixes [1:0]; multiplier in the w = 1/z chart is psi'(0) for
        # psi(w) = phi1(1, w)/phi0(1, w)
        lead0 = model.forms[0].coefficient((d, 0))
        lam_inf = Fraction(model.forms[1].coefficient((d - 1, 1))) / Fraction(lead0)

    operator = None
    if m > 0:
        monic = [c / fixpoly[-1] for c in fixpoly]
        operator = _affine_multiplier_operator(model, monic)
        if operator is None:
            if retries == 0:
                raise DegenerateInputError("no chart separated fixed points from poles")
            shift = LinearMap.from_rows([[1, 9 - retries], [0, 1]])
            return _power_sums_checked(conjugate(model, shift), k, retries - 1)

    psums = []
    power = operator
    for j in range(1, k + 1):
        total = inf_mult * lam_inf**j
        if operator is not None:
            total += _matrix.mat_trace(power)
            if j < k:
                power = _matrix.mat_mul(power, operator)
        psums.append(total)
    return psums


def multiplier_spectrum(model: MorphismModel) -> MultiplierSpectrum:
    """Spectrum of all d+1 fixed-point multipliers in both encodings."""
    psums = multiplier_power_sums(model, model.d + 1)
    return MultiplierSpectrum(tuple(psums), tuple(power_sums_to_elementary(psums)))


def sigma_invariants(model: MorphismModel) -> tuple[Fraction, Fraction]:
    """(sigma_1, sigma_2) of the three fixed-point multipliers of a quadratic map."""
    s1, s2, _ = sigma_invariants_full(model)
    return (s1, s2)


def sigma_invariants_full(model: MorphismModel) -> tuple[Fraction, Fraction, Fraction]:
    if model.n != 1 or model.d != 2:
        raise InvalidArgumentError("sigma invariants are implemented for n = 1, d = 2")
    e1, e2, e3 = power_sums_to_elementary(multiplier_power_sums(model, 3))
    return (e1, e2, e3)


def moduli_height(model: MorphismModel) -> ModuliPoint:
    """Height of the class point: exact for (1, 2), coefficient proxy otherwise."""
    if macaulay_resultant(model).value == 0:
        raise NotAMorphismError("resultant vanishes; not a morphism")
    if (model.n, model.d) == (1, 2):
        s1, s2 = sigma_invariants(model)
        lcm = s1.denominator * s2.denominator // math.gcd(s1.denominator, s2.denominator)
        x, y, z = int(s1 * lcm), int(s2 * lcm), lcm
        g = math.gcd(math.gcd(abs(x), abs(y)), z)
        x, y, z = x // g, y // g, z // g
        h = max(abs(x), abs(y), z)
        return ModuliPoint(SIGMA_INVARIANTS, (s1, s2), (x, y, z), h, math.log(h))
    h = max_abs_coefficient(model)
    return ModuliPoint(COEFFICIENT_PROXY, None, None, h, math.log(h))
