"""Exact Macaulay resultants with a Sylvester specialization for n = 1.

For n >= 2 the resultant is det(M)/det(M') on the classical Macaulay matrix
at critical degree D = (n+1)(d-1)+1.  When det(M') vanishes we fall back to
perturbing by t * X_i^d and interpolating the resultant as a polynomial in t
(the perturbing system's Macaulay matrix is the identity, so M(t) = M + tI).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import _matrix
from .errors import InvalidArgumentError
from .morphism_space import HomogeneousForm, MorphismModel, monomial_index, monomials

SYLVESTER = "sylvester"
MACAULAY_QUOTIENT = "macaulay_quotient"
PERTURBATION = "perturbation"


@dataclass(frozen=True, slots=True)
class ResultantValue:
    value: Fraction
    method: str

    def vanishes(self) -> bool:
        return self.value == 0


def sylvester_matrix(f: HomogeneousForm, g: HomogeneousForm) -> list[list[Fraction]]:
    """2d x 2d Sylvester matrix: d shifted rows of f, then d shifted rows of g."""
    if f.n != 1 or g.n != 1:
        raise InvalidArgumentError("Sylvester resultant is for binary forms")
    if f.d != g.d or f.d < 1:
        raise InvalidArgumentError("binary forms must have equal degree >= 1")
    d = f.d
    size = 2 * d
    rows = []
    for coeffs in (f.coeffs, g.coeffs):
        for shift in range(d):
            row = [Fraction(0)] * size
            for j, c in enumerate(coeffs):
                row[shift + j] = Fraction(c)
            rows.append(row)
    return rows


def sylvester_resultant(f: HomogeneousForm, g: HomogeneousForm, backend: str = "bareiss") -> Fraction:
    return _matrix.det_exact(sylvester_matrix(f, g), backend)


def exact_determinant(matrix, backend: str = "bareiss") -> Fraction:
    """Exact determinant of a square rational matrix; backends agree exactly."""
    return _matrix.det_exact([list(row) for row in matrix], backend)


@dataclass(frozen=True, slots=True)
class MacaulayMatrix:
    """The degree-D Macaulay matrix of a model, plus the reduced-minor index set.

    Rows and columns are both indexed by the degree-D monomials; column X^I is
    assigned to the least i with I_i >= d and its row holds X^(I - d e_i) * phi_i.
    The minor M' lives on the monomials divisible by X_i^d for at least two i.
    """

    n: int
    d: int
    critical_degree: int
    entries: tuple[tuple[Fraction, ...], ...]
    reduced_minor_index: tuple[int, ...]

    def size(self) -> int:
        return len(self.entries)

    def rows(self) -> list[list[Fraction]]:
        return [list(r) for r in self.entries]

    def minor_rows(self) -> list[list[Fraction]]:
        idx = self.reduced_minor_index
        return [[self.entries[i][j] for j in idx] for i in idx]


def macaulay_matrix(model: MorphismModel) -> MacaulayMatrix:
    n, d = model.n, model.d
    D = (n + 1) * (d - 1) + 1
    cols = monomials(n, D)
    col_index = monomial_index(n, D)
    form_monomials = monomials(n, d)
    size = len(cols)
    entries = [[Fraction(0)] * size for _ in range(size)]
    minor_idx = []
    for r, I in enumerate(cols):
        heavy = [i for i, e in enumerate(I) if e >= d]
        # degree D forces at least one exponent >= d
        i = heavy[0]
        if len(heavy) >= 2:
            minor_idx.append(r)
        shift = tuple(e - d if k == i else e for k, e in enumerate(I))
        for J, c in zip(form_monomials, model.forms[i].coeffs):
            if c == 0:
                continue
            target = tuple(a + b for a, b in zip(J, shift))
            entries[r][col_index[target]] += Fraction(c)
    return MacaulayMatrix(n, d, D, tuple(tuple(r) for r in entries), tuple(minor_idx))


def _macaulay_quotient(model: MorphismModel, backend: str) -> Fraction | None:
    """det(M)/det(M'), or None when the minor determinant vanishes."""
    mac = macaulay_matrix(model)
    det_minor = _matrix.det_exact(mac.minor_rows(), backend)
    if det_minor == 0:
        return None
    det_full = _matrix.det_exact(mac.rows(), backend)
    return det_full / det_minor


def _perturbation_resultant(model: MorphismModel, backend: str) -> Fraction:
    """Resultant of (phi_i + t X_i^d) interpolated in t, evaluated at t = 0."""
    mac = macaulay_matrix(model)
    size = mac.size()
    minor_rows = mac.minor_rows()
    full_rows = mac.rows()
    needed = size + 1
    nodes: list[tuple[int, Fraction]] = []
    t = 1
    while len(nodes) < needed:
        shifted_minor = [
            [minor_rows[i][j] + (t if i == j else 0) for j in range(len(minor_rows))] for i in range(len(minor_rows))
        ]
        dm = _matrix.det_exact(shifted_minor, backend)
        if dm != 0:
            shifted_full = [[full_rows[i][j] + (t if i == j else 0) for j in range(size)] for i in range(size)]
            df = _matrix.det_exact(shifted_full, backend)
            nodes.append((t, df / dm))
        t += 1
    # Lagrange evaluation of the interpolant at t = 0
    total = Fraction(0)
    for j, (tj, yj) in enumerate(nodes):
        weight = Fraction(1)
        for k, (tk, _) in enumerate(nodes):
            if k != j:
                weight *= Fraction(tk, tk - tj)
        total += yj * weight
    return total


def macaulay_resultant(model: MorphismModel, backend: str = "bareiss") -> ResultantValue:
    """Res of the model; nonzero exactly when the forms have no common zero."""
    if model.n == 1:
        return ResultantValue(sylvester_resultant(model.forms[0], model.forms[1], backend), SYLVESTER)
    quotient = _macaulay_quotient(model, backend)
    if quotient is not None:
        return ResultantValue(quotient, MACAULAY_QUOTIENT)
    return ResultantValue(_perturbation_resultant(model, backend), PERTURBATION)
