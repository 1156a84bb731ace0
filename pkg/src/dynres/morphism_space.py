"""Degree-d endomorphisms of P^n as exact coefficient tuples.

A model is n+1 homogeneous degree-d forms over Q.  Monomials are kept dense
in descending lexicographic order of exponent tuples, so a binary quadratic
reads (X^2, XY, Y^2).  All values are immutable; operations are pure.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

from . import _matrix
from .errors import IndeterminatePointError, InvalidArgumentError, SchemaError
from .exact_arithmetic import rational_from_string, rational_to_string, valuation

MultiIndex = tuple[int, ...]


@lru_cache(maxsize=None)
def monomials(n: int, d: int) -> tuple[MultiIndex, ...]:
    """All exponent tuples (i_0..i_n) with sum d, in descending lex order."""
    if n < 0 or d < 0:
        raise InvalidArgumentError("n and d must be non-negative")

    def gen(vars_left: int, degree: int):
        if vars_left == 1:
            yield (degree,)
            return
        for first in range(degree, -1, -1):
            for rest in gen(vars_left - 1, degree - first):
                yield (first,) + rest

    return tuple(gen(n + 1, d))


@lru_cache(maxsize=None)
def monomial_index(n: int, d: int) -> dict[MultiIndex, int]:
    return {m: i for i, m in enumerate(monomials(n, d))}


@dataclass(frozen=True, slots=True)
class HomogeneousForm:
    """A homogeneous polynomial of degree d in n+1 variables, dense coefficients."""

    n: int
    d: int
    coeffs: tuple

    def __post_init__(self):
        if len(self.coeffs) != len(monomials(self.n, self.d)):
            raise InvalidArgumentError(
                f"form of degree {self.d} in {self.n + 1} variables needs "
                f"{len(monomials(self.n, self.d))} coefficients, got {len(self.coeffs)}"
            )

    @classmethod
    def from_dict(cls, n: int, d: int, terms: dict[MultiIndex, Fraction]) -> "HomogeneousForm":
        idx = monomial_index(n, d)
        coeffs = [Fraction(0)] * len(idx)
        for exps, c in terms.items():
            key = tuple(exps)
            if len(key) != n + 1 or any(e < 0 for e in key) or sum(key) != d:
                raise InvalidArgumentError(f"bad exponent tuple {key} for (n={n}, d={d})")
            coeffs[idx[key]] += c
        return cls(n, d, tuple(coeffs))

    def coefficient(self, exps: MultiIndex):
        return self.coeffs[monomial_index(self.n, self.d)[tuple(exps)]]

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def evaluate(self, point):
        total = 0
        for exps, c in zip(monomials(self.n, self.d), self.coeffs):
            if c == 0:
                continue
            term = c
            for x, e in zip(point, exps):
                if e:
                    term *= x**e
            total += term
        return total

    def mul_variable(self, j: int) -> "HomogeneousForm":
        """Multiply by X_j; degree goes up by one."""
        terms = {}
        for exps, c in zip(monomials(self.n, self.d), self.coeffs):
            if c == 0:
                continue
            bumped = list(exps)
            bumped[j] += 1
            terms[tuple(bumped)] = c
        return HomogeneousForm.from_dict(self.n, self.d + 1, terms)

    def sub(self, other: "HomogeneousForm") -> "HomogeneousForm":
        if (self.n, self.d) != (other.n, other.d):
            raise InvalidArgumentError("form shapes differ")
        return HomogeneousForm(self.n, self.d, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def dehomogenized(self) -> list:
        """For n = 1: coefficients of f(z) = F(z, 1), ascending in z."""
        if self.n != 1:
            raise InvalidArgumentError("dehomogenization is for binary forms")
        # lex-desc order is (X^d, X^(d-1)Y, ..., Y^d): reverse for ascending z powers
        return list(reversed(self.coeffs))


@dataclass(frozen=True, slots=True)
class MorphismModel:
    """A point of P^N: n+1 degree-d forms, not all zero."""

    n: int
    d: int
    forms: tuple[HomogeneousForm, ...]

    def __post_init__(self):
        if self.d < 1:
            raise InvalidArgumentError("degree must be >= 1")
        if len(self.forms) != self.n + 1:
            raise InvalidArgumentError(f"need {self.n + 1} forms, got {len(self.forms)}")
        for f in self.forms:
            if (f.n, f.d) != (self.n, self.d):
                raise InvalidArgumentError("all forms must share (n, d)")
        if all(f.is_zero() for f in self.forms):
            raise InvalidArgumentError("zero model does not define a point of P^N")

    @classmethod
    def from_coeff_lists(cls, n: int, d: int, lists) -> "MorphismModel":
        return cls(n, d, tuple(HomogeneousForm(n, d, tuple(Fraction(c) for c in row)) for row in lists))

    def all_coeffs(self) -> tuple:
        return tuple(c for f in self.forms for c in f.coeffs)

    def scale(self, lam) -> "MorphismModel":
        lam = Fraction(lam)
        if lam == 0:
            raise InvalidArgumentError("scaling by zero")
        return MorphismModel(
            self.n, self.d, tuple(HomogeneousForm(self.n, self.d, tuple(c * lam for c in f.coeffs)) for f in self.forms)
        )

    def canonical_key(self) -> tuple:
        prim = normalize_primitive(self)
        return (self.n, self.d) + tuple(int(c) for c in prim.all_coeffs())

    def projectively_equal(self, other: "MorphismModel") -> bool:
        return self.canonical_key() == other.canonical_key()

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "d": self.d,
            "forms": [
                [[",".join(map(str, exps)), rational_to_string(c)] for exps, c in zip(monomials(self.n, self.d), f.coeffs)]
                for f in self.forms
            ],
        }

    @classmethod
    def from_json(cls, data) -> "MorphismModel":
        if not isinstance(data, dict):
            raise SchemaError("morphism payload must be an object")
        try:
            n, d = int(data["n"]), int(data["d"])
            raw_forms = data["forms"]
        except (KeyError, TypeError, ValueError) as exc:
            raise SchemaError("morphism payload needs integer 'n', 'd' and a 'forms' array") from exc
        if not isinstance(raw_forms, list) or len(raw_forms) != n + 1:
            raise SchemaError(f"'forms' must list exactly {n + 1} forms")
        forms = []
        for raw in raw_forms:
            if not isinstance(raw, list):
                raise SchemaError("each form must be an array of [multiindex, coefficient] pairs")
            terms = {}
            for entry in raw:
                if not (isinstance(entry, list) and len(entry) == 2):
                    raise SchemaError("form entries must be [\"i0,...,in\", \"a/b\"] pairs")
                key_s, val_s = entry
                try:
                    exps = tuple(int(t) for t in str(key_s).split(","))
                except ValueError as exc:
                    raise SchemaError(f"bad multi-index {key_s!r}") from exc
                if len(exps) != n + 1 or any(e < 0 for e in exps) or sum(exps) != d:
                    raise SchemaError(f"multi-index {key_s!r} does not have weight {d} in {n + 1} variables")
                if exps in terms:
                    raise SchemaError(f"duplicate multi-index {key_s!r}")
                try:
                    terms[exps] = rational_from_string(str(val_s))
                except InvalidArgumentError as exc:
                    raise SchemaError(str(exc)) from exc
            forms.append(HomogeneousForm.from_dict(n, d, terms))
        try:
            return cls(n, d, tuple(forms))
        except InvalidArgumentError as exc:
            raise SchemaError(str(exc)) from exc


@dataclass(frozen=True, slots=True)
class LinearMap:
    """An element of PGL_{n+1}(Q), represented by an invertible matrix."""

    n: int
    matrix: tuple[tuple, ...]

    def __post_init__(self):
        if len(self.matrix) != self.n + 1 or any(len(row) != self.n + 1 for row in self.matrix):
            raise InvalidArgumentError("matrix shape must be (n+1) x (n+1)")
        if _matrix.det_exact([list(r) for r in self.matrix]) == 0:
            raise InvalidArgumentError("linear map must be invertible")

    @classmethod
    def from_rows(cls, rows) -> "LinearMap":
        rows = tuple(tuple(Fraction(x) for x in row) for row in rows)
        return cls(len(rows) - 1, rows)

    @classmethod
    def identity(cls, n: int) -> "LinearMap":
        return cls.from_rows(_matrix.identity(n + 1))

    def det(self) -> Fraction:
        return _matrix.det_exact([list(r) for r in self.matrix])

    def adjugate_rows(self) -> list[list]:
        return _matrix.mat_adjugate([list(r) for r in self.matrix])

    def inverse(self) -> "LinearMap":
        return LinearMap.from_rows(_matrix.mat_inverse([list(r) for r in self.matrix]))

    def compose(self, other: "LinearMap") -> "LinearMap":
        """Matrix product self * other (apply other first as a substitution)."""
        return LinearMap.from_rows(_matrix.mat_mul([list(r) for r in self.matrix], [list(r) for r in other.matrix]))

    def apply(self, point):
        return tuple(sum(row[j] * point[j] for j in range(self.n + 1)) for row in self.matrix)

    def to_json(self) -> list[list[str]]:
        return [[rational_to_string(x) for x in row] for row in self.matrix]


def normalize_primitive(model: MorphismModel) -> MorphismModel:
    """Canonical integral representative: coefficient gcd 1, first nonzero > 0."""
    coeffs = [Fraction(c) for c in model.all_coeffs()]
    lcm = 1
    for c in coeffs:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    ints = [int(c * lcm) for c in coeffs]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    first = next(v for v in ints if v != 0)
    lam = Fraction(lcm, g if first > 0 else -g)
    return model.scale(lam)


def min_coeff_valuation(model: MorphismModel, p: int) -> int:
    """Minimum of ord_p over all coefficients of all forms (zeros skipped)."""
    best = None
    for c in model.all_coeffs():
        if c == 0:
            continue
        v = valuation(c, p)
        if best is None or v < best:
            best = v
    return best


# --- substitution machinery ---------------------------------------------------


def _poly_mul(a: dict, b: dict) -> dict:
    out: dict = {}
    for ea, ca in a.items():
        for eb, cb in b.items():
            key = tuple(x + y for x, y in zip(ea, eb))
            out[key] = out.get(key, 0) + ca * cb
    return out


def _linear_form_dict(row, nvars: int) -> dict:
    return {tuple(1 if j == k else 0 for j in range(nvars)): row[k] for k in range(nvars) if row[k] != 0}


def substitute_linear(form: HomogeneousForm, rows) -> HomogeneousForm:
    """The form F(M x) for a matrix M given as rows; exact expansion."""
    nvars = form.n + 1
    linear = [_linear_form_dict(rows[j], nvars) for j in range(nvars)]
    power_cache: list[dict[int, dict]] = [{0: {tuple([0] * nvars): 1}} for _ in range(nvars)]

    def power(j: int, e: int) -> dict:
        cache = power_cache[j]
        if e not in cache:
            cache[e] = _poly_mul(power(j, e - 1), linear[j])
        return cache[e]

    acc: dict = {}
    for exps, c in zip(monomials(form.n, form.d), form.coeffs):
        if c == 0:
            continue
        term = {tuple([0] * nvars): c}
        for j, e in enumerate(exps):
            if e:
                term = _poly_mul(term, power(j, e))
        for key, val in term.items():
            acc[key] = acc.get(key, 0) + val
    idx = monomial_index(form.n, form.d)
    coeffs = [0] * len(idx)
    for key, val in acc.items():
        coeffs[idx[key]] = val
    # stays in int when both form and matrix are integral
    return HomogeneousForm(form.n, form.d, tuple(coeffs))


def conjugate_integer_rows(coeff_rows, n: int, d: int, fmat) -> list[list[int]]:
    """Conjugation on raw integer coefficient rows by an integer matrix.

    Same projective point as conjugate(); avoids Fraction overhead in search
    loops.
    """
    forms = [HomogeneousForm(n, d, tuple(rc)) for rc in coeff_rows]
    subbed = [substitute_linear(f, fmat) for f in forms]
    adj = _matrix.mat_adjugate_int([list(r) for r in fmat])
    out = []
    for i in range(n + 1):
        acc = [0] * len(subbed[0].coeffs)
        for j in range(n + 1):
            a = adj[i][j]
            if a == 0:
                continue
            for t, c in enumerate(subbed[j].coeffs):
                if c:
                    acc[t] += a * c
        out.append(acc)
    return out


def canonical_integer_rows(coeff_rows) -> tuple[int, ...]:
    """Flatten rows to the primitive, sign-normalized integer tuple."""
    flat = [int(c) for row in coeff_rows for c in row]
    g = 0
    for v in flat:
        g = math.gcd(g, v)
    first = next(v for v in flat if v)
    if first < 0:
        g = -g
    return tuple(v // g for v in flat)


def conjugate(model: MorphismModel, f: LinearMap) -> MorphismModel:
    """The conjugate f^(-1) o model o f, computed with adj(f) to stay polynomial."""
    if f.n != model.n:
        raise InvalidArgumentError("dimension mismatch between morphism and linear map")
    rows = [list(r) for r in f.matrix]
    substituted = [substitute_linear(form, rows) for form in model.forms]
    adj = f.adjugate_rows()
    nvars = model.n + 1
    out_forms = []
    for i in range(nvars):
        coeffs = [Fraction(0)] * len(substituted[0].coeffs)
        for j in range(nvars):
            a = adj[i][j]
            if a == 0:
                continue
            for t, c in enumerate(substituted[j].coeffs):
                if c != 0:
                    coeffs[t] += a * c
        out_forms.append(HomogeneousForm(model.n, model.d, tuple(coeffs)))
    return MorphismModel(model.n, model.d, tuple(out_forms))


def evaluate(model: MorphismModel, point) -> tuple:
    """Apply the model to a projective point given by homogeneous coordinates."""
    point = tuple(Fraction(x) for x in point)
    if len(point) != model.n + 1:
        raise InvalidArgumentError("point has wrong number of coordinates")
    if all(x == 0 for x in point):
        raise InvalidArgumentError("the zero tuple is not a projective point")
    image = tuple(f.evaluate(point) for f in model.forms)
    if all(x == 0 for x in image):
        raise IndeterminatePointError(f"all forms vanish at {point}; the map is undefined there")
    return image


def max_abs_coefficient(model: MorphismModel) -> int:
    """Largest |coefficient| of the primitive model (multiplicative height)."""
    prim = normalize_primitive(model)
    return max(abs(int(c)) for c in prim.all_coeffs())


def coefficient_height(model: MorphismModel) -> float:
    """log max |a_I| on the primitive model; scaling-invariant."""
    return math.log(max_abs_coefficient(model))
