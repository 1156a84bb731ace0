"""Internal exact linear algebra on small dense matrices.

Matrices are lists of lists (rows) of ints or Fractions.  Two determinant
kernels are provided: fraction-free Bareiss elimination, and a multimodular
route (determinants mod word-sized primes, CRT-combined under a Hadamard
bound with balanced sign lift).
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import InvalidArgumentError


def identity(n: int):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def mat_mul(a, b):
    n, k, m = len(a), len(b), len(b[0])
    out = [[0] * m for _ in range(n)]
    for i in range(n):
        ai = a[i]
        oi = out[i]
        for t in range(k):
            x = ai[t]
            if x == 0:
                continue
            bt = b[t]
            for j in range(m):
                oi[j] += x * bt[j]
    return out


def mat_scale(a, s):
    return [[x * s for x in row] for row in a]


def _require_square(m, allow_empty: bool = False):
    n = len(m)
    if n == 0 and not allow_empty:
        raise InvalidArgumentError("matrix must be non-empty")
    if any(len(row) != n for row in m):
        raise InvalidArgumentError("matrix must be square")
    return n


def det_bareiss_int(matrix: list[list[int]]) -> int:
    """Fraction-free Gaussian elimination; exact over Z."""
    m = [row[:] for row in matrix]
    n = len(m)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        # pivot search down column k
        if m[k][k] == 0:
            for i in range(k + 1, n):
                if m[i][k] != 0:
                    m[k], m[i] = m[i], m[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = m[k][k]
        for i in range(k + 1, n):
            mi, mk = m[i], m[k]
            lead = mi[k]
            for j in range(k + 1, n):
                mi[j] = (pivot * mi[j] - lead * mk[j]) // prev
            mi[k] = 0
        prev = pivot
    return sign * m[n - 1][n - 1]


def _integer_scaled(matrix):
    """Row-scale a Fraction matrix to integers; returns (int_matrix, scale).

    det(original) = det(int_matrix) / scale.
    """
    rows = []
    scale = 1
    for row in matrix:
        frow = [Fraction(x) for x in row]
        lcm = 1
        for x in frow:
            lcm = lcm * x.denominator // math.gcd(lcm, x.denominator)
        rows.append([int(x * lcm) for x in frow])
        scale *= lcm
    return rows, scale


def hadamard_bound(matrix: list[list[int]]) -> int:
    """An integer H with |det| <= H (row-norm Hadamard product)."""
    bound_sq = 1
    for row in matrix:
        s = sum(x * x for x in row)
        if s == 0:
            return 0
        bound_sq *= s
    return math.isqrt(bound_sq) + 1


_CRT_PRIMES: list[int] = []


def _crt_primes(need_product: int) -> list[int]:
    """Enough primes just below 2**62 so their product exceeds need_product."""
    from .exact_arithmetic import is_prime

    primes = _CRT_PRIMES
    prod = 1
    for p in primes:
        prod *= p
    candidate = primes[-1] - 1 if primes else (1 << 62) - 1
    while prod <= need_product:
        while not is_prime(candidate):
            candidate -= 1
        primes.append(candidate)
        prod *= candidate
        candidate -= 1
    out = []
    prod = 1
    for p in primes:
        out.append(p)
        prod *= p
        if prod > need_product:
            break
    return out


def det_mod_p(matrix: list[list[int]], p: int) -> int:
    m = [[x % p for x in row] for row in matrix]
    n = len(m)
    det = 1
    for k in range(n):
        pivot_row = None
        for i in range(k, n):
            if m[i][k] % p:
                pivot_row = i
                break
        if pivot_row is None:
            return 0
        if pivot_row != k:
            m[k], m[pivot_row] = m[pivot_row], m[k]
            det = -det
        pivot = m[k][k]
        det = det * pivot % p
        inv = pow(pivot, p - 2, p)
        for i in range(k + 1, n):
            lead = m[i][k]
            if lead == 0:
                continue
            factor = lead * inv % p
            mi, mk = m[i], m[k]
            for j in range(k, n):
                mi[j] = (mi[j] - factor * mk[j]) % p
    return det % p


def det_modular_crt_int(matrix: list[list[int]]) -> int:
    """Exact integer determinant by CRT over word-sized primes.

    The prime set is sized by the Hadamard bound, so the balanced lift is
    guaranteed correct with no probabilistic assumption.
    """
    n = len(matrix)
    if n == 0:
        return 1
    bound = hadamard_bound(matrix)
    if bound == 0:
        return 0
    primes = _crt_primes(2 * bound)
    residue = 0
    modulus = 1
    for p in primes:
        r = det_mod_p(matrix, p)
        # incremental CRT
        if modulus == 1:
            residue, modulus = r, p
        else:
            inv = pow(modulus % p, p - 2, p)
            t = (r - residue) * inv % p
            residue += modulus * t
            modulus *= p
    if residue > modulus // 2:
        residue -= modulus
    return residue


def det_exact(matrix, backend: str = "bareiss") -> Fraction:
    """Exact determinant of an int/Fraction matrix; the empty matrix has det 1."""
    _require_square(matrix, allow_empty=True)
    if not matrix:
        return Fraction(1)
    scaled, scale = _integer_scaled(matrix)
    if backend == "bareiss":
        d = det_bareiss_int(scaled)
    elif backend == "modular_crt":
        d = det_modular_crt_int(scaled)
    else:
        raise InvalidArgumentError(f"unknown determinant backend {backend!r}")
    return Fraction(d, scale)


def mat_minor(matrix, i: int, j: int):
    return [[row[c] for c in range(len(row)) if c != j] for r, row in enumerate(matrix) if r != i]


def mat_adjugate(matrix):
    """Adjugate (transposed cofactor matrix); adj(M) * M = det(M) * I."""
    n = _require_square(matrix)
    if n == 1:
        return [[1]]
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            cof = det_exact(mat_minor(matrix, i, j))
            if (i + j) % 2:
                cof = -cof
            adj[j][i] = cof
    return adj


def mat_adjugate_int(matrix: list[list[int]]) -> list[list[int]]:
    """Adjugate of an integer matrix, staying in Z."""
    n = _require_square(matrix)
    if n == 1:
        return [[1]]
    adj = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            cof = det_bareiss_int(mat_minor(matrix, i, j))
            if (i + j) % 2:
                cof = -cof
            adj[j][i] = cof
    return adj


def mat_inverse(matrix):
    """Exact inverse over Q (Gauss-Jordan); raises on a singular input."""
    n = _require_square(matrix)
    a = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(matrix)]
    for k in range(n):
        pivot_row = next((i for i in range(k, n) if a[i][k] != 0), None)
        if pivot_row is None:
            raise InvalidArgumentError("matrix is singular")
        a[k], a[pivot_row] = a[pivot_row], a[k]
        pivot = a[k][k]
        a[k] = [x / pivot for x in a[k]]
        for i in range(n):
            if i != k and a[i][k] != 0:
                lead = a[i][k]
                a[i] = [x - lead * y for x, y in zip(a[i], a[k])]
    return [row[n:] for row in a]


def mat_trace(matrix):
    return sum(matrix[i][i] for i in range(len(matrix)))
