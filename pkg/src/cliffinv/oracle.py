"""Formula-independent ground truth via the left-regular matrix representation.

left_matrix(A) is the 2**n x 2**n rational matrix of X -> A*X in the
canonical blade basis; it is a faithful algebra homomorphism for every
signature, so invertibility, determinants and inverses of multivectors
reduce to exact linear algebra.  Elimination is fraction-free (Bareiss'
division-exact schema) over gmpy2 integers to keep intermediate sizes and
running time under control at dimension 64; pivoting picks the first
nonzero entry in column order, so results are deterministic.

The determinant of the left-regular representation is a fixed power of the
grade-negation determinant norm (the power is 2**n divided by the number of
multivector factors in the dimension-n norm); the sign of that relation is
measured per signature rather than assumed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from random import Random
from typing import Optional

from gmpy2 import mpz

from .algebra import Multivector, Signature, canonical_order, gp
from .errors import NonInvertibleError

#: Number of multivector factors in the determinant norm per dimension.
NORM_FACTOR_COUNT = {0: 1, 1: 2, 2: 2, 3: 4, 4: 4, 5: 8, 6: 8}


@dataclass(frozen=True)
class ExactMatrix:
    """Dense exact rational matrix."""

    dim: int
    rows: tuple  # tuple of tuples of Fraction

    @classmethod
    def identity(cls, dim: int) -> "ExactMatrix":
        return cls(dim, tuple(tuple(Fraction(int(i == j)) for j in range(dim))
                              for i in range(dim)))

    def __matmul__(self, other: "ExactMatrix") -> "ExactMatrix":
        if self.dim != other.dim:
            raise ValueError("dimension mismatch")
        cols = list(zip(*other.rows))
        return ExactMatrix(self.dim, tuple(
            tuple(sum(a * b for a, b in zip(row, col)) for col in cols)
            for row in self.rows))


def left_matrix(a: Multivector) -> ExactMatrix:
    """Matrix of X -> a*X; column j holds the coefficients of a * blade_j."""
    sig = a.sig
    dim = sig.dim
    cols = []
    for j in range(dim):
        coeffs = [Fraction(0)] * dim
        coeffs[j] = Fraction(1)
        cols.append(gp(a, Multivector(sig, tuple(coeffs))).coeffs)
    return ExactMatrix(dim, tuple(tuple(cols[j][i] for j in range(dim))
                                  for i in range(dim)))


def _integer_rows(matrix: ExactMatrix):
    """Clear denominators row by row; returns (mpz rows, per-row scales)."""
    rows = []
    scales = []
    for row in matrix.rows:
        den = math.lcm(*(c.denominator for c in row))
        scales.append(den)
        rows.append([mpz(c.numerator * (den // c.denominator)) for c in row])
    return rows, scales


def _bareiss_forward(rows, rhs=None):
    """In-place fraction-free elimination to upper-triangular form.

    Returns (sign, singular): `sign` accounts for row swaps, `singular` is
    True when some pivot column is entirely zero.  After a non-singular run,
    rows[i][i] is the i-th leading principal minor (times the swap sign
    pattern), and rows[n-1][n-1] is the determinant of the integer matrix.
    """
    n = len(rows)
    sign = 1
    prev = mpz(1)
    for k in range(n - 1):
        if not rows[k][k]:
            for i in range(k + 1, n):
                if rows[i][k]:
                    rows[k], rows[i] = rows[i], rows[k]
                    if rhs is not None:
                        rhs[k], rhs[i] = rhs[i], rhs[k]
                    sign = -sign
                    break
            else:
                return sign, True
        pivot = rows[k][k]
        for i in range(k + 1, n):
            head = rows[i][k]
            row_i = rows[i]
            row_k = rows[k]
            for j in range(k + 1, n):
                row_i[j] = (pivot * row_i[j] - head * row_k[j]) // prev
            row_i[k] = mpz(0)
            if rhs is not None:
                rhs[i] = (pivot * rhs[i] - head * rhs[k]) // prev
        prev = pivot
    if not rows[n - 1][n - 1]:
        return sign, True
    return sign, False


def oracle_det(a: Multivector) -> Fraction:
    """Exact determinant of the left-regular representation of `a`."""
    matrix = left_matrix(a)
    rows, scales = _integer_rows(matrix)
    n = len(rows)
    scale = math.prod(scales)
    if n == 1:
        return Fraction(int(rows[0][0]), scale)
    sign, singular = _bareiss_forward(rows)
    if singular:
        return Fraction(0)
    return Fraction(sign * int(rows[n - 1][n - 1]), scale)


def oracle_inverse(a: Multivector) -> Multivector:
    """Inverse of `a` by exact linear solve of left_matrix(a) @ x = 1.

    Raises NonInvertibleError when the matrix is singular, which happens
    exactly when the determinant norm is zero.
    """
    sig = a.sig
    matrix = left_matrix(a)
    rows, scales = _integer_rows(matrix)
    n = len(rows)
    # Solving (D*M) x = D*b with the per-row scales D leaves x unchanged.
    rhs = [mpz(0)] * n
    rhs[0] = mpz(scales[0])
    if n == 1:
        if not rows[0][0]:
            raise NonInvertibleError("zero scalar has no inverse", determinant=Fraction(0))
        return Multivector(sig, (Fraction(int(rhs[0]), int(rows[0][0])),))
    sign, singular = _bareiss_forward(rows, rhs)
    if singular:
        raise NonInvertibleError(
            f"multivector of {sig} has a singular matrix representation",
            determinant=Fraction(0))
    solution = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        acc = Fraction(int(rhs[i]))
        row = rows[i]
        for j in range(i + 1, n):
            if row[j]:
                acc -= Fraction(int(row[j])) * solution[j]
        solution[i] = acc / int(row[i])
    return Multivector(sig, tuple(solution))


def oracle_is_invertible(a: Multivector) -> bool:
    try:
        oracle_inverse(a)
        return True
    except NonInvertibleError:
        return False


@dataclass(frozen=True)
class DetRelation:
    """Measured relation oracle_det = sign * det_norm ** exponent."""

    sig: Signature
    exponent: int
    sign: int


def measure_det_relation(sig: Signature, det_norm_fn, rng: Optional[Random] = None,
                         samples: int = 3) -> DetRelation:
    """Empirically fix the sign in |oracle_det| = |det_norm| ** k for one
    signature, sampling random invertible multivectors.

    `det_norm_fn` maps a multivector to its exact determinant norm; the
    exponent k = 2**n / (factor count of the dimension-n norm) is structural.
    """
    from .sampling import random_multivector

    rng = rng or Random(0)
    exponent = sig.dim // NORM_FACTOR_COUNT[sig.n]
    sign = 0
    seen = 0
    while seen < samples:
        a = random_multivector(sig, rng)
        norm = det_norm_fn(a)
        if not norm:
            continue
        det = oracle_det(a)
        power = norm ** exponent
        if det != power and det != -power:
            raise ArithmeticError(
                f"left-regular determinant of {sig} is not +/- det_norm^{exponent}")
        observed = 1 if det == power else -1
        if sign and observed != sign:
            raise ArithmeticError(f"determinant sign not constant over {sig}")
        sign = observed
        seen += 1
    return DetRelation(sig, exponent, sign)
