"""Exact Clifford-algebra substrate: signatures, blades, canonical ordering,
geometric product, grade operations and the standard involutions.

A multivector of Cl(p,q) is a dense array of 2**n exact rational
coefficients (n = p+q <= 6) in canonical order: grades ascending, blades of
equal grade ordered lexicographically by their basis-vector indices.  For
n = 2 the order is [1, e1, e2, e12]; the grade-r block starts at
sum(C(n,k) for k < r) and has C(n,r) entries.

Blades are bitmasks (bit i-1 set iff e_i participates), multiplied by XOR
with a sign from reordering parity and the metric squares of contracted
vectors.  All values are immutable and every operation is pure, so objects
can be shared freely between threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache, reduce
from typing import Iterable, Sequence, Union

from .errors import SignatureMismatchError

MAX_DIM = 6

Rational = Union[int, Fraction]

REVERSE_GRADES = frozenset(r for r in range(MAX_DIM + 1) if r % 4 in (2, 3))
GRADE_INVOLUTION_GRADES = frozenset(r for r in range(MAX_DIM + 1) if r % 2 == 1)
CLIFFORD_CONJUGATE_GRADES = frozenset(r for r in range(MAX_DIM + 1) if r % 4 in (1, 2))

INVOLUTION_GRADES = {
    "reverse": REVERSE_GRADES,
    "grade_involution": GRADE_INVOLUTION_GRADES,
    "clifford_conjugate": CLIFFORD_CONJUGATE_GRADES,
}


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value)
    raise TypeError(
        f"exact rational coefficient required, got {type(value).__name__}"
    )


@dataclass(frozen=True, order=True)
class Signature:
    """Diagonal metric of Cl(p,q): e_i**2 = +1 for i <= p, -1 for p < i <= n."""

    p: int
    q: int

    def __post_init__(self):
        if self.p < 0 or self.q < 0:
            raise ValueError(f"signature counts must be non-negative, got ({self.p}, {self.q})")
        if self.p + self.q > MAX_DIM:
            raise ValueError(
                f"Cl({self.p},{self.q}) exceeds the engine limit p+q <= {MAX_DIM}"
            )

    @property
    def n(self) -> int:
        return self.p + self.q

    @property
    def dim(self) -> int:
        return 1 << (self.p + self.q)

    def vector_square(self, i: int) -> int:
        """Metric square of the basis vector e_i (1-based index)."""
        if not 1 <= i <= self.n:
            raise ValueError(f"basis index {i} out of range 1..{self.n}")
        return 1 if i <= self.p else -1

    def __repr__(self):
        return f"Cl({self.p},{self.q})"


def blade_grade(bits: int) -> int:
    """Number of basis vectors in a blade bitmask."""
    return bits.bit_count()


def blade_indices(bits: int) -> tuple:
    """1-based basis-vector indices of a blade, ascending."""
    out = []
    i = 1
    while bits:
        if bits & 1:
            out.append(i)
        bits >>= 1
        i += 1
    return tuple(out)


def mask_from_indices(indices: Iterable[int]):
    """Bitmask and reordering sign of an index sequence (indices distinct,
    any order; the sign is the parity of the permutation sorting them)."""
    seq = list(indices)
    mask = 0
    for i in seq:
        bit = 1 << (i - 1)
        if mask & bit:
            raise ValueError(f"duplicate basis index {i}")
        mask |= bit
    inversions = 0
    for a in range(len(seq)):
        for b in range(a + 1, len(seq)):
            if seq[a] > seq[b]:
                inversions += 1
    return (-1 if inversions & 1 else 1), mask


def _reordering_sign(a: int, b: int) -> int:
    # For each vector of `a`, count vectors of `b` it has to jump over.
    a >>= 1
    swaps = 0
    while a:
        swaps += (a & b).bit_count()
        a >>= 1
    return -1 if swaps & 1 else 1


def blade_mul(sig: Signature, a: int, b: int):
    """Geometric product of two basis blades.

    Returns (sign, result_mask) with result_mask = a XOR b and sign the
    reordering parity times -1 for every contracted index above p.
    """
    if not 0 <= a < sig.dim or not 0 <= b < sig.dim:
        raise ValueError(f"blade mask out of range for {sig}")
    sign = _reordering_sign(a, b)
    negative_contractions = ((a & b) >> sig.p).bit_count()
    if negative_contractions & 1:
        sign = -sign
    return sign, a ^ b


@dataclass(frozen=True)
class CanonicalOrder:
    """Bijection between blade bitmasks and canonical coefficient positions."""

    n: int
    index_to_blade: tuple
    blade_to_index: tuple
    grades: tuple        # grade of the blade at each canonical position
    grade_offsets: tuple  # grade_offsets[r] = first position of the grade-r block

    def grade_slice(self, r: int) -> slice:
        return slice(self.grade_offsets[r], self.grade_offsets[r + 1])


@lru_cache(maxsize=None)
def canonical_order(n: int) -> CanonicalOrder:
    if not 0 <= n <= MAX_DIM:
        raise ValueError(f"dimension {n} out of range 0..{MAX_DIM}")
    masks = sorted(range(1 << n), key=lambda m: (m.bit_count(), blade_indices(m)))
    blade_to_index = [0] * (1 << n)
    for pos, mask in enumerate(masks):
        blade_to_index[mask] = pos
    grades = tuple(m.bit_count() for m in masks)
    offsets = [0] * (n + 2)
    for r in range(n + 1):
        offsets[r + 1] = offsets[r] + math.comb(n, r)
    return CanonicalOrder(n, tuple(masks), tuple(blade_to_index), grades, tuple(offsets))


@lru_cache(maxsize=None)
def _product_table(sig: Signature):
    """Per-signature Cayley table in canonical positions: (targets, signs)."""
    order = canonical_order(sig.n)
    dim = sig.dim
    targets = []
    signs = []
    for i in range(dim):
        bi = order.index_to_blade[i]
        trow = [0] * dim
        srow = [0] * dim
        for j in range(dim):
            s, mask = blade_mul(sig, bi, order.index_to_blade[j])
            trow[j] = order.blade_to_index[mask]
            srow[j] = s
        targets.append(trow)
        signs.append(srow)
    return targets, signs


@dataclass(frozen=True)
class Multivector:
    """Immutable dense multivector with exact rational coefficients."""

    sig: Signature
    coeffs: tuple

    def __post_init__(self):
        coeffs = tuple(_as_fraction(c) for c in self.coeffs)
        if len(coeffs) != self.sig.dim:
            raise ValueError(
                f"{self.sig} needs {self.sig.dim} coefficients, got {len(coeffs)}"
            )
        object.__setattr__(self, "coeffs", coeffs)

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, sig: Signature) -> "Multivector":
        return cls(sig, (Fraction(0),) * sig.dim)

    @classmethod
    def scalar(cls, sig: Signature, value) -> "Multivector":
        coeffs = [Fraction(0)] * sig.dim
        coeffs[0] = _as_fraction(value)
        return cls(sig, tuple(coeffs))

    @classmethod
    def basis_vector(cls, sig: Signature, i: int) -> "Multivector":
        if not 1 <= i <= sig.n:
            raise ValueError(f"basis index {i} out of range 1..{sig.n}")
        return cls.blade(sig, (i,))

    @classmethod
    def blade(cls, sig: Signature, indices: Iterable[int], coefficient=1) -> "Multivector":
        """Multivector with a single blade term; permuted indices contribute
        their reordering sign."""
        sign, mask = mask_from_indices(indices)
        order = canonical_order(sig.n)
        if mask >= sig.dim:
            raise ValueError(f"blade {indices} does not exist in {sig}")
        coeffs = [Fraction(0)] * sig.dim
        coeffs[order.blade_to_index[mask]] = sign * _as_fraction(coefficient)
        return cls(sig, tuple(coeffs))

    # -- inspection --------------------------------------------------------

    @property
    def order(self) -> CanonicalOrder:
        return canonical_order(self.sig.n)

    def coefficient(self, indices: Iterable[int]) -> Fraction:
        """Coefficient of the blade with the given (sorted) indices."""
        sign, mask = mask_from_indices(indices)
        return sign * self.coeffs[self.order.blade_to_index[mask]]

    def scalar_part(self) -> Fraction:
        return self.coeffs[0]

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def is_scalar(self) -> bool:
        return not any(self.coeffs[1:])

    def grades_present(self) -> frozenset:
        grades = self.order.grades
        return frozenset(grades[i] for i, c in enumerate(self.coeffs) if c)

    def float_coeffs(self) -> tuple:
        """Double-precision snapshot for benchmarking; never used in
        correctness paths."""
        return tuple(float(c) for c in self.coeffs)

    # -- grade operations ----------------------------------------------------

    def grade_part(self, r: int) -> "Multivector":
        return grade_part(self, r)

    def negate_grades(self, grades: Iterable[int]) -> "Multivector":
        return grade_negate(self, grades)

    def reverse(self) -> "Multivector":
        return involution(self, "reverse")

    def grade_involution(self) -> "Multivector":
        return involution(self, "grade_involution")

    def clifford_conjugate(self) -> "Multivector":
        return involution(self, "clifford_conjugate")

    # -- arithmetic ----------------------------------------------------------

    def _require_same_sig(self, other: "Multivector"):
        if self.sig != other.sig:
            raise SignatureMismatchError(f"{self.sig} != {other.sig}")

    def __add__(self, other):
        if not isinstance(other, Multivector):
            return NotImplemented
        self._require_same_sig(other)
        return Multivector(self.sig, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other):
        if not isinstance(other, Multivector):
            return NotImplemented
        self._require_same_sig(other)
        return Multivector(self.sig, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self):
        return Multivector(self.sig, tuple(-c for c in self.coeffs))

    def __mul__(self, other):
        if isinstance(other, Multivector):
            return gp(self, other)
        if isinstance(other, (int, Fraction)):
            w = _as_fraction(other)
            return Multivector(self.sig, tuple(w * c for c in self.coeffs))
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.__mul__(other)
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            w = _as_fraction(other)
            return Multivector(self.sig, tuple(c / w for c in self.coeffs))
        return NotImplemented

    def __pow__(self, exponent):
        if not isinstance(exponent, int) or exponent < 0:
            return NotImplemented
        result = Multivector.scalar(self.sig, 1)
        for _ in range(exponent):
            result = gp(result, self)
        return result

    def __repr__(self):
        nonzero = [(blade_indices(self.order.index_to_blade[i]), c)
                   for i, c in enumerate(self.coeffs) if c]
        body = " + ".join(f"{c}*e{''.join(map(str, idx))}" if idx else str(c)
                          for idx, c in nonzero) or "0"
        return f"<{self.sig} {body}>"


def gp(a: Multivector, b: Multivector, keep_grades=None) -> Multivector:
    """Geometric product, bilinear over exact rationals.

    `keep_grades`, when given, restricts the output to those grades and skips
    the work for everything else; the result equals the full product with all
    other grades projected out.
    """
    if a.sig != b.sig:
        raise SignatureMismatchError(f"{a.sig} != {b.sig}")
    sig = a.sig
    targets, signs = _product_table(sig)
    da = math.lcm(*(c.denominator for c in a.coeffs))
    db = math.lcm(*(c.denominator for c in b.coeffs))
    na = [c.numerator * (da // c.denominator) for c in a.coeffs]
    nb = [c.numerator * (db // c.denominator) for c in b.coeffs]
    acc = [0] * sig.dim
    if keep_grades is None:
        for i, ai in enumerate(na):
            if not ai:
                continue
            trow = targets[i]
            srow = signs[i]
            for j, bj in enumerate(nb):
                if bj:
                    acc[trow[j]] += srow[j] * ai * bj
    else:
        keep = frozenset(keep_grades)
        grades = canonical_order(sig.n).grades
        wanted = [grades[k] in keep for k in range(sig.dim)]
        for i, ai in enumerate(na):
            if not ai:
                continue
            trow = targets[i]
            srow = signs[i]
            for j, bj in enumerate(nb):
                if bj:
                    k = trow[j]
                    if wanted[k]:
                        acc[k] += srow[j] * ai * bj
    den = da * db
    return Multivector(sig, tuple(Fraction(x, den) for x in acc))


def grade_part(a: Multivector, r: int) -> Multivector:
    """Projection onto grade r; zero everywhere else."""
    order = a.order
    if not 0 <= r <= order.n:
        raise ValueError(f"grade {r} out of range 0..{order.n}")
    coeffs = [Fraction(0)] * a.sig.dim
    block = order.grade_slice(r)
    coeffs[block] = a.coeffs[block]
    return Multivector(a.sig, tuple(coeffs))


def grade_negate(a: Multivector, grades: Iterable[int]) -> Multivector:
    """Flip the sign of every listed grade; grades absent from the algebra
    are ignored."""
    order = a.order
    coeffs = list(a.coeffs)
    for r in frozenset(grades):
        if 0 <= r <= order.n:
            block = order.grade_slice(r)
            coeffs[block] = [-c for c in coeffs[block]]
    return Multivector(a.sig, tuple(coeffs))


def involution(a: Multivector, kind: str) -> Multivector:
    """One of the standard involutions, realized as a grade negation:
    reverse (grades 2,3 mod 4), grade_involution (odd grades),
    clifford_conjugate (grades 1,2 mod 4)."""
    try:
        grades = INVOLUTION_GRADES[kind]
    except KeyError:
        raise ValueError(f"unknown involution {kind!r}") from None
    return grade_negate(a, grades)


def linear_combine(terms: Sequence) -> Multivector:
    """Exact weighted sum of (weight, multivector) pairs."""
    terms = list(terms)
    if not terms:
        raise ValueError("linear_combine needs at least one term")
    sig = terms[0][1].sig
    acc = [Fraction(0)] * sig.dim
    for weight, mv in terms:
        if mv.sig != sig:
            raise SignatureMismatchError(f"{mv.sig} != {sig}")
        w = _as_fraction(weight)
        if not w:
            continue
        for i, c in enumerate(mv.coeffs):
            if c:
                acc[i] += w * c
    return Multivector(sig, tuple(acc))
