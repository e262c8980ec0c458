"""Random exact multivectors for identity testing and formula search.

Coefficients are drawn with numerators uniform in [-99, 99] and denominators
uniform in [1, 9]; at that density a degree-8 polynomial identity over 64
variables that holds on a handful of independent samples holds identically
with overwhelming probability.
"""

from __future__ import annotations

from fractions import Fraction
from random import Random
from typing import Iterable

from .algebra import Multivector, Signature, canonical_order

NUMERATOR_BOUND = 99
DENOMINATOR_BOUND = 9


def random_fraction(rng: Random, numerator_bound: int = NUMERATOR_BOUND,
                    denominator_bound: int = DENOMINATOR_BOUND) -> Fraction:
    return Fraction(rng.randint(-numerator_bound, numerator_bound),
                    rng.randint(1, denominator_bound))


def random_multivector(sig: Signature, rng: Random, **bounds) -> Multivector:
    return Multivector(sig, tuple(random_fraction(rng, **bounds)
                                  for _ in range(sig.dim)))


def random_graded_multivector(sig: Signature, rng: Random,
                              grades: Iterable[int], **bounds) -> Multivector:
    """Random multivector supported on the given grades only."""
    wanted = frozenset(grades)
    order = canonical_order(sig.n)
    coeffs = [random_fraction(rng, **bounds) if order.grades[i] in wanted else Fraction(0)
              for i in range(sig.dim)]
    return Multivector(sig, tuple(coeffs))


def random_even_multivector(sig: Signature, rng: Random, **bounds) -> Multivector:
    return random_graded_multivector(sig, rng, range(0, sig.n + 1, 2), **bounds)


def random_span_multivector(sig: Signature, rng: Random,
                            blade_masks: Iterable[int], **bounds) -> Multivector:
    """Random element of the span of the given basis blades (bitmasks)."""
    order = canonical_order(sig.n)
    coeffs = [Fraction(0)] * sig.dim
    for mask in blade_masks:
        coeffs[order.blade_to_index[mask]] = random_fraction(rng, **bounds)
    return Multivector(sig, tuple(coeffs))
