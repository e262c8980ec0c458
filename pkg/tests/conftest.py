"""Shared fixtures: the five worked numeric examples and sampling helpers."""

from __future__ import annotations

from fractions import Fraction
from random import Random

import pytest

from cliffinv import Multivector, Signature, parse


def signatures_of_dimension(n):
    return [Signature(p, n - p) for p in range(n, -1, -1)]


def all_signatures(max_n=6):
    return [sig for n in range(max_n + 1) for sig in signatures_of_dimension(n)]


def mv(p, q, text):
    return parse(Signature(p, q), text)


# The five worked inversion examples (exact fixtures).

EX1_SIG = (4, 1)
EX1_A = "3+e2+e5-e12-e15+3 e125"
EX1_HPRIME = "18+18 e125"

EX2_SIG = (5, 0)
EX2_A = "1+2 e1+3 e23+4 e2345"
EX2_H = "30+4 e1+8 e2345+16 e12345"
EX2_HH15 = "692+352 e2345"
EX2_DET = 354960
EX2_INVERSE_NUM = "3576+96 e1-53832 e23-15072 e45-8592 e123-28992 e145+47424 e2345-8256 e12345"
EX2_HH45 = "596-16 e1"
EX2_HH45H15 = "17944-2864 e1+5024 e2345-9664 e12345"

EX3_SIG = (4, 2)
EX3_A = "2+e1+e5-2 e15+3 e26+3 e1256"
EX3_H = "8 e1+8 e5"
EX3_APRIME = "1+2 e1+3 e126"
EX3_HPRIME = "-4+4 e1"
EX3_HPRIME_SQ = "32-32 e1"

EX4_SIG = (1, 5)
EX4_A = "2+e1+4 e3+e15+3 e126"
EX4_H = "-3+4 e1+16 e3-2 e5-24 e1236"
EX4_HH = "-811-24 e1-96 e3+12 e5+144 e1236-96 e12356"
EX4_TERM1_TRIPLE = "678025+27648 e5+2304 e1236+18432 e1256-4608 e2356+3456 e12356"
EX4_STEP4 = "-811+24 e1+96 e3-12 e5+144 e1236-96 e12356"
EX4_STEP5 = ("-2487-3316 e1-13264 e3-646 e5+19704 e1236-1536 e1256"
             "+384 e2356+864 e12356")
EX4_TERM2_DOUBLE = "678025-13824 e5-1152 e1236-9216 e1256+2304 e2356-1728 e12356"
EX4_DET = 678025
EX4_INVERSE_NUM = ("44766-9765 e1-95588 e3+1841 e15+8412 e26-1720 e35-71355 e126"
                   "-12112 e135+19416 e236-6162 e1256+20760 e2356-5184 e12356")

EX5_SIG = (2, 2)
EX5_A = "45+55 e1+84 e12+39 e134+93 e234+15 e1234"
EX5_H = "22501+7740 e1-10410 e2-8880 e1234"
EX5_HH = "753425101+348315480 e1-468470820 e2-399617760 e1234"
EX5_H4H4 = "753425101+348315480 e1-468470820 e2+399617760 e1234"
EX5_DET6 = 67166445910339801
EX5_DET4 = 259164901
EX5_STEP7 = ("17494408312203-6017809001220 e1+8093719858230 e2"
             "+6904152962640 e1234")
EX5_INVERSE_NUM4 = ("720045-811025 e1+164610 e2-1317534 e12+79650 e34"
                    "-721389 e134-1488093 e234-388695 e1234")


def singular_witness(sig):
    """A non-invertible multivector of the signature: 1 + t for a basis blade
    t with t**2 = +1 when one exists, else the zero multivector (the three
    division algebras have no other singular elements)."""
    from cliffinv import blade_grade, blade_mul, canonical_order

    for mask in range(1, sig.dim):
        if blade_mul(sig, mask, mask)[0] == 1:
            order = canonical_order(sig.n)
            coeffs = [Fraction(0)] * sig.dim
            coeffs[0] = Fraction(1)
            coeffs[order.blade_to_index[mask]] = Fraction(1)
            return Multivector(sig, tuple(coeffs))
    return Multivector.zero(sig)


@pytest.fixture(scope="session")
def rng():
    return Random(20250809)
