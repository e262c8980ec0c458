"""Determinant norms, multivector inverses and even-subalgebra inverses.

The engine evaluates catalog formulas exactly.  A determinant-norm formula
must produce a pure scalar on every input; any nonscalar residue signals a
mis-encoded catalog entry (CatalogDefectError), never bad user input.  A
formula of dimension m may be applied to any multivector of dimension
n <= m: negations of absent grades are no-ops, and the value it yields is
the dimension-n determinant norm raised to a fixed power.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

from .algebra import Multivector, gp
from .catalog import FormulaCatalog, FormulaEntry, load_catalog
from .errors import (CatalogDefectError, DimensionMismatchError,
                     NonInvertibleError, OddGradePresentError,
                     UnknownFormulaError)
from .exprs import evaluate
from .catalog import TRIPLET_SET_SIZES
from .oracle import NORM_FACTOR_COUNT


def _resolve(a: Multivector, formula: Optional[str],
             catalog: Optional[FormulaCatalog]) -> FormulaEntry:
    cat = catalog or load_catalog()
    entry = cat.default_entry(a.sig.n) if formula is None else cat.entry(formula)
    if entry.dimension < a.sig.n:
        raise DimensionMismatchError(
            f"formula {entry.id} is for dimension {entry.dimension}, "
            f"but the input lives in {a.sig} (n={a.sig.n})")
    return entry


def det_norm(a: Multivector, formula: Optional[str] = None,
             catalog: Optional[FormulaCatalog] = None,
             memo: Optional[dict] = None) -> Fraction:
    """Exact determinant norm of `a`; zero exactly when `a` is not invertible."""
    entry = _resolve(a, formula, catalog)
    value = evaluate(entry.det_expr, a, memo=memo)
    if not value.is_scalar():
        raise CatalogDefectError(
            f"formula {entry.id} left a nonscalar residue on {a.sig}; "
            f"surviving grades {sorted(value.grades_present() - {0})}",
            formula_id=entry.id)
    return value.scalar_part()


def inverse(a: Multivector, formula: Optional[str] = None,
            catalog: Optional[FormulaCatalog] = None) -> Multivector:
    """Exact inverse of `a`: the adjugate evaluation divided by the
    determinant norm.  Satisfies gp(a, inverse(a)) == gp(inverse(a), a) == 1.

    Raises NonInvertibleError (carrying the zero determinant and the formula
    id) when the determinant norm vanishes.
    """
    entry = _resolve(a, formula, catalog)
    memo = {}
    det = det_norm(a, entry.id, catalog, memo=memo)
    if not det:
        raise NonInvertibleError(
            f"multivector of {a.sig} has determinant norm 0 (formula {entry.id})",
            determinant=det, formula_id=entry.id)
    adjugate = evaluate(entry.adjugate_expr, a, memo=memo)
    return adjugate / det


def is_invertible(a: Multivector, formula: Optional[str] = None,
                  catalog: Optional[FormulaCatalog] = None) -> bool:
    return det_norm(a, formula, catalog) != 0


def even_inverse(a: Multivector, v: Optional[Multivector] = None,
                 catalog: Optional[FormulaCatalog] = None) -> Multivector:
    """Inverse of an even multivector by the dedicated even-subalgebra recipe.

    The recipe needs a nonisotropic dummy vector; when `v` is omitted the
    basis vectors e_1, e_2, ... are tried in order (in a diagonal metric all
    of them are nonisotropic).  Raises OddGradePresentError if `a` has odd
    grades, NonInvertibleError if every candidate vector yields a zero
    denominator.
    """
    if any(r % 2 for r in a.grades_present()):
        raise OddGradePresentError(
            f"even_inverse needs an even multivector; got grades "
            f"{sorted(a.grades_present())}")
    n = a.sig.n
    if n <= 1:
        det = a.scalar_part()
        if not det:
            raise NonInvertibleError("zero scalar has no inverse", determinant=det)
        return Multivector.scalar(a.sig, 1 / det)

    entry = (catalog or load_catalog()).even_entry(n)
    if v is not None:
        candidates = [v]
        if v.grades_present() - {1}:
            raise ValueError("the dummy element must be a pure vector")
        if not gp(v, v).scalar_part():
            raise ValueError("the dummy vector must be nonisotropic")
    else:
        candidates = [Multivector.basis_vector(a.sig, i) for i in range(1, n + 1)]

    attempted = []
    for vec in candidates:
        memo = {}
        den = evaluate(entry.denominator, a, v=vec, memo=memo)
        if not den.is_scalar():
            raise CatalogDefectError(
                f"even recipe {entry.id} left a nonscalar denominator",
                formula_id=entry.id)
        if den.scalar_part():
            num = evaluate(entry.numerator, a, v=vec, memo=memo)
            return num / den.scalar_part()
        attempted.append(vec)
    raise NonInvertibleError(
        f"even multivector of {a.sig} is not invertible "
        f"({len(attempted)} dummy vectors tried)",
        determinant=Fraction(0), formula_id=entry.id,
        attempted_vectors=tuple(attempted))


def triplet_formula(first: str, second: str, third: str,
                    catalog: Optional[FormulaCatalog] = None) -> FormulaEntry:
    """The three-term dimension-6 formula assembled from term picks like
    ("S1.1", "S2.2", "S3.4"); picks must come from matching sets in order,
    mixing the S and T families is an error."""
    cat = catalog or load_catalog()
    picks = (first, second, third)
    families = set()
    indices = []
    for position, pick in enumerate(picks, start=1):
        try:
            set_name, index_s = pick.split(".")
            family, set_pos = set_name[0], int(set_name[1:])
            index = int(index_s)
        except (ValueError, IndexError):
            raise ValueError(f"bad triplet term id {pick!r}") from None
        if family not in TRIPLET_SET_SIZES:
            raise ValueError(f"unknown triplet family {family!r}")
        if set_pos != position:
            raise ValueError(
                f"term {pick!r} belongs to slot {set_pos}, not slot {position}")
        if not 1 <= index <= TRIPLET_SET_SIZES[family]:
            raise IndexError(f"triplet index out of range in {pick!r}")
        families.add(family)
        indices.append(index)
    if len(families) != 1:
        raise ValueError(f"cannot mix triplet families: {picks}")
    family = families.pop()
    return cat.entry(f"n6.t.{family}{indices[0]}{indices[1]}{indices[2]}")


def list_formulas(n: int, catalog: Optional[FormulaCatalog] = None):
    """All determinant-norm formulas of dimension n as (id, provenance,
    status) tuples, ordered by id."""
    cat = catalog or load_catalog()
    return [(e.id, e.provenance, e.status) for e in cat.entries_for_dimension(n)]
