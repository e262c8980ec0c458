"""Exact multivector inverses and determinant norms for Clifford algebras
Cl(p,q) with p+q <= 6.

The determinant norm of a multivector A is a real scalar produced by a
geometric product of A with carefully grade-negated copies of itself (a
rational linear combination of two such products at dimension 6); it is
nonzero exactly when A is invertible, and dropping the leading A from the
product gives the adjugate, so A**-1 is the adjugate divided by the norm.
Everything is computed in exact rational arithmetic and cross-checkable
against an independent matrix-representation oracle.
"""

from .algebra import (CanonicalOrder, Multivector, Signature, blade_grade,
                      blade_indices, blade_mul, canonical_order, gp,
                      grade_negate, grade_part, involution, linear_combine)
from .catalog import FormulaCatalog, FormulaEntry, load_catalog
from .engine import (det_norm, even_inverse, inverse, is_invertible,
                     list_formulas, triplet_formula)
from .errors import (CatalogDefectError, CliffInvError, DuplicateIndexError,
                     InfeasibleFitError, MvParseError, NonInvertibleError,
                     OddGradePresentError, SignatureMismatchError,
                     UnknownFormulaError, UnknownIndexError)
from .mvtext import format, from_json, parse, to_json
from .oracle import (ExactMatrix, left_matrix, oracle_det, oracle_inverse,
                     oracle_is_invertible)

__version__ = "0.1.0"

__all__ = [
    "CanonicalOrder", "CatalogDefectError", "CliffInvError",
    "DuplicateIndexError", "ExactMatrix", "FormulaCatalog", "FormulaEntry",
    "InfeasibleFitError", "Multivector", "MvParseError",
    "NonInvertibleError", "OddGradePresentError", "Signature",
    "SignatureMismatchError", "UnknownFormulaError", "UnknownIndexError",
    "blade_grade", "blade_indices", "blade_mul", "canonical_order",
    "det_norm", "even_inverse", "format", "from_json", "gp", "grade_negate",
    "grade_part", "inverse", "involution", "is_invertible", "left_matrix",
    "linear_combine", "list_formulas", "load_catalog", "oracle_det",
    "oracle_inverse", "oracle_is_invertible", "parse", "to_json",
    "triplet_formula", "__version__",
]
