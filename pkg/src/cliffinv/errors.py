"""Exception types shared across the package."""

from __future__ import annotations


class CliffInvError(Exception):
    """Base class for all package-specific errors."""


class SignatureMismatchError(CliffInvError):
    """Two multivectors from different algebras were combined."""


class NonInvertibleError(CliffInvError):
    """A multivector has determinant norm zero and therefore no inverse.

    Attributes:
        determinant: the (zero) determinant value, when known.
        formula_id:  catalog id of the formula that produced the verdict.
        attempted_vectors: for even-subalgebra inversion, the dummy vectors
            that were tried before giving up.
    """

    def __init__(self, message, determinant=None, formula_id=None,
                 attempted_vectors=None):
        super().__init__(message)
        self.determinant = determinant
        self.formula_id = formula_id
        self.attempted_vectors = attempted_vectors


class CatalogDefectError(CliffInvError):
    """A catalog formula is mis-encoded (e.g. a nonscalar determinant residue).

    This signals a defect in the shipped formula data, never bad user input.
    """

    def __init__(self, message, formula_id=None):
        super().__init__(message)
        self.formula_id = formula_id


class UnknownFormulaError(CliffInvError):
    """A formula id is not present in the catalog."""


class DimensionMismatchError(CliffInvError):
    """A formula for dimension m was applied to a multivector of dimension > m.

    Applying a higher-dimensional formula to a lower-dimensional multivector
    is allowed (negations of absent grades are no-ops); the reverse is not.
    """


class OddGradePresentError(CliffInvError):
    """An even-subalgebra operation received a multivector with odd grades."""


class MvParseError(CliffInvError):
    """Multivector text could not be parsed.

    Attributes:
        offset: character position of the offending input.
    """

    def __init__(self, message, offset=None):
        if offset is not None:
            message = f"{message} (at position {offset})"
        super().__init__(message)
        self.offset = offset


class UnknownIndexError(MvParseError):
    """A blade referenced a basis-vector index beyond the algebra dimension."""


class DuplicateIndexError(MvParseError):
    """A blade literal repeated a basis-vector index."""


class InfeasibleFitError(CliffInvError):
    """No rational weights make the candidate linear combination consistent."""
