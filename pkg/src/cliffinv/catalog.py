"""Data-driven registry of determinant-norm and inverse formulas.

The formulas live in text files under ``cliffinv/data`` (one file per source
table), one entry per line:

    id | n | det-expression | adjugate-expression | provenance | status

Expressions use the syntax of :mod:`cliffinv.exprs`.  The loader enforces
the structural relation between the two columns (the det expression must be
the bound input times the adjugate expression) and assembles the 72
three-term dimension-6 formulas from their building-block terms.

Entries whose printed source was ambiguous ship with status ``unverified``
and are excluded from cross-agreement suites; the search module can
re-derive and validate the reconstructed readings, but the shipped status
never encodes a guess as ground truth.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Iterable

from .errors import CatalogDefectError, UnknownFormulaError
from .exprs import (Expr, adjugate_matches, parse_expr, uses_vector,
                    weighted_sum)

DEFAULT_IDS = {0: "n0", 1: "n1", 2: "n2", 3: "n3", 4: "n4.a", 5: "n5", 6: "n6.a"}

TRIPLET_SET_SIZES = {"S": 4, "T": 2}

_ENTRY_FILES = ("default_inverse.cat", "n5_single_forms.cat", "n6_pair_forms.cat")
_TRIPLET_FILE = "n6_triplet_terms.cat"
_EVEN_FILE = "even_inverse.cat"


@dataclass(frozen=True)
class FormulaEntry:
    """One determinant-norm / adjugate pair.

    ``gp(A, eval(adjugate_expr, A)) == eval(det_expr, A)`` holds by
    construction (the det expression is the input times the adjugate), so an
    entry yields an exact inverse whenever its determinant is a nonzero
    scalar.
    """

    id: str
    dimension: int
    det_expr: Expr
    adjugate_expr: Expr
    provenance: str
    status: str


@dataclass(frozen=True)
class EvenInverseEntry:
    """Even-subalgebra inverse recipe: numerator/denominator expressions over
    the bound input and a dummy nonisotropic vector."""

    id: str
    dimension: int
    denominator: Expr
    numerator: Expr
    provenance: str


def _parse_lines(filename: str):
    text = resources.files("cliffinv").joinpath("data", filename).read_text()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = [f.strip() for f in line.split("|")]
        if len(fields) != 6:
            raise CatalogDefectError(
                f"{filename}:{lineno}: expected 6 fields, got {len(fields)}")
        yield fields


def _load_entry(fields, filename) -> FormulaEntry:
    ident, dim_s, det_s, adj_s, provenance, status = fields
    if status not in ("verified", "unverified"):
        raise CatalogDefectError(f"{ident}: unknown status {status!r}", formula_id=ident)
    det_expr = parse_expr(det_s)
    adjugate_expr = parse_expr(adj_s)
    if not adjugate_matches(det_expr, adjugate_expr):
        raise CatalogDefectError(
            f"{ident}: det expression is not the input times the adjugate",
            formula_id=ident)
    if uses_vector(det_expr) != (filename == _EVEN_FILE):
        raise CatalogDefectError(
            f"{ident}: dummy-vector atom in the wrong catalog file", formula_id=ident)
    return FormulaEntry(ident, int(dim_s), det_expr, adjugate_expr, provenance, status)


class FormulaCatalog:
    """Immutable registry of formula entries keyed by stable ids."""

    def __init__(self, entries, defaults, even_entries, triplet_terms):
        self._entries = dict(entries)
        self._defaults = dict(defaults)
        self._even_entries = dict(even_entries)
        self._triplet_terms = dict(triplet_terms)

    # -- plain det/adjugate entries -----------------------------------------

    def entry(self, formula_id: str) -> FormulaEntry:
        try:
            return self._entries[formula_id]
        except KeyError:
            raise UnknownFormulaError(f"no formula with id {formula_id!r}") from None

    def __contains__(self, formula_id: str) -> bool:
        return formula_id in self._entries

    def default_id(self, n: int) -> str:
        try:
            return self._defaults[n]
        except KeyError:
            raise UnknownFormulaError(f"no default formula for dimension {n}") from None

    def default_entry(self, n: int) -> FormulaEntry:
        return self.entry(self.default_id(n))

    def ids(self):
        return sorted(self._entries)

    def entries_for_dimension(self, n: int):
        if not 0 <= n <= 6:
            raise ValueError(f"dimension {n} out of range 0..6")
        return [self._entries[i] for i in sorted(self._entries)
                if self._entries[i].dimension == n]

    # -- even-subalgebra recipes ----------------------------------------------

    def even_entry(self, n: int) -> EvenInverseEntry:
        try:
            return self._even_entries[n]
        except KeyError:
            raise UnknownFormulaError(
                f"no even-subalgebra recipe for dimension {n}") from None

    # -- triplet access --------------------------------------------------------

    def triplet_term(self, term_id: str) -> Expr:
        try:
            return self._triplet_terms[term_id]
        except KeyError:
            raise UnknownFormulaError(f"no triplet term {term_id!r}") from None

    def triplet_term_ids(self):
        return sorted(self._triplet_terms)


def _assemble_triplets(terms):
    """All 4*4*4 + 2*2*2 three-term formulas, each a 1/3-weighted sum."""
    out = {}
    for family, size in TRIPLET_SET_SIZES.items():
        for i in range(1, size + 1):
            for j in range(1, size + 1):
                for k in range(1, size + 1):
                    picks = (f"{family}1.{i}", f"{family}2.{j}", f"{family}3.{k}")
                    det = weighted_sum(*((Fraction(1, 3), terms[p][0]) for p in picks))
                    adj = weighted_sum(*((Fraction(1, 3), terms[p][1]) for p in picks))
                    ident = f"n6.t.{family}{i}{j}{k}"
                    out[ident] = FormulaEntry(
                        ident, 6, det, adj,
                        f"triplet ({picks[0]}, {picks[1]}, {picks[2]})", "verified")
    return out


@lru_cache(maxsize=None)
def load_catalog() -> FormulaCatalog:
    entries = {}
    for filename in _ENTRY_FILES:
        for fields in _parse_lines(filename):
            entry = _load_entry(fields, filename)
            if entry.id in entries:
                raise CatalogDefectError(f"duplicate formula id {entry.id}")
            entries[entry.id] = entry

    terms = {}
    for fields in _parse_lines(_TRIPLET_FILE):
        ident, dim_s, term_s, tail_s = fields[0], fields[1], fields[2], fields[3]
        term = parse_expr(term_s)
        tail = parse_expr(tail_s)
        if int(dim_s) != 6 or not adjugate_matches(term, tail):
            raise CatalogDefectError(f"bad triplet term {ident}", formula_id=ident)
        terms[ident] = (term, tail)
    expected = {f"{fam}{pos}.{i}" for fam, size in TRIPLET_SET_SIZES.items()
                for pos in (1, 2, 3) for i in range(1, size + 1)}
    if set(terms) != expected:
        raise CatalogDefectError("triplet term sets are incomplete")
    entries.update(_assemble_triplets(terms))

    even_entries = {}
    for fields in _parse_lines(_EVEN_FILE):
        entry = _load_entry(fields, _EVEN_FILE)
        even_entries[entry.dimension] = EvenInverseEntry(
            entry.id, entry.dimension, entry.det_expr, entry.adjugate_expr,
            entry.provenance)

    for n, ident in DEFAULT_IDS.items():
        if ident not in entries:
            raise CatalogDefectError(f"missing default formula {ident} for n={n}")

    return FormulaCatalog(entries, DEFAULT_IDS, even_entries,
                          {k: v[0] for k, v in terms.items()})
