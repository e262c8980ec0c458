"""Parse and format multivectors in the blade-list notation used throughout:

    3 + e2 + e5 - e12 - e15 + 3 e125
    44766/678025 - 9765/678025 e1 + ...

A term is a coefficient, a blade, or both; the coefficient may be an
integer, a fraction ``p/q`` or a finite decimal (converted exactly).
Whitespace and an optional ``*`` between coefficient and blade are
insignificant.  Blade digits are basis-vector indices 1..n; out-of-order
digits are accepted and canonicalized with the reordering sign ("e21"
parses as -e12).  Repeated blades accumulate.

The JSON form carries the signature and the dense canonical coefficient
array as exact strings:

    {"signature": [p, q], "coeffs": ["r0", "r1", ...]}
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Optional

from .algebra import Multivector, Signature, blade_indices, canonical_order, mask_from_indices
from .errors import DuplicateIndexError, MvParseError, UnknownIndexError


def parse(sig: Signature, text: str) -> Multivector:
    """Parse blade-list notation into an exact multivector of `sig`."""
    if not text or text.isspace():
        raise MvParseError("empty multivector text", offset=0)
    parser = _Parser(sig, text)
    return parser.run()


class _Parser:
    def __init__(self, sig: Signature, text: str):
        self.sig = sig
        self.text = text
        self.pos = 0
        self.coeffs = [Fraction(0)] * sig.dim
        self.order = canonical_order(sig.n)

    def run(self) -> Multivector:
        self.skip_ws()
        sign = self.read_sign(optional=True)
        self.add_term(sign)
        while True:
            self.skip_ws()
            if self.pos >= len(self.text):
                break
            sign = self.read_sign(optional=False)
            self.add_term(sign)
        return Multivector(self.sig, tuple(self.coeffs))

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def read_sign(self, optional: bool) -> int:
        ch = self.peek()
        if ch == "+":
            self.pos += 1
            return 1
        if ch == "-":
            self.pos += 1
            return -1
        if optional:
            return 1
        raise MvParseError(f"expected '+' or '-', found {ch!r}", offset=self.pos)

    def add_term(self, sign: int):
        self.skip_ws()
        start = self.pos
        coefficient = self.read_coefficient()
        self.skip_ws()
        if coefficient is not None and self.peek() == "*":
            self.pos += 1
            self.skip_ws()
        blade = self.read_blade()
        if coefficient is None and blade is None:
            raise MvParseError("term must contain a coefficient or a blade",
                               offset=start)
        value = Fraction(sign) * (coefficient if coefficient is not None else 1)
        blade_sign, mask = blade if blade is not None else (1, 0)
        self.coeffs[self.order.blade_to_index[mask]] += blade_sign * value

    def read_coefficient(self) -> Optional[Fraction]:
        if not self.peek().isdigit():
            return None
        start = self.pos
        while self.peek().isdigit():
            self.pos += 1
        if self.peek() == "/":
            self.pos += 1
            den_start = self.pos
            while self.peek().isdigit():
                self.pos += 1
            if self.pos == den_start:
                raise MvParseError("missing denominator digits", offset=self.pos)
            num, den = self.text[start:den_start - 1], self.text[den_start:self.pos]
            if int(den) == 0:
                raise MvParseError("zero denominator", offset=den_start)
            return Fraction(int(num), int(den))
        if self.peek() == ".":
            self.pos += 1
            frac_start = self.pos
            while self.peek().isdigit():
                self.pos += 1
            if self.pos == frac_start:
                raise MvParseError("missing digits after decimal point",
                                   offset=self.pos)
            whole = self.text[start:frac_start - 1]
            frac = self.text[frac_start:self.pos]
            return Fraction(int(whole + frac), 10 ** len(frac))
        return Fraction(int(self.text[start:self.pos]))

    def read_blade(self):
        if self.peek() != "e":
            return None
        start = self.pos
        self.pos += 1
        digits = []
        while self.peek().isdigit():
            digit = int(self.peek())
            if digit == 0 or digit > self.sig.n:
                raise UnknownIndexError(
                    f"basis index {digit} does not exist in {self.sig}",
                    offset=self.pos)
            if digit in digits:
                raise DuplicateIndexError(
                    f"duplicate basis index {digit} in blade", offset=self.pos)
            digits.append(digit)
            self.pos += 1
        if not digits:
            raise MvParseError("blade needs at least one index", offset=start)
        return mask_from_indices(digits)


def format(a: Multivector, style: str = "plain") -> str:
    """Render a multivector; `style` is "plain" (blade-list text, parseable
    back to the same value) or "json" (signature plus dense coefficients)."""
    if style == "plain":
        return _format_plain(a)
    if style == "json":
        return to_json(a)
    raise ValueError(f"unknown style {style!r}")


def _format_plain(a: Multivector) -> str:
    order = a.order
    pieces = []
    for i, c in enumerate(a.coeffs):
        if not c:
            continue
        indices = blade_indices(order.index_to_blade[i])
        blade = "e" + "".join(str(d) for d in indices) if indices else ""
        magnitude = abs(c)
        if blade and magnitude == 1:
            body = blade
        elif blade:
            body = f"{magnitude} {blade}"
        else:
            body = str(magnitude)
        if not pieces:
            pieces.append(body if c > 0 else f"-{body}")
        else:
            pieces.append(f"{'+' if c > 0 else '-'} {body}")
    return " ".join(pieces) if pieces else "0"


def to_json(a: Multivector) -> str:
    return json.dumps({"signature": [a.sig.p, a.sig.q],
                       "coeffs": [str(c) for c in a.coeffs]})


def from_json(text: str) -> Multivector:
    try:
        payload = json.loads(text)
        p, q = payload["signature"]
        coeffs = [Fraction(c) for c in payload["coeffs"]]
    except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise MvParseError(f"bad multivector JSON: {exc}") from None
    return Multivector(Signature(p, q), tuple(coeffs))
