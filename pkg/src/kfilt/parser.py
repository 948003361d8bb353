"""Polynomial expression parser.

Grammar (whitespace is insignificant)::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := [coeff] factor* | coeff
    coeff  := INT ['/' INT]
    factor := ['*'] VAR ['^' INT]

Variables are matched greedily against the declared names, so ``xy`` means
``x*y`` when only ``x`` and ``y`` are declared.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Sequence

from .errors import ParseError
from .poly import Poly


class _Parser:
    def __init__(self, text: str, names: Sequence[str], line=None):
        self.text = text
        self.names = sorted(names, key=len, reverse=True)
        self.index = {n: j for j, n in enumerate(names)}
        self.nvars = len(names)
        self.pos = 0
        self.line = line

    def error(self, msg):
        raise ParseError(msg, self.text, self.pos, self.line)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def integer(self):
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected an integer")
        return int(self.text[start:self.pos])

    def variable(self):
        self.skip()
        for name in self.names:
            if self.text.startswith(name, self.pos):
                self.pos += len(name)
                return self.index[name]
        self.error(f"unknown symbol {self.text[self.pos:self.pos + 1]!r}")

    def at_variable(self):
        self.skip()
        return any(self.text.startswith(n, self.pos) for n in self.names)

    def term(self):
        coeff = Fraction(1)
        exps = [0] * self.nvars
        seen = False
        if self.peek().isdigit():
            num = self.integer()
            den = 1
            if self.peek() == "/":
                self.pos += 1
                den = self.integer()
                if den == 0:
                    self.error("zero denominator")
            coeff = Fraction(num, den)
            seen = True
        while True:
            ch = self.peek()
            if ch == "*":
                self.pos += 1
                if not self.at_variable():
                    self.error("expected a variable after '*'")
            elif not self.at_variable():
                break
            j = self.variable()
            e = 1
            if self.peek() == "^":
                self.pos += 1
                e = self.integer()
            exps[j] += e
            seen = True
        if not seen:
            self.error("expected a term")
        return tuple(exps), coeff

    def parse(self):
        terms = {}
        sign = 1
        ch = self.peek()
        if ch in "+-" and ch:
            sign = -1 if ch == "-" else 1
            self.pos += 1
        while True:
            m, c = self.term()
            terms[m] = terms.get(m, 0) + sign * c
            ch = self.peek()
            if ch == "":
                break
            if ch not in "+-":
                self.error(f"unexpected character {ch!r}")
            sign = -1 if ch == "-" else 1
            self.pos += 1
        return Poly(self.nvars, terms)


def parse_poly(text: str, names: Sequence[str], line=None) -> Poly:
    """Parse ``text`` into a :class:`Poly` over the variables ``names``.

    >>> parse_poly("x^2 - 1/2 y z", ["x", "y", "z"]).to_string("xyz")
    'x^2 - 1/2*y*z'
    """
    if not isinstance(text, str):
        raise ParseError("polynomial must be given as a string", str(text), None, line)
    if not text.strip():
        raise ParseError("empty expression", text, 0, line)
    return _Parser(text, names, line).parse()
