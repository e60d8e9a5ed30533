"""
Form mini-grammar.

    form := term "+" term ["+" term]
    term := [INT "*"] kind ["@int"] | "0"
    kind := "sq" | "tri" | "p(" INT ")" | "pbar(" INT ")" | "gp(" INT "," INT ")"

Whitespace is ignored. A two-term form is padded with the zero sentinel.
The canonical printer always writes the coefficient, so
parse_form(format_form(f)) == f.
"""

import re
from typing import Optional

from tusv.core.errors import FormParseError
from tusv.core.generators import (
    Domain,
    Generator,
    GeneratorKind,
    Kind,
    TernaryForm,
)

_INT = re.compile(r"\d+")
_WORD = re.compile(r"[a-z]+")
_DISPLAY = re.compile(r"^(\d*)z\((\d*)z([+-]\d+)\)(/2)?$")
_DISPLAY_SQUARE = re.compile(r"^(\d*)z\^2$")


class _Parser:
    def __init__(self, text: str, strict: bool) -> None:
        self.text = text
        self.pos = 0
        self.strict = strict

    def error(self, message: str, position: Optional[int] = None) -> FormParseError:
        return FormParseError(message, self.pos if position is None else position, self.text)

    def skip_ws(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, literal: str) -> None:
        self.skip_ws()
        if not self.text.startswith(literal, self.pos):
            raise self.error(f"expected {literal!r}")
        self.pos += len(literal)

    def integer(self) -> int:
        self.skip_ws()
        match = _INT.match(self.text, self.pos)
        if not match:
            raise self.error("expected an integer")
        self.pos = match.end()
        return int(match.group())

    def kind(self) -> GeneratorKind:
        self.skip_ws()
        start = self.pos
        match = _WORD.match(self.text, self.pos)
        if not match:
            raise self.error("expected a term kind")
        self.pos = match.end()
        word = match.group()
        try:
            if word == "sq":
                return GeneratorKind.square()
            if word == "tri":
                return GeneratorKind.triangular()
            if word in ("p", "pbar"):
                self.expect("(")
                m = self.integer()
                self.expect(")")
                if word == "p":
                    return GeneratorKind.polygonal(m)
                return GeneratorKind.second_polygonal(m)
            if word == "gp":
                self.expect("(")
                c = self.integer()
                self.expect(",")
                d = self.integer()
                self.expect(")")
                kind = GeneratorKind.genpoly(c, d)
                if self.strict and not kind.strict:
                    raise self.error(f"gp({c},{d}) has d dividing c", start)
                return kind
        except ValueError as e:
            if isinstance(e, FormParseError):
                raise
            raise self.error(str(e), start) from e
        raise self.error(f"unknown term kind {word!r}", start)

    def term(self) -> Generator:
        self.skip_ws()
        start = self.pos
        coeff = 1
        match = _INT.match(self.text, self.pos)
        if match:
            self.pos = match.end()
            if self.peek() != "*":
                if int(match.group()) == 0:
                    return Generator(GeneratorKind.zero())
                raise self.error("expected '*' after coefficient")
            coeff = int(match.group())
            if coeff < 1:
                raise self.error("coefficient must be >= 1", start)
            self.expect("*")
        kind = self.kind()
        domain = Domain.NATURALS
        if self.peek() == "@":
            self.expect("@int")
            domain = Domain.INTEGERS
        return Generator(kind, coeff, domain)

    def form(self) -> TernaryForm:
        terms = [self.term()]
        while self.peek() == "+":
            self.expect("+")
            terms.append(self.term())
        self.skip_ws()
        if self.pos != len(self.text):
            raise self.error("unexpected trailing input")
        if len(terms) == 2:
            terms.append(Generator(GeneratorKind.zero()))
        if len(terms) != 3:
            raise self.error(f"expected 2 or 3 terms, got {len(terms)}", 0)
        return TernaryForm(tuple(terms))


def parse_form(text: str, strict: bool = False) -> TernaryForm:
    """
    Parse a form string.

    Args:
        text: Form in the mini-grammar
        strict: Reject gp(c, d) terms with d dividing c

    Returns:
        The parsed TernaryForm

    Raises:
        FormParseError: with the 0-based position of the offending input
    """
    return _Parser(text, strict).form()


def parse_term(text: str, strict: bool = False) -> Generator:
    """Parse a single term."""
    parser = _Parser(text, strict)
    term = parser.term()
    parser.skip_ws()
    if parser.pos != len(text):
        raise parser.error("unexpected trailing input")
    return term


def format_term(g: Generator) -> str:
    kind = g.kind
    if kind.kind == Kind.ZERO:
        return "0"
    if kind.kind in (Kind.SQUARE, Kind.TRIANGULAR):
        body = kind.kind.value
    elif kind.kind in (Kind.POLYGONAL, Kind.SECOND_POLYGONAL):
        body = f"{kind.kind.value}({kind.m})"
    else:
        body = f"gp({kind.c},{kind.d})"
    suffix = "@int" if g.domain == Domain.INTEGERS else ""
    return f"{g.coeff}*{body}{suffix}"


def format_form(form: TernaryForm) -> str:
    """Canonical form string; also the cache key basis."""
    return "+".join(format_term(g) for g in form.terms)


def parse_display(text: str) -> tuple[int, int]:
    """Invert canonical_display: 'z(15z-11)/2' -> (15, 2)."""
    cleaned = text.replace(" ", "").replace("−", "-")
    square = _DISPLAY_SQUARE.match(cleaned)
    if square:
        half = int(square.group(1) or 1)
        return 2 * half, half
    match = _DISPLAY.match(cleaned)
    if not match:
        raise FormParseError(f"not a gp display: {text!r}", 0, text)
    factor = int(match.group(1) or 1)
    lead = int(match.group(2) or 1)
    tail = int(match.group(3))
    if match.group(4) is None:
        factor *= 2
    c, e = factor * lead, factor * tail
    if (c + e) % 2:
        raise FormParseError(f"display {text!r} has no integral d", 0, text)
    return c, (c + e) // 2
