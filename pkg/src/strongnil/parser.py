"""Recursive-descent parser for the polynomial text grammar.

    expression := ["+"|"-"] term (("+"|"-") term)*
    term       := factor ("*" factor)*
    factor     := atom ("^" uint)?
    atom       := uint ("/" uint)? | variable | "(" expression ")"

Variables are x<k>, y<j>_<k>, t<j>, and eps (the dual unit, accepted only
over the dual-number ring).  Implicit multiplication is a syntax error;
every product needs an explicit "*".  Parenthesised sums are expanded by
the parser, so the result is always a canonical polynomial.

The grammar core is shared with the noncommutative parser in freealg: it is
parameterised over callbacks that build constants and variables, and uses
the value type's own +, -, *, ** operators.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Callable, Iterable

from .poly import Polynomial
from .rings import QQ, QQ_EPS, Ring
from .variables import VarId, parse_var_name


class ParseError(ValueError):
    """Syntax or name error, carrying the character offset it occurred at."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.message = message
        self.position = position


def _tokenize(text: str):
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            tokens.append(("int", text[i:j], i))
            i = j
        elif ch.isalpha():
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            tokens.append(("name", text[i:j], i))
            i = j
        elif ch in "+-*/^()":
            tokens.append((ch, ch, i))
            i += 1
        else:
            raise ParseError(f"unexpected character {ch!r}", i)
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str, make_const: Callable, make_var: Callable):
        self.tokens = _tokenize(text)
        self.pos = 0
        self.make_const = make_const
        self.make_var = make_var

    def peek(self):
        return self.tokens[self.pos][0]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect(self, kind: str, what: str):
        tok = self.tokens[self.pos]
        if tok[0] != kind:
            raise ParseError(f"expected {what}", tok[2])
        self.pos += 1
        return tok

    def parse(self):
        value = self.expression()
        tok = self.tokens[self.pos]
        if tok[0] != "end":
            raise ParseError(f"unexpected {tok[1]!r}", tok[2])
        return value

    def expression(self):
        negate = False
        if self.peek() in ("+", "-"):
            negate = self.take()[0] == "-"
        value = self.term()
        if negate:
            value = -value
        while self.peek() in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.factor()
        while self.peek() == "*":
            self.take()
            value = value * self.factor()
        return value

    def factor(self):
        value = self.atom()
        if self.peek() == "^":
            self.take()
            tok = self.expect("int", "an exponent")
            value = value ** int(tok[1])
        return value

    def atom(self):
        kind, text, pos = self.tokens[self.pos]
        if kind == "int":
            self.take()
            numerator = int(text)
            if self.peek() == "/":
                self.take()
                dtok = self.expect("int", "a denominator")
                denominator = int(dtok[1])
                if denominator == 0:
                    raise ParseError("zero denominator", dtok[2])
                return self.make_const(Fraction(numerator, denominator))
            return self.make_const(Fraction(numerator))
        if kind == "name":
            self.take()
            return self.make_var(text, pos)
        if kind == "(":
            self.take()
            value = self.expression()
            self.expect(")", "')'")
            return value
        raise ParseError("expected a number, a variable or '('", pos)


def parse_poly(
    text: str,
    ring: Ring = QQ,
    allowed_vars: Iterable[VarId] | None = None,
) -> Polynomial:
    """Parse a commutative polynomial in the text grammar.

    ``allowed_vars`` restricts the variable universe; None admits every
    well-formed variable name.  Unknown or disallowed names raise ParseError
    with the offending position.
    """
    allowed = None if allowed_vars is None else set(allowed_vars)

    def make_const(value: Fraction) -> Polynomial:
        return Polynomial.constant(ring, value)

    def make_var(name: str, pos: int) -> Polynomial:
        if name == "eps":
            if ring is not QQ_EPS:
                raise ParseError("'eps' is only available over the dual-number ring", pos)
            return Polynomial.constant(ring, QQ_EPS.eps)
        var = parse_var_name(name)
        if var is None:
            raise ParseError(f"unknown variable name {name!r}", pos)
        if allowed is not None and var not in allowed:
            raise ParseError(f"variable {name!r} is not allowed here", pos)
        return Polynomial.variable(ring, var)

    return _Parser(text, make_const, make_var).parse()
