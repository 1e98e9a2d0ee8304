"""A small expression language for maps F_q -> F_q.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := factor ('*' factor)*
    factor := atom ('^' ['-'] INT)?
    atom   := INT | 'x' | 'g' | NAME | TRACE '(' expr ')' | '(' expr ')'
    TRACE  := 'Tr' | 'Tr_' INT

Integer literals are element codes, ``x`` is the variable, ``g`` the field's
table generator and any other name is looked up in the caller's bindings.
``Tr_t`` is the relative trace onto the subfield of degree t and a bare
``Tr`` the absolute trace. Example: ``x^3 + a^-1*Tr(a^3*x^9)``.
"""

import re
from dataclasses import dataclass

import numpy as np

from .errors import ExpressionError, FieldError
from .finite_field import FieldSpec

_TOKEN = re.compile(r"\s*(?:(\d+)|(Tr(?:_\d+)?)\b|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def tokenize(text: str) -> list[tuple[str, str]]:
    tokens = []
    pos = 0
    text = text.rstrip()
    while pos < len(text):
        match = _TOKEN.match(text, pos)
        if match is None:
            raise ExpressionError(f"cannot tokenize {text[pos:]!r}")
        number, trace, name, symbol = match.groups()
        if number is not None:
            tokens.append(("int", number))
        elif trace is not None:
            tokens.append(("trace", trace))
        elif name is not None:
            tokens.append(("name", name))
        elif symbol in "+-*^()":
            tokens.append(("sym", symbol))
        else:
            raise ExpressionError(f"unexpected character {symbol!r} in {text!r}")
        pos = match.end()
    return tokens


@dataclass
class _Parser:
    field: FieldSpec
    tokens: list[tuple[str, str]]
    bindings: dict[str, int]
    pos: int = 0

    def peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value and tok[1] != value):
            want = value or kind or "token"
            raise ExpressionError(f"expected {want} at token {self.pos}, got {tok[1]!r}")
        self.pos += 1
        return tok

    def const(self, code: int) -> np.ndarray:
        if not 0 <= code < self.field.q:
            raise ExpressionError(f"constant {code} is not an element code of F_{self.field.q}")
        return np.full(self.field.q, code, dtype=np.int64)

    def expr(self) -> np.ndarray:
        value = self.term()
        while self.peek() in (("sym", "+"), ("sym", "-")):
            op = self.take()[1]
            rhs = self.term()
            value = self.field.add(value, rhs) if op == "+" else self.field.sub(value, rhs)
        return value

    def term(self) -> np.ndarray:
        value = self.factor()
        while self.peek() == ("sym", "*"):
            self.take()
            value = self.field.mul(value, self.factor())
        return value

    def factor(self) -> np.ndarray:
        base = self.atom()
        if self.peek() == ("sym", "^"):
            self.take()
            sign = 1
            if self.peek() == ("sym", "-"):
                self.take()
                sign = -1
            exponent = sign * int(self.take("int")[1])
            try:
                base = self.field.power(base, exponent)
            except FieldError as exc:
                raise ExpressionError(f"cannot raise to {exponent}: {exc}")
        return base

    def atom(self) -> np.ndarray:
        kind, value = self.peek()
        if kind == "int":
            self.take()
            return self.const(int(value))
        if kind == "name":
            self.take()
            if value == "x":
                return self.field.elements()
            if value == "g":
                return self.const(self.field.generator)
            if value not in self.bindings:
                raise ExpressionError(f"unbound name {value!r}")
            return self.const(int(self.bindings[value]))
        if kind == "trace":
            self.take()
            t = int(value[3:]) if "_" in value else 1
            if t < 1 or self.field.n % t:
                raise ExpressionError(f"trace degree {t} does not divide n={self.field.n}")
            self.take("sym", "(")
            inner = self.expr()
            self.take("sym", ")")
            return self.field.trace_relative(inner, t)
        if (kind, value) == ("sym", "("):
            self.take()
            inner = self.expr()
            self.take("sym", ")")
            return inner
        raise ExpressionError(f"unexpected token {value!r}")


def evaluate_expression(field: FieldSpec, text: str, bindings: dict[str, int] | None = None) -> np.ndarray:
    """Evaluate the expression at every element of the field."""
    tokens = tokenize(text)
    if not tokens:
        raise ExpressionError("empty expression")
    parser = _Parser(field, tokens, dict(bindings or {}))
    values = parser.expr()
    if parser.pos != len(tokens):
        raise ExpressionError(f"trailing input after token {parser.pos}: {tokens[parser.pos][1]!r}")
    return np.asarray(values, dtype=np.int64)
