"""Text syntax for polynomials and derivations.

Grammar (whitespace is insignificant)::

    expr   := ['+'|'-'] term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := atom ['^' INT]
    atom   := NUMBER | IDENT | 'd/d' IDENT | '(' expr ')'

Identifiers may contain primes and tildes (``x'``, ``z''``, ``x~``).  A
``d/dIDENT`` token is the coordinate partial of that variable.  Division
is only allowed by nonzero constants.
"""

from __future__ import annotations

import re
from fractions import Fraction
from typing import List, Sequence, Tuple

from .algebra import AlgebraError, PolyRing, Polynomial

IDENT = r"[A-Za-z_][A-Za-z0-9_'~]*"
_TOKEN_RE = re.compile(
    rf"\s*(?:(?P<partial>d/d(?P<pvar>{IDENT}))|(?P<num>\d+)|(?P<ident>{IDENT})|(?P<op>[-+*/^()]))"
)


class ExprSyntaxError(AlgebraError):
    """Parse failure with a 0-based character offset into the source text."""

    def __init__(self, message: str, pos: int, expected: Sequence[str] = ()):
        self.pos = pos
        self.expected = tuple(expected)
        self.message = message
        extra = f" (expected {', '.join(self.expected)})" if self.expected else ""
        super().__init__(f"{message} at offset {pos}{extra}")


class UndeclaredIdentifier(ExprSyntaxError):
    pass


def tokenize(text: str) -> List[Tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN_RE.match(text, pos)
        if not m:
            start = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ExprSyntaxError(f"unexpected character {text[start]!r}", start,
                                  ["number", "identifier", "operator"])
        if m.group("partial"):
            tokens.append(("partial", m.group("pvar"), m.start("partial")))
        elif m.group("num"):
            tokens.append(("num", m.group("num"), m.start("num")))
        elif m.group("ident"):
            tokens.append(("ident", m.group("ident"), m.start("ident")))
        else:
            tokens.append(("op", m.group("op"), m.start("op")))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Vec:
    """Derivation under construction: one coefficient per variable."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        self.coeffs = coeffs


class _Parser:
    def __init__(self, text: str, ring: PolyRing, allow_partials: bool):
        self.text = text
        self.ring = ring
        self.allow_partials = allow_partials
        self.tokens = tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def fail(self, msg, tok, expected=()):
        raise ExprSyntaxError(msg, tok[2], expected)

    # value helpers ------------------------------------------------------
    def _add(self, a, b, tok, sign=1):
        if isinstance(a, _Vec) and isinstance(b, _Vec):
            return _Vec([x + y * sign for x, y in zip(a.coeffs, b.coeffs)])
        if isinstance(a, Polynomial) and isinstance(b, Polynomial):
            return a + b * sign
        # a zero polynomial may be combined with a derivation
        if isinstance(a, Polynomial) and a.is_zero():
            return _Vec([c * sign for c in b.coeffs])
        if isinstance(b, Polynomial) and b.is_zero():
            return a
        self.fail("cannot add a function and a vector field", tok)

    def _mul(self, a, b, tok):
        if isinstance(a, _Vec) and isinstance(b, _Vec):
            self.fail("cannot multiply two vector fields", tok)
        if isinstance(a, _Vec):
            a, b = b, a
        if isinstance(b, _Vec):
            return _Vec([a * c for c in b.coeffs])
        return a * b

    # grammar -----------------------------------------------------------
    def parse(self):
        value = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            self.fail(f"unexpected {tok[1]!r}", tok, ["operator", "end of expression"])
        return value

    def expr(self):
        tok = self.peek()
        sign = 1
        if tok[0] == "op" and tok[1] in "+-":
            self.take()
            sign = -1 if tok[1] == "-" else 1
        value = self.term()
        if sign < 0:
            value = self._mul(self.ring.const(-1), value, tok)
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] in "+-":
                self.take()
                rhs = self.term()
                value = self._add(value, rhs, tok, -1 if tok[1] == "-" else 1)
            else:
                return value

    def term(self):
        value = self.factor()
        while True:
            tok = self.peek()
            if tok[0] == "op" and tok[1] == "*":
                self.take()
                value = self._mul(value, self.factor(), tok)
            elif tok[0] == "op" and tok[1] == "/":
                self.take()
                rhs = self.factor()
                if not isinstance(rhs, Polynomial) or not rhs.is_constant() or rhs.is_zero():
                    self.fail("division only by a nonzero constant", tok)
                value = self._mul(self.ring.const(1 / rhs.constant_term()), value, tok)
            else:
                return value

    def factor(self):
        base = self.atom()
        tok = self.peek()
        if tok[0] == "op" and tok[1] == "^":
            self.take()
            exp = self.take()
            if exp[0] != "num":
                self.fail("exponent must be a non-negative integer", exp, ["integer"])
            if isinstance(base, _Vec):
                self.fail("cannot raise a vector field to a power", tok)
            return base ** int(exp[1])
        return base

    def atom(self):
        tok = self.take()
        kind, val, _ = tok
        if kind == "num":
            return self.ring.const(Fraction(int(val)))
        if kind == "ident":
            if val not in self.ring:
                raise UndeclaredIdentifier(f"undeclared variable {val!r}", tok[2],
                                           list(self.ring.names))
            return self.ring.var(val)
        if kind == "partial":
            if not self.allow_partials:
                self.fail("vector field where a polynomial was expected", tok)
            if val not in self.ring:
                raise UndeclaredIdentifier(f"undeclared variable {val!r}", tok[2],
                                           list(self.ring.names))
            coeffs = [self.ring.zero] * self.ring.ngens
            coeffs[self.ring.index(val)] = self.ring.one
            return _Vec(coeffs)
        if kind == "op" and val == "(":
            value = self.expr()
            close = self.take()
            if close[:2] != ("op", ")"):
                self.fail("unbalanced parenthesis", close, ["')'"])
            return value
        self.fail("unexpected " + (repr(val) if val else "end of expression"), tok,
                  ["number", "identifier", "'('"])


def parse_polynomial(text: str, ring: PolyRing) -> Polynomial:
    value = _Parser(text, ring, allow_partials=False).parse()
    return value


def parse_derivation_coefficients(text: str, ring: PolyRing) -> List[Polynomial]:
    """Parse ``d/dz + z*d/dx`` style text into a coefficient list."""
    value = _Parser(text, ring, allow_partials=True).parse()
    if isinstance(value, Polynomial):
        if value.is_zero():
            return [ring.zero] * ring.ngens
        raise ExprSyntaxError("expected a vector field, found a function", 0, ["d/dVAR"])
    return value.coeffs


def split_list(text: str) -> List[Tuple[str, int]]:
    """Split a comma separated list at top level, keeping start offsets."""
    parts = []
    depth = 0
    start = 0
    for i, ch in enumerate(text):
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        elif ch == "," and depth == 0:
            parts.append((text[start:i], start))
            start = i + 1
    parts.append((text[start:], start))
    return [(p, off) for p, off in parts if p.strip()]


def parse_polynomial_list(text: str, ring: PolyRing) -> List[Polynomial]:
    out = []
    for part, off in split_list(text):
        try:
            out.append(parse_polynomial(part, ring))
        except ExprSyntaxError as exc:
            raise type(exc)(exc.message, exc.pos + off, exc.expected) from None
    return out


def parse_derivation_list(text: str, ring: PolyRing) -> List[List[Polynomial]]:
    out = []
    for part, off in split_list(text):
        try:
            out.append(parse_derivation_coefficients(part, ring))
        except ExprSyntaxError as exc:
            raise type(exc)(exc.message, exc.pos + off, exc.expected) from None
    return out


def identifiers_in(text: str) -> List[Tuple[str, int]]:
    """All variable identifiers (including partial targets) with offsets."""
    return [(t[1], t[2]) for t in tokenize(text) if t[0] in ("ident", "partial")]


def is_identifier(name: str) -> bool:
    return re.fullmatch(IDENT, name) is not None


