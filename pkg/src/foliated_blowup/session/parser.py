"""Parser for session scripts.

A script is a sequence of statements separated by newlines or ``;``.
``#`` starts a comment.  Each statement is a keyword followed by words,
numbers, double-quoted strings and ``key=value`` options::

    space 3 vars x y z ring Z
    distribution theta gens "d/dz + z*d/dx"
    ideal I gens "x, y"
    blowup center="x,y,z" chart=z
"""

from __future__ import annotations

import re
from typing import Dict, List, Optional, Sequence, Tuple

from ..algebra import PolyRing
from ..syntax import ExprSyntaxError, UndeclaredIdentifier, is_identifier, split_list

KEYWORDS = {
    "space", "distribution", "ideal", "divisors", "check-admissible", "blowup",
    "linear-change", "assert-monomial", "assert-invariant", "assert-resolved",
    "chain", "report", "suggest-center", "undo",
}

# options accepted by each keyword
OPTIONS = {
    "check-admissible": {"center"},
    "blowup": {"center", "chart", "names"},
    "linear-change": {"names", "mode"},
    "assert-monomial": {"expect", "diagnosis"},
    "assert-invariant": {"expect"},
    "assert-resolved": {"expect"},
    "chain": {"max", "at"},
}


class SessionSyntaxError(Exception):
    """Positioned error: 1-based line and column plus the expected tokens."""

    def __init__(self, message: str, line: int, col: int, expected: Sequence[str] = ()):
        self.message = message
        self.line = line
        self.col = col
        self.expected = list(expected)
        extra = f"; expected {', '.join(self.expected)}" if self.expected else ""
        super().__init__(f"line {line}, column {col}: {message}{extra}")


class UndeclaredIdentifierError(SessionSyntaxError):
    pass


class DimensionMismatchError(SessionSyntaxError):
    pass


class Token:
    __slots__ = ("kind", "value", "key", "line", "col", "vcol")

    def __init__(self, kind, value, line, col, key=None, vcol=None):
        self.kind = kind  # 'word' | 'string' | 'option'
        self.value = value
        self.key = key
        self.line = line
        self.col = col
        self.vcol = vcol if vcol is not None else col

    def text(self) -> str:
        if self.kind == "string":
            return _quote(self.value)
        if self.kind == "option":
            return f"{self.key}={_quote(self.value) if self.quoted else self.value}"
        return self.value

    @property
    def quoted(self):
        return self.kind == "option" and not re.fullmatch(r"[A-Za-z0-9_'~.\-/]+", self.value or "x")

    def __eq__(self, other):
        return isinstance(other, Token) and (self.kind, self.key, self.value) == (other.kind, other.key, other.value)

    def __repr__(self):
        return f"Token({self.text()})"


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


_WORD = r"[A-Za-z0-9_'~.\-/]+"
_LEX = re.compile(
    rf"(?P<ws>[ \t\r]+)|(?P<comment>#[^\n]*)|(?P<nl>\n)|(?P<semi>;)"
    rf"|(?P<opt>(?P<key>[A-Za-z][A-Za-z0-9_\-]*)=(?:\"(?P<oq>(?:[^\"\\\n]|\\.)*)\"|(?P<ow>{_WORD})))"
    rf"|\"(?P<str>(?:[^\"\\\n]|\\.)*)\"|(?P<word>{_WORD})"
)


def _unescape(s: str) -> str:
    return re.sub(r"\\(.)", r"\1", s)


class Statement:
    def __init__(self, keyword: str, tokens: List[Token], line: int, col: int):
        self.keyword = keyword
        self.tokens = tokens
        self.line = line
        self.col = col

    @property
    def positional(self) -> List[Token]:
        return [t for t in self.tokens if t.kind != "option"]

    @property
    def options(self) -> Dict[str, str]:
        return {t.key: t.value for t in self.tokens if t.kind == "option"}

    def option_token(self, key) -> Optional[Token]:
        return next((t for t in self.tokens if t.kind == "option" and t.key == key), None)

    def text(self) -> str:
        return " ".join([self.keyword] + [t.text() for t in self.tokens])

    def __eq__(self, other):
        return isinstance(other, Statement) and self.keyword == other.keyword and self.tokens == other.tokens

    def __repr__(self):
        return f"Statement({self.text()!r})"


class SessionScript:
    def __init__(self, statements: List[Statement], variables: Optional[Tuple[str, ...]] = None,
                 ring_tag: str = "Z"):
        self.statements = statements
        self.variables = variables
        self.ring_tag = ring_tag

    def __len__(self):
        return len(self.statements)

    def __iter__(self):
        return iter(self.statements)

    def text(self) -> str:
        return "".join(s.text() + "\n" for s in self.statements)

    def __eq__(self, other):
        return isinstance(other, SessionScript) and self.statements == other.statements


def _lex(text: str) -> List[List[Token]]:
    """Split into statements, each a list of tokens (first one is the keyword)."""
    statements: List[List[Token]] = [[]]
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = _LEX.match(text, pos)
        col = pos - line_start + 1
        if not m:
            raise SessionSyntaxError(f"unexpected character {text[pos]!r}", line, col,
                                     ["keyword", "word", "string", "option"])
        if m.group("nl") is not None:
            statements.append([])
            line += 1
            line_start = m.end()
        elif m.group("semi") is not None:
            statements.append([])
        elif m.group("opt") is not None:
            raw = m.group("oq")
            value = _unescape(raw) if raw is not None else m.group("ow")
            vstart = (m.start("oq") if raw is not None else m.start("ow")) - line_start + 1
            statements[-1].append(Token("option", value, line, col, key=m.group("key"), vcol=vstart))
        elif m.group("str") is not None:
            statements[-1].append(Token("string", _unescape(m.group("str")), line, col,
                                        vcol=m.start("str") - line_start + 1))
        elif m.group("word") is not None:
            statements[-1].append(Token("word", m.group("word"), line, col))
        # whitespace and comments fall through
        pos = m.end()
    return [s for s in statements if s]


class _Scope:
    """Static simulation of chart variable names for scoping errors."""

    def __init__(self):
        self.stack: List[Tuple[str, ...]] = []
        self.has_space = False
        self.has_theta = False
        self.has_ideal = False

    @property
    def names(self) -> Tuple[str, ...]:
        return self.stack[-1]


def _err(tok: Token, message: str, expected=(), cls=SessionSyntaxError):
    raise cls(message, tok.line, tok.col, expected)


def _check_expression(text: str, tok: Token, names: Sequence[str], partials: bool):
    ring = PolyRing(names)
    from ..syntax import parse_derivation_list, parse_polynomial_list

    try:
        if partials:
            parse_derivation_list(text, ring)
        else:
            parse_polynomial_list(text, ring)
    except ExprSyntaxError as exc:
        cls = UndeclaredIdentifierError if isinstance(exc, UndeclaredIdentifier) else SessionSyntaxError
        raise cls(exc.message, tok.line, tok.vcol + exc.pos, exc.expected) from None


def _name_list(tok: Token, names: Sequence[str]) -> List[str]:
    items = [p.strip() for p, _ in split_list(tok.value)]
    for p, off in split_list(tok.value):
        item = p.strip()
        if item not in names:
            lead = len(p) - len(p.lstrip())
            raise UndeclaredIdentifierError(f"undeclared variable {item!r}", tok.line,
                                            tok.vcol + off + lead, list(names))
    return items


def _new_names(tok: Optional[Token], n: int) -> Optional[List[str]]:
    if tok is None:
        return None
    items = [p.strip() for p, _ in split_list(tok.value)]
    if len(items) != n:
        raise DimensionMismatchError(f"expected {n} names, got {len(items)}", tok.line, tok.vcol)
    for it in items:
        if not is_identifier(it):
            raise SessionSyntaxError(f"invalid variable name {it!r}", tok.line, tok.vcol, ["identifier"])
    if len(set(items)) != n:
        raise SessionSyntaxError("repeated variable name", tok.line, tok.vcol)
    return items


def _validate(stmt: Statement, scope: _Scope):
    kw = stmt.keyword
    toks = stmt.tokens
    pos = stmt.positional
    opts = stmt.options
    head = Token("word", kw, stmt.line, stmt.col)
    allowed = OPTIONS.get(kw, set())
    for t in toks:
        if t.kind == "option" and t.key not in allowed:
            _err(t, f"unknown option {t.key!r} for {kw}", sorted(allowed))
    if kw != "space" and not scope.has_space:
        _err(head, f"{kw} before space declaration", ["space"])
    if kw == "space":
        if scope.has_space:
            _err(head, "space declared twice")
        words = [t.value for t in pos]
        if len(words) < 3 or not words[0].isdigit() or words[1] != "vars":
            _err(pos[0] if pos else head, "malformed space declaration", ["space N vars NAMES ring Z|Q"])
        n = int(words[0])
        rest = words[2:]
        tag = "Z"
        if "ring" in rest:
            i = rest.index("ring")
            if i != len(rest) - 2 or rest[-1] not in ("Z", "Q"):
                _err(pos[2 + i], "ring tag must be Z or Q", ["Z", "Q"])
            tag = rest[-1]
            rest = rest[:i]
        if len(rest) != n:
            raise DimensionMismatchError(f"space declares {n} variables but names {len(rest)}",
                                         pos[0].line, pos[0].col)
        for r, t in zip(rest, pos[2:]):
            if not is_identifier(r):
                _err(t, f"invalid variable name {r!r}", ["identifier"])
        if len(set(rest)) != n:
            _err(pos[0], "repeated variable name")
        scope.has_space = True
        scope.stack.append(tuple(rest))
        return tuple(rest), tag
    names = scope.names
    if kw in ("distribution", "ideal"):
        if len(pos) < 3 or pos[0].kind != "word" or pos[1].value != "gens" or pos[2].kind != "string":
            _err(pos[0] if pos else head, f"malformed {kw} declaration", [f'{kw} NAME gens "..."'])
        if kw == "distribution":
            if len(pos) not in (3, 5) or (len(pos) == 5 and (pos[3].value != "dim" or not pos[4].value.isdigit())):
                _err(pos[-1], "malformed distribution declaration", ["dim N"])
            if len(pos) == 5 and int(pos[4].value) > len(names):
                raise DimensionMismatchError("leaf dimension exceeds chart dimension", pos[4].line, pos[4].col)
            scope.has_theta = True
        else:
            if len(pos) != 3:
                _err(pos[3], "unexpected token", ["end of statement"])
            scope.has_ideal = True
        _check_expression(pos[2].value, pos[2], names, kw == "distribution")
        return None
    if kw == "divisors":
        if len(pos) != 1 or pos[0].kind != "string":
            _err(head, "divisors expects one string", ['"f1, f2"'])
        _check_expression(pos[0].value, pos[0], names, False)
        return None
    if pos and kw != "linear-change":
        _err(pos[0], "unexpected positional argument", ["option"])
    if kw in ("check-admissible", "blowup", "linear-change", "assert-monomial", "assert-invariant",
              "assert-resolved", "chain", "suggest-center") and not (scope.has_theta and scope.has_ideal):
        _err(head, f"{kw} needs a distribution and an ideal", ["distribution", "ideal"])
    if kw in ("check-admissible", "blowup"):
        ct = stmt.option_token("center")
        if ct is None:
            _err(head, f"{kw} needs center=", ['center="x,y"'])
        center = _name_list(ct, names)
        if not center:
            _err(ct, "empty center")
        if kw == "blowup":
            ch = stmt.option_token("chart")
            if ch is None:
                _err(head, "blowup needs chart=", ["chart=VAR"])
            if ch.value not in names:
                raise UndeclaredIdentifierError(f"undeclared variable {ch.value!r}", ch.line, ch.vcol, list(names))
            if ch.value not in center:
                _err(ch, f"chart variable {ch.value!r} not in center", center)
            new = _new_names(stmt.option_token("names"), len(names))
            scope.stack.append(tuple(new) if new else tuple(n + "'" for n in names))
        return None
    if kw == "linear-change":
        if len(pos) != 1 or pos[0].kind != "string":
            _err(head, "linear-change expects one string of coordinate forms", ['"f1, f2, ..."'])
        forms = split_list(pos[0].value)
        if len(forms) != len(names):
            raise DimensionMismatchError(f"expected {len(names)} coordinate forms, got {len(forms)}",
                                         pos[0].line, pos[0].vcol)
        _check_expression(pos[0].value, pos[0], names, False)
        mode = opts.get("mode", "apply")
        if mode not in ("apply", "probe"):
            _err(stmt.option_token("mode"), "mode must be apply or probe", ["apply", "probe"])
        new = _new_names(stmt.option_token("names"), len(names))
        if mode == "apply":
            scope.stack.append(tuple(new) if new else tuple(n + "~" for n in names))
        return None
    if kw in ("assert-monomial", "assert-invariant", "assert-resolved"):
        et = stmt.option_token("expect")
        if et is not None and et.value not in ("true", "false"):
            _err(et, "expect must be true or false", ["true", "false"])
        return None
    if kw == "chain":
        mt = stmt.option_token("max")
        if mt is not None and (not mt.value.isdigit() or int(mt.value) < 1):
            _err(mt, "max must be a positive integer", ["integer"])
        at = stmt.option_token("at")
        if at is not None:
            parts = [p.strip() for p, _ in split_list(at.value)]
            if len(parts) != len(names):
                raise DimensionMismatchError(f"point needs {len(names)} coordinates", at.line, at.vcol)
            for p in parts:
                if not re.fullmatch(r"-?\d+(/\d+)?", p):
                    _err(at, f"bad rational coordinate {p!r}", ["rational"])
        return None
    if kw == "undo":
        if len(scope.stack) <= 1:
            _err(head, "nothing to undo")
        scope.stack.pop()
        return None
    return None


def parse_session(text: str) -> SessionScript:
    raw = _lex(text)
    statements = []
    scope = _Scope()
    variables = None
    tag = "Z"
    for toks in raw:
        head = toks[0]
        if head.kind != "word" or head.value not in KEYWORDS:
            _err(head, f"unknown statement {head.text()!r}", sorted(KEYWORDS))
        stmt = Statement(head.value, toks[1:], head.line, head.col)
        res = _validate(stmt, scope)
        if stmt.keyword == "space":
            variables, tag = res
        statements.append(stmt)
    return SessionScript(statements, variables, tag)


def print_session(script: SessionScript) -> str:
    return script.text()
