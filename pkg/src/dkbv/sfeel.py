"""S-FEEL unary conditions: parser, printer, evaluation and datatype view.

Grammar::

    cond     := "-" | disj
    disj     := atom { "," atom }
    atom     := literal | "not(" literal ")" | cmp literal | interval
    cmp      := "<" | "<=" | ">" | ">="
    interval := ("[" | "(") literal ".." literal ("]" | ")")
    literal  := number | quoted-string | "today"
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from functools import reduce
from typing import Optional, Union as TUnion

from .datatypes import (
    STRING, DatatypeError, DerivedDatatype, Difference, Facet, FacetAnd, FacetOp,
    OneOf, PrimitiveDatatype, Restriction, Union, Value, Whole, format_value,
    parse_number,
)


class SFeelError(ValueError):
    pass


class SFeelSyntaxError(SFeelError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at byte {offset}")
        self.offset = offset


class SFeelTypeError(SFeelError):
    pass


@dataclass(frozen=True)
class Any:
    pass


@dataclass(frozen=True)
class Eq:
    value: Value


@dataclass(frozen=True)
class NotEq:
    value: Value


@dataclass(frozen=True)
class Cmp:
    op: str
    value: Value


@dataclass(frozen=True)
class Interval:
    lower_open: bool
    lo: Value
    hi: Value
    upper_open: bool


@dataclass(frozen=True)
class Or:
    items: tuple


SFeelCondition = TUnion[Any, Eq, NotEq, Cmp, Interval, Or]

ANY = Any()
CMP_OPS = ("<", "<=", ">", ">=")

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<number>-?\d+(?:\.\d+)?(?:/\d+)?)
  | (?P<dots>\.\.)
  | (?P<op><=|>=|<|>)
  | (?P<word>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<punct>[-,()\[\]])
""", re.VERBOSE)

_ESCAPES = {'"': '"', "\\": "\\", "n": "\n", "t": "\t"}


def _unquote(tok: str) -> str:
    out, i, body = [], 0, tok[1:-1]
    while i < len(body):
        ch = body[i]
        if ch == "\\":
            out.append(_ESCAPES.get(body[i + 1], body[i + 1]))
            i += 2
        else:
            out.append(ch)
            i += 1
    return "".join(out)


def _tokenize(text: str):
    tokens, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise SFeelSyntaxError(f"unexpected character {text[pos]!r}", _byte(text, pos))
        if m.lastgroup != "ws":
            tokens.append((m.lastgroup, m.group(), _byte(text, pos)))
        pos = m.end()
    tokens.append(("end", "", _byte(text, len(text))))
    return tokens


def _byte(text: str, pos: int) -> int:
    return len(text[:pos].encode("utf-8"))


class _Parser:
    def __init__(self, text: str, datatype: PrimitiveDatatype, today: Optional[int]):
        self.toks = _tokenize(text)
        self.i = 0
        self.dt = datatype
        self.today = today

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str):
        kind, tok, off = self.take()
        if tok != text:
            raise SFeelSyntaxError(f"expected {text!r}, found {tok or 'end of input'!r}", off)

    def parse(self) -> SFeelCondition:
        kind, tok, off = self.peek()
        if tok == "-" and self.toks[self.i + 1][0] == "end":
            self.i += 1
            return ANY
        atoms = [self.atom()]
        while self.peek()[1] == ",":
            self.take()
            atoms.append(self.atom())
        kind, tok, off = self.peek()
        if kind != "end":
            raise SFeelSyntaxError(f"unexpected {tok!r}", off)
        return atoms[0] if len(atoms) == 1 else Or(tuple(atoms))

    def atom(self) -> SFeelCondition:
        kind, tok, off = self.peek()
        if kind == "word" and tok == "not":
            self.take()
            self.expect("(")
            v = self.literal()
            if self.peek()[1] in ("..", ","):
                raise SFeelSyntaxError("not(...) takes a single value", self.peek()[2])
            self.expect(")")
            return NotEq(v)
        if kind == "op":
            self.take()
            self._numeric_only(off)
            return Cmp(tok, self.literal())
        if tok in ("[", "("):
            self.take()
            self._numeric_only(off)
            lo = self.literal()
            self.expect("..")
            hi = self.literal()
            kind2, close, off2 = self.take()
            if close not in ("]", ")"):
                raise SFeelSyntaxError("expected ']' or ')'", off2)
            if lo.num > hi.num:
                raise SFeelError(f"malformed interval: {format_value(lo)} > {format_value(hi)}")
            return Interval(tok == "(", lo, hi, close == ")")
        return Eq(self.literal())

    def _numeric_only(self, off: int):
        if not self.dt.is_numeric:
            raise SFeelTypeError(f"comparison on {self.dt} attribute at byte {off}")

    def literal(self) -> Value:
        kind, tok, off = self.take()
        if kind == "string":
            if self.dt is not STRING:
                raise SFeelTypeError(f"string literal for {self.dt} attribute at byte {off}")
            return Value(STRING, _unquote(tok))
        if kind == "number":
            if self.dt is STRING:
                raise SFeelTypeError(f"number for string attribute at byte {off}")
            return self._num(parse_number(tok), off)
        if kind == "word" and tok == "today":
            if self.dt is STRING:
                raise SFeelTypeError(f"today for string attribute at byte {off}")
            if self.today is None:
                raise SFeelError("the constant today has no value")
            return self._num(self.today, off)
        raise SFeelSyntaxError(f"expected a literal, found {tok or 'end of input'!r}", off)

    def _num(self, x, off: int) -> Value:
        try:
            return Value(self.dt, x)
        except DatatypeError as exc:
            raise SFeelTypeError(f"{exc} at byte {off}") from None


def parse(text: str, datatype: PrimitiveDatatype, today: Optional[int] = None) -> SFeelCondition:
    return _Parser(text, datatype, today).parse()


def print_condition(c: SFeelCondition) -> str:
    if isinstance(c, Any):
        return "-"
    if isinstance(c, Eq):
        return format_value(c.value)
    if isinstance(c, NotEq):
        return f"not({format_value(c.value)})"
    if isinstance(c, Cmp):
        return f"{c.op}{format_value(c.value)}"
    if isinstance(c, Interval):
        return ("(" if c.lower_open else "[") + format_value(c.lo) + ".." + \
            format_value(c.hi) + (")" if c.upper_open else "]")
    return ", ".join(print_condition(x) for x in c.items)


def evaluate(c: SFeelCondition, v: Value) -> bool:
    """Direct semantics, used by the execution oracle."""
    if isinstance(c, Any):
        return True
    if isinstance(c, Eq):
        return v.data == c.value.data
    if isinstance(c, NotEq):
        return v.data != c.value.data
    if isinstance(c, Cmp):
        a, b = v.num, c.value.num
        return {"<": a < b, "<=": a <= b, ">": a > b, ">=": a >= b}[c.op]
    if isinstance(c, Interval):
        x = v.num
        above = x > c.lo.num if c.lower_open else x >= c.lo.num
        below = x < c.hi.num if c.upper_open else x <= c.hi.num
        return above and below
    return any(evaluate(x, v) for x in c.items)


_OPS = {"<": FacetOp.LT, "<=": FacetOp.LEQ, ">": FacetOp.GT, ">=": FacetOp.GEQ}


def to_derived(c: SFeelCondition, datatype: PrimitiveDatatype) -> DerivedDatatype:
    d = datatype
    if isinstance(c, Any):
        return Whole(d)
    if isinstance(c, Eq):
        return Restriction(d, Facet(FacetOp.EQ, c.value))
    if isinstance(c, NotEq):
        return Difference(Whole(d), OneOf(d, (c.value,)))
    if isinstance(c, Cmp):
        return Restriction(d, Facet(_OPS[c.op], c.value))
    if isinstance(c, Interval):
        lo = Facet(FacetOp.GT if c.lower_open else FacetOp.GEQ, c.lo)
        hi = Facet(FacetOp.LT if c.upper_open else FacetOp.LEQ, c.hi)
        return Restriction(d, FacetAnd((lo, hi)))
    parts = [to_derived(x, d) for x in c.items]
    return reduce(lambda acc, p: Union(p, acc), reversed(parts[:-1]), parts[-1])


def literals(c: SFeelCondition) -> list:
    if isinstance(c, Any):
        return []
    if isinstance(c, (Eq, NotEq, Cmp)):
        return [c.value]
    if isinstance(c, Interval):
        return [c.lo, c.hi]
    return [v for x in c.items for v in literals(x)]


def check_type(c: SFeelCondition, datatype: PrimitiveDatatype) -> list:
    """Typing errors of an already built condition (empty when well typed)."""
    errs = []
    if isinstance(c, Or):
        if len(c.items) < 2 or any(isinstance(x, Or) for x in c.items):
            errs.append("malformed disjunction")
        for x in c.items:
            errs.extend(check_type(x, datatype))
        return errs
    if isinstance(c, (Cmp, Interval)) and not datatype.is_numeric:
        errs.append(f"comparison on {datatype} attribute")
    for v in literals(c):
        if v.datatype is not datatype:
            errs.append(f"literal {format_value(v)} is not a {datatype} value")
    return errs
