"""Text format for decision knowledge bases.

A file is a sequence of line-oriented statements; ``#`` starts a comment.

    today = 20000
    concept Ship
    role carries
    feature length : real
    axiom some stype : string{"CCV"} implies Ship and only length : real[= 135]
    roleaxiom R implies S            # or: roleaxiom R disjoint S
    featureaxiom F implies G         # or: featureaxiom F disjoint G
    bridge Ship
    template phi = some stype : string and some cargo : real

    table Sc hit U
      input length : real where >= 0
      output Enter : string range "y", "n" default "n"
      rule <260, <10 -> "y"          # one condition per input, "|" separated
    end

    drg
      inputdata length : real where >= 0
      flow length -> Sc.length
      outputs Sc
      bkm Ontology
      bkmreq Ontology -> Sc
    end

    fact Ship(s1)
    fact carries(s1, c1)
    fact length(s1, 135)

Rule lines separate input conditions with ``|`` and put the outputs after
``->``.  Concepts use ``Top``, ``Bottom``, ``not``, ``and``, ``or``,
``some R . C``, ``all R . C``, ``some F : E``, ``only F : E``, ``undef F``
and ``defined F``.  Data ranges are ``real``, ``real[>= 0 and < 9]``,
``string{"a", "b"}`` and the parenthesised ``(E | E)``, ``(E & E)``,
``(E \\ E)``.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Optional

from . import sfeel
from .datatypes import (
    DatatypeError, Difference, Facet, FacetAnd, FacetNot, FacetOp, FacetOr,
    Intersection, OneOf, PrimitiveDatatype, Restriction, Union, Value, Whole,
    format_value, parse_number,
)
from .dl_core import (
    BOT, TOP, And, ConceptFact, ConceptIncl, DlSignature, Exists, ExistsF, FeatureDisj,
    FeatureFact, FeatureIncl, Forall, Not, Name, Or, RoleDisj, RoleFact, RoleIncl, Undef,
    desugar_feature_forall, format_concept,
)
from .dmn_model import DecisionTable, Drg, HitPolicy, Rule
from .encoding import Dkb, drg_features, validate_dkb


@dataclass(frozen=True)
class Diagnostic:
    line: int
    column: int
    message: str

    def __str__(self) -> str:
        return f"line {self.line}, column {self.column}: {self.message}"


class DkbError(ValueError):
    def __init__(self, diagnostics: list):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(str(d) for d in self.diagnostics))


class _Fail(Exception):
    def __init__(self, message: str, column: int = 1, line: Optional[int] = None):
        super().__init__(message)
        self.column = column
        self.line = line


# -- tokens -------------------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<string>"(?:[^"\\]|\\.)*")
  | (?P<number>-?\d+(?:\.\d+)?(?:/\d+)?)
  | (?P<op><=|>=|->|<|>|=)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*(?:\.[A-Za-z_][A-Za-z0-9_]*)?)
  | (?P<punct>[.:,()\[\]{}|&\\])
""", re.VERBOSE)


def _tokens(text: str, col0: int = 1) -> list:
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise _Fail(f"unexpected character {text[pos]!r}", col0 + pos)
        if m.lastgroup != "ws":
            out.append((m.lastgroup, m.group(), col0 + pos))
        pos = m.end()
    out.append(("end", "", col0 + len(text)))
    return out


DATATYPES = {d.value: d for d in PrimitiveDatatype}
_OPS = {op.value: op for op in FacetOp}
_KEYWORDS = {"not", "and", "or", "some", "all", "only", "undef", "defined", "Top", "Bottom"}


class _Expr:
    """Recursive-descent parser for concepts and data ranges on one line."""

    def __init__(self, text: str, col0: int, features: dict):
        self.toks = _tokens(text, col0)
        self.i = 0
        self.features = features

    def peek(self, k: int = 0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def take(self, want: Optional[str] = None):
        kind, tok, col = self.toks[self.i]
        if want is not None and tok != want:
            raise _Fail(f"expected {want!r}, found {tok or 'end of line'!r}", col)
        self.i += 1
        return kind, tok, col

    def ident(self) -> str:
        kind, tok, col = self.take()
        if kind != "ident" or tok in _KEYWORDS:
            raise _Fail(f"expected a name, found {tok or 'end of line'!r}", col)
        return tok

    def done(self):
        kind, tok, col = self.peek()
        if kind != "end":
            raise _Fail(f"unexpected {tok!r}", col)

    # concepts
    def concept(self):
        parts = [self.conjunction()]
        while self.peek()[1] == "or":
            self.take()
            parts.append(self.conjunction())
        out = parts[-1]
        for p in reversed(parts[:-1]):
            out = Or(p, out)
        return out

    def conjunction(self):
        parts = [self.unary()]
        while self.peek()[1] == "and":
            self.take()
            parts.append(self.unary())
        if len(parts) == 1:
            return parts[0]
        out = parts[-1]
        for p in reversed(parts[:-1]):
            out = And(p, out)
        return out

    def unary(self):
        kind, tok, col = self.peek()
        if tok == "(":
            self.take()
            c = self.concept()
            self.take(")")
            return c
        if tok == "Top":
            self.take()
            return TOP
        if tok == "Bottom":
            self.take()
            return BOT
        if tok == "not":
            self.take()
            return Not(self.unary())
        if tok in ("some", "all"):
            self.take()
            name = self.ident()
            sep = self.peek()[1]
            if sep == "." or tok == "all":
                self.take(".")
                filler = self.unary()
                return Exists(name, filler) if tok == "some" else Forall(name, filler)
            self.take(":")
            return ExistsF(name, self.datarange(self._ftype(name, col)))
        if tok == "only":
            self.take()
            name = self.ident()
            self.take(":")
            return desugar_feature_forall(name, self.datarange(self._ftype(name, col)))
        if tok == "undef":
            self.take()
            return Undef(self.ident())
        if tok == "defined":
            self.take()
            name = self.ident()
            return ExistsF(name, Whole(self._ftype(name, col)))
        return Name(self.ident())

    def _ftype(self, name: str, col: int) -> PrimitiveDatatype:
        if name not in self.features:
            raise _Fail(f"unknown feature {name}", col)
        return self.features[name]

    # data ranges
    def datarange(self, expect: Optional[PrimitiveDatatype] = None):
        kind, tok, col = self.peek()
        if tok == "(":
            self.take()
            left = self.datarange(expect)
            kind2, op, col2 = self.take()
            if op not in ("|", "&", "\\"):
                raise _Fail("expected '|', '&' or '\\' in a data range", col2)
            right = self.datarange(expect)
            self.take(")")
            try:
                return {"|": Union, "&": Intersection, "\\": Difference}[op](left, right)
            except DatatypeError as exc:
                raise _Fail(str(exc), col) from None
        if tok not in DATATYPES:
            raise _Fail(f"expected a datatype, found {tok or 'end of line'!r}", col)
        self.take()
        d = DATATYPES[tok]
        if expect is not None and d is not expect:
            raise _Fail(f"expected a {expect.value} range, found {d.value}", col)
        if self.peek()[1] == "{":
            self.take()
            vals = []
            while self.peek()[1] != "}":
                vals.append(self.value(d))
                if self.peek()[1] == ",":
                    self.take()
            self.take("}")
            return OneOf(d, tuple(vals))
        if self.peek()[1] == "[":
            self.take()
            f = self.formula(d)
            self.take("]")
            return Restriction(d, f)
        return Whole(d)

    def formula(self, d):
        parts = [self.fatom(d)]
        word = self.peek()[1]
        if word in ("and", "or"):
            while self.peek()[1] == word:
                self.take()
                parts.append(self.fatom(d))
            return (FacetAnd if word == "and" else FacetOr)(tuple(parts))
        return parts[0]

    def fatom(self, d):
        kind, tok, col = self.peek()
        if tok == "not":
            self.take()
            return FacetNot(self.fatom(d))
        if tok == "(":
            self.take()
            f = self.formula(d)
            self.take(")")
            return f
        if tok not in _OPS:
            raise _Fail(f"expected a comparison, found {tok or 'end of line'!r}", col)
        self.take()
        try:
            return Facet(_OPS[tok], self.value(d))
        except DatatypeError as exc:
            raise _Fail(str(exc), col) from None

    def value(self, d: PrimitiveDatatype) -> Value:
        kind, tok, col = self.take()
        try:
            if kind == "string":
                return Value(d, sfeel._unquote(tok))
            if kind == "number":
                return Value(d, parse_number(tok))
        except DatatypeError as exc:
            raise _Fail(str(exc), col) from None
        raise _Fail(f"expected a literal, found {tok or 'end of line'!r}", col)


def _split(text: str, sep: str) -> list:
    """Split on sep outside double quotes; returns (piece, offset) pairs."""
    out, start, i, quoted = [], 0, 0, False
    while i < len(text):
        ch = text[i]
        if ch == "\\" and quoted:
            i += 2
            continue
        if ch == '"':
            quoted = not quoted
        elif not quoted and text.startswith(sep, i):
            out.append((text[start:i], start))
            i += len(sep)
            start = i
            continue
        i += 1
    out.append((text[start:], start))
    return out


def _strip_comment(line: str) -> str:
    quoted, i = False, 0
    while i < len(line):
        ch = line[i]
        if ch == "\\" and quoted:
            i += 2
            continue
        if ch == '"':
            quoted = not quoted
        elif ch == "#" and not quoted:
            return line[:i]
        i += 1
    return line


# -- the document parser ----------------------------------------------------------

_NAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*$")
_QNAME = re.compile(r"[A-Za-z_][A-Za-z0-9_]*(\.[A-Za-z_][A-Za-z0-9_]*)?$")


class _Doc:
    def __init__(self, text: str, today: Optional[int]):
        self.lines = text.splitlines()
        self.today_override = today
        self.today: Optional[int] = None
        self.concepts, self.roles, self.features = [], [], {}
        self.tables, self.drg_lines = [], []
        self.later = []           # (lineno, kind, rest, col)
        self.bridge = None
        self.diags = []

    def err(self, line: int, col: int, msg: str):
        self.diags.append(Diagnostic(line, col, msg))

    def run(self) -> Dkb:
        i = 0
        while i < len(self.lines):
            n = i + 1
            raw = _strip_comment(self.lines[i])
            body = raw.strip()
            col = len(raw) - len(raw.lstrip()) + 1
            i += 1
            if not body:
                continue
            word, _, rest = body.partition(" ")
            rest_col = col + len(word) + 1 + (len(rest) - len(rest.lstrip()))
            rest = rest.strip()
            try:
                if word == "table":
                    i = self._table(n, rest, i)
                elif word == "drg":
                    i = self._drg_block(n, i)
                elif word in ("axiom", "roleaxiom", "featureaxiom", "template", "fact"):
                    self.later.append((n, word, rest, rest_col))
                else:
                    self._declaration(n, word, rest, rest_col)
            except _Fail as exc:
                self.err(n, exc.column, str(exc))
        if self.today_override is not None:
            self.today = self.today_override
        tables = []
        for n, header, rows in self.tables:
            try:
                tables.append(self._build_table(n, header, rows))
            except _Fail as exc:
                self.err(exc.line or n, exc.column, str(exc))
        drg = self._build_drg(tables)
        sig = None
        try:
            sig = DlSignature(self.concepts, self.roles, self.features)
        except ValueError as exc:
            self.err(1, 1, str(exc))
        all_feats = dict(self.features)
        if drg is not None:
            for f, dt in drg_features(drg).items():
                all_feats.setdefault(f, dt)
        background, abox, templates = [], [], {}
        for n, kind, rest, col in self.later:
            try:
                self._statement(kind, rest, col, all_feats, background, abox, templates)
            except _Fail as exc:
                self.err(n, exc.column, str(exc))
        if self.bridge is None:
            self.err(1, 1, "no bridge concept declared")
        if self.diags or sig is None or drg is None:
            raise DkbError(self.diags)
        d = Dkb(sig, tuple(background), drg, self.bridge, tuple(abox), self.today, templates)
        errs = validate_dkb(d)
        if errs:
            raise DkbError([Diagnostic(0, 0, e) for e in errs])
        return d

    def _declaration(self, n, word, rest, col):
        if word == "today":
            m = re.fullmatch(r"=\s*(-?\d+)", rest)
            if not m:
                raise _Fail("expected 'today = <integer>'", col)
            self.today = int(m.group(1))
        elif word in ("concept", "role"):
            names = [x.strip() for x in rest.split(",")]
            for x in names:
                if not _NAME.match(x):
                    raise _Fail(f"invalid name {x!r}", col)
            (self.concepts if word == "concept" else self.roles).extend(names)
        elif word == "feature":
            m = re.fullmatch(r"(\S+)\s*:\s*(\w+)", rest)
            if not m or not _QNAME.match(m.group(1)):
                raise _Fail("expected 'feature <name> : <datatype>'", col)
            if m.group(2) not in DATATYPES:
                raise _Fail(f"unknown datatype {m.group(2)}", col)
            if m.group(1) in self.features:
                raise _Fail(f"feature {m.group(1)} declared twice", col)
            self.features[m.group(1)] = DATATYPES[m.group(2)]
        elif word == "bridge":
            if not _NAME.match(rest):
                raise _Fail("expected 'bridge <concept>'", col)
            self.bridge = rest
        else:
            raise _Fail(f"unknown statement {word!r}", max(1, col - len(word) - 1))

    def _block(self, start: int):
        rows = []
        i = start
        while i < len(self.lines):
            raw = _strip_comment(self.lines[i])
            i += 1
            body = raw.strip()
            if not body:
                continue
            col = len(raw) - len(raw.lstrip()) + 1
            if body == "end":
                return rows, i
            rows.append((i, body, col))
        raise _Fail("block is missing its 'end'", 1)

    def _table(self, n, rest, i):
        rows, i = self._block(i)
        self.tables.append((n, rest, rows))
        return i

    def _drg_block(self, n, i):
        rows, i = self._block(i)
        self.drg_lines = rows
        self.drg_at = n
        return i

    def _typed(self, text, col):
        """'<name> : <datatype> [tail]' -> name, datatype, tail, tail column."""
        m = re.match(r"(\S+)\s*:\s*(\w+)\s*", text)
        if not m:
            raise _Fail("expected '<name> : <datatype>'", col)
        if m.group(2) not in DATATYPES:
            raise _Fail(f"unknown datatype {m.group(2)}", col + m.start(2))
        return m.group(1), DATATYPES[m.group(2)], text[m.end():], col + m.end()

    def _cond(self, text, dt, col):
        try:
            return sfeel.parse(text, dt, self.today)
        except sfeel.SFeelSyntaxError as exc:
            raise _Fail(str(exc), col + exc.offset) from None
        except sfeel.SFeelError as exc:
            raise _Fail(str(exc), col) from None

    def _build_table(self, n, header, rows) -> DecisionTable:
        m = re.fullmatch(r"(\S+)(?:\s+hit\s+(\w+))?", header)
        if not m:
            raise _Fail("expected 'table <name> [hit U|A|P]'", 7)
        name = m.group(1)
        try:
            hit = HitPolicy(m.group(2) or "U")
        except ValueError:
            raise _Fail(f"unknown hit policy {m.group(2)}", 7) from None
        inputs, outputs, atype, infacet, orange, odef, rules = [], [], {}, {}, {}, {}, []
        for ln, body, col in rows:
            word, _, rest = body.partition(" ")
            rcol = col + len(word) + 1
            try:
                if word == "input":
                    a, dt, tail, tcol = self._typed(rest, rcol)
                    inputs.append(a)
                    atype[a] = dt
                    if tail.startswith("where"):
                        infacet[a] = self._cond(tail[5:].strip(), dt, tcol + 6)
                    elif tail.strip():
                        raise _Fail("expected 'where <condition>'", tcol)
                elif word == "output":
                    b, dt, tail, tcol = self._typed(rest, rcol)
                    outputs.append(b)
                    atype[b] = dt
                    mm = re.fullmatch(r"range\s+(.*?)(?:\s+default\s+(.*))?", tail.strip())
                    if not mm:
                        raise _Fail("expected 'range <values> [default <value>]'", tcol)
                    orange[b] = tuple(self._literal(x, dt, tcol) for x, _ in _split(mm.group(1), ","))
                    if mm.group(2):
                        odef[b] = self._literal(mm.group(2), dt, tcol)
                elif word == "rule":
                    halves = _split(rest, "->")
                    if len(halves) != 2:
                        raise _Fail("expected '<conditions> -> <outputs>'", rcol)
                    conds = _split(halves[0][0], "|") if inputs or halves[0][0].strip() else []
                    outs = _split(halves[1][0], "|")
                    if len(conds) != len(inputs):
                        raise _Fail(f"rule has {len(conds)} conditions for {len(inputs)} inputs", rcol)
                    if len(outs) != len(outputs):
                        raise _Fail(f"rule has {len(outs)} outputs for {len(outputs)} output attributes",
                                    rcol + halves[1][1])
                    ifs = {}
                    for a, (txt, off) in zip(inputs, conds):
                        ifs[a] = self._cond(txt.strip(), atype[a], rcol + off)
                    thens = {b: self._literal(txt, atype[b], rcol + halves[1][1] + off)
                             for b, (txt, off) in zip(outputs, outs)}
                    rules.append(Rule(ifs, thens))
                else:
                    raise _Fail(f"unknown table statement {word!r}", col)
            except _Fail as exc:
                raise _Fail(str(exc), exc.column, ln) from None
        return DecisionTable(name, tuple(inputs), tuple(outputs), atype, infacet, orange, odef,
                             tuple(rules), hit)

    def _literal(self, text, dt, col) -> Value:
        text = text.strip()
        try:
            if text.startswith('"') and text.endswith('"') and len(text) >= 2:
                return Value(dt, sfeel._unquote(text))
            if text == "today" and self.today is not None:
                return Value(dt, self.today)
            return Value(dt, parse_number(text))
        except (DatatypeError, ValueError, ZeroDivisionError):
            raise _Fail(f"{text!r} is not a {dt.value} literal", col) from None

    def _build_drg(self, tables) -> Optional[Drg]:
        inputs, datatypes, infacet, flows, outputs, bkms, edges = [], {}, {}, [], None, [], []
        ok = True
        for ln, body, col in self.drg_lines:
            word, _, rest = body.partition(" ")
            rcol = col + len(word) + 1
            try:
                if word == "inputdata":
                    p, dt, tail, tcol = self._typed(rest, rcol)
                    inputs.append(p)
                    datatypes[p] = dt
                    if tail.startswith("where"):
                        infacet[p] = self._cond(tail[5:].strip(), dt, tcol + 6)
                    elif tail.strip():
                        raise _Fail("expected 'where <condition>'", tcol)
                elif word == "flow":
                    m = re.fullmatch(r"(\S+)\s*->\s*(\S+)", rest)
                    if not m:
                        raise _Fail("expected 'flow <source> -> <Table.input>'", rcol)
                    flows.append((m.group(1), m.group(2)))
                elif word == "outputs":
                    outputs = [x.strip() for x in rest.split(",") if x.strip()]
                elif word == "bkm":
                    bkms.append(rest)
                elif word == "bkmreq":
                    m = re.fullmatch(r"(\S+)\s*->\s*(\S+)", rest)
                    if not m:
                        raise _Fail("expected 'bkmreq <bkm> -> <table>'", rcol)
                    edges.append((m.group(1), m.group(2)))
                else:
                    raise _Fail(f"unknown graph statement {word!r}", col)
            except _Fail as exc:
                self.err(ln, exc.column, str(exc))
                ok = False
        if not ok:
            return None
        if outputs is None:
            outputs = [t.name for t in tables]
        return Drg(tuple(inputs), datatypes, infacet, tuple(tables), tuple(outputs),
                   tuple(bkms), tuple(flows), tuple(edges))

    def _statement(self, kind, rest, col, feats, background, abox, templates):
        if kind == "axiom":
            halves = _keyword_split(rest, "implies")
            if halves is None:
                raise _Fail("expected '<concept> implies <concept>'", col)
            (lhs, lo), (rhs, ro) = halves
            background.append(ConceptIncl(self._concept(lhs, col + lo, feats),
                                          self._concept(rhs, col + ro, feats)))
        elif kind in ("roleaxiom", "featureaxiom"):
            m = re.fullmatch(r"(\S+)\s+(implies|disjoint)\s+(\S+)", rest)
            if not m:
                raise _Fail(f"expected '{kind} <name> implies|disjoint <name>'", col)
            a, how, b = m.groups()
            if kind == "roleaxiom":
                background.append(RoleIncl(a, b) if how == "implies" else RoleDisj(a, b))
            else:
                background.append(FeatureIncl(a, b) if how == "implies" else FeatureDisj(a, b))
        elif kind == "template":
            m = re.match(r"([A-Za-z_][A-Za-z0-9_]*)\s*=\s*", rest)
            if not m:
                raise _Fail("expected 'template <name> = <concept>'", col)
            if m.group(1) in templates:
                raise _Fail(f"template {m.group(1)} defined twice", col)
            templates[m.group(1)] = self._concept(rest[m.end():], col + m.end(), feats)
        else:
            m = re.fullmatch(r"(\S+?)\s*\(\s*(.*?)\s*\)", rest)
            if not m:
                raise _Fail("expected 'fact P(o)' or 'fact P(o, x)'", col)
            pred, args = m.group(1), [a for a, _ in _split(m.group(2), ",")]
            args = [a.strip() for a in args]
            if len(args) == 1:
                abox.append(ConceptFact(pred, args[0]))
            elif len(args) == 2 and pred in feats:
                abox.append(FeatureFact(pred, args[0], self._literal(args[1], feats[pred], col)))
            elif len(args) == 2:
                abox.append(RoleFact(pred, args[0], args[1]))
            else:
                raise _Fail("facts take one or two arguments", col)

    def _concept(self, text, col, feats):
        p = _Expr(text, col, feats)
        c = p.concept()
        p.done()
        return c


def _keyword_split(text: str, word: str):
    pieces = [(m.start(), m.end()) for m in re.finditer(rf"\b{word}\b", text)]
    if len(pieces) != 1:
        return None
    s, e = pieces[0]
    return (text[:s], 0), (text[e:], e)


def parse_dkb(text: str, today: Optional[int] = None) -> Dkb:
    """Parse and validate; raises DkbError with line/column diagnostics.

    ``today`` overrides the file's own ``today`` constant.
    """
    return _Doc(text, today).run()


def parse_concept(text: str, features: dict):
    p = _Expr(text, 1, features)
    try:
        c = p.concept()
        p.done()
    except _Fail as exc:
        raise DkbError([Diagnostic(1, exc.column, str(exc))]) from None
    return c


# -- emitter ------------------------------------------------------------------------

def emit_dkb(d: Dkb) -> str:
    out = []
    if d.today is not None:
        out.append(f"today = {d.today}")
    sig = d.signature
    for c in sorted(sig.concepts):
        out.append(f"concept {c}")
    for r in sorted(sig.roles):
        out.append(f"role {r}")
    for f, dt in sig.features.items():
        out.append(f"feature {f} : {dt.value}")
    out.append(f"bridge {d.bridge}")
    out.append("")
    for ax in d.background:
        out.append(emit_axiom(ax))
    for name, c in d.templates.items():
        out.append(f"template {name} = {format_concept(c)}")
    for t in d.drg.tables:
        out.append("")
        out += _emit_table(t)
    g = d.drg
    out += ["", "drg"]
    for p in g.input_data:
        line = f"  inputdata {p} : {g.datatypes[p].value}"
        if p in g.infacet:
            line += " where " + sfeel.print_condition(g.infacet[p])
        out.append(line)
    for src, tgt in g.flows:
        out.append(f"  flow {src} -> {tgt}")
    out.append("  outputs " + ", ".join(g.outputs))
    for b in g.bkms:
        out.append(f"  bkm {b}")
    for b, t in g.bkm_edges:
        out.append(f"  bkmreq {b} -> {t}")
    out.append("end")
    if d.abox:
        out.append("")
    for f in d.abox:
        if isinstance(f, ConceptFact):
            out.append(f"fact {f.concept}({f.obj})")
        elif isinstance(f, RoleFact):
            out.append(f"fact {f.role}({f.subj}, {f.obj})")
        else:
            out.append(f"fact {f.feature}({f.obj}, {format_value(f.value)})")
    return "\n".join(out) + "\n"


def emit_axiom(ax) -> str:
    if isinstance(ax, ConceptIncl):
        return f"axiom {format_concept(ax.sub)} implies {format_concept(ax.sup)}"
    if isinstance(ax, RoleIncl):
        return f"roleaxiom {ax.sub} implies {ax.sup}"
    if isinstance(ax, RoleDisj):
        return f"roleaxiom {ax.first} disjoint {ax.second}"
    if isinstance(ax, FeatureIncl):
        return f"featureaxiom {ax.sub} implies {ax.sup}"
    return f"featureaxiom {ax.first} disjoint {ax.second}"


def _emit_table(t: DecisionTable) -> list:
    out = [f"table {t.name} hit {t.hit.value}"]
    for a in t.inputs:
        line = f"  input {a} : {t.atype[a].value}"
        if a in t.infacet:
            line += " where " + sfeel.print_condition(t.infacet[a])
        out.append(line)
    for b in t.outputs:
        line = f"  output {b} : {t.atype[b].value} range " + \
            ", ".join(format_value(v) for v in t.orange[b])
        if b in t.odef:
            line += " default " + format_value(t.odef[b])
        out.append(line)
    for r in t.rules:
        conds = " | ".join(sfeel.print_condition(r.if_entries[a]) for a in t.inputs)
        outs = " | ".join(format_value(r.then_entries[b]) for b in t.outputs)
        out.append(f"  rule {conds} -> {outs}")
    out.append("end")
    return out
