"""Export to OWL 2 functional-style syntax, plus a checker for that syntax.

Names become IRIs under one namespace (``:Sc.length`` and so on).  OWL has
no exact counterpart of the reals, so rational and real map to
``xsd:decimal``; a bound with no finite decimal expansion is written as an
``owl:rational`` literal.

The checker covers the fragment the exporter produces: prefixes, the
ontology header, declarations, class and data-range expressions, and the
axiom and assertion forms listed in ``_AXIOMS``.
"""
from __future__ import annotations

import re
from fractions import Fraction

from .datatypes import (
    NATURAL, INTEGER, STRING, Difference, Facet, FacetAnd, FacetNot, FacetOp, Intersection,
    OneOf, PrimitiveDatatype, Restriction, Union, Value, Whole, format_number,
)
from .dl_core import (
    And, ConceptFact, ConceptIncl, Exists, ExistsF, FeatureDisj, FeatureFact, FeatureIncl,
    Forall, Kb, Name, Not, Or, RoleDisj, RoleFact, RoleIncl, Undef, TOP, BOT,
)
from .encoding import Dkb, encode_dkb

NAMESPACE = "http://example.org/dkb#"

XSD = {
    PrimitiveDatatype.STRING: "xsd:string",
    PrimitiveDatatype.NATURAL: "xsd:nonNegativeInteger",
    PrimitiveDatatype.INTEGER: "xsd:integer",
    PrimitiveDatatype.RATIONAL: "xsd:decimal",
    PrimitiveDatatype.REAL: "xsd:decimal",
}

_FACETS = {FacetOp.LT: "xsd:maxExclusive", FacetOp.LEQ: "xsd:maxInclusive",
           FacetOp.GT: "xsd:minExclusive", FacetOp.GEQ: "xsd:minInclusive"}


def _iri(name: str) -> str:
    if re.fullmatch(r"[A-Za-z_][A-Za-z0-9_.\-]*", name) and not name.endswith("."):
        return ":" + name
    return "<" + NAMESPACE + name.replace(">", "%3E").replace(" ", "%20") + ">"


def _escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def literal(v: Value) -> str:
    if v.datatype is STRING:
        return f'"{_escape(v.data)}"^^xsd:string'
    x = Fraction(v.data)
    if v.datatype in (NATURAL, INTEGER):
        return f'"{x.numerator}"^^{XSD[v.datatype]}'
    d = x.denominator
    while d % 2 == 0:
        d //= 2
    while d % 5 == 0:
        d //= 5
    if d == 1:
        return f'"{format_number(x)}"^^xsd:decimal'
    return f'"{x.numerator}/{x.denominator}"^^owl:rational'


def _facet_range(base: PrimitiveDatatype, f) -> str:
    t = XSD[base]
    if isinstance(f, Facet):
        if f.op is FacetOp.EQ:
            return f"DataOneOf({literal(f.bound)})"
        return f"DatatypeRestriction({t} {_FACETS[f.op]} {literal(f.bound)})"
    if isinstance(f, FacetNot):
        return f"DataIntersectionOf({t} DataComplementOf({_facet_range(base, f.part)}))"
    parts = [_facet_range(base, p) for p in f.parts]
    if len(parts) == 1:
        return parts[0]
    head = "DataIntersectionOf" if isinstance(f, FacetAnd) else "DataUnionOf"
    return f"{head}({' '.join(parts)})"


def data_range(e) -> str:
    if isinstance(e, Whole):
        return XSD[e.base]
    if isinstance(e, OneOf):
        if not e.values:
            return f"DataIntersectionOf({XSD[e.base]} DataComplementOf({XSD[e.base]}))"
        return f"DataOneOf({' '.join(literal(v) for v in e.values)})"
    if isinstance(e, Restriction):
        return _facet_range(e.base, e.formula)
    if isinstance(e, Union):
        return f"DataUnionOf({data_range(e.left)} {data_range(e.right)})"
    if isinstance(e, Intersection):
        return f"DataIntersectionOf({data_range(e.left)} {data_range(e.right)})"
    if isinstance(e, Difference):
        return (f"DataIntersectionOf({data_range(e.left)} "
                f"DataComplementOf({data_range(e.right)}))")
    raise TypeError(f"not a derived datatype: {e!r}")


def _flatten(c, kind) -> list:
    if isinstance(c, kind):
        return _flatten(c.left, kind) + _flatten(c.right, kind)
    return [c]


def class_expression(c) -> str:
    if c is TOP:
        return "owl:Thing"
    if c is BOT:
        return "owl:Nothing"
    if isinstance(c, Name):
        return _iri(c.name)
    if isinstance(c, Not):
        return f"ObjectComplementOf({class_expression(c.arg)})"
    if isinstance(c, (And, Or)):
        head = "ObjectIntersectionOf" if isinstance(c, And) else "ObjectUnionOf"
        parts = " ".join(class_expression(p) for p in _flatten(c, type(c)))
        return f"{head}({parts})"
    if isinstance(c, Exists):
        return f"ObjectSomeValuesFrom({_iri(c.role)} {class_expression(c.filler)})"
    if isinstance(c, Forall):
        return f"ObjectAllValuesFrom({_iri(c.role)} {class_expression(c.filler)})"
    if isinstance(c, ExistsF):
        return f"DataSomeValuesFrom({_iri(c.feature)} {data_range(c.data)})"
    if isinstance(c, Undef):
        return f"ObjectComplementOf(DataSomeValuesFrom({_iri(c.feature)} rdfs:Literal))"
    raise TypeError(f"not a concept: {c!r}")


def _axiom(ax) -> str:
    if isinstance(ax, ConceptIncl):
        return f"SubClassOf({class_expression(ax.sub)} {class_expression(ax.sup)})"
    if isinstance(ax, RoleIncl):
        return f"SubObjectPropertyOf({_iri(ax.sub)} {_iri(ax.sup)})"
    if isinstance(ax, FeatureIncl):
        return f"SubDataPropertyOf({_iri(ax.sub)} {_iri(ax.sup)})"
    if isinstance(ax, RoleDisj):
        return f"DisjointObjectProperties({_iri(ax.first)} {_iri(ax.second)})"
    if isinstance(ax, FeatureDisj):
        return f"DisjointDataProperties({_iri(ax.first)} {_iri(ax.second)})"
    if isinstance(ax, ConceptFact):
        return f"ClassAssertion({class_expression(_fact_concept(ax.concept))} {_iri(ax.obj)})"
    if isinstance(ax, RoleFact):
        return f"ObjectPropertyAssertion({_iri(ax.role)} {_iri(ax.subj)} {_iri(ax.obj)})"
    if isinstance(ax, FeatureFact):
        return f"DataPropertyAssertion({_iri(ax.feature)} {_iri(ax.obj)} {literal(ax.value)})"
    raise TypeError(f"not an axiom: {ax!r}")


def _fact_concept(c):
    return Name(c) if isinstance(c, str) else c


def kb_to_owl(k: Kb, iri: str = "http://example.org/dkb") -> str:
    sig = k.signature
    lines = [f"Prefix(:=<{NAMESPACE}>)",
             "Prefix(owl:=<http://www.w3.org/2002/07/owl#>)",
             "Prefix(rdfs:=<http://www.w3.org/2000/01/rdf-schema#>)",
             "Prefix(xsd:=<http://www.w3.org/2001/XMLSchema#>)",
             f"Ontology(<{iri}>"]
    lines += [f"  Declaration(Class({_iri(c)}))" for c in sorted(sig.concepts)]
    lines += [f"  Declaration(ObjectProperty({_iri(r)}))" for r in sorted(sig.roles)]
    lines += [f"  Declaration(DataProperty({_iri(f)}))" for f in sorted(sig.features)]
    lines += [f"  Declaration(NamedIndividual({_iri(o)}))" for o in sorted(k.objects())]
    lines += [f"  FunctionalDataProperty({_iri(f)})" for f in sorted(sig.features)]
    lines += [f"  DataPropertyRange({_iri(f)} {XSD[dt]})" for f, dt in sorted(sig.features.items(), key=lambda kv: kv[0])]
    lines += ["  " + _axiom(ax) for ax in k.tbox]
    lines += ["  " + _axiom(f) for f in k.abox]
    lines.append(")")
    return "\n".join(lines) + "\n"


def dkb_to_owl(d: Dkb, **kw) -> str:
    """The encoded knowledge base of d in functional syntax."""
    return kb_to_owl(encode_dkb(d, **kw))


# -- syntax checker ------------------------------------------------------------

class OwlSyntaxError(ValueError):
    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} at offset {offset}")
        self.offset = offset


_TOKEN = re.compile(r"""
    (?P<ws>\s+|\#[^\n]*)
  | (?P<open>\()
  | (?P<close>\))
  | (?P<eq>=)
  | (?P<full><[^<>"{}|^`\\\s]*>)
  | (?P<literal>"(?:[^"\\]|\\.)*"(?:\^\^(?:<[^<>\s]*>|[A-Za-z_][\w.\-]*:[\w.\-]*)|@[A-Za-z\-]+)?)
  | (?P<pname>(?:[A-Za-z_][\w.\-]*)?:(?:[\w\-][\w.\-]*[\w\-]|[\w\-])?)
  | (?P<keyword>[A-Za-z][A-Za-z]*)
""", re.VERBOSE)


def _tokens(text: str) -> list:
    out, pos = [], 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise OwlSyntaxError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            out.append((kind, m.group(), pos))
        pos = m.end()
    out.append(("end", "", pos))
    return out


CE, DR, OPE, DPE, IND, LIT, IRI, FACET = "CE", "DR", "OPE", "DPE", "IND", "LIT", "IRI", "FACET"

# constructor -> argument kinds; a trailing "+" repeats the last kind
_CLASSES = {
    "ObjectIntersectionOf": (CE, CE, "+"), "ObjectUnionOf": (CE, CE, "+"),
    "ObjectComplementOf": (CE,), "ObjectOneOf": (IND, "+"),
    "ObjectSomeValuesFrom": (OPE, CE), "ObjectAllValuesFrom": (OPE, CE),
    "ObjectHasValue": (OPE, IND),
    "DataSomeValuesFrom": (DPE, DR), "DataAllValuesFrom": (DPE, DR),
    "DataHasValue": (DPE, LIT),
}
_RANGES = {
    "DataIntersectionOf": (DR, DR, "+"), "DataUnionOf": (DR, DR, "+"),
    "DataComplementOf": (DR,), "DataOneOf": (LIT, "+"),
    "DatatypeRestriction": (IRI, FACET, "+"),
}
_AXIOMS = {
    "SubClassOf": (CE, CE), "EquivalentClasses": (CE, CE, "+"), "DisjointClasses": (CE, CE, "+"),
    "SubObjectPropertyOf": (OPE, OPE), "SubDataPropertyOf": (DPE, DPE),
    "DisjointObjectProperties": (OPE, OPE, "+"), "DisjointDataProperties": (DPE, DPE, "+"),
    "FunctionalDataProperty": (DPE,), "DataPropertyRange": (DPE, DR),
    "ClassAssertion": (CE, IND), "ObjectPropertyAssertion": (OPE, IND, IND),
    "DataPropertyAssertion": (DPE, IND, LIT),
}
_DECLARED = {"Class": CE, "ObjectProperty": OPE, "DataProperty": DPE,
             "NamedIndividual": IND, "Datatype": DR}
_BUILTIN = {"owl:Thing": CE, "owl:Nothing": CE, "rdfs:Literal": DR}


class _Checker:
    def __init__(self, text: str):
        self.toks = _tokens(text)
        self.i = 0
        self.prefixes = set()
        self.declared = {}
        self.used = []

    def peek(self):
        return self.toks[self.i]

    def take(self, kind=None, value=None):
        tok = self.toks[self.i]
        if (kind and tok[0] != kind) or (value is not None and tok[1] != value):
            want = value or kind
            raise OwlSyntaxError(f"expected {want}, found {tok[1] or 'end of input'!r}", tok[2])
        self.i += 1
        return tok

    def iri(self):
        tok = self.peek()
        if tok[0] == "full":
            return self.take()[1]
        if tok[0] == "pname":
            prefix = tok[1].split(":", 1)[0]
            if prefix not in self.prefixes:
                raise OwlSyntaxError(f"undeclared prefix {prefix!r}", tok[2])
            return self.take()[1]
        raise OwlSyntaxError(f"expected an IRI, found {tok[1]!r}", tok[2])

    def document(self):
        while self.peek()[1] == "Prefix":
            self.take("keyword")
            self.take("open")
            tok = self.take("pname")
            if not tok[1].endswith(":"):
                raise OwlSyntaxError("a prefix name ends with ':'", tok[2])
            self.take("eq")
            self.take("full")
            self.take("close")
            self.prefixes.add(tok[1][:-1])
        self.take("keyword", "Ontology")
        self.take("open")
        if self.peek()[0] in ("full", "pname"):
            self.iri()
            if self.peek()[0] in ("full", "pname"):
                self.iri()
        while self.peek()[0] != "close":
            self.axiom()
        self.take("close")
        self.take("end")
        for kind, name, pos in self.used:
            have = self.declared.get(name, _BUILTIN.get(name))
            if name.startswith("xsd:") and kind == DR:
                continue
            if have is None:
                raise OwlSyntaxError(f"{name} is used but not declared", pos)
            if have != kind:
                raise OwlSyntaxError(f"{name} is declared as {have} but used as {kind}", pos)

    def axiom(self):
        tok = self.take("keyword")
        self.take("open")
        if tok[1] == "Declaration":
            kind = self.take("keyword")
            if kind[1] not in _DECLARED:
                raise OwlSyntaxError(f"unknown entity type {kind[1]}", kind[2])
            self.take("open")
            name = self.iri()
            self.take("close")
            self.declared[name] = _DECLARED[kind[1]]
        elif tok[1] in _AXIOMS:
            self.args(_AXIOMS[tok[1]])
        else:
            raise OwlSyntaxError(f"unknown axiom {tok[1]}", tok[2])
        self.take("close")

    def args(self, kinds):
        last = None
        for kind in kinds:
            if kind == "+":
                while self.peek()[0] != "close":
                    self.arg(last)
            else:
                self.arg(kind)
                last = kind

    def arg(self, kind):
        tok = self.peek()
        if kind in (CE, DR) and tok[0] == "keyword":
            table = _CLASSES if kind == CE else _RANGES
            if tok[1] not in table:
                raise OwlSyntaxError(f"{tok[1]} is not a {kind} constructor", tok[2])
            self.take()
            self.take("open")
            self.args(table[tok[1]])
            self.take("close")
        elif kind == LIT:
            self.take("literal")
        elif kind == FACET:
            name = self.iri()
            if not name.startswith("xsd:"):
                raise OwlSyntaxError(f"{name} is not a facet", tok[2])
            self.take("literal")
        elif kind == IRI:
            self.iri()
        else:
            name = self.iri()
            self.used.append((CE if kind == CE else DR if kind == DR else kind, name, tok[2]))


def check_functional_syntax(text: str) -> None:
    """Raise OwlSyntaxError unless text is a well-formed document."""
    _Checker(text).document()


def functional_data_properties(text: str) -> list:
    return re.findall(r"FunctionalDataProperty\(([^()\s]+)\)", text)
