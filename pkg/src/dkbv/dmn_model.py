"""Decision tables and decision requirements graphs.

Attributes of tables are plain names; across a graph they are addressed as
``Table.attr``.  Input data names never contain a dot.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping, Optional

from . import sfeel
from .datatypes import PrimitiveDatatype, Value, format_value, to_fraction
from .sfeel import ANY, SFeelCondition


class HitPolicy(enum.Enum):
    U = "U"
    A = "A"
    P = "P"


@dataclass(frozen=True)
class Rule:
    if_entries: Mapping[str, SFeelCondition]
    then_entries: Mapping[str, Value]


@dataclass(frozen=True)
class DecisionTable:
    name: str
    inputs: tuple
    outputs: tuple
    atype: Mapping[str, PrimitiveDatatype]
    infacet: Mapping[str, SFeelCondition]
    orange: Mapping[str, tuple]
    odef: Mapping[str, Value]
    rules: tuple
    hit: HitPolicy = HitPolicy.U

    def facet(self, attr: str) -> SFeelCondition:
        return self.infacet.get(attr, ANY)

    def qualified(self, attr: str) -> str:
        return f"{self.name}.{attr}"


class FacetViolation(ValueError):
    pass


class _Undefined:
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self) -> str:
        return "UNDEFINED"

    def __bool__(self) -> bool:
        return False


UNDEFINED = _Undefined()


def validate_table(t: DecisionTable) -> list:
    errs = []
    ins, outs = list(t.inputs), list(t.outputs)
    if not t.name or "." in t.name:
        errs.append(f"invalid table name {t.name!r}")
    if set(ins) & set(outs):
        errs.append(f"table {t.name}: attributes both input and output: "
                    + ", ".join(sorted(set(ins) & set(outs))))
    for a in ins + outs:
        if "." in a or not a:
            errs.append(f"table {t.name}: invalid attribute name {a!r}")
        if a not in t.atype:
            errs.append(f"table {t.name}: no datatype for {a}")
    if len(set(ins)) != len(ins) or len(set(outs)) != len(outs):
        errs.append(f"table {t.name}: duplicate attribute")
    if not outs:
        errs.append(f"table {t.name}: no output attributes")
    if errs:
        return errs
    for a in t.infacet:
        if a not in ins:
            errs.append(f"table {t.name}: facet for unknown input {a}")
        else:
            errs.extend(f"table {t.name}: facet of {a}: {e}"
                        for e in sfeel.check_type(t.infacet[a], t.atype[a]))
    for b in outs:
        rng = t.orange.get(b)
        if not rng:
            errs.append(f"table {t.name}: output {b} has no range")
            continue
        for v in rng:
            if v.datatype is not t.atype[b]:
                errs.append(f"table {t.name}: range value {format_value(v)} of {b} is not a {t.atype[b]}")
        if len(set(rng)) != len(rng):
            errs.append(f"table {t.name}: duplicate range value for {b}")
    for b, v in t.odef.items():
        if b not in outs:
            errs.append(f"table {t.name}: default for unknown output {b}")
        elif v not in t.orange.get(b, ()):
            errs.append(f"table {t.name}: default {format_value(v)} of {b} outside its range")
    for k, r in enumerate(t.rules, start=1):
        for a in ins:
            if a not in r.if_entries:
                errs.append(f"rule {k} missing entry for {a}")
            else:
                errs.extend(f"rule {k} entry for {a}: {e}"
                            for e in sfeel.check_type(r.if_entries[a], t.atype[a]))
        for a in r.if_entries:
            if a not in ins:
                errs.append(f"rule {k} has entry for unknown input {a}")
        for b in outs:
            if b not in r.then_entries:
                errs.append(f"rule {k} missing output for {b}")
            elif r.then_entries[b] not in t.orange.get(b, ()):
                errs.append(f"rule {k} output {format_value(r.then_entries[b])} for {b} outside its range")
        for b in r.then_entries:
            if b not in outs:
                errs.append(f"rule {k} has output for unknown attribute {b}")
    return errs


def rule_order(t: DecisionTable) -> tuple:
    """Rule indices (0-based) from highest to lowest priority."""
    def key(k):
        r = t.rules[k]
        return tuple(t.orange[b].index(r.then_entries[b]) for b in t.outputs) + (k,)
    return tuple(sorted(range(len(t.rules)), key=key))


@dataclass(frozen=True)
class Drg:
    input_data: tuple = ()
    datatypes: Mapping[str, PrimitiveDatatype] = field(default_factory=dict)
    infacet: Mapping[str, SFeelCondition] = field(default_factory=dict)
    tables: tuple = ()
    outputs: tuple = ()
    bkms: tuple = ()
    flows: tuple = ()
    bkm_edges: tuple = ()

    def table(self, name: str) -> DecisionTable:
        for t in self.tables:
            if t.name == name:
                return t
        raise KeyError(f"no table named {name}")

    def datatype_of(self, ref: str) -> Optional[PrimitiveDatatype]:
        if "." not in ref:
            return self.datatypes.get(ref)
        tname, attr = ref.split(".", 1)
        for t in self.tables:
            if t.name == tname:
                return t.atype.get(attr)
        return None

    def facet_of(self, ref: str) -> SFeelCondition:
        if "." not in ref:
            return self.infacet.get(ref, ANY)
        tname, attr = ref.split(".", 1)
        return self.table(tname).facet(attr)


def _is_output(g: Drg, ref: str) -> bool:
    if "." not in ref:
        return False
    tname, attr = ref.split(".", 1)
    return any(t.name == tname and attr in t.outputs for t in g.tables)


def _is_input_attr(g: Drg, ref: str) -> bool:
    if "." not in ref:
        return False
    tname, attr = ref.split(".", 1)
    return any(t.name == tname and attr in t.inputs for t in g.tables)


def requirements(g: Drg) -> set:
    """Edges of the requirement relation between graph nodes."""
    edges = set()
    for src, tgt in g.flows:
        target_table = tgt.split(".", 1)[0]
        source = src.split(".", 1)[0] if "." in src else src
        edges.add((source, target_table))
    edges.update(g.bkm_edges)
    return edges


def _table_deps(g: Drg) -> dict:
    deps = {t.name: set() for t in g.tables}
    for src, tgt in g.flows:
        if "." in src and "." in tgt:
            s, d = src.split(".", 1)[0], tgt.split(".", 1)[0]
            if s in deps and d in deps:
                deps[d].add(s)
    return deps


def validate_drg(g: Drg) -> list:
    errs = []
    names = [t.name for t in g.tables]
    for n in sorted({n for n in names if names.count(n) > 1}):
        errs.append(f"duplicate table name {n}")
    for t in g.tables:
        errs.extend(validate_table(t))
    for p in g.input_data:
        if "." in p or not p:
            errs.append(f"invalid input data name {p!r}")
        if p not in g.datatypes:
            errs.append(f"input data {p} has no datatype")
        if p in names:
            errs.append(f"input data {p} clashes with a table name")
    if len(set(g.input_data)) != len(g.input_data):
        errs.append("duplicate input data")
    for p, c in g.infacet.items():
        if p not in g.input_data:
            errs.append(f"facet for unknown input data {p}")
        elif p in g.datatypes:
            errs.extend(f"facet of {p}: {e}" for e in sfeel.check_type(c, g.datatypes[p]))
    for o in g.outputs:
        if o not in names:
            errs.append(f"output {o} is not a table")
    seen = {}
    for src, tgt in g.flows:
        if src not in g.input_data and not _is_output(g, src):
            errs.append(f"flow source {src} is neither input data nor a table output")
            continue
        if not _is_input_attr(g, tgt):
            errs.append(f"flow target {tgt} is not a table input")
            continue
        if tgt in seen:
            errs.append(f"input {tgt} fed by both {seen[tgt]} and {src}")
        seen[tgt] = src
        if g.datatype_of(src) is not g.datatype_of(tgt):
            errs.append(f"flow {src} -> {tgt} joins {g.datatype_of(src)} and {g.datatype_of(tgt)}")
    for b, t in g.bkm_edges:
        if b not in g.bkms:
            errs.append(f"unknown business knowledge model {b}")
        if t not in names:
            errs.append(f"requirement to unknown table {t}")
    if not errs and _cycle(g):
        errs.append("table requirements are cyclic: " + " -> ".join(_cycle(g)))
    return errs


def _cycle(g: Drg) -> list:
    deps = _table_deps(g)
    state, path = {}, []

    def visit(n):
        state[n] = 1
        path.append(n)
        for m in sorted(deps[n]):
            if state.get(m) == 1:
                return path[path.index(m):] + [m]
            if m not in state:
                found = visit(m)
                if found:
                    return found
        state[n] = 2
        path.pop()
        return None

    for t in g.tables:
        if t.name not in state:
            found = visit(t.name)
            if found:
                return found
    return []


def free_inputs(g: Drg) -> set:
    fed = {tgt for _, tgt in g.flows}
    free = set(g.input_data)
    for t in g.tables:
        free.update(t.qualified(a) for a in t.inputs if t.qualified(a) not in fed)
    return free


def bound_attrs(g: Drg) -> set:
    every = set()
    for t in g.tables:
        every.update(t.qualified(a) for a in t.inputs + t.outputs)
    return every - free_inputs(g)


def topo_order(g: Drg) -> list:
    deps = _table_deps(g)
    done, order = set(), []
    pending = [t.name for t in g.tables]
    while pending:
        for n in pending:
            if deps[n] <= done:
                order.append(n)
                done.add(n)
                pending.remove(n)
                break
        else:
            raise ValueError("cyclic requirement graph")
    return [g.table(n) for n in order]


def _matches(t: DecisionTable, rule: Rule, values: dict) -> bool:
    for a in t.inputs:
        v = values.get(a, UNDEFINED)
        if v is UNDEFINED or not sfeel.evaluate(rule.if_entries[a], v):
            return False
    return True


def execute(g: Drg, assignment: Mapping[str, Value]) -> dict:
    """Complete-information evaluation; returns {(table, output): value}."""
    missing = free_inputs(g) - set(assignment)
    if missing:
        raise ValueError("assignment misses " + ", ".join(sorted(missing)))
    for ref in sorted(free_inputs(g)):
        _check_facet(g, ref, assignment[ref])
    env = dict(assignment)
    feeds = {tgt: src for src, tgt in g.flows}
    result = {}
    for t in topo_order(g):
        values = {}
        for a in t.inputs:
            ref = t.qualified(a)
            v = env.get(feeds[ref], UNDEFINED) if ref in feeds else env[ref]
            if v is not UNDEFINED:
                _check_facet(g, ref, v)
            values[a] = v
            env[ref] = v
        fired = next((t.rules[k] for k in rule_order(t) if _matches(t, t.rules[k], values)), None)
        for b in t.outputs:
            if fired is not None:
                out = fired.then_entries[b]
            else:
                out = t.odef.get(b, UNDEFINED)
            result[(t.name, b)] = out
            env[t.qualified(b)] = out
    return result


def _check_facet(g: Drg, ref: str, v: Value):
    dt = g.datatype_of(ref)
    if v.datatype is not dt:
        raise FacetViolation(f"{ref} expects a {dt} value, got {format_value(v)}")
    if not sfeel.evaluate(g.facet_of(ref), v):
        raise FacetViolation(f"{format_value(v)} violates the facet "
                             f"{sfeel.print_condition(g.facet_of(ref))} of {ref}")


def make_table(name: str, inputs: list, outputs: list, rules: list, *,
               facets: Optional[dict] = None, ranges: Optional[dict] = None,
               defaults: Optional[dict] = None, hit: str = "U", today: Optional[int] = None
               ) -> DecisionTable:
    """Convenience builder from text.

    ``inputs``/``outputs`` are (name, datatype) pairs, each rule is
    ``([cond text per input], [output literal per output])``, ranges map an
    output to literal texts.
    """
    atype = {a: dt for a, dt in inputs + outputs}
    ins = tuple(a for a, _ in inputs)
    outs = tuple(b for b, _ in outputs)
    facets = {a: sfeel.parse(txt, atype[a], today) for a, txt in (facets or {}).items()}
    orange = {b: tuple(_lit(x, atype[b]) for x in (ranges or {})[b]) for b in outs}
    odef = {b: _lit(x, atype[b]) for b, x in (defaults or {}).items()}
    rs = []
    for conds, thens in rules:
        rs.append(Rule({a: sfeel.parse(c, atype[a], today) for a, c in zip(ins, conds)},
                       {b: _lit(x, atype[b]) for b, x in zip(outs, thens)}))
    return DecisionTable(name, ins, outs, atype, facets, orange, odef, tuple(rs), HitPolicy(hit))


def _lit(x, dt: PrimitiveDatatype) -> Value:
    if isinstance(x, Value):
        return x
    if dt.is_numeric:
        return Value(dt, to_fraction(x))
    return Value(dt, x)
