"""The verification tasks over decision knowledge bases.

Each task turns into satisfiability questions about concepts w.r.t. the
encoded knowledge base.  A ``Session`` compiles the encoding once and keeps
the reasoner's caches between the questions of a task (or of several
tasks, when the caller passes one in).
"""
from __future__ import annotations

import enum
import time
from functools import reduce
from dataclasses import dataclass, field
from typing import Iterable, Optional

from .datatypes import (
    STRING, Intersection, Value, Whole, format_value, normalize_numeric, string_set,
)
from .dl_core import (
    Concept, ConceptFact, DlSignature, ExistsF, concept_errors, FeatureFact, Name, Not, RoleFact, Undef, conj,
    defined, has_value, nnf,
)
from .dmn_model import DecisionTable, Drg, free_inputs, rule_order
from .encoding import Dkb, _dkb_signature, encode_dkb, encode_if, presence
from .reasoner import DEFAULT_CLOSURE_LIMIT, FeatureSuccessor, KnotSet, Reasoner, instance_check


class Task(enum.Enum):
    UniqueHit = "unique-hit"
    AnyHit = "any-hit"
    PriorityHit = "priority-hit"
    IoRelationship = "io"
    OutputCoverage = "coverage"
    Completeness = "completeness"
    OutputDeterminability = "determinability"


@dataclass(frozen=True)
class RulePair:
    table: str
    first: int          # rule numbers count from 1, in the table's textual order
    second: int

    def __str__(self) -> str:
        return f"{self.table}: rules {self.first} and {self.second} overlap"


@dataclass(frozen=True)
class MaskedRule:
    table: str
    rule: int
    by: int

    def __str__(self) -> str:
        return f"{self.table}: rule {self.rule} never fires outside rule {self.by}"


@dataclass(frozen=True)
class OutputGap:
    """A box of inputs on which an output attribute may stay undefined.

    ``region`` pairs an input with the datatype its value lies in (None when
    the input itself is undefined); inputs left out are unconstrained.
    ``values`` is one concrete point of the box.
    """
    table: str
    attribute: str
    region: tuple = ()
    values: tuple = ()

    def __str__(self) -> str:
        parts = []
        for ref, dt in self.region:
            parts.append(f"{ref} undefined" if dt is None else f"{ref} in {describe_region(dt)}")
        where = " when " + ", ".join(parts) if parts else " for every input"
        return f"{self.table}.{self.attribute} may stay undefined{where}"


@dataclass(frozen=True)
class Example:
    """Sample input values of a model showing that something is possible."""
    values: tuple

    def __str__(self) -> str:
        return ", ".join(f"{f} = {format_value(v)}" for f, v in self.values)


@dataclass
class TaskVerdict:
    task: Task
    holds: bool
    subject: str = ""
    witnesses: list = field(default_factory=list)
    stats: dict = field(default_factory=lambda: {"reasonerCalls": 0, "elapsed": 0.0})

    def summary(self) -> str:
        words = _WORDS.get(self.task, ("holds", "fails"))
        state = words[0] if self.holds else words[1]
        subject = f" {self.subject}" if self.subject else ""
        return f"{self.task.value}{subject}: {state}"


_WORDS = {Task.OutputCoverage: ("covered", "not covered"),
          Task.IoRelationship: ("entailed", "not entailed")}


class Session:
    """One compiled encoding of a DKB, shared by many satisfiability checks."""

    def __init__(self, d: Dkb, *, background: bool = True, closed_bindings: bool = True,
                 prioritize: bool = True, closure_limit: int = DEFAULT_CLOSURE_LIMIT,
                 trace=None, extra: Iterable[Concept] = ()):
        self.dkb = d if background else d.without_background()
        self.kb = encode_dkb(self.dkb, closed_bindings=closed_bindings, prioritize=prioritize)
        self.closure_limit = closure_limit
        self.trace = trace
        self.extra = list(extra)
        self.reasoner: Optional[Reasoner] = None
        self.calls = 0

    def _ready(self, concepts: list) -> Reasoner:
        feats = self.kb.signature.features
        need = [nnf(c, feats) for c in concepts]
        r = self.reasoner
        if r is None or any(c not in r.layout.lit for c in need):
            self.extra += need
            r = self.reasoner = Reasoner(self.kb, self.extra, closure_limit=self.closure_limit,
                                         trace=self.trace)
        return r

    def prepare(self, concepts: Iterable[Concept]):
        self._ready(list(concepts))

    def satisfiable(self, *concepts: Concept) -> Optional[KnotSet]:
        """A knot set with a knot realising all concepts together, if any."""
        self.calls += 1
        return self._ready(list(concepts)).satisfiable(list(concepts))


def _run(task: Task, subject: str, body) -> TaskVerdict:
    start = time.perf_counter()
    holds, witnesses, calls = body()
    return TaskVerdict(task, holds, subject, witnesses,
                       {"reasonerCalls": calls, "elapsed": time.perf_counter() - start})


def _session(d: Dkb, session: Optional[Session], **kw) -> Session:
    return session if session is not None else Session(d, **kw)


# -- hit policies ---------------------------------------------------------------

def _overlaps(d: Dkb, m: str, only_conflicting: bool, session, kw):
    s = _session(d, session, **kw)
    t = d.drg.table(m)
    order = rule_order(t)
    pairs = []
    for i, a in enumerate(order):
        for b in order[i + 1:]:
            ra, rb = t.rules[a], t.rules[b]
            if only_conflicting and ra.then_entries == rb.then_entries:
                continue
            pairs.append((a, b))
    s.prepare([encode_if(t, k) for k in range(len(t.rules))])
    before = s.calls
    witnesses = []
    for a, b in pairs:
        if s.satisfiable(encode_if(t, a), encode_if(t, b)) is not None:
            witnesses.append(RulePair(m, min(a, b) + 1, max(a, b) + 1))
    witnesses.sort(key=lambda w: (w.first, w.second))
    return not witnesses, witnesses, s.calls - before


def check_unique_hit(d: Dkb, m: str, *, session: Optional[Session] = None, **kw) -> TaskVerdict:
    return _run(Task.UniqueHit, m, lambda: _overlaps(d, m, False, session, kw))


def check_any_hit(d: Dkb, m: str, *, session: Optional[Session] = None, **kw) -> TaskVerdict:
    return _run(Task.AnyHit, m, lambda: _overlaps(d, m, True, session, kw))


def check_priority_hit(d: Dkb, m: str, *, session: Optional[Session] = None,
                       **kw) -> TaskVerdict:
    def body():
        s = _session(d, session, **kw)
        t = d.drg.table(m)
        order = rule_order(t)
        ifs = [encode_if(t, k) for k in range(len(t.rules))]
        s.prepare(ifs + [Not(c) for c in ifs])
        before = s.calls
        witnesses = []
        for i, low in enumerate(order):
            for high in order[:i]:
                if s.satisfiable(Not(ifs[high]), ifs[low]) is None:
                    witnesses.append(MaskedRule(m, low + 1, high + 1))
                    break
        witnesses.sort(key=lambda w: w.rule)
        return not witnesses, witnesses, s.calls - before
    return _run(Task.PriorityHit, m, body)


# -- outputs --------------------------------------------------------------------

def _example(d: Dkb, ks: KnotSet) -> Example:
    vals = ks.feature_values(ks.query)
    refs = sorted(free_inputs(d.drg))
    return Example(tuple((r, vals[r]) for r in refs if r in vals))


def check_coverage(d: Dkb, m: str, b: str, v: Value, *, session: Optional[Session] = None,
                   **kw) -> TaskVerdict:
    def body():
        s = _session(d, session, **kw)
        t = d.drg.table(m)
        if b not in t.outputs:
            raise KeyError(f"{b} is not an output of {m}")
        before = s.calls
        ks = s.satisfiable(has_value(t.qualified(b), v))
        witnesses = [] if ks is None else [_example(d, ks)]
        return ks is not None, witnesses, s.calls - before
    return _run(Task.OutputCoverage, f"{m}.{b} = {format_value(v)}", body)


def _undetermined(d: Dkb, template: Concept, s: Session, limit: int) -> tuple:
    g = d.drg
    targets = []
    for name in g.outputs:
        t = g.table(name)
        targets += [(t, b) for b in t.outputs]
    s.prepare([template] + [Undef(t.qualified(b)) for t, b in targets])
    before = s.calls
    gaps = []
    for t, b in targets:
        blocks = []
        while len(blocks) < limit:
            ks = s.satisfiable(template, Undef(t.qualified(b)), *(Not(c) for c in blocks))
            if ks is None:
                break
            gap = _gap(d, t, b, template, ks, s)
            gaps.append(gap)
            if not gap.region:
                break
            blocks.append(_box(gap.region))
    return not gaps, gaps, s.calls - before


def _box(region) -> Concept:
    return conj(*(Undef(ref) if dt is None else ExistsF(ref, dt) for ref, dt in region))


def _gap(d: Dkb, t: DecisionTable, b: str, template: Concept, ks: KnotSet,
         s: Session) -> OutputGap:
    """Read the cell of the free inputs off the knot, then drop every input
    whose value turns out not to matter for the gap."""
    succ_of = {}
    for succ in ks.knots[ks.query].successors:
        if isinstance(succ, FeatureSuccessor):
            for f in succ.features:
                succ_of[f] = succ
    region, values = [], []
    for ref in sorted(free_inputs(d.drg)):
        succ = succ_of.get(ref)
        if succ is None or succ.value is None:
            region.append((ref, None))
            continue
        values.append((ref, succ.value))
        region.append((ref, reduce(Intersection, sorted(succ.dtype, key=repr),
                                   Whole(succ.value.datatype))))
    out = defined(t.qualified(b), t.atype[b])
    s.prepare([out] + [_box([r]) for r in region])

    def is_gap(box):
        return s.satisfiable(template, out, *(_box([r]) for r in box)) is None

    if is_gap(region):
        for r in list(region):
            trial = [x for x in region if x != r]
            if is_gap(trial):
                region = trial
    return OutputGap(t.name, b, tuple(region), tuple(values))


def describe_region(e) -> str:
    """Text for the values a derived datatype admits."""
    if e.base is STRING:
        return str(string_set(e))
    shapes = dict.fromkeys(str(sh) for sh in normalize_numeric([e]) if not sh.is_empty())
    return " or ".join(shapes) if shapes else "nothing"


def check_completeness(d: Dkb, *, session: Optional[Session] = None, max_witnesses: int = 1,
                       **kw) -> TaskVerdict:
    """Every output attribute gets a value whenever all free inputs have one.

    Up to ``max_witnesses`` distinct gaps are reported per output attribute.
    """
    def body():
        s = _session(d, session, **kw)
        return _undetermined(d, presence(d.drg), s, max_witnesses)
    return _run(Task.Completeness, "", body)


def check_determinability(d: Dkb, template: Concept, *, session: Optional[Session] = None,
                          max_witnesses: int = 1, **kw) -> TaskVerdict:
    def body():
        s = _session(d, session, **kw)
        return _undetermined(d, template, s, max_witnesses)
    return _run(Task.OutputDeterminability, "", body)


# -- I/O relationship ---------------------------------------------------------------

def io_abox(d: Dkb, obj: str, assignment: dict) -> tuple:
    """A bridge fact plus one feature fact per assigned free input."""
    facts = [ConceptFact(d.bridge, obj)]
    facts += [FeatureFact(ref, obj, v) for ref, v in sorted(assignment.items())]
    return tuple(facts)


def _about_one(abox: tuple, obj: str) -> Optional[list]:
    """The ABox as concepts on obj, or None when it says more than that."""
    out = []
    for f in abox:
        if isinstance(f, RoleFact) or f.obj != obj:
            return None
        if isinstance(f, ConceptFact):
            out.append(Name(f.concept))
        else:
            out.append(has_value(f.feature, f.value))
    return out


def check_io(d: Dkb, m: str, obj: str, b: str, v: Value, *, session: Optional[Session] = None,
             **kw) -> TaskVerdict:
    """Does the DKB force output b of table m to be v on obj?

    When the ABox only talks about obj this is one concept satisfiability
    question (the facts, plus "b is not v"); ``session`` may then be a
    session compiled for the same DKB without its ABox.
    """
    def body():
        t = d.drg.table(m)
        if m not in d.drg.outputs:
            raise KeyError(f"{m} is not an output table")
        feature = t.qualified(b)
        facts = _about_one(d.abox, obj)
        if facts is not None:
            s = session if session is not None else Session(d.with_abox(()), **kw)
            ks = s.satisfiable(*facts, Not(has_value(feature, v)))
            return ks is None, ([] if ks is None else [_example(d, ks)]), 1
        dd = d if kw.get("background", True) else d.without_background()
        kb = encode_dkb(dd, closed_bindings=kw.get("closed_bindings", True))
        entailed = instance_check(kb, FeatureFact(feature, obj, v),
                                  closure_limit=kw.get("closure_limit", DEFAULT_CLOSURE_LIMIT))
        return entailed, [], 1
    return _run(Task.IoRelationship, f"{m}.{b}({obj}) = {format_value(v)}", body)


# -- graph helpers ------------------------------------------------------------------

def single_table_dkb(t: DecisionTable, *, bridge: str = "Case",
                     signature: Optional[DlSignature] = None, background: tuple = (),
                     abox: tuple = ()) -> Dkb:
    """The trivial graph made of one table and nothing else."""
    sig = signature or DlSignature({bridge})
    return Dkb(sig, background, Drg(tables=(t,), outputs=(t.name,)), bridge, abox)


def restrict_tables(d: Dkb, names: Iterable[str]) -> Dkb:
    """Keep the named tables, the flows into them and the data they read."""
    keep = list(names)
    g = d.drg
    tables = tuple(t for t in g.tables if t.name in keep)
    flows = tuple((s, t) for s, t in g.flows
                  if t.split(".", 1)[0] in keep and
                  ("." not in s or s.split(".", 1)[0] in keep))
    used = {s for s, _ in flows if "." not in s}
    inputs = tuple(p for p in g.input_data if p in used)
    sub = Drg(inputs, {p: g.datatypes[p] for p in inputs},
              {p: c for p, c in g.infacet.items() if p in used}, tables,
              tuple(n for n in keep), tuple(b for b in g.bkms),
              flows, tuple((b, t) for b, t in g.bkm_edges if t in keep))
    out = Dkb(d.signature, d.background, sub, d.bridge, d.abox, d.today)
    sig = _dkb_signature(out)
    keep_t = {n: c for n, c in d.templates.items() if not concept_errors(sig, c)}
    return Dkb(d.signature, d.background, sub, d.bridge, d.abox, d.today, keep_t)
