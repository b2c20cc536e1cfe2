"""Knot-based satisfiability for ALCH(D) knowledge bases.

A knot is a root concept-type together with its direct successors.  The
search never enumerates types explicitly: each type is a model of a
propositional encoding of the closure conditions, found by the CDCL solver
in ``satsolver``.  Named objects share one solver (a block of variables per
object, linked by role assertions); anonymous elements come from a second
solver queried under assumptions (the *seed*: what a predecessor demands).

A type is kept when every existential in it has a kept successor.  Seeds
that are currently being expanded count as kept (greatest fixpoint), so
cyclic models are found; a seed that fails is remembered forever and its
failure turns into a clause excluding every type that would demand it.

Feature values are abstracted into cells: the constants mentioned for a
group of related features cut each datatype into points and open gaps, and
every derived datatype in the closure is a union of cells.  Equal values
forced by feature inclusions and distinct values forced by disjointness are
checked on the cells after each solver model.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Mapping, Optional

from .datatypes import (
    STRING, Bound, NumericShape, PrimitiveDatatype, Value, _domain_shape, constants, format_value,
    intersect_shapes, value_in,
)
from .dl_core import (
    BOT, TOP, And, Concept, ConceptFact, ConceptIncl, Exists, ExistsF, FeatureDisj,
    FeatureFact, FeatureIncl, Forall, Kb, Name, Not, Or, RoleDisj, RoleFact, RoleIncl,
    Undef, closure, format_concept, has_value, negate, nnf,
)
from .satsolver import SatSolver

DEFAULT_CLOSURE_LIMIT = 4096


class ResourceLimitError(RuntimeError):
    def __init__(self, size: int, limit: int):
        super().__init__(f"closure has {size} members, above the limit of {limit}")
        self.size = size
        self.limit = limit


# -- knots --------------------------------------------------------------------

@dataclass(frozen=True)
class RoleSuccessor:
    roles: frozenset
    leaf: frozenset          # concept-type of the successor
    target: Optional[int] = None


@dataclass(frozen=True)
class FeatureSuccessor:
    features: frozenset
    dtype: frozenset         # derived datatypes the value must lie in
    value: Optional[Value] = None


@dataclass(frozen=True)
class Knot:
    root: frozenset
    successors: tuple = ()
    obj: Optional[str] = None
    ident: int = 0


@dataclass
class KnotSet:
    knots: dict = field(default_factory=dict)      # id -> Knot
    objects: dict = field(default_factory=dict)    # object -> id
    query: Optional[int] = None                    # knot realising a queried concept

    def __iter__(self):
        return iter(self.knots.values())

    def __len__(self) -> int:
        return len(self.knots)

    def knot_of(self, obj: str) -> Knot:
        return self.knots[self.objects[obj]]

    def feature_values(self, ident: int) -> dict:
        out = {}
        for s in self.knots[ident].successors:
            if isinstance(s, FeatureSuccessor):
                for f in s.features:
                    out[f] = s.value
        return out


# -- preprocessing --------------------------------------------------------------

def preprocess(k: Kb) -> Kb:
    """Replace feature facts by fresh concept names and put the TBox in NNF."""
    feats = k.signature.features
    used = k.signature.names()
    fresh, tbox, abox = [], [], []
    counter = itertools.count(1)
    for ax in k.tbox:
        if isinstance(ax, ConceptIncl):
            tbox.append(ConceptIncl(nnf(ax.sub, feats), nnf(ax.sup, feats)))
        else:
            tbox.append(ax)
    for f in k.abox:
        if isinstance(f, FeatureFact):
            name = f"N{next(counter)}_{f.obj}"
            while name in used:
                name = f"N{next(counter)}_{f.obj}"
            used.add(name)
            fresh.append(name)
            abox.append(ConceptFact(name, f.obj))
            tbox.append(ConceptIncl(Name(name), has_value(f.feature, f.value)))
        else:
            abox.append(f)
    return Kb(k.signature.extend(concepts=fresh), tuple(tbox), tuple(abox))


# -- value cells ------------------------------------------------------------------

@dataclass(frozen=True)
class Cell:
    datatype: PrimitiveDatatype
    shape: Optional[NumericShape]      # numeric cells
    text: Optional[str] = None         # string point cell
    excluded: frozenset = frozenset()  # string gap cell: everything but these

    def sample(self) -> Value:
        return self.values(1)[0]

    def capacity(self) -> Optional[int]:
        """Number of values, or None when infinite."""
        if self.datatype is STRING:
            return 1 if self.text is not None else None
        s = self.shape
        if s.lower is not None and s.upper is not None and s.lower.value == s.upper.value:
            return 1
        if not s.integral:
            return None
        first, last = s._integer_range()
        if first is None or last is None:
            return None
        return max(0, last - first + 1)

    def values(self, n: int) -> list:
        """n distinct values of the cell (fewer if it is smaller)."""
        if self.datatype is STRING:
            if self.text is not None:
                return [Value(STRING, self.text)]
            out, k = [], 0
            while len(out) < n:
                w = f"w{k}"
                if w not in self.excluded:
                    out.append(Value(STRING, w))
                k += 1
            return out
        s, out = self.shape, []
        first = s.witness()
        out.append(first)
        if self.capacity() == 1:
            return [Value(self.datatype, first)]
        hi = s.upper.value if s.upper is not None else None
        x = first
        while len(out) < n:
            if s.integral:
                x = x + 1 if hi is None or x + 1 <= hi else None
                if x is None or not s.contains(x):
                    break
            elif hi is not None:
                x = (x + hi) / 2
            else:
                x = x + 1
            out.append(x)
        return [Value(self.datatype, v) for v in out]

    def __str__(self) -> str:
        if self.datatype is STRING:
            if self.text is not None:
                return format_value(Value(STRING, self.text))
            return "string \\ {" + ", ".join(sorted(self.excluded)) + "}"
        return str(self.shape)


def make_cells(datatype: PrimitiveDatatype, consts: Iterable[Value]) -> list:
    """Points at every constant and the open gaps between them."""
    if datatype is STRING:
        texts = sorted({v.data for v in consts})
        return [Cell(STRING, None, t) for t in texts] + \
            [Cell(STRING, None, None, frozenset(texts))]
    dom = _domain_shape(datatype)
    points = sorted({v.num for v in consts})
    raw = []
    prev = None
    for x in points:
        raw.append(NumericShape(None if prev is None else Bound(prev, True), Bound(x, True)))
        raw.append(NumericShape(Bound(x, False), Bound(x, False)))
        prev = x
    raw.append(NumericShape(None if prev is None else Bound(prev, True), None))
    cells = []
    for s in raw:
        s = intersect_shapes(s, dom)
        if not s.is_empty():
            cells.append(Cell(datatype, s))
    return cells


# -- compilation ------------------------------------------------------------------

class _Layout:
    """Variables and clauses describing a single complete type."""

    def __init__(self, k: Kb, extra: Iterable[Concept], limit: int):
        self.kb = k
        sig = k.signature
        self.features = sig.features
        self.cl = closure(k, extra)
        concepts = [c for c in self.cl if isinstance(c, Concept)]
        if len(concepts) > limit:
            raise ResourceLimitError(len(concepts), limit)
        self.concepts = sorted(concepts, key=format_concept)
        self.nvars = 0
        self.clauses: list = []
        self.lit: dict = {}
        for c in self.concepts:
            if c in self.lit:
                continue
            v = self._var()
            self.lit[c] = v
            n = negate(c, self.features)
            if n not in self.lit:
                self.lit[n] = -v
            elif self.lit[n] != -v:
                self.clauses += [[v, self.lit[n]], [-v, -self.lit[n]]]
        self._roles(k)
        self._features(k)
        self._concepts()
        self.axioms = []
        for ax in k.tbox:
            if isinstance(ax, ConceptIncl):
                clause = [-self.lit[ax.sub], self.lit[ax.sup]]
                self.clauses.append(clause)
                self.axioms.append(ax)
        self.exists = [c for c in self.concepts if isinstance(c, Exists)]
        self.foralls = [c for c in self.concepts if isinstance(c, Forall)]
        self.concept_of = {}
        for c, l in self.lit.items():
            self.concept_of.setdefault(l, c)

    def _var(self) -> int:
        self.nvars += 1
        return self.nvars

    # roles
    def _roles(self, k: Kb):
        incl, self.role_disj = {}, set()
        for ax in k.tbox:
            if isinstance(ax, RoleIncl):
                incl.setdefault(ax.sub, set()).add(ax.sup)
            elif isinstance(ax, RoleDisj):
                self.role_disj.add(frozenset((ax.first, ax.second)))
        self.role_incl = incl
        self._up_cache = {}

    def up(self, role: str) -> frozenset:
        if role not in self._up_cache:
            seen, todo = {role}, [role]
            while todo:
                for s in self.role_incl.get(todo.pop(), ()):
                    if s not in seen:
                        seen.add(s)
                        todo.append(s)
            self._up_cache[role] = frozenset(seen)
        return self._up_cache[role]

    def clashing_label(self, label: Iterable[str]) -> Optional[tuple]:
        label = set(label)
        for pair in self.role_disj:
            if pair <= label:
                a, *rest = sorted(pair)
                return (a, rest[0] if rest else a)
        return None

    # features
    def _features(self, k: Kb):
        self.f_incl, self.f_disj = [], []
        mentioned = set()
        for ax in k.tbox:
            if isinstance(ax, FeatureIncl):
                self.f_incl.append((ax.sub, ax.sup))
                mentioned |= {ax.sub, ax.sup}
            elif isinstance(ax, FeatureDisj):
                self.f_disj.append((ax.first, ax.second))
                mentioned |= {ax.first, ax.second}
        for c in self.concepts:
            if isinstance(c, (ExistsF, Undef)):
                mentioned.add(c.feature)
        # group features connected by inclusion or disjointness
        parent = {f: f for f in mentioned}

        def find(f):
            while parent[f] != f:
                parent[f] = parent[parent[f]]
                f = parent[f]
            return f
        for a, b in self.f_incl + self.f_disj:
            parent[find(a)] = find(b)
        groups = {}
        for f in sorted(mentioned):
            groups.setdefault(find(f), []).append(f)
        self.group_of = {f: find(f) for f in mentioned}
        consts = {g: set() for g in groups}
        for c in self.concepts:
            if isinstance(c, ExistsF):
                consts[self.group_of[c.feature]] |= constants(c.data)
        self.cells = {}
        for g, members in groups.items():
            self.cells[g] = make_cells(self.features[members[0]], consts[g])
        self.none_var, self.cell_var = {}, {}
        for f in sorted(mentioned):
            self.none_var[f] = self._var()
            cs = [self._var() for _ in self.cells[self.group_of[f]]]
            self.cell_var[f] = cs
            self._exactly_one([self.none_var[f]] + cs)
        for a, b in self.f_incl:
            for va, vb in zip(self.cell_var[a], self.cell_var[b]):
                self.clauses.append([-va, vb])
        for a, b in self.f_disj:
            for i, cell in enumerate(self.cells[self.group_of[a]]):
                if cell.capacity() == 1:
                    self.clauses.append([-self.cell_var[a][i], -self.cell_var[b][i]])
        self.mentioned = sorted(mentioned)

    def _exactly_one(self, xs: list):
        self.clauses.append(list(xs))
        if len(xs) <= 6:
            for a, b in itertools.combinations(xs, 2):
                self.clauses.append([-a, -b])
            return
        # sequential counter
        s = [self._var() for _ in xs[:-1]]
        self.clauses.append([-xs[0], s[0]])
        for i in range(1, len(xs) - 1):
            self.clauses += [[-xs[i], s[i]], [-s[i - 1], s[i]], [-xs[i], -s[i - 1]]]
        self.clauses.append([-xs[-1], -s[-1]])

    def _concepts(self):
        lit = self.lit
        for c in self.concepts:
            x = lit[c]
            if c == TOP:
                self.clauses.append([x])
            elif c == BOT:
                self.clauses.append([-x])
            elif isinstance(c, And):
                a, b = lit[c.left], lit[c.right]
                self.clauses += [[-x, a], [-x, b], [x, -a, -b]]
            elif isinstance(c, Or):
                a, b = lit[c.left], lit[c.right]
                self.clauses += [[-x, a, b], [x, -a], [x, -b]]
            elif isinstance(c, Exists):
                if self.clashing_label(self.up(c.role)):
                    self.clauses.append([-x])
            elif isinstance(c, ExistsF):
                cells = self.cells[self.group_of[c.feature]]
                inside = [v for v, cell in zip(self.cell_var[c.feature], cells)
                          if value_in(c.data, cell.sample())]
                self.clauses.append([-x] + inside)
                self.clauses += [[-v, x] for v in inside]
            elif isinstance(c, Undef):
                n = self.none_var[c.feature]
                self.clauses += [[-x, n], [x, -n]]

    # reading models
    def true_lits(self, model: list, offset: int) -> frozenset:
        return frozenset(l for l in self.concept_lits() if model[l + offset])

    def concept_lits(self) -> list:
        if not hasattr(self, "_clits"):
            self._clits = sorted({abs(l) for l in self.lit.values()})
        return self._clits

    def type_of(self, lits: frozenset) -> frozenset:
        """Concepts true in a type given its positive variables."""
        return frozenset(c for c, l in self.lit.items()
                         if (l > 0 and l in lits) or (l < 0 and -l not in lits))

    def feature_cells(self, model: list, offset: int) -> dict:
        out = {}
        for f in self.mentioned:
            for i, v in enumerate(self.cell_var[f]):
                if model[v + offset]:
                    out[f] = i
        return out

    def theory_conflicts(self, cells: dict) -> tuple:
        """Blocking clauses (local) for value clashes, plus a value choice."""
        defined = set(cells)
        parent = {f: f for f in defined}

        def find(f):
            while parent[f] != f:
                parent[f] = parent[parent[f]]
                f = parent[f]
            return f
        for a, b in self.f_incl:
            if a in defined:
                parent[find(a)] = find(b)
        classes = {}
        for f in defined:
            classes.setdefault(find(f), []).append(f)

        def block(fs):
            return [-self.cell_var[f][cells[f]] for f in sorted(fs)]
        conflicts = []
        edges = set()
        for a, b in self.f_disj:
            if a in defined and b in defined:
                ra, rb = find(a), find(b)
                if ra == rb:
                    conflicts.append(block(classes[ra]))
                else:
                    edges.add(frozenset((ra, rb)))
        if conflicts:
            return conflicts, None
        # colour classes that share a cell
        by_cell = {}
        for r, fs in classes.items():
            key = (self.group_of[fs[0]], cells[fs[0]])
            by_cell.setdefault(key, []).append(r)
        values = {}
        for (g, i), roots in sorted(by_cell.items(), key=lambda kv: (kv[0][0], kv[0][1])):
            cell = self.cells[g][i]
            roots = sorted(roots)
            colour = _colour(roots, edges, cell.capacity())
            if colour is None:
                conflicts.append(block([f for r in roots for f in classes[r]]))
                continue
            pool = cell.values(max(colour.values()) + 1)
            for r in roots:
                for f in classes[r]:
                    values[f] = pool[colour[r]]
        return conflicts, values


def _colour(nodes: list, edges: set, k: Optional[int]) -> Optional[dict]:
    adj = {n: [m for m in nodes if frozenset((n, m)) in edges] for n in nodes}
    if k is None:
        k = len(nodes)
    col = {}

    def go(i):
        if i == len(nodes):
            return True
        n = nodes[i]
        for c in range(k):
            if all(col.get(m) != c for m in adj[n]):
                col[n] = c
                if go(i + 1):
                    return True
                del col[n]
        return False
    return dict(col) if go(0) else None


class _Slots:
    """A solver holding several copies of the type encoding."""

    def __init__(self, layout: _Layout, count: int):
        self.layout = layout
        self.solver = SatSolver()
        self.count = count
        for _ in range(layout.nvars * count):
            self.solver.new_var()
        for s in range(count):
            self.add_local(s, layout.clauses)
        self.lemmas_seen = 0

    def offset(self, slot: int) -> int:
        return slot * self.layout.nvars

    def glob(self, slot: int, lit: int) -> int:
        off = self.offset(slot)
        return lit + off if lit > 0 else lit - off

    def add_local(self, slot: int, clauses: Iterable[list]):
        for c in clauses:
            self.solver.add_clause([self.glob(slot, l) for l in c])

    def sync(self, lemmas: list):
        for lemma in lemmas[self.lemmas_seen:]:
            for s in range(self.count):
                self.add_local(s, [lemma])
        self.lemmas_seen = len(lemmas)


@dataclass
class _Frame:
    ident: int
    lits: frozenset


class Reasoner:
    """Compiled form of one knowledge base; answers many queries."""

    def __init__(self, k: Kb, extra: Iterable[Concept] = (), *,
                 closure_limit: int = DEFAULT_CLOSURE_LIMIT,
                 trace: Optional[Callable[[str], None]] = None):
        self.original = k
        self.kb = preprocess(k)
        feats = self.kb.signature.features
        self.extra = [nnf(c, feats) for c in extra]
        self.layout = _Layout(self.kb, self.extra, closure_limit)
        self.trace = trace
        self.lemmas: list = []
        self.anon = _Slots(self.layout, 1)
        self.objects = self.kb.objects()
        self.named = _Slots(self.layout, len(self.objects)) if self.objects else None
        self.edge_labels = {}
        self.abox_clash = None
        self._link_objects()
        self.bad: set = set()
        self.good: dict = {}           # seed -> knot id (unconditional)
        self.good_types: list = []     # (lits, knot id)
        self.knots: dict = {}
        self.stack: list = []
        self.ids = itertools.count(1)
        self.calls = 0
        self.sat_calls = 0

    # -- set-up
    def _link_objects(self):
        lay = self.layout
        index = {o: i for i, o in enumerate(self.objects)}
        for f in self.kb.abox:
            if isinstance(f, ConceptFact):
                self.named.add_local(index[f.obj], [[lay.lit[Name(f.concept)]]])
            elif isinstance(f, RoleFact):
                key = (f.subj, f.obj)
                self.edge_labels[key] = self.edge_labels.get(key, frozenset()) | lay.up(f.role)
        for (a, b), label in self.edge_labels.items():
            if lay.clashing_label(label):
                self.abox_clash = (a, b, lay.clashing_label(label))
            for fa in lay.foralls:
                if fa.role in label:
                    x = self.named.glob(index[a], -lay.lit[fa])
                    y = self.named.glob(index[b], lay.lit[fa.filler])
                    self.named.solver.add_clause([x, y])

    # -- solving a block of slots, including the value check
    def _solve(self, slots: _Slots, assumptions: list):
        lay = self.layout
        while True:
            slots.sync(self.lemmas)
            self.sat_calls += 1
            if not slots.solver.solve(assumptions):
                return None
            model = slots.solver.model
            clean = True
            values = []
            for s in range(slots.count):
                cells = lay.feature_cells(model, slots.offset(s))
                conflicts, vals = lay.theory_conflicts(cells)
                if conflicts:
                    clean = False
                    slots.add_local(s, conflicts)
                values.append((cells, vals))
            if clean:
                return model, values

    def _emit(self, ident: int, lits: frozenset, verdict: str):
        if self.trace is None:
            return
        typ = self.layout.type_of(lits)
        shown = sorted(format_concept(c) for c in typ
                       if isinstance(c, (Name, Exists, ExistsF)))
        self.trace(f"knot {ident} root={{{', '.join(shown)}}} verdict={verdict}")

    def _demand(self, lits: frozenset, ex: Exists) -> frozenset:
        lay = self.layout
        up = lay.up(ex.role)
        seed = {lay.lit[ex.filler]}
        for fa in lay.foralls:
            if fa.role in up and _holds(lay.lit[fa], lits):
                seed.add(lay.lit[fa.filler])
        return frozenset(seed)

    def _lemma_for(self, lits: frozenset, ex: Exists) -> list:
        lay = self.layout
        up = lay.up(ex.role)
        clause = [-lay.lit[ex]]
        for fa in lay.foralls:
            if fa.role in up and _holds(lay.lit[fa], lits):
                clause.append(-lay.lit[fa])
        return clause

    def _feature_successors(self, typ: frozenset, values: dict) -> tuple:
        by_value = {}
        for f, v in values.items():
            by_value.setdefault(v, set()).add(f)
        out = []
        for v, fs in sorted(by_value.items(), key=lambda kv: sorted(kv[1])):
            dtype = frozenset(c.data for c in typ if isinstance(c, ExistsF) and c.feature in fs)
            out.append(FeatureSuccessor(frozenset(fs), dtype, v))
        return tuple(out)

    def _solve_seed(self, seed: frozenset):
        """Find a kept anonymous knot whose root contains seed.

        Returns (knot id, dependencies) or None.  Dependencies are stack
        depths of seeds assumed to be kept while the answer was computed.
        """
        self.calls += 1
        if seed in self.bad:
            return None
        if seed in self.good:
            return self.good[seed], set()
        for lits, ident in self.good_types:
            if all(_holds(l, lits) for l in seed):
                return ident, set()
        for depth, frame in enumerate(self.stack):
            if all(_holds(l, frame.lits) for l in seed):
                return frame.ident, {depth}
        lay = self.layout
        depth = len(self.stack)
        while True:
            found = self._solve(self.anon, sorted(seed))
            if found is None:
                self.bad.add(seed)
                self.lemmas.append(sorted(-l for l in seed))
                return None
            model, values = found
            lits = lay.true_lits(model, 0)
            ident = next(self.ids)
            self.stack.append(_Frame(ident, lits))
            deps, succ, failed = set(), [], None
            for ex in lay.exists:
                if not _holds(lay.lit[ex], lits):
                    continue
                child = self._demand(lits, ex)
                res = self._solve_seed(child)
                if res is None:
                    failed = ex
                    break
                deps |= res[1]
                succ.append((lay.up(ex.role), res[0]))
            self.stack.pop()
            if failed is not None:
                self._emit(ident, lits, f"eliminated(no successor for {format_concept(failed)})")
                self.lemmas.append(self._lemma_for(lits, failed))
                continue
            deps = {d for d in deps if d < depth}
            self._store(ident, lits, succ, values[0][1], None)
            self._emit(ident, lits, "kept")
            if not deps:
                self.good[seed] = ident
                self.good_types.append((lits, ident))
            return ident, deps

    def _store(self, ident, lits, succ, values, obj):
        typ = self.layout.type_of(lits)
        succs = [RoleSuccessor(label, None, target) for label, target in succ]
        self.knots[ident] = (typ, succs, self._feature_successors(typ, values or {}), obj)

    # -- named part
    def _solve_named(self, extra_assumptions: Mapping[str, Iterable[Concept]]):
        if self.abox_clash is not None:
            return None
        lay = self.layout
        index = {o: i for i, o in enumerate(self.objects)}
        assume = []
        for o, cs in extra_assumptions.items():
            for c in cs:
                assume.append(self.named.glob(index[o], lay.lit[c]))
        while True:
            found = self._solve(self.named, assume)
            if found is None:
                return None
            model, values = found
            result, retry = {}, False
            for o, s in index.items():
                lits = lay.true_lits(model, self.named.offset(s))
                succ = []
                for ex in lay.exists:
                    if not _holds(lay.lit[ex], lits):
                        continue
                    res = self._solve_seed(self._demand(lits, ex))
                    if res is None:
                        self.lemmas.append(self._lemma_for(lits, ex))
                        retry = True
                        break
                    succ.append((lay.up(ex.role), res[0]))
                if retry:
                    break
                result[o] = (lits, succ, values[s][1])
            if not retry:
                return result

    def _assemble(self, named: dict, query: Optional[int]) -> KnotSet:
        ks = KnotSet()
        ids = {}
        for o, (lits, succ, values) in named.items():
            ident = next(self.ids)
            ids[o] = ident
            self._store(ident, lits, succ, values, o)
            self._emit(ident, lits, "kept")
        for o, ident in ids.items():
            typ, succs, fsucc, obj = self.knots[ident]
            for (a, b), label in sorted(self.edge_labels.items()):
                if a == o:
                    succs.append(RoleSuccessor(label, None, ids[b]))
        roots = list(ids.values()) + ([query] if query is not None else [])
        todo, seen = list(roots), set()
        while todo:
            i = todo.pop()
            if i in seen:
                continue
            seen.add(i)
            todo += [s.target for s in self.knots[i][1]]
        for i in sorted(seen):
            typ, succs, fsucc, obj = self.knots[i]
            rs = tuple(RoleSuccessor(s.roles, self.knots[s.target][0], s.target) for s in succs)
            ks.knots[i] = Knot(typ, rs + fsucc, obj, i)
        ks.objects = ids
        ks.query = query
        return ks

    # -- queries
    def satisfiable(self, query: Optional[Iterable[Concept]] = None,
                    assume: Optional[Mapping[str, Iterable[Concept]]] = None
                    ) -> Optional[KnotSet]:
        """Knot set for the KB, optionally with a fresh object in ``query``
        and extra concepts asserted on named objects."""
        feats = self.kb.signature.features
        assume = {o: [nnf(c, feats) for c in cs] for o, cs in (assume or {}).items()}
        named = {}
        if self.objects:
            named = self._solve_named(assume)
            if named is None:
                return None
        qid = None
        if query is not None or not self.objects:
            seed = frozenset(self.layout.lit[nnf(c, feats)] for c in (query or ()))
            if any(-l in seed for l in seed):
                return None
            res = self._solve_seed(seed)
            if res is None:
                return None
            qid = res[0]
        return self._assemble(named, qid)

    def concept_satisfiable(self, c: Concept) -> bool:
        return self.satisfiable([c]) is not None

    def stats(self) -> dict:
        return {"seed_calls": self.calls, "sat_calls": self.sat_calls,
                "closure": len(self.layout.concepts), "lemmas": len(self.lemmas)}


def _holds(lit: int, lits: frozenset) -> bool:
    return lit in lits if lit > 0 else -lit not in lits


# -- module-level API ---------------------------------------------------------------

def kb_satisfiable(k: Kb, *, closure_limit: int = DEFAULT_CLOSURE_LIMIT,
                   trace: Optional[Callable[[str], None]] = None) -> Optional[KnotSet]:
    return Reasoner(k, closure_limit=closure_limit, trace=trace).satisfiable()


def _fresh(k: Kb, stem: str) -> str:
    used = k.signature.names() | set(k.objects())
    i = 0
    while f"{stem}{i}" in used:
        i += 1
    return f"{stem}{i}"


def concept_satisfiable(k: Kb, c: Concept, **kw) -> bool:
    """Add a fresh name below c and assert it on a fresh object."""
    n, o = _fresh(k, "Q"), _fresh(k, "q")
    k2 = k.with_axioms(ConceptIncl(Name(n), c), facts=[ConceptFact(n, o)], concepts=[n])
    return kb_satisfiable(k2, **kw) is not None


def instance_check(k: Kb, fact, **kw) -> bool:
    """True when the fact follows from k."""
    feats = k.signature.features
    if isinstance(fact, RoleFact):
        r = _fresh(k, "R")
        k2 = Kb(k.signature.extend(roles=[r]),
                k.tbox + (RoleDisj(r, fact.role),),
                k.abox + (RoleFact(r, fact.subj, fact.obj),))
        return kb_satisfiable(k2, **kw) is None
    n = _fresh(k, "Q")
    if isinstance(fact, ConceptFact):
        neg = nnf(Not(Name(fact.concept)), feats)
    else:
        neg = nnf(Not(has_value(fact.feature, fact.value)), feats)
    k2 = k.with_axioms(ConceptIncl(Name(n), neg), facts=[ConceptFact(n, fact.obj)],
                       concepts=[n])
    return kb_satisfiable(k2, **kw) is None


# -- independent check of a knot set ----------------------------------------------

def knot_consistent(knot: Knot, k: Kb) -> bool:
    return not knot_problems(knot, k)


def knot_problems(knot: Knot, k: Kb) -> list:
    """Violations of the local conditions for one knot (empty when fine)."""
    lay = _Hierarchy(k)
    root = knot.root
    probs = []
    roles = [s for s in knot.successors if isinstance(s, RoleSuccessor)]
    feats = [s for s in knot.successors if isinstance(s, FeatureSuccessor)]
    if BOT in root:
        probs.append("Bottom in root")
    for s in roles:
        if lay.clash(s.roles, lay.role_disj):
            probs.append(f"role edge {sorted(s.roles)} violates a disjointness")
        if not lay.closed(s.roles, lay.role_up):
            probs.append(f"role edge {sorted(s.roles)} not closed under inclusion")
    owner = {}
    for s in feats:
        if lay.clash(s.features, lay.feat_disj):
            probs.append(f"feature edge {sorted(s.features)} violates a disjointness")
        if not lay.closed(s.features, lay.feat_up):
            probs.append(f"feature edge {sorted(s.features)} not closed under inclusion")
        for f in s.features:
            if f in owner:
                probs.append(f"feature {f} has two successors")
            owner[f] = s
        if s.dtype:
            dt = next(iter(s.dtype)).base
            from .datatypes import dsat
            if dsat(list(s.dtype), dt) is None:
                probs.append(f"unsatisfiable data type on {sorted(s.features)}")
        if s.value is not None and not all(value_in(e, s.value) for e in s.dtype):
            probs.append(f"value {format_value(s.value)} outside the data type")
    for c in root:
        if isinstance(c, Exists):
            if not any(c.role in s.roles and c.filler in s.leaf for s in roles):
                probs.append(f"{format_concept(c)} has no witness")
        elif isinstance(c, Forall):
            for s in roles:
                if c.role in s.roles and c.filler not in s.leaf:
                    probs.append(f"{format_concept(c)} not propagated")
        elif isinstance(c, ExistsF):
            s = owner.get(c.feature)
            if s is None or (c.data not in s.dtype and
                             (s.value is None or not value_in(c.data, s.value))):
                probs.append(f"{format_concept(c)} has no matching successor")
        elif isinstance(c, Undef):
            if c.feature in owner:
                probs.append(f"{format_concept(c)} but a successor exists")
    return probs


class _Hierarchy:
    def __init__(self, k: Kb):
        self.role_up, self.feat_up = {}, {}
        self.role_disj, self.feat_disj = set(), set()
        for ax in k.tbox:
            if isinstance(ax, RoleIncl):
                self.role_up.setdefault(ax.sub, set()).add(ax.sup)
            elif isinstance(ax, FeatureIncl):
                self.feat_up.setdefault(ax.sub, set()).add(ax.sup)
            elif isinstance(ax, RoleDisj):
                self.role_disj.add(frozenset((ax.first, ax.second)))
            elif isinstance(ax, FeatureDisj):
                self.feat_disj.add(frozenset((ax.first, ax.second)))

    @staticmethod
    def closed(label, up) -> bool:
        return all(s in label for r in label for s in up.get(r, ()))

    @staticmethod
    def clash(label, disj) -> bool:
        return any(pair <= set(label) for pair in disj)


def verify(ks: KnotSet, k: Kb, extra: Iterable[Concept] = ()) -> list:
    """Re-check a knot set against k without trusting the search.

    Checks complete types, the local knot conditions, that every role
    successor is backed by a knot with exactly that root, and that each
    object has one knot carrying its assertions and role edges.
    """
    pk = preprocess(k)
    feats = pk.signature.features
    cl = [c for c in closure(pk, [nnf(c, feats) for c in extra]) if isinstance(c, Concept)]
    probs = []
    roots = {}
    for knot in ks:
        roots.setdefault(knot.root, knot.ident)
        tag = f"knot {knot.ident}"
        root = knot.root
        for c in cl:
            if (c in root) == (negate(c, feats) in root):
                probs.append(f"{tag}: {format_concept(c)} undecided or clashing")
        for c in root:
            if c == BOT:
                probs.append(f"{tag}: Bottom")
            if isinstance(c, And) and not (c.left in root and c.right in root):
                probs.append(f"{tag}: conjunction {format_concept(c)} not split")
            if isinstance(c, Or) and not (c.left in root or c.right in root):
                probs.append(f"{tag}: disjunction {format_concept(c)} unresolved")
        if TOP in cl and TOP not in root:
            probs.append(f"{tag}: Top missing")
        for ax in pk.tbox:
            if isinstance(ax, ConceptIncl) and ax.sub in root and ax.sup not in root:
                probs.append(f"{tag}: violates {format_concept(ax.sub)} below "
                             f"{format_concept(ax.sup)}")
        probs += [f"{tag}: {p}" for p in knot_problems(knot, pk)]
        for s in knot.successors:
            if isinstance(s, RoleSuccessor):
                target = ks.knots.get(s.target)
                if target is None or target.root != s.leaf:
                    probs.append(f"{tag}: successor without a matching knot")
        vals = {}
        for s in knot.successors:
            if isinstance(s, FeatureSuccessor):
                for f in s.features:
                    vals[f] = s.value
        for ax in pk.tbox:
            if isinstance(ax, FeatureIncl) and ax.sub in vals and vals.get(ax.sup) != vals[ax.sub]:
                probs.append(f"{tag}: {ax.sub} and {ax.sup} disagree")
            if isinstance(ax, FeatureDisj) and ax.first in vals and \
                    vals.get(ax.second) == vals[ax.first]:
                probs.append(f"{tag}: {ax.first} and {ax.second} share a value")
    for o in pk.objects():
        if o not in ks.objects:
            probs.append(f"object {o} has no knot")
            continue
        knot = ks.knots[ks.objects[o]]
        for f in pk.abox:
            if isinstance(f, ConceptFact) and f.obj == o and Name(f.concept) not in knot.root:
                probs.append(f"object {o} misses {f.concept}")
            if isinstance(f, RoleFact) and f.subj == o:
                tid = ks.objects.get(f.obj)
                if not any(isinstance(s, RoleSuccessor) and s.target == tid and f.role in s.roles
                           for s in knot.successors):
                    probs.append(f"object {o} misses the edge {f.role} to {f.obj}")
    return probs
