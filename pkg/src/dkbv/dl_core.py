"""Description-logic syntax with datatypes: signature, concepts, axioms.

Concepts are immutable dataclasses.  ``And``/``Or`` are binary; use
``conj``/``disj`` to fold longer lists to the right.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Mapping, Optional, Union as TUnion

from .datatypes import (
    DatatypeError, DerivedDatatype, OneOf, PrimitiveDatatype, Value, Whole, cache_hash,
    complement, format_datatype, format_value,
)


@dataclass(frozen=True)
class DlSignature:
    concepts: frozenset = frozenset()
    roles: frozenset = frozenset()
    features: Mapping[str, PrimitiveDatatype] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "concepts", frozenset(self.concepts))
        object.__setattr__(self, "roles", frozenset(self.roles))
        object.__setattr__(self, "features", dict(self.features))
        clash = (self.concepts & self.roles) | (self.concepts & set(self.features)) | \
            (self.roles & set(self.features))
        if clash:
            raise ValueError("names used for more than one kind of predicate: "
                             + ", ".join(sorted(clash)))

    def __hash__(self):
        return hash((self.concepts, self.roles, tuple(sorted(self.features.items(),
                                                            key=lambda kv: kv[0]))))

    def extend(self, concepts=(), roles=(), features=None) -> "DlSignature":
        feats = dict(self.features)
        feats.update(features or {})
        return DlSignature(self.concepts | set(concepts), self.roles | set(roles), feats)

    def names(self) -> set:
        return set(self.concepts) | set(self.roles) | set(self.features)


# -- concepts ---------------------------------------------------------------

class Concept:
    def __str__(self) -> str:
        return format_concept(self)

    def __and__(self, other: "Concept") -> "Concept":
        return And(self, other)

    def __or__(self, other: "Concept") -> "Concept":
        return Or(self, other)

    def __invert__(self) -> "Concept":
        return Not(self)


@dataclass(frozen=True)
class _Top(Concept):
    pass


@dataclass(frozen=True)
class _Bot(Concept):
    pass


TOP = _Top()
BOT = _Bot()


@dataclass(frozen=True)
class Name(Concept):
    name: str


@dataclass(frozen=True)
class Not(Concept):
    arg: Concept


@dataclass(frozen=True)
class And(Concept):
    left: Concept
    right: Concept


@dataclass(frozen=True)
class Or(Concept):
    left: Concept
    right: Concept


@dataclass(frozen=True)
class Exists(Concept):
    role: str
    filler: Concept


@dataclass(frozen=True)
class Forall(Concept):
    role: str
    filler: Concept


@dataclass(frozen=True)
class ExistsF(Concept):
    feature: str
    data: DerivedDatatype


@dataclass(frozen=True)
class Undef(Concept):
    feature: str


def conj(*cs: Concept) -> Concept:
    cs = [c for c in cs if c != TOP]
    if not cs:
        return TOP
    out = cs[-1]
    for c in reversed(cs[:-1]):
        out = And(c, out)
    return out


def disj(*cs: Concept) -> Concept:
    cs = [c for c in cs if c != BOT]
    if not cs:
        return BOT
    out = cs[-1]
    for c in reversed(cs[:-1]):
        out = Or(c, out)
    return out


def has_value(feature: str, v: Value) -> ExistsF:
    return ExistsF(feature, OneOf(v.datatype, (v,)))


def defined(feature: str, datatype: PrimitiveDatatype) -> ExistsF:
    return ExistsF(feature, Whole(datatype))


def desugar_feature_forall(feature: str, e: DerivedDatatype) -> Concept:
    """Value restriction on a feature: undefined, or defined inside e."""
    return Or(Undef(feature), ExistsF(feature, e))


# -- axioms and facts -------------------------------------------------------

@dataclass(frozen=True)
class ConceptIncl:
    sub: Concept
    sup: Concept


@dataclass(frozen=True)
class RoleIncl:
    sub: str
    sup: str


@dataclass(frozen=True)
class FeatureIncl:
    sub: str
    sup: str


@dataclass(frozen=True)
class RoleDisj:
    first: str
    second: str


@dataclass(frozen=True)
class FeatureDisj:
    first: str
    second: str


TBoxAxiom = TUnion[ConceptIncl, RoleIncl, FeatureIncl, RoleDisj, FeatureDisj]


@dataclass(frozen=True)
class ConceptFact:
    concept: str
    obj: str


@dataclass(frozen=True)
class RoleFact:
    role: str
    subj: str
    obj: str


@dataclass(frozen=True)
class FeatureFact:
    feature: str
    obj: str
    value: Value


AboxFact = TUnion[ConceptFact, RoleFact, FeatureFact]


@dataclass(frozen=True)
class Kb:
    signature: DlSignature
    tbox: tuple = ()
    abox: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "tbox", tuple(self.tbox))
        object.__setattr__(self, "abox", tuple(self.abox))

    def with_axioms(self, *axioms, facts=(), concepts=(), roles=()) -> "Kb":
        sig = self.signature.extend(concepts, roles)
        return Kb(sig, self.tbox + tuple(axioms), self.abox + tuple(facts))

    def objects(self) -> list:
        seen = {}
        for f in self.abox:
            for o in fact_objects(f):
                seen.setdefault(o, None)
        return list(seen)


def fact_objects(f: AboxFact) -> tuple:
    if isinstance(f, RoleFact):
        return (f.subj, f.obj)
    return (f.obj,)


# -- typing -----------------------------------------------------------------

def concept_errors(sig: DlSignature, c: Concept) -> list:
    errs = []
    for s in subconcepts(c):
        if isinstance(s, Name) and s.name not in sig.concepts:
            errs.append(f"unknown concept name {s.name}")
        elif isinstance(s, (Exists, Forall)) and s.role not in sig.roles:
            errs.append(f"unknown role {s.role}")
        elif isinstance(s, (ExistsF, Undef)):
            dt = sig.features.get(s.feature)
            if dt is None:
                errs.append(f"unknown feature {s.feature}")
            elif isinstance(s, ExistsF) and s.data.base is not dt:
                errs.append(f"feature {s.feature} is {dt}, restriction is over {s.data.base}")
    return list(dict.fromkeys(errs))


def kb_errors(k: Kb) -> list:
    sig, errs = k.signature, []
    for ax in k.tbox:
        if isinstance(ax, ConceptIncl):
            errs += concept_errors(sig, ax.sub) + concept_errors(sig, ax.sup)
        elif isinstance(ax, (RoleIncl, RoleDisj)):
            for r in _pair(ax):
                if r not in sig.roles:
                    errs.append(f"unknown role {r}")
        else:
            a, b = _pair(ax)
            for f in (a, b):
                if f not in sig.features:
                    errs.append(f"unknown feature {f}")
            if a in sig.features and b in sig.features and sig.features[a] is not sig.features[b]:
                errs.append(f"features {a} and {b} have different datatypes")
    for f in k.abox:
        if isinstance(f, ConceptFact) and f.concept not in sig.concepts:
            errs.append(f"unknown concept name {f.concept}")
        elif isinstance(f, RoleFact) and f.role not in sig.roles:
            errs.append(f"unknown role {f.role}")
        elif isinstance(f, FeatureFact):
            dt = sig.features.get(f.feature)
            if dt is None:
                errs.append(f"unknown feature {f.feature}")
            elif f.value.datatype is not dt:
                errs.append(f"value {format_value(f.value)} is not a {dt}")
    return list(dict.fromkeys(errs))


def _pair(ax) -> tuple:
    if isinstance(ax, (RoleIncl, FeatureIncl)):
        return ax.sub, ax.sup
    return ax.first, ax.second


# -- normal forms -----------------------------------------------------------

def tilde(c: Concept) -> Concept:
    """Negation of an NNF concept, again in NNF.

    Involutive on everything it produces, so closing a set under it stays
    finite.
    """
    if c == TOP:
        return BOT
    if c == BOT:
        return TOP
    if isinstance(c, Name):
        return Not(c)
    if isinstance(c, Not):
        return c.arg
    if isinstance(c, Or) and isinstance(c.left, Undef) and isinstance(c.right, ExistsF) \
            and c.left.feature == c.right.feature:
        return ExistsF(c.right.feature, complement(c.right.data))
    if isinstance(c, And):
        return Or(tilde(c.left), tilde(c.right))
    if isinstance(c, Or):
        return And(tilde(c.left), tilde(c.right))
    if isinstance(c, Exists):
        return Forall(c.role, tilde(c.filler))
    if isinstance(c, Forall):
        return Exists(c.role, tilde(c.filler))
    if isinstance(c, ExistsF):
        if isinstance(c.data, Whole):
            return Undef(c.feature)
        return Or(Undef(c.feature), ExistsF(c.feature, complement(c.data)))
    if isinstance(c, Undef):
        raise ValueError("tilde of Undef needs the feature datatype; use nnf")
    raise TypeError(f"not a concept: {c!r}")


def _tilde_typed(c: Concept, features: Mapping[str, PrimitiveDatatype]) -> Concept:
    if isinstance(c, Undef):
        return ExistsF(c.feature, Whole(_feature_type(features, c.feature)))
    if isinstance(c, And):
        return Or(_tilde_typed(c.left, features), _tilde_typed(c.right, features))
    if isinstance(c, Or):
        if isinstance(c.left, Undef) and isinstance(c.right, ExistsF) \
                and c.left.feature == c.right.feature:
            return tilde(c)
        return And(_tilde_typed(c.left, features), _tilde_typed(c.right, features))
    if isinstance(c, Exists):
        return Forall(c.role, _tilde_typed(c.filler, features))
    if isinstance(c, Forall):
        return Exists(c.role, _tilde_typed(c.filler, features))
    return tilde(c)


def _feature_type(features, f: str) -> PrimitiveDatatype:
    try:
        return features[f]
    except KeyError:
        raise DatatypeError(f"unknown feature {f}") from None


def negate(c: Concept, features: Mapping[str, PrimitiveDatatype]) -> Concept:
    """NNF negation of an NNF concept (the closure's ~ operator)."""
    return _tilde_typed(c, features)


def nnf(c: Concept, features: Optional[Mapping[str, PrimitiveDatatype]] = None) -> Concept:
    """Push negation down to concept names.

    ``features`` maps feature names to datatypes; it is only consulted for
    negated ``Undef`` and may be omitted otherwise.
    """
    feats = features or {}
    if isinstance(c, Not):
        if isinstance(c.arg, Name):
            return c
        return _tilde_typed(nnf(c.arg, feats), feats)
    if isinstance(c, And):
        return And(nnf(c.left, feats), nnf(c.right, feats))
    if isinstance(c, Or):
        return Or(nnf(c.left, feats), nnf(c.right, feats))
    if isinstance(c, Exists):
        return Exists(c.role, nnf(c.filler, feats))
    if isinstance(c, Forall):
        return Forall(c.role, nnf(c.filler, feats))
    return c


def is_nnf(c: Concept) -> bool:
    return all(not isinstance(s, Not) or isinstance(s.arg, Name) for s in subconcepts(c))


def children(c: Concept) -> tuple:
    if isinstance(c, (And, Or)):
        return (c.left, c.right)
    if isinstance(c, Not):
        return (c.arg,)
    if isinstance(c, (Exists, Forall)):
        return (c.filler,)
    return ()


def subconcepts(c: Concept) -> Iterable[Concept]:
    stack, seen = [c], set()
    while stack:
        x = stack.pop()
        if x in seen:
            continue
        seen.add(x)
        yield x
        stack.extend(children(x))


def size(c: Concept) -> int:
    """Number of AST nodes, counting shared subtrees every time."""
    return 1 + sum(size(x) for x in children(c))


def closure(k: Kb, extra: Iterable[Concept] = ()) -> set:
    """Subconcepts and ~-negations of every concept in k, plus its objects."""
    feats = k.signature.features
    todo = []
    for ax in k.tbox:
        if isinstance(ax, ConceptIncl):
            todo += [nnf(ax.sub, feats), nnf(ax.sup, feats)]
    for f in k.abox:
        if isinstance(f, ConceptFact):
            todo.append(Name(f.concept))
    todo.extend(extra)
    out = set()
    while todo:
        c = todo.pop()
        if c in out:
            continue
        out.add(c)
        todo.extend(children(c))
        todo.append(negate(c, feats))
    return out | set(k.objects())


def gamma(k: Kb, datatype: PrimitiveDatatype) -> set:
    out = set()
    for ax in k.tbox:
        if isinstance(ax, ConceptIncl):
            for c in (ax.sub, ax.sup):
                for s in subconcepts(c):
                    if isinstance(s, ExistsF) and k.signature.features.get(s.feature) is datatype:
                        out.add(s.data)
    return out


# -- text -------------------------------------------------------------------

def format_concept(c: Concept) -> str:
    return _fmt(c, 0)


# precedence: 0 = or, 1 = and, 2 = unary
def _fmt(c: Concept, ctx: int) -> str:
    if c == TOP:
        return "Top"
    if c == BOT:
        return "Bottom"
    if isinstance(c, Name):
        return c.name
    if isinstance(c, Not):
        return "not " + _fmt(c.arg, 2)
    if isinstance(c, Exists):
        return f"some {c.role} . {_fmt(c.filler, 2)}"
    if isinstance(c, Forall):
        return f"all {c.role} . {_fmt(c.filler, 2)}"
    if isinstance(c, ExistsF):
        return f"some {c.feature} : {format_datatype(c.data)}"
    if isinstance(c, Undef):
        return f"undef {c.feature}"
    if isinstance(c, And):
        s = _fmt(c.left, 2) + " and " + _fmt(c.right, 1)
        return s if ctx <= 1 else f"({s})"
    s = _fmt(c.left, 1) + " or " + _fmt(c.right, 0)
    return s if ctx == 0 else f"({s})"


for _cls in (Name, Not, And, Or, Exists, Forall, ExistsF, Undef):
    cache_hash(_cls)
