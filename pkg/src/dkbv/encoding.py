"""Compile a decision knowledge base into a description-logic knowledge base.

Every table attribute becomes a feature named ``Table.attr``; input data
keep their own names, so they can coincide with ontology features.

Two readings are fixed here and worth knowing about:

* an input entry (including ``-``) is only satisfied when the attribute
  carries a value, so ``-`` compiles to ``some M.a : D`` rather than Top;
* with ``closed_bindings`` (the default) flows equate source and target
  and an output only takes a value that some rule or default produces.
  Without it the axioms only say what rules force, and nothing stops an
  output feature from holding an arbitrary value of its range.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Optional

from . import sfeel
from .datatypes import OneOf, Whole
from .dl_core import (
    Concept, ConceptIncl, DlSignature, ExistsF, FeatureIncl, Kb, Name, Not,
    concept_errors, conj, disj, has_value, kb_errors, subconcepts,
)
from .dmn_model import DecisionTable, Drg, bound_attrs, free_inputs, rule_order, validate_drg


@dataclass(frozen=True)
class Dkb:
    signature: DlSignature
    background: tuple
    drg: Drg
    bridge: str
    abox: tuple = ()
    today: Optional[int] = None
    templates: Mapping[str, Concept] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "background", tuple(self.background))
        object.__setattr__(self, "abox", tuple(self.abox))
        object.__setattr__(self, "templates", dict(self.templates))

    def __hash__(self):
        return hash((self.signature, self.background, self.bridge, self.abox))

    def without_background(self) -> "Dkb":
        return Dkb(self.signature, (), self.drg, self.bridge, self.abox, self.today,
                   self.templates)

    def with_abox(self, facts) -> "Dkb":
        return Dkb(self.signature, self.background, self.drg, self.bridge, tuple(facts),
                   self.today, self.templates)


class EncodingError(ValueError):
    pass


def drg_features(g: Drg) -> dict:
    """Feature names introduced by a graph, with their datatypes."""
    feats = {p: g.datatypes[p] for p in g.input_data}
    for t in g.tables:
        for a in t.inputs + t.outputs:
            feats[t.qualified(a)] = t.atype[a]
    return feats


def validate_dkb(d: Dkb) -> list:
    errs = list(validate_drg(d.drg))
    if errs:
        return errs
    sig = d.signature
    if d.bridge not in sig.concepts:
        errs.append(f"bridge concept {d.bridge} is not declared")
    for ref in sorted(free_inputs(d.drg)):
        dt = d.drg.datatype_of(ref)
        if ref in sig.features and sig.features[ref] is not dt:
            errs.append(f"free input {ref} is {dt} but the signature declares "
                        f"{sig.features[ref]}")
        elif ref in sig.concepts or ref in sig.roles:
            errs.append(f"free input {ref} clashes with a concept or role name")
    for ref in sorted(bound_attrs(d.drg)):
        if ref in sig.names():
            errs.append(f"bound attribute {ref} is also a signature predicate")
    full = _dkb_signature(d)
    errs.extend(kb_errors(Kb(full, d.background, d.abox)))
    bound = bound_attrs(d.drg)
    for name, c in d.templates.items():
        errs.extend(f"template {name}: {e}" for e in concept_errors(full, c))
        for s in subconcepts(c):
            if getattr(s, "feature", None) in bound:
                errs.append(f"template {name} mentions the bound attribute {s.feature}")
    return errs


def _dkb_signature(d: Dkb) -> DlSignature:
    feats = {f: dt for f, dt in drg_features(d.drg).items() if f not in d.signature.features}
    return d.signature.extend(features=feats)


# -- per-construct encoders ---------------------------------------------------

def encode_attribute(feature: str, datatype, bridge: str) -> ConceptIncl:
    return ConceptIncl(ExistsF(feature, Whole(datatype)), Name(bridge))


def encode_facet(feature: str, datatype, facet: sfeel.SFeelCondition) -> Optional[ConceptIncl]:
    if isinstance(facet, sfeel.Any):
        return None
    return ConceptIncl(ExistsF(feature, Whole(datatype)),
                       ExistsF(feature, sfeel.to_derived(facet, datatype)))


def encode_range(t: DecisionTable, b: str) -> ConceptIncl:
    f, dt = t.qualified(b), t.atype[b]
    return ConceptIncl(ExistsF(f, Whole(dt)), ExistsF(f, OneOf(dt, t.orange[b])))


def encode_condition(feature: str, datatype, c: sfeel.SFeelCondition) -> Concept:
    return ExistsF(feature, sfeel.to_derived(c, datatype))


def encode_if(t: DecisionTable, k: int) -> Concept:
    """The antecedent of rule k (0-based) as a concept."""
    r = t.rules[k]
    return conj(*(encode_condition(t.qualified(a), t.atype[a], r.if_entries[a])
                  for a in t.inputs))


def encode_then(t: DecisionTable, k: int) -> Concept:
    r = t.rules[k]
    return conj(*(has_value(t.qualified(b), r.then_entries[b]) for b in t.outputs))


def encode_rule(t: DecisionTable, k: int, order: Optional[tuple] = None,
                prioritize: bool = True) -> ConceptIncl:
    order = rule_order(t) if order is None else order
    body = [encode_if(t, k)]
    if prioritize:
        body += [Not(encode_if(t, j)) for j in order[:order.index(k)]]
    return ConceptIncl(conj(*body), encode_then(t, k))


def encode_defaults(t: DecisionTable) -> Optional[ConceptIncl]:
    if not t.odef:
        return None
    none_fires = conj(*(Not(encode_if(t, k)) for k in range(len(t.rules))))
    heads = conj(*(has_value(t.qualified(b), t.odef[b]) for b in t.outputs if b in t.odef))
    return ConceptIncl(none_fires, heads)


def encode_flow(g: Drg, src: str, tgt: str) -> FeatureIncl:
    if g.datatype_of(src) is not g.datatype_of(tgt):
        raise EncodingError(f"flow {src} -> {tgt} joins {g.datatype_of(src)} "
                            f"and {g.datatype_of(tgt)}")
    return FeatureIncl(src, tgt)


def encode_output_closure(t: DecisionTable) -> list:
    """An output value needs a rule producing it, or the default case."""
    axioms = []
    for b in t.outputs:
        for v in t.orange[b]:
            reasons = [encode_if(t, k) for k, r in enumerate(t.rules)
                       if r.then_entries[b] == v]
            if t.odef.get(b) == v:
                reasons.append(conj(*(Not(encode_if(t, k)) for k in range(len(t.rules)))))
            axioms.append(ConceptIncl(has_value(t.qualified(b), v), disj(*reasons)))
    return axioms


def encode_table(t: DecisionTable, bridge: str, *, prioritize: bool = True,
                 closed_bindings: bool = True) -> list:
    axioms = []
    for a in t.inputs + t.outputs:
        axioms.append(encode_attribute(t.qualified(a), t.atype[a], bridge))
    for a in t.inputs:
        ax = encode_facet(t.qualified(a), t.atype[a], t.facet(a))
        if ax is not None:
            axioms.append(ax)
    axioms += [encode_range(t, b) for b in t.outputs]
    order = rule_order(t)
    axioms += [encode_rule(t, k, order, prioritize) for k in range(len(t.rules))]
    default = encode_defaults(t)
    if default is not None:
        axioms.append(default)
    if closed_bindings:
        axioms += encode_output_closure(t)
    return axioms


def encode_drg(g: Drg, bridge: str, *, prioritize: bool = True,
               closed_bindings: bool = True) -> list:
    axioms = []
    for p in g.input_data:
        axioms.append(encode_attribute(p, g.datatypes[p], bridge))
        ax = encode_facet(p, g.datatypes[p], g.infacet.get(p, sfeel.ANY))
        if ax is not None:
            axioms.append(ax)
    for t in g.tables:
        axioms += encode_table(t, bridge, prioritize=prioritize,
                               closed_bindings=closed_bindings)
    for src, tgt in g.flows:
        axioms.append(encode_flow(g, src, tgt))
        if closed_bindings:
            axioms.append(FeatureIncl(tgt, src))
    return axioms


def encode_dkb(d: Dkb, *, prioritize: bool = True, closed_bindings: bool = True,
               validate: bool = True) -> Kb:
    if validate:
        errs = validate_dkb(d)
        if errs:
            raise EncodingError("; ".join(errs))
    sig = _dkb_signature(d)
    tbox = list(d.background)
    tbox += encode_drg(d.drg, d.bridge, prioritize=prioritize,
                       closed_bindings=closed_bindings)
    return Kb(sig, tuple(tbox), d.abox)


def presence(g: Drg) -> Concept:
    """Every free input carries a value."""
    return conj(*(ExistsF(ref, Whole(g.datatype_of(ref))) for ref in sorted(free_inputs(g))))

