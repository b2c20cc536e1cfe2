import random
import re

import pytest

from dkbv.datatypes import INTEGER, REAL, Whole, num, restrict, string
from dkbv.encoding import encode_dkb
from dkbv.fixtures import load_fixture
from dkbv.dl_core import (
    TOP, And, ConceptFact, ConceptIncl, DlSignature, Exists, ExistsF, FeatureDisj, FeatureFact,
    FeatureIncl, Forall, Kb, Name, Not, RoleDisj, RoleFact, RoleIncl, Undef, has_value,
)
from dkbv.reasoner import (
    ResourceLimitError, Reasoner, concept_satisfiable, instance_check, kb_satisfiable, verify,
)

from oracles import find_model, random_concept, random_kb

SIG = DlSignature({"A", "B"}, {"r", "s"}, {"F": INTEGER, "G": INTEGER, "X": REAL})
A, B = Name("A"), Name("B")


def kb(tbox=(), abox=()):
    return Kb(SIG, tuple(tbox), tuple(abox))


UNSAT = {
    "functionality in the ABox": kb(abox=[FeatureFact("F", "a", num(INTEGER, 1)),
                                          FeatureFact("F", "a", num(INTEGER, 2))]),
    "functionality in the TBox": kb([ConceptIncl(A, And(has_value("F", num(INTEGER, 1)),
                                                        has_value("F", num(INTEGER, 2))))],
                                    [ConceptFact("A", "a")]),
    "concept inclusion": kb([ConceptIncl(A, Not(A))], [ConceptFact("A", "a")]),
    "inclusion chain": kb([ConceptIncl(A, Exists("r", B)), ConceptIncl(B, Not(TOP))],
                          [ConceptFact("A", "a")]),
    "role disjointness": kb([RoleDisj("r", "s")], [RoleFact("r", "a", "b"),
                                                   RoleFact("s", "a", "b")]),
    "role hierarchy and disjointness": kb([RoleIncl("r", "s"), RoleDisj("r", "s")],
                                          [RoleFact("r", "a", "b")]),
    "feature disjointness": kb([FeatureIncl("F", "G"), FeatureDisj("F", "G")],
                               [FeatureFact("F", "a", num(INTEGER, 0))]),
    "integer gap": kb([ConceptIncl(A, And(ExistsF("F", restrict(INTEGER, (">", 1))),
                                          ExistsF("F", restrict(INTEGER, ("<", 2)))))],
                      [ConceptFact("A", "a")]),
    "undefined and defined": kb([ConceptIncl(A, And(Undef("F"), ExistsF("F", Whole(INTEGER))))],
                                [ConceptFact("A", "a")]),
    "universal through a successor": kb([ConceptIncl(A, Forall("r", Not(B)))],
                                        [ConceptFact("A", "a"), RoleFact("r", "a", "b"),
                                         ConceptFact("B", "b")]),
    "hierarchy pushes a universal": kb([RoleIncl("r", "s"),
                                        ConceptIncl(A, And(Exists("r", B), Forall("s", Not(B))))],
                                       [ConceptFact("A", "a")]),
}


@pytest.mark.parametrize("name", sorted(UNSAT))
def test_unsatisfiable_cases(name):
    assert kb_satisfiable(UNSAT[name]) is None


def test_real_gap_is_satisfiable():
    k = kb([ConceptIncl(A, And(ExistsF("X", restrict(REAL, (">", 1))),
                               ExistsF("X", restrict(REAL, ("<", 2)))))],
           [ConceptFact("A", "a")])
    ks = kb_satisfiable(k)
    assert ks is not None and verify(ks, k) == []


def test_random_battery_against_finite_models():
    violations = 0
    for seed in range(60):
        k = random_kb(random.Random(seed))
        ks = kb_satisfiable(k)
        if find_model(k, 2) is not None and ks is None:
            violations += 1
        if ks is not None:
            assert verify(ks, k) == [], seed
    assert violations == 0


def test_cyclic_existentials_terminate():
    k = kb([ConceptIncl(TOP, Exists("r", A)), ConceptIncl(A, Exists("r", Not(A)))],
           [ConceptFact("B", "a")])
    ks = kb_satisfiable(k)
    assert ks is not None and verify(ks, k) == []


def test_concept_satisfiability_and_instances():
    k = kb([ConceptIncl(A, B), ConceptIncl(ExistsF("F", restrict(INTEGER, (">=", 5))), A)],
           [FeatureFact("F", "a", num(INTEGER, 7)), RoleFact("r", "a", "b")])
    assert instance_check(k, ConceptFact("B", "a"))
    assert not instance_check(k, ConceptFact("B", "b"))
    assert instance_check(k, FeatureFact("F", "a", num(INTEGER, 7)))
    assert not instance_check(k, FeatureFact("F", "b", num(INTEGER, 7)))
    assert instance_check(k, RoleFact("r", "a", "b"))
    assert not instance_check(k, RoleFact("s", "a", "b"))
    assert concept_satisfiable(k, And(A, Not(B))) is False
    assert concept_satisfiable(k, And(B, Not(A))) is True


def test_trace_lines():
    lines = []
    k = kb([ConceptIncl(A, Exists("r", B))], [ConceptFact("A", "a")])
    assert kb_satisfiable(k, trace=lines.append) is not None
    assert lines
    assert all(re.fullmatch(r"knot \d+ root=\{.*\} verdict=\w+", ln) for ln in lines)


def test_reasoner_answers_many_queries():
    k = kb([ConceptIncl(A, Not(B))])
    r = Reasoner(k, [And(A, B), A, B])
    assert r.satisfiable([A]) is not None
    assert r.satisfiable([A, B]) is None
    assert r.satisfiable([B]) is not None


def test_closure_limit():
    names = [f"C{i}" for i in range(40)]
    sig = DlSignature(set(names), {"r"}, {})
    tbox = [ConceptIncl(Name(a), Exists("r", Name(b))) for a, b in zip(names, names[1:])]
    k = Kb(sig, tbox, [ConceptFact("C0", "a")])
    with pytest.raises(ResourceLimitError) as exc:
        kb_satisfiable(k, closure_limit=20)
    assert exc.value.limit == 20 and exc.value.size > 20
    assert kb_satisfiable(k) is not None


def test_empty_kb_and_ship_facts():
    ks = kb_satisfiable(kb())
    assert ks is not None and len(ks.objects) == 0
    ship = encode_dkb(load_fixture("ship-full").with_abox(()))
    k = Kb(ship.signature, ship.tbox, (ConceptFact("Ship", "s"),
                                       FeatureFact("stype", "s", string("CCV"))))
    assert kb_satisfiable(k) is not None


def test_adding_axioms_never_restores_satisfiability():
    rng = random.Random(31)
    for _ in range(60):
        k = random_kb(rng)
        more = random_kb(rng)
        bigger = Kb(k.signature.extend(roles=more.signature.roles),
                    k.tbox + more.tbox, k.abox + more.abox)
        if kb_satisfiable(k) is None:
            assert kb_satisfiable(bigger) is None


def test_concept_satisfiability_is_dual_to_instance_checks():
    rng = random.Random(32)
    for _ in range(60):
        k = random_kb(rng)
        c = random_concept(rng, 2, tuple(sorted(k.signature.roles)))
        n = "Probe"
        k2 = Kb(k.signature.extend(concepts=[n]), k.tbox + (ConceptIncl(Name(n), c),),
                k.abox + (ConceptFact(n, "fresh"),))
        if kb_satisfiable(k) is None:
            continue
        # the same reduction spelled out by hand
        assert concept_satisfiable(k, c) == (kb_satisfiable(k2) is not None)
