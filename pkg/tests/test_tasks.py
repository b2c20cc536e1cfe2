import random
from dataclasses import replace
from fractions import Fraction


from dkbv.datatypes import REAL, STRING, num, string
from dkbv.dkbfile import parse_concept, parse_dkb
from dkbv.dl_core import BOT, DlSignature, conj
from dkbv.dmn_model import UNDEFINED, Rule, execute, make_table
from dkbv.encoding import Dkb, encode_dkb, encode_if, presence
from dkbv.fixtures import fixture_text, load_fixture
from dkbv.reasoner import concept_satisfiable
from dkbv.tasks import (
    MaskedRule, OutputGap, RulePair, Session, Task, check_any_hit, check_completeness,
    check_coverage, check_determinability, check_io, check_priority_hit, check_unique_hit,
    io_abox, restrict_tables, single_table_dkb,
)

from oracles import random_drg, random_table


def _two(rules, outs=("a", "b")):
    t = make_table("T", [("x", REAL)], [("o", STRING)], rules, ranges={"o": list(outs)})
    return single_table_dkb(t)


def test_two_dash_rules_overlap():
    d = _two([(["-"], ["a"]), (["-"], ["b"])])
    v = check_unique_hit(d, "T")
    assert not v.holds and v.witnesses == [RulePair("T", 1, 2)]
    assert not check_any_hit(d, "T").holds


def test_identical_outputs_pass_any_hit():
    d = _two([(["<5"], ["a"]), ([">1"], ["a"])])
    assert not check_unique_hit(d, "T").holds
    assert check_any_hit(d, "T").holds


def test_priority_masking():
    masked = _two([(["<5"], ["a"]), (["<1"], ["b"])])
    v = check_priority_hit(masked, "T")
    assert not v.holds and v.witnesses == [MaskedRule("T", 2, 1)]
    disjoint = _two([(["<1"], ["a"]), ([">=1"], ["b"])])
    assert check_priority_hit(disjoint, "T").holds
    assert check_unique_hit(disjoint, "T").holds


def _ship_header():
    text = fixture_text("ship-full")
    return text[:text.index("template phi")]


def _with_body(body):
    return parse_dkb(_ship_header() + body)


MASK_BODY = """
table T hit P
  input stype : string
  input length : real
  input capacity : real
  output o : string range "a", "b"
  rule - | 135 | 500 -> "a"
  rule "CCV" | - | - -> "b"
end

drg
  inputdata stype : string
  inputdata length : real
  inputdata capacity : real
  flow stype -> T.stype
  flow length -> T.length
  flow capacity -> T.capacity
  outputs T
end
"""


def test_masking_that_only_the_ontology_reveals():
    d = _with_body(MASK_BODY)
    with_onto = check_priority_hit(d, "T")
    assert not with_onto.holds and with_onto.witnesses == [MaskedRule("T", 2, 1)]
    assert check_priority_hit(d, "T", background=False).holds


def test_ontology_facts_about_ship_types():
    d = load_fixture("ship-full")
    k = encode_dkb(d.with_abox(()))
    feats = k.signature.features
    assert not concept_satisfiable(
        k, parse_concept('some stype : string{"CCV"} and some length : real[> 200]', feats))
    assert concept_satisfiable(
        k, parse_concept('some stype : string{"PP"} and some length : real[= 290]', feats))


def _asg(**kw):
    return {k: (string(v) if isinstance(v, str) else num(REAL, Fraction(v)))
            for k, v in kw.items()}


def test_io_small_ship():
    d = load_fixture("ship-full")
    asg = _asg(cerExp=20001, length=135, draft=5, capacity=500, cargo=Fraction(1, 10))
    dd = d.with_abox(io_abox(d, "s", asg))
    assert check_io(dd, "Sc", "s", "Enter", string("y")).holds
    assert check_io(dd, "Rad", "s", "RefuelArea", string("indoor")).holds
    assert not check_io(dd, "Rad", "s", "RefuelArea", string("none")).holds


def test_io_underspecified_ship():
    d = load_fixture("ship-full")
    asg = _asg(cerExp=20001, length=290, draft=Fraction(23, 2), capacity=4000)
    dd = d.with_abox(io_abox(d, "s", asg))
    for v in ("y", "n"):
        assert not check_io(dd, "Sc", "s", "Enter", string(v)).holds


def test_io_with_roles_uses_instance_checks():
    d = load_fixture("ship-full")
    asg = _asg(cerExp=10, length=135, draft=5, capacity=500, cargo=0)
    dd = d.with_abox(io_abox(d, "s", asg) + io_abox(d, "t", asg))
    assert check_io(dd, "Sc", "s", "Enter", string("n")).holds


def test_coverage_examples():
    d = load_fixture("ship-full")
    assert check_coverage(d, "Sc", "Enter", string("y")).holds
    v = check_coverage(d, "Rad", "RefuelArea", string("none"))
    assert v.holds and v.task is Task.OutputCoverage
    out = execute(d.drg, dict(v.witnesses[0].values))
    assert out[("Rad", "RefuelArea")] == string("none")
    assert v.summary().endswith("covered")


def test_bottom_template_is_determined():
    d = load_fixture("ship-full")
    assert check_determinability(d, BOT).holds


def test_literal_template_misses_cargo():
    d = load_fixture("ship-literal-phi")
    (name, phi), = d.templates.items()
    v = check_determinability(d, phi)
    assert not v.holds
    assert any(dict(w.region).get("cargo", 0) is None for w in v.witnesses)


def test_special_case_law_on_random_graphs():
    rng = random.Random(21)
    for _ in range(10):
        g = random_drg(rng)
        d = Dkb(DlSignature({"Case"}), (), g, "Case")
        s = Session(d)
        assert check_determinability(d, presence(g), session=s).holds == \
            check_completeness(d, session=s).holds


def test_completeness_witnesses_execute_to_undefined():
    rng = random.Random(8)
    seen = 0
    for _ in range(25):
        g = random_drg(rng)
        d = Dkb(DlSignature({"Case"}), (), g, "Case")
        v = check_completeness(d, max_witnesses=3)
        assert v.holds == (not v.witnesses)
        for w in v.witnesses:
            seen += 1
            assert isinstance(w, OutputGap)
            assert execute(g, dict(w.values))[(w.table, w.attribute)] is UNDEFINED
    assert seen


def test_overlap_witnesses_are_satisfiable():
    rng = random.Random(9)
    for _ in range(20):
        t = random_table(rng)
        d = single_table_dkb(t)
        k = encode_dkb(d)
        for w in check_unique_hit(d, "T").witnesses:
            assert concept_satisfiable(k, conj(encode_if(t, w.first - 1),
                                               encode_if(t, w.second - 1)))


def test_masking_is_monotone():
    rng = random.Random(10)
    for _ in range(25):
        t = random_table(rng, max_rules=5, defaults=False)
        d = single_table_dkb(t)
        before = {w.rule for w in check_priority_hit(d, "T").witnesses}
        # a new first rule with the top output value outranks every old rule
        guard = {a: rng.choice(t.rules).if_entries[a] for a in t.inputs}
        top = Rule(guard, {"o": t.orange["o"][0]})
        t2 = replace(t, rules=(top,) + t.rules)
        after = {w.rule - 1 for w in check_priority_hit(single_table_dkb(t2), "T").witnesses}
        assert before <= after


def test_clearance_gap_enumeration():
    c = restrict_tables(load_fixture("ship-full"), ["Sc"])
    v = check_completeness(c, background=False, max_witnesses=3)
    assert not v.holds and len(v.witnesses) == 3
    assert len({w.region for w in v.witnesses}) == 3
    assert check_completeness(c).holds
