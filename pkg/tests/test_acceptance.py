"""Acceptance criteria, one test per criterion.

Each test prints a PASS/FAIL line and records it for the summary that
conftest prints at the end of the run.
"""
import contextlib
import random
import time

import pytest

from conftest import ACCEPTANCE
from dkbv.datatypes import INTEGER, NATURAL, RATIONAL, REAL, STRING, dsat, restrict, string, value_in
from dkbv.dkbfile import emit_dkb, parse_dkb
from dkbv.dl_core import ConceptFact, ConceptIncl, DlSignature, Exists, Kb, Name, Not, has_value
from dkbv.dmn_model import UNDEFINED, execute
from dkbv.encoding import Dkb, _dkb_signature, presence
from dkbv.fixtures import FIXTURES, load_fixture
from dkbv.owl import check_functional_syntax, dkb_to_owl, functional_data_properties
from dkbv.reasoner import ResourceLimitError, kb_satisfiable, verify
from dkbv.tasks import (
    Session, check_any_hit, check_completeness, check_coverage, check_determinability, check_io,
    check_priority_hit, check_unique_hit, io_abox, restrict_tables, single_table_dkb,
)

from oracles import (
    datatype_points, find_model, grid_assignments, grid_verdicts, random_derived,
    random_document, random_drg, random_kb, random_table, table_grid,
)
from test_encoding import _chain, _rule_size
from test_reasoner import UNSAT


@contextlib.contextmanager
def criterion(label):
    ok = False
    try:
        yield
        ok = True
    finally:
        ACCEPTANCE.append((label, ok))
        print(f"{'PASS' if ok else 'FAIL'}  {label}")


def _case_graph(g):
    return Dkb(DlSignature({"Case"}), (), g, "Case")


# -- 1 ---------------------------------------------------------------------------

def _meets(region, ref, lo=None, hi=None):
    """Does the region allow a value of ref inside [lo, hi]?"""
    dt = dict(region).get(ref)
    if dt is None:
        return ref not in dict(region)
    facets = ([(">=", lo)] if lo is not None else []) + ([("<=", hi)] if hi is not None else [])
    return dsat([dt, restrict(REAL, *facets)]) is not None


def test_case_study_verdict_matrix():
    with criterion("1 case-study verdict matrix"):
        full = load_fixture("ship-full").with_abox(())
        for background in (True, False):
            s = Session(full, background=background)
            for table in ("Sc", "Rad"):
                v = check_unique_hit(full, table, session=s)
                assert v.holds, (table, background)
                assert v.stats["elapsed"] < 10

        clearance = restrict_tables(full, ["Sc"])
        bare = check_completeness(clearance, background=False, max_witnesses=10)
        assert not bare.holds
        long_shallow = [w for w in bare.witnesses
                        if _meets(w.region, "length", lo=320) and _meets(w.region, "draft", hi=10)]
        assert long_shallow, [str(w) for w in bare.witnesses]
        for w in bare.witnesses:
            assert execute(clearance.drg, dict(w.values))[("Sc", "Enter")] is UNDEFINED
        assert check_completeness(clearance).holds

        refuel = restrict_tables(full, ["Rad"])
        assert check_completeness(refuel).holds
        assert check_unique_hit(refuel, "Rad").holds

        area = ("Rad", "RefuelArea")
        for value in ("none", "indoor"):
            v = check_coverage(full, *area, string(value))
            assert v.holds
            assert execute(full.drg, dict(v.witnesses[0].values))[area] == string(value)
        outdoor = [check_coverage(full, *area, string("outdoor"), background=b).holds
                   for b in (True, False)]
        assert outdoor == [False, False]

        assert check_determinability(full, full.templates["phi"]).holds


# -- 2 ---------------------------------------------------------------------------

def test_encoding_matches_grid_oracle():
    with criterion("2 encoding agrees with the grid oracle and with execution"):
        rng = random.Random(2024)
        mismatches = []
        for i in range(100):
            t = random_table(rng)
            d = single_table_dkb(t)
            s = Session(d)
            got = {"unique": check_unique_hit(d, "T", session=s).holds,
                   "any": check_any_hit(d, "T", session=s).holds,
                   "priority": check_priority_hit(d, "T", session=s).holds,
                   "complete": check_completeness(d, session=s).holds}
            if got != grid_verdicts(t):
                mismatches.append((i, got))
            grid = table_grid(t)
            out = t.qualified("o")
            s.prepare([Name("Case")]
                      + [has_value(t.qualified(a), v) for a in t.inputs for v in grid[a]]
                      + [Not(has_value(out, v)) for v in t.orange["o"]])
            for asg in grid_assignments(t, rng, 100):
                refs = {t.qualified(a): v for a, v in asg.items()}
                want = execute(d.drg, refs)[("T", "o")]
                facts = d.with_abox(io_abox(d, "c", refs))
                for v in t.orange["o"]:
                    if check_io(facts, "T", "c", "o", v, session=s).holds != (want == v):
                        mismatches.append((i, asg, v))
        assert not mismatches, mismatches[:5]


# -- 3 ---------------------------------------------------------------------------

def test_reasoner_soundness_battery():
    with criterion("3 reasoner soundness battery"):
        violations = []
        for seed in range(200):
            k = random_kb(random.Random(seed))
            ks = kb_satisfiable(k)
            if ks is None and find_model(k, 2) is not None:
                violations.append(seed)
            if ks is not None and verify(ks, k):
                violations.append(seed)
        assert not violations, violations
        for name, k in UNSAT.items():
            assert kb_satisfiable(k) is None, name


# -- 4 ---------------------------------------------------------------------------

@pytest.mark.parametrize("dt", [NATURAL, INTEGER, RATIONAL, REAL, STRING])
def test_datatype_solver(dt):
    with criterion(f"4 datatype solver ({dt.value})"):
        rng = random.Random(1000 + list(type(dt)).index(dt))
        for _ in range(1000):
            conj = [random_derived(rng, dt) for _ in range(rng.randint(1, 3))]
            w = dsat(conj)
            if w is not None:
                assert all(value_in(e, w) for e in conj)
            else:
                assert not any(all(value_in(e, v) for e in conj)
                               for v in datatype_points(dt, conj))


# -- 5 ---------------------------------------------------------------------------

def test_structural_laws():
    with criterion("5 structural laws"):
        graphs = [load_fixture(n).with_abox(()) for n in FIXTURES]
        rng = random.Random(55)
        graphs += [_case_graph(random_drg(rng)) for _ in range(50)]
        for d in graphs:
            s = Session(d)
            assert check_determinability(d, presence(d.drg), session=s).holds == \
                check_completeness(d, session=s).holds
        sizes = {n: _rule_size(_chain(n)) for n in (2, 4, 8, 16)}
        for n in (2, 4, 8):
            assert sizes[2 * n] <= 4 * sizes[n]


# -- 6 ---------------------------------------------------------------------------

def test_format_round_trips():
    with criterion("6 format round trips and OWL export"):
        for name in FIXTURES:
            d = load_fixture(name)
            assert parse_dkb(emit_dkb(d)) == d
        rng = random.Random(66)
        for _ in range(100):
            d = random_document(rng)
            assert parse_dkb(emit_dkb(d)) == d
        ship = load_fixture("ship-full")
        text = dkb_to_owl(ship)
        check_functional_syntax(text)
        props = [p.lstrip(":") for p in functional_data_properties(text)]
        assert sorted(props) == sorted(_dkb_signature(ship).features)


# -- resource limit ---------------------------------------------------------------

def test_oversized_kb_hits_the_closure_limit():
    with criterion("closure limit on an oversized KB"):
        names = [f"C{i}" for i in range(3000)]
        sig = DlSignature(set(names), {"r"}, {})
        tbox = [ConceptIncl(Name(a), Exists("r", Name(b))) for a, b in zip(names, names[1:])]
        k = Kb(sig, tbox, [ConceptFact("C0", "o")])
        start = time.perf_counter()
        with pytest.raises(ResourceLimitError):
            kb_satisfiable(k)
        assert time.perf_counter() - start < 30
