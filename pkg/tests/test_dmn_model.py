from fractions import Fraction

import pytest

from dkbv.datatypes import REAL, STRING, num, string
from dkbv.dmn_model import (
    UNDEFINED, Drg, FacetViolation, execute, free_inputs, make_table, rule_order, topo_order,
    validate_drg, validate_table,
)
from dkbv.fixtures import load_fixture


def _sc(d):
    return d.drg.table("Sc")


def test_ship_fixture_execution():
    d = load_fixture("ship-full")
    asg = {"length": num(REAL, 397), "draft": num(REAL, Fraction(31, 2)),
           "capacity": num(REAL, 12000), "cargo": num(REAL, Fraction(1, 5)),
           "cerExp": num(REAL, 20001)}
    out = execute(d.drg, asg)
    assert out[("Sc", "Enter")] == string("y")
    assert out[("Rad", "RefuelArea")] == string("indoor")


def test_expired_certificate_is_refused():
    d = load_fixture("ship-tables-only")
    asg = {"length": num(REAL, 100), "draft": num(REAL, 5), "capacity": num(REAL, 10),
           "cargo": num(REAL, 0), "cerExp": num(REAL, 10)}
    out = execute(d.drg, asg)
    assert out[("Sc", "Enter")] == string("n")
    assert out[("Rad", "RefuelArea")] == string("none")


def test_long_shallow_ship_falls_through():
    d = load_fixture("ship-tables-only")
    asg = {"length": num(REAL, 350), "draft": num(REAL, 8), "capacity": num(REAL, 10),
           "cargo": num(REAL, 0), "cerExp": num(REAL, 30000)}
    out = execute(d.drg, asg)
    assert out[("Sc", "Enter")] is UNDEFINED
    # Rad reads an undefined input, so no rule fires and the default applies
    assert out[("Rad", "RefuelArea")] == string("none")


def test_execute_checks_facets_and_completeness():
    d = load_fixture("ship-tables-only")
    asg = {"length": num(REAL, -1), "draft": num(REAL, 8), "capacity": num(REAL, 10),
           "cargo": num(REAL, 0), "cerExp": num(REAL, 30000)}
    with pytest.raises(FacetViolation):
        execute(d.drg, asg)
    with pytest.raises(ValueError):
        execute(d.drg, {"length": num(REAL, 1)})


def test_rule_order_follows_output_range():
    t = make_table("T", [("x", REAL)], [("o", STRING)],
                   [(["<1"], ["b"]), (["<2"], ["a"]), (["-"], ["b"])], ranges={"o": ["a", "b"]})
    assert rule_order(t) == (1, 0, 2)
    out = execute(Drg(tables=(t,), outputs=("T",)), {"T.x": num(REAL, 0)})
    assert out[("T", "o")] == string("a")


def test_table_validation():
    t = make_table("T", [("x", REAL)], [("o", STRING)], [(["-"], ["zz"])], ranges={"o": ["a"]})
    assert any("outside its range" in e for e in validate_table(t))
    t2 = make_table("T", [("x", REAL)], [("x", STRING)], [], ranges={"x": ["a"]})
    assert any("both input and output" in e for e in validate_table(t2))


def test_graph_validation():
    t = make_table("T", [("x", REAL)], [("o", STRING)], [(["-"], ["a"])], ranges={"o": ["a"]})
    dup = Drg(tables=(t, t), outputs=("T",))
    assert "duplicate table name T" in validate_drg(dup)
    u = make_table("U", [("e", STRING)], [("p", REAL)], [(["-"], [1])], ranges={"p": [1]})
    mismatch = Drg(tables=(t, u), flows=(("T.o", "U.e"), ("U.p", "T.x")), outputs=("U",))
    assert any("cyclic" in e for e in validate_drg(mismatch))
    bad_type = Drg(("p",), {"p": STRING}, {}, (t,), ("T",), (), (("p", "T.x"),), ())
    assert any("joins" in e for e in validate_drg(bad_type))


def test_free_inputs_and_order():
    d = load_fixture("ship-full")
    assert free_inputs(d.drg) == {"cerExp", "length", "draft", "capacity", "cargo"}
    assert [t.name for t in topo_order(d.drg)] == ["Sc", "Rad"]
