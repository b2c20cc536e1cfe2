
import pytest
from hypothesis import given, strategies as st

from dkbv import sfeel
from dkbv.datatypes import INTEGER, NATURAL, REAL, STRING, num, string, value_in


@pytest.mark.parametrize("text, dt", [
    ("-", REAL), ("<260", REAL), ("[10..12]", REAL), ("[260..320)", REAL),
    ('"y", "n"', STRING), ("not(3)", INTEGER), ("1/3", REAL), (">=0", NATURAL),
])
def test_print_round_trip(text, dt):
    c = sfeel.parse(text, dt)
    assert sfeel.parse(sfeel.print_condition(c), dt) == c


def test_today_substitution():
    c = sfeel.parse("<=today", REAL, today=20000)
    assert c == sfeel.Cmp("<=", num(REAL, 20000))
    with pytest.raises(sfeel.SFeelError):
        sfeel.parse("<=today", REAL)


@pytest.mark.parametrize("text, dt, err", [
    ("<3", STRING, sfeel.SFeelTypeError),
    ('"a"', REAL, sfeel.SFeelTypeError),
    ("[5..1]", REAL, sfeel.SFeelError),
    ("<", REAL, sfeel.SFeelSyntaxError),
    ("1.5", INTEGER, sfeel.SFeelTypeError),
    ("not(1, 2)", REAL, sfeel.SFeelSyntaxError),
])
def test_rejects(text, dt, err):
    with pytest.raises(err):
        sfeel.parse(text, dt)


def test_syntax_error_offset():
    with pytest.raises(sfeel.SFeelSyntaxError) as exc:
        sfeel.parse("[1..2] 3", REAL)
    assert exc.value.offset == 7


def test_any_is_whole_domain():
    assert sfeel.evaluate(sfeel.ANY, num(REAL, -5))
    assert sfeel.literals(sfeel.ANY) == []


conditions = st.sampled_from(["-", "<1", "<=1", ">1/2", ">=0", "[0..1]", "(0..1)", "[0..1)",
                              "(0..1]", "1", "not(1)", "<0, >1", "0, 1/2, 2"])


@given(conditions, st.fractions(min_value=-3, max_value=3, max_denominator=4))
def test_evaluate_matches_derived_datatype(text, x):
    c = sfeel.parse(text, REAL)
    v = num(REAL, x)
    assert sfeel.evaluate(c, v) == value_in(sfeel.to_derived(c, REAL), v)


@given(st.sampled_from(['"a"', 'not("a")', '"a", "b"', "-"]), st.sampled_from("abc"))
def test_string_conditions(text, s):
    c = sfeel.parse(text, STRING)
    assert sfeel.evaluate(c, string(s)) == value_in(sfeel.to_derived(c, STRING), string(s))


def test_check_type():
    c = sfeel.Cmp("<", num(REAL, 1))
    assert sfeel.check_type(c, REAL) == []
    assert sfeel.check_type(c, STRING)
