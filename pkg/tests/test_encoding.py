import pytest

from dkbv.datatypes import REAL, STRING, Whole, string
from dkbv.dl_core import (
    ConceptIncl, ExistsF, FeatureIncl, Not, has_value, kb_errors, size,
)
from dkbv.dmn_model import make_table
from dkbv.encoding import (
    Dkb, EncodingError, encode_condition, encode_dkb, encode_facet, encode_if, encode_rule,
    encode_table, presence, validate_dkb,
)
from dkbv.fixtures import load_fixture
from dkbv import sfeel
from dkbv.tasks import check_coverage, restrict_tables


def _chain(n):
    rules = [([f"[{i}..{i + 1})", "-"], ["a" if i % 2 else "b"]) for i in range(n)]
    return make_table("T", [("x", REAL), ("y", REAL)], [("o", STRING)], rules,
                      ranges={"o": ["a", "b"]})


def _rule_size(t):
    return sum(size(ax.sub) + size(ax.sup) for ax in encode_table(t, "Case")
               if isinstance(ax, ConceptIncl))


def test_rule_encoding_grows_at_most_quadratically():
    sizes = {n: _rule_size(_chain(n)) for n in (2, 4, 8, 16)}
    for n in (2, 4, 8):
        assert sizes[2 * n] <= 4 * sizes[n]
    assert sizes[16] / 16 ** 2 <= sizes[2] / 2 ** 2


def test_dash_entry_means_defined():
    c = encode_condition("T.x", REAL, sfeel.ANY)
    assert c == ExistsF("T.x", Whole(REAL))
    assert encode_facet("T.x", REAL, sfeel.ANY) is None


def test_rule_axiom_shape():
    t = _chain(3)
    ax = encode_rule(t, 2, prioritize=False)
    assert ax.sub == encode_if(t, 2)
    assert ax.sup == has_value("T.o", string("b"))
    ax = encode_rule(t, 2)
    assert Not(encode_if(t, 0)) in _conjuncts(ax.sub)


def _conjuncts(c):
    from dkbv.dl_core import And
    if isinstance(c, And):
        return _conjuncts(c.left) + _conjuncts(c.right)
    return [c]


def test_flows_become_feature_inclusions():
    d = load_fixture("ship-full")
    k = encode_dkb(d)
    incl = {(ax.sub, ax.sup) for ax in k.tbox if isinstance(ax, FeatureIncl)}
    assert ("Sc.Enter", "Rad.Enter") in incl and ("Rad.Enter", "Sc.Enter") in incl
    assert kb_errors(k) == []
    one_way = encode_dkb(d, closed_bindings=False)
    assert ("Rad.Enter", "Sc.Enter") not in {(ax.sub, ax.sup) for ax in one_way.tbox
                                             if isinstance(ax, FeatureIncl)}


def test_outdoor_depends_on_closed_bindings():
    d = load_fixture("ship-full")
    assert not check_coverage(d, "Rad", "RefuelArea", string("outdoor")).holds
    assert check_coverage(d, "Rad", "RefuelArea", string("outdoor"),
                          closed_bindings=False).holds


def test_validation_errors():
    d = load_fixture("ship-full")
    bad = Dkb(d.signature, d.background, d.drg, "Nope", d.abox)
    assert "bridge concept Nope is not declared" in validate_dkb(bad)
    with pytest.raises(EncodingError):
        encode_dkb(bad)


def test_presence_covers_free_inputs():
    d = restrict_tables(load_fixture("ship-full"), ["Rad"])
    feats = {c.feature for c in _conjuncts(presence(d.drg))}
    assert feats == {"Rad.Enter", "length", "cargo"}
