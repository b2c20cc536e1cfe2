import random
from fractions import Fraction

import pytest

from dkbv.datatypes import INTEGER, RATIONAL, REAL, num
from dkbv.dl_core import ConceptIncl, DlSignature, Kb
from dkbv.encoding import _dkb_signature
from dkbv.fixtures import load_fixture
from dkbv.owl import (
    OwlSyntaxError, check_functional_syntax, dkb_to_owl, functional_data_properties, kb_to_owl,
    literal,
)

from oracles import random_concept


def test_ship_export_is_valid():
    d = load_fixture("ship-full")
    text = dkb_to_owl(d)
    check_functional_syntax(text)
    props = functional_data_properties(text)
    feats = _dkb_signature(d).features
    assert len(props) == len(feats) == len(set(props))


@pytest.mark.parametrize("breakage", [
    lambda s: s.replace("SubClassOf(", "SubClassOf((", 1),
    lambda s: s.rstrip().rstrip(")"),
    lambda s: s.replace("Declaration(Class(:Ship))", ""),
    lambda s: s.replace("DataSomeValuesFrom(", "ObjectSomeValuesFrom(", 1),
])
def test_checker_rejects_broken_text(breakage):
    text = dkb_to_owl(load_fixture("ship-full"))
    with pytest.raises(OwlSyntaxError):
        check_functional_syntax(breakage(text))


def test_exact_literals():
    assert literal(num(REAL, Fraction(31, 2))) == '"15.5"^^xsd:decimal'
    assert "1/3" in literal(num(RATIONAL, Fraction(1, 3)))


def test_random_kbs_export_cleanly():
    rng = random.Random(2)
    sig = DlSignature({"A", "B"}, {"r"}, {"F": INTEGER})
    for _ in range(50):
        k = Kb(sig, [ConceptIncl(random_concept(rng, 3), random_concept(rng, 3))])
        check_functional_syntax(kb_to_owl(k))
