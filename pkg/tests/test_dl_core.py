import random

import pytest

from dkbv.datatypes import INTEGER, REAL, Whole, num
from dkbv.dl_core import (
    BOT, TOP, And, ConceptFact, ConceptIncl, DlSignature, Exists, ExistsF, FeatureFact,
    FeatureIncl, Forall, Kb, Name, Not, Or, RoleFact, Undef, closure, concept_errors,
    format_concept, has_value, is_nnf, kb_errors, negate, nnf, size, subconcepts, tilde,
)

from oracles import _ext, random_concept

FEATS = {"F": INTEGER}


def _random_interpretation(rng, n):
    roles = {r: frozenset((x, y) for x in range(n) for y in range(n) if rng.random() < 0.3)
             for r in ("r", "s")}
    feats = {"F": [rng.choice([None, num(INTEGER, rng.randint(-1, 3))]) for _ in range(n)]}
    return {"concepts": {"A": rng.getrandbits(n), "B": rng.getrandbits(n)},
            "roles": roles, "features": feats}


def test_nnf_preserves_extension_on_random_interpretations():
    rng = random.Random(3)
    for _ in range(300):
        c = random_concept(rng, 3, ("r", "s"))
        n = rng.randint(1, 4)
        interp = _random_interpretation(rng, n)
        full = (1 << n) - 1
        assert is_nnf(nnf(c, FEATS))
        assert _ext(nnf(c, FEATS), n, interp) == _ext(c, n, interp)
        neg = negate(nnf(c, FEATS), FEATS)
        assert _ext(neg, n, interp) == full & ~_ext(c, n, interp)


def test_negation_is_involutive_on_its_image():
    rng = random.Random(4)
    for _ in range(300):
        c = negate(nnf(random_concept(rng, 3), FEATS), FEATS)
        assert negate(negate(c, FEATS), FEATS) == c


def test_tilde_basics():
    assert tilde(TOP) == BOT and tilde(BOT) == TOP
    assert tilde(Name("A")) == Not(Name("A"))
    assert tilde(ExistsF("F", Whole(INTEGER))) == Undef("F")
    assert nnf(Not(Undef("F")), FEATS) == ExistsF("F", Whole(INTEGER))
    with pytest.raises(ValueError):
        tilde(Undef("F"))


def test_closure_is_closed():
    rng = random.Random(5)
    for _ in range(50):
        sig = DlSignature({"A", "B"}, {"r"}, FEATS)
        k = Kb(sig, [ConceptIncl(random_concept(rng, 2), random_concept(rng, 2))],
               [ConceptFact("A", "a")])
        cl = closure(k)
        concepts = {c for c in cl if not isinstance(c, str)}
        assert "a" in cl
        for c in concepts:
            assert negate(c, FEATS) in concepts
            assert all(s in concepts for s in subconcepts(c))


def test_size_counts_nodes():
    c = And(Name("A"), Exists("r", Or(Name("B"), Not(Name("A")))))
    assert size(c) == 7


def test_typing_errors():
    sig = DlSignature({"A"}, {"r"}, {"F": INTEGER, "G": REAL})
    assert concept_errors(sig, Exists("r", Name("A"))) == []
    assert "unknown concept name Z" in concept_errors(sig, Name("Z"))
    assert "unknown role q" in concept_errors(sig, Forall("q", TOP))
    assert concept_errors(sig, ExistsF("F", Whole(REAL)))
    k = Kb(sig, [FeatureIncl("F", "G")],
           [FeatureFact("F", "a", num(REAL, 1)), RoleFact("q", "a", "b")])
    errs = kb_errors(k)
    assert "features F and G have different datatypes" in errs
    assert "unknown role q" in errs
    assert any("is not a integer" in e for e in errs)


def test_format_concept():
    c = And(Or(Name("A"), Name("B")), Not(Name("A")))
    assert format_concept(c) == "(A or B) and not A"
    assert format_concept(has_value("F", num(INTEGER, 2))) == "some F : integer{2}"
