import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from nabla import terms as tm
from nabla.logic import (COMBINATOR_TYPES, PRIMITIVES, And, Eq, Exists, FConst, Forall, FVar,
                         LogicError, Pred, expand, formula_alpha_equiv,
                         formula_free_vars, logical_definitions, parse_formula, render_formula,
                         simplify, simplify_equality, simplify_top, tidy_variables, to_formula)
from nabla.validity import evaluate, signature

from generators import formula_to_term, random_formula
from oracles import all_models

seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)
J, V = FConst("J"), FConst("V")
x, y = FVar("x"), FVar("y")


def F(text):
    return parse_formula(text)


def T(text):
    return tm.parse_term(text)


def test_definitions_have_declared_types():
    defs = logical_definitions()
    assert set(defs) == set(COMBINATOR_TYPES)
    for name, term in defs.items():
        assert tm.type_of(term) == COMBINATOR_TYPES[name], name
        assert not tm.free_vars(term)


@pytest.mark.parametrize("term, formula", [
    ("Pdot (S J) Tdot", "S J => true"),
    ("Odot (\\x. W x) (\\x. L J x)", "exists x. (W x & L J x)"),
    ("Idot M R", "forall x. (M x => R x)"),
    ("Ndot (Qdot J N)", "~(J = N)"),
    ("Ddot (R J) (Cdot (D V) Tdot)", "R J | (D V & true)"),
])
def test_expand_then_read(term, formula):
    assert formula_alpha_equiv(to_formula(expand(T(term))), F(formula))


def test_quantifier_argument_is_eta_expanded():
    f = to_formula(T("Exists M"))
    assert f == Exists("x", Pred("M", (x,)))
    # the fresh name avoids variables already in the term
    f = to_formula(T(r"Forall (\x. Exists M)"))
    assert f == Forall("x", Exists("y", Pred("M", (y,))))


@pytest.mark.parametrize("bad", [
    "Pdot Top",
    r"\x. M x",
    "And Top",
    "Zdot",
])
def test_to_formula_rejects_non_formulas(bad):
    with pytest.raises(LogicError):
        to_formula(expand(T(bad)))


def test_free_variable_rejected():
    with pytest.raises(LogicError):
        to_formula(T("M x"))


@pytest.mark.parametrize("before, after", [
    ("S J => true", "true"),
    ("true => S J", "S J"),
    ("true & S J", "S J"),
    ("S J & true", "S J"),
    ("exists x. (true & M x)", "exists x. (M x)"),
    ("~(true => M J)", "~(M J)"),
    ("M J | true", "M J | true"),
])
def test_simplify_top(before, after):
    assert simplify_top(F(before)) == F(after)


@pytest.mark.parametrize("before, after", [
    ("J = J", "true"),
    ("exists x. (M x & x = J)", "M J"),
    ("exists x. (J = x & L x V)", "L J V"),
    ("exists x. (P x & (M x & x = J))", "P J & M J"),
    ("forall x. (x = J => M x)", "forall x. (x = J => M x)"),
    ("exists x. (x = J | M x)", "exists x. (x = J | M x)"),
])
def test_simplify_equality(before, after):
    assert simplify_equality(F(before)) == F(after)


def test_one_point_rule_refuses_capture():
    f = Exists("x", And(Eq(x, y), Exists("y", Pred("L", (x, y)))))
    assert simplify_equality(f) == f


def test_popular_reading_simplifies():
    term = T(r"Pdot (Odot (\x. Cdot (P x) (M x)) (\x. Qdot J x)) (Cdot (P J) (Qdot J J))")
    f = to_formula(expand(term))
    assert render_formula(simplify(f)) == "P J ∧ M J ⇒ P J"


@pytest.mark.parametrize("text", [
    "∀x(M x ⇒ ∃y(W y ∧ L x y))",
    "¬(J = N) ∨ R J",
    "(A ⇒ B) ⇒ C",
    "A ⇒ B ⇒ C",
    "(A ∧ B) ∧ C",
    "¬¬P J",
])
def test_render_parse_roundtrip(text):
    f = F(text)
    assert render_formula(f) == text
    assert F(render_formula(f, unicode=False)) == f


def test_parse_errors():
    for bad in ["M J &", "A & B | C", "∀(M x)", "J = ", "(A"]:
        with pytest.raises(LogicError):
            F(bad)


def test_tidy_variables():
    f = Exists("u", And(Pred("M", (FVar("u"),)), Exists("w", Pred("L", (FVar("u"), FVar("w"))))))
    assert tidy_variables(f) == F("exists x. (M x & exists y. (L x y))")
    g = And(Exists("v", Pred("M", (FVar("v"),))), Forall("w", Pred("W", (FVar("w"),))))
    assert tidy_variables(g) == F("exists x. (M x) & forall x. (W x)")


# ------------------------------------------------------------ properties

def _closed(rng):
    while True:
        f = random_formula(rng, size=6)
        if not formula_free_vars(f):
            return f


def test_term_embedding_roundtrip_thousand():
    rng = random.Random(7)
    for _ in range(1000):
        f = random_formula(rng)
        if formula_free_vars(f):
            continue
        assert formula_alpha_equiv(to_formula(formula_to_term(f)), f)
        # and again with every constant typed
        consts, preds = signature(f)
        sig = dict(PRIMITIVES, **{c: tm.ENTITY for c in consts})
        sig.update({p: tm.arrow(*[tm.ENTITY] * k, tm.TRUTH) for p, k in preds.items()})
        term = tm.infer_constants(formula_to_term(f), tm.TRUTH, sig)
        assert formula_alpha_equiv(to_formula(term), f)


@settings(max_examples=60, deadline=None)
@given(seeds)
def test_simplification_preserves_truth(seed):
    f = _closed(random.Random(seed))
    targets = [simplify_top(f), simplify_equality(f), simplify(f), tidy_variables(f)]
    for m in all_models(f, 2):
        truth = evaluate(f, m)
        for g in targets:
            assert evaluate(g, m) == truth, (render_formula(f), render_formula(g))


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_tidy_is_alpha_equivalent(seed):
    f = random_formula(random.Random(seed), max_quantifiers=3)
    assert formula_alpha_equiv(tidy_variables(f), f)


@settings(max_examples=200, deadline=None)
@given(seeds)
def test_render_parse_random(seed):
    f = random_formula(random.Random(seed))
    for uni in (True, False):
        assert F(render_formula(f, uni)) == f
