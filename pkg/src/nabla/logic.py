"""Logical combinators and first-order formulas.

The eight dotted combinators are ordinary typed lambda-terms over a handful of
primitive constants (``Eq``, ``Not``, ``And``, ``Or``, ``Imp``, ``Exists``,
``Forall``, ``Top``).  :func:`expand` unfolds them, :func:`to_formula` reads the
result back as a :class:`Formula`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Dict, Tuple, Union

from . import terms as tm
from .terms import ENTITY, TRUTH, Arrow, arrow

__all__ = [
    "PRIMITIVES", "COMBINATOR_TYPES", "logical_definitions", "expand",
    "Formula", "Top", "Pred", "Eq", "Not", "And", "Or", "Implies", "Exists", "Forall",
    "FolTerm", "FConst", "FVar",
    "to_formula", "simplify_top", "simplify_equality", "simplify", "tidy_variables", "substitute_formula", "render_formula", "parse_formula",
    "formula_alpha_equiv", "formula_free_vars", "LogicError",
]


class LogicError(Exception):
    pass


_PRED = Arrow(ENTITY, TRUTH)

PRIMITIVES: Dict[str, tm.SemType] = {
    "Eq": arrow(ENTITY, ENTITY, TRUTH),
    "Not": arrow(TRUTH, TRUTH),
    "And": arrow(TRUTH, TRUTH, TRUTH),
    "Or": arrow(TRUTH, TRUTH, TRUTH),
    "Imp": arrow(TRUTH, TRUTH, TRUTH),
    "Exists": arrow(_PRED, TRUTH),
    "Forall": arrow(_PRED, TRUTH),
    "Top": TRUTH,
}

COMBINATOR_TYPES: Dict[str, tm.SemType] = {
    "Qdot": arrow(ENTITY, ENTITY, TRUTH),
    "Ndot": arrow(TRUTH, TRUTH),
    "Cdot": arrow(TRUTH, TRUTH, TRUTH),
    "Ddot": arrow(TRUTH, TRUTH, TRUTH),
    "Odot": arrow(_PRED, _PRED, TRUTH),
    "Idot": arrow(_PRED, _PRED, TRUTH),
    "Tdot": TRUTH,
    "Pdot": arrow(TRUTH, TRUTH, TRUTH),
}

_DEFINITIONS = {
    "Qdot": r"\x y. Eq x y",
    "Ndot": r"\a. Not a",
    "Cdot": r"\a b. And a b",
    "Ddot": r"\a b. Or a b",
    "Odot": r"\t u. Exists (\x. And (t x) (u x))",
    "Idot": r"\t u. Forall (\x. Imp (t x) (u x))",
    "Tdot": "Top",
    "Pdot": r"\a b. Imp a b",
}


def logical_definitions() -> Dict[str, tm.Term]:
    """The eight logical combinators as closed terms over the primitives."""
    return {name: tm.parse_term(src, PRIMITIVES) for name, src in _DEFINITIONS.items()}


_DEFS = logical_definitions()


def _unfold(t):
    if isinstance(t, tm.Const):
        if t.name in _DEFS:
            return _DEFS[t.name]
        if t.name.endswith("dot"):
            raise LogicError(f"unknown logical combinator {t.name}")
        return t
    if isinstance(t, tm.Abs):
        return tm.Abs(t.bound, _unfold(t.body))
    if isinstance(t, tm.App):
        return tm.App(_unfold(t.fun), _unfold(t.arg))
    return t


def expand(t: tm.Term) -> tm.Term:
    """Replace the logical combinators by their definitions and beta-normalize.

    No eta step: binders under ``Exists``/``Forall`` keep their names.
    """
    return tm.beta_normalize(_unfold(t))


# ---------------------------------------------------------------- formulas


@dataclass(frozen=True)
class FConst:
    name: str

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class FVar:
    name: str

    def __str__(self):
        return self.name


FolTerm = Union[FConst, FVar]


@dataclass(frozen=True)
class Top:
    def __str__(self):
        return render_formula(self)


@dataclass(frozen=True)
class Pred:
    name: str
    args: Tuple[FolTerm, ...] = ()

    def __str__(self):
        return render_formula(self)


@dataclass(frozen=True)
class Eq:
    left: FolTerm
    right: FolTerm

    def __str__(self):
        return render_formula(self)


@dataclass(frozen=True)
class Not:
    body: "Formula"

    def __str__(self):
        return render_formula(self)


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return render_formula(self)


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return render_formula(self)


@dataclass(frozen=True)
class Implies:
    left: "Formula"
    right: "Formula"

    def __str__(self):
        return render_formula(self)


@dataclass(frozen=True)
class Exists:
    var: str
    body: "Formula"

    def __str__(self):
        return render_formula(self)


@dataclass(frozen=True)
class Forall:
    var: str
    body: "Formula"

    def __str__(self):
        return render_formula(self)


Formula = Union[Top, Pred, Eq, Not, And, Or, Implies, Exists, Forall]

_BINARY = {"And": And, "Or": Or, "Imp": Implies}
_QUANT = {"Exists": Exists, "Forall": Forall}


def to_formula(t: tm.Term) -> Formula:
    """Read an expanded truth-valued term as a first-order formula.

    A quantifier applied to something other than an abstraction is
    eta-expanded with a fresh variable.  Anything that does not fit first-order
    syntax raises :class:`LogicError`.
    """
    return _to_formula(t, frozenset(), tm.all_var_names(t))


def _fol_term(t, bound):
    if isinstance(t, tm.Var):
        if t.name not in bound:
            raise LogicError(f"free variable {t.name}")
        return FVar(t.name)
    if isinstance(t, tm.Const) and t.name not in PRIMITIVES:
        if t.type is not None and t.type != ENTITY:
            raise LogicError(f"{t.name} of type {t.type} used as an individual")
        return FConst(t.name)
    raise LogicError(f"not an individual term: {t}")


def _to_formula(t, bound, used):
    head, args = tm._spine(t)
    if isinstance(head, tm.Abs):
        raise LogicError(f"residual redex: {t}")
    if isinstance(head, tm.Var):
        raise LogicError(f"residual application of variable {head.name}: {t}")
    name = head.name
    if name == "Top" and not args:
        return Top()
    if name == "Not" and len(args) == 1:
        return Not(_to_formula(args[0], bound, used))
    if name in _BINARY and len(args) == 2:
        return _BINARY[name](_to_formula(args[0], bound, used),
                             _to_formula(args[1], bound, used))
    if name == "Eq" and len(args) == 2:
        return Eq(_fol_term(args[0], bound), _fol_term(args[1], bound))
    if name in _QUANT and len(args) == 1:
        pred = args[0]
        if isinstance(pred, tm.Abs):
            var, body = pred.bound, pred.body
        else:
            var = _fresh_var(used | bound)
            used = used | {var}
            body = tm.App(pred, tm.Var(var))
        return _QUANT[name](var, _to_formula(body, bound | {var}, used | {var}))
    if name in PRIMITIVES or name in _DEFS:
        raise LogicError(f"malformed use of {name}: {t}")
    if head.type is not None:
        expected = arrow(*([ENTITY] * len(args) + [TRUTH]))
        if head.type != expected:
            raise LogicError(f"residual non-logical application {t} of type {head.type}")
    return Pred(name, tuple(_fol_term(a, bound) for a in args))


_VAR_POOL = ["x", "y", "z", "u", "v", "w"]


def _fresh_var(avoid):
    for v in _VAR_POOL:
        if v not in avoid:
            return v
    i = 1
    while f"x{i}" in avoid:
        i += 1
    return f"x{i}"


def simplify_top(f: Formula) -> Formula:
    """Remove trivial truth: ``A => T`` to ``T``, ``T & A``/``A & T``/``T => A`` to ``A``."""
    if isinstance(f, (Top, Pred, Eq)):
        return f
    if isinstance(f, Not):
        return Not(simplify_top(f.body))
    if isinstance(f, (Exists, Forall)):
        return type(f)(f.var, simplify_top(f.body))
    left, right = simplify_top(f.left), simplify_top(f.right)
    if isinstance(f, Implies):
        if isinstance(right, Top):
            return Top()
        if isinstance(left, Top):
            return right
        return Implies(left, right)
    if isinstance(f, And):
        if isinstance(left, Top):
            return right
        if isinstance(right, Top):
            return left
        return And(left, right)
    return Or(left, right)


def simplify_equality(f: Formula) -> Formula:
    """Eliminate equalities that only name a witness.

    ``t = t`` becomes ``T`` and ``exists x (... & x = c & ...)`` becomes the
    remaining conjunction with ``c`` for ``x`` (the one-point rule).  Both are
    equivalences, so validity is unaffected.  Combine with :func:`simplify_top`
    to drop the resulting ``T`` conjuncts.
    """
    if isinstance(f, Eq):
        return Top() if f.left == f.right else f
    if isinstance(f, (Top, Pred)):
        return f
    if isinstance(f, Not):
        return Not(simplify_equality(f.body))
    if isinstance(f, Forall):
        return Forall(f.var, simplify_equality(f.body))
    if isinstance(f, Exists):
        body = simplify_equality(f.body)
        found = _witness(body, f.var)
        if found is None:
            return Exists(f.var, body)
        eq, value = found
        return simplify_equality(substitute_formula(_drop(body, eq), f.var, value))
    return type(f)(simplify_equality(f.left), simplify_equality(f.right))


def _conjuncts(f):
    if isinstance(f, And):
        yield from _conjuncts(f.left)
        yield from _conjuncts(f.right)
    else:
        yield f


def _witness(body, x):
    bound = _bound_vars(body)
    for c in _conjuncts(body):
        if not isinstance(c, Eq):
            continue
        for mine, other in ((c.left, c.right), (c.right, c.left)):
            if mine == FVar(x) and other != FVar(x):
                if isinstance(other, FVar) and other.name in bound:
                    continue
                return c, other
    return None


def _drop(f, eq):
    if f == eq:
        return Top()
    if isinstance(f, And):
        if f.left == eq:
            return f.right
        if f.right == eq:
            return f.left
        if eq in _conjuncts(f.left):
            return And(_drop(f.left, eq), f.right)
        return And(f.left, _drop(f.right, eq))
    return f


def _bound_vars(f) -> set:
    if isinstance(f, (Exists, Forall)):
        return {f.var} | _bound_vars(f.body)
    if isinstance(f, Not):
        return _bound_vars(f.body)
    if isinstance(f, (And, Or, Implies)):
        return _bound_vars(f.left) | _bound_vars(f.right)
    return set()


def substitute_formula(f: Formula, var: str, value: FolTerm) -> Formula:
    """Replace free occurrences of ``var``; the caller guarantees no capture."""
    def sub(a):
        return value if a == FVar(var) else a
    if isinstance(f, Top):
        return f
    if isinstance(f, Pred):
        return Pred(f.name, tuple(sub(a) for a in f.args))
    if isinstance(f, Eq):
        return Eq(sub(f.left), sub(f.right))
    if isinstance(f, Not):
        return Not(substitute_formula(f.body, var, value))
    if isinstance(f, (Exists, Forall)):
        if f.var == var:
            return f
        return type(f)(f.var, substitute_formula(f.body, var, value))
    return type(f)(substitute_formula(f.left, var, value), substitute_formula(f.right, var, value))


def tidy_variables(f: Formula) -> Formula:
    """Rename bound variables to the first of x, y, z, ... not in use.

    A binder avoids the variables of enclosing binders and the free variables
    of its body, so sibling quantifiers share a name and nested ones differ.
    """
    def walk(f, scope):
        if isinstance(f, (Exists, Forall)):
            taken = scope | (formula_free_vars(f.body) - {f.var})
            new = _fresh_var(taken)
            body = f.body if new == f.var else substitute_formula(_avoid(f.body, new), f.var, FVar(new))
            return type(f)(new, walk(body, scope | {new}))
        if isinstance(f, Not):
            return Not(walk(f.body, scope))
        if isinstance(f, (And, Or, Implies)):
            return type(f)(walk(f.left, scope), walk(f.right, scope))
        return f

    return walk(f, frozenset())


def _avoid(f, name):
    # rename inner binders called ``name`` so substituting it cannot capture
    if isinstance(f, (Exists, Forall)):
        body = _avoid(f.body, name)
        if f.var != name:
            return type(f)(f.var, body)
        fresh = _fresh_var(formula_free_vars(body) | _bound_vars(body) | {name})
        return type(f)(fresh, substitute_formula(body, name, FVar(fresh)))
    if isinstance(f, Not):
        return Not(_avoid(f.body, name))
    if isinstance(f, (And, Or, Implies)):
        return type(f)(_avoid(f.left, name), _avoid(f.right, name))
    return f


def simplify(f: Formula) -> Formula:
    """Equality elimination followed by removal of trivial truth."""
    return simplify_top(simplify_equality(f))


def formula_free_vars(f: Formula) -> frozenset:
    if isinstance(f, Top):
        return frozenset()
    if isinstance(f, Pred):
        return frozenset(a.name for a in f.args if isinstance(a, FVar))
    if isinstance(f, Eq):
        return frozenset(a.name for a in (f.left, f.right) if isinstance(a, FVar))
    if isinstance(f, Not):
        return formula_free_vars(f.body)
    if isinstance(f, (Exists, Forall)):
        return formula_free_vars(f.body) - {f.var}
    return formula_free_vars(f.left) | formula_free_vars(f.right)


def formula_alpha_equiv(a: Formula, b: Formula) -> bool:
    return _falpha(a, b, {}, {}, 0)


def _fterm_eq(x, y, ea, eb):
    if isinstance(x, FVar) and isinstance(y, FVar):
        dx, dy = ea.get(x.name), eb.get(y.name)
        return dx == dy if (dx is not None or dy is not None) else x.name == y.name
    return x == y


def _falpha(a, b, ea, eb, d):
    if type(a) is not type(b):
        return False
    if isinstance(a, Top):
        return True
    if isinstance(a, Pred):
        return (a.name == b.name and len(a.args) == len(b.args)
                and all(_fterm_eq(x, y, ea, eb) for x, y in zip(a.args, b.args)))
    if isinstance(a, Eq):
        return _fterm_eq(a.left, b.left, ea, eb) and _fterm_eq(a.right, b.right, ea, eb)
    if isinstance(a, Not):
        return _falpha(a.body, b.body, ea, eb, d)
    if isinstance(a, (Exists, Forall)):
        return _falpha(a.body, b.body, {**ea, a.var: d}, {**eb, b.var: d}, d + 1)
    return _falpha(a.left, b.left, ea, eb, d) and _falpha(a.right, b.right, ea, eb, d)


# ---------------------------------------------------------------- printing

_SYMBOLS = {
    True: {"top": "⊤", "not": "¬", "and": " ∧ ", "or": " ∨ ", "imp": " ⇒ ",
           "exists": "∃", "forall": "∀"},
    False: {"top": "true", "not": "~", "and": " & ", "or": " | ", "imp": " => ",
            "exists": "exists ", "forall": "forall "},
}

# binding strength: atoms/quantifiers 4, negation 3, and/or 2, implication 1
_LEVEL = {Top: 4, Pred: 4, Eq: 4, Exists: 4, Forall: 4, Not: 3, And: 2, Or: 2, Implies: 1}


def render_formula(f: Formula, unicode: bool = True) -> str:
    """Print with the conventional precedences; ``∧``, ``∨`` and ``⇒`` associate right."""
    sym = _SYMBOLS[unicode]
    if isinstance(f, Top):
        return sym["top"]
    if isinstance(f, Pred):
        return " ".join([f.name] + [a.name for a in f.args])
    if isinstance(f, Eq):
        return f"{f.left.name} = {f.right.name}"
    if isinstance(f, Not):
        inner = render_formula(f.body, unicode)
        if isinstance(f.body, Eq) or _LEVEL[type(f.body)] < 3:
            inner = f"({inner})"
        return sym["not"] + inner
    if isinstance(f, (Exists, Forall)):
        q = sym["exists"] if isinstance(f, Exists) else sym["forall"]
        body = render_formula(f.body, unicode)
        return f"{q}{f.var}({body})" if unicode else f"{q}{f.var}. ({body})"
    op = {And: "and", Or: "or", Implies: "imp"}[type(f)]
    left = render_formula(f.left, unicode)
    right = render_formula(f.right, unicode)
    if isinstance(f, Implies):
        if isinstance(f.left, Implies):
            left = f"({left})"
    else:
        if _LEVEL[type(f.left)] <= 2:
            left = f"({left})"
        if _LEVEL[type(f.right)] < 2 or (_LEVEL[type(f.right)] == 2 and type(f.right) is not type(f)):
            right = f"({right})"
    return left + sym[op] + right


# ---------------------------------------------------------------- parsing

_FTOKEN = re.compile(
    r"\s*(?:(?P<op>=>|⇒|[~¬&∧|∨=().∀∃⊤])|(?P<ident>[A-Za-z0-9_]+'*))")


def parse_formula(text: str) -> Formula:
    """Parse the ASCII or Unicode formula syntax produced by :func:`render_formula`.

    Mixing ``&`` and ``|`` at one level requires parentheses.
    """
    tokens = []
    pos = 0
    stripped = text.rstrip()
    while pos < len(stripped):
        m = _FTOKEN.match(stripped, pos)
        if not m:
            raise LogicError(f"unexpected character {stripped[pos]!r} at position {pos}")
        tokens.append(m.group("op") or m.group("ident"))
        pos = m.end()
    i = 0

    def peek(k=0):
        return tokens[i + k] if i + k < len(tokens) else None

    def take(expected=None):
        nonlocal i
        tok = peek()
        if tok is None or (expected is not None and tok not in expected):
            raise LogicError(f"expected {expected or 'token'}, got {tok!r}")
        i += 1
        return tok

    def implication():
        left = junction()
        if peek() in ("=>", "⇒"):
            take()
            return Implies(left, implication())
        return left

    def junction():
        left = unary()
        op = peek()
        if op in ("&", "∧", "|", "∨"):
            kind = And if op in ("&", "∧") else Or
            take()
            right = junction()
            if type(right) in (And, Or) and type(right) is not kind and not _parenthesized(right):
                raise LogicError("mixed & and | need parentheses")
            return kind(left, right)
        return left

    parens = set()

    def _parenthesized(f):
        return id(f) in parens

    def unary():
        tok = peek()
        if tok in ("~", "¬"):
            take()
            return Not(unary())
        if tok in ("exists", "forall", "∃", "∀"):
            take()
            var = take()
            if not (var[0].islower() or var[0].isdigit()):
                raise LogicError(f"bad bound variable {var!r}")
            if peek() == ".":
                take()
            body = unary()
            return (Exists if tok in ("exists", "∃") else Forall)(var, body)
        if tok == "(":
            take()
            inner = implication()
            take(")")
            parens.add(id(inner))
            return inner
        return atom()

    def term(tok):
        return FVar(tok) if (tok[0].islower() or tok[0].isdigit()) else FConst(tok)

    def atom():
        tok = take()
        if tok in ("true", "⊤"):
            return Top()
        if not (tok[0].isalnum() or tok[0] == "_"):
            raise LogicError(f"unexpected {tok!r}")
        if peek() == "=":
            take()
            return Eq(term(tok), term(take()))
        if tok[0].islower() or tok[0].isdigit():
            raise LogicError(f"variable {tok!r} used as a formula")
        args = []
        while peek() is not None and (peek()[0].isalnum() or peek()[0] == "_") \
                and peek() not in ("exists", "forall", "true"):
            args.append(term(take()))
        return Pred(tok, tuple(args))

    result = implication()
    if i != len(tokens):
        raise LogicError(f"trailing input {tokens[i]!r}")
    return result
