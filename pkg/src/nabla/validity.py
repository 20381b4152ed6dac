"""Validity of first-order formulas at desk scale.

Two independent searches decide a formula:

* :func:`prove_valid` refutes the negation with an analytic tableau.  Each
  universal formula is instantiated at most ``depth`` times per branch, and
  equality is handled by congruence closure over the branch equations.
* :func:`find_countermodel` enumerates finite interpretations, smallest
  domain first, and returns one that falsifies the formula.

Both are sound, so at most one of them can succeed on a given formula.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Dict, FrozenSet, Iterator, List, Optional, Tuple, Union

from .logic import (And, Eq, Exists, FConst, Forall, Formula, FVar, Implies, Not, Or, Pred, Top,
                    formula_free_vars, substitute_formula)

__all__ = [
    "Model", "Valid", "Invalid", "Unknown", "Verdict", "ResourceError", "EvaluationError",
    "evaluate", "find_countermodel", "prove_valid", "check", "signature", "render_model",
    "DEFAULT_DEPTH", "DEFAULT_MAX_SIZE", "DEFAULT_MAX_INTERPRETATIONS",
]

DEFAULT_DEPTH = 3
DEFAULT_MAX_SIZE = 4
DEFAULT_MAX_INTERPRETATIONS = 10 ** 7


class ResourceError(Exception):
    """The interpretation count cap would be exceeded."""


class EvaluationError(ValueError):
    """A symbol of the formula is not interpreted by the model."""


# ------------------------------------------------------------------ models

@dataclass(frozen=True)
class Model:
    domain_size: int
    constant_map: Dict[str, int] = field(default_factory=dict)
    predicate_tables: Dict[str, FrozenSet[Tuple[int, ...]]] = field(default_factory=dict)

    def __post_init__(self):
        if self.domain_size < 1:
            raise ValueError("domain must be non-empty")
        for name, d in self.constant_map.items():
            if not 0 <= d < self.domain_size:
                raise ValueError(f"constant {name} maps outside the domain")
        for name, table in self.predicate_tables.items():
            for row in table:
                if any(not 0 <= d < self.domain_size for d in row):
                    raise ValueError(f"predicate {name} mentions an element outside the domain")

    def __hash__(self):
        return hash((self.domain_size, tuple(sorted(self.constant_map.items())),
                     tuple(sorted((k, tuple(sorted(v))) for k, v in self.predicate_tables.items()))))

    def to_dict(self) -> dict:
        return {
            "domain_size": self.domain_size,
            "constants": dict(sorted(self.constant_map.items())),
            "predicates": {k: sorted(list(r) for r in v) for k, v in sorted(self.predicate_tables.items())},
        }


def render_model(m: Model) -> str:
    lines = [f"domain {{{', '.join(str(d) for d in range(m.domain_size))}}}"]
    for name, d in sorted(m.constant_map.items()):
        lines.append(f"{name} = {d}")
    for name, table in sorted(m.predicate_tables.items()):
        rows = sorted(table)
        shown = ", ".join(str(r[0]) if len(r) == 1 else "(" + ", ".join(map(str, r)) + ")" for r in rows)
        lines.append(f"{name} = {{{shown}}}")
    return "\n".join(lines)


def signature(f: Formula) -> Tuple[List[str], Dict[str, int]]:
    """Constants in order of first appearance and predicate arities."""
    consts: List[str] = []
    preds: Dict[str, int] = {}

    def term(a):
        if isinstance(a, FConst) and a.name not in consts:
            consts.append(a.name)

    def walk(f):
        if isinstance(f, Pred):
            if preds.setdefault(f.name, len(f.args)) != len(f.args):
                raise ValueError(f"predicate {f.name} used with different arities")
            for a in f.args:
                term(a)
        elif isinstance(f, Eq):
            term(f.left)
            term(f.right)
        elif isinstance(f, Not):
            walk(f.body)
        elif isinstance(f, (Exists, Forall)):
            walk(f.body)
        elif isinstance(f, (And, Or, Implies)):
            walk(f.left)
            walk(f.right)

    walk(f)
    return consts, preds


def evaluate(f: Formula, m: Model, env: Optional[Dict[str, int]] = None) -> bool:
    """Classical truth of ``f`` in ``m``; equality is identity of elements."""
    env = dict(env or {})

    def val(a):
        if isinstance(a, FVar):
            if a.name not in env:
                raise EvaluationError(f"unbound variable {a.name}")
            return env[a.name]
        if a.name not in m.constant_map:
            raise EvaluationError(f"uninterpreted constant {a.name}")
        return m.constant_map[a.name]

    def ev(f):
        if isinstance(f, Top):
            return True
        if isinstance(f, Pred):
            if f.name not in m.predicate_tables:
                raise EvaluationError(f"uninterpreted predicate {f.name}")
            return tuple(val(a) for a in f.args) in m.predicate_tables[f.name]
        if isinstance(f, Eq):
            return val(f.left) == val(f.right)
        if isinstance(f, Not):
            return not ev(f.body)
        if isinstance(f, And):
            return ev(f.left) and ev(f.right)
        if isinstance(f, Or):
            return ev(f.left) or ev(f.right)
        if isinstance(f, Implies):
            return (not ev(f.left)) or ev(f.right)
        saved = env.get(f.var, None)
        had = f.var in env
        want = isinstance(f, Forall)
        result = want
        for d in range(m.domain_size):
            env[f.var] = d
            if ev(f.body) != want:
                result = not want
                break
        if had:
            env[f.var] = saved
        else:
            env.pop(f.var, None)
        return result

    return ev(f)


# ------------------------------------------------------ countermodel search

def _compile(f: Formula, consts: Dict[str, int], preds: Dict[str, int], n: int
             ) -> Callable[[tuple, tuple, list], bool]:
    """Closure evaluating ``f`` from constant values, table bitmasks and slots."""

    def comp(f, scope, level):
        if isinstance(f, Top):
            return lambda c, t, e: True
        if isinstance(f, (Pred, Eq)):
            args = (f.args if isinstance(f, Pred) else (f.left, f.right))
            getters = []
            for a in args:
                if isinstance(a, FConst):
                    i = consts[a.name]
                    getters.append(lambda c, e, i=i: c[i])
                else:
                    if a.name not in scope:
                        raise ValueError(f"free variable {a.name}")
                    s = scope[a.name]
                    getters.append(lambda c, e, s=s: e[s])
            if isinstance(f, Eq):
                g, h = getters
                return lambda c, t, e: g(c, e) == h(c, e)
            p = preds[f.name]
            weights = [n ** k for k in range(len(getters))]
            pairs = list(zip(weights, getters))
            return lambda c, t, e: (t[p] >> sum(w * g(c, e) for w, g in pairs)) & 1 == 1
        if isinstance(f, Not):
            b = comp(f.body, scope, level)
            return lambda c, t, e: not b(c, t, e)
        if isinstance(f, (And, Or, Implies)):
            left, right = comp(f.left, scope, level), comp(f.right, scope, level)
            if isinstance(f, And):
                return lambda c, t, e: left(c, t, e) and right(c, t, e)
            if isinstance(f, Or):
                return lambda c, t, e: left(c, t, e) or right(c, t, e)
            return lambda c, t, e: (not left(c, t, e)) or right(c, t, e)
        slot = level
        body = comp(f.body, {**scope, f.var: slot}, level + 1)
        dom = range(n)
        if isinstance(f, Exists):
            def ex(c, t, e):
                for d in dom:
                    e[slot] = d
                    if body(c, t, e):
                        return True
                return False
            return ex

        def fa(c, t, e):
            for d in dom:
                e[slot] = d
                if not body(c, t, e):
                    return False
            return True
        return fa

    return comp(f, {}, 0)


def _growth_strings(k: int, n: int) -> Iterator[Tuple[int, ...]]:
    """Constant assignments up to relabeling: each value at most one above the max so far."""
    def rec(prefix, top):
        if len(prefix) == k:
            yield tuple(prefix)
            return
        for v in range(min(top + 2, n)):
            yield from rec(prefix + [v], max(top, v))
    yield from rec([], -1)


def _count_growth_strings(k: int, n: int) -> int:
    return sum(1 for _ in _growth_strings(k, n)) if k <= 8 else n ** k


def _depth(f) -> int:
    if isinstance(f, (Exists, Forall)):
        return 1 + _depth(f.body)
    if isinstance(f, Not):
        return _depth(f.body)
    if isinstance(f, (And, Or, Implies)):
        return max(_depth(f.left), _depth(f.right))
    return 0


def find_countermodel(f: Formula, max_size: int = DEFAULT_MAX_SIZE,
                      max_interpretations: int = DEFAULT_MAX_INTERPRETATIONS) -> Optional[Model]:
    """Smallest model falsifying ``f`` with at most ``max_size`` elements.

    Constant assignments are enumerated only up to relabeling of the domain;
    predicate tables exhaustively.  Raises :class:`ResourceError` before a
    domain size whose interpretations would push the running total past
    ``max_interpretations``.
    """
    if formula_free_vars(f):
        raise ValueError("formula has free variables")
    consts, preds = signature(f)
    cindex = {c: i for i, c in enumerate(consts)}
    pindex = {p: i for i, p in enumerate(preds)}
    arities = list(preds.values())
    total = 0
    for n in range(1, max_size + 1):
        count = _count_growth_strings(len(consts), n)
        for k in arities:
            count *= 2 ** (n ** k)
        if total + count > max_interpretations:
            raise ResourceError(
                f"domain size {n} needs {count} interpretations; "
                f"cap is {max_interpretations} ({total} already used)")
        total += count
        ev = _compile(f, cindex, pindex, n)
        env = [0] * (_depth(f) + 1)
        table_ranges = [range(2 ** (n ** k)) for k in arities]
        for cvals in _growth_strings(len(consts), n):
            for tables in itertools.product(*table_ranges):
                if not ev(cvals, tables, env):
                    return _model(n, consts, cvals, preds, tables)
    return None


def _model(n, consts, cvals, preds, tables) -> Model:
    ptables = {}
    for (name, k), mask in zip(preds.items(), tables):
        rows = set()
        for idx in range(n ** k):
            if mask >> idx & 1:
                rows.add(tuple((idx // n ** j) % n for j in range(k)))
        ptables[name] = frozenset(rows)
    return Model(n, dict(zip(consts, cvals)), ptables)


# ----------------------------------------------------------------- tableau

class _UnionFind:
    def __init__(self, parent=None):
        self.parent = dict(parent or {})

    def find(self, x):
        root = x
        while self.parent.get(root, root) != root:
            root = self.parent[root]
        while x != root:
            nxt = self.parent.get(x, x)
            self.parent[x] = root
            x = nxt
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)

    def copy(self):
        return _UnionFind(self.parent)


@dataclass
class _Branch:
    pending: List[Tuple[Formula, bool]]
    pos: List[Pred]
    neg: List[Pred]
    eqs: List[Eq]
    neqs: List[Eq]
    betas: List[Tuple[Formula, bool]]
    gammas: List[list]  # [formula, sign, constants already used]
    constants: List[str]
    fresh: Iterator[str]

    def copy(self, extra):
        return _Branch(list(self.pending) + [extra], list(self.pos), list(self.neg), list(self.eqs),
                       list(self.neqs), list(self.betas), [[g[0], g[1], list(g[2])] for g in self.gammas],
                       list(self.constants), self.fresh)


def _name(a) -> str:
    return a.name


def _closed(b: _Branch) -> bool:
    uf = _UnionFind()
    for e in b.eqs:
        uf.union(_name(e.left), _name(e.right))
    for e in b.neqs:
        if uf.find(_name(e.left)) == uf.find(_name(e.right)):
            return True
    positives = {(p.name, tuple(uf.find(_name(a)) for a in p.args)) for p in b.pos}
    return any((p.name, tuple(uf.find(_name(a)) for a in p.args)) in positives for p in b.neg)


def _note_constants(b: _Branch, f: Formula):
    def term(a):
        if isinstance(a, FConst) and a.name not in b.constants:
            b.constants.append(a.name)

    if isinstance(f, Pred):
        for a in f.args:
            term(a)
    elif isinstance(f, Eq):
        term(f.left)
        term(f.right)


def prove_valid(f: Formula, depth: int = DEFAULT_DEPTH) -> bool:
    """True iff a closed tableau for the negation of ``f`` is found.

    ``False`` means only that no proof exists within the bound.
    """
    if formula_free_vars(f):
        raise ValueError("formula has free variables")
    consts, _ = signature(f)
    fresh = (f"_c{i}" for i in itertools.count(1))
    root = _Branch([(f, False)], [], [], [], [], [], [], list(consts), fresh)
    return _refute(root, depth)


def _refute(b: _Branch, depth: int) -> bool:
    while True:
        # literals, alpha and delta first; branching formulas wait in ``betas``
        while b.pending:
            f, sign = b.pending.pop(0)
            if isinstance(f, Top):
                if not sign:
                    return True
            elif isinstance(f, Pred):
                _note_constants(b, f)
                (b.pos if sign else b.neg).append(f)
            elif isinstance(f, Eq):
                _note_constants(b, f)
                (b.eqs if sign else b.neqs).append(f)
            elif isinstance(f, Not):
                b.pending.append((f.body, not sign))
            elif isinstance(f, And) and sign:
                b.pending += [(f.left, True), (f.right, True)]
            elif isinstance(f, Or) and not sign:
                b.pending += [(f.left, False), (f.right, False)]
            elif isinstance(f, Implies) and not sign:
                b.pending += [(f.left, True), (f.right, False)]
            elif isinstance(f, (And, Or, Implies)):
                b.betas.append((f, sign))
            elif isinstance(f, Exists) == sign:
                c = next(b.fresh)
                b.constants.append(c)
                b.pending.append((substitute_formula(f.body, f.var, FConst(c)), sign))
            else:
                b.gammas.append([f, sign, []])
        if _closed(b):
            return True
        if b.betas:
            f, sign = b.betas.pop(0)
            if isinstance(f, And):
                parts = [(f.left, False), (f.right, False)]
            elif isinstance(f, Or):
                parts = [(f.left, True), (f.right, True)]
            else:
                parts = [(f.left, False), (f.right, True)]
            return all(_refute(b.copy(p), depth) for p in parts)
        if not _instantiate(b, depth):
            return False


def _instantiate(b: _Branch, depth: int) -> bool:
    """One gamma step: the least-used universal gets its next constant."""
    if not b.constants:
        b.constants.append(next(b.fresh))
    best = None
    for g in b.gammas:
        if len(g[2]) >= depth:
            continue
        unused = [c for c in b.constants if c not in g[2]]
        if unused and (best is None or len(g[2]) < len(best[0][2])):
            best = (g, unused[0])
    if best is None:
        return False
    g, c = best
    g[2].append(c)
    f, sign = g[0], g[1]
    b.pending.append((substitute_formula(f.body, f.var, FConst(c)), sign))
    return True


# ----------------------------------------------------------------- verdicts

@dataclass(frozen=True)
class Valid:
    symbol = "√"
    ascii_symbol = "+"
    name = "valid"


@dataclass(frozen=True)
class Invalid:
    countermodel: Model
    symbol = "÷"
    ascii_symbol = "-"
    name = "invalid"


@dataclass(frozen=True)
class Unknown:
    resources: str
    symbol = "?"
    ascii_symbol = "?"
    name = "unknown"


Verdict = Union[Valid, Invalid, Unknown]


def check(f: Formula, depth: int = DEFAULT_DEPTH, max_size: int = DEFAULT_MAX_SIZE,
          max_interpretations: int = DEFAULT_MAX_INTERPRETATIONS) -> Verdict:
    """Proof search first, then countermodel search."""
    if prove_valid(f, depth):
        return Valid()
    try:
        model = find_countermodel(f, max_size, max_interpretations)
    except ResourceError as exc:
        return Unknown(f"no proof at depth {depth}; countermodel search stopped: {exc}")
    if model is not None:
        return Invalid(model)
    return Unknown(f"no proof at depth {depth} and no countermodel up to size {max_size}")
