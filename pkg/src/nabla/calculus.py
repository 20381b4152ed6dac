"""Cut-free backward proof search for the two-dimensional sequent calculus.

A sequent ``x1:A1 ... xn:An ≻ C`` claims that the concatenation of strings of
categories ``A1 ... An`` is a string of category ``C``.  Search only looks at
categories; the semantic term of a derivation is read off afterwards using the
rule annotations:

    =   x : A ≻ x : A
    /L  Δ[z:A/B Γ] ≻ γ[x ↦ (z β)] : C    from  Γ ≻ β : B  and  Δ[x:A] ≻ γ : C
    \\L  Δ[Γ z:B\\A] ≻ γ[x ↦ (z β)] : C    from  Γ ≻ β : B  and  Δ[x:A] ≻ γ : C
    /R  Γ ≻ λy α : A/B                    from  Γ y:B ≻ α : A
    \\R  Γ ≻ λy α : B\\A                    from  y:B Γ ≻ α : A

Cut is admissible and left out; the conversion rule is applied as
normalization of the extracted term.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple

from . import terms as tm
from .categories import Basic, Category, Over, Under, connectives, parse_category
from .categories import render as render_category
from .lexicon import LexEntry, Lexicon

__all__ = [
    "Rule", "Sequent", "Derivation", "Reading", "prove", "extract", "derive_string",
    "render_derivation", "derivation_to_dict", "sequent", "SearchLimitError",
    "UnknownTokenError", "MAX_EXPLORED",
]

MAX_EXPLORED = 10_000


class SearchLimitError(Exception):
    pass


class UnknownTokenError(KeyError):
    def __init__(self, token):
        super().__init__(token)
        self.token = token

    def __str__(self):
        return f"unknown token {self.token!r}"


class Rule(str, Enum):
    AXIOM = "="
    OVER_L = "/L"
    OVER_R = "/R"
    UNDER_L = "\\L"
    UNDER_R = "\\R"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class Sequent:
    antecedents: Tuple[Tuple[str, Category], ...]
    goal: Category

    def __post_init__(self):
        if not self.antecedents:
            raise ValueError("a sequent needs at least one antecedent")
        names = [v for v, _ in self.antecedents]
        if len(set(names)) != len(names):
            raise ValueError(f"antecedent variables not distinct: {names}")

    @property
    def categories(self) -> Tuple[Category, ...]:
        return tuple(c for _, c in self.antecedents)

    @property
    def variables(self) -> Tuple[str, ...]:
        return tuple(v for v, _ in self.antecedents)

    def __str__(self):
        return render_sequent(self)


def sequent(*cats, goal, names: Optional[Sequence[str]] = None) -> Sequent:
    """Convenience constructor: ``sequent("N", "N\\\\S", goal="S")``.

    Antecedent variables default to ``1 .. n``.
    """
    parsed = [parse_category(c) if isinstance(c, str) else c for c in cats]
    goal = parse_category(goal) if isinstance(goal, str) else goal
    names = list(names) if names is not None else [str(i) for i in range(1, len(parsed) + 1)]
    return Sequent(tuple(zip(names, parsed)), goal)


@dataclass(frozen=True)
class Derivation:
    conclusion: Sequent
    rule: Rule
    premises: Tuple["Derivation", ...]
    term: tm.Term

    def height(self) -> int:
        return 1 + max((p.height() for p in self.premises), default=0)

    def nodes(self):
        yield self
        for p in self.premises:
            yield from p.nodes()

    def rules(self) -> List[Rule]:
        """Rules in pre-order, minor premises first."""
        return [n.rule for n in self.nodes()]


def extract(d: Derivation) -> tm.Term:
    """The semantic term of ``d``, normalized; antecedent variables stay free."""
    return tm.normalize(d.term)


# ---------------------------------------------------------------- search


class _Proof:
    """Category-level derivation skeleton with a term over positional variables."""
    __slots__ = ("rule", "functor", "start", "stop", "premises", "term")

    def __init__(self, rule, term, premises=(), functor=None, start=None, stop=None):
        self.rule = rule
        self.term = term
        self.premises = premises
        self.functor = functor
        self.start = start
        self.stop = stop


def _pos(i):
    return f"@{i}"


def _rename(t, mapping):
    """Structural replacement of free positional variables.

    Replacements only contain positional variables, which are never bound, so
    no capture can happen.
    """
    if isinstance(t, tm.Var):
        return mapping.get(t.name, t)
    if isinstance(t, tm.App):
        return tm.App(_rename(t.fun, mapping), _rename(t.arg, mapping))
    if isinstance(t, tm.Abs):
        return tm.Abs(t.bound, _rename(t.body, mapping))
    return t


def _atom_counts(c, sign, acc):
    if isinstance(c, Basic):
        acc[c.name] = acc.get(c.name, 0) + sign
    elif isinstance(c, Over):
        _atom_counts(c.result, sign, acc)
        _atom_counts(c.arg, -sign, acc)
    else:
        _atom_counts(c.result, sign, acc)
        _atom_counts(c.arg, -sign, acc)


def _balanced(cats, goal):
    """Count check: every derivable sequent has equal signed atom counts on both sides."""
    acc = {}
    for c in cats:
        _atom_counts(c, 1, acc)
    _atom_counts(goal, -1, acc)
    return not any(acc.values())


def _head(c):
    while not isinstance(c, Basic):
        c = c.result
    return c


class _Search:
    """Memoized backward search over category sequences.

    ``focused=False`` enumerates every cut-free derivation.  ``focused=True``
    explores only goal-directed derivations: right rules while the goal is
    complex, then a chain of left rules on one functor whose innermost result
    is the goal.  Every derivable sequent has such a derivation, and every
    derivation is beta-eta-equal to one, so readings are preserved while the
    spurious ambiguity of the full calculus is not explored.
    """

    def __init__(self, max_explored=MAX_EXPLORED, distinct_terms=False, focused=False):
        self.memo: Dict[tuple, List[_Proof]] = {}
        self.max_explored = max_explored
        self.distinct_terms = distinct_terms
        self.focused = focused
        self.explored = 0
        self._binders = itertools.count()

    def _binder(self):
        # unique per search, so structural renaming never captures
        return f"y{next(self._binders)}"

    def _memoized(self, key, cats, goal, expand):
        found = self.memo.get(key)
        if found is not None:
            return found
        if not _balanced(cats, goal):
            self.memo[key] = []
            return []
        self.explored += 1
        if self.explored > self.max_explored:
            raise SearchLimitError(f"more than {self.max_explored} sequents explored")
        self.memo[key] = []  # premises are strictly smaller, so no cycles
        results = list(expand())
        if self.distinct_terms:
            seen = set()
            unique = []
            for p in results:
                k = canonical_key(tm.eta_reduce(p.term))
                if k not in seen:
                    seen.add(k)
                    unique.append(p)
            results = unique
        self.memo[key] = results
        return results

    def solve(self, cats, goal) -> List[_Proof]:
        return self._memoized((cats, goal), cats, goal, lambda: self._expand(cats, goal))

    def _chain(self, cats, i, goal) -> List[_Proof]:
        return self._memoized((cats, i, goal), cats, goal, lambda: self._expand_focus(cats, i, goal))

    def _expand(self, cats, goal):
        n = len(cats)
        if n == 1 and cats[0] == goal:
            yield _Proof(Rule.AXIOM, tm.Var(_pos(0)))
            if self.focused:
                # any other derivation of A > A is eta-equal to the axiom
                return
        if isinstance(goal, Over):
            for p in self.solve(cats + (goal.arg,), goal.result):
                y = self._binder()
                body = _rename(p.term, {_pos(n): tm.Var(y)})
                yield _Proof(Rule.OVER_R, tm.Abs(y, body), (p,))
        if isinstance(goal, Under):
            for p in self.solve((goal.arg,) + cats, goal.result):
                y = self._binder()
                mapping = {_pos(0): tm.Var(y)}
                mapping.update({_pos(k + 1): tm.Var(_pos(k)) for k in range(n)})
                yield _Proof(Rule.UNDER_R, tm.Abs(y, _rename(p.term, mapping)), (p,))
        if self.focused:
            if isinstance(goal, Basic):
                for i, c in enumerate(cats):
                    if not isinstance(c, Basic) and _head(c) == goal:
                        yield from self._chain(cats, i, goal)
            return
        for i in range(n):
            if isinstance(cats[i], Over):
                yield from self._left(cats, i, goal, self.solve)
        for i in range(n):
            if isinstance(cats[i], Under):
                yield from self._left(cats, i, goal, self.solve)

    def _expand_focus(self, cats, i, goal):
        c = cats[i]
        if isinstance(c, Basic):
            if c == goal and len(cats) == 1:
                yield _Proof(Rule.AXIOM, tm.Var(_pos(0)))
            return
        yield from self._left(cats, i, goal, lambda cs, g, at: self._chain(cs, at, g))

    def _left(self, cats, i, goal, major_search):
        """Left rule on the functor at ``i``, shortest argument segment first.

        ``major_search(cats, goal, at)`` finds derivations of the major
        premise, where ``at`` is the position of the functor's result.
        """
        n = len(cats)
        c = cats[i]
        if self.focused:
            search_major = major_search
        else:
            search_major = lambda cs, g, at: major_search(cs, g)  # noqa: E731
        if isinstance(c, Over):
            for k in range(1, n - i):
                minors = self.solve(cats[i + 1:i + 1 + k], c.arg)
                if not minors:
                    continue
                majors = search_major(cats[:i] + (c.result,) + cats[i + 1 + k:], goal, i)
                for mi, ma in itertools.product(minors, majors):
                    beta = _rename(mi.term, {_pos(j): tm.Var(_pos(j + i + 1)) for j in range(k)})
                    yield _Proof(Rule.OVER_L, _plug(ma.term, i, k, n, i, beta),
                                 (mi, ma), functor=i, start=i + 1, stop=i + 1 + k)
        else:
            for k in range(1, i + 1):
                minors = self.solve(cats[i - k:i], c.arg)
                if not minors:
                    continue
                majors = search_major(cats[:i - k] + (c.result,) + cats[i + 1:], goal, i - k)
                for mi, ma in itertools.product(minors, majors):
                    beta = _rename(mi.term, {_pos(j): tm.Var(_pos(j + i - k)) for j in range(k)})
                    yield _Proof(Rule.UNDER_L, _plug(ma.term, i - k, k, n, i, beta),
                                 (mi, ma), functor=i, start=i - k, stop=i)


def _plug(gamma, at, k, n, functor, beta):
    """Map the major premise's positions back into the conclusion.

    The major premise has ``n - k`` antecedents; the one at ``at`` stands for
    the functor applied to the minor premise's term.
    """
    mapping = {}
    for p in range(n - k):
        if p < at:
            mapping[_pos(p)] = tm.Var(_pos(p))
        elif p == at:
            mapping[_pos(p)] = tm.App(tm.Var(_pos(functor)), beta)
        else:
            mapping[_pos(p)] = tm.Var(_pos(p + k))
    return _rename(gamma, mapping)


def canonical_key(t: tm.Term) -> str:
    """Name-free rendering: alpha-equivalent terms get equal keys."""
    out = []

    def walk(t, env):
        if isinstance(t, tm.Var):
            out.append(f"#{len(env) - 1 - env[::-1].index(t.name)}" if t.name in env else "v" + t.name)
        elif isinstance(t, tm.Const):
            out.append("c" + t.name)
        elif isinstance(t, tm.Abs):
            out.append("(L ")
            walk(t.body, env + [t.bound])
            out.append(")")
        else:
            out.append("(")
            walk(t.fun, env)
            out.append(" ")
            walk(t.arg, env)
            out.append(")")

    walk(t, [])
    return "".join(out)


# ---------------------------------------------------------------- building


class _Fresh:
    def __init__(self, used):
        nums = [int(v) for v in used if v.isdigit()]
        self.next = max(nums, default=0) + 1

    def __call__(self):
        name = str(self.next)
        self.next += 1
        return name


def _build(proof, ants, goal, fresh) -> Derivation:
    concl = Sequent(tuple(ants), goal)
    r = proof.rule
    if r is Rule.AXIOM:
        return Derivation(concl, r, (), tm.Var(ants[0][0]))
    if r is Rule.OVER_R:
        y = fresh()
        prem = _build(proof.premises[0], ants + [(y, goal.arg)], goal.result, fresh)
        return Derivation(concl, r, (prem,), tm.Abs(y, prem.term))
    if r is Rule.UNDER_R:
        y = fresh()
        prem = _build(proof.premises[0], [(y, goal.arg)] + ants, goal.result, fresh)
        return Derivation(concl, r, (prem,), tm.Abs(y, prem.term))
    x = fresh()
    z, functor_cat = ants[proof.functor]
    minor = _build(proof.premises[0], ants[proof.start:proof.stop], functor_cat.arg, fresh)
    lo, hi = min(proof.functor, proof.start), max(proof.functor + 1, proof.stop)
    major_ants = ants[:lo] + [(x, functor_cat.result)] + ants[hi:]
    major = _build(proof.premises[1], major_ants, goal, fresh)
    term = tm.substitute(major.term, x, tm.App(tm.Var(z), minor.term))
    return Derivation(concl, r, (minor, major), term)


def prove(s: Sequent, max_explored: int = MAX_EXPLORED) -> List[Derivation]:
    """Every cut-free derivation of ``s``.

    Order: axiom, /R, \\R, /L, \\L; within a left rule the leftmost functor
    first and the shortest argument segment first.  Fresh variables are
    numerals above the largest numeral among the antecedents, handed out in
    pre-order.
    """
    search = _Search(max_explored)
    proofs = search.solve(s.categories, s.goal)
    return [_build(p, list(s.antecedents), s.goal, _Fresh(s.variables)) for p in proofs]


def derivable(cats: Sequence[Category], goal: Category, max_explored: int = MAX_EXPLORED) -> bool:
    return bool(_Search(max_explored, distinct_terms=True, focused=True).solve(tuple(cats), goal))


# ---------------------------------------------------------------- strings


@dataclass(frozen=True)
class Reading:
    """One meaning of a token string."""
    derivation: Derivation
    term: tm.Term
    entries: Tuple[LexEntry, ...]

    @property
    def lexical_term(self) -> tm.Term:
        """The extracted term with each token variable named by its combinator."""
        mapping = {str(i): tm.Var(e.combinator_name) for i, e in enumerate(self.entries, 1)}
        return prettify_bound(_rename(extract(self.derivation), mapping))


def derive_string(tokens: Sequence[str], lex: Lexicon, goal: Category,
                  max_explored: int = MAX_EXPLORED, all_derivations: bool = False) -> List[Reading]:
    """All readings of ``tokens`` at category ``goal``.

    Lexical choices are tried in the order of the lexicon file, token by
    token.  The semantic term of a reading is the extracted term with the
    lexical combinators substituted in and beta-normalized; readings whose
    terms agree up to alpha and eta are reported once, with the first
    derivation found.  Search is goal-directed, which finds every reading.

    With ``all_derivations`` every cut-free derivation is returned, one
    entry per tree, without merging equal terms.
    """
    tokens = list(tokens)
    if not tokens:
        raise ValueError("empty token string")
    options = []
    for tok in tokens:
        entries = lex.lookup(tok)
        if not entries:
            raise UnknownTokenError(tok)
        options.append(entries)
    names = [str(i) for i in range(1, len(tokens) + 1)]
    if all_derivations:
        search = _Search(max_explored)
    else:
        search = _Search(max_explored, distinct_terms=True, focused=True)
    readings = []
    seen = set()
    for choice in itertools.product(*options):
        cats = tuple(e.category for e in choice)
        for proof in search.solve(cats, goal):
            d = _build(proof, list(zip(names, cats)), goal, _Fresh(names))
            term = extract(d)
            for name, entry in zip(names, choice):
                term = tm.substitute(term, name, entry.definition)
            term = prettify_bound(tm.beta_normalize(term))
            key = canonical_key(tm.eta_reduce(term))
            if key in seen and not all_derivations:
                continue
            seen.add(key)
            readings.append(Reading(d, term, tuple(choice)))
    return readings


_PRETTY_NAMES = ["x", "y", "z", "u", "v", "w"]


def prettify_bound(t: tm.Term) -> tm.Term:
    """Rename numeral binders to letters.

    Each binder takes the first of x, y, z, ... that is neither free in its
    abstraction, nor bound by an enclosing abstraction, nor used by a
    letter-named variable inside it.  Sibling abstractions thus share ``x``.
    """
    def candidates():
        return itertools.chain(_PRETTY_NAMES, (f"x{i}" for i in itertools.count(1)))

    def walk(t, renames, scope):
        if isinstance(t, tm.Var):
            return tm.Var(renames.get(t.name, t.name))
        if isinstance(t, tm.App):
            return tm.App(walk(t.fun, renames, scope), walk(t.arg, renames, scope))
        if isinstance(t, tm.Abs):
            if not t.bound.isdigit():
                return tm.Abs(t.bound, walk(t.body, renames, scope | {t.bound}))
            taken = {renames.get(v, v) for v in tm.free_vars(t)} | scope
            taken |= {v for v in tm.all_var_names(t.body) if not v.isdigit()}
            new = next(n for n in candidates() if n not in taken)
            return tm.Abs(new, walk(t.body, {**renames, t.bound: new}, scope | {new}))
        return t

    return walk(t, {}, frozenset())


# ---------------------------------------------------------------- display


def render_sequent(s: Sequent, unicode: bool = True, show: str = "categories") -> str:
    turnstile = "≻" if unicode else ">"
    goal = render_category(s.goal, unicode)
    if show == "terms":
        return "  ".join(s.variables) + f" {turnstile} "
    if show == "both":
        ants = "  ".join(f"{v}:{render_category(c, unicode)}" for v, c in s.antecedents)
    else:
        ants = "  ".join(render_category(c, unicode) for c in s.categories)
    return f"{ants} {turnstile} {goal}"


def render_derivation(d: Derivation, unicode: bool = True, show: str = "categories") -> str:
    """Conclusion first, premises indented below it, rule name on the right.

    ``show`` selects what each line carries: ``categories`` (the default),
    ``terms`` (variables and extracted terms) or ``both``.
    """
    rows = []

    def walk(node, level):
        if show == "terms":
            text = render_sequent(node.conclusion, unicode, "terms") + tm.render(node.term, unicode)
        elif show == "both":
            text = (render_sequent(node.conclusion, unicode, "both")
                    + "  :  " + tm.render(node.term, unicode))
        else:
            text = render_sequent(node.conclusion, unicode)
        rows.append(("  " * level + text, str(node.rule)))
        for p in node.premises:
            walk(p, level + 1)

    walk(d, 0)
    width = max(len(r[0]) for r in rows) + 3
    return "\n".join(f"{text.ljust(width)}{rule}" for text, rule in rows)


def derivation_to_dict(d: Derivation, unicode: bool = False) -> dict:
    return {
        "rule": str(d.rule),
        "sequent": {
            "antecedents": [{"var": v, "category": render_category(c, unicode)}
                            for v, c in d.conclusion.antecedents],
            "goal": render_category(d.conclusion.goal, unicode),
        },
        "term": tm.render(d.term, unicode),
        "premises": [derivation_to_dict(p, unicode) for p in d.premises],
    }


def measure(s: Sequent) -> int:
    """Total number of slashes; strictly decreases from conclusion to premise."""
    return sum(connectives(c) for c in s.categories) + connectives(s.goal)
