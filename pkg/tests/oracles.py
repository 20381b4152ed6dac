"""Independent reference implementations used by the tests.

Nothing here shares code with the search in ``nabla.calculus``: the rule
schemas are re-applied naively, without memoization or count pruning.
"""

from __future__ import annotations

import itertools
from functools import lru_cache

from nabla.categories import Basic, Over, Under, connectives
from nabla.validity import Model, signature

ATOMS = ("N", "G", "S", "Dot")


# ------------------------------------------------------------ the universe

def _shapes(conn, max_depth):
    """Category shapes with ``conn`` slashes; atoms are holes (None)."""
    if conn == 0:
        return [None] if max_depth >= 0 else []
    out = []
    for left in range(conn):
        for a in _shapes(left, max_depth - 1):
            for b in _shapes(conn - 1 - left, max_depth - 1):
                out.append(("/", a, b))   # a / b
                out.append(("\\", b, a))  # b \ a
    return out


def _holes(shape):
    return 1 if shape is None else _holes(shape[1]) + _holes(shape[2])


def _fill(shape, atoms):
    if shape is None:
        return Basic(next(atoms))
    op, x, y = shape
    x, y = _fill(x, atoms), _fill(y, atoms)
    return Over(x, y) if op == "/" else Under(x, y)


def _labelings(k):
    """Atom sequences up to renaming: first occurrences in N, G, S, Dot order."""
    def rec(prefix, used):
        if len(prefix) == k:
            yield prefix
            return
        for i in range(min(used + 1, len(ATOMS))):
            yield from rec(prefix + (ATOMS[i],), max(used, i + 1))
    yield from rec((), 0)


def universe(max_length=4, max_connectives=3, max_depth=2):
    """Sequents (antecedents, goal) up to atom renaming."""
    shapes = {c: _shapes(c, max_depth) for c in range(max_connectives + 1)}
    for length in range(1, max_length + 1):
        slots = length + 1
        for dist in itertools.product(range(max_connectives + 1), repeat=slots):
            if sum(dist) > max_connectives:
                continue
            for combo in itertools.product(*(shapes[c] for c in dist)):
                total = sum(_holes(s) for s in combo)
                for labels in _labelings(total):
                    it = iter(labels)
                    cats = [_fill(s, it) for s in combo]
                    yield tuple(cats[:-1]), cats[-1]


# ------------------------------------------------------ brute-force counts

def count_derivations(ants, goal):
    """Number of cut-free derivation trees, by naive application of every rule."""
    n = len(ants)
    total = 0
    if n == 1 and ants[0] == goal:
        total += 1
    if isinstance(goal, Over):
        total += count_derivations(ants + (goal.arg,), goal.result)
    if isinstance(goal, Under):
        total += count_derivations((goal.arg,) + ants, goal.result)
    for i, c in enumerate(ants):
        if isinstance(c, Over):
            for j in range(i + 2, n + 1):
                minor = count_derivations(ants[i + 1:j], c.arg)
                if minor:
                    total += minor * count_derivations(ants[:i] + (c.result,) + ants[j:], goal)
        elif isinstance(c, Under):
            for j in range(0, i):
                minor = count_derivations(ants[j:i], c.arg)
                if minor:
                    total += minor * count_derivations(ants[:j] + (c.result,) + ants[i + 1:], goal)
    return total


# ----------------------------------------------------- search with cut

def _atom_balance(ants, goal):
    counts = {}

    def walk(c, sign):
        if isinstance(c, Basic):
            counts[c.name] = counts.get(c.name, 0) + sign
        elif isinstance(c, Over):
            walk(c.result, sign)
            walk(c.arg, -sign)
        else:
            walk(c.arg, -sign)
            walk(c.result, sign)

    for a in ants:
        walk(a, -1)
    walk(goal, 1)
    return all(v == 0 for v in counts.values())


def cut_formulas(atoms, max_connectives=2, max_depth=2):
    out = []
    for c in range(max_connectives + 1):
        for shape in _shapes(c, max_depth):
            for labels in itertools.product(atoms, repeat=_holes(shape)):
                out.append(_fill(shape, iter(labels)))
    return out


def derivable_with_cut(ants, goal, cuts=1, max_cut_connectives=2):
    """Derivability when up to ``cuts`` cuts per branch are also allowed.

    Cut formulas range over every category with at most
    ``max_cut_connectives`` slashes and depth two, built from the atoms of
    the sequent.  Premises that violate the atom count balance are skipped,
    which is sound for the calculus with cut as well.
    """
    atoms = sorted({a for c in ants + (goal,) for a in _atoms(c)})
    formulas = tuple(cut_formulas(atoms, max_cut_connectives))

    @lru_cache(maxsize=None)
    def prove(ants, goal, cuts):
        if not _atom_balance(ants, goal):
            return False
        n = len(ants)
        if n == 1 and ants[0] == goal:
            return True
        if isinstance(goal, Over) and prove(ants + (goal.arg,), goal.result, cuts):
            return True
        if isinstance(goal, Under) and prove((goal.arg,) + ants, goal.result, cuts):
            return True
        for i, c in enumerate(ants):
            if isinstance(c, Over):
                for j in range(i + 2, n + 1):
                    if (prove(ants[i + 1:j], c.arg, cuts)
                            and prove(ants[:i] + (c.result,) + ants[j:], goal, cuts)):
                        return True
            elif isinstance(c, Under):
                for j in range(0, i):
                    if (prove(ants[j:i], c.arg, cuts)
                            and prove(ants[:j] + (c.result,) + ants[i + 1:], goal, cuts)):
                        return True
        if cuts:
            for i in range(n):
                for j in range(i + 1, n + 1):
                    for b in formulas:
                        if (prove(ants[:i] + (b,) + ants[j:], goal, cuts - 1)
                                and prove(ants[i:j], b, cuts - 1)):
                            return True
        return False

    return prove(tuple(ants), goal, cuts)


def _atoms(c):
    if isinstance(c, Basic):
        return {c.name}
    return _atoms(c.result) | _atoms(c.arg)


def total_connectives(ants, goal):
    return sum(connectives(c) for c in ants) + connectives(goal)


# ------------------------------------------------------------ models

def all_models(f, max_size):
    """Every interpretation of the symbols of ``f`` up to ``max_size`` elements."""
    consts, preds = signature(f)
    for n in range(1, max_size + 1):
        for cvals in itertools.product(range(n), repeat=len(consts)):
            rows = {k: list(itertools.product(range(n), repeat=k)) for k in set(preds.values())}
            choices = [[frozenset(r for r, bit in zip(rows[k], bits) if bit)
                        for bits in itertools.product((0, 1), repeat=len(rows[k]))]
                       for k in preds.values()]
            for tables in itertools.product(*choices):
                yield Model(n, dict(zip(consts, cvals)), dict(zip(preds, tables)))
