"""Lexical entries: token to (category, lexical combinator) associations.

The grammar lives entirely in the lexicon.  A lexicon file has one entry per
line::

    be' : (N\\S)/(G/G) := \\f x. f (\\y. Qdot x y) x

plus ``inflect <lemma> : <form>`` lines used by the tokenizer.  Constant types
are not written down; they are inferred from the category of the entry in
which a constant first occurs and must stay consistent across the file.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from typing import Dict, List, Optional, Tuple

from . import terms as tm
from .categories import Category, CategorySyntaxError, parse_category, render as render_category, sem_type
from .logic import COMBINATOR_TYPES, PRIMITIVES

__all__ = ["LexEntry", "Lexicon", "LexiconError", "load_lexicon", "default_lexicon",
           "dump_lexicon", "lookup"]


class LexiconError(Exception):
    def __init__(self, message, line=None, column=None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)
        self.line = line
        self.column = column


@dataclass(frozen=True)
class LexEntry:
    token: str
    combinator_name: str
    category: Category
    definition: tm.Term

    def __post_init__(self):
        if self.combinator_name.rstrip("'") != self.token:
            raise LexiconError(f"combinator {self.combinator_name} does not belong to token {self.token}")


@dataclass(frozen=True)
class Lexicon:
    entries: Tuple[LexEntry, ...]
    inflections: Tuple[Tuple[str, str], ...] = ()
    signature: Dict[str, tm.SemType] = field(default_factory=dict, compare=False, hash=False)

    @property
    def vocabulary(self) -> frozenset:
        return frozenset(e.token for e in self.entries)

    def lookup(self, token: str) -> List[LexEntry]:
        return [e for e in self.entries if e.token == token]

    def categories_of(self, token: str) -> List[Category]:
        return [e.category for e in self.lookup(token)]

    @property
    def lemma_of(self) -> Dict[str, str]:
        """Inflected form to lemma."""
        return {form: lemma for lemma, form in self.inflections}

    @property
    def inflected(self) -> Dict[str, str]:
        """Lemma to inflected form."""
        return dict(self.inflections)


def lookup(lex: Lexicon, token: str) -> List[LexEntry]:
    return lex.lookup(token)


_ENTRY = re.compile(r"^(?P<name>[A-Za-z][A-Za-z0-9_]*'*)\s*:(?P<cat>[^:]*?):=(?P<term>.*)$")
_INFLECT = re.compile(r"^inflect\s+(?P<lemma>[a-z][A-Za-z]*)\s*:\s*(?P<form>[a-z][A-Za-z]*)\s*$")


def load_lexicon(source: str) -> Lexicon:
    """Parse and type-check a lexicon.

    Every definition must have exactly the semantic type of its category once
    constant types are inferred.  Errors carry line and column.
    """
    signature: Dict[str, tm.SemType] = {**PRIMITIVES, **COMBINATOR_TYPES}
    entries = []
    inflections = []
    for lineno, raw in enumerate(source.splitlines(), start=1):
        line = raw.split("#", 1)[0].rstrip()
        if not line.strip():
            continue
        indent = len(line) - len(line.lstrip())
        line = line.strip()
        if line.startswith("inflect"):
            m = _INFLECT.match(line)
            if not m:
                raise LexiconError("malformed inflect line", lineno, indent + 1)
            inflections.append((m.group("lemma"), m.group("form")))
            continue
        m = _ENTRY.match(line)
        if not m:
            raise LexiconError("expected '<name> : <category> := <term>'", lineno, indent + 1)
        name = m.group("name")
        try:
            category = parse_category(m.group("cat").strip())
        except CategorySyntaxError as exc:
            col = indent + m.start("cat") + 1 + (len(m.group("cat")) - len(m.group("cat").lstrip()))
            raise LexiconError(f"category: {exc}", lineno, col + exc.position) from None
        try:
            term = tm.parse_term(m.group("term").strip())
        except tm.TermSyntaxError as exc:
            col = indent + m.start("term") + 1 + (len(m.group("term")) - len(m.group("term").lstrip()))
            raise LexiconError(f"term: {exc}", lineno, col + (exc.position or 0)) from None
        for const in tm.constants(term):
            if const.endswith("dot") and const not in COMBINATOR_TYPES:
                raise LexiconError(f"unknown combinator {const}", lineno)
        expected = sem_type(category)
        trial = dict(signature)
        try:
            typed = tm.infer_constants(term, expected, trial)
        except tm.TermTypeError as exc:
            actual = _describe_type(term, signature)
            raise LexiconError(
                f"entry {name}: expected {expected}, got {actual} ({exc})", lineno) from None
        signature = trial
        entries.append(LexEntry(name.rstrip("'"), name, category, typed))
    if not entries:
        raise LexiconError("empty lexicon")
    _check_inflections(inflections)
    return Lexicon(tuple(entries), tuple(inflections), signature)


def _describe_type(term, signature):
    consts = dict(signature)
    try:
        inferred = tm._infer(term, {}, consts)
        return tm._show(inferred)
    except tm.TermTypeError as exc:
        return f"ill-typed ({exc})"


def _check_inflections(pairs):
    lemmas, forms = {}, {}
    for lemma, form in pairs:
        if lemmas.setdefault(lemma, form) != form or forms.setdefault(form, lemma) != lemma:
            raise LexiconError(f"inflection table is not one-to-one at {lemma} : {form}")


def dump_lexicon(lex: Lexicon) -> str:
    lines = [f"{e.combinator_name} : {render_category(e.category)} := {tm.render(e.definition)}"
             for e in lex.entries]
    lines += [f"inflect {lemma} : {form}" for lemma, form in lex.inflections]
    return "\n".join(lines) + "\n"


def default_lexicon_source() -> str:
    return resources.files("nabla").joinpath("data/default.lex").read_text(encoding="utf-8")


_DEFAULT: Optional[Lexicon] = None


def default_lexicon() -> Lexicon:
    global _DEFAULT
    if _DEFAULT is None:
        _DEFAULT = load_lexicon(default_lexicon_source())
    return _DEFAULT
