"""Syntactic categories: basic types N, G, S, the top type, and the slashes.

``Over(A, B)`` is ``A/B`` (looks for a ``B`` to its right), ``Under(B, A)`` is
``B\\A`` (looks for a ``B`` to its left).  Both slashes are non-associative and
of equal precedence, so nested categories always need parentheses.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .terms import ENTITY, TRUTH, Arrow, SemType

__all__ = [
    "Category", "Basic", "Over", "Under", "N", "G", "S", "DOT",
    "parse_category", "sem_type", "connectives", "depth", "CategorySyntaxError",
]

BASIC_NAMES = ("N", "G", "S", "Dot")


class CategorySyntaxError(ValueError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


def _cached_hash(self):
    # categories are hashed constantly during search
    h = self.__dict__.get("_hash")
    if h is None:
        h = hash((type(self).__name__,) + tuple(getattr(self, f) for f in self.__dataclass_fields__))
        object.__setattr__(self, "_hash", h)
    return h


@dataclass(frozen=True)
class Basic:
    name: str

    def __post_init__(self):
        if self.name not in BASIC_NAMES:
            raise ValueError(f"unknown basic category {self.name!r}")

    def __str__(self):
        return render(self)

    __hash__ = _cached_hash


@dataclass(frozen=True)
class Over:
    result: "Category"
    arg: "Category"

    def __str__(self):
        return render(self)

    __hash__ = _cached_hash


@dataclass(frozen=True)
class Under:
    arg: "Category"
    result: "Category"

    def __str__(self):
        return render(self)

    __hash__ = _cached_hash


Category = Union[Basic, Over, Under]

N = Basic("N")
G = Basic("G")
S = Basic("S")
DOT = Basic("Dot")


def render(c: Category, unicode: bool = False) -> str:
    if isinstance(c, Basic):
        if c.name == "Dot":
            return "•" if unicode else "Dot"
        return c.name
    if isinstance(c, Over):
        return f"{_wrap(c.result, unicode)}/{_wrap(c.arg, unicode)}"
    return f"{_wrap(c.arg, unicode)}\\{_wrap(c.result, unicode)}"


def _wrap(c, unicode):
    s = render(c, unicode)
    return s if isinstance(c, Basic) else f"({s})"


def parse_category(text: str) -> Category:
    """Parse ``N``, ``(N\\S)/N``, ``S\\(Dot/S)`` and so on.

    The top category may be written ``Dot``, ``*`` or ``•``.  An
    unparenthesized chain such as ``S/N/N`` is rejected.
    """
    pos = 0
    n = len(text)

    def skip():
        nonlocal pos
        while pos < n and text[pos].isspace():
            pos += 1

    def operand():
        nonlocal pos
        skip()
        if pos >= n:
            raise CategorySyntaxError("unexpected end of category", pos)
        ch = text[pos]
        if ch == "(":
            pos += 1
            inner = cat()
            skip()
            if pos >= n or text[pos] != ")":
                raise CategorySyntaxError("expected ')'", pos)
            pos += 1
            return inner
        if text.startswith("Dot", pos):
            pos += 3
            return DOT
        if ch in "*•":
            pos += 1
            return DOT
        if ch in "NGS":
            pos += 1
            if pos < n and (text[pos].isalnum() or text[pos] == "_"):
                raise CategorySyntaxError("unknown basic category", pos - 1)
            return Basic(ch)
        raise CategorySyntaxError(f"unexpected {ch!r}", pos)

    def cat():
        nonlocal pos
        left = operand()
        skip()
        if pos < n and text[pos] in "/\\":
            op = text[pos]
            pos += 1
            right = operand()
            skip()
            if pos < n and text[pos] in "/\\":
                raise CategorySyntaxError("ambiguous unparenthesized nesting", pos)
            return Over(left, right) if op == "/" else Under(left, right)
        return left

    result = cat()
    skip()
    if pos != n:
        raise CategorySyntaxError(f"unexpected {text[pos]!r}", pos)
    return result


_BASE_SEM = {
    "N": ENTITY,
    "G": Arrow(ENTITY, TRUTH),
    "S": TRUTH,
    "Dot": TRUTH,
}


def sem_type(c: Category) -> SemType:
    """Semantic type of a category; directionality is erased."""
    if isinstance(c, Basic):
        return _BASE_SEM[c.name]
    if isinstance(c, Over):
        return Arrow(sem_type(c.arg), sem_type(c.result))
    return Arrow(sem_type(c.arg), sem_type(c.result))


def connectives(c: Category) -> int:
    if isinstance(c, Basic):
        return 0
    return 1 + connectives(c.result) + connectives(c.arg)


def depth(c: Category) -> int:
    if isinstance(c, Basic):
        return 0
    return 1 + max(depth(c.result), depth(c.arg))
