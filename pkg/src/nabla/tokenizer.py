"""Arguments in English and the token strings the grammar consumes.

An argument is a list of premises and a list of conclusions.  Its token
string lemmatizes every sentence, joins the sentences of each side with
``also``, writes ``ok`` for an empty side and puts ``so`` between the sides::

    John smiles.          ->   John smile so ok
    ---

The map is a bijection between well-formed arguments and its image, so
:func:`detokenize` inverts :func:`tokenize` exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, List, Sequence, Tuple

from .categories import N
from .lexicon import Lexicon

__all__ = [
    "Argument", "TokenString", "TokenizeError", "tokenize", "detokenize",
    "parse_argument", "format_argument", "SO", "ALSO", "OK",
]

SO, ALSO, OK = "so", "also", "ok"
_STRUCTURAL = {SO, ALSO, OK}
SEPARATOR = "---"


class TokenizeError(ValueError):
    def __init__(self, message, word=None, sentence=None):
        if sentence is not None:
            message = f"{message} in sentence {sentence!r}"
        super().__init__(message)
        self.word = word
        self.sentence = sentence


@dataclass(frozen=True)
class Argument:
    premises: Tuple[str, ...] = ()
    conclusions: Tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "premises", tuple(self.premises))
        object.__setattr__(self, "conclusions", tuple(self.conclusions))
        for s in self.premises + self.conclusions:
            if not s.strip() or not s.rstrip().endswith("."):
                raise TokenizeError("sentences must be non-empty and end with a period", sentence=s)

    def __str__(self):
        return format_argument(self)


@dataclass(frozen=True)
class TokenString:
    tokens: Tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "tokens", tuple(self.tokens))
        if not self.tokens:
            raise TokenizeError("empty token string")

    @classmethod
    def from_text(cls, text: str) -> "TokenString":
        return cls(tuple(text.split()))

    def __str__(self):
        return " ".join(self.tokens)

    def __iter__(self):
        return iter(self.tokens)

    def __len__(self):
        return len(self.tokens)


def _is_name(lex: Lexicon, word: str) -> bool:
    return N in lex.categories_of(word)


def _sentence_tokens(sentence: str, lex: Lexicon) -> List[str]:
    body = sentence.strip()[:-1]
    words = body.split()
    if not words:
        raise TokenizeError("empty sentence", sentence=sentence)
    lemma_of = lex.lemma_of
    inflected = lex.inflected
    out = []
    for w in words:
        if _is_name(lex, w):
            out.append(w)
            continue
        low = w.lower()
        if not out and w == low:
            raise TokenizeError(f"sentence must start with a capital, not {w!r}", w, sentence)
        # only the first word may carry a capital
        if low != w and (out or w[1:] != low[1:]):
            raise TokenizeError(f"unexpected capitalization of {w!r}", w, sentence)
        if low in _STRUCTURAL:
            raise TokenizeError(f"{w!r} is reserved for joining sentences", w, sentence)
        if low in inflected:
            raise TokenizeError(f"{w!r} must be written {inflected[low]!r}", w, sentence)
        lemma = lemma_of.get(low, low)
        if lemma not in lex.vocabulary:
            raise TokenizeError(f"unknown word {w!r}", w, sentence)
        out.append(lemma)
    return out


def _side(sentences: Sequence[str], lex: Lexicon) -> List[str]:
    if not sentences:
        return [OK]
    out: List[str] = []
    for i, s in enumerate(sentences):
        if i:
            out.append(ALSO)
        out.extend(_sentence_tokens(s, lex))
    return out


def tokenize(a: Argument, lex: Lexicon) -> TokenString:
    """Token string of an argument."""
    if not a.premises and not a.conclusions:
        raise TokenizeError("empty argument")
    return TokenString(tuple(_side(a.premises, lex) + [SO] + _side(a.conclusions, lex)))


def _split(tokens: Sequence[str], sep: str) -> List[List[str]]:
    parts: List[List[str]] = [[]]
    for t in tokens:
        if t == sep:
            parts.append([])
        else:
            parts[-1].append(t)
    return parts


def _sentence(tokens: Sequence[str], lex: Lexicon) -> str:
    inflected = lex.inflected
    words = [inflected.get(t, t) for t in tokens]
    first = words[0]
    words[0] = first[:1].upper() + first[1:]
    return " ".join(words) + "."


def _unside(tokens: Sequence[str], lex: Lexicon) -> Tuple[str, ...]:
    if list(tokens) == [OK]:
        return ()
    sentences = _split(tokens, ALSO)
    for s in sentences:
        if not s:
            raise TokenizeError("'also' must join two non-empty sentences")
        if OK in s:
            raise TokenizeError("'ok' may only stand for an empty side")
    return tuple(_sentence(s, lex) for s in sentences)


def detokenize(t, lex: Lexicon) -> Argument:
    """Argument of a token string; the inverse of :func:`tokenize`."""
    tokens = t.tokens if isinstance(t, TokenString) else tuple(t)
    vocab = lex.vocabulary
    for tok in tokens:
        if tok not in vocab:
            raise TokenizeError(f"unknown token {tok!r}", tok)
    sides = _split(tokens, SO)
    if len(sides) == 1:
        raise TokenizeError("missing 'so'")
    if len(sides) > 2:
        raise TokenizeError("more than one 'so'")
    before, after = sides
    if not before or not after:
        raise TokenizeError("both sides of 'so' need tokens ('ok' for an empty side)")
    return Argument(_unside(before, lex), _unside(after, lex))


def parse_argument(text: str) -> Argument:
    """Read premises, a ``---`` line, then conclusions; one sentence per line."""
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if lines.count(SEPARATOR) != 1:
        raise TokenizeError(f"expected exactly one '{SEPARATOR}' line")
    k = lines.index(SEPARATOR)
    return Argument(tuple(lines[:k]), tuple(lines[k + 1:]))


def format_argument(a: Argument) -> str:
    return "\n".join(list(a.premises) + [SEPARATOR] + list(a.conclusions)) + "\n"


def words_of(sentences: Iterable[str]) -> List[str]:
    return [w for s in sentences for w in s.strip().rstrip(".").split()]
