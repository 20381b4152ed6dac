"""The bundled argument corpus with expected verdicts."""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources
from typing import List

from .tokenizer import Argument, parse_argument

__all__ = ["CorpusItem", "load_corpus"]


@dataclass(frozen=True)
class CorpusItem:
    name: str
    argument: Argument
    expected: str  # "valid" or "invalid"
    text: str


def load_corpus() -> List[CorpusItem]:
    root = resources.files("nabla").joinpath("data/corpus")
    items = []
    for entry in sorted(root.iterdir(), key=lambda p: p.name):
        if not entry.name.endswith(".arg"):
            continue
        text = entry.read_text(encoding="utf-8")
        expected = None
        for line in text.splitlines():
            if line.startswith("# verdict:"):
                expected = line.split(":", 1)[1].strip()
        items.append(CorpusItem(entry.name[:-4], parse_argument(text), expected, text))
    return items
