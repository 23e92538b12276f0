"""Closed vocabulary for classifying corrupted tokens.

Real-word vs non-real-word corruption is decided against a fixed word list:
a bundled set of ~10k common English words, replaceable by any newline-
delimited file. Membership checks casefold and ignore surrounding
punctuation so "Cat," and "cat" resolve identically.
"""

from __future__ import annotations

import importlib.resources
from pathlib import Path

from .align import normalize_token

_BUNDLED = "data/common_words.txt"


class Lexicon:
    def __init__(self, words):
        self._words = frozenset(w.casefold() for w in words if w.strip())
        if not self._words:
            raise ValueError("lexicon must contain at least one word")

    def __contains__(self, token: str) -> bool:
        return normalize_token(token) in self._words

    def __len__(self) -> int:
        return len(self._words)

    @classmethod
    def from_file(cls, path: str | Path) -> "Lexicon":
        with open(path, "r", encoding="utf-8") as f:
            return cls(line.strip() for line in f)

    @classmethod
    def bundled(cls) -> "Lexicon":
        text = importlib.resources.files("ocrforge").joinpath(_BUNDLED).read_text("utf-8")
        return cls(text.splitlines())


_default: Lexicon | None = None


def default_lexicon() -> Lexicon:
    """Bundled lexicon, loaded once per process."""
    global _default
    if _default is None:
        _default = Lexicon.bundled()
    return _default
