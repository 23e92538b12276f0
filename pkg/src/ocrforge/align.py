"""Character-level edit distance and word-level global alignment.

Two comparison layers feed the scoring code:

* ``char_mindist`` counts the minimal insertions / substitutions / deletions
  turning one text into another and normalizes by the reference length.
* ``word_align`` is a Needleman-Wunsch global alignment over whitespace
  tokens. OCR damage routinely mangles the space character, so token streams
  of the two texts drift; the global alignment recovers which gold word slot
  each corrupted token belongs to.

Both are pure functions. The char DP keeps the full table (O(n*m) memory) to
recover the I/S/D split by backtrace; callers should chunk inputs much beyond
article length.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass, field

import numpy as np

from .errors import EmptyReference

GAP = None

# Strip leading/trailing punctuation when normalizing tokens for comparison.
_PUNCT = "!\"#$%&'()*+,-./:;<=>?@[\\]^_`{|}~‘’“”–—…«»"

MATCH_SCORE = 2
SUB_SIMILAR_SCORE = 1
SUB_DISSIMILAR_SCORE = -1
GAP_PENALTY = -1
SIMILARITY_THRESHOLD = 0.5


@dataclass(frozen=True)
class EditCounts:
    """Minimal edit operation counts between a reference text and another."""

    insertions: int
    substitutions: int
    deletions: int
    normalizer: int

    @property
    def raw_count(self) -> int:
        return self.insertions + self.substitutions + self.deletions

    @property
    def mindist(self) -> float:
        return self.raw_count / self.normalizer

    def to_dict(self) -> dict:
        return {
            "insertions": self.insertions,
            "substitutions": self.substitutions,
            "deletions": self.deletions,
            "normalizer": self.normalizer,
            "mindist": self.mindist,
        }


def _codepoints(text: str) -> np.ndarray:
    return np.frombuffer(text.encode("utf-32-le"), dtype=np.uint32)


def _edit_matrix(target: np.ndarray, source: np.ndarray) -> np.ndarray:
    """Full Levenshtein DP table, rows over target, cols over source.

    Row recurrence vectorized with numpy; the sequential left-to-right
    deletion chain is resolved by the running-minimum identity
    ``c[j] = j + min_{k<=j}(c0[k] - k)``.
    """
    n, m = len(target), len(source)
    table = np.empty((n + 1, m + 1), dtype=np.int32)
    offsets = np.arange(m + 1, dtype=np.int32)
    table[0] = offsets
    for i in range(1, n + 1):
        prev = table[i - 1]
        row = np.empty(m + 1, dtype=np.int32)
        row[0] = i
        if m:
            sub = prev[:-1] + (source != target[i - 1])
            ins = prev[1:] + 1
            row[1:] = np.minimum(sub, ins)
        shifted = row - offsets
        np.minimum.accumulate(shifted, out=shifted)
        table[i] = shifted + offsets
    return table


def char_mindist(t1: str, t2: str) -> EditCounts:
    """Minimal edit counts transforming ``t2`` into ``t1``.

    ``t1`` is the reference; its character count is the normalizer, so the
    reported distance is errors-per-reference-character. Among cost-equal
    edit scripts the I/S/D split is tie-broken deterministically
    (substitute, then insert, then delete); the total is unique.

    Raises:
        EmptyReference: if ``t1`` has no characters.
    """
    if not t1:
        raise EmptyReference("reference text must be non-empty")
    target = _codepoints(t1)
    source = _codepoints(t2)
    table = _edit_matrix(target, source)

    ins = sub = dele = 0
    i, j = len(target), len(source)
    while i > 0 or j > 0:
        here = table[i, j]
        if i > 0 and j > 0 and target[i - 1] == source[j - 1] and here == table[i - 1, j - 1]:
            i -= 1
            j -= 1
        elif i > 0 and j > 0 and here == table[i - 1, j - 1] + 1:
            sub += 1
            i -= 1
            j -= 1
        elif i > 0 and here == table[i - 1, j] + 1:
            ins += 1
            i -= 1
        else:
            dele += 1
            j -= 1
    return EditCounts(insertions=ins, substitutions=sub, deletions=dele, normalizer=len(target))


def normalize_token(token: str) -> str:
    """Case-fold and strip surrounding punctuation for token comparison."""
    return token.strip(_PUNCT).casefold()


@functools.lru_cache(maxsize=65536)
def _token_similarity(a: str, b: str) -> float:
    """1 - lev(a, b) / max(len), on already-normalized tokens."""
    if a == b:
        return 1.0
    longest = max(len(a), len(b))
    if longest == 0:
        return 1.0
    # Plain two-row Levenshtein; tokens are short.
    prev = list(range(len(b) + 1))
    for i, ca in enumerate(a, 1):
        cur = [i]
        for j, cb in enumerate(b, 1):
            cur.append(min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + (ca != cb)))
        prev = cur
    return 1.0 - prev[-1] / longest


def _pair_score(gs_token: str, other_token: str) -> tuple[int, bool]:
    """(alignment score, exact-match flag) for one column."""
    a = normalize_token(gs_token)
    b = normalize_token(other_token)
    if a == b:
        return MATCH_SCORE, True
    if _token_similarity(a, b) >= SIMILARITY_THRESHOLD:
        return SUB_SIMILAR_SCORE, False
    return SUB_DISSIMILAR_SCORE, False


@dataclass
class WordAlignment:
    """Global alignment between a gold word sequence and another sequence.

    ``pairs`` holds one column per alignment step: (gs index or None,
    other index or None). ``matches`` flags columns whose tokens are equal
    after normalization.
    """

    gs_words: list[str]
    other_words: list[str]
    pairs: list[tuple[int | None, int | None]]
    matches: list[bool]
    score: int = 0
    _ocre: set[int] | None = field(default=None, repr=False)

    @property
    def ocre_slots(self) -> set[int]:
        """Gold slots whose counterpart mismatches or is missing."""
        if self._ocre is None:
            slots = set()
            for (gi, oi), matched in zip(self.pairs, self.matches):
                if gi is not None and (oi is None or not matched):
                    slots.add(gi)
            self._ocre = slots
        return self._ocre

    def table(self) -> str:
        """Human-readable two-column rendering, for the debug CLI."""
        lines = []
        for (gi, oi), matched in zip(self.pairs, self.matches):
            left = self.gs_words[gi] if gi is not None else "-"
            right = self.other_words[oi] if oi is not None else "-"
            marker = " " if matched else "*"
            lines.append(f"{marker} {left:>20s} | {right}")
        return "\n".join(lines)


# Traceback directions, in tie-break priority order.
_DIAG, _GAP_IN_GS, _GAP_IN_OTHER = 0, 1, 2


def word_align(gs_words: list[str], other_words: list[str]) -> WordAlignment:
    """Needleman-Wunsch over word lists; deterministic tie-breaking.

    Scoring: +2 exact normalized match, +1 substitution of similar tokens
    (edit similarity >= 0.5), -1 dissimilar substitution, -1 gap. Ties
    prefer a diagonal step, then a gap in the gold sequence, then a gap in
    the other sequence.
    """
    n, m = len(gs_words), len(other_words)
    score = [[0] * (m + 1) for _ in range(n + 1)]
    move = [[_DIAG] * (m + 1) for _ in range(n + 1)]
    for i in range(1, n + 1):
        score[i][0] = score[i - 1][0] + GAP_PENALTY
        move[i][0] = _GAP_IN_OTHER
    for j in range(1, m + 1):
        score[0][j] = score[0][j - 1] + GAP_PENALTY
        move[0][j] = _GAP_IN_GS

    pair_scores = [[_pair_score(g, o) for o in other_words] for g in gs_words]

    for i in range(1, n + 1):
        row = score[i]
        above = score[i - 1]
        for j in range(1, m + 1):
            diag = above[j - 1] + pair_scores[i - 1][j - 1][0]
            gap_gs = row[j - 1] + GAP_PENALTY
            gap_other = above[j] + GAP_PENALTY
            best = diag
            direction = _DIAG
            if gap_gs > best:
                best = gap_gs
                direction = _GAP_IN_GS
            if gap_other > best:
                best = gap_other
                direction = _GAP_IN_OTHER
            row[j] = best
            move[i][j] = direction

    pairs: list[tuple[int | None, int | None]] = []
    matches: list[bool] = []
    i, j = n, m
    while i > 0 or j > 0:
        direction = move[i][j]
        if i > 0 and j > 0 and direction == _DIAG:
            pairs.append((i - 1, j - 1))
            matches.append(pair_scores[i - 1][j - 1][1])
            i -= 1
            j -= 1
        elif j > 0 and (direction == _GAP_IN_GS or i == 0):
            pairs.append((GAP, j - 1))
            matches.append(False)
            j -= 1
        else:
            pairs.append((i - 1, GAP))
            matches.append(False)
            i -= 1
    pairs.reverse()
    matches.reverse()
    return WordAlignment(
        gs_words=list(gs_words),
        other_words=list(other_words),
        pairs=pairs,
        matches=matches,
        score=score[n][m],
    )


def word_errors(gs: str, other: str) -> set[int]:
    """Gold word slots that are wrong in ``other``.

    Tokenizes both texts on whitespace runs, aligns globally, and returns
    the indices of gold words whose aligned counterpart mismatches or is a
    gap. This is the word-error slot set used by every breakdown metric.
    """
    if not gs.strip():
        raise EmptyReference("gold text must be non-empty")
    return word_align(gs.split(), other.split()).ocre_slots


def slot_intersection(a: set[int], b: set[int]) -> set[int]:
    """Intersection of two gold-slot sets."""
    return set(a) & set(b)
