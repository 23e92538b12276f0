"""Synthetic OCR error injection.

Gold text is corrupted line by line: each line is an independent Bernoulli
trial at the configured noise ratio, and a hit line receives exactly one
error drawn from a five-class taxonomy of OCR damage:

* real-word      -- a character substitution turning a token into a
                    different dictionary word ("cat" -> "eat")
* non-real-word  -- a substitution leaving a misspelled alphabetic token
* non-word       -- a substitution introducing a digit or punctuation glyph
                    ("cat" -> "ca4")
* new-line       -- a token broken across a line with a hyphen ("go-\\nod")
* tokenization   -- a space inserted mid-token or deleted between tokens

Substitutions draw from a table of visually confusable glyph pairs, the kind
an OCR engine actually produces. When the sampled class cannot apply to the
line, the corruption falls back to deleting one random character, and the
recorded class is whatever the deletion actually produced.

Every injected error is logged as a span with enough provenance to undo it;
reapplying the spans in reverse reconstructs the gold text exactly. All
randomness flows from a SplitMix64 seed, so corpora are reproducible
bit-for-bit.

Segments without explicit line breaks are windowed into virtual lines of at
most ``wrap_width`` characters (sentence segments stay whole), mirroring the
physical print lines of a scanned page.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from .align import normalize_token
from .corpus import GoldSegment, SegmentKind
from .lexicon import Lexicon, default_lexicon
from .rng import SplitMix64

DEFAULT_WRAP_WIDTH = 60


class ErrorClass(str, Enum):
    REAL_WORD = "realword"
    NON_REAL_WORD = "nonrealword"
    NON_WORD = "nonword"
    NEW_LINE = "newline"
    TOKENIZATION = "tokenization"


DEFAULT_CLASS_WEIGHTS = {cls: 1.0 for cls in ErrorClass}

# Visually confusable letter pairs; applied as substring substitutions.
ALPHA_CONFUSIONS = [
    ("c", "e"), ("e", "c"),
    ("l", "i"), ("i", "l"),
    ("rn", "m"), ("m", "rn"),
    ("b", "h"), ("h", "b"),
    ("t", "f"), ("f", "t"),
]

# Letter -> digit/punctuation glyphs for non-word damage.
GLYPH_CONFUSIONS = {
    "o": "0", "O": "0",
    "l": "1", "i": "1", "I": "1",
    "e": "3", "E": "3",
    "a": "4", "A": "4",
    "t": "4",
    "s": "5", "S": "5",
    "g": "9", "q": "9",
    "b": "6", "B": "8",
    "z": "2", "Z": "2",
}
_FALLBACK_GLYPHS = "0123456789#!"


@dataclass(frozen=True)
class ErrorSpan:
    """Provenance record for one injected error.

    ``start``/``end`` are offsets into the noisy text; ``original`` is the
    gold substring the edit replaced, ``corrupted`` the noisy substring at
    the span (so reversal is a pure string substitution).
    """

    start: int
    end: int
    error_class: ErrorClass
    original: str
    corrupted: str

    def to_dict(self) -> dict:
        return {
            "start": self.start,
            "end": self.end,
            "class": self.error_class.value,
            "original": self.original,
            "corrupted": self.corrupted,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ErrorSpan":
        return cls(
            start=d["start"],
            end=d["end"],
            error_class=ErrorClass(d["class"]),
            original=d["original"],
            corrupted=d["corrupted"],
        )


@dataclass(frozen=True)
class NoisySegment:
    segment_id: str
    noisy_text: str
    errors: tuple[ErrorSpan, ...]
    noise_ratio: float
    seed: int
    class_weights: dict = field(hash=False)

    def reconstruct_gold(self) -> str:
        """Undo every error span, yielding the exact gold text."""
        text = self.noisy_text
        for span in sorted(self.errors, key=lambda s: s.start, reverse=True):
            assert text[span.start:span.end] == span.corrupted
            text = text[:span.start] + span.original + text[span.end:]
        return text

    def to_dict(self) -> dict:
        return {
            "v": 1,
            "segment_id": self.segment_id,
            "noisy_text": self.noisy_text,
            "errors": [s.to_dict() for s in self.errors],
            "noise_ratio": self.noise_ratio,
            "seed": self.seed,
            "class_weights": {k.value: v for k, v in self.class_weights.items()},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "NoisySegment":
        return cls(
            segment_id=d["segment_id"],
            noisy_text=d["noisy_text"],
            errors=tuple(ErrorSpan.from_dict(s) for s in d["errors"]),
            noise_ratio=d["noise_ratio"],
            seed=d["seed"],
            class_weights={ErrorClass(k): v for k, v in d["class_weights"].items()},
        )


def planned_error_count(noisy: NoisySegment) -> int:
    return len(noisy.errors)


# --- line windowing ----------------------------------------------------------

def line_windows(text: str, kind: SegmentKind | None, wrap_width: int = DEFAULT_WRAP_WIDTH) -> list[tuple[int, int]]:
    """Line spans over ``text`` for per-line error trials.

    Sentence segments count as a single line. Text with explicit newlines
    uses them; otherwise words are packed greedily into windows of at most
    ``wrap_width`` characters, standing in for print lines.
    """
    stripped = text.strip()
    if not stripped:
        return []
    lead = len(text) - len(text.lstrip())
    if kind == SegmentKind.SENTENCE:
        return [(lead, lead + len(stripped))]
    if "\n" in text:
        windows = []
        pos = 0
        for raw_line in text.split("\n"):
            content = raw_line.strip()
            if content:
                start = pos + raw_line.index(content)
                windows.append((start, start + len(content)))
            pos += len(raw_line) + 1
        return windows

    words = []
    i = 0
    while i < len(text):
        if text[i].isspace():
            i += 1
            continue
        j = i
        while j < len(text) and not text[j].isspace():
            j += 1
        words.append((i, j))
        i = j
    windows = []
    win_start, win_end = words[0]
    for start, end in words[1:]:
        if end - win_start <= wrap_width:
            win_end = end
        else:
            windows.append((win_start, win_end))
            win_start, win_end = start, end
    windows.append((win_start, win_end))
    return windows


# --- corruption rules --------------------------------------------------------

def _window_tokens(text: str, start: int, end: int) -> list[tuple[str, int, int]]:
    tokens = []
    i = start
    while i < end:
        if text[i].isspace():
            i += 1
            continue
        j = i
        while j < end and not text[j].isspace():
            j += 1
        tokens.append((text[i:j], i, j))
        i = j
    return tokens


def _confusion_candidates(token: str) -> list[tuple[int, int, str]]:
    """(offset, length, replacement) for every alpha-confusion application."""
    out = []
    for src, dst in ALPHA_CONFUSIONS:
        at = 0
        while True:
            at = token.find(src, at)
            if at < 0:
                break
            out.append((at, len(src), dst))
            at += 1
    return out


def _try_real_word(tokens, rng: SplitMix64, lexicon: Lexicon, want_real: bool):
    """Substitution making a lexicon word (want_real) or a misspelling."""
    order = list(range(len(tokens)))
    rng.shuffle(order)
    for idx in order:
        token, t_start, _ = tokens[idx]
        norm = normalize_token(token)
        if len(norm) < 2:
            continue
        viable = []
        for at, length, dst in _confusion_candidates(token):
            candidate = token[:at] + dst + token[at + length:]
            cnorm = normalize_token(candidate)
            if not cnorm or cnorm == norm or not cnorm.isalpha():
                continue
            if (cnorm in lexicon) == want_real:
                viable.append((at, length, dst))
        if viable:
            at, length, dst = viable[rng.randrange(len(viable))]
            return (t_start + at, t_start + at + length, dst)
    return None


def _try_non_word(tokens, rng: SplitMix64):
    order = list(range(len(tokens)))
    rng.shuffle(order)
    for idx in order:
        token, t_start, _ = tokens[idx]
        mapped = [i for i, ch in enumerate(token) if ch in GLYPH_CONFUSIONS]
        if mapped:
            at = mapped[rng.randrange(len(mapped))]
            return (t_start + at, t_start + at + 1, GLYPH_CONFUSIONS[token[at]])
        alpha = [i for i, ch in enumerate(token) if ch.isalpha()]
        if alpha:
            at = alpha[rng.randrange(len(alpha))]
            glyph = _FALLBACK_GLYPHS[rng.randrange(len(_FALLBACK_GLYPHS))]
            return (t_start + at, t_start + at + 1, glyph)
    return None


def _try_new_line(tokens, rng: SplitMix64):
    viable = [t for t in tokens if len(t[0]) >= 4]
    if not viable:
        return None
    token, t_start, _ = viable[rng.randrange(len(viable))]
    cut = 2 + rng.randrange(len(token) - 3)  # both halves keep >= 2 chars
    return (t_start + cut, t_start + cut, "-\n")


def _try_tokenization(text, tokens, rng: SplitMix64):
    split_first = rng.random() < 0.5
    gaps = [
        (tokens[k][2], tokens[k + 1][1])
        for k in range(len(tokens) - 1)
        if text[tokens[k][2]:tokens[k + 1][1]] == " "
    ]
    splittable = [t for t in tokens if len(t[0]) >= 2]

    def do_split():
        if not splittable:
            return None
        token, t_start, _ = splittable[rng.randrange(len(splittable))]
        cut = 1 + rng.randrange(len(token) - 1)
        return (t_start + cut, t_start + cut, " ")

    def do_merge():
        if not gaps:
            return None
        gap = gaps[rng.randrange(len(gaps))]
        return (gap[0], gap[1], "")

    first, second = (do_split, do_merge) if split_first else (do_merge, do_split)
    return first() or second()


def _deletion_is_material(text: str, at: int) -> bool:
    """True when deleting text[at] changes token structure or spelling.

    Dropping surrounding punctuation (e.g. a trailing period) leaves the
    normalized token intact and therefore matches no error class; such
    positions are avoided while any material one exists.
    """
    if text[at].isspace():
        return True
    lo, hi = at, at + 1
    while lo > 0 and not text[lo - 1].isspace():
        lo -= 1
    while hi < len(text) and not text[hi].isspace():
        hi += 1
    before = normalize_token(text[lo:hi])
    after = normalize_token(text[lo:at] + text[at + 1:hi])
    return after != before


def _fallback_delete(text, start, end, rng: SplitMix64):
    positions = list(range(start, end))
    material = [p for p in positions if _deletion_is_material(text, p)]
    pool = material or positions
    at = pool[rng.randrange(len(pool))]
    return (at, at + 1, "")


def _classify_edit(text: str, edit: tuple[int, int, str], lexicon: Lexicon) -> ErrorClass:
    """Realized class of an arbitrary edit (used for fallback deletions)."""
    start, end, replacement = edit
    removed = text[start:end]
    if removed.isspace() or (replacement and replacement.isspace()):
        return ErrorClass.TOKENIZATION
    tok_start = start
    while tok_start > 0 and not text[tok_start - 1].isspace():
        tok_start -= 1
    tok_end = end
    while tok_end < len(text) and not text[tok_end].isspace():
        tok_end += 1
    new_token = text[tok_start:start] + replacement + text[end:tok_end]
    norm = normalize_token(new_token)
    if norm and not norm.isalpha():
        return ErrorClass.NON_WORD
    old_norm = normalize_token(text[tok_start:tok_end])
    if norm in lexicon and norm != old_norm:
        return ErrorClass.REAL_WORD
    return ErrorClass.NON_REAL_WORD


# --- the corruption driver ---------------------------------------------------

def corrupt(
    segment: GoldSegment,
    noise_ratio: float,
    seed: int,
    class_weights: dict | None = None,
    lexicon: Lexicon | None = None,
    wrap_width: int = DEFAULT_WRAP_WIDTH,
) -> NoisySegment:
    """Inject reproducible OCR-like errors into one gold segment.

    Every line of the segment is hit with probability ``noise_ratio``; a hit
    line gets exactly one error whose class is sampled from
    ``class_weights`` (uniform by default). Identical arguments produce an
    identical NoisySegment on any platform.
    """
    if not segment.text:
        raise ValueError("segment text must be non-empty")
    if not (0.0 < noise_ratio < 1.0):
        raise ValueError("noise_ratio must be strictly between 0 and 1")
    weights = dict(class_weights) if class_weights else dict(DEFAULT_CLASS_WEIGHTS)
    for cls in ErrorClass:
        weights.setdefault(cls, 0.0)
    if any(w < 0 for w in weights.values()) or sum(weights.values()) <= 0:
        raise ValueError("class weights must be non-negative and sum > 0")
    lexicon = lexicon or default_lexicon()

    rng = SplitMix64(seed)
    classes = list(ErrorClass)
    weight_vec = [weights[c] for c in classes]
    text = segment.text

    edits: list[tuple[tuple[int, int, str], ErrorClass]] = []
    for win_start, win_end in line_windows(text, segment.kind, wrap_width):
        if rng.random() >= noise_ratio:
            continue
        sampled = classes[rng.weighted_choice(classes, weight_vec)]
        tokens = _window_tokens(text, win_start, win_end)
        if sampled == ErrorClass.REAL_WORD:
            edit = _try_real_word(tokens, rng, lexicon, want_real=True)
        elif sampled == ErrorClass.NON_REAL_WORD:
            edit = _try_real_word(tokens, rng, lexicon, want_real=False)
        elif sampled == ErrorClass.NON_WORD:
            edit = _try_non_word(tokens, rng)
        elif sampled == ErrorClass.NEW_LINE:
            edit = _try_new_line(tokens, rng)
        else:
            edit = _try_tokenization(text, tokens, rng)

        if edit is not None:
            realized = sampled
        else:
            # the one step the source algorithm spells out: drop a character
            edit = _fallback_delete(text, win_start, win_end, rng)
            realized = _classify_edit(text, edit, lexicon)
        edits.append((edit, realized))

    noisy_parts = []
    spans = []
    cursor = 0
    delta = 0
    for (start, end, replacement), realized in edits:
        noisy_parts.append(text[cursor:start])
        noisy_parts.append(replacement)
        spans.append(
            ErrorSpan(
                start=start + delta,
                end=start + delta + len(replacement),
                error_class=realized,
                original=text[start:end],
                corrupted=replacement,
            )
        )
        delta += len(replacement) - (end - start)
        cursor = end
    noisy_parts.append(text[cursor:])

    return NoisySegment(
        segment_id=segment.id,
        noisy_text="".join(noisy_parts),
        errors=tuple(spans),
        noise_ratio=noise_ratio,
        seed=seed,
        class_weights=weights,
    )


# --- conformance checking ----------------------------------------------------

def _expand_to_token(text: str, start: int, end: int) -> tuple[int, int]:
    while start > 0 and not text[start - 1].isspace():
        start -= 1
    while end < len(text) and not text[end].isspace():
        end += 1
    return start, end


def span_conforms(noisy: NoisySegment, span: ErrorSpan, lexicon: Lexicon | None = None) -> bool:
    """Check one error span against its class predicate.

    Works from the noisy text and the reconstructed gold alone, so it is an
    independent audit of the generator's bookkeeping.
    """
    lexicon = lexicon or default_lexicon()
    gold = noisy.reconstruct_gold()
    delta = 0
    for other in sorted(noisy.errors, key=lambda s: s.start):
        if other.start >= span.start:
            break
        delta += len(other.original) - len(other.corrupted)
    g_start = span.start + delta
    g_end = g_start + len(span.original)
    assert gold[g_start:g_end] == span.original

    n_lo, n_hi = _expand_to_token(noisy.noisy_text, span.start, span.end)
    g_lo, g_hi = _expand_to_token(gold, g_start, g_end)
    noisy_region = noisy.noisy_text[n_lo:n_hi]
    gold_region = gold[g_lo:g_hi]

    cls = span.error_class
    if cls == ErrorClass.NEW_LINE:
        return "-\n" in noisy_region
    if cls == ErrorClass.TOKENIZATION:
        return len(noisy_region.split()) != len(gold_region.split())
    norm = normalize_token(noisy_region)
    if cls == ErrorClass.NON_WORD:
        return bool(norm) and not norm.isalpha()
    if cls == ErrorClass.REAL_WORD:
        return norm in lexicon and norm != normalize_token(gold_region)
    # non-real-word: alphabetic but not a dictionary word
    return norm not in lexicon and all(c.isalpha() for c in norm)
