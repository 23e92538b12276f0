"""Synthetic crowd workers for offline end-to-end runs.

A worker is a bundle of Bernoulli rates: the chance of overlooking a true
error, of flagging a healthy word, of botching a fix, and of corrupting
clean text while proofing. Two modifiers shape the rates the way the human
results trend: miss probabilities inflate geometrically with word position
inside a segment (attention drifts in long texts), and wrong-type
probabilities shrink when the scanned image is shown.

Workers operate on the word alignment between a segment's gold and noisy
text. Consecutive misaligned columns form one error unit (a broken token's
fragments are handled as a whole), and each unit is missed, fixed, or
botched atomically. Time is synthesized from text length and reading
speed, so every simulated duration is exact and reproducible.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass

from .align import word_align
from .campaign import (
    Campaign,
    FindPayload,
    FixPayload,
    ProofPayload,
    TaskSpec,
    TaskStructure,
)
from .errors import NoTasksAvailable, ProfileInvalid
from .noise import GLYPH_CONFUSIONS, NoisySegment
from .rng import SplitMix64

FIX_READ_FRACTION = 0.4  # fix stage reads marked contexts, not the full text


@dataclass(frozen=True)
class WorkerProfile:
    find_miss_p: float = 0.15
    find_falsepos_p: float = 0.02
    fix_wrong_p: float = 0.10
    proof_introduce_p: float = 0.03
    attention_decay: float = 1.01
    image_benefit: float = 0.5
    speed_cps: float = 20.0

    def validate(self) -> "WorkerProfile":
        for name in ("find_miss_p", "find_falsepos_p", "fix_wrong_p", "proof_introduce_p"):
            p = getattr(self, name)
            if not (0.0 <= p <= 1.0):
                raise ProfileInvalid(f"{name} must be in [0, 1], got {p}")
        if self.attention_decay < 1.0:
            raise ProfileInvalid("attention_decay must be >= 1")
        if not (0.0 < self.image_benefit <= 1.0):
            raise ProfileInvalid("image_benefit must be in (0, 1]")
        if self.speed_cps <= 0:
            raise ProfileInvalid("speed_cps must be positive")
        return self

    @classmethod
    def from_dict(cls, d: dict) -> "WorkerProfile":
        return cls(**d).validate()

    def to_dict(self) -> dict:
        return {
            "find_miss_p": self.find_miss_p,
            "find_falsepos_p": self.find_falsepos_p,
            "fix_wrong_p": self.fix_wrong_p,
            "proof_introduce_p": self.proof_introduce_p,
            "attention_decay": self.attention_decay,
            "image_benefit": self.image_benefit,
            "speed_cps": self.speed_cps,
        }


PERFECT_PROFILE = WorkerProfile(
    find_miss_p=0.0, find_falsepos_p=0.0, fix_wrong_p=0.0, proof_introduce_p=0.0
)
NULL_PROFILE = WorkerProfile(
    find_miss_p=1.0, find_falsepos_p=0.0, fix_wrong_p=0.0, proof_introduce_p=0.0
)


def _token_spans(text: str) -> list[tuple[int, int]]:
    spans = []
    i = 0
    while i < len(text):
        if text[i].isspace():
            i += 1
            continue
        j = i
        while j < len(text) and not text[j].isspace():
            j += 1
        spans.append((i, j))
        i = j
    return spans


@dataclass(frozen=True)
class ErrorUnit:
    """One contiguous run of misaligned columns in a segment alignment."""

    gold_words: tuple[str, ...]
    noisy_indices: tuple[int, ...]
    first_word_position: int  # position of the unit within the segment
    anchor_after: int | None = None  # next matched noisy token, for insertions


@functools.lru_cache(maxsize=4096)
def _analyze(gold: str, noisy: str) -> tuple[tuple[ErrorUnit, ...], tuple[int, ...]]:
    """Error units and the matched noisy token indices for a segment pair.

    Unit boundaries use exact surface equality, not the normalized match of
    the scoring alignment: a worker restoring the text must also repair
    punctuation-level damage that normalization would forgive.
    """
    alignment = word_align(gold.split(), noisy.split())
    runs: list[list] = []  # [gold_words, noisy_indices, position, anchor]
    matched = []
    current: list | None = None
    position = 0

    for gi, oi in alignment.pairs:
        surface_equal = (
            gi is not None
            and oi is not None
            and alignment.gs_words[gi] == alignment.other_words[oi]
        )
        if surface_equal:
            if current is not None:
                current[3] = oi
                current = None
            matched.append(oi)
        else:
            if current is None:
                current = [[], [], position, None]
                runs.append(current)
            if gi is not None:
                current[0].append(alignment.gs_words[gi])
            if oi is not None:
                current[1].append(oi)
        position += 1

    units = tuple(
        ErrorUnit(tuple(g), tuple(n), pos, anchor)
        for g, n, pos, anchor in runs
        if g or n
    )
    return units, tuple(matched)


def _mangle(token: str, rng: SplitMix64) -> str:
    """A wrong replacement: a glyph-confused version of the token."""
    mappable = [i for i, ch in enumerate(token) if ch in GLYPH_CONFUSIONS]
    if mappable:
        at = mappable[rng.randrange(len(mappable))]
        return token[:at] + GLYPH_CONFUSIONS[token[at]] + token[at + 1:]
    return token + _wrong_digit(rng)


def _wrong_digit(rng: SplitMix64) -> str:
    return "0123456789"[rng.randrange(10)]


@dataclass(frozen=True)
class SimulatedWork:
    payload: ProofPayload | FindPayload | FixPayload
    duration_seconds: float


def _miss_probability(profile: WorkerProfile, position: int) -> float:
    return min(1.0, profile.find_miss_p * profile.attention_decay**position)


def simulate(
    task: TaskSpec,
    segments: list[NoisySegment],
    profile: WorkerProfile,
    seed: int,
) -> SimulatedWork:
    """One worker's pass over one task, deterministic under the seed."""
    profile.validate()
    rng = SplitMix64(seed)
    image_factor = profile.image_benefit if task.show_image else 1.0
    falsepos_p = profile.find_falsepos_p * image_factor
    fix_wrong_p = profile.fix_wrong_p * image_factor
    introduce_p = profile.proof_introduce_p * image_factor

    total_chars = sum(len(ns.noisy_text) for ns in segments)

    if task.structure == TaskStructure.PROOFING:
        texts = {}
        for ns in segments:
            texts[ns.segment_id] = _proof_segment(ns, profile, rng, introduce_p, fix_wrong_p)
        payload = ProofPayload(texts=texts)
        duration = total_chars / profile.speed_cps
    elif task.structure == TaskStructure.FIND:
        selections = {}
        for ns in segments:
            selections[ns.segment_id] = _find_segment(ns, profile, rng, falsepos_p)
        payload = FindPayload(selections=selections)
        duration = total_chars / profile.speed_cps
    else:
        edits = {}
        spans = task.editable_spans or {}
        for ns in segments:
            edits[ns.segment_id] = _fix_segment(ns, spans.get(ns.segment_id, []), rng, fix_wrong_p)
        payload = FixPayload(edits=edits)
        duration = FIX_READ_FRACTION * total_chars / profile.speed_cps

    return SimulatedWork(payload=payload, duration_seconds=duration)


def _proof_segment(ns: NoisySegment, profile, rng, introduce_p, fix_wrong_p) -> str:
    gold = ns.reconstruct_gold()
    noisy = ns.noisy_text
    units, matched = _analyze(gold, noisy)
    spans = _token_spans(noisy)

    # edits as (start, end, replacement) over the noisy text, built in order
    edits: list[tuple[int, int, str]] = []
    for unit in units:
        fix_text = " ".join(unit.gold_words)
        if unit.noisy_indices:
            if rng.random() < _miss_probability(profile, unit.first_word_position):
                continue
            if fix_wrong_p and rng.random() < fix_wrong_p and fix_text:
                fix_text = _mangle(fix_text, rng)
            start = spans[unit.noisy_indices[0]][0]
            end = spans[unit.noisy_indices[-1]][1]
            edits.append((start, end, fix_text))
        else:
            # the word vanished from the noisy text; a careful proofer
            # restores it from context
            if rng.random() < _miss_probability(profile, unit.first_word_position):
                continue
            if unit.anchor_after is not None:
                anchor = spans[unit.anchor_after][0]
                edits.append((anchor, anchor, fix_text + " "))
            else:
                edits.append((len(noisy), len(noisy), " " + fix_text))
    for idx in matched:
        if introduce_p and rng.random() < introduce_p:
            start, end = spans[idx]
            edits.append((start, end, _mangle(noisy[start:end], rng)))

    edits.sort(key=lambda e: e[0])
    out = []
    cursor = 0
    for start, end, replacement in edits:
        out.append(noisy[cursor:start])
        out.append(replacement)
        cursor = end
    out.append(noisy[cursor:])
    return "".join(out)


def _find_segment(ns: NoisySegment, profile, rng, falsepos_p) -> list[dict]:
    gold = ns.reconstruct_gold()
    noisy = ns.noisy_text
    units, matched = _analyze(gold, noisy)
    tokens = noisy.split()
    marks = set()
    for unit in units:
        if not unit.noisy_indices:
            continue  # nothing visible to click
        if rng.random() < _miss_probability(profile, unit.first_word_position):
            continue
        marks.update(unit.noisy_indices)
    for idx in matched:
        if falsepos_p and rng.random() < falsepos_p:
            marks.add(idx)
    return [{"index": i, "token": tokens[i]} for i in sorted(marks)]


def _fix_segment(ns: NoisySegment, marked: list[int], rng, fix_wrong_p) -> list[dict]:
    gold = ns.reconstruct_gold()
    noisy = ns.noisy_text
    units, _ = _analyze(gold, noisy)
    unit_of = {}
    for unit in units:
        for idx in unit.noisy_indices:
            unit_of[idx] = unit
    tokens = noisy.split()

    edits = []
    consumed_units = set()
    for idx in sorted(marked):
        unit = unit_of.get(idx)
        if unit is None:
            # a healthy word was marked; the fixer re-types it, sometimes badly
            replacement = tokens[idx]
            if fix_wrong_p and rng.random() < fix_wrong_p:
                replacement = _mangle(replacement, rng)
            edits.append({"index": idx, "replacement": replacement})
        elif id(unit) not in consumed_units:
            consumed_units.add(id(unit))
            fix_text = " ".join(unit.gold_words)
            if fix_wrong_p and rng.random() < fix_wrong_p and fix_text:
                fix_text = _mangle(fix_text, rng)
            edits.append({"index": idx, "replacement": fix_text})
        else:
            # continuation fragment of an already-fixed unit: clear it
            edits.append({"index": idx, "replacement": ""})
    return edits


# --- campaign driver -----------------------------------------------------------

def run_workers(
    campaign: Campaign,
    profile: WorkerProfile,
    workers: int,
    seed: int,
    worker_prefix: str = "sim",
    max_tasks_per_worker: int | None = None,
    within: set | None = None,
) -> int:
    """Drive simulated workers through assign -> work -> submit.

    The campaign clock must be advanceable (``clock.advance(seconds)``);
    durations come from the simulated work, so timing metrics are exact.
    Returns the number of recorded submissions.
    """
    profile.validate()
    base = SplitMix64(seed)
    recorded = 0
    for k in range(workers):
        worker_id = f"{worker_prefix}-{k:05d}"
        worker_rng = base.derive(k)
        done = 0
        while max_tasks_per_worker is None or done < max_tasks_per_worker:
            try:
                task = campaign.assign_next(worker_id, within=within)
            except NoTasksAvailable:
                break
            work = simulate(
                task,
                campaign.resolve_noisy(task),
                profile,
                seed=worker_rng.next_u64(),
            )
            campaign.clock.advance(work.duration_seconds)
            campaign.record_submission(task.task_id, worker_id, work.payload)
            recorded += 1
            done += 1
    return recorded
