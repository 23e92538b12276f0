"""Scoring of worker output: accuracy, efficiency, and error breakdowns.

Accuracy is the improvement ratio between two normalized edit distances:
how much of the initial damage (gold vs OCRed) the worker removed (gold vs
fixed), clamped to zero when the worker made the text worse. Efficiency is
seconds per gold character, with the two-phase find/fix flow summing its
phase durations. Error breakdowns classify a submission's mistakes at the
word level and report each class as a fraction of all mistakes, so the
per-structure rates always sum to one when any mistake exists.

Word membership against the gold text uses a token bag (multiset) of
case-folded, punctuation-stripped tokens: a gold token can vouch for one
submitted token only, so duplicated guesses don't ride on a single gold
word.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field

from .align import char_mindist, normalize_token, slot_intersection, word_errors
from .errors import EmptyGroup, NegativeDuration, ZeroLength


@dataclass(frozen=True)
class AccuracyReport:
    acc_task: float
    mindist_gs_ocred: float
    mindist_gs_fixed: float

    def to_dict(self) -> dict:
        return {
            "acc_task": self.acc_task,
            "mindist_gs_ocred": self.mindist_gs_ocred,
            "mindist_gs_fixed": self.mindist_gs_fixed,
        }


@dataclass(frozen=True)
class EfficiencyReport:
    seconds_per_char: float
    phase_durations: dict = field(hash=False)
    gs_len: int

    def to_dict(self) -> dict:
        return {
            "seconds_per_char": self.seconds_per_char,
            "phase_durations": dict(self.phase_durations),
            "gs_len": self.gs_len,
        }


@dataclass(frozen=True)
class ProofingBreakdown:
    miss_rate: float
    wrong_rate: float
    errors_total: int

    def to_dict(self) -> dict:
        return {
            "proof_miss_rate": self.miss_rate,
            "proof_wrong_rate": self.wrong_rate,
            "errors_total": self.errors_total,
        }


@dataclass(frozen=True)
class FindFixBreakdown:
    find_miss_rate: float
    find_wrong_rate: float
    fix_wrong_rate: float
    errors_total: int
    correct_edits: int

    def to_dict(self) -> dict:
        return {
            "find_miss_rate": self.find_miss_rate,
            "find_wrong_rate": self.find_wrong_rate,
            "fix_wrong_rate": self.fix_wrong_rate,
            "errors_total": self.errors_total,
            "correct_edits": self.correct_edits,
        }


def accuracy(gs: str, ocred: str, fixed: str) -> AccuracyReport:
    """Improvement ratio of a worker's correction.

    With a = mindist(gs, ocred) and b = mindist(gs, fixed), the score is
    (a - b) / a, or 0 when the fixed text is further from gold than the
    OCRed text was. A clean input (a == 0) scores 1 only if it was left
    clean.
    """
    a = char_mindist(gs, ocred).mindist
    b = char_mindist(gs, fixed).mindist
    if a == 0.0:
        acc = 1.0 if b == 0.0 else 0.0
    elif a >= b:
        acc = (a - b) / a
    else:
        acc = 0.0
    return AccuracyReport(acc_task=acc, mindist_gs_ocred=a, mindist_gs_fixed=b)


def _duration(start: float, end: float, phase: str) -> float:
    if end < start:
        raise NegativeDuration(f"{phase} phase ends before it starts")
    return end - start


def efficiency_proofing(submission_start: float, submission_end: float, gs_len: int) -> EfficiencyReport:
    """Seconds per gold character for a single-phase task."""
    if gs_len < 1:
        raise ZeroLength("gs_len must be >= 1")
    d = _duration(submission_start, submission_end, "proofing")
    return EfficiencyReport(
        seconds_per_char=d / gs_len,
        phase_durations={"proofing": d},
        gs_len=gs_len,
    )


def efficiency_findfix(
    find_start: float,
    find_end: float,
    fix_start: float,
    fix_end: float,
    gs_len: int,
) -> EfficiencyReport:
    """Seconds per gold character across the find and fix phases."""
    if gs_len < 1:
        raise ZeroLength("gs_len must be >= 1")
    d_find = _duration(find_start, find_end, "find")
    d_fix = _duration(fix_start, fix_end, "fix")
    return EfficiencyReport(
        seconds_per_char=(d_find + d_fix) / gs_len,
        phase_durations={"find": d_find, "fix": d_fix},
        gs_len=gs_len,
    )


def proofing_counts(gs: str, ocred: str, fixed: str, ocre=None) -> tuple[int, int]:
    """(miss, wrong) counts for one text unit; summable across segments.

    ``ocre`` lets callers reuse a precomputed gold-vs-OCRed slot set.
    """
    if ocre is None:
        ocre = word_errors(gs, ocred)
    fe = word_errors(gs, fixed)
    miss = len(slot_intersection(set(ocre), fe))
    wrong = len(fe) - miss
    return miss, wrong


def proofing_breakdown(gs: str, ocred: str, fixed: str) -> ProofingBreakdown:
    """Miss vs wrong-correction rates for a single-phase submission.

    A miss is a gold slot wrong in both the OCRed and the fixed text; a
    wrong correction is a slot that was fine in the OCRed text but wrong
    after the worker touched it.
    """
    miss, wrong = proofing_counts(gs, ocred, fixed)
    total = miss + wrong
    if total == 0:
        return ProofingBreakdown(0.0, 0.0, 0)
    return ProofingBreakdown(miss / total, wrong / total, total)


def _token_bag(gs: str) -> Counter:
    bag = Counter()
    for token in gs.split():
        norm = normalize_token(token)
        if norm:
            bag[norm] += 1
    return bag


def _consume(bag: Counter, norm: str) -> bool:
    if bag[norm] > 0:
        bag[norm] -= 1
        return True
    return False


def findfix_counts(
    gs: str,
    ocred: str,
    wse_tokens: list[str],
    ew_tokens: list[str],
    wse_indices: list[int] | None = None,
    ocre=None,
) -> tuple[int, int, int, int]:
    """(find_miss, find_wrong, fix_wrong, correct_edits) for one text unit."""
    if ocre is None:
        ocre = word_errors(gs, ocred)

    bag = _token_bag(gs)
    find_wrong = 0
    correctly_selected = 0
    i = 0
    while i < len(wse_tokens):
        if i + 1 < len(wse_tokens):
            adjacent = wse_indices is None or wse_indices[i + 1] == wse_indices[i] + 1
            if adjacent:
                # rejoin split pieces, dropping the hyphen a line break added
                merged = normalize_token(wse_tokens[i].rstrip("-") + wse_tokens[i + 1])
                if merged and _consume(bag, merged):
                    correctly_selected += 1
                    i += 2
                    continue
        norm = normalize_token(wse_tokens[i])
        if norm and _consume(bag, norm):
            find_wrong += 1
        else:
            correctly_selected += 1
        i += 1

    edit_bag = _token_bag(gs)
    correct_edits = 0
    for token in ew_tokens:
        norm = normalize_token(token)
        if norm and _consume(edit_bag, norm):
            correct_edits += 1
    fix_wrong = len(ew_tokens) - correct_edits

    find_miss = max(0, len(ocre) - correctly_selected)
    return find_miss, find_wrong, fix_wrong, correct_edits


def findfix_breakdown(
    gs: str,
    ocred: str,
    wse_tokens: list[str],
    ew_tokens: list[str],
    wse_indices: list[int] | None = None,
) -> FindFixBreakdown:
    """Find-miss / find-wrong / fix-wrong rates for a two-phase submission.

    A selected token found in the gold bag is a wrong selection (the worker
    marked a correct word). Adjacent selections whose concatenation is a
    gold word collapse into one correct selection -- that is how marking
    both halves of a broken token is credited. Edited tokens found in the
    gold bag are correct edits; misses are whatever remains of the OCRed
    error count after subtracting correct selections (floored at zero,
    since alignment estimates carry slack).

    ``wse_indices`` gives the noisy-text token positions of the selections;
    without it, consecutive list entries are treated as adjacent.
    """
    find_miss, find_wrong, fix_wrong, correct_edits = findfix_counts(
        gs, ocred, wse_tokens, ew_tokens, wse_indices
    )
    total = find_miss + find_wrong + fix_wrong
    if total == 0:
        return FindFixBreakdown(0.0, 0.0, 0.0, 0, correct_edits)
    return FindFixBreakdown(
        find_miss_rate=find_miss / total,
        find_wrong_rate=find_wrong / total,
        fix_wrong_rate=fix_wrong / total,
        errors_total=total,
        correct_edits=correct_edits,
    )


@dataclass(frozen=True)
class GroupSummary:
    group_key: tuple
    n: int
    metrics: dict = field(hash=False)

    def to_dict(self) -> dict:
        return {"group_key": list(self.group_key), "n": self.n, "metrics": self.metrics}


def aggregate(reports: list[dict], group_key: tuple) -> GroupSummary:
    """Per-metric mean, sample variance, and count over one condition group.

    ``reports`` are flat metric dicts; non-numeric entries are skipped.
    Variance uses the n-1 denominator and is 0.0 for singleton groups.
    """
    if not reports:
        raise EmptyGroup(f"no reports for group {group_key!r}")
    values: dict[str, list[float]] = {}
    for report in reports:
        for key, value in report.items():
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                continue
            values.setdefault(key, []).append(float(value))
    metrics = {}
    for key in sorted(values):
        vals = values[key]
        n = len(vals)
        mean = math.fsum(vals) / n
        variance = math.fsum((v - mean) ** 2 for v in vals) / (n - 1) if n > 1 else 0.0
        metrics[key] = {"mean": mean, "variance": variance, "n": n}
    return GroupSummary(group_key=tuple(group_key), n=len(reports), metrics=metrics)
