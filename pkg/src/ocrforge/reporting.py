"""Scoring of recorded submissions and figure-ready report tables.

The score stage turns every submission in a campaign into one flat metric
row. Proofing rows carry accuracy, proofing efficiency, and the miss/wrong
breakdown. Find rows carry their phase duration and selection counts (a
find pass alone has no accuracy). Fix rows close the two-phase loop: they
combine their own duration with the originating find submission's, score
the reconstructed corrected text, and carry the find-miss / find-wrong /
fix-wrong breakdown.

A task's distance metrics decompose over its segments: payloads are
per-segment, so no edit can cross a segment boundary, and the task-level
normalized distance is the summed raw edit count over the summed gold
length. Report tables group rows by (structure, length, image flag) and
carry per-metric means and variances only.
"""

from __future__ import annotations

import csv
import functools
import json
from pathlib import Path

from .align import char_mindist, word_errors
from .campaign import (
    Campaign,
    FindPayload,
    FixPayload,
    ProofPayload,
    Submission,
    TaskStructure,
    apply_fix_edits,
)
from .metrics import aggregate, findfix_counts, proofing_counts

SCORE_COLUMNS = [
    "submission_id",
    "task_id",
    "worker_id",
    "structure",
    "length",
    "show_image",
    "gs_len",
    "acc_task",
    "mindist_gs_ocred",
    "mindist_gs_fixed",
    "seconds_per_char",
    "find_seconds",
    "fix_seconds",
    "proof_seconds",
    "proof_miss_rate",
    "proof_wrong_rate",
    "find_miss_rate",
    "find_wrong_rate",
    "fix_wrong_rate",
    "errors_total",
    "correct_edits",
    "n_selections",
    "n_edits",
]


@functools.lru_cache(maxsize=16384)
def _cached_raw_distance(gs: str, other: str) -> int:
    return char_mindist(gs, other).raw_count


@functools.lru_cache(maxsize=16384)
def _cached_word_errors(gs: str, other: str) -> frozenset:
    # the gold-vs-OCRed slot set repeats for every submission on a segment
    return frozenset(word_errors(gs, other))


def _task_distances(golds: list[str], others: list[str]) -> tuple[float, int, int]:
    """(mindist, raw_count, gs_len) with per-segment decomposition."""
    raw = sum(_cached_raw_distance(g, o) for g, o in zip(golds, others))
    n = sum(len(g) for g in golds)
    return raw / n, raw, n


def _accuracy_value(a: float, b: float) -> float:
    if a == 0.0:
        return 1.0 if b == 0.0 else 0.0
    if a >= b:
        return (a - b) / a
    return 0.0


def ew_tokens_of(edits: list[dict]) -> list[str]:
    """Edited words of a fix payload: non-empty replacements, tokenized."""
    tokens = []
    for edit in edits:
        tokens.extend(edit["replacement"].split())
    return tokens


def score_submission(campaign: Campaign, sub: Submission) -> dict:
    """One flat metric row for one submission."""
    task = campaign.tasks[sub.task_id]
    segments = campaign.resolve_noisy(task)
    golds = [ns.reconstruct_gold() for ns in segments]
    noisies = [ns.noisy_text for ns in segments]
    gs_len = sum(len(g) for g in golds)
    duration = sub.received_at - sub.issued_at

    row: dict = {
        "submission_id": sub.submission_id,
        "task_id": task.task_id,
        "worker_id": sub.worker_id,
        "structure": task.structure.value,
        "length": task.length.value,
        "show_image": task.show_image,
        "gs_len": gs_len,
    }

    if isinstance(sub.payload, ProofPayload):
        fixed = [sub.payload.texts.get(ns.segment_id, ns.noisy_text) for ns in segments]
        a, _, _ = _task_distances(golds, noisies)
        b, _, _ = _task_distances(golds, fixed)
        miss = wrong = 0
        for g, o, f in zip(golds, noisies, fixed):
            m, w = proofing_counts(g, o, f, ocre=_cached_word_errors(g, o))
            miss += m
            wrong += w
        total = miss + wrong
        row.update(
            acc_task=_accuracy_value(a, b),
            mindist_gs_ocred=a,
            mindist_gs_fixed=b,
            seconds_per_char=duration / gs_len,
            proof_seconds=duration,
            proof_miss_rate=miss / total if total else 0.0,
            proof_wrong_rate=wrong / total if total else 0.0,
            errors_total=total,
        )
    elif isinstance(sub.payload, FindPayload):
        n_selections = sum(len(v) for v in sub.payload.selections.values())
        row.update(find_seconds=duration, n_selections=n_selections)
    else:
        origin = campaign.submissions[task.origin_find_submission]
        find_duration = origin.received_at - origin.issued_at
        fixed = [
            apply_fix_edits(ns.noisy_text, sub.payload.edits.get(ns.segment_id, []))
            for ns in segments
        ]
        a, _, _ = _task_distances(golds, noisies)
        b, _, _ = _task_distances(golds, fixed)
        find_miss = find_wrong = fix_wrong = correct_edits = 0
        for ns, g in zip(segments, golds):
            marks = origin.payload.selections.get(ns.segment_id, [])
            edits = sub.payload.edits.get(ns.segment_id, [])
            fm, fw, xw, cr = findfix_counts(
                g,
                ns.noisy_text,
                [m["token"] for m in marks],
                ew_tokens_of(edits),
                wse_indices=[m["index"] for m in marks],
                ocre=_cached_word_errors(g, ns.noisy_text),
            )
            find_miss += fm
            find_wrong += fw
            fix_wrong += xw
            correct_edits += cr
        total = find_miss + find_wrong + fix_wrong
        n_edits = sum(len(v) for v in sub.payload.edits.values())
        row.update(
            acc_task=_accuracy_value(a, b),
            mindist_gs_ocred=a,
            mindist_gs_fixed=b,
            seconds_per_char=(find_duration + duration) / gs_len,
            find_seconds=find_duration,
            fix_seconds=duration,
            find_miss_rate=find_miss / total if total else 0.0,
            find_wrong_rate=find_wrong / total if total else 0.0,
            fix_wrong_rate=fix_wrong / total if total else 0.0,
            errors_total=total,
            correct_edits=correct_edits,
            n_edits=n_edits,
        )
    return row


def score_campaign(campaign: Campaign) -> list[dict]:
    """One row per submission, in submission-id order."""
    return [
        score_submission(campaign, campaign.submissions[sid])
        for sid in sorted(campaign.submissions)
    ]


def group_rows(rows: list[dict]) -> list[dict]:
    """Aggregate rows into per-(structure, length, image) summaries."""
    groups: dict[tuple, list[dict]] = {}
    for row in rows:
        key = (row["structure"], row["length"], row["show_image"])
        groups.setdefault(key, []).append(row)
    summaries = []
    for key in sorted(groups, key=str):
        numeric = [
            {k: v for k, v in r.items() if isinstance(v, (int, float)) and not isinstance(v, bool)}
            for r in groups[key]
        ]
        summary = aggregate(numeric, key)
        summaries.append(
            {
                "structure": key[0],
                "length": key[1],
                "show_image": key[2],
                "n": summary.n,
                "metrics": summary.metrics,
            }
        )
    return summaries


# --- file emission ----------------------------------------------------------------

def write_scores(rows: list[dict], out_dir: str | Path) -> list[Path]:
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / "scores.csv"
    json_path = out_dir / "scores.json"
    with open(csv_path, "w", newline="", encoding="utf-8") as f:
        writer = csv.DictWriter(f, fieldnames=SCORE_COLUMNS, restval="")
        writer.writeheader()
        for row in rows:
            writer.writerow({k: row.get(k, "") for k in SCORE_COLUMNS})
    with open(json_path, "w", encoding="utf-8") as f:
        json.dump(rows, f, indent=1, sort_keys=True)
        f.write("\n")
    return [csv_path, json_path]


def write_report(summaries: list[dict], out_dir: str | Path) -> list[Path]:
    """Figure-ready grouped tables: one row per condition, means only."""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    csv_path = out_dir / "report_summary.csv"
    json_path = out_dir / "report_summary.json"

    metric_names = sorted({m for s in summaries for m in s["metrics"]})
    with open(csv_path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f)
        header = ["structure", "length", "show_image", "n"]
        for name in metric_names:
            header += [f"{name}_mean", f"{name}_var", f"{name}_n"]
        writer.writerow(header)
        for s in summaries:
            row = [s["structure"], s["length"], s["show_image"], s["n"]]
            for name in metric_names:
                cell = s["metrics"].get(name)
                row += [cell["mean"], cell["variance"], cell["n"]] if cell else ["", "", ""]
            writer.writerow(row)
    with open(json_path, "w", encoding="utf-8") as f:
        json.dump(summaries, f, indent=1, sort_keys=True)
        f.write("\n")
    return [csv_path, json_path]
