"""Acceptance suite: one test per criterion, one pass/fail line each.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the per-criterion
lines. The thresholds and tolerances here are contractual; do not relax
them to make a run pass.
"""

import functools
import hashlib
import itertools
import json
import time
from pathlib import Path

import pytest

from ocrforge.align import char_mindist
from ocrforge.campaign import Campaign, Condition, TaskStructure
from ocrforge.corpus import SegmentKind, attach_image, ingest, segments_of_kind
from ocrforge.metrics import (
    accuracy,
    efficiency_findfix,
    efficiency_proofing,
    findfix_breakdown,
    proofing_breakdown,
)
from ocrforge.noise import corrupt, line_windows, span_conforms
from ocrforge.pipeline import run_pipeline
from ocrforge.rng import SplitMix64
from ocrforge.simworker import WorkerProfile, run_workers
from ocrforge.strategy import Goal, Segmentation, StrategyQuery, Structure, all_queries, recommend


def _passed(n: int, text: str) -> None:
    print(f"\n[PASS] criterion {n}: {text}")


# --- 1. edit-distance oracle ---------------------------------------------------

@functools.lru_cache(maxsize=None)
def _lev_recursive(a: str, b: str) -> int:
    if not a:
        return len(b)
    if not b:
        return len(a)
    return min(
        _lev_recursive(a[1:], b[1:]) + (a[0] != b[0]),
        _lev_recursive(a[1:], b) + 1,
        _lev_recursive(a, b[1:]) + 1,
    )


def test_criterion_1_edit_distance_oracle():
    started = time.monotonic()
    alphabet = "abcd"
    rng = SplitMix64(0xED17)

    def random_string(max_len):
        length = rng.randrange(max_len + 1)
        return "".join(alphabet[rng.randrange(4)] for _ in range(length))

    pairs = []
    short = [""] + ["".join(p) for k in (1, 2) for p in itertools.product(alphabet, repeat=k)]
    for t1 in short:
        for t2 in short:
            if t1:
                pairs.append((t1, t2))
    while len(pairs) < 10_000:
        t1 = random_string(8)
        if not t1:
            continue
        pairs.append((t1, random_string(8)))

    for t1, t2 in pairs:
        got = char_mindist(t1, t2).raw_count
        expected = _lev_recursive(t1, t2)
        assert got == expected, (t1, t2, got, expected)

    elapsed = time.monotonic() - started
    assert elapsed < 60.0, f"oracle comparison took {elapsed:.1f}s"
    _passed(1, f"{len(pairs)} string pairs match the recursive oracle exactly ({elapsed:.1f}s)")


# --- 2. accuracy (improvement ratio) contract ------------------------------------

def test_criterion_2_accuracy_contract():
    rng = SplitMix64(0xACC3)
    words = ["the", "cat", "sat", "mat", "dog", "ran", "far", "c4t", "d0g", "x", "qqq"]

    def random_text(min_words=1, max_words=12):
        n = min_words + rng.randrange(max_words - min_words + 1)
        return " ".join(words[rng.randrange(len(words))] for _ in range(n))

    checked_clamp = 0
    for _ in range(1000):
        gs = random_text()
        ocred = random_text()
        fixed = random_text()

        # (a) returning the gold text always scores 1
        assert accuracy(gs, ocred, gs).acc_task == 1.0
        # (b) returning the OCRed text scores 0 unless it already was gold
        untouched = accuracy(gs, ocred, ocred)
        if untouched.mindist_gs_ocred > 0:
            assert untouched.acc_task == 0.0
        else:
            assert untouched.acc_task == 1.0
        # (c) making the text worse clamps to 0
        report = accuracy(gs, ocred, fixed)
        assert 0.0 <= report.acc_task <= 1.0
        if report.mindist_gs_fixed > report.mindist_gs_ocred:
            assert report.acc_task == 0.0
            checked_clamp += 1

    assert checked_clamp > 100, "clamp branch under-exercised"
    _passed(2, f"1000 random triples honor the improvement-ratio contract ({checked_clamp} clamp hits)")


# --- 3. error-rate normalization ----------------------------------------------------

def test_criterion_3_error_rate_normalization():
    rng = SplitMix64(0xE44)
    vocab = ["the", "cat", "sat", "on", "a", "mat", "dog", "day", "good", "man", "city"]

    def sentence(n):
        return " ".join(vocab[rng.randrange(len(vocab))] for _ in range(n))

    def mangled(text):
        tokens = text.split()
        for i in range(len(tokens)):
            if rng.random() < 0.4:
                tokens[i] = tokens[i][:-1] + "4"
        return " ".join(tokens)

    proof_nonzero = ff_nonzero = 0
    for _ in range(1000):
        gs = sentence(4 + rng.randrange(8))
        ocred = mangled(gs)
        fixed = mangled(gs)

        pb = proofing_breakdown(gs, ocred, fixed)
        if pb.errors_total > 0:
            assert abs(pb.miss_rate + pb.wrong_rate - 1.0) < 1e-12
            proof_nonzero += 1
        else:
            assert pb.miss_rate == pb.wrong_rate == 0.0

        tokens = ocred.split()
        wse = [t for t in tokens if rng.random() < 0.3]
        ew = [vocab[rng.randrange(len(vocab))] if rng.random() < 0.5 else t + "9" for t in wse]
        fb = findfix_breakdown(gs, ocred, wse, ew)
        if fb.errors_total > 0:
            total = fb.find_miss_rate + fb.find_wrong_rate + fb.fix_wrong_rate
            assert abs(total - 1.0) < 1e-12
            ff_nonzero += 1
        else:
            assert fb.find_miss_rate == fb.find_wrong_rate == fb.fix_wrong_rate == 0.0

    assert proof_nonzero > 500 and ff_nonzero > 500
    _passed(3, f"rates sum to 1 within 1e-12 over 1000 scenarios (proofing {proof_nonzero}, find-fix {ff_nonzero} nonzero)")


# --- 4. noise statistics ---------------------------------------------------------------

def test_criterion_4_noise_statistics():
    from ocrforge.corpus import GoldSegment

    text = (
        "The enthusiasm for human efficiency is beginning to rival that for "
        "industrial efficiency in the modern city. Preventive medicine and "
        "public playgrounds go back to the age of reform for inspiration. "
        "Their sympathies go out instead to a different kind of movement "
        "that bids fair to shatter old lives to bits across the country."
    )
    segment = GoldSegment.build(
        id="acc:para", kind=SegmentKind.PARAGRAPH, text=text, source_span=("acc", 0, len(text))
    )
    lines_per_trial = len(line_windows(segment.text, segment.kind))
    assert lines_per_trial >= 4

    trials = hits = 0
    needed_seeds = (10_000 // lines_per_trial) + 1
    for seed in range(needed_seeds):
        noisy = corrupt(segment, 0.5, seed=seed)
        trials += lines_per_trial
        hits += len(noisy.errors)
    assert trials >= 10_000
    rate = hits / trials
    assert abs(rate - 0.5) <= 0.02, f"hit rate {rate:.4f}"

    conforming = reversible = 0
    for seed in range(1000):
        noisy = corrupt(segment, 0.9, seed=seed)
        assert noisy.reconstruct_gold() == segment.text
        reversible += 1
        for span in noisy.errors:
            assert span_conforms(noisy, span), (seed, span)
            conforming += 1
    assert reversible == 1000
    _passed(4, f"line hit rate {rate:.4f} within 0.5 +/- 0.02; {conforming} spans conform; 1000/1000 reversible")


# --- 5. strategy truth table --------------------------------------------------------------

def test_criterion_5_strategy_truth_table():
    snapshot_path = Path(__file__).parent / "data" / "strategy_snapshot.json"
    expected = {
        json.dumps(row["query"], sort_keys=True): row["recommendation"]
        for row in json.loads(snapshot_path.read_text())
    }
    queries = all_queries()
    assert len(queries) == 84
    for query in queries:
        rec = recommend(query)
        key = json.dumps(query.to_dict(), sort_keys=True)
        assert {
            "structure": rec.structure.value,
            "show_image": rec.show_image,
            "segmentation": rec.segmentation.value,
        } == expected[key], key

    # the three rows anchored verbatim to the published decision guidance
    split_rule = recommend(StrategyQuery(Goal.MAX_ACCURACY, True, SegmentKind.ARTICLE, True))
    assert (split_rule.structure, split_rule.show_image, split_rule.segmentation) == (
        Structure.FIND_FIX, True, Segmentation.SPLIT_TO_PARAGRAPHS,
    )
    proofing_exception = recommend(StrategyQuery(Goal.MAX_ACCURACY, True, SegmentKind.ARTICLE, False))
    assert (proofing_exception.structure, proofing_exception.show_image, proofing_exception.segmentation) == (
        Structure.PROOFING, True, Segmentation.AS_IS,
    )
    hide_image = recommend(StrategyQuery(Goal.MAX_EFFICIENCY, True, SegmentKind.PARAGRAPH, False))
    assert (hide_image.structure, hide_image.show_image, hide_image.segmentation) == (
        Structure.PROOFING, False, Segmentation.AS_IS,
    )
    _passed(5, "84/84 snapshot rows hold; split rule, proofing exception, and hide-image rule verbatim")


# --- 6. end-to-end simulation, direction of effect ----------------------------------------

def _alpha_tag(i: int) -> str:
    letters = "abcdefghijklmnopqrstuvwxyz"
    return "z" + letters[i // 26 % 26] + letters[i % 26]


def _acceptance_corpus() -> str:
    vocab = (
        "the quick brown fox jumps over lazy dog near old barn small boat "
        "drifted slowly past quiet harbor morning every window tall house "
        "was lit against winter evening children walked school along river "
        "road garden city fine modest homes light turned corner stone"
    ).split()

    def sentence(i):
        words = [vocab[(i * 7 + k * 3) % len(vocab)] for k in range(9)]
        words.append(_alpha_tag(i))  # distinct all-letter tag per sentence
        return " ".join(words).capitalize() + "."

    sentences_per_paragraph = 5
    paragraphs_per_article = 3
    articles = 3
    counter = 0
    parts = []
    for _ in range(articles):
        paragraphs = []
        for _ in range(paragraphs_per_article):
            chunk = [sentence(counter + k) for k in range(sentences_per_paragraph)]
            counter += sentences_per_paragraph
            paragraphs.append(" ".join(chunk))
        parts.append("\n\n".join(paragraphs))
    return "\n\n\n\n".join(parts)


def _lean_rows(campaign: Campaign) -> list[dict]:
    """Accuracy and efficiency only; skips the word-level breakdowns."""
    from ocrforge.campaign import FixPayload, ProofPayload, apply_fix_edits

    raw_cache: dict[tuple[str, str], int] = {}

    def raw(gs, other):
        key = (gs, other)
        if key not in raw_cache:
            raw_cache[key] = char_mindist(gs, other).raw_count
        return raw_cache[key]

    rows = []
    for sub in campaign.submissions.values():
        task = campaign.tasks[sub.task_id]
        segments = campaign.resolve_noisy(task)
        golds = [ns.reconstruct_gold() for ns in segments]
        gs_len = sum(len(g) for g in golds)
        duration = sub.received_at - sub.issued_at
        if isinstance(sub.payload, ProofPayload):
            fixed = [sub.payload.texts[ns.segment_id] for ns in segments]
            total_duration = duration
        elif isinstance(sub.payload, FixPayload):
            origin = campaign.submissions[task.origin_find_submission]
            fixed = [
                apply_fix_edits(ns.noisy_text, sub.payload.edits.get(ns.segment_id, []))
                for ns in segments
            ]
            total_duration = duration + (origin.received_at - origin.issued_at)
        else:
            continue  # find rows carry no accuracy
        a = sum(raw(g, ns.noisy_text) for g, ns in zip(golds, segments)) / gs_len
        b = sum(raw(g, f) for g, f in zip(golds, fixed)) / gs_len
        if a == 0.0:
            acc = 1.0 if b == 0.0 else 0.0
        else:
            acc = (a - b) / a if a >= b else 0.0
        rows.append(
            {
                "structure": task.structure.value,
                "acc_task": acc,
                "seconds_per_char": total_duration / gs_len,
            }
        )
    return rows


def _simulated_cell(tmp_path, structure: TaskStructure, kind: SegmentKind, workers: int, profile):
    """One campaign cell: (structure, kind, image); returns its score rows."""
    from PIL import Image

    from conftest import StepClock

    root = tmp_path / f"cell_{structure.value}_{kind.value}"
    clock = StepClock()
    campaign = Campaign(root, clock=clock, seed=1, durable=False)

    img_path = tmp_path / "scan.png"
    if not img_path.exists():
        Image.new("L", (4, 4), 255).save(img_path)
    segments = [attach_image(s, img_path) for s in ingest(_acceptance_corpus(), "acc")]
    campaign.add_segments(segments)
    campaign.add_noisy([corrupt(s, 0.8, seed=9000 + i) for i, s in enumerate(segments)])

    pool = [campaign.noisy[s.id] for s in segments_of_kind(segments, kind)]
    campaign.build_tasks(
        pool, Condition(structure, kind, True), seed=5, redundancy=workers
    )
    key_main = (structure.value, kind.value, True)
    run_workers(campaign, profile, workers=workers, seed=77, worker_prefix="a",
                max_tasks_per_worker=1, within={key_main})
    if structure == TaskStructure.FIND:
        key_fix = (TaskStructure.FIX.value, kind.value, True)
        run_workers(campaign, profile, workers=workers, seed=78, worker_prefix="b",
                    max_tasks_per_worker=1, within={key_fix})
    return _lean_rows(campaign)


def test_criterion_6_direction_of_effect(tmp_path):
    started = time.monotonic()
    workers = 1000
    profile = WorkerProfile()  # the default decaying-attention profile

    def mean(rows, structure, metric):
        values = [r[metric] for r in rows if r["structure"] == structure and metric in r]
        assert values
        return sum(values) / len(values)

    cells = {}
    for kind in (SegmentKind.SENTENCE, SegmentKind.PARAGRAPH, SegmentKind.ARTICLE):
        cells[("proofing", kind)] = _simulated_cell(tmp_path, TaskStructure.PROOFING, kind, workers, profile)
        cells[("findfix", kind)] = _simulated_cell(tmp_path, TaskStructure.FIND, kind, workers, profile)

    proof_rows = [r for k, rows in cells.items() if k[0] == "proofing" for r in rows]
    fix_rows = [r for k, rows in cells.items() if k[0] == "findfix" for r in rows]

    # (a) two-phase beats single-phase on accuracy when the image is shown
    acc_findfix = mean(fix_rows, "fix", "acc_task")
    acc_proofing = mean(proof_rows, "proofing", "acc_task")
    assert acc_findfix >= acc_proofing, (acc_findfix, acc_proofing)

    # (b) articles score below paragraphs for find-fix with image
    acc_article = mean(cells[("findfix", SegmentKind.ARTICLE)], "fix", "acc_task")
    acc_paragraph = mean(cells[("findfix", SegmentKind.PARAGRAPH)], "fix", "acc_task")
    assert acc_article < acc_paragraph, (acc_article, acc_paragraph)

    # (c) single-phase is cheaper per character overall
    spc_proofing = mean(proof_rows, "proofing", "seconds_per_char")
    spc_findfix = mean(fix_rows, "fix", "seconds_per_char")
    assert spc_proofing < spc_findfix, (spc_proofing, spc_findfix)

    elapsed = time.monotonic() - started
    assert elapsed < 300.0, f"simulation took {elapsed:.0f}s"
    _passed(
        6,
        f"{workers} workers/condition: acc findfix {acc_findfix:.3f} >= proofing {acc_proofing:.3f}; "
        f"article {acc_article:.3f} < paragraph {acc_paragraph:.3f}; "
        f"s/char proofing {spc_proofing:.4f} < findfix {spc_findfix:.4f} ({elapsed:.0f}s)",
    )


# --- 7. efficiency arithmetic ------------------------------------------------------------

def test_criterion_7_efficiency_arithmetic():
    report = efficiency_findfix(10.0, 70.0, 100.0, 140.0, 500)
    assert report.seconds_per_char == (60.0 + 40.0) / 500
    assert report.phase_durations == {"find": 60.0, "fix": 40.0}

    offset = 1_700_000_000.0
    shifted = efficiency_findfix(10.0 + offset, 70.0 + offset, 100.0 + 2 * offset, 140.0 + 2 * offset, 500)
    assert shifted.seconds_per_char == report.seconds_per_char

    proofing = efficiency_proofing(0.0, 100.0, 500)
    assert proofing.seconds_per_char == 0.2
    combined = efficiency_findfix(0.0, 60.0, 0.0, 40.0, 500)
    assert combined.seconds_per_char == proofing.seconds_per_char
    _passed(7, "phase-sum arithmetic exact and invariant to clock offset")


# --- 8. pipeline determinism ---------------------------------------------------------------

def test_criterion_8_pipeline_determinism(tmp_path):
    corpus = tmp_path / "corpus.txt"
    corpus.write_text(_acceptance_corpus())

    def run_once(out_dir):
        config = {
            "v": 1,
            "corpus": "corpus.txt",
            "doc_id": "acc",
            "out_dir": out_dir,
            "noise": {"ratio": 0.8, "seed": 42},
            "render_images": False,
            "conditions": ["proofing:paragraph:noimage", "find:sentence:noimage"],
            "redundancy": 2,
            "plan_seed": 7,
            "simulate": {"workers": 6, "seed": 3},
        }
        config_path = tmp_path / f"{out_dir}.json"
        config_path.write_text(json.dumps(config))
        manifest = run_pipeline(config_path)
        hashes = {}
        for name in ("scores.csv", "scores.json", "report_summary.csv", "report_summary.json"):
            hashes[name] = hashlib.sha256((Path(manifest["out_dir"]) / name).read_bytes()).hexdigest()
        return hashes

    first = run_once("det_a")
    second = run_once("det_b")
    assert first == second
    _passed(8, "two pipeline runs with identical config + seeds emit byte-identical reports")
