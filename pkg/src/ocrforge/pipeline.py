"""Declarative campaign pipeline: one config file, idempotent stages.

A campaign is described by a single JSON config rather than flag soup, so a
run is a reproducible artifact. Stages execute in order -- ingest, corrupt,
plan, simulate, score, report -- and each stage skips itself when its output
already exists, which makes interrupted runs resumable and re-runs
idempotent. All randomness is seeded from the config; the campaign clock is
virtual (starts at zero), so two runs of the same config produce
byte-identical artifacts.

Config schema (all paths relative to the config file):

    {
      "v": 1,
      "corpus": "corpus.txt",
      "doc_id": "doc",
      "article_delim": "...",            // optional regex
      "out_dir": "campaign",
      "noise": {"ratio": 0.8, "seed": 42, "class_weights": {"nonword": 2.0}},
      "render_images": true,             // stand-in scans where needed
      "conditions": ["proofing:paragraph:image", "find:paragraph:image"],
      "strategy": {                      // optional: derive the condition
        "goal": "accuracy", "image_available": true,
        "length": "article", "article_splittable": true
      },
      "batch_sizes": {"article": 3, "paragraph": 3, "sentence": 20},
      "redundancy": 1,
      "plan_seed": 7,
      "simulate": {"workers": 10, "seed": 1, "profile": { ... }}
    }
"""

from __future__ import annotations

import json
import zlib
from pathlib import Path

from .campaign import Campaign, Condition, TaskStructure
from .corpus import (
    GoldSegment,
    SegmentKind,
    ingest,
    render_stand_in_image,
    segments_of_kind,
)
from .errors import ConfigError
from .jsonl import read_jsonl, write_jsonl
from .lexicon import Lexicon, default_lexicon
from .noise import ErrorClass, corrupt
from .reporting import group_rows, score_campaign, write_report, write_scores
from .rng import SplitMix64
from .simworker import WorkerProfile, run_workers
from .strategy import Goal, Segmentation, StrategyQuery, Structure, recommend


class VirtualClock:
    """Deterministic campaign clock starting at zero."""

    def __init__(self):
        self.now = 0.0

    def __call__(self):
        return self.now

    def advance(self, seconds):
        self.now += seconds
        return self.now


def load_config(path: str | Path) -> dict:
    path = Path(path)
    try:
        config = json.loads(path.read_text("utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    for field in ("corpus", "out_dir", "noise"):
        if field not in config:
            raise ConfigError(f"config is missing required field {field!r}")
    if "conditions" not in config and "strategy" not in config:
        raise ConfigError("config needs either 'conditions' or 'strategy'")
    config["_base"] = path.parent
    return config


def _out_dir(config: dict) -> Path:
    return (config["_base"] / config["out_dir"]).resolve()


def segment_seed(base_seed: int, segment_id: str) -> int:
    """Per-segment corruption seed, stable in the segment id."""
    return SplitMix64(base_seed).derive(zlib.crc32(segment_id.encode("utf-8"))).next_u64()


def condition_from_strategy(config: dict) -> tuple[Condition, dict]:
    """Resolve the planning condition from a strategy query."""
    spec = config["strategy"]
    query = StrategyQuery(
        goal=Goal(spec["goal"]),
        image_available=bool(spec["image_available"]),
        length=SegmentKind(spec["length"]),
        article_splittable=bool(spec.get("article_splittable", False)),
    )
    rec = recommend(query)
    length = query.length
    if rec.segmentation == Segmentation.SPLIT_TO_PARAGRAPHS:
        length = SegmentKind.PARAGRAPH
    structure = (
        TaskStructure.PROOFING if rec.structure == Structure.PROOFING else TaskStructure.FIND
    )
    return Condition(structure, length, rec.show_image), rec.to_dict()


def stage_ingest(config: dict) -> Path:
    out = _out_dir(config)
    out.mkdir(parents=True, exist_ok=True)
    target = out / "segments.jsonl"
    if target.exists():
        return target
    corpus_path = config["_base"] / config["corpus"]
    raw = Path(corpus_path).read_text("utf-8")
    kwargs = {}
    if config.get("article_delim"):
        kwargs["article_delim"] = config["article_delim"]
    segments = ingest(raw, config.get("doc_id", Path(config["corpus"]).stem), **kwargs)
    write_jsonl(target, (s.to_dict() for s in segments))
    return target


def parse_class_weights(spec: dict | None) -> dict | None:
    if not spec:
        return None
    return {ErrorClass(k): float(v) for k, v in spec.items()}


def stage_corrupt(config: dict) -> Path:
    out = _out_dir(config)
    target = out / "noisy.jsonl"
    if target.exists():
        return target
    noise_conf = config["noise"]
    ratio = float(noise_conf["ratio"])
    base_seed = int(noise_conf.get("seed", 0))
    weights = parse_class_weights(noise_conf.get("class_weights"))
    lexicon = (
        Lexicon.from_file(config["_base"] / noise_conf["lexicon"])
        if noise_conf.get("lexicon")
        else default_lexicon()
    )
    noisy = []
    for record in read_jsonl(out / "segments.jsonl"):
        seg = GoldSegment.from_dict(record)
        noisy.append(
            corrupt(
                seg,
                ratio,
                seed=segment_seed(base_seed, seg.id),
                class_weights=weights,
                lexicon=lexicon,
            )
        )
    write_jsonl(target, (n.to_dict() for n in noisy))
    return target


def _planning_conditions(config: dict) -> tuple[list[Condition], dict | None]:
    if "strategy" in config:
        condition, rec = condition_from_strategy(config)
        return [condition], rec
    return [Condition.parse(c) for c in config["conditions"]], None


def open_campaign(config: dict) -> Campaign:
    return Campaign(_out_dir(config), clock=VirtualClock(), seed=int(config.get("plan_seed", 0)))


def stage_plan(config: dict) -> Campaign:
    campaign = open_campaign(config)
    conditions, recommendation = _planning_conditions(config)
    if recommendation is not None:
        rec_path = _out_dir(config) / "recommendation.json"
        if not rec_path.exists():
            rec_path.write_text(json.dumps(recommendation, indent=1, sort_keys=True) + "\n")
    if campaign.tasks:
        return campaign  # already planned

    segments = [GoldSegment.from_dict(r) for r in read_jsonl(_out_dir(config) / "segments.jsonl")]
    needs_image = any(c.show_image for c in conditions)
    if needs_image and config.get("render_images", True):
        image_dir = _out_dir(config) / "images"
        rendered = []
        for seg in segments:
            rendered.append(
                seg if seg.image_ref else render_stand_in_image(seg, image_dir)
            )
        segments = rendered
    campaign.add_segments(segments)
    from .noise import NoisySegment

    campaign.add_noisy([NoisySegment.from_dict(r) for r in read_jsonl(_out_dir(config) / "noisy.jsonl")])

    batch_sizes = None
    if config.get("batch_sizes"):
        batch_sizes = {SegmentKind(k): int(v) for k, v in config["batch_sizes"].items()}
    for i, condition in enumerate(conditions):
        pool = [
            campaign.noisy[s.id]
            for s in segments_of_kind(segments, condition.length)
        ]
        campaign.build_tasks(
            pool,
            condition,
            seed=int(config.get("plan_seed", 0)) + i,
            batch_sizes=batch_sizes,
            redundancy=int(config.get("redundancy", 1)),
        )
    return campaign


def stage_simulate(config: dict, campaign: Campaign) -> int:
    sim = config.get("simulate")
    if not sim:
        return 0
    if campaign.submissions:
        return 0  # already simulated
    profile_spec = sim.get("profile")
    if isinstance(profile_spec, str):
        profile = WorkerProfile.from_dict(
            json.loads((config["_base"] / profile_spec).read_text("utf-8"))
        )
    elif isinstance(profile_spec, dict):
        profile = WorkerProfile.from_dict(profile_spec)
    else:
        profile = WorkerProfile()
    return run_workers(
        campaign,
        profile,
        workers=int(sim.get("workers", 1)),
        seed=int(sim.get("seed", 0)),
    )


def stage_score(config: dict, campaign: Campaign) -> list[dict]:
    out = _out_dir(config)
    target = out / "scores.json"
    if target.exists():
        return json.loads(target.read_text("utf-8"))
    rows = score_campaign(campaign)
    write_scores(rows, out)
    return rows


def stage_report(config: dict, rows: list[dict]) -> list[Path]:
    out = _out_dir(config)
    target = out / "report_summary.json"
    if target.exists():
        return [out / "report_summary.csv", target]
    summaries = group_rows(rows) if rows else []
    return write_report(summaries, out)


def run_pipeline(config_path: str | Path) -> dict:
    """Execute every offline stage; returns a manifest of artifacts."""
    config = load_config(config_path)
    stage_ingest(config)
    stage_corrupt(config)
    campaign = stage_plan(config)
    stage_simulate(config, campaign)
    rows = stage_score(config, campaign)
    stage_report(config, rows)
    out = _out_dir(config)
    return {
        "out_dir": str(out),
        "segments": str(out / "segments.jsonl"),
        "noisy": str(out / "noisy.jsonl"),
        "events": str(out / "events.ndjson"),
        "scores": str(out / "scores.csv"),
        "report": str(out / "report_summary.csv"),
        "submissions": len(campaign.submissions),
        "tasks": len(campaign.tasks),
    }
