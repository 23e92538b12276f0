"""``forge`` command line: the pipeline stages plus utilities.

Stages can run one at a time (ingest / corrupt / plan / simulate / score /
report), as a whole from one config file (run), or interactively (serve).
``recommend`` answers strategy queries and ``align`` prints a word
alignment table for debugging.
"""

from __future__ import annotations

import json
import os
import sys
from pathlib import Path

import click

from .campaign import Campaign, Condition
from .corpus import GoldSegment, SegmentKind, ingest as ingest_text
from .errors import ForgeError
from .jsonl import read_jsonl, write_jsonl
from .lexicon import Lexicon, default_lexicon
from .noise import ErrorClass, corrupt
from .pipeline import VirtualClock, run_pipeline, segment_seed
from .reporting import group_rows, score_campaign, write_report, write_scores
from .strategy import Goal, StrategyQuery, recommend as recommend_strategy


@click.group()
def main():
    """Crowdsourced OCR post-correction campaign toolkit."""


@main.command()
@click.argument("file", type=click.Path(exists=True, dir_okay=False))
@click.option("--doc-id", required=True, help="Identifier for the source document.")
@click.option("--article-delim", default=None, help="Regex splitting articles.")
@click.option("--out", required=True, type=click.Path(dir_okay=False), help="Output JSONL path.")
def ingest(file, doc_id, article_delim, out):
    """Segment a UTF-8 text file into sentences, paragraphs, and articles."""
    raw = Path(file).read_text("utf-8")
    kwargs = {"article_delim": article_delim} if article_delim else {}
    segments = ingest_text(raw, doc_id, **kwargs)
    count = write_jsonl(out, (s.to_dict() for s in segments))
    click.echo(f"wrote {count} segments to {out}")


def _parse_weights(spec: str | None):
    if not spec:
        return None
    weights = {}
    for part in spec.split(","):
        name, _, value = part.partition("=")
        weights[ErrorClass(name.strip())] = float(value)
    return weights


@main.command(name="corrupt")
@click.argument("segments", type=click.Path(exists=True, dir_okay=False))
@click.option("--nr", type=float, required=True, help="Noise ratio in (0, 1).")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--weights", default=None, help="Class weights, e.g. realword=1,nonword=2.")
@click.option("--lexicon", "lexicon_path", default=None, type=click.Path(exists=True))
@click.option("--out", required=True, type=click.Path(dir_okay=False))
def corrupt_cmd(segments, nr, seed, weights, lexicon_path, out):
    """Inject synthetic OCR errors into gold segments."""
    lex = Lexicon.from_file(lexicon_path) if lexicon_path else default_lexicon()
    class_weights = _parse_weights(weights)
    noisy = []
    for record in read_jsonl(segments):
        seg = GoldSegment.from_dict(record)
        noisy.append(
            corrupt(seg, nr, seed=segment_seed(seed, seg.id), class_weights=class_weights, lexicon=lex)
        )
    count = write_jsonl(out, (n.to_dict() for n in noisy))
    errors = sum(len(n.errors) for n in noisy)
    click.echo(f"wrote {count} noisy segments ({errors} injected errors) to {out}")


@main.command()
@click.option("--campaign", "campaign_dir", required=True, type=click.Path(file_okay=False))
@click.option("--segments", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--noisy", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--condition", "conditions", multiple=True, required=True,
              help="structure:length:image, e.g. proofing:paragraph:image")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--redundancy", type=int, default=1, show_default=True)
@click.option("--batch-size", "batch_sizes", multiple=True, help="kind=n, e.g. sentence=20")
def plan(campaign_dir, segments, noisy, conditions, seed, redundancy, batch_sizes):
    """Create tasks in a campaign directory for the given conditions."""
    from .noise import NoisySegment

    camp = Campaign(campaign_dir, clock=VirtualClock(), seed=seed)
    if segments:
        camp.add_segments([GoldSegment.from_dict(r) for r in read_jsonl(segments)])
    if noisy:
        camp.add_noisy([NoisySegment.from_dict(r) for r in read_jsonl(noisy)])
    sizes = None
    if batch_sizes:
        sizes = {}
        for part in batch_sizes:
            kind, _, value = part.partition("=")
            sizes[SegmentKind(kind)] = int(value)
    total = 0
    for i, spec in enumerate(conditions):
        condition = Condition.parse(spec)
        pool = [
            camp.noisy[s.id]
            for s in camp.gold.values()
            if s.kind == condition.length and s.id in camp.noisy
        ]
        created = camp.build_tasks(pool, condition, seed=seed + i, batch_sizes=sizes, redundancy=redundancy)
        total += len(created)
    click.echo(f"planned {total} tasks in {campaign_dir}")


@main.command()
@click.option("--campaign", "campaign_dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--port", type=int, default=None, help="Defaults to FORGE_PORT or 8400.")
@click.option("--quota", type=int, default=3, show_default=True, help="Tasks per worker shown in the progress banner.")
@click.option("--ui-dir", type=click.Path(file_okay=False), default=None, help="Static UI bundle to serve at /.")
def serve(campaign_dir, port, quota, ui_dir):
    """Serve the campaign API (and optionally the worker UI) over HTTP."""
    from .service import serve as run_server

    if port is None:
        port = int(os.environ.get("FORGE_PORT", "8400"))
    click.echo(f"serving campaign {campaign_dir} on port {port}")
    run_server(campaign_dir, port=port, worker_quota=quota, ui_dir=ui_dir)


@main.command()
@click.option("--campaign", "campaign_dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--profile", "profile_path", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--workers", type=int, default=10, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def simulate(campaign_dir, profile_path, workers, seed):
    """Run synthetic workers against the campaign's open tasks."""
    from .simworker import WorkerProfile, run_workers

    profile = (
        WorkerProfile.from_dict(json.loads(Path(profile_path).read_text("utf-8")))
        if profile_path
        else WorkerProfile()
    )
    camp = Campaign(campaign_dir, clock=VirtualClock(), seed=seed)
    recorded = run_workers(camp, profile, workers=workers, seed=seed)
    click.echo(f"recorded {recorded} submissions")


@main.command()
@click.option("--campaign", "campaign_dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--out-dir", default=None, type=click.Path(file_okay=False))
def score(campaign_dir, out_dir):
    """Score every submission (accuracy, efficiency, error breakdowns)."""
    camp = Campaign(campaign_dir, clock=VirtualClock())
    rows = score_campaign(camp)
    paths = write_scores(rows, out_dir or campaign_dir)
    click.echo(f"scored {len(rows)} submissions -> {paths[0]}")


@main.command()
@click.option("--campaign", "campaign_dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--out-dir", default=None, type=click.Path(file_okay=False))
def report(campaign_dir, out_dir):
    """Emit per-condition grouped summary tables (CSV + JSON)."""
    camp = Campaign(campaign_dir, clock=VirtualClock())
    rows = score_campaign(camp)
    summaries = group_rows(rows) if rows else []
    paths = write_report(summaries, out_dir or campaign_dir)
    click.echo(f"wrote {len(summaries)} condition groups -> {paths[0]}")


@main.command()
@click.option("--campaign", "campaign_dir", required=True, type=click.Path(exists=True, file_okay=False))
@click.option("--format", "fmt", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("--out", default="-", help="Output path, or - for stdout.")
def export(campaign_dir, fmt, out):
    """Dump recorded submissions (task, worker, payload, timestamps)."""
    import csv as csv_mod
    import io

    camp = Campaign(campaign_dir, clock=VirtualClock())
    subs = [camp.submissions[sid].to_dict() for sid in sorted(camp.submissions)]
    if fmt == "json":
        rendered = json.dumps(subs, indent=1, sort_keys=True) + "\n"
    else:
        buffer = io.StringIO()
        writer = csv_mod.writer(buffer)
        writer.writerow(["submission_id", "task_id", "worker_id", "payload_type", "issued_at", "received_at", "payload"])
        for sub in subs:
            writer.writerow([
                sub["submission_id"], sub["task_id"], sub["worker_id"],
                sub["payload"]["type"], sub["issued_at"], sub["received_at"],
                json.dumps(sub["payload"], sort_keys=True),
            ])
        rendered = buffer.getvalue()
    if out == "-":
        click.echo(rendered, nl=False)
    else:
        Path(out).write_text(rendered, encoding="utf-8")
        click.echo(f"exported {len(subs)} submissions to {out}")


@main.command()
@click.option("--goal", type=click.Choice([g.value for g in Goal]), required=True)
@click.option("--image", type=click.Choice(["yes", "no"]), required=True)
@click.option("--length", type=click.Choice([k.value for k in SegmentKind]), required=True)
@click.option("--splittable", type=click.Choice(["yes", "no"]), default="no", show_default=True)
def recommend(goal, image, length, splittable):
    """Recommend a task configuration for a campaign goal."""
    query = StrategyQuery(
        goal=Goal(goal),
        image_available=image == "yes",
        length=SegmentKind(length),
        article_splittable=splittable == "yes",
    )
    click.echo(json.dumps(recommend_strategy(query).to_dict(), indent=2))


@main.command()
@click.option("--gs", "gs_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--other", "other_path", required=True, type=click.Path(exists=True, dir_okay=False))
def align(gs_path, other_path):
    """Print the word alignment table between two text files."""
    from .align import word_align

    gs_words = Path(gs_path).read_text("utf-8").split()
    other_words = Path(other_path).read_text("utf-8").split()
    alignment = word_align(gs_words, other_words)
    click.echo(alignment.table())
    click.echo(f"score={alignment.score} error_slots={sorted(alignment.ocre_slots)}")


@main.command()
@click.option("--campaign", "campaign_dir", required=True, type=click.Path(exists=True, file_okay=False))
def status(campaign_dir):
    """Show campaign counts (segments, tasks by status, submissions)."""
    camp = Campaign(campaign_dir, clock=VirtualClock())
    click.echo(json.dumps(camp.status_summary(), indent=2, sort_keys=True))


@main.command()
@click.argument("config", type=click.Path(exists=True, dir_okay=False))
def run(config):
    """Run the full offline pipeline from a declarative config file."""
    try:
        manifest = run_pipeline(config)
    except ForgeError as exc:
        click.echo(f"pipeline failed: {exc}", err=True)
        sys.exit(2)
    click.echo(json.dumps(manifest, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
