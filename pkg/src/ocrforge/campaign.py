"""Campaign state: task assembly, assignment, and submission recording.

All mutations append to a newline-delimited JSON event log and update an
in-memory index; replaying the log from disk reconstructs the exact same
state, which makes campaigns crash-safe, diffable, and portable. The three
event types are TaskCreated, TaskAssigned, and SubmissionRecorded, each
carrying a schema version.

The coordinator is a single writer: assignment and recording go through one
Campaign instance. Submissions are idempotent -- resending an identical
payload returns the original submission id.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, replace
from enum import Enum
from pathlib import Path

from .corpus import GoldSegment, SegmentKind
from .errors import (
    DuplicateSubmission,
    EmptySegmentList,
    ImageUnavailable,
    NoTasksAvailable,
    PayloadMismatch,
    TaskAlreadyHeld,
    UnknownTask,
    WrongWorker,
)
from .jsonl import read_jsonl, write_jsonl
from .noise import NoisySegment
from .rng import SplitMix64

SCHEMA_VERSION = 1
EVENTS_FILE = "events.ndjson"
SEGMENTS_FILE = "segments.jsonl"
NOISY_FILE = "noisy.jsonl"

DEFAULT_BATCH_SIZES = {
    SegmentKind.ARTICLE: 3,
    SegmentKind.PARAGRAPH: 3,
    SegmentKind.SENTENCE: 20,
}


class TaskStructure(str, Enum):
    PROOFING = "proofing"
    FIND = "find"
    FIX = "fix"


class TaskStatus(str, Enum):
    OPEN = "open"
    ASSIGNED = "assigned"
    SUBMITTED = "submitted"


@dataclass(frozen=True)
class Condition:
    structure: TaskStructure
    length: SegmentKind
    show_image: bool

    @classmethod
    def parse(cls, text: str) -> "Condition":
        """Parse "proofing:paragraph:image" / "find:sentence:noimage"."""
        structure, length, image = text.split(":")
        if image not in ("image", "noimage"):
            raise ValueError(f"image flag must be 'image' or 'noimage', got {image!r}")
        return cls(TaskStructure(structure), SegmentKind(length), image == "image")

    def key(self) -> tuple:
        return (self.structure.value, self.length.value, self.show_image)


@dataclass(frozen=True)
class TaskSpec:
    task_id: str
    structure: TaskStructure
    show_image: bool
    length: SegmentKind
    segment_ids: tuple[str, ...]
    batch_size: int
    origin_find_task: str | None = None
    origin_find_submission: str | None = None
    editable_spans: dict | None = None  # segment_id -> [token indices], Fix only
    status: TaskStatus = TaskStatus.OPEN
    assigned_to: str | None = None
    issued_at: float | None = None

    def condition(self) -> Condition:
        return Condition(self.structure, self.length, self.show_image)

    def to_dict(self) -> dict:
        return {
            "task_id": self.task_id,
            "structure": self.structure.value,
            "show_image": self.show_image,
            "length": self.length.value,
            "segment_ids": list(self.segment_ids),
            "batch_size": self.batch_size,
            "origin_find_task": self.origin_find_task,
            "origin_find_submission": self.origin_find_submission,
            "editable_spans": self.editable_spans,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "TaskSpec":
        return cls(
            task_id=d["task_id"],
            structure=TaskStructure(d["structure"]),
            show_image=d["show_image"],
            length=SegmentKind(d["length"]),
            segment_ids=tuple(d["segment_ids"]),
            batch_size=d["batch_size"],
            origin_find_task=d.get("origin_find_task"),
            origin_find_submission=d.get("origin_find_submission"),
            editable_spans=d.get("editable_spans"),
        )


# --- payloads ------------------------------------------------------------------

@dataclass(frozen=True)
class ProofPayload:
    """Full edited text per segment."""

    texts: dict  # segment_id -> edited text

    kind = "proof"

    def to_dict(self) -> dict:
        return {"type": self.kind, "texts": dict(self.texts)}


@dataclass(frozen=True)
class FindPayload:
    """Marked word selections per segment: [{"index", "token"}, ...]."""

    selections: dict

    kind = "find"

    def to_dict(self) -> dict:
        return {"type": self.kind, "selections": {k: list(v) for k, v in self.selections.items()}}


@dataclass(frozen=True)
class FixPayload:
    """Edits at marked spans per segment: [{"index", "replacement"}, ...]."""

    edits: dict

    kind = "fix"

    def to_dict(self) -> dict:
        return {"type": self.kind, "edits": {k: list(v) for k, v in self.edits.items()}}


_PAYLOAD_FOR_STRUCTURE = {
    TaskStructure.PROOFING: "proof",
    TaskStructure.FIND: "find",
    TaskStructure.FIX: "fix",
}


def payload_from_dict(d: dict):
    kind = d.get("type")
    if kind == "proof":
        return ProofPayload(texts=dict(d["texts"]))
    if kind == "find":
        return FindPayload(selections={k: list(v) for k, v in d["selections"].items()})
    if kind == "fix":
        return FixPayload(edits={k: list(v) for k, v in d["edits"].items()})
    raise PayloadMismatch(f"unknown payload type {kind!r}")


@dataclass(frozen=True)
class Submission:
    submission_id: str
    task_id: str
    worker_id: str
    payload: ProofPayload | FindPayload | FixPayload
    issued_at: float
    received_at: float

    def to_dict(self) -> dict:
        return {
            "submission_id": self.submission_id,
            "task_id": self.task_id,
            "worker_id": self.worker_id,
            "payload": self.payload.to_dict(),
            "issued_at": self.issued_at,
            "received_at": self.received_at,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Submission":
        return cls(
            submission_id=d["submission_id"],
            task_id=d["task_id"],
            worker_id=d["worker_id"],
            payload=payload_from_dict(d["payload"]),
            issued_at=d["issued_at"],
            received_at=d["received_at"],
        )


def _payload_fingerprint(payload) -> str:
    return json.dumps(payload.to_dict(), sort_keys=True)


def apply_fix_edits(noisy_text: str, edits: list[dict]) -> str:
    """Reconstruct the corrected text a fix submission describes.

    Each edit replaces one whitespace token of the noisy text by index. An
    empty replacement deletes the token together with one adjacent
    whitespace run, so clearing the second fragment of a broken token
    leaves no hole. This is the canonical server-side reconstruction; the
    worker UI mirrors it.
    """
    spans = []
    i = 0
    while i < len(noisy_text):
        if noisy_text[i].isspace():
            i += 1
            continue
        j = i
        while j < len(noisy_text) and not noisy_text[j].isspace():
            j += 1
        spans.append((i, j))
        i = j
    text = noisy_text
    for edit in sorted(edits, key=lambda e: e["index"], reverse=True):
        idx = edit["index"]
        if not (0 <= idx < len(spans)):
            raise PayloadMismatch(f"edit index {idx} out of range")
        start, end = spans[idx]
        replacement = edit["replacement"]
        if replacement == "":
            if idx > 0:
                start = spans[idx - 1][1]
            elif idx + 1 < len(spans):
                end = spans[idx + 1][0]
            text = text[:start] + text[end:]
        else:
            text = text[:start] + replacement + text[end:]
    return text


class Campaign:
    """Single-writer coordinator over one campaign directory."""

    def __init__(self, root: str | Path, clock=time.time, seed: int = 0, durable: bool = True):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)
        self.clock = clock
        self.durable = durable
        self._log_handle = None
        self.gold: dict[str, GoldSegment] = {}
        self.noisy: dict[str, NoisySegment] = {}
        self.tasks: dict[str, TaskSpec] = {}
        self.submissions: dict[str, Submission] = {}
        self._by_fingerprint: dict[tuple, str] = {}
        self._task_counter = 0
        self._submission_counter = 0
        self._rng = SplitMix64(seed).derive(0xA551)
        # indexes kept in lockstep with the event log; pool lists use
        # swap-remove so their order is a pure function of the event order
        self._open_by_condition: dict[tuple, list[str]] = {}
        self._open_pos: dict[str, tuple[tuple, int]] = {}
        self._held_by_worker: dict[str, str] = {}
        self._done_by_worker: dict[str, set[tuple]] = {}
        self._finds_by_worker: dict[str, set[str]] = {}
        self._load()

    # --- persistence ---------------------------------------------------------

    @property
    def events_path(self) -> Path:
        return self.root / EVENTS_FILE

    def _load(self) -> None:
        seg_path = self.root / SEGMENTS_FILE
        if seg_path.exists():
            for record in read_jsonl(seg_path):
                seg = GoldSegment.from_dict(record)
                self.gold[seg.id] = seg
        noisy_path = self.root / NOISY_FILE
        if noisy_path.exists():
            for record in read_jsonl(noisy_path):
                ns = NoisySegment.from_dict(record)
                self.noisy[ns.segment_id] = ns
        if self.events_path.exists():
            for event in read_jsonl(self.events_path):
                self._apply(event)

    def _append(self, event_type: str, data: dict) -> None:
        import os

        event = {"v": SCHEMA_VERSION, "type": event_type, "data": data}
        self._apply(event)
        if self._log_handle is None:
            self._log_handle = open(self.events_path, "a", encoding="utf-8")
        self._log_handle.write(json.dumps(event, ensure_ascii=False, sort_keys=True))
        self._log_handle.write("\n")
        self._log_handle.flush()
        if self.durable:
            os.fsync(self._log_handle.fileno())

    def _apply(self, event: dict) -> None:
        data = event["data"]
        if event["type"] == "TaskCreated":
            task = TaskSpec.from_dict(data)
            self.tasks[task.task_id] = task
            self._task_counter = max(self._task_counter, int(task.task_id.split(":")[1]) + 1)
            key = task.condition().key()
            pool = self._open_by_condition.setdefault(key, [])
            self._open_pos[task.task_id] = (key, len(pool))
            pool.append(task.task_id)
        elif event["type"] == "TaskAssigned":
            task = self.tasks[data["task_id"]]
            self.tasks[task.task_id] = replace(
                task,
                status=TaskStatus.ASSIGNED,
                assigned_to=data["worker_id"],
                issued_at=data["issued_at"],
            )
            self._pool_remove(task.task_id)
            self._held_by_worker[data["worker_id"]] = task.task_id
        elif event["type"] == "SubmissionRecorded":
            sub = Submission.from_dict(data)
            self.submissions[sub.submission_id] = sub
            self._by_fingerprint[
                (sub.task_id, sub.worker_id, _payload_fingerprint(sub.payload))
            ] = sub.submission_id
            task = self.tasks[sub.task_id]
            self.tasks[task.task_id] = replace(task, status=TaskStatus.SUBMITTED)
            self._submission_counter = max(
                self._submission_counter, int(sub.submission_id.split(":")[1]) + 1
            )
            if self._held_by_worker.get(sub.worker_id) == sub.task_id:
                del self._held_by_worker[sub.worker_id]
            self._done_by_worker.setdefault(sub.worker_id, set()).add(task.condition().key())
            if isinstance(sub.payload, FindPayload):
                self._finds_by_worker.setdefault(sub.worker_id, set()).add(sub.submission_id)
        else:
            raise ValueError(f"unknown event type {event['type']!r}")

    def _pool_remove(self, task_id: str) -> None:
        if task_id not in self._open_pos:
            return
        key, pos = self._open_pos.pop(task_id)
        pool = self._open_by_condition[key]
        last = pool.pop()
        if last != task_id:
            pool[pos] = last
            self._open_pos[last] = (key, pos)

    # --- segment plumbing ------------------------------------------------------

    def add_segments(self, segments: list[GoldSegment]) -> None:
        for seg in segments:
            self.gold[seg.id] = seg
        write_jsonl(self.root / SEGMENTS_FILE, (s.to_dict() for s in sorted(self.gold.values(), key=lambda s: s.id)))

    def add_noisy(self, noisy: list[NoisySegment]) -> None:
        for ns in noisy:
            self.noisy[ns.segment_id] = ns
        write_jsonl(self.root / NOISY_FILE, (n.to_dict() for n in sorted(self.noisy.values(), key=lambda n: n.segment_id)))

    def resolve_noisy(self, task: TaskSpec) -> list[NoisySegment]:
        return [self.noisy[sid] for sid in task.segment_ids]

    # --- task building -----------------------------------------------------------

    def build_tasks(
        self,
        noisy: list[NoisySegment],
        condition: Condition,
        seed: int,
        batch_sizes: dict | None = None,
        redundancy: int = 1,
    ) -> list[TaskSpec]:
        """Batch noisy segments into tasks for one experimental condition.

        Batching is a seeded shuffle followed by chunking, so task
        composition is deterministic per seed. With redundancy > 1 each
        batch is issued that many times as independent tasks.
        """
        if not noisy:
            raise EmptySegmentList("no segments to batch")
        if condition.structure == TaskStructure.FIX:
            raise ValueError("fix tasks are derived from find submissions, not built")
        for ns in noisy:
            gold = self.gold.get(ns.segment_id)
            if gold is None:
                raise UnknownTask(f"segment {ns.segment_id} not in campaign")
            if gold.kind != condition.length:
                raise ValueError(
                    f"segment {ns.segment_id} is a {gold.kind.value}, condition wants {condition.length.value}"
                )
            if condition.show_image and not gold.image_ref:
                raise ImageUnavailable(f"segment {ns.segment_id} has no image")

        sizes = batch_sizes or DEFAULT_BATCH_SIZES
        batch_size = sizes[condition.length]
        order = list(noisy)
        SplitMix64(seed).shuffle(order)

        created = []
        for at in range(0, len(order), batch_size):
            chunk = order[at:at + batch_size]
            for _ in range(redundancy):
                task = TaskSpec(
                    task_id=f"task:{self._task_counter:05d}",
                    structure=condition.structure,
                    show_image=condition.show_image,
                    length=condition.length,
                    segment_ids=tuple(ns.segment_id for ns in chunk),
                    batch_size=batch_size,
                )
                self._task_counter += 1
                self._append("TaskCreated", task.to_dict())
                created.append(self.tasks[task.task_id])
        return created

    def derive_fix_tasks(self, find_submission: Submission) -> list[TaskSpec]:
        """Spawn the fix-stage task carrying one find submission's marks.

        A find submission with no selections still produces a fix task with
        zero editable spans; it records a trivial completion.
        """
        if not isinstance(find_submission.payload, FindPayload):
            raise PayloadMismatch("fix tasks derive from find submissions only")
        origin = self.tasks[find_submission.task_id]
        spans = {
            sid: sorted(mark["index"] for mark in marks)
            for sid, marks in find_submission.payload.selections.items()
        }
        task = TaskSpec(
            task_id=f"task:{self._task_counter:05d}",
            structure=TaskStructure.FIX,
            show_image=origin.show_image,
            length=origin.length,
            segment_ids=origin.segment_ids,
            batch_size=origin.batch_size,
            origin_find_task=origin.task_id,
            origin_find_submission=find_submission.submission_id,
            editable_spans=spans,
        )
        self._task_counter += 1
        self._append("TaskCreated", task.to_dict())
        return [self.tasks[task.task_id]]

    # --- assignment ---------------------------------------------------------------

    def assign_next(self, worker_id: str, within: set | None = None) -> TaskSpec:
        """Assign a uniformly random open task from an unvisited condition.

        A worker never receives the fix task derived from their own find
        submission, and holds at most one unsubmitted task at a time.
        ``within`` optionally restricts the draw to a set of condition keys
        (used by scripted drivers; the public API always draws from all).
        """
        held = self._held_by_worker.get(worker_id)
        if held is not None:
            raise TaskAlreadyHeld(held)
        done = self._done_by_worker.get(worker_id, set())
        own_finds = self._finds_by_worker.get(worker_id, set())

        def eligible(task_id: str) -> bool:
            origin = self.tasks[task_id].origin_find_submission
            return not (origin and origin in own_finds)

        keys = sorted(
            key
            for key, pool in self._open_by_condition.items()
            if pool and key not in done and (within is None or key in within)
        )
        task_id = None
        if keys:
            key = keys[self._rng.randrange(len(keys))]
            pool = self._open_by_condition[key]
            if not own_finds:
                task_id = pool[self._rng.randrange(len(pool))]
            else:
                candidates = [tid for tid in pool if eligible(tid)]
                if candidates:
                    task_id = candidates[self._rng.randrange(len(candidates))]
                else:
                    # the drawn condition only holds this worker's own fix
                    # tasks; fall back to a full filter across conditions
                    filtered = {
                        k: [tid for tid in p if eligible(tid)]
                        for k, p in self._open_by_condition.items()
                        if p and k not in done and (within is None or k in within)
                    }
                    filtered = {k: v for k, v in filtered.items() if v}
                    if filtered:
                        keys = sorted(filtered)
                        key = keys[self._rng.randrange(len(keys))]
                        task_id = filtered[key][self._rng.randrange(len(filtered[key]))]
        if task_id is None:
            raise NoTasksAvailable(worker_id)
        task = self.tasks[task_id]
        self._append(
            "TaskAssigned",
            {"task_id": task.task_id, "worker_id": worker_id, "issued_at": self.clock()},
        )
        return self.tasks[task.task_id]

    # --- submissions -----------------------------------------------------------------

    def record_submission(
        self,
        task_id: str,
        worker_id: str,
        payload: ProofPayload | FindPayload | FixPayload,
        received_at: float | None = None,
    ) -> Submission:
        """Durably record a submission; idempotent on identical resend.

        Find submissions immediately spawn their fix task. ``received_at``
        defaults to the campaign clock (server-side stamping).
        """
        task = self.tasks.get(task_id)
        if task is None:
            raise UnknownTask(task_id)
        fingerprint = (task_id, worker_id, _payload_fingerprint(payload))
        if fingerprint in self._by_fingerprint:
            return self.submissions[self._by_fingerprint[fingerprint]]
        if task.assigned_to != worker_id:
            raise WrongWorker(f"task {task_id} is not assigned to {worker_id}")
        if task.status == TaskStatus.SUBMITTED:
            raise DuplicateSubmission(task_id)
        if payload.kind != _PAYLOAD_FOR_STRUCTURE[task.structure]:
            raise PayloadMismatch(
                f"{task.structure.value} task cannot accept a {payload.kind} payload"
            )
        self._validate_payload(task, payload)
        sub = Submission(
            submission_id=f"sub:{self._submission_counter:05d}",
            task_id=task_id,
            worker_id=worker_id,
            payload=payload,
            issued_at=task.issued_at if task.issued_at is not None else 0.0,
            received_at=self.clock() if received_at is None else received_at,
        )
        self._submission_counter += 1
        self._append("SubmissionRecorded", sub.to_dict())
        if isinstance(payload, FindPayload):
            self.derive_fix_tasks(sub)
        return sub

    def _validate_payload(self, task: TaskSpec, payload) -> None:
        ids = set(task.segment_ids)
        if isinstance(payload, ProofPayload):
            keys = set(payload.texts)
        elif isinstance(payload, FindPayload):
            keys = set(payload.selections)
            for sid, marks in payload.selections.items():
                tokens = self.noisy[sid].noisy_text.split() if sid in self.noisy else []
                for mark in marks:
                    if not (0 <= mark["index"] < len(tokens)):
                        raise PayloadMismatch(
                            f"selection index {mark['index']} out of range for segment {sid}"
                        )
        else:
            keys = set(payload.edits)
            allowed = task.editable_spans or {}
            for sid, edits in payload.edits.items():
                span_ids = set(allowed.get(sid, []))
                for edit in edits:
                    if edit["index"] not in span_ids:
                        raise PayloadMismatch(
                            f"edit at token {edit['index']} outside editable spans of {sid}"
                        )
        if not keys <= ids:
            raise PayloadMismatch(f"payload covers unknown segments {sorted(keys - ids)}")

    # --- reporting helpers --------------------------------------------------------------

    def open_tasks(self) -> list[TaskSpec]:
        return [t for t in self.tasks.values() if t.status == TaskStatus.OPEN]

    def submission_count_for(self, worker_id: str) -> int:
        return sum(1 for s in self.submissions.values() if s.worker_id == worker_id)

    def status_summary(self) -> dict:
        by_status: dict[str, int] = {}
        for task in self.tasks.values():
            by_status[task.status.value] = by_status.get(task.status.value, 0) + 1
        return {
            "segments": len(self.gold),
            "noisy_segments": len(self.noisy),
            "tasks": by_status,
            "submissions": len(self.submissions),
        }
