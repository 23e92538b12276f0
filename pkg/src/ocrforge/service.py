"""HTTP facade over a campaign: task hand-out, submissions, reports.

Thin JSON-over-HTTP layer for the worker UI and for scripts. All state
changes funnel through the campaign coordinator (single writer), handlers
hold no state of their own, and timing is stamped server-side at issue and
receipt. Every served task document carries ``spellcheck_disabled: true``;
the UI must disable native spell checking on its editable elements so
workers correct what they actually see.
"""

from __future__ import annotations

from pathlib import Path

from fastapi import FastAPI, HTTPException
from fastapi.responses import FileResponse, JSONResponse
from pydantic import BaseModel

from .campaign import Campaign, TaskSpec, payload_from_dict
from .errors import (
    DuplicateSubmission,
    NoTasksAvailable,
    PayloadMismatch,
    TaskAlreadyHeld,
    UnknownTask,
    WrongWorker,
)
from .reporting import group_rows, score_campaign

API_VERSION = 1
DEFAULT_WORKER_QUOTA = 3


class SubmissionBody(BaseModel):
    task_id: str
    worker_id: str
    payload: dict


def task_document(campaign: Campaign, task: TaskSpec, worker_id: str, quota: int) -> dict:
    segments = []
    for sid in task.segment_ids:
        ns = campaign.noisy[sid]
        entry = {"segment_id": sid, "noisy_text": ns.noisy_text}
        if task.show_image:
            entry["image_url"] = f"/api/images/{sid}"
        segments.append(entry)
    doc = {
        "v": API_VERSION,
        "task_id": task.task_id,
        "structure": task.structure.value,
        "show_image": task.show_image,
        "spellcheck_disabled": True,
        "segments": segments,
        "progress": {
            "done": campaign.submission_count_for(worker_id),
            "total": quota,
        },
    }
    if task.editable_spans is not None:
        doc["editable_spans"] = task.editable_spans
    return doc


def create_app(
    campaign: Campaign,
    worker_quota: int = DEFAULT_WORKER_QUOTA,
    ui_dir: str | Path | None = None,
) -> FastAPI:
    app = FastAPI(title="ocrforge campaign service")

    @app.get("/api/tasks/next")
    def next_task(worker: str):
        try:
            task = campaign.assign_next(worker)
        except TaskAlreadyHeld as exc:
            raise HTTPException(status_code=409, detail=f"unsubmitted task held: {exc}")
        except NoTasksAvailable:
            raise HTTPException(status_code=404, detail="no tasks available")
        return task_document(campaign, task, worker, worker_quota)

    @app.post("/api/submissions")
    def submit(body: SubmissionBody):
        try:
            payload = payload_from_dict(body.payload)
            sub = campaign.record_submission(body.task_id, body.worker_id, payload)
        except (PayloadMismatch, KeyError, TypeError) as exc:
            raise HTTPException(status_code=400, detail=str(exc))
        except WrongWorker as exc:
            raise HTTPException(status_code=403, detail=str(exc))
        except UnknownTask as exc:
            raise HTTPException(status_code=404, detail=f"unknown task: {exc}")
        except DuplicateSubmission as exc:
            raise HTTPException(status_code=409, detail=f"task already submitted: {exc}")
        return {
            "v": API_VERSION,
            "submission_id": sub.submission_id,
            "progress": {
                "done": campaign.submission_count_for(body.worker_id),
                "total": worker_quota,
            },
        }

    @app.get("/api/reports/summary")
    def report_summary():
        rows = score_campaign(campaign)
        if not rows:
            raise HTTPException(status_code=404, detail="no scored submissions yet")
        return {"v": API_VERSION, "groups": group_rows(rows)}

    @app.get("/api/images/{segment_id}")
    def image(segment_id: str):
        seg = campaign.gold.get(segment_id)
        if seg is None or not seg.image_ref or not Path(seg.image_ref).is_file():
            raise HTTPException(status_code=404, detail="no image for segment")
        return FileResponse(seg.image_ref)

    if ui_dir is not None:
        ui_path = Path(ui_dir)

        @app.get("/")
        def index():
            index_file = ui_path / "index.html"
            if not index_file.is_file():
                raise HTTPException(status_code=404, detail="UI not built")
            return FileResponse(index_file)

        @app.get("/assets/{name}")
        def asset(name: str):
            target = (ui_path / name).resolve()
            if not str(target).startswith(str(ui_path.resolve())) or not target.is_file():
                raise HTTPException(status_code=404, detail="no such asset")
            return FileResponse(target)

    @app.exception_handler(Exception)
    def unhandled(request, exc):
        return JSONResponse(status_code=500, content={"detail": str(exc)})

    return app


def serve(campaign_dir: str | Path, port: int, worker_quota: int = DEFAULT_WORKER_QUOTA, ui_dir=None):
    """Run the API with uvicorn (blocking)."""
    import uvicorn

    campaign = Campaign(campaign_dir)
    app = create_app(campaign, worker_quota=worker_quota, ui_dir=ui_dir)
    uvicorn.run(app, host="127.0.0.1", port=port)
