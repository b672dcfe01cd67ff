"""Read-only HTTP API over persisted task graphs.

Stateless over immutable graph files loaded at startup: task listing,
full-graph retrieval (ETag cached) and clip resolution for the player.
Pipeline runs happen via the CLI, never over HTTP.
"""

from __future__ import annotations

import hashlib
import logging
from pathlib import Path

from fastapi import FastAPI, HTTPException, Request, Response
from fastapi.middleware.cors import CORSMiddleware

from . import graph as graph_store

log = logging.getLogger(__name__)


class GraphIndex:
    """All graphs under one directory, keyed by task slug."""

    def __init__(self, graphs_dir: Path):
        self.graphs_dir = Path(graphs_dir)
        self.graphs: dict[str, graph_store.TaskGraph] = {}
        self.bytes: dict[str, bytes] = {}
        self.etags: dict[str, str] = {}
        self.playback: dict[str, str] = {}
        self.reload()

    def reload(self) -> None:
        self.graphs.clear()
        self.bytes.clear()
        self.etags.clear()
        self.playback.clear()
        if not self.graphs_dir.is_dir():
            return
        for path in sorted(self.graphs_dir.glob("*.json")):
            try:
                g = graph_store.load(path)
            except Exception as exc:
                log.warning("skipping unreadable graph %s: %s", path, exc)
                continue
            slug = graph_store.task_slug(g.task_name)
            data = graph_store.canonical_bytes(g)
            self.graphs[slug] = g
            self.bytes[slug] = data
            self.etags[slug] = '"' + hashlib.sha256(data).hexdigest() + '"'
            for vid, ref in g.pipeline_report.get("videos", {}).items():
                self.playback.setdefault(vid, ref)

    def resolve(self, task: str) -> str | None:
        if task in self.graphs:
            return task
        slug = graph_store.task_slug(task)
        return slug if slug in self.graphs else None

    def find_clip_summary(self, video_id: str, start_s: float, end_s: float) -> str | None:
        for g in self.graphs.values():
            for cluster in g.outcome_clusters:
                for approach in cluster.approaches:
                    for step in approach.steps:
                        for method in step.methods:
                            for clip in method.clips:
                                if (
                                    clip.video_id == video_id
                                    and abs(clip.start_s - start_s) < 0.5
                                    and abs(clip.end_s - end_s) < 0.5
                                ):
                                    return clip.summary
        return None


def create_app(graphs_dir: Path, cors_origins: list[str] | None = None) -> FastAPI:
    index = GraphIndex(graphs_dir)
    app = FastAPI(title="vmx task graphs", version="1.0")
    app.state.index = index
    app.add_middleware(
        CORSMiddleware,
        allow_origins=cors_origins or ["*"],
        allow_methods=["GET"],
        allow_headers=["*"],
    )

    @app.get("/api/tasks")
    def list_tasks():
        entries = []
        for slug in sorted(index.graphs, key=lambda s: index.graphs[s].task_name):
            g = index.graphs[slug]
            entries.append(
                {
                    "task_name": g.task_name,
                    "slug": slug,
                    "outcome_count": len(g.outcome_clusters),
                    "video_count": len(g.pipeline_report.get("videos", {})),
                }
            )
        return entries

    @app.get("/api/tasks/{task}/graph")
    def get_graph(task: str, request: Request):
        slug = index.resolve(task)
        if slug is None:
            raise HTTPException(status_code=404, detail=f"unknown task {task!r}")
        etag = index.etags[slug]
        if request.headers.get("if-none-match") == etag:
            return Response(status_code=304, headers={"ETag": etag})
        return Response(
            content=index.bytes[slug],
            media_type="application/json",
            headers={"ETag": etag},
        )

    @app.get("/api/clips/{video_id}")
    def get_clip(video_id: str, start_s: float, end_s: float):
        if start_s < 0 or start_s >= end_s:
            raise HTTPException(status_code=422, detail="require 0 <= start_s < end_s")
        ref = index.playback.get(video_id)
        if ref is None:
            raise HTTPException(status_code=404, detail=f"unknown video {video_id!r}")
        body = {"playback_ref": ref, "start_s": start_s, "end_s": end_s}
        summary = index.find_clip_summary(video_id, start_s, end_s)
        if summary:
            body["summary"] = summary
        return body

    return app
