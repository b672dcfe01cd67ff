"""Serve the graphs directory and hit the read-only API like the UI does.

Boots the HTTP service on a local port in a background thread, queries
the three endpoints (task list, full graph with ETag caching, clip
resolution), then shuts down.  `vmx serve --graphs demo_workspace/graphs`
runs the same app in the foreground.

Run 02_run_pipeline.py first, then:
    python demos/04_serve_and_query.py
"""

import threading
import time
from pathlib import Path

import httpx
import uvicorn

from vmx.service import create_app

app = create_app(Path("demo_workspace/graphs"))
config = uvicorn.Config(app, host="127.0.0.1", port=8901, log_level="warning")
server = uvicorn.Server(config)
thread = threading.Thread(target=server.run, daemon=True)
thread.start()
while not server.started:
    time.sleep(0.05)

base = "http://127.0.0.1:8901"
with httpx.Client(base_url=base) as client:
    tasks = client.get("/api/tasks").json()
    print("tasks:", tasks)

    slug = tasks[0]["slug"]
    first = client.get(f"/api/tasks/{slug}/graph")
    etag = first.headers["etag"]
    print(f"\ngraph fetch: {first.status_code}, {len(first.content)} bytes, etag {etag[:18]}...")

    # the UI revalidates with If-None-Match and normally gets a free 304
    cached = client.get(f"/api/tasks/{slug}/graph", headers={"If-None-Match": etag})
    print("revalidation status:", cached.status_code)

    # clip resolution: the player asks for playback bounds by video + span
    graph = first.json()
    clip = graph["outcome_clusters"][0]["approaches"][0]["steps"][0]["methods"][0]["clips"][0]
    resolved = client.get(
        f"/api/clips/{clip['video_id']}",
        params={"start_s": clip["start_s"], "end_s": clip["end_s"]},
    ).json()
    print("\nclip resolution:", resolved)

    bad = client.get(f"/api/clips/{clip['video_id']}", params={"start_s": 9, "end_s": 4})
    print("inverted range status:", bad.status_code)

server.should_exit = True
thread.join(timeout=5)
print("\nserver stopped")
