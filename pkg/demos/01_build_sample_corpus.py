"""Build the bundled sample corpus and poke at the ingest layer.

Writes a 24-video synthetic "Make Gnocchi" corpus (transcripts, frame
dumps, task manifest) into ./demo_workspace/corpus and shows what the
loader gives you back: validated records, the degraded flag, and
timestamp-windowed frame lookups.

Run:  python demos/01_build_sample_corpus.py
"""

import json
from pathlib import Path

from vmx import sampledata
from vmx.corpus import frames_in_window, load_corpus

workspace = Path("demo_workspace")
manifest_path = sampledata.write_corpus(sampledata.sample_plans(), workspace / "corpus")
print(f"manifest written to {manifest_path}\n")

# The manifest lists one transcript file per video plus an optional frame
# directory; that is the entire ingest contract.
manifest = json.loads(manifest_path.read_text())
print(f"task: {manifest['task_name']}, entries: {len(manifest['videos'])}")
print("first entry:", json.dumps(manifest["videos"][0], indent=2))

# Loading validates every video and collects (rather than raises) per-video
# failures, so one corrupt file never sinks a corpus.
corpus = load_corpus(manifest_path)
print(f"\nloaded {len(corpus)} videos, {len(corpus.ingest_report)} failures")

video = corpus.videos["a01"]
print(f"\na01 has {len(video.sentences)} sentences, {len(video.frames)} frames")
print("sentence 1:", video.sentences[1].text)

# Degraded videos (no frame dump) flow through the pipeline transcript-only.
degraded = [v.video_id for v in corpus.ordered() if v.degraded]
print("degraded videos:", degraded)

# Frame lookups snap to the nearest dumped frame within half a stride,
# which is how the pipeline samples outcome windows (1 s) and requirement
# sweeps (5 s).
window = frames_in_window(video, 10.0, 13.0, stride_s=1.0)
print("\nframes near 10..13s at 1 fps:", [f.t_s for f in window])
sweep = frames_in_window(video, 0.0, video.duration_s, stride_s=5.0)
print(f"5s sweep over the whole video: {len(sweep)} frames")
