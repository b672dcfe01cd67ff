"""Ingest, validate and index per-task video corpora.

A corpus is described by a task manifest (JSON) that points at one
transcript file per video plus an optional directory of pre-extracted
frames.  Nothing here ever decodes video; frames are consumed as image
files keyed by timestamp and the playback reference is passed through
untouched for the player.
"""

from __future__ import annotations

import json
import logging
import os
import re
from dataclasses import dataclass, field
from pathlib import Path

log = logging.getLogger(__name__)


class ParseError(Exception):
    """Source file is not parseable (bad JSON, wrong shape)."""


class ValidationError(Exception):
    """Parsed data violates a corpus invariant; the video is corrupt."""


class ManifestError(Exception):
    """The task manifest itself is unreadable or empty."""


@dataclass(frozen=True)
class Sentence:
    index: int
    text: str
    start_s: float
    end_s: float


@dataclass(frozen=True)
class FrameAsset:
    video_id: str
    t_s: float
    uri: str


@dataclass
class VideoRecord:
    """One source video: transcript sentences, frame assets, playback ref.

    ``frames`` may be empty, in which case the video is *degraded* and all
    downstream processing runs transcript-only.
    """

    video_id: str
    task_name: str
    category: str
    playback_ref: str
    sentences: list[Sentence]
    frames: list[FrameAsset] = field(default_factory=list)

    @property
    def degraded(self) -> bool:
        return not self.frames

    @property
    def duration_s(self) -> float:
        last = self.sentences[-1].end_s if self.sentences else 0.0
        if self.frames:
            last = max(last, self.frames[-1].t_s)
        return last

    def sentence_window(self, start_index: int, end_index: int) -> tuple[float, float]:
        """Time range covered by sentences [start_index, end_index]."""
        return (self.sentences[start_index].start_s, self.sentences[end_index].end_s)

    def to_dict(self) -> dict:
        return {
            "video_id": self.video_id,
            "task_name": self.task_name,
            "category": self.category,
            "playback_ref": self.playback_ref,
            "sentences": [
                {"index": s.index, "text": s.text, "start_s": s.start_s, "end_s": s.end_s}
                for s in self.sentences
            ],
            "frames": [{"video_id": f.video_id, "t_s": f.t_s, "uri": f.uri} for f in self.frames],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "VideoRecord":
        record = cls(
            video_id=data["video_id"],
            task_name=data["task_name"],
            category=data.get("category", ""),
            playback_ref=data.get("playback_ref", ""),
            sentences=[
                Sentence(s["index"], s["text"], float(s["start_s"]), float(s["end_s"]))
                for s in data["sentences"]
            ],
            frames=[
                FrameAsset(f["video_id"], float(f["t_s"]), f["uri"])
                for f in data.get("frames", [])
            ],
        )
        validate_video(record)
        return record


@dataclass(frozen=True)
class ManifestEntry:
    transcript: str
    playback_ref: str | None = None
    frames_dir: str | None = None


@dataclass
class IngestFailure:
    source: str
    error: str


@dataclass
class Corpus:
    """All ingested videos for one task, keyed by video_id.

    Immutable after load; safe to share read-only across threads.
    ``root`` is the manifest directory every relative asset uri resolves
    against.
    """

    task_name: str
    videos: dict[str, VideoRecord]
    root: Path | None = None
    ingest_report: list[IngestFailure] = field(default_factory=list)

    def ordered(self) -> list[VideoRecord]:
        return [self.videos[vid] for vid in sorted(self.videos)]

    def __len__(self) -> int:
        return len(self.videos)


def validate_video(record: VideoRecord) -> None:
    """Check every VideoRecord invariant; raise ValidationError on the first hit."""
    if not record.video_id:
        raise ValidationError("video_id must be non-empty")
    if not record.task_name:
        raise ValidationError(f"{record.video_id}: task_name must be non-empty")
    if not record.sentences:
        raise ValidationError(f"{record.video_id}: narration is required, got 0 sentences")
    prev_start = None
    for pos, s in enumerate(record.sentences):
        if s.index != pos:
            raise ValidationError(
                f"{record.video_id}: sentence indices must be 0..N-1 contiguous, "
                f"got {s.index} at position {pos}"
            )
        if not s.text.strip():
            raise ValidationError(f"{record.video_id}: sentence {pos} has empty text")
        if s.start_s < 0:
            raise ValidationError(f"{record.video_id}: sentence {pos} starts before 0")
        if s.end_s <= s.start_s:
            raise ValidationError(f"{record.video_id}: sentence {pos} has end_s <= start_s")
        if prev_start is not None and s.start_s < prev_start:
            raise ValidationError(
                f"{record.video_id}: non-monotone start_s at sentence {pos}"
            )
        prev_start = s.start_s
    for f in record.frames:
        if f.t_s < 0:
            raise ValidationError(f"{record.video_id}: frame with negative timestamp")
    for a, b in zip(record.frames, record.frames[1:]):
        if b.t_s < a.t_s:
            raise ValidationError(f"{record.video_id}: frames not sorted by t_s")


def _parse_transcript(path: Path) -> dict:
    try:
        raw = path.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(f"cannot read transcript {path}: {exc}") from exc
    try:
        data = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ParseError(f"malformed transcript {path}: {exc}") from exc
    if not isinstance(data, dict) or "sentences" not in data or "video_id" not in data:
        raise ParseError(f"transcript {path} missing required fields")
    return data


_FRAME_RE_TEMPLATE = r"^{vid}_(\d{{4}})\.jpg$"


def _scan_frames(video_id: str, frames_dir: Path, base_dir: Path) -> list[FrameAsset]:
    pattern = re.compile(_FRAME_RE_TEMPLATE.format(vid=re.escape(video_id)))
    frames = []
    for name in os.listdir(frames_dir):
        m = pattern.match(name)
        if not m:
            continue
        t_s = float(int(m.group(1)))
        uri = Path(os.path.relpath(frames_dir / name, base_dir)).as_posix()
        frames.append(FrameAsset(video_id=video_id, t_s=t_s, uri=uri))
    frames.sort(key=lambda f: f.t_s)
    return frames


def ingest_video(entry: ManifestEntry, base_dir: Path) -> VideoRecord:
    """Parse and validate one manifest entry into a VideoRecord.

    The degraded flag (empty frames) is set when the frames directory is
    absent or holds no matching files; that is not an error.  A manifest
    playback_ref overrides the transcript's own field.
    """
    base_dir = Path(base_dir)
    data = _parse_transcript(base_dir / entry.transcript)
    try:
        sentences = [
            Sentence(
                index=int(s["index"]),
                text=str(s["text"]),
                start_s=float(s["start_s"]),
                end_s=float(s["end_s"]),
            )
            for s in data["sentences"]
        ]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"transcript {entry.transcript}: bad sentence entry: {exc}") from exc
    sentences.sort(key=lambda s: s.index)
    video_id = str(data["video_id"])

    frames: list[FrameAsset] = []
    if entry.frames_dir:
        frames_dir = base_dir / entry.frames_dir
        if frames_dir.is_dir():
            frames = _scan_frames(video_id, frames_dir, base_dir)
        else:
            log.warning("frames dir %s missing for %s; ingesting degraded", frames_dir, video_id)

    record = VideoRecord(
        video_id=video_id,
        task_name=str(data.get("task_name", "")),
        category=str(data.get("category", "")),
        playback_ref=entry.playback_ref or str(data.get("playback_ref", "")),
        sentences=sentences,
        frames=frames,
    )
    validate_video(record)
    return record


def load_manifest(path: Path) -> tuple[str, list[ManifestEntry]]:
    path = Path(path)
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ManifestError(f"cannot read manifest {path}: {exc}") from exc
    if not isinstance(data, dict) or not data.get("videos"):
        raise ManifestError(f"manifest {path} lists no video entries")
    task_name = str(data.get("task_name", ""))
    if not task_name:
        raise ManifestError(f"manifest {path} has no task_name")
    entries = []
    for raw in data["videos"]:
        entries.append(
            ManifestEntry(
                transcript=raw["transcript"],
                playback_ref=raw.get("playback_ref"),
                frames_dir=raw.get("frames_dir"),
            )
        )
    return task_name, entries


def load_corpus(manifest_path: Path) -> Corpus:
    """Load every parseable video; per-video failures go to the ingest report.

    Videos that fail parsing or validation are excluded (never partially
    ingested); only an unreadable manifest is fatal.
    """
    manifest_path = Path(manifest_path)
    task_name, entries = load_manifest(manifest_path)
    base_dir = manifest_path.parent
    videos: dict[str, VideoRecord] = {}
    failures: list[IngestFailure] = []
    for entry in entries:
        try:
            record = ingest_video(entry, base_dir)
        except (ParseError, ValidationError) as exc:
            failures.append(IngestFailure(source=entry.transcript, error=str(exc)))
            continue
        if record.task_name != task_name:
            failures.append(
                IngestFailure(
                    source=entry.transcript,
                    error=f"task_name {record.task_name!r} does not match manifest {task_name!r}",
                )
            )
            continue
        if record.video_id in videos:
            failures.append(
                IngestFailure(source=entry.transcript, error=f"duplicate video_id {record.video_id}")
            )
            continue
        videos[record.video_id] = record
    return Corpus(task_name=task_name, videos=videos, root=base_dir, ingest_report=failures)


def frames_in_window(
    video: VideoRecord, start_s: float, end_s: float, stride_s: float
) -> list[FrameAsset]:
    """Frames nearest to start_s, start_s+stride_s, ... <= end_s.

    A frame is accepted only when it lies within half a stride of its
    target instant, so the result always stays inside
    [start_s - stride_s/2, end_s + stride_s/2].  Degraded videos yield [].
    """
    if stride_s <= 0:
        raise ValueError("stride_s must be positive")
    if end_s < start_s:
        raise ValueError("end_s must be >= start_s")
    if not video.frames:
        return []
    half = stride_s / 2.0
    picked: dict[tuple[float, str], FrameAsset] = {}
    t = start_s
    while t <= end_s + 1e-9:
        best = min(video.frames, key=lambda f: (abs(f.t_s - t), f.t_s))
        if abs(best.t_s - t) <= half + 1e-9:
            picked[(best.t_s, best.uri)] = best
        t += stride_s
    return sorted(picked.values(), key=lambda f: f.t_s)
