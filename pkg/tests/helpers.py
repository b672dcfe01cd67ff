"""Small builders for in-memory fixture videos used across test modules."""

from vmx.corpus import FrameAsset, Sentence, VideoRecord

SENT_SECONDS = 4.0


def make_video(
    video_id: str,
    texts: list[str],
    task_name: str = "Make Gnocchi",
    frames_every_s: float | None = None,
) -> VideoRecord:
    sentences = [
        Sentence(index=i, text=t, start_s=i * SENT_SECONDS, end_s=i * SENT_SECONDS + 3.5)
        for i, t in enumerate(texts)
    ]
    frames = []
    if frames_every_s:
        duration = int(sentences[-1].end_s) + 1
        t = 0.0
        while t <= duration:
            frames.append(
                FrameAsset(video_id=video_id, t_s=t, uri=f"frames/{video_id}_{int(t):04d}.jpg")
            )
            t += frames_every_s
    return VideoRecord(
        video_id=video_id,
        task_name=task_name,
        category="Food and Entertaining",
        playback_ref=f"https://videos.example/{video_id}",
        sentences=sentences,
        frames=frames,
    )


def tagged_step_video(video_id: str, sequence: tuple[str, ...], **kwargs) -> VideoRecord:
    """A video whose tags reproduce `sequence` exactly through STEP_ASSIGN.

    An untagged separator sentence between steps keeps back-to-back repeats
    of one step from merging into a single span.
    """
    texts = ["Welcome to this tutorial."]
    for name in sequence:
        texts.append(f"Working on this part now. [STEP:{name}]")
        texts.append(f"Still at it. [STEP:{name}]")
        texts.append("Let me grab a sip of water.")
    texts.append("Thanks for watching.")
    return make_video(video_id, texts, **kwargs)
