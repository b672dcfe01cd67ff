"""Prompt templates and rendering for every model interaction.

Templates are frozen verbatim (placeholders included) and rendered in a
single pass, so placeholder values can never be re-scanned for further
placeholders.  Transcript-ish values are rendered by the helpers at the
bottom: single transcripts as ``index: text`` lines, multi-video bundles
as blank-line-separated blocks headed by ``video_id: <id>``.
"""

from __future__ import annotations

import json
import re
from enum import Enum


class PromptError(Exception):
    """Base error for template rendering problems."""


class MissingPlaceholder(PromptError):
    """A template placeholder was left unsubstituted."""


class UnexpectedSubstitution(PromptError):
    """A substitution key does not appear in the template."""


class TemplateId(str, Enum):
    OUTCOME_SEGMENTS = "OUTCOME_SEGMENTS"
    OUTCOME_DESC = "OUTCOME_DESC"
    OUTCOME_CLUSTER = "OUTCOME_CLUSTER"
    OUTCOME_ASSIGN = "OUTCOME_ASSIGN"
    REQUIREMENTS = "REQUIREMENTS"
    STEP_IDENTIFY = "STEP_IDENTIFY"
    STEP_ASSIGN = "STEP_ASSIGN"
    METHOD_CLUSTER = "METHOD_CLUSTER"
    METHOD_ASSIGN = "METHOD_ASSIGN"
    TIPS = "TIPS"
    CLIP_SUMMARY = "CLIP_SUMMARY"


_OUTCOME_SEGMENTS = """\
You are given the transcript of the tutorial video related to {task_name}.
Identify the part of the transcript that describes the fnal results of the procedure, such as "Look
how beautiful our cake turned out."
The transcript is as follows: {transcript_data}
Return the sentence indices that describe the outcome."""

_OUTCOME_DESC = """\
{visual_frames}
The transcript of this tutorial video related to {task_name} is as follows: {transcript_data}.
Provide a one-sentence description of the final outcome of the tutorial video related to {task_name}. 
Focus solely on its appearance without introductory phrases, subjective language, or references to the methods used."""

_OUTCOME_CLUSTER = """\
You are provided with descriptions of outcomes from tutorial videos related to {task_name}.
Your task is to group similar outcomes into clusters based on common themes. 
Create between 2 and 4 clusters, and assign a descriptive name to each cluster that reflects the shared theme of the outcomes within it. Return only the names of the clusters.

Below are the outcome descriptions from each video:
{outcome_descriptions}"""

_OUTCOME_ASSIGN = """
Assign the video outcome to one of the outcome types.
video outcome: {outcome_description}
outcome types: {outcome_types}"""

_REQUIREMENTS = """\
{visual_frames}
The transcript of this tutorial video related to {task_name} is as follows: {transcript_data}.

Identify the ingredients, tools and equipment used in this tutorial video.\\n
Extract and list the ingredients, tools, and equipment without specifying quantities or any descriptors."""

_STEP_IDENTIFY = """\
Given the transcript of a tutorial video related to {task_name}, extract the key high-level steps involved in the task.
Follow these guidelines when extracting steps:
1. Steps should be high-level and concise.
2. Base each step on an intermediate outcome with tangible results (e.g., "Make Dough", "Grill Steak"), instead of individual actions (e.g., "Add Flour", "Turn on Grill").
3. Avoid using specific ingredients in the step name (e.g., "Add Tomato Paste"). Instead, focus on the purpose of the step (e.g., "Make Sauce" instead of "Add Tomato Paste").
4. Group together related low-level actions into a single, high-level step. (e.g., combine "Add Salt" and "Add Lime" into "Make Sauce").
5. A step must span multiple transcript sentences, not just a single sentence. It should be high-level enough.
6. Use a concise "verb + object" format to describe each step, containing only one verb (e.g., "Boil Potatoes").
7. Exclude any steps unrelated to the core task, such as introductions, conclusions, or general commentary.

First, review the existing list of steps to identify if any of them are mentioned in the transcript. 
Use the same step names to ensure consistency whenever possible.
If you identify new steps that are not in the existing list, add them appropriately.

Here is the existing list of steps:
{original_step}

Here is the transcript of the videos:
{transcript_data}

Return a series of concise, high-level steps as a list."""

_STEP_ASSIGN = """\
You are provided with a transcript of a tutorial video about {task_name}, along with a list of possible steps for the task.

Your task is to read through the transcript sequentially and assign the appropriate steps from the provided list to the corresponding sections of the transcript. 
The steps may not be in order in the list, and some steps may not be used at all. Only assign a step when the content clearly matches the step.
For each step you assign, specify the corresponding section of the transcript by identifying the start and end indices. 

Here is the list of steps:
{whole_step}

Here is the transcript data:
{transcript_data}

Return the assigned steps in the order they occur in the transcript."""

_METHOD_CLUSTER = """\
You are given video transcripts from multiple videos about {task_name}, all demonstrating the same step, "{step_name}". 
Your task is to cluster the different methods or approaches used in these videos.
When clustering, focus on the type of tools, equipment, or techniques used.

Examples:
- Step: Boil Potatoes
-- Variations: Boiling using stove, Boiling using oven, Boiling using microwave.

- Step: Mix Ingredients
-- Variations: Mixing with spoon, Mixing with whisk, Mixing with blender.

Remember to ground variations on the provided video transcripts.
To ensure clustering based on the same criteria, each cluster name should start with the same action word (e.g., "Using [Tool Name]", "Applying [Technique]").
Create up to 3 clusters based on these variations.

Here are the transcripts of the step: 
{transcripts}"""

_METHOD_ASSIGN = """\
You are given a video transcript demonstrating the step "{step_name}". 
Your task is to assign the method described in the transcript to one of the existing method types.

Method types: {variation}
Video transcript: {transcript}

Identify which method type best matches the approach described in the transcript."""

_TIPS = """\
 You are provided with video transcripts about {task_name}, focusing on the part related to {step_name}. 
Your task is to extract useful tips from the transcripts.
Tips can include:

- Suggestions to improve efficiency or results
- Common mistakes to avoid
- Best practices to follow
- Warnings or important reminders

Extract the top 3 most common tips, advice, or recommendations from the transcripts. 
You should ground each tip on the sentence indices in the transcript where they were found.
You can include more than one video for each tip if the tip is mentioned in multiple videos.

Transcripts: {transcripts}"""

_CLIP_SUMMARY = """\
You are given part of the transcript of a tutorial video related to {task_name}.
Summarize what happens in this part of the video in one short sentence.
Do not use introductory phrases; describe only the action shown.
The transcript is as follows: {transcript_data}"""


TEMPLATES: dict[TemplateId, str] = {
    TemplateId.OUTCOME_SEGMENTS: _OUTCOME_SEGMENTS,
    TemplateId.OUTCOME_DESC: _OUTCOME_DESC,
    TemplateId.OUTCOME_CLUSTER: _OUTCOME_CLUSTER,
    TemplateId.OUTCOME_ASSIGN: _OUTCOME_ASSIGN,
    TemplateId.REQUIREMENTS: _REQUIREMENTS,
    TemplateId.STEP_IDENTIFY: _STEP_IDENTIFY,
    TemplateId.STEP_ASSIGN: _STEP_ASSIGN,
    TemplateId.METHOD_CLUSTER: _METHOD_CLUSTER,
    TemplateId.METHOD_ASSIGN: _METHOD_ASSIGN,
    TemplateId.TIPS: _TIPS,
    TemplateId.CLIP_SUMMARY: _CLIP_SUMMARY,
}

_PLACEHOLDER_RE = re.compile(r"\{([a-z_]+)\}")

# Templates that may carry image attachments (they embed {visual_frames}).
VISUAL_TEMPLATES = frozenset(
    tid for tid, text in TEMPLATES.items() if "{visual_frames}" in text
)


def placeholders(template_id: TemplateId) -> frozenset[str]:
    return frozenset(_PLACEHOLDER_RE.findall(TEMPLATES[template_id]))


def render_prompt(template_id: TemplateId, substitutions: dict[str, str]) -> str:
    """Replace every ``{placeholder}`` in one pass.

    The substitution map must cover the template's placeholders exactly;
    extra keys are rejected so that distinct maps always render distinct
    prompts.
    """
    template = TEMPLATES[template_id]
    needed = placeholders(template_id)
    missing = needed - substitutions.keys()
    if missing:
        raise MissingPlaceholder(
            f"{template_id.value}: missing substitution(s): {', '.join(sorted(missing))}"
        )
    extra = substitutions.keys() - needed
    if extra:
        raise UnexpectedSubstitution(
            f"{template_id.value}: unknown substitution(s): {', '.join(sorted(extra))}"
        )
    return _PLACEHOLDER_RE.sub(lambda m: str(substitutions[m.group(1)]), template)


def render_transcript(sentences) -> str:
    """``index: text`` lines; the format the index-returning schemas rely on."""
    return "\n".join(f"{s.index}: {s.text}" for s in sentences)


def render_transcript_blocks(blocks: list[tuple[str, list]]) -> str:
    """Multi-video bundle: per video a ``video_id:`` header then its lines."""
    parts = []
    for video_id, sentences in blocks:
        parts.append(f"video_id: {video_id}\n" + render_transcript(sentences))
    return "\n\n".join(parts)


def render_name_list(names) -> str:
    """Step / outcome-type / method lists as a JSON array string."""
    return json.dumps(list(names))


def render_description_lines(descriptions: dict[str, str]) -> str:
    return "\n".join(f"{vid}: {text}" for vid, text in descriptions.items())
