/**
 * Pure view models for the two pages.
 *
 * Overview: outcome cards (with representative images), approach tabs for
 * the chosen outcome, the approach's requirement list with frequency
 * shading, and its step list with one-line descriptions.
 *
 * Details: the approach's steps vertically, the expanded step's method
 * variations, the selected method's snippet switcher, bounded player and
 * tips panel.
 */

import {
  findApproach,
  findCluster,
  findMethod,
  findStep,
  sameClip,
  ViewState,
} from "./state.js";
import { ApproachKind, Clip, TaskGraph, Tip } from "./types.js";

const KIND_ORDER: ApproachKind[] = ["STANDARD", "SIMPLE", "COMPLEX"];
const KIND_LABEL: Record<ApproachKind, string> = {
  STANDARD: "Standard",
  SIMPLE: "Simple",
  COMPLEX: "Complex",
};

export interface OutcomeCardVM {
  name: string;
  images: string[];
  textual: boolean; // no frames available: render a text-only card
  videoCount: number;
  selected: boolean;
}

export interface ApproachTabVM {
  kind: ApproachKind;
  label: string;
  stepCount: number;
  videoCount: number;
  selected: boolean;
}

export interface RequirementVM {
  name: string;
  kind: string;
  shade: string;
  count: number;
  percent: number;
}

export interface StepRowVM {
  name: string;
  description: string;
  position: number;
}

export interface OverviewVM {
  taskName: string;
  empty: boolean;
  placeholder: string | null;
  outcomes: OutcomeCardVM[];
  tabs: ApproachTabVM[];
  requirements: RequirementVM[];
  steps: StepRowVM[];
}

export function renderOverview(graph: TaskGraph, state: ViewState): OverviewVM {
  if (graph.outcome_clusters.length === 0) {
    return {
      taskName: graph.task_name,
      empty: true,
      placeholder: "No outcomes extracted for this task yet.",
      outcomes: [],
      tabs: [],
      requirements: [],
      steps: [],
    };
  }
  const outcomes = graph.outcome_clusters.map((cluster) => {
    const videoCount = new Set(
      cluster.approaches.flatMap((a) => a.supporting_video_ids),
    ).size;
    return {
      name: cluster.name,
      images: cluster.representative_frames.map((f) => f.uri),
      textual: cluster.representative_frames.length === 0,
      videoCount,
      selected: cluster.name === state.selectedOutcome,
    };
  });

  const cluster = findCluster(graph, state.selectedOutcome);
  const tabs: ApproachTabVM[] = [];
  if (cluster) {
    for (const kind of KIND_ORDER) {
      const approach = cluster.approaches.find((a) => a.kind === kind);
      if (!approach) continue; // omitted approaches get no tab
      tabs.push({
        kind,
        label: KIND_LABEL[kind],
        stepCount: approach.step_sequence.length,
        videoCount: approach.supporting_video_ids.length,
        selected: kind === state.selectedApproachKind,
      });
    }
  }

  const approach = findApproach(cluster, state.selectedApproachKind);
  const requirements = (approach?.requirements ?? []).map((item) => ({
    name: item.name,
    kind: item.kind,
    shade: item.shade,
    count: item.count,
    percent: Math.round(item.fraction * 100),
  }));
  const steps = (approach?.steps ?? []).map((step, i) => ({
    name: step.step_name,
    description: step.description,
    position: i + 1,
  }));

  return {
    taskName: graph.task_name,
    empty: false,
    placeholder: null,
    outcomes,
    tabs,
    requirements,
    steps,
  };
}

export interface MethodVM {
  name: string;
  clipCount: number;
  tipCount: number;
  selected: boolean;
}

export interface DetailStepVM {
  name: string;
  description: string;
  position: number;
  expanded: boolean;
  methods: MethodVM[];
}

export interface SnippetVM {
  clip: Clip;
  summary: string;
  active: boolean;
}

export interface PlayerVM {
  clip: Clip;
  playbackVideoId: string;
  boundsLabel: string;
}

export interface DetailsVM {
  taskName: string;
  outcome: string;
  approachKind: ApproachKind;
  steps: DetailStepVM[];
  snippets: SnippetVM[]; // horizontally scrollable switcher
  player: PlayerVM | null;
  tips: Tip[];
  notice: string | null;
}

export function renderDetails(graph: TaskGraph, state: ViewState): DetailsVM | null {
  const cluster = findCluster(graph, state.selectedOutcome);
  const approach = findApproach(cluster, state.selectedApproachKind);
  if (!cluster || !approach) return null; // details requires a chosen approach

  const steps = approach.steps.map((step, i) => ({
    name: step.step_name,
    description: step.description,
    position: i + 1,
    expanded: step.step_name === state.expandedStep,
    methods:
      step.step_name === state.expandedStep
        ? step.methods.map((m) => ({
            name: m.name,
            clipCount: m.clips.length,
            tipCount: m.tips.length,
            selected: m.name === state.selectedMethod,
          }))
        : [],
  }));

  const step = findStep(approach, state.expandedStep);
  const method = findMethod(step, state.selectedMethod);
  const snippets = (method?.clips ?? []).map((clip) => ({
    clip,
    summary: clip.summary,
    active: state.activeClip !== null && sameClip(state.activeClip, clip),
  }));
  const active = snippets.find((s) => s.active) ?? null;
  const player: PlayerVM | null = active
    ? {
        clip: active.clip,
        playbackVideoId: active.clip.video_id,
        boundsLabel: `${active.clip.start_s.toFixed(1)}s - ${active.clip.end_s.toFixed(1)}s`,
      }
    : null;

  return {
    taskName: graph.task_name,
    outcome: cluster.name,
    approachKind: approach.kind,
    steps,
    snippets,
    player,
    tips: method?.tips ?? [],
    notice: state.notice,
  };
}
