/**
 * View state and transitions.
 *
 * A state is a path through the loaded task graph: outcome -> approach ->
 * step -> method -> clip. Every transition validates its target against
 * the graph and resets everything downstream of the change, so an invalid
 * path is unrepresentable after a transition. State round-trips through
 * the URL hash for shareable deep links.
 */

import { ApproachKind, Approach, Clip, Method, OutcomeCluster, Step, TaskGraph } from "./types.js";

export interface ActiveClip {
  video_id: string;
  start_s: number;
  end_s: number;
}

export interface ViewState {
  task: string | null;
  selectedOutcome: string | null;
  selectedApproachKind: ApproachKind | null;
  expandedStep: string | null;
  selectedMethod: string | null;
  activeClip: ActiveClip | null;
  notice: string | null;
}

export function initialState(task: string | null = null): ViewState {
  return {
    task,
    selectedOutcome: null,
    selectedApproachKind: null,
    expandedStep: null,
    selectedMethod: null,
    activeClip: null,
    notice: null,
  };
}

// --- graph lookups -----------------------------------------------------------

export function findCluster(graph: TaskGraph, name: string | null): OutcomeCluster | null {
  if (name === null) return null;
  return graph.outcome_clusters.find((c) => c.name === name) ?? null;
}

export function findApproach(
  cluster: OutcomeCluster | null,
  kind: ApproachKind | null,
): Approach | null {
  if (!cluster || kind === null) return null;
  return cluster.approaches.find((a) => a.kind === kind) ?? null;
}

export function findStep(approach: Approach | null, name: string | null): Step | null {
  if (!approach || name === null) return null;
  return approach.steps.find((s) => s.step_name === name) ?? null;
}

export function findMethod(step: Step | null, name: string | null): Method | null {
  if (!step || name === null) return null;
  return step.methods.find((m) => m.name === name) ?? null;
}

export function sameClip(a: ActiveClip, b: Clip): boolean {
  return a.video_id === b.video_id && a.start_s === b.start_s && a.end_s === b.end_s;
}

function resolve(graph: TaskGraph, state: ViewState) {
  const cluster = findCluster(graph, state.selectedOutcome);
  const approach = findApproach(cluster, state.selectedApproachKind);
  const step = findStep(approach, state.expandedStep);
  const method = findMethod(step, state.selectedMethod);
  return { cluster, approach, step, method };
}

// --- transitions -------------------------------------------------------------

export function selectOutcome(graph: TaskGraph, state: ViewState, name: string): ViewState {
  const cluster = findCluster(graph, name);
  if (!cluster) return state;
  const defaultKind =
    cluster.approaches.find((a) => a.kind === "STANDARD")?.kind ??
    cluster.approaches[0]?.kind ??
    null;
  return {
    ...initialState(state.task),
    selectedOutcome: name,
    selectedApproachKind: defaultKind,
  };
}

export function selectApproach(graph: TaskGraph, state: ViewState, kind: ApproachKind): ViewState {
  const cluster = findCluster(graph, state.selectedOutcome);
  if (!findApproach(cluster, kind)) return state;
  return {
    ...state,
    selectedApproachKind: kind,
    expandedStep: null,
    selectedMethod: null,
    activeClip: null,
    notice: null,
  };
}

export function expandStep(graph: TaskGraph, state: ViewState, stepName: string): ViewState {
  const { approach } = resolve(graph, state);
  const step = findStep(approach, stepName);
  if (!step) return state;
  let next: ViewState = {
    ...state,
    expandedStep: stepName,
    selectedMethod: null,
    activeClip: null,
    notice: null,
  };
  // a step with a single method is opened straight away
  if (step.methods.length === 1) {
    next = selectMethod(graph, next, step.methods[0].name);
  }
  return next;
}

export function selectMethod(graph: TaskGraph, state: ViewState, methodName: string): ViewState {
  const { step } = resolve(graph, state);
  const method = findMethod(step, methodName);
  if (!method) return state;
  const first = method.clips[0] ?? null;
  return {
    ...state,
    selectedMethod: methodName,
    activeClip: first
      ? { video_id: first.video_id, start_s: first.start_s, end_s: first.end_s }
      : null,
    notice: null,
  };
}

export function selectClip(graph: TaskGraph, state: ViewState, clip: ActiveClip): ViewState {
  const { method } = resolve(graph, state);
  if (!method || !method.clips.some((c) => sameClip(clip, c))) return state;
  return { ...state, activeClip: { ...clip }, notice: null };
}

/** A clip failed to load: advance to the next snippet with a notice. */
export function clipLoadFailed(graph: TaskGraph, state: ViewState): ViewState {
  const { method } = resolve(graph, state);
  if (!method || !state.activeClip) return state;
  const index = method.clips.findIndex((c) => sameClip(state.activeClip!, c));
  const next = method.clips[index + 1];
  if (!next) {
    return { ...state, activeClip: null, notice: "Clip failed to load; no more snippets." };
  }
  return {
    ...state,
    activeClip: { video_id: next.video_id, start_s: next.start_s, end_s: next.end_s },
    notice: "Clip failed to load; switched to the next snippet.",
  };
}

/** Drop any selection the graph cannot back (used when decoding URLs). */
export function normalize(graph: TaskGraph, state: ViewState): ViewState {
  const next = { ...state };
  const cluster = findCluster(graph, next.selectedOutcome);
  if (!cluster) {
    return { ...initialState(next.task) };
  }
  const approach = findApproach(cluster, next.selectedApproachKind);
  if (!approach) {
    return { ...initialState(next.task), selectedOutcome: next.selectedOutcome };
  }
  const step = findStep(approach, next.expandedStep);
  if (!step) {
    return { ...next, expandedStep: null, selectedMethod: null, activeClip: null };
  }
  const method = findMethod(step, next.selectedMethod);
  if (!method) {
    return { ...next, selectedMethod: null, activeClip: null };
  }
  if (next.activeClip && !method.clips.some((c) => sameClip(next.activeClip!, c))) {
    return { ...next, activeClip: null };
  }
  return next;
}

// --- URL encoding ------------------------------------------------------------

const enc = encodeURIComponent;
const dec = decodeURIComponent;

export function encodeState(state: ViewState): string {
  const parts: string[] = [];
  if (state.task) parts.push("t", enc(state.task));
  if (state.selectedOutcome) parts.push("o", enc(state.selectedOutcome));
  if (state.selectedApproachKind) parts.push("a", enc(state.selectedApproachKind));
  if (state.expandedStep) parts.push("s", enc(state.expandedStep));
  if (state.selectedMethod) parts.push("m", enc(state.selectedMethod));
  if (state.activeClip) {
    const c = state.activeClip;
    parts.push("c", `${enc(c.video_id)}:${c.start_s}:${c.end_s}`);
  }
  return "#/" + parts.join("/");
}

export function decodeState(hash: string): ViewState {
  const state = initialState();
  const trimmed = hash.replace(/^#\/?/, "");
  if (!trimmed) return state;
  const parts = trimmed.split("/");
  for (let i = 0; i + 1 < parts.length; i += 2) {
    const key = parts[i];
    const value = parts[i + 1];
    if (key === "t") state.task = dec(value);
    else if (key === "o") state.selectedOutcome = dec(value);
    else if (key === "a") state.selectedApproachKind = dec(value) as ApproachKind;
    else if (key === "s") state.expandedStep = dec(value);
    else if (key === "m") state.selectedMethod = dec(value);
    else if (key === "c") {
      const [vid, start, end] = value.split(":");
      if (vid && start !== undefined && end !== undefined) {
        state.activeClip = {
          video_id: dec(vid),
          start_s: Number(start),
          end_s: Number(end),
        };
      }
    }
  }
  return state;
}
