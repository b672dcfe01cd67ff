import { describe, expect, it } from "vitest";

import {
  clipLoadFailed,
  decodeState,
  encodeState,
  expandStep,
  initialState,
  normalize,
  selectApproach,
  selectClip,
  selectMethod,
  selectOutcome,
} from "../src/state.js";
import { TaskGraph } from "../src/types.js";

import graphJson from "./fixtures/task_graph.json";

const graph = graphJson as unknown as TaskGraph;
const cluster = graph.outcome_clusters[0];
const standard = cluster.approaches.find((a) => a.kind === "STANDARD")!;

function deepState() {
  const step = standard.steps.find((s) => s.methods.length > 1)!;
  const method = step.methods[0];
  let state = selectOutcome(graph, initialState(graph.task_name), cluster.name);
  state = expandStep(graph, state, step.step_name);
  state = selectMethod(graph, state, method.name);
  return { state, step, method };
}

describe("state transitions", () => {
  it("selecting an outcome defaults to the standard approach", () => {
    const state = selectOutcome(graph, initialState(graph.task_name), cluster.name);
    expect(state.selectedOutcome).toBe(cluster.name);
    expect(state.selectedApproachKind).toBe("STANDARD");
    expect(state.expandedStep).toBeNull();
  });

  it("unknown targets leave the state unchanged", () => {
    const base = selectOutcome(graph, initialState(graph.task_name), cluster.name);
    expect(selectOutcome(graph, base, "Nope")).toBe(base);
    expect(selectApproach(graph, base, "SIMPLE" as const).selectedApproachKind).toBe("SIMPLE");
    expect(expandStep(graph, base, "Nope")).toBe(base);
  });

  it("changing approach resets the downstream selection", () => {
    const { state } = deepState();
    const next = selectApproach(graph, state, "SIMPLE");
    expect(next.expandedStep).toBeNull();
    expect(next.selectedMethod).toBeNull();
    expect(next.activeClip).toBeNull();
  });

  it("selecting a method activates its first clip", () => {
    const { state, method } = deepState();
    expect(state.activeClip).toEqual({
      video_id: method.clips[0].video_id,
      start_s: method.clips[0].start_s,
      end_s: method.clips[0].end_s,
    });
  });

  it("selectClip rejects clips outside the method", () => {
    const { state } = deepState();
    const next = selectClip(graph, state, { video_id: "ghost", start_s: 0, end_s: 1 });
    expect(next).toBe(state);
  });

  it("a failed clip advances to the next snippet with a notice", () => {
    const { state, method } = deepState();
    expect(method.clips.length).toBeGreaterThan(1);
    const next = clipLoadFailed(graph, state);
    expect(next.activeClip).toEqual({
      video_id: method.clips[1].video_id,
      start_s: method.clips[1].start_s,
      end_s: method.clips[1].end_s,
    });
    expect(next.notice).toContain("next snippet");
  });

  it("exhausting the snippets clears the player with a notice", () => {
    let { state, method } = deepState();
    for (let i = 0; i < method.clips.length; i++) {
      state = clipLoadFailed(graph, state);
    }
    expect(state.activeClip).toBeNull();
    expect(state.notice).toContain("no more snippets");
  });
});

describe("url state", () => {
  it("round-trips a deep link", () => {
    const { state } = deepState();
    const decoded = decodeState(encodeState(state));
    expect(decoded.task).toBe(state.task);
    expect(decoded.selectedOutcome).toBe(state.selectedOutcome);
    expect(decoded.selectedApproachKind).toBe(state.selectedApproachKind);
    expect(decoded.expandedStep).toBe(state.expandedStep);
    expect(decoded.selectedMethod).toBe(state.selectedMethod);
    expect(decoded.activeClip).toEqual(state.activeClip);
  });

  it("handles names with spaces and slashes", () => {
    const state = {
      ...initialState("Make Gnocchi"),
      selectedOutcome: "Creamy / Rich Design",
    };
    const decoded = decodeState(encodeState(state));
    expect(decoded.selectedOutcome).toBe("Creamy / Rich Design");
  });

  it("normalize drops selections the graph cannot back", () => {
    const { state } = deepState();
    const tampered = { ...state, selectedMethod: "Imaginary Method", activeClip: null };
    const fixed = normalize(graph, tampered);
    expect(fixed.selectedMethod).toBeNull();
    expect(fixed.expandedStep).toBe(state.expandedStep);

    const badOutcome = { ...state, selectedOutcome: "Nope" };
    expect(normalize(graph, badOutcome).selectedOutcome).toBeNull();
  });

  it("empty hash decodes to the initial state", () => {
    expect(decodeState("#/")).toEqual(initialState());
    expect(decodeState("")).toEqual(initialState());
  });
});
