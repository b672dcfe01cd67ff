import { describe, expect, it } from "vitest";

import {
  expandStep,
  initialState,
  selectClip,
  selectMethod,
  selectOutcome,
} from "../src/state.js";
import { TaskGraph } from "../src/types.js";
import { renderDetails } from "../src/views.js";

import graphJson from "./fixtures/task_graph.json";

const graph = graphJson as unknown as TaskGraph;
const cluster = graph.outcome_clusters[0];
const standard = cluster.approaches.find((a) => a.kind === "STANDARD")!;

function atStep(stepName: string) {
  const state = selectOutcome(graph, initialState(graph.task_name), cluster.name);
  return expandStep(graph, state, stepName);
}

function stepWithManyMethods() {
  return standard.steps.find((s) => s.methods.length > 1)!;
}

describe("details page", () => {
  it("requires a selected approach", () => {
    expect(renderDetails(graph, initialState(graph.task_name))).toBeNull();
  });

  it("lists every step of the approach vertically", () => {
    const vm = renderDetails(graph, atStep(standard.steps[0].step_name))!;
    expect(vm.steps.map((s) => s.name)).toEqual(standard.step_sequence);
    expect(vm.steps[0].expanded).toBe(true);
    expect(vm.steps.slice(1).every((s) => !s.expanded)).toBe(true);
  });

  it("expanding a step reveals its method variations", () => {
    const step = stepWithManyMethods();
    const vm = renderDetails(graph, atStep(step.step_name))!;
    const expanded = vm.steps.find((s) => s.expanded)!;
    expect(expanded.methods.map((m) => m.name)).toEqual(step.methods.map((m) => m.name));
  });

  it("a step with a single method is auto-expanded into it", () => {
    const single = standard.steps.find((s) => s.methods.length === 1);
    expect(single).toBeDefined();
    const state = atStep(single!.step_name);
    expect(state.selectedMethod).toBe(single!.methods[0].name);
    const vm = renderDetails(graph, state)!;
    expect(vm.snippets.length).toBe(single!.methods[0].clips.length);
  });

  it("selecting a method fills the snippet switcher with summaries", () => {
    const step = stepWithManyMethods();
    const method = step.methods[1];
    const state = selectMethod(graph, atStep(step.step_name), method.name);
    const vm = renderDetails(graph, state)!;
    expect(vm.snippets.length).toBe(method.clips.length);
    for (const snippet of vm.snippets) {
      expect(snippet.summary.length).toBeGreaterThan(0);
    }
    // the first clip is active and drives the player
    expect(vm.snippets[0].active).toBe(true);
    expect(vm.player?.clip).toEqual(method.clips[0]);
    expect(vm.player?.boundsLabel).toContain("s");
  });

  it("activating another snippet moves the player", () => {
    const step = stepWithManyMethods();
    const method = step.methods[0];
    expect(method.clips.length).toBeGreaterThan(1);
    let state = selectMethod(graph, atStep(step.step_name), method.name);
    const second = method.clips[1];
    state = selectClip(graph, state, {
      video_id: second.video_id,
      start_s: second.start_s,
      end_s: second.end_s,
    });
    const vm = renderDetails(graph, state)!;
    expect(vm.player?.clip).toEqual(second);
    expect(vm.snippets.filter((s) => s.active).length).toBe(1);
  });

  it("shows the selected method's tips with groundings", () => {
    let found = false;
    for (const step of standard.steps) {
      for (const method of step.methods) {
        if (!method.tips.length) continue;
        found = true;
        const state = selectMethod(graph, atStep(step.step_name), method.name);
        const vm = renderDetails(graph, state)!;
        expect(vm.tips).toEqual(method.tips);
        for (const tip of vm.tips) {
          expect(tip.groundings.length).toBeGreaterThan(0);
        }
      }
    }
    expect(found).toBe(true);
  });
});
