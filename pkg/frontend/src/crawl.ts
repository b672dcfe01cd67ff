/**
 * Headless crawl over a task graph.
 *
 * Simulates a user walking every path the UI offers (outcome cards ->
 * approach tabs -> steps -> methods -> snippets and tips) using the same
 * transitions and view models the pages use, and reports anything
 * rendered that does not resolve back to a graph node.
 */

import {
  expandStep,
  initialState,
  selectApproach,
  selectMethod,
  selectOutcome,
} from "./state.js";
import { TaskGraph } from "./types.js";
import { renderDetails, renderOverview } from "./views.js";

export interface CrawlReport {
  outcomesVisited: number;
  approachesVisited: number;
  stepsVisited: number;
  methodsVisited: number;
  snippetsSeen: number;
  tipsSeen: number;
  deadLinks: string[];
}

export function crawlGraph(graph: TaskGraph): CrawlReport {
  const report: CrawlReport = {
    outcomesVisited: 0,
    approachesVisited: 0,
    stepsVisited: 0,
    methodsVisited: 0,
    snippetsSeen: 0,
    tipsSeen: 0,
    deadLinks: [],
  };
  const knownVideos = new Set(Object.keys(graph.pipeline_report.videos ?? {}));
  const base = initialState(graph.task_name);
  const overview = renderOverview(graph, base);

  for (const card of overview.outcomes) {
    const atOutcome = selectOutcome(graph, base, card.name);
    if (atOutcome.selectedOutcome !== card.name) {
      report.deadLinks.push(`outcome card ${card.name} does not select`);
      continue;
    }
    report.outcomesVisited += 1;

    const tabs = renderOverview(graph, atOutcome).tabs;
    for (const tab of tabs) {
      const atApproach = selectApproach(graph, atOutcome, tab.kind);
      if (atApproach.selectedApproachKind !== tab.kind) {
        report.deadLinks.push(`tab ${card.name}/${tab.kind} does not select`);
        continue;
      }
      report.approachesVisited += 1;

      const page = renderOverview(graph, atApproach);
      for (const step of page.steps) {
        const atStep = expandStep(graph, atApproach, step.name);
        if (atStep.expandedStep !== step.name) {
          report.deadLinks.push(`step ${card.name}/${tab.kind}/${step.name} does not expand`);
          continue;
        }
        report.stepsVisited += 1;

        const details = renderDetails(graph, atStep);
        if (!details) {
          report.deadLinks.push(`details page missing for ${card.name}/${tab.kind}`);
          continue;
        }
        const expanded = details.steps.find((s) => s.expanded);
        for (const methodVM of expanded?.methods ?? []) {
          const atMethod = selectMethod(graph, atStep, methodVM.name);
          if (atMethod.selectedMethod !== methodVM.name) {
            report.deadLinks.push(
              `method ${card.name}/${tab.kind}/${step.name}/${methodVM.name} does not select`,
            );
            continue;
          }
          report.methodsVisited += 1;

          const methodDetails = renderDetails(graph, atMethod);
          if (!methodDetails) continue;
          if (methodDetails.snippets.length === 0) {
            report.deadLinks.push(
              `method ${step.name}/${methodVM.name} renders with no snippets`,
            );
          }
          if (!methodDetails.snippets.some((s) => s.active)) {
            report.deadLinks.push(
              `method ${step.name}/${methodVM.name} has no active snippet`,
            );
          }
          for (const snippet of methodDetails.snippets) {
            report.snippetsSeen += 1;
            if (!knownVideos.has(snippet.clip.video_id)) {
              report.deadLinks.push(
                `clip ${snippet.clip.video_id} not in the corpus manifest`,
              );
            }
            if (!snippet.summary) {
              report.deadLinks.push(`clip ${snippet.clip.video_id} has no summary`);
            }
          }
          for (const tip of methodDetails.tips) {
            report.tipsSeen += 1;
            if (tip.groundings.length === 0) {
              report.deadLinks.push(`tip "${tip.text}" has no grounding`);
            }
            for (const g of tip.groundings) {
              if (!knownVideos.has(g.video_id)) {
                report.deadLinks.push(`tip grounding ${g.video_id} unknown`);
              }
            }
          }
        }
      }
    }
  }
  return report;
}

/** Totals straight off the graph, for comparing against a crawl. */
export function graphTotals(graph: TaskGraph) {
  let approaches = 0;
  let steps = 0;
  let methods = 0;
  for (const cluster of graph.outcome_clusters) {
    approaches += cluster.approaches.length;
    for (const approach of cluster.approaches) {
      steps += approach.steps.length;
      for (const step of approach.steps) {
        methods += step.methods.length;
      }
    }
  }
  return {
    outcomes: graph.outcome_clusters.length,
    approaches,
    steps,
    methods,
  };
}
