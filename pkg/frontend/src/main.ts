/**
 * App shell: fetch -> state -> render loop with URL-backed navigation.
 *
 * The API origin defaults to the serving host's port 8000 and can be
 * overridden with `?api=http://host:port`. Assets referenced by relative
 * uri (outcome thumbnails) resolve against `?assets=...` when given.
 */

import { ApiClient } from "./api.js";
import { renderDetailsPage, renderOverviewPage, Handlers } from "./dom.js";
import { ClipPlayer } from "./player.js";
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
  ViewState,
} from "./state.js";
import { TaskGraph, TaskSummary } from "./types.js";
import { renderDetails, renderOverview } from "./views.js";

const params = new URLSearchParams(window.location.search);
const apiBase = params.get("api") ?? `http://${window.location.hostname}:8000`;
const assetBase = params.get("assets") ?? "";

const api = new ApiClient(apiBase);
const root = document.getElementById("app")!;

let graph: TaskGraph | null = null;
let state: ViewState = initialState();
let tasks: TaskSummary[] = [];
let suppressHashHandler = false;

function setState(next: ViewState): void {
  state = next;
  suppressHashHandler = true;
  window.location.hash = encodeState(state);
  render();
}

const handlers: Handlers = {
  onSelectOutcome: (name) => graph && setState(selectOutcome(graph, state, name)),
  onSelectApproach: (kind) => graph && setState(selectApproach(graph, state, kind)),
  onOpenStep: (name) => graph && setState(expandStep(graph, state, name)),
  onSelectMethod: (name) => graph && setState(selectMethod(graph, state, name)),
  onSelectClip: (videoId, startS, endS) =>
    graph &&
    setState(selectClip(graph, state, { video_id: videoId, start_s: startS, end_s: endS })),
  onBackToOverview: () =>
    setState({ ...state, expandedStep: null, selectedMethod: null, activeClip: null, notice: null }),
};

function renderTaskPicker(): HTMLElement {
  const nav = document.createElement("nav");
  nav.className = "task-picker";
  for (const task of tasks) {
    const button = document.createElement("button");
    button.textContent = `${task.task_name} (${task.outcome_count} outcomes, ${task.video_count} videos)`;
    button.className = task.task_name === state.task ? "task selected" : "task";
    button.addEventListener("click", () => void openTask(task));
    nav.appendChild(button);
  }
  return nav;
}

function render(): void {
  root.replaceChildren(renderTaskPicker());
  if (!graph) {
    const p = document.createElement("p");
    p.className = "placeholder";
    p.textContent = tasks.length ? "Pick a task to explore." : "No task graphs on the server.";
    root.appendChild(p);
    return;
  }
  const details = state.expandedStep ? renderDetails(graph, state) : null;
  if (details) {
    root.appendChild(renderDetailsPage(document, details, handlers));
    wirePlayer();
  } else {
    root.appendChild(renderOverviewPage(document, renderOverview(graph, state), assetBase, handlers));
  }
}

function wirePlayer(): void {
  const video = document.getElementById("clip-video") as HTMLVideoElement | null;
  if (!video || !state.activeClip || !graph) return;
  const clip = state.activeClip;
  const player = new ClipPlayer(video);
  video.addEventListener("timeupdate", () => player.handleTimeUpdate());
  video.addEventListener("seeking", () => {
    if (Math.abs(video.currentTime - clip.start_s) > 0.01) player.scrub(video.currentTime);
  });
  video.addEventListener("error", () => graph && setState(clipLoadFailed(graph, state)));
  api
    .resolveClip(clip.video_id, clip.start_s, clip.end_s)
    .then((resolution) => {
      video.src = resolution.playback_ref;
      player.load({ start_s: resolution.start_s, end_s: resolution.end_s });
    })
    .catch(() => graph && setState(clipLoadFailed(graph, state)));
}

async function openTask(task: TaskSummary): Promise<void> {
  graph = await api.getGraph(task.slug);
  setState({ ...initialState(task.task_name) });
}

async function applyHash(): Promise<void> {
  const decoded = decodeState(window.location.hash);
  if (decoded.task && decoded.task !== state.task) {
    const task = tasks.find((t) => t.task_name === decoded.task || t.slug === decoded.task);
    if (task) graph = await api.getGraph(task.slug);
  }
  state = graph ? normalize(graph, decoded) : decoded;
  render();
}

window.addEventListener("hashchange", () => {
  if (suppressHashHandler) {
    suppressHashHandler = false;
    return;
  }
  void applyHash();
});

async function boot(): Promise<void> {
  try {
    tasks = await api.listTasks();
  } catch {
    root.textContent = `Cannot reach the task API at ${apiBase}`;
    return;
  }
  if (window.location.hash.length > 2) {
    await applyHash();
    return;
  }
  if (tasks.length === 1) {
    await openTask(tasks[0]);
    return;
  }
  render();
}

void boot();
