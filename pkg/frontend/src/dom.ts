/**
 * DOM rendering: view models in, elements out.
 *
 * The app redraws the active page (overview or details) on every state
 * change; handlers receive user intents and the shell in main.ts maps
 * them to state transitions.
 */

import { PlayerVM, DetailsVM, OverviewVM } from "./views.js";
import { ApproachKind, Tip } from "./types.js";

export interface Handlers {
  onSelectOutcome(name: string): void;
  onSelectApproach(kind: ApproachKind): void;
  onOpenStep(name: string): void;
  onSelectMethod(name: string): void;
  onSelectClip(videoId: string, startS: number, endS: number): void;
  onBackToOverview(): void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  doc: Document,
  tag: K,
  className?: string,
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = doc.createElement(tag);
  if (className) node.className = className;
  if (text !== undefined) node.textContent = text;
  return node;
}

export function renderOverviewPage(
  doc: Document,
  vm: OverviewVM,
  assetBase: string,
  handlers: Handlers,
): HTMLElement {
  const page = el(doc, "section", "page overview");
  page.appendChild(el(doc, "h1", "task-title", vm.taskName));

  if (vm.empty) {
    page.appendChild(el(doc, "p", "placeholder", vm.placeholder ?? "Nothing here yet."));
    return page;
  }

  const cards = el(doc, "div", "outcome-cards");
  for (const card of vm.outcomes) {
    const button = el(doc, "button", card.selected ? "outcome-card selected" : "outcome-card");
    button.dataset.outcome = card.name;
    if (card.textual) {
      button.appendChild(el(doc, "div", "outcome-card-text", card.name));
    } else {
      for (const uri of card.images) {
        const img = el(doc, "img", "outcome-thumb");
        img.src = assetBase ? `${assetBase}/${uri}` : uri;
        img.alt = card.name;
        button.appendChild(img);
      }
    }
    button.appendChild(el(doc, "div", "outcome-name", card.name));
    button.appendChild(el(doc, "div", "outcome-count", `${card.videoCount} videos`));
    button.addEventListener("click", () => handlers.onSelectOutcome(card.name));
    cards.appendChild(button);
  }
  page.appendChild(cards);

  const tabs = el(doc, "div", "approach-tabs");
  for (const tab of vm.tabs) {
    const button = el(
      doc,
      "button",
      tab.selected ? "approach-tab selected" : "approach-tab",
      `${tab.label} (${tab.stepCount} steps, ${tab.videoCount} videos)`,
    );
    button.dataset.kind = tab.kind;
    button.addEventListener("click", () => handlers.onSelectApproach(tab.kind));
    tabs.appendChild(button);
  }
  page.appendChild(tabs);

  if (vm.requirements.length) {
    const box = el(doc, "div", "requirements");
    box.appendChild(el(doc, "h2", undefined, "You will need"));
    const list = el(doc, "ul", "requirement-list");
    for (const item of vm.requirements) {
      const li = el(doc, "li", `requirement shade-${item.shade}`);
      li.appendChild(el(doc, "span", "requirement-name", item.name));
      li.appendChild(el(doc, "span", "requirement-meta", `${item.count} videos (${item.percent}%)`));
      li.title = item.kind.toLowerCase();
      list.appendChild(li);
    }
    box.appendChild(list);
    page.appendChild(box);
  }

  if (vm.steps.length) {
    const box = el(doc, "div", "steps");
    box.appendChild(el(doc, "h2", undefined, "Steps"));
    const list = el(doc, "ol", "step-list");
    for (const step of vm.steps) {
      const li = el(doc, "li", "step-row");
      const button = el(doc, "button", "step-open");
      button.appendChild(el(doc, "span", "step-name", step.name));
      button.appendChild(el(doc, "span", "step-description", step.description));
      button.addEventListener("click", () => handlers.onOpenStep(step.name));
      li.appendChild(button);
      list.appendChild(li);
    }
    box.appendChild(list);
    page.appendChild(box);
  }
  return page;
}

function renderTips(doc: Document, tips: Tip[]): HTMLElement {
  const box = el(doc, "div", "tips-panel");
  box.appendChild(el(doc, "h3", undefined, "Tips and notes"));
  if (!tips.length) {
    box.appendChild(el(doc, "p", "tips-empty", "No tips extracted for this method."));
    return box;
  }
  const list = el(doc, "ul", "tips-list");
  for (const tip of tips) {
    const li = el(doc, "li", "tip");
    li.appendChild(el(doc, "span", "tip-text", tip.text));
    const sources = tip.groundings
      .map((g) => `${g.video_id} [${g.sentence_start}-${g.sentence_end}]`)
      .join(", ");
    li.appendChild(el(doc, "span", "tip-sources", `from ${sources}`));
    list.appendChild(li);
  }
  box.appendChild(list);
  return box;
}

function renderPlayer(doc: Document, player: PlayerVM | null): HTMLElement {
  const box = el(doc, "div", "player-box");
  if (!player) {
    box.appendChild(el(doc, "p", "placeholder", "Select a method to watch its clips."));
    return box;
  }
  const video = el(doc, "video", "clip-video");
  video.id = "clip-video";
  video.controls = true;
  box.appendChild(video);
  const bounds = el(doc, "div", "clip-bounds");
  bounds.appendChild(el(doc, "span", "clip-bounds-label", `Segment ${player.boundsLabel}`));
  bounds.appendChild(el(doc, "span", "clip-source", `from ${player.playbackVideoId}`));
  box.appendChild(bounds);
  return box;
}

export function renderDetailsPage(
  doc: Document,
  vm: DetailsVM,
  handlers: Handlers,
): HTMLElement {
  const page = el(doc, "section", "page details");

  const header = el(doc, "div", "details-header");
  const back = el(doc, "button", "back-button", "< Overview");
  back.addEventListener("click", () => handlers.onBackToOverview());
  header.appendChild(back);
  header.appendChild(
    el(doc, "h1", "task-title", `${vm.taskName}: ${vm.outcome} (${vm.approachKind.toLowerCase()})`),
  );
  page.appendChild(header);

  if (vm.notice) {
    page.appendChild(el(doc, "div", "notice", vm.notice));
  }

  const columns = el(doc, "div", "details-columns");

  const left = el(doc, "div", "details-steps");
  const list = el(doc, "ol", "step-list vertical");
  for (const step of vm.steps) {
    const li = el(doc, "li", step.expanded ? "step-row expanded" : "step-row");
    const button = el(doc, "button", "step-open");
    button.appendChild(el(doc, "span", "step-name", step.name));
    button.appendChild(el(doc, "span", "step-description", step.description));
    button.addEventListener("click", () => handlers.onOpenStep(step.name));
    li.appendChild(button);
    if (step.expanded && step.methods.length) {
      const methods = el(doc, "ul", "method-list");
      for (const method of step.methods) {
        const mli = el(doc, "li");
        const mbutton = el(
          doc,
          "button",
          method.selected ? "method selected" : "method",
          `${method.name} (${method.clipCount} clips)`,
        );
        mbutton.addEventListener("click", () => handlers.onSelectMethod(method.name));
        mli.appendChild(mbutton);
        methods.appendChild(mli);
      }
      li.appendChild(methods);
    }
    list.appendChild(li);
  }
  left.appendChild(list);
  columns.appendChild(left);

  const right = el(doc, "div", "details-player");
  right.appendChild(renderPlayer(doc, vm.player));

  if (vm.snippets.length) {
    const switcher = el(doc, "div", "snippet-switcher"); // horizontal scroll
    for (const snippet of vm.snippets) {
      const button = el(doc, "button", snippet.active ? "snippet active" : "snippet");
      button.appendChild(el(doc, "span", "snippet-video", snippet.clip.video_id));
      button.appendChild(el(doc, "span", "snippet-summary", snippet.summary));
      button.addEventListener("click", () =>
        handlers.onSelectClip(snippet.clip.video_id, snippet.clip.start_s, snippet.clip.end_s),
      );
      switcher.appendChild(button);
    }
    right.appendChild(switcher);
  }
  right.appendChild(renderTips(doc, vm.tips));
  columns.appendChild(right);

  page.appendChild(columns);
  return page;
}
