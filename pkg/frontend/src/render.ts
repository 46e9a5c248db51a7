/**
 * DOM construction for the three screens: task, progress/owner, done.
 *
 * Rendering works from the service payload alone. Outputs are identified by
 * slot label only; nothing that reaches this module knows which system
 * produced which output, so the blinding guarantee is structural.
 */

import type { ProgressResponse, TaskPayload } from "./api.js";
import {
  ACCURACY_CATEGORIES,
  FLUENCY_CATEGORIES,
  NON_TRANSLATION,
  RATING_DESCRIPTIONS,
  RATING_VALUES,
  SEVERITIES,
  spanAllowed,
  type Draft,
} from "./state.js";

export interface TaskScreenHandlers {
  onRate(slot: string, rating: number): void;
  onAddError(slot: string, category: string, severity: "minor" | "major", span: [number, number] | null): void;
  onRemoveError(slot: string, index: number): void;
  onSubmit(): void;
}

function el<K extends keyof HTMLElementTagNameMap>(
  tag: K,
  attrs: Record<string, string> = {},
  text?: string,
): HTMLElementTagNameMap[K] {
  const node = document.createElement(tag);
  for (const [key, value] of Object.entries(attrs)) {
    node.setAttribute(key, value);
  }
  if (text !== undefined) node.textContent = text;
  return node;
}

function progressCounter(done: number, total: number): HTMLElement {
  const counter = el("div", { class: "progress-counter" });
  counter.append(el("span", { class: "progress-done" }, String(done)));
  counter.append(el("span", {}, ` / ${total} units`));
  return counter;
}

function ratingWidget(slot: string, draft: Draft, handlers: TaskScreenHandlers): HTMLElement {
  const box = el("fieldset", { class: "rating-widget" });
  box.append(el("legend", {}, `Quality rating for Output ${slot}`));
  for (const value of RATING_VALUES) {
    const id = `rating-${slot}-${value}`;
    const row = el("label", { class: "rating-option", for: id });
    const input = el("input", {
      type: "radio",
      id,
      name: `rating-${slot}`,
      value: String(value),
    });
    if (draft[slot]?.rating === value) input.checked = true;
    input.addEventListener("change", () => handlers.onRate(slot, value));
    row.append(input);
    row.append(el("span", { class: "rating-value" }, String(value)));
    row.append(el("span", { class: "rating-description" }, RATING_DESCRIPTIONS[value]));
    box.append(row);
  }
  return box;
}

function currentSelectionSpan(outputNode: HTMLElement, text: string): [number, number] | null {
  const selection = outputNode.ownerDocument.defaultView?.getSelection?.();
  if (!selection || selection.rangeCount === 0 || selection.isCollapsed) return null;
  const selected = selection.toString();
  if (!selected) return null;
  const start = text.indexOf(selected);
  if (start < 0) return null;
  return [start, start + selected.length];
}

function errorPalette(
  slot: string,
  outputNode: HTMLElement,
  outputText: string,
  handlers: TaskScreenHandlers,
): HTMLElement {
  const palette = el("div", { class: "error-palette" });
  const severitySelect = el("select", { class: "severity-select", "aria-label": `Severity for Output ${slot}` });
  for (const severity of SEVERITIES) {
    severitySelect.append(el("option", { value: severity }, severity));
  }

  const groups: Array<[string, readonly string[]]> = [
    ["Non-translation", [NON_TRANSLATION]],
    ["Accuracy", ACCURACY_CATEGORIES],
    ["Fluency", FLUENCY_CATEGORIES],
  ];
  for (const [title, categories] of groups) {
    const group = el("div", { class: "palette-group" });
    group.append(el("h4", {}, title));
    for (const category of categories) {
      const button = el("button", {
        type: "button",
        class: "palette-button",
        "data-category": category,
      }, category.replace(/_/g, " "));
      button.addEventListener("click", () => {
        const severity = severitySelect.value as "minor" | "major";
        const span = spanAllowed(category)
          ? currentSelectionSpan(outputNode, outputText)
          : null; // whole-segment tag: span selection disabled
        handlers.onAddError(slot, category, severity, span);
      });
      group.append(button);
    }
    palette.append(group);
  }
  palette.append(el("label", { class: "severity-label" }, "severity "));
  palette.append(severitySelect);
  return palette;
}

function errorList(slot: string, draft: Draft, handlers: TaskScreenHandlers): HTMLElement {
  const list = el("ul", { class: "error-list" });
  (draft[slot]?.errors ?? []).forEach((tag, index) => {
    const item = el("li", { class: "error-item" });
    const spanText = tag.span ? ` [${tag.span[0]}..${tag.span[1]}]` : "";
    item.append(el("span", {}, `${tag.category.replace(/_/g, " ")} (${tag.severity})${spanText}`));
    const remove = el("button", { type: "button", class: "remove-error" }, "remove");
    remove.addEventListener("click", () => handlers.onRemoveError(slot, index));
    item.append(remove);
    list.append(item);
  });
  return list;
}

/** The annotation screen: source, reference and the blinded outputs side by side. */
export function renderTaskScreen(
  root: HTMLElement,
  task: TaskPayload,
  draft: Draft,
  handlers: TaskScreenHandlers,
  inlineErrors: string[] = [],
): void {
  root.textContent = "";
  const screen = el("div", { class: "task-screen" });
  screen.append(progressCounter(task.done_units, task.total_units));
  screen.append(el("h2", {}, `Segment ${task.segment_id}`));

  const context = el("div", { class: "context-panel" });
  const sourceBlock = el("div", { class: "source-block" });
  sourceBlock.append(el("h3", {}, "Source"));
  sourceBlock.append(el("p", { class: "source-text" }, task.source));
  const referenceBlock = el("div", { class: "reference-block" });
  referenceBlock.append(el("h3", {}, "Reference"));
  referenceBlock.append(el("p", { class: "reference-text" }, task.reference));
  context.append(sourceBlock, referenceBlock);
  screen.append(context);

  const outputs = el("div", { class: "outputs-row" });
  for (const slot of Object.keys(task.outputs).sort()) {
    const text = task.outputs[slot];
    const panel = el("section", { class: "output-panel", "data-slot": slot });
    panel.append(el("h3", {}, `Output ${slot}`));
    const outputNode = el("p", { class: "output-text" }, text);
    panel.append(outputNode);
    panel.append(ratingWidget(slot, draft, handlers));
    panel.append(errorPalette(slot, outputNode, text, handlers));
    panel.append(errorList(slot, draft, handlers));
    outputs.append(panel);
  }
  screen.append(outputs);

  const problems = el("div", { class: "inline-errors", role: "alert" });
  for (const problem of inlineErrors) {
    problems.append(el("p", { class: "inline-error" }, problem));
  }
  screen.append(problems);

  const submit = el("button", { type: "button", class: "submit-button" }, "Submit both outputs");
  const ready = Object.values(draft).every((slotDraft) => slotDraft.rating !== null);
  if (!ready) submit.setAttribute("disabled", "disabled");
  submit.addEventListener("click", () => handlers.onSubmit());
  screen.append(submit);

  root.append(screen);
}

/** Completion screen once every unit assigned to this annotator is done. */
export function renderDoneScreen(root: HTMLElement, done: number, total: number): void {
  root.textContent = "";
  const screen = el("div", { class: "done-screen" });
  screen.append(el("h2", {}, "All annotations complete"));
  screen.append(progressCounter(done, total));
  screen.append(el("p", {}, "Thank you; every assigned output has been annotated."));
  root.append(screen);
}

/**
 * Progress screen. Annotators only ever see counters; the per-system report
 * tables render exclusively in the owner view, and only once the campaign is
 * complete does an annotator-facing link to them make sense at all.
 */
export function renderProgressScreen(
  root: HTMLElement,
  progress: ProgressResponse,
  ownerReportJson: string | null,
): void {
  root.textContent = "";
  const screen = el("div", { class: "progress-screen" });
  screen.append(el("h2", {}, "Campaign progress"));
  screen.append(progressCounter(progress.done, progress.total));
  const perAnnotator = el("ul", { class: "per-annotator" });
  for (const [annotator, counts] of Object.entries(progress.per_annotator)) {
    perAnnotator.append(el("li", {}, `${annotator}: ${counts.done} / ${counts.total}`));
  }
  screen.append(perAnnotator);

  if (ownerReportJson !== null) {
    const owner = el("div", { class: "owner-report" });
    owner.append(el("h3", {}, "Report bundle (owner view)"));
    owner.append(el("pre", { class: "report-json" }, ownerReportJson));
    screen.append(owner);
  }
  root.append(screen);
}
