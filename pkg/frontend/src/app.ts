/**
 * The annotator application: fetch next task, collect the draft, submit
 * both slots, advance. One instance per browser session.
 *
 * Drafts persist to storage on every change, keyed by (annotator, segment),
 * so reloading mid-annotation restores the work in progress; submitted units
 * live on the server and are never at risk.
 */

import { ApiClient, ApiError, type TaskPayload } from "./api.js";
import { renderDoneScreen, renderTaskScreen, type TaskScreenHandlers } from "./render.js";
import {
  addErrorTag,
  clearDraft,
  emptyDraft,
  isSubmittable,
  loadDraft,
  removeErrorTag,
  saveDraft,
  setRating,
  validateDraft,
  type Draft,
  type DraftStore,
} from "./state.js";

export class AnnotatorApp {
  task: TaskPayload | null = null;
  draft: Draft = {};
  inlineErrors: string[] = [];
  complete = false;

  constructor(
    private readonly root: HTMLElement,
    private readonly api: ApiClient,
    private readonly annotator: string,
    private readonly store: DraftStore,
  ) {}

  async start(): Promise<void> {
    const next = await this.api.next(this.annotator);
    if (next.complete || !next.task) {
      this.task = null;
      this.complete = true;
      renderDoneScreen(this.root, next.done ?? 0, next.total ?? 0);
      return;
    }
    this.task = next.task;
    this.complete = false;
    this.draft = loadDraft(this.store, this.annotator, next.task.segment_id) ?? emptyDraft(next.task);
    this.inlineErrors = [];
    this.render();
  }

  private handlers(): TaskScreenHandlers {
    return {
      onRate: (slot, rating) => this.update(setRating(this.draft, slot, rating)),
      onAddError: (slot, category, severity, span) =>
        this.update(addErrorTag(this.draft, slot, { category, severity, span })),
      onRemoveError: (slot, index) => this.update(removeErrorTag(this.draft, slot, index)),
      onSubmit: () => {
        void this.submitCurrent();
      },
    };
  }

  private update(draft: Draft): void {
    if (!this.task) return;
    this.draft = draft;
    saveDraft(this.store, this.annotator, this.task.segment_id, draft);
    this.render();
  }

  private render(): void {
    if (!this.task) return;
    renderTaskScreen(this.root, this.task, this.draft, this.handlers(), this.inlineErrors);
  }

  /**
   * Validate locally, then post one submission per slot. Service-side
   * validation failures surface inline and leave the draft untouched; a
   * conflict on one slot (e.g. a replayed request) is treated as already
   * recorded and the remaining slots still go out.
   */
  async submitCurrent(): Promise<boolean> {
    if (!this.task) return false;
    if (!isSubmittable(this.draft)) {
      this.inlineErrors = ["Every output needs a rating before submitting"];
      this.render();
      return false;
    }
    const problems = validateDraft(this.draft, this.task);
    if (problems.length > 0) {
      this.inlineErrors = problems;
      this.render();
      return false;
    }
    for (const slot of this.task.pending_slots) {
      const slotDraft = this.draft[slot];
      try {
        await this.api.submit(this.annotator, {
          segment_id: this.task.segment_id,
          slot,
          rating: slotDraft.rating as number,
          errors: slotDraft.errors,
        });
      } catch (error) {
        if (error instanceof ApiError && error.isConflict) {
          continue; // already recorded server-side; not a draft problem
        }
        if (error instanceof ApiError) {
          const field = error.payload.field ? ` (${error.payload.field})` : "";
          this.inlineErrors = [`Output ${slot}: ${error.message}${field}`];
          this.render(); // draft stays intact for correction
          return false;
        }
        throw error;
      }
    }
    clearDraft(this.store, this.annotator, this.task.segment_id);
    await this.start();
    return true;
  }
}
