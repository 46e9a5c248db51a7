/**
 * Draft annotation state: what the annotator has entered for the current
 * segment before submitting. Pure logic, no DOM, so every rule is testable.
 *
 * A draft covers both displayed slots at once; it is submittable only when
 * every slot has a rating. Drafts persist to storage per (annotator,
 * segment) so a reload never loses more than un-keyed scratch state.
 */

import type { ErrorTagPayload, TaskPayload } from "./api.js";

// Core error tagset, in display order, grouped the way the palette shows it.
export const NON_TRANSLATION = "non_translation";
export const ACCURACY_CATEGORIES = [
  "addition",
  "omission",
  "mistranslation",
  "untranslated_text",
] as const;
export const FLUENCY_CATEGORIES = [
  "punctuation",
  "spelling",
  "grammar",
  "register",
  "inconsistency",
  "character_encoding",
] as const;
export const ALL_CATEGORIES: readonly string[] = [
  NON_TRANSLATION,
  ...ACCURACY_CATEGORIES,
  ...FLUENCY_CATEGORIES,
];

export const SEVERITIES = ["minor", "major"] as const;

/** Anchored quality levels; odd values are the in-between choices. */
export const RATING_DESCRIPTIONS: Record<number, string> = {
  6: "Perfect meaning and grammar",
  5: "Between levels 4 and 6",
  4: "Most meaning preserved, few grammar mistakes",
  3: "Between levels 2 and 4",
  2: "Some meaning preserved",
  1: "Between levels 0 and 2",
  0: "Nonsense, no meaning preserved",
};
export const RATING_VALUES = [6, 5, 4, 3, 2, 1, 0] as const;

export interface SlotDraft {
  rating: number | null;
  errors: ErrorTagPayload[];
}

export type Draft = Record<string, SlotDraft>;

export function emptyDraft(task: TaskPayload): Draft {
  const draft: Draft = {};
  for (const slot of Object.keys(task.outputs).sort()) {
    draft[slot] = { rating: null, errors: [] };
  }
  return draft;
}

export function setRating(draft: Draft, slot: string, rating: number): Draft {
  return { ...draft, [slot]: { ...draft[slot], rating } };
}

export function addErrorTag(draft: Draft, slot: string, tag: ErrorTagPayload): Draft {
  const slotDraft = draft[slot];
  return { ...draft, [slot]: { ...slotDraft, errors: [...slotDraft.errors, tag] } };
}

export function removeErrorTag(draft: Draft, slot: string, index: number): Draft {
  const slotDraft = draft[slot];
  const errors = slotDraft.errors.filter((_, i) => i !== index);
  return { ...draft, [slot]: { ...slotDraft, errors } };
}

/** Submission is blocked until every slot has a rating. */
export function isSubmittable(draft: Draft): boolean {
  return Object.values(draft).every((slot) => slot.rating !== null);
}

/** Span tagging is disabled for whole-segment categories. */
export function spanAllowed(category: string): boolean {
  return category !== NON_TRANSLATION;
}

/** Local validation mirror of the service rules; returns problems by slot. */
export function validateDraft(draft: Draft, task: TaskPayload): string[] {
  const problems: string[] = [];
  for (const [slot, slotDraft] of Object.entries(draft)) {
    if (slotDraft.rating === null) {
      problems.push(`Output ${slot}: choose a rating before submitting`);
    } else if (!Number.isInteger(slotDraft.rating) || slotDraft.rating < 0 || slotDraft.rating > 6) {
      problems.push(`Output ${slot}: rating must be between 0 and 6`);
    }
    const text = task.outputs[slot] ?? "";
    for (const tag of slotDraft.errors) {
      if (!ALL_CATEGORIES.includes(tag.category)) {
        problems.push(`Output ${slot}: unknown category "${tag.category}"`);
      }
      if (!SEVERITIES.includes(tag.severity)) {
        problems.push(`Output ${slot}: unknown severity "${tag.severity}"`);
      }
      if (tag.span) {
        if (!spanAllowed(tag.category)) {
          problems.push(`Output ${slot}: ${tag.category} flags the whole output, no span`);
        } else if (tag.span[0] < 0 || tag.span[1] > text.length || tag.span[0] > tag.span[1]) {
          problems.push(`Output ${slot}: span is outside the output text`);
        }
      }
    }
  }
  return problems;
}

// ---------------------------------------------------------------------------
// Draft persistence: one storage key per (annotator, segment).

export interface DraftStore {
  getItem(key: string): string | null;
  setItem(key: string, value: string): void;
  removeItem(key: string): void;
}

export function draftKey(annotator: string, segmentId: number): string {
  return `lowmt-draft:${annotator}:${segmentId}`;
}

export function saveDraft(store: DraftStore, annotator: string, segmentId: number, draft: Draft): void {
  store.setItem(draftKey(annotator, segmentId), JSON.stringify(draft));
}

export function loadDraft(store: DraftStore, annotator: string, segmentId: number): Draft | null {
  const raw = store.getItem(draftKey(annotator, segmentId));
  if (!raw) return null;
  try {
    return JSON.parse(raw) as Draft;
  } catch {
    return null;
  }
}

export function clearDraft(store: DraftStore, annotator: string, segmentId: number): void {
  store.removeItem(draftKey(annotator, segmentId));
}
