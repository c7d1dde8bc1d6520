/** Label-panel state machine for one task.
 *
 * Holds the annotator's in-progress answer: the TRUE/FALSE/DISCARD label
 * (keyboard 1/2/3), token-granular spans, and one type tag + R/A style per
 * span. `canSubmit` runs the same validator the submission will face, so the
 * submit control is disabled exactly when the server would reject.
 */

import { countTokens, validateSubmission } from "./validate";
import { ALLabel, Submission, Task } from "./types";

export interface SpanDraft {
  tgt_start: number;
  tgt_end: number;
  type: string | null;
  style: "R" | "A";
}

export const KEY_TO_LABEL: Readonly<Record<string, ALLabel>> = {
  "1": "TRUE",
  "2": "FALSE",
  "3": "DISCARD",
};

export class LabelPanel {
  label: ALLabel | null = null;
  spans: SpanDraft[] = [];
  readonly nTokens: number;

  constructor(public readonly task: Task) {
    this.nTokens = countTokens(task.target);
    // pre-seed editable spans from the mined addition spans
    this.spans = task.spans.map(([s, e]) => ({ tgt_start: s, tgt_end: e, type: null, style: "A" }));
  }

  /** Keyboard shortcut handler; returns true when the key was consumed. */
  handleKey(key: string): boolean {
    const label = KEY_TO_LABEL[key];
    if (!label) return false;
    this.setLabel(label);
    return true;
  }

  setLabel(label: ALLabel): void {
    this.label = label;
  }

  addSpan(start: number, end: number): void {
    this.spans.push({ tgt_start: start, tgt_end: end, type: null, style: "A" });
  }

  removeSpan(index: number): void {
    this.spans.splice(index, 1);
  }

  /** Move a span edge by whole tokens (negative delta shrinks/extends left). */
  adjustSpan(index: number, edge: "start" | "end", delta: number): void {
    const span = this.spans[index];
    if (!span) return;
    if (edge === "start") span.tgt_start += delta;
    else span.tgt_end += delta;
  }

  setSpanType(index: number, type: string): void {
    if (this.spans[index]) this.spans[index].type = type;
  }

  toggleSpanStyle(index: number): void {
    const span = this.spans[index];
    if (span) span.style = span.style === "R" ? "A" : "R";
  }

  toSubmission(): Submission {
    const label = this.label ?? "FALSE";
    if (label !== "TRUE") {
      return { task_id: this.task.record_id, al_label: label, spans: [], types: [], styles: [] };
    }
    return {
      task_id: this.task.record_id,
      al_label: label,
      spans: this.spans.map((s) => ({ tgt_start: s.tgt_start, tgt_end: s.tgt_end })),
      types: this.spans.map((s) => s.type).filter((t): t is string => t !== null),
      styles: this.spans.map((s) => s.style),
    };
  }

  /** Why the current answer cannot be submitted yet (empty = ready). */
  submitBlockers(): string[] {
    if (this.label === null) {
      return ["pick a label first (1 = TRUE, 2 = FALSE, 3 = DISCARD)"];
    }
    const missingType = this.label === "TRUE" && this.spans.some((s) => s.type === null);
    const blockers = validateSubmission(this.toSubmission(), this.nTokens);
    if (missingType && !blockers.some((b) => b.startsWith("types"))) {
      blockers.push("types: every span needs a type tag");
    }
    return blockers;
  }

  canSubmit(): boolean {
    return this.submitBlockers().length === 0;
  }
}
