/** Shared domain types mirroring the annotation service's JSON API. */

export type ALLabel = "TRUE" | "FALSE" | "DISCARD";
export type StyleTag = "R" | "A";
export type Category = "ENT" | "LING" | "SYS" | "ADD";

export const AL_LABELS: readonly ALLabel[] = ["TRUE", "FALSE", "DISCARD"];
export const STYLE_TAGS: readonly StyleTag[] = ["R", "A"];

/** Type tags grouped by category, with guideline descriptions for tooltips. */
export const TYPE_TAGS: Readonly<Record<Category, readonly { tag: string; hint: string }[]>> = {
  ENT: [
    { tag: "ENT-REP", hint: "Entity replaced by a fuller or clearer variant" },
    { tag: "ENT-DESC", hint: "Descriptive gloss added to a named entity" },
    { tag: "ENT-SPEC", hint: "Entity made more specific for the target audience" },
    { tag: "ENT-HYP", hint: "Entity generalized to a hypernym" },
    { tag: "ENT-ACR", hint: "Entity acronym expanded or introduced" },
  ],
  LING: [
    { tag: "TRANS", hint: "Source-language term carried over with a translation" },
    { tag: "LING-EXPL", hint: "Implicit linguistic material spelled out" },
    { tag: "ACR", hint: "Non-entity acronym expanded" },
    { tag: "HYPER", hint: "More general term substituted (hypernym)" },
    { tag: "HYPO-SPEC", hint: "More specific term substituted (hyponym)" },
  ],
  SYS: [
    { tag: "MEAS-CONV", hint: "Measurement converted to target-culture units" },
    { tag: "MEAS-DIM", hint: "Dimension or quantity made explicit" },
    { tag: "MEAS-SPEC", hint: "Measurement made more precise" },
    { tag: "SYS-CONV", hint: "System or convention localized" },
    { tag: "SYS-DESC", hint: "Source-culture system described" },
  ],
  ADD: [
    { tag: "ADD-INF", hint: "Information added with no direct source trigger" },
    { tag: "CLEAR", hint: "Implicit meaning spelled out" },
    { tag: "DEIX", hint: "Deictic reference resolved explicitly" },
    { tag: "OTHER", hint: "Explicitation not covered by the other tags" },
  ],
};

export const ALL_TYPE_TAGS: readonly string[] = Object.values(TYPE_TAGS).flatMap(
  (group) => group.map((t) => t.tag),
);

export interface Span {
  tgt_start: number;
  tgt_end: number;
  src_start?: number | null;
  src_end?: number | null;
}

/** A queried instance as served by GET /tasks/next. */
export interface Task {
  record_id: string;
  source: string;
  target: string;
  spans: [number, number][];
  provenance: string;
  round: number;
}

/** Body item for POST /labels. */
export interface Submission {
  task_id: string;
  al_label: string;
  spans: Span[];
  types: string[];
  styles: string[];
  annotator?: string;
}

export interface SubmissionResult {
  task_id: string;
  accepted: boolean;
  violations: string[];
}

export interface RoundInfo {
  round: number;
  phase: string;
  batch_size: number;
  open_tasks: number;
}

export interface Progress {
  round: number;
  current_round_counts: Record<ALLabel, number>;
  labeled_total_counts: Record<ALLabel, number>;
  submitted: number;
  open_tasks: number;
}
