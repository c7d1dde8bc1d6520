/** Client-side submission validation.
 *
 * Mirrors the service's rules exactly so nothing leaves the client that the
 * server would reject: unknown labels/tags/styles, span/type/style presence
 * rules per label, span bounds, and span overlap. The golden-fixture test
 * holds this file in lockstep with the backend.
 */

import { AL_LABELS, ALL_TYPE_TAGS, STYLE_TAGS, Submission } from "./types";

/** Token count of a whitespace-separated target string (empty chunks dropped). */
export function countTokens(target: string): number {
  return target.split(/\s+/).filter((t) => t.length > 0).length;
}

/** Violations for a submission against a target with `nTokens` tokens.
 *  Empty array means the server will accept it. */
export function validateSubmission(sub: Submission, nTokens: number): string[] {
  const violations: string[] = [];

  // enum membership: the server refuses to even build a record from these
  if (!(AL_LABELS as readonly string[]).includes(sub.al_label)) {
    violations.push(`al_label: unknown label ${sub.al_label}`);
    return violations;
  }
  for (const t of sub.types) {
    if (!ALL_TYPE_TAGS.includes(t)) {
      violations.push(`types: unknown tag ${t}`);
      return violations;
    }
  }
  for (const s of sub.styles) {
    if (!(STYLE_TAGS as readonly string[]).includes(s)) {
      violations.push(`styles: unknown style ${s}`);
      return violations;
    }
  }

  if (!sub.task_id) {
    violations.push("id: empty");
  }
  if (sub.al_label === "TRUE") {
    if (sub.spans.length < 1) {
      violations.push("spans: empty on TRUE record");
    }
    if (sub.types.length < 1) {
      violations.push("types: empty on TRUE record");
    }
    if (sub.styles.length !== sub.spans.length) {
      violations.push(`styles: ${sub.styles.length} styles for ${sub.spans.length} spans`);
    }
  } else {
    if (sub.spans.length > 0) {
      violations.push(`spans: nonempty on ${sub.al_label} record`);
    }
    if (sub.types.length > 0) {
      violations.push(`types: nonempty on ${sub.al_label} record`);
    }
    if (sub.styles.length > 0) {
      violations.push(`styles: nonempty on ${sub.al_label} record`);
    }
  }

  const sorted = [...sub.spans].sort((a, b) => a.tgt_start - b.tgt_start);
  let prevEnd: number | null = null;
  sorted.forEach((span, i) => {
    const ok = 0 <= span.tgt_start && span.tgt_start < span.tgt_end && span.tgt_end <= nTokens;
    if (!ok) {
      violations.push(
        `spans[${i}]: out of bounds [${span.tgt_start},${span.tgt_end}) for ${nTokens} tokens`,
      );
    }
    if (prevEnd !== null && span.tgt_start < prevEnd) {
      violations.push(`spans[${i}]: overlaps previous span`);
    }
    prevEnd = span.tgt_end;
  });
  return violations;
}
