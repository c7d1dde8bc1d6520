/** Token-level span highlighting and the bracket-markup preview.
 *
 * All span indices are token indices with exclusive ends, exactly as the
 * service serves them; rendering never re-tokenizes beyond whitespace
 * splitting.
 */

export interface Segment {
  /** Token indices [start, end) covered by this segment. */
  start: number;
  end: number;
  tokens: string[];
  /** Index into the span list when highlighted, null for plain text. */
  spanIndex: number | null;
}

export function tokenize(text: string): string[] {
  return text.split(/\s+/).filter((t) => t.length > 0);
}

function sortedSpans(spans: [number, number][]): [number, number][] {
  return [...spans].sort((a, b) => a[0] - b[0] || a[1] - b[1]);
}

function checkSpans(spans: [number, number][], nTokens: number): void {
  let prevEnd = 0;
  for (const [start, end] of spans) {
    if (start < 0 || end > nTokens || start >= end) {
      throw new Error(`span [${start},${end}) out of bounds for ${nTokens} tokens`);
    }
    if (start < prevEnd) {
      throw new Error(`spans overlap at token ${start}`);
    }
    prevEnd = end;
  }
}

/** Split tokens into alternating plain/highlighted segments.
 *  Every token inside a span appears in exactly one highlighted segment whose
 *  bounds equal the span; everything else stays in plain segments. */
export function segmentTokens(tokens: string[], spans: [number, number][]): Segment[] {
  const ordered = sortedSpans(spans);
  checkSpans(ordered, tokens.length);
  const indexOf = new Map(ordered.map((s) => [`${s[0]}-${s[1]}`, spans.indexOf(s)]));
  const segments: Segment[] = [];
  let cursor = 0;
  ordered.forEach(([start, end]) => {
    if (cursor < start) {
      segments.push({ start: cursor, end: start, tokens: tokens.slice(cursor, start), spanIndex: null });
    }
    segments.push({
      start,
      end,
      tokens: tokens.slice(start, end),
      spanIndex: indexOf.get(`${start}-${end}`) ?? null,
    });
    cursor = end;
  });
  if (cursor < tokens.length) {
    segments.push({ start: cursor, end: tokens.length, tokens: tokens.slice(cursor), spanIndex: null });
  }
  return segments;
}

/** The exact set of highlighted token indices (for DOM assertions). */
export function highlightedIndices(tokens: string[], spans: [number, number][]): number[] {
  const out: number[] = [];
  for (const seg of segmentTokens(tokens, spans)) {
    if (seg.spanIndex !== null) {
      for (let i = seg.start; i < seg.end; i++) out.push(i);
    }
  }
  return out;
}

/** Render the target as HTML with one <mark> per span (distinct class per span). */
export function renderHighlightHTML(target: string, spans: [number, number][]): string {
  const tokens = tokenize(target);
  return segmentTokens(tokens, spans)
    .map((seg) => {
      const text = seg.tokens.map(escapeHTML).join(" ");
      if (seg.spanIndex === null) return text;
      return `<mark class="span span-${seg.spanIndex % 6}" data-span="${seg.spanIndex}">${text}</mark>`;
    })
    .join(" ");
}

/** Bracket markup preview: span tokens wrapped as "[ ... ]" with space padding.
 *  Must match the service's /render/brackets output character for character. */
export function bracketPreview(target: string, spans: [number, number][]): string {
  const tokens = tokenize(target);
  const ordered = sortedSpans(spans);
  checkSpans(ordered, tokens.length);
  const starts = new Set(ordered.map(([s]) => s));
  const ends = new Set(ordered.map(([, e]) => e));
  const out: string[] = [];
  tokens.forEach((tok, i) => {
    if (starts.has(i)) out.push("[");
    out.push(tok);
    if (ends.has(i + 1)) out.push("]");
  });
  return out.join(" ");
}

function escapeHTML(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}
