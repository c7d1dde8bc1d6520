import { describe, expect, it } from "vitest";

import {
  bracketPreview,
  highlightedIndices,
  renderHighlightHTML,
  segmentTokens,
  tokenize,
} from "../src/highlight";
import golden from "./fixtures/golden.json";

interface BracketCase {
  target: string;
  spans: [number, number][];
  rendered: string;
}

const bracketCases = golden.brackets as BracketCase[];

describe("tokenize", () => {
  it("splits on arbitrary whitespace", () => {
    expect(tokenize("a  b\tc")).toEqual(["a", "b", "c"]);
    expect(tokenize("  ")).toEqual([]);
  });
});

describe("highlightedIndices", () => {
  it("matches the task span indices exactly", () => {
    const tokens = tokenize("t0 t1 t2 t3 t4 t5 t6");
    expect(highlightedIndices(tokens, [[1, 3], [5, 6]])).toEqual([1, 2, 5]);
  });

  it("is empty without spans and full for a whole-sentence span", () => {
    const tokens = ["a", "b", "c"];
    expect(highlightedIndices(tokens, [])).toEqual([]);
    expect(highlightedIndices(tokens, [[0, 3]])).toEqual([0, 1, 2]);
  });

  it("handles unsorted span input", () => {
    const tokens = tokenize("a b c d e f");
    expect(highlightedIndices(tokens, [[4, 6], [0, 1]])).toEqual([0, 4, 5]);
  });
});

describe("segmentTokens", () => {
  it("partitions tokens into alternating plain/highlighted segments", () => {
    const tokens = tokenize("a b c d e");
    const segs = segmentTokens(tokens, [[1, 3]]);
    expect(segs).toEqual([
      { start: 0, end: 1, tokens: ["a"], spanIndex: null },
      { start: 1, end: 3, tokens: ["b", "c"], spanIndex: 0 },
      { start: 3, end: 5, tokens: ["d", "e"], spanIndex: null },
    ]);
  });

  it("keeps the original span list index after sorting", () => {
    const tokens = tokenize("a b c d e f");
    const segs = segmentTokens(tokens, [[4, 6], [0, 1]]);
    const highlighted = segs.filter((s) => s.spanIndex !== null);
    expect(highlighted.map((s) => [s.start, s.end, s.spanIndex])).toEqual([
      [0, 1, 1],
      [4, 6, 0],
    ]);
  });

  it("rejects out-of-bounds and overlapping spans", () => {
    const tokens = ["a", "b", "c"];
    expect(() => segmentTokens(tokens, [[0, 4]])).toThrow(/out of bounds/);
    expect(() => segmentTokens(tokens, [[2, 2]])).toThrow(/out of bounds/);
    expect(() => segmentTokens(tokens, [[0, 2], [1, 3]])).toThrow(/overlap/);
  });
});

describe("renderHighlightHTML", () => {
  it("wraps each span in a <mark> with its span index", () => {
    const html = renderHighlightHTML("a b c d e f", [[1, 3], [5, 6]]);
    expect(html).toBe(
      'a <mark class="span span-0" data-span="0">b c</mark> d e ' +
        '<mark class="span span-1" data-span="1">f</mark>',
    );
  });

  it("escapes HTML in tokens", () => {
    const html = renderHighlightHTML("<b> & done", [[0, 1]]);
    expect(html).toContain("&lt;b&gt;");
    expect(html).toContain("&amp;");
    expect(html).not.toContain("<b>");
  });
});

describe("bracketPreview vs the service renderer", () => {
  it("matches every golden rendering character for character", () => {
    expect(bracketCases.length).toBeGreaterThanOrEqual(6);
    for (const c of bracketCases) {
      expect(bracketPreview(c.target, c.spans)).toBe(c.rendered);
    }
  });

  it("closes and reopens between adjacent spans", () => {
    expect(bracketPreview("t0 t1 t2 t3 t4", [[0, 2], [2, 4]])).toBe(
      "[ t0 t1 ] [ t2 t3 ] t4",
    );
  });
});
