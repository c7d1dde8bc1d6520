import { describe, expect, it } from "vitest";

import { KEY_TO_LABEL, LabelPanel } from "../src/panel";
import { Task } from "../src/types";

function makeTask(overrides: Partial<Task> = {}): Task {
  return {
    record_id: "rec-1",
    source: "The EPA runs",
    target: "Die EPA ( Umweltbehörde ) läuft",
    spans: [[2, 5]],
    provenance: "uncertainty",
    round: 3,
    ...overrides,
  };
}

describe("keyboard shortcuts", () => {
  it("maps 1/2/3 to the three labels", () => {
    expect(KEY_TO_LABEL).toEqual({ "1": "TRUE", "2": "FALSE", "3": "DISCARD" });
  });

  it("consumes label keys and ignores everything else", () => {
    const panel = new LabelPanel(makeTask());
    expect(panel.handleKey("2")).toBe(true);
    expect(panel.label).toBe("FALSE");
    expect(panel.handleKey("x")).toBe(false);
    expect(panel.label).toBe("FALSE");
  });
});

describe("span drafting", () => {
  it("pre-seeds editable spans from the task's mined spans", () => {
    const panel = new LabelPanel(makeTask());
    expect(panel.spans).toEqual([{ tgt_start: 2, tgt_end: 5, type: null, style: "A" }]);
  });

  it("supports add / adjust / toggle / remove", () => {
    const panel = new LabelPanel(makeTask({ spans: [] }));
    panel.addSpan(1, 2);
    panel.adjustSpan(0, "end", 1);
    panel.adjustSpan(0, "start", -1);
    expect(panel.spans[0]).toMatchObject({ tgt_start: 0, tgt_end: 3 });
    panel.toggleSpanStyle(0);
    expect(panel.spans[0].style).toBe("R");
    panel.toggleSpanStyle(0);
    expect(panel.spans[0].style).toBe("A");
    panel.removeSpan(0);
    expect(panel.spans).toEqual([]);
  });
});

describe("toSubmission", () => {
  it("builds a full TRUE submission from the drafts", () => {
    const panel = new LabelPanel(makeTask());
    panel.setLabel("TRUE");
    panel.setSpanType(0, "ENT-DESC");
    panel.toggleSpanStyle(0);
    expect(panel.toSubmission()).toEqual({
      task_id: "rec-1",
      al_label: "TRUE",
      spans: [{ tgt_start: 2, tgt_end: 5 }],
      types: ["ENT-DESC"],
      styles: ["R"],
    });
  });

  it("empties spans/types/styles on non-TRUE labels", () => {
    const panel = new LabelPanel(makeTask());
    panel.setLabel("FALSE");
    expect(panel.toSubmission()).toEqual({
      task_id: "rec-1",
      al_label: "FALSE",
      spans: [],
      types: [],
      styles: [],
    });
    panel.setLabel("DISCARD");
    expect(panel.toSubmission().al_label).toBe("DISCARD");
    expect(panel.toSubmission().spans).toEqual([]);
  });
});

describe("submit gating", () => {
  it("blocks until a label is picked", () => {
    const panel = new LabelPanel(makeTask());
    expect(panel.canSubmit()).toBe(false);
    expect(panel.submitBlockers()[0]).toMatch(/pick a label/);
  });

  it("blocks TRUE while a span has no type tag", () => {
    const panel = new LabelPanel(makeTask());
    panel.setLabel("TRUE");
    expect(panel.canSubmit()).toBe(false);
    // no span has a type yet: the shared validator already reports it
    expect(panel.submitBlockers().some((b) => b.startsWith("types:"))).toBe(true);
    panel.setSpanType(0, "ENT-DESC");
    expect(panel.canSubmit()).toBe(true);
  });

  it("hints at the untyped span when only some spans have types", () => {
    const panel = new LabelPanel(makeTask());
    panel.addSpan(0, 1);
    panel.setLabel("TRUE");
    panel.setSpanType(0, "ENT-DESC"); // second span still untyped
    expect(panel.canSubmit()).toBe(false);
    expect(panel.submitBlockers()).toContain("types: every span needs a type tag");
    panel.setSpanType(1, "OTHER");
    expect(panel.canSubmit()).toBe(true);
  });

  it("blocks TRUE with no spans at all", () => {
    const panel = new LabelPanel(makeTask({ spans: [] }));
    panel.setLabel("TRUE");
    expect(panel.canSubmit()).toBe(false);
    expect(panel.submitBlockers()).toContain("spans: empty on TRUE record");
  });

  it("blocks spans dragged out of bounds", () => {
    const panel = new LabelPanel(makeTask());
    panel.setLabel("TRUE");
    panel.setSpanType(0, "ENT-DESC");
    panel.adjustSpan(0, "end", 5); // target has 6 tokens; end becomes 10
    expect(panel.canSubmit()).toBe(false);
    expect(panel.submitBlockers().join(" ")).toMatch(/out of bounds/);
  });

  it("FALSE and DISCARD are always submittable", () => {
    const panel = new LabelPanel(makeTask());
    panel.setLabel("FALSE");
    expect(panel.canSubmit()).toBe(true);
    panel.setLabel("DISCARD");
    expect(panel.canSubmit()).toBe(true);
  });
});
