/** Browser entry point: wires the task queue, label panel, and dashboard
 *  to the DOM. All domain logic lives in the imported modules; this file is
 *  only event plumbing and rendering. */

import { ApiClient, ApiError } from "./client";
import { dashboardView } from "./dashboard";
import { bracketPreview, renderHighlightHTML } from "./highlight";
import { LabelPanel } from "./panel";
import { SubmissionQueue } from "./queue";
import { Task, TYPE_TAGS } from "./types";

const client = new ApiClient("..");
const el = (id: string) => document.getElementById(id) as HTMLElement;

let tasks: Task[] = [];
let panel: LabelPanel | null = null;

const queue = new SubmissionQueue(client, {
  onRejected: (result) => showViolations(result.violations),
  onOffline: (offline) => el("offline-banner").classList.toggle("hidden", !offline),
});

function showViolations(violations: string[]): void {
  const box = el("violations");
  box.innerHTML = violations.map((v) => `<li>${v}</li>`).join("");
  box.parentElement?.classList.toggle("hidden", violations.length === 0);
}

function renderTask(): void {
  const view = el("task-view");
  if (!panel) {
    view.innerHTML = "<p>No open tasks — advance the round from the dashboard.</p>";
    return;
  }
  const task = panel.task;
  const spans = panel.spans.map((s) => [s.tgt_start, s.tgt_end] as [number, number]);
  let targetHTML: string;
  let preview: string;
  try {
    targetHTML = renderHighlightHTML(task.target, spans);
    preview = bracketPreview(task.target, spans);
  } catch (err) {
    targetHTML = task.target;
    preview = String(err);
  }
  el("provenance-badge").textContent = task.provenance;
  el("round-indicator").textContent = `round ${task.round}`;
  el("source-text").textContent = task.source;
  el("target-text").innerHTML = targetHTML;
  el("bracket-preview").textContent = preview;
  renderSpanEditor();
  updateSubmit();
}

function renderSpanEditor(): void {
  if (!panel) return;
  const rows = panel.spans.map((span, i) => {
    const options = Object.entries(TYPE_TAGS)
      .map(([category, tags]) => {
        const opts = tags
          .map(
            (t) =>
              `<option value="${t.tag}" title="${t.hint}" ${span.type === t.tag ? "selected" : ""}>${t.tag}</option>`,
          )
          .join("");
        return `<optgroup label="${category}">${opts}</optgroup>`;
      })
      .join("");
    return `<li data-span="${i}">
      <span class="bounds">[${span.tgt_start}, ${span.tgt_end})</span>
      <button data-act="start-" title="extend left">⟨−</button>
      <button data-act="start+" title="shrink left">⟨+</button>
      <button data-act="end-" title="shrink right">−⟩</button>
      <button data-act="end+" title="extend right">+⟩</button>
      <select data-act="type"><option value="">type…</option>${options}</select>
      <button data-act="style" class="style-${span.style}">${span.style === "R" ? "repair" : "addition"}</button>
      <button data-act="remove">✕</button>
    </li>`;
  });
  el("span-editor").innerHTML = rows.join("");
}

function updateSubmit(): void {
  if (!panel) return;
  const blockers = panel.submitBlockers();
  const button = el("submit") as HTMLButtonElement;
  button.disabled = blockers.length > 0;
  el("submit-hint").textContent = blockers.join("; ");
  document.querySelectorAll("#label-buttons button").forEach((b) => {
    b.classList.toggle("active", (b as HTMLElement).dataset.label === panel?.label);
  });
}

async function loadTasks(): Promise<void> {
  tasks = await client.nextTasks(10);
  panel = tasks.length > 0 ? new LabelPanel(tasks[0]) : null;
  renderTask();
  await refreshDashboard();
}

async function refreshDashboard(): Promise<void> {
  const [round, progress] = await Promise.all([client.currentRound(), client.progress()]);
  const view = dashboardView(round, progress);
  el("dash-round").textContent = `${view.roundLabel} (${view.phase})`;
  el("dash-batch").textContent = view.batchProgress;
  (el("dash-bar") as HTMLProgressElement).value = view.batchFraction;
  el("dash-totals").textContent = view.totals.map((t) => `${t.label} ${t.count}`).join(" · ");
  (el("advance") as HTMLButtonElement).disabled = !view.canAdvance;
}

async function submitCurrent(): Promise<void> {
  if (!panel || !panel.canSubmit()) return;
  queue.enqueue(panel.toSubmission());
  showViolations([]);
  tasks.shift();
  panel = tasks.length > 0 ? new LabelPanel(tasks[0]) : null;
  renderTask();
  await queue.flush();
  if (tasks.length === 0) await loadTasks();
  else await refreshDashboard();
}

function wire(): void {
  document.addEventListener("keydown", (ev) => {
    if (ev.target instanceof HTMLInputElement || ev.target instanceof HTMLSelectElement) return;
    if (panel?.handleKey(ev.key)) {
      renderTask();
    } else if (ev.key === "Enter") {
      void submitCurrent();
    }
  });
  el("label-buttons").addEventListener("click", (ev) => {
    const label = (ev.target as HTMLElement).dataset?.label;
    if (label && panel) {
      panel.setLabel(label as "TRUE" | "FALSE" | "DISCARD");
      renderTask();
    }
  });
  el("span-editor").addEventListener("click", (ev) => {
    const target = ev.target as HTMLElement;
    const item = target.closest("li[data-span]") as HTMLElement | null;
    if (!item || !panel) return;
    const i = Number(item.dataset.span);
    switch (target.dataset.act) {
      case "start-": panel.adjustSpan(i, "start", -1); break;
      case "start+": panel.adjustSpan(i, "start", +1); break;
      case "end-": panel.adjustSpan(i, "end", -1); break;
      case "end+": panel.adjustSpan(i, "end", +1); break;
      case "style": panel.toggleSpanStyle(i); break;
      case "remove": panel.removeSpan(i); break;
      default: return;
    }
    renderTask();
  });
  el("span-editor").addEventListener("change", (ev) => {
    const target = ev.target as HTMLSelectElement;
    const item = target.closest("li[data-span]") as HTMLElement | null;
    if (item && panel && target.dataset.act === "type" && target.value) {
      panel.setSpanType(Number(item.dataset.span), target.value);
      renderTask();
    }
  });
  el("add-span").addEventListener("click", () => {
    if (panel) {
      panel.addSpan(0, Math.min(1, panel.nTokens));
      renderTask();
    }
  });
  el("submit").addEventListener("click", () => void submitCurrent());
  el("advance").addEventListener("click", async () => {
    try {
      await client.advanceRound();
      await loadTasks();
    } catch (err) {
      if (err instanceof ApiError) showViolations([String(err.detail)]);
    }
  });
}

wire();
void loadTasks();
