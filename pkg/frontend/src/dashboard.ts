/** Round dashboard view model: progress numbers shaped for display. */

import { Progress, RoundInfo } from "./types";

export interface DashboardView {
  roundLabel: string;
  phase: string;
  /** submitted / batch size, e.g. "37 / 100" */
  batchProgress: string;
  /** 0..1 fraction of the open batch already submitted */
  batchFraction: number;
  totals: { label: string; count: number }[];
  canAdvance: boolean;
}

export function dashboardView(round: RoundInfo, progress: Progress): DashboardView {
  const submitted = progress.submitted;
  const batch = round.batch_size;
  return {
    roundLabel: round.phase === "done" ? "schedule complete" : `round ${round.round + 1}`,
    phase: round.phase,
    batchProgress: `${submitted} / ${batch}`,
    batchFraction: batch > 0 ? submitted / batch : 0,
    totals: (["TRUE", "FALSE", "DISCARD"] as const).map((label) => ({
      label,
      count: progress.labeled_total_counts[label] ?? 0,
    })),
    canAdvance: round.phase !== "done" && batch > 0 && round.open_tasks === 0,
  };
}
