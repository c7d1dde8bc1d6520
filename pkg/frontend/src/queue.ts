/** Optimistic submission queue with retry.
 *
 * Submissions are enqueued immediately (the UI moves on to the next task) and
 * flushed to the service in the background. Network failures keep items
 * queued for the next flush; per-item server rejections are surfaced to a
 * callback so violations can be rendered inline.
 */

import { ApiClient, OfflineError } from "./client";
import { Submission, SubmissionResult } from "./types";

export interface QueueEvents {
  onRejected?: (result: SubmissionResult, submission: Submission) => void;
  onOffline?: (offline: boolean) => void;
}

export class SubmissionQueue {
  private pending: Submission[] = [];
  private offline = false;

  constructor(
    private readonly client: ApiClient,
    private readonly events: QueueEvents = {},
  ) {}

  get pendingCount(): number {
    return this.pending.length;
  }

  get isOffline(): boolean {
    return this.offline;
  }

  enqueue(sub: Submission): void {
    // a resubmission for the same task replaces the queued one
    this.pending = this.pending.filter((p) => p.task_id !== sub.task_id);
    this.pending.push(sub);
  }

  /** Try to deliver everything queued. Returns accepted task ids. */
  async flush(): Promise<string[]> {
    if (this.pending.length === 0) return [];
    const batch = this.pending;
    let results: SubmissionResult[];
    try {
      ({ results } = await this.client.submitLabels(batch));
    } catch (err) {
      if (err instanceof OfflineError) {
        this.setOffline(true);
        return []; // keep everything queued for the next flush
      }
      // a 422 means every item was rejected; ask the server which and why
      const detail = (err as { detail?: unknown }).detail;
      results = Array.isArray(detail)
        ? (detail as SubmissionResult[])
        : batch.map((b) => ({ task_id: b.task_id, accepted: false, violations: ["rejected"] }));
    }
    this.setOffline(false);
    const accepted: string[] = [];
    const byId = new Map(batch.map((b) => [b.task_id, b]));
    for (const result of results) {
      const sub = byId.get(result.task_id);
      if (!sub) continue;
      if (result.accepted) {
        accepted.push(result.task_id);
      } else {
        this.events.onRejected?.(result, sub);
      }
    }
    // rejected items leave the queue too: they need the annotator's attention,
    // not a blind retry
    this.pending = this.pending.filter((p) => !results.some((r) => r.task_id === p.task_id));
    return accepted;
  }

  private setOffline(offline: boolean): void {
    if (offline !== this.offline) {
      this.offline = offline;
      this.events.onOffline?.(offline);
    }
  }
}
