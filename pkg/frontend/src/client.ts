/** Thin typed wrapper over the annotation service's JSON API. */

import { Progress, RoundInfo, Submission, SubmissionResult, Task } from "./types";

/** Raised when the service is unreachable (drives the offline banner). */
export class OfflineError extends Error {
  constructor(cause: unknown) {
    super(`service unreachable: ${String(cause)}`);
    this.name = "OfflineError";
  }
}

/** Raised on a non-2xx response; carries the parsed body for inline display. */
export class ApiError extends Error {
  constructor(
    public readonly status: number,
    public readonly detail: unknown,
  ) {
    super(`HTTP ${status}`);
    this.name = "ApiError";
  }
}

export type FetchLike = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    let resp: Response;
    try {
      resp = await this.fetchImpl(this.baseUrl + path, init);
    } catch (err) {
      throw new OfflineError(err);
    }
    const body = await resp.json().catch(() => null);
    if (!resp.ok) {
      throw new ApiError(resp.status, body && (body as { detail?: unknown }).detail);
    }
    return body as T;
  }

  currentRound(): Promise<RoundInfo> {
    return this.request<RoundInfo>("/rounds/current");
  }

  nextTasks(n = 10): Promise<Task[]> {
    return this.request<Task[]>(`/tasks/next?n=${n}`);
  }

  submitLabels(submissions: Submission[]): Promise<{ results: SubmissionResult[] }> {
    return this.request("/labels", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ submissions }),
    });
  }

  advanceRound(): Promise<RoundInfo> {
    return this.request<RoundInfo>("/rounds/advance", { method: "POST" });
  }

  progress(): Promise<Progress> {
    return this.request<Progress>("/progress");
  }
}
