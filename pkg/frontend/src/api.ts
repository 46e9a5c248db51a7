/**
 * Typed client for the annotation service.
 *
 * The UI talks to the service exclusively through these five endpoints; it
 * never touches the campaign store directly.
 */

export interface TaskPayload {
  segment_id: number;
  source: string;
  reference: string;
  outputs: Record<string, string>; // slot label -> output text
  pending_slots: string[];
  done_units: number;
  total_units: number;
}

export interface NextResponse {
  complete: boolean;
  task?: TaskPayload;
  done?: number;
  total?: number;
}

export interface ErrorTagPayload {
  category: string;
  severity: "minor" | "major";
  span?: [number, number] | null;
}

export interface SubmissionBody {
  segment_id: number;
  slot: string;
  rating: number;
  errors: ErrorTagPayload[];
}

export interface SubmitAck {
  ok: boolean;
  segment_id: number;
  slot: string;
  done: number;
  total: number;
}

export interface ProgressResponse {
  done: number;
  total: number;
  complete: boolean;
  per_annotator: Record<string, { done: number; total: number }>;
}

export interface ServiceErrorPayload {
  error: string; // "validation" | "conflict" | "unknown_annotator" | ...
  field?: string;
  message?: string;
}

export class ApiError extends Error {
  constructor(
    readonly status: number,
    readonly payload: ServiceErrorPayload,
  ) {
    super(payload.message ?? payload.error);
  }

  get isConflict(): boolean {
    return this.status === 409;
  }

  get isValidation(): boolean {
    return this.status === 400;
  }
}

export class ApiClient {
  constructor(private readonly baseUrl: string = "") {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await fetch(this.baseUrl + path, init);
    const text = await response.text();
    const body = text ? JSON.parse(text) : {};
    if (!response.ok) {
      throw new ApiError(response.status, body as ServiceErrorPayload);
    }
    return body as T;
  }

  health(): Promise<{ status: string }> {
    return this.request("/health");
  }

  next(annotator: string): Promise<NextResponse> {
    return this.request(`/annotators/${encodeURIComponent(annotator)}/next`);
  }

  submit(annotator: string, body: SubmissionBody): Promise<SubmitAck> {
    return this.request(`/annotators/${encodeURIComponent(annotator)}/submissions`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(body),
    });
  }

  progress(): Promise<ProgressResponse> {
    return this.request("/progress");
  }

  /** Raw report text; the owner screen renders it, annotators never fetch it. */
  async reportRaw(): Promise<string> {
    const response = await fetch(this.baseUrl + "/report");
    return response.text();
  }
}
