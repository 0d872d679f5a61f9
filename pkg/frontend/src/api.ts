/**
 * Typed client for the homework service. This is the UI's only connection
 * to the backend: every view renders exclusively from these responses.
 */

import type {
  BrushStats,
  DiscussionTurn,
  GenerateResponse,
  HistoryRecord,
  Job,
  Overview,
  Profile,
  SessionCreateResponse,
  SessionList,
  StrokeResponse,
} from "./types.js";

export class ApiError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
  }
}

export interface ApiClientOptions {
  baseUrl: string;
  token: string;
  fetchFn?: typeof fetch;
}

export class ApiClient {
  private baseUrl: string;
  private token: string;
  private fetchFn: typeof fetch;

  constructor(options: ApiClientOptions) {
    this.baseUrl = options.baseUrl.replace(/\/$/, "");
    this.token = options.token;
    this.fetchFn = options.fetchFn ?? fetch.bind(globalThis);
  }

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const headers: Record<string, string> = {
      Authorization: `Bearer ${this.token}`,
    };
    if (body !== undefined) {
      headers["Content-Type"] = "application/json";
      headers["Idempotency-Key"] = crypto.randomUUID();
    }
    const response = await this.fetchFn(`${this.baseUrl}${path}`, {
      method,
      headers,
      body: body === undefined ? undefined : JSON.stringify(body),
    });
    const payload = await response.json().catch(() => ({}));
    if (!response.ok) {
      const error = (payload as { error?: { code?: string; message?: string } }).error;
      throw new ApiError(
        response.status,
        error?.code ?? "http_error",
        error?.message ?? `${method} ${path} failed with ${response.status}`,
      );
    }
    return payload as T;
  }

  // -- client-facing ---------------------------------------------------

  createSession(clientId: string): Promise<SessionCreateResponse> {
    return this.request("POST", "/sessions", { client_id: clientId });
  }

  postStroke(sessionId: string, concept: string, polygon: number[][]): Promise<StrokeResponse> {
    return this.request("POST", `/sessions/${sessionId}/strokes`, { concept, polygon });
  }

  postArtUtterance(sessionId: string, text: string): Promise<{ utterance: unknown }> {
    return this.request("POST", `/sessions/${sessionId}/art-utterances`, { text });
  }

  generate(sessionId: string, style?: string, reuseFrom?: string): Promise<GenerateResponse> {
    return this.request("POST", `/sessions/${sessionId}/generate`, {
      style: style ?? null,
      reuse_prompt_from: reuseFrom ?? null,
    });
  }

  pollJob(jobId: string): Promise<Job> {
    return this.request("GET", `/jobs/${jobId}`);
  }

  discussionTurn(sessionId: string, text?: string, wantAudio = true): Promise<DiscussionTurn> {
    return this.request("POST", `/sessions/${sessionId}/discussion-turns`, {
      text: text ?? null,
      want_audio: wantAudio,
    });
  }

  closeSession(sessionId: string): Promise<unknown> {
    return this.request("POST", `/sessions/${sessionId}/close`, {});
  }

  // -- therapist-facing ------------------------------------------------

  listSessions(clientId: string): Promise<SessionList> {
    return this.request("GET", `/clients/${clientId}/sessions`);
  }

  getRecord(sessionId: string): Promise<HistoryRecord> {
    return this.request("GET", `/sessions/${sessionId}/record`);
  }

  getOverview(clientId: string): Promise<Overview> {
    return this.request("GET", `/clients/${clientId}/overview`);
  }

  getBrushStats(clientId: string): Promise<BrushStats> {
    return this.request("GET", `/clients/${clientId}/brush-stats`);
  }

  getProfile(clientId: string, version?: number): Promise<Profile> {
    const suffix = version === undefined ? "" : `?version=${version}`;
    return this.request("GET", `/clients/${clientId}/profile${suffix}`);
  }

  reorderPrinciples(clientId: string, permutation: number[]): Promise<Profile> {
    return this.request("PUT", `/clients/${clientId}/profile/principles`, { permutation });
  }

  upsertPrinciple(
    clientId: string,
    principle: { statement: string; example_questions: string[]; principle_id?: string },
    position: number,
  ): Promise<Profile> {
    return this.request("PUT", `/clients/${clientId}/profile/principles`, {
      principle,
      position,
    });
  }

  setTask(clientId: string, text: string): Promise<Profile> {
    return this.request("PUT", `/clients/${clientId}/profile/task`, { text });
  }

  setOpeningMessage(clientId: string, text: string): Promise<Profile> {
    return this.request("PUT", `/clients/${clientId}/profile/opening-message`, { text });
  }

  /** Absolute URL for a stored file reference (images, audio). */
  fileUrl(ref: string): string {
    return `${this.baseUrl}/files/${ref}`;
  }
}
