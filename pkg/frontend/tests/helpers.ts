/** Test doubles built on the recorded API fixtures. */

import type { ApiClient } from "../src/api.js";
import type {
  BrushStats,
  DiscussionTurn,
  GenerateResponse,
  HistoryRecord,
  Job,
  Overview,
  Profile,
  SessionCreateResponse,
  StrokeResponse,
} from "../src/types.js";

import strokeResponse from "./fixtures/stroke_response.json";
import sessionCreate from "./fixtures/session_create.json";
import generateResponse from "./fixtures/generate_response.json";
import jobQueued from "./fixtures/job_queued.json";
import jobCompleted from "./fixtures/job_completed.json";
import discussionTurns from "./fixtures/discussion_turns.json";
import profile from "./fixtures/profile.json";
import profileReordered from "./fixtures/profile_reordered.json";
import record from "./fixtures/record.json";
import overview from "./fixtures/overview.json";
import brushStatsCohort from "./fixtures/brush_stats_cohort.json";

export const fixtures = {
  strokeResponse: strokeResponse as unknown as StrokeResponse,
  sessionCreate: sessionCreate as unknown as SessionCreateResponse,
  generateResponse: generateResponse as unknown as GenerateResponse,
  jobQueued: jobQueued as unknown as Job,
  jobCompleted: jobCompleted as unknown as Job,
  discussionTurns: discussionTurns as unknown as DiscussionTurn[],
  profile: profile as unknown as Profile,
  profileReordered: profileReordered as unknown as Profile,
  record: record as unknown as HistoryRecord,
  overview: overview as unknown as Overview,
  brushStatsCohort: brushStatsCohort as unknown as BrushStats,
};

/** Minimal stand-in for ApiClient, replaying fixtures and recording calls. */
export class FakeApi {
  calls: { method: string; args: unknown[] }[] = [];
  jobSequence: Job[] = [fixtures.jobQueued, fixtures.jobCompleted];
  turnQueue: DiscussionTurn[] = [...fixtures.discussionTurns];
  reorderReply: Profile | Error = fixtures.profileReordered;
  taskReply: Profile | Error = fixtures.profile;

  private jobPolls = 0;

  asClient(): ApiClient {
    return this as unknown as ApiClient;
  }

  private recordCall(method: string, args: unknown[]): void {
    this.calls.push({ method, args });
  }

  async createSession(clientId: string): Promise<SessionCreateResponse> {
    this.recordCall("createSession", [clientId]);
    return fixtures.sessionCreate;
  }

  async postStroke(
    sessionId: string,
    concept: string,
    polygon: number[][],
  ): Promise<StrokeResponse> {
    this.recordCall("postStroke", [sessionId, concept, polygon]);
    return fixtures.strokeResponse;
  }

  async postArtUtterance(sessionId: string, text: string): Promise<{ utterance: unknown }> {
    this.recordCall("postArtUtterance", [sessionId, text]);
    return { utterance: null };
  }

  async generate(sessionId: string, style?: string): Promise<GenerateResponse> {
    this.recordCall("generate", [sessionId, style]);
    return fixtures.generateResponse;
  }

  async pollJob(jobId: string): Promise<Job> {
    this.recordCall("pollJob", [jobId]);
    const index = Math.min(this.jobPolls, this.jobSequence.length - 1);
    this.jobPolls += 1;
    return this.jobSequence[index];
  }

  async discussionTurn(sessionId: string, text?: string): Promise<DiscussionTurn> {
    this.recordCall("discussionTurn", [sessionId, text]);
    const next = this.turnQueue.shift();
    if (!next) throw new Error("no more recorded turns");
    return next;
  }

  async getProfile(): Promise<Profile> {
    this.recordCall("getProfile", []);
    return fixtures.profile;
  }

  async reorderPrinciples(clientId: string, permutation: number[]): Promise<Profile> {
    this.recordCall("reorderPrinciples", [clientId, permutation]);
    if (this.reorderReply instanceof Error) throw this.reorderReply;
    return this.reorderReply;
  }

  async setTask(clientId: string, text: string): Promise<Profile> {
    this.recordCall("setTask", [clientId, text]);
    if (this.taskReply instanceof Error) throw this.taskReply;
    return { ...fixtures.profile, homework_task: text };
  }

  async setOpeningMessage(clientId: string, text: string): Promise<Profile> {
    this.recordCall("setOpeningMessage", [clientId, text]);
    return { ...fixtures.profile, opening_message: text };
  }

  async getOverview(): Promise<Overview> {
    return fixtures.overview;
  }

  async getBrushStats(): Promise<BrushStats> {
    return fixtures.brushStatsCohort;
  }

  async getRecord(): Promise<HistoryRecord> {
    return fixtures.record;
  }

  fileUrl(ref: string): string {
    return `http://api.test/files/${ref}`;
  }
}

export class MemoryStorage implements Storage {
  private data = new Map<string, string>();

  get length(): number {
    return this.data.size;
  }

  key(index: number): string | null {
    return [...this.data.keys()][index] ?? null;
  }

  getItem(key: string): string | null {
    return this.data.get(key) ?? null;
  }

  setItem(key: string, value: string): void {
    this.data.set(key, value);
  }

  removeItem(key: string): void {
    this.data.delete(key);
  }

  clear(): void {
    this.data.clear();
  }
}
