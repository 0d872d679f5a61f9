/** Wire types for the homework service API (mirrors the JSON the server emits). */

export type Speaker = "client" | "agent" | "system";

export type UtteranceKind =
  | "speech"
  | "draw_event"
  | "canvas_note"
  | "task_display"
  | "opening_message";

export interface Utterance {
  speaker: Speaker;
  kind: UtteranceKind;
  text: string;
  at: string;
}

export interface PhaseRecord {
  phase_kind: "art_making" | "discussion";
  transcript: Utterance[];
  started_at: string | null;
  ended_at: string | null;
}

export interface ArtworkRecord {
  artwork_id: string;
  segment_map_ref: string;
  control_image_ref: string;
  generated_image_ref: string | null;
  process_frames: string[];
  style: string;
  prompt_used: string;
  generated_at: string;
}

export interface Session {
  session_id: string;
  client_id: string;
  profile_version: number;
  art_phase: PhaseRecord;
  discussion_phase: PhaseRecord | null;
  artworks: ArtworkRecord[];
  started_at: string | null;
  ended_at: string | null;
}

export interface SessionCreateResponse {
  session: Session;
  homework_task: string;
  opening_message: string;
}

export interface StrokeResponse {
  region: { concept: string; polygon: number[][]; z_order: number };
  draw_event: Utterance;
  canvas_note: Utterance;
  agent_utterance: Utterance | null;
  frame_ref: string;
}

export interface GenerateResponse {
  job_id: string;
  artwork_id: string;
  prompt: string;
}

export type JobStatus = "queued" | "running" | "completed" | "failed";

export interface Job {
  job_id: string;
  artwork_id: string;
  prompt: string;
  status: JobStatus;
  generated_image_ref: string | null;
  failure_reason: string | null;
}

export interface DialogueStateWire {
  session_id: string;
  current_step: number;
  concluded: boolean;
  extension_used_this_step: boolean;
  turns: number;
}

export interface DiscussionTurn {
  utterance: Utterance;
  kind: "principal" | "extension" | "concluding" | "freeform";
  step: number | null;
  degraded: boolean;
  state: DialogueStateWire;
  audio_ref?: string;
}

export interface Principle {
  principle_id: string;
  statement: string;
  example_questions: string[];
  position: number;
}

export interface Profile {
  profile_id: string;
  client_id: string;
  version: number;
  principles: Principle[];
  homework_task: string;
  opening_message: string;
  author: string;
  created_at: string;
}

export interface Overview {
  client_id: string;
  sessions_by_date: Record<string, number>;
  sessions_by_hour: number[];
  per_session_short_summaries: { session_id: string; started_at: string; summary: string }[];
}

export interface BrushStats {
  rows: [string, number][];
}

export interface HistoryRecord {
  session_id: string;
  segments_ref: string | null;
  process_frames: string[];
  artwork_ref: string | null;
  control_image_ref: string | null;
  dialogue: { art: Utterance[]; discussion: Utterance[] };
  art_summary: string;
  discussion_summary: string;
  therapist_questions: string[];
  questions_unavailable: boolean;
}

export interface SessionList {
  sessions: Session[];
}
