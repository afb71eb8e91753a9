/** Wire types mirroring the pipeline API. The console never invents fields:
 * everything here is exactly what the server returns. */

export type ItemState =
  | "received"
  | "auto_rejected_blank"
  | "pending_review"
  | "accepted"
  | "rejected";

export type RejectionReason = "blank" | "noisy" | "inarticulate" | "editorial";
export type Gender = "female" | "male" | "third_gender" | "group" | "unmarked";
export type OutcomeKind = "skipped" | "gist" | "full";
export type Assistance = "none" | "partial" | "full";
export type TaskName = "triage" | "metadata" | "transcription" | "edit";
export type Phase = "with_automation" | "without_automation";

export interface Prediction {
  label: string;
  confidence: number;
}

export interface TranscriptWord {
  text: string;
  confidence?: number;
}

export interface Transcript {
  language: string;
  source: string;
  words: TranscriptWord[];
}

export interface LocationMatch {
  matched_text: string;
  level: "state" | "district" | "subdistrict";
  state: string | null;
  district: string | null;
  sub_district: string | null;
  distance: number;
  start: number;
  end: number;
  backfilled: string[];
  ambiguous: boolean;
}

export interface ItemMetadata {
  gender: Gender;
  state: string | null;
  district: string | null;
  sub_district: string | null;
  village: string | null;
  tags: string[];
  rating: number | null;
  title: string | null;
  transcription_text: string | null;
}

export interface TimingRecord {
  task: TaskName;
  seconds: number;
  phase: Phase;
}

export interface TranscriptionOutcome {
  kind: OutcomeKind;
  assistance: Assistance | null;
}

export interface ModeratorDecision {
  action: "accept" | "reject";
  rejection_reason: RejectionReason | null;
  transcription_outcome: TranscriptionOutcome;
  moderator_id: string;
  decided_at: string;
}

export interface ItemView {
  id: string;
  audio_ref: string;
  duration_s: number;
  state: ItemState;
  rejection_reason: RejectionReason | null;
  predictions: Record<string, Prediction>;
  stt: Transcript | null;
  locations: LocationMatch[];
  categories: [string, number][];
  metadata: ItemMetadata;
  decision: ModeratorDecision | null;
  timings: TimingRecord[];
  warnings: string[];
  duration_bin: string | null;
  low_confidence_spans: [number, number][];
}

export interface QueueResponse {
  total: number;
  page: number;
  per_page: number;
  items: ItemView[];
}

export interface DecisionRequest {
  decision: ModeratorDecision;
  metadata: ItemMetadata;
  timings: TimingRecord[];
}
