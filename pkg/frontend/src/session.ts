/** One moderator review session: drafts, stopwatches, submit payload.
 *
 * Drafts start from the server's prefills (classifier gender, extracted
 * locations); whatever the moderator edits wins in the submitted payload.
 * Submission is blocked client-side until an action is chosen, rejects
 * carry a reason, and all timers are stopped. A 409 on submit refreshes
 * the item without touching the drafts.
 */

import { ApiClient, StaleItemError } from "./api.js";
import { TaskTimers, type Clock } from "./timers.js";
import {
  renderTranscriptEditor,
  suggestAssistance,
  type EditorView,
} from "./transcript.js";
import type {
  Assistance,
  DecisionRequest,
  Gender,
  ItemMetadata,
  ItemView,
  OutcomeKind,
  Phase,
  RejectionReason,
  TimingRecord,
} from "./types.js";

export interface SessionDrafts {
  action: "accept" | "reject" | null;
  rejectionReason: RejectionReason | null;
  outcomeKind: OutcomeKind;
  assistance: Assistance | null;
  gender: Gender;
  state: string | null;
  district: string | null;
  subDistrict: string | null;
  village: string | null;
  tags: string[];
  rating: number | null;
  title: string | null;
  transcriptDraft: string;
}

export class ValidationError extends Error {}

export class ReviewSession {
  readonly timers: TaskTimers;
  readonly editor: EditorView;
  readonly drafts: SessionDrafts;
  item: ItemView;
  stale = false;

  constructor(
    item: ItemView,
    private readonly moderatorId: string,
    private readonly phase: Phase = "with_automation",
    clock?: Clock,
  ) {
    this.item = item;
    this.timers = new TaskTimers(clock);
    this.editor = renderTranscriptEditor(item.stt, item.low_confidence_spans);
    const location = item.locations.find((m) => !m.ambiguous && m.state) ?? null;
    this.drafts = {
      action: null,
      rejectionReason: null,
      outcomeKind: "skipped",
      assistance: null,
      gender: item.metadata.gender,
      state: item.metadata.state ?? location?.state ?? null,
      district: item.metadata.district ?? location?.district ?? null,
      subDistrict: item.metadata.sub_district ?? location?.sub_district ?? null,
      village: item.metadata.village,
      tags: [...item.metadata.tags],
      rating: item.metadata.rating,
      title: item.metadata.title,
      transcriptDraft: this.editor.originalText,
    };
  }

  /** Section focus auto-starts that section's stopwatch. */
  focusSection(section: "triage" | "metadata" | "transcription"): void {
    this.timers.focus(section);
  }

  setTranscriptDraft(text: string): void {
    this.drafts.transcriptDraft = text;
    if (this.drafts.outcomeKind !== "skipped") {
      this.drafts.assistance = this.suggestedAssistance();
    }
  }

  suggestedAssistance(): Assistance {
    return suggestAssistance(this.editor, this.drafts.transcriptDraft);
  }

  chooseOutcome(kind: OutcomeKind, assistance?: Assistance): void {
    this.drafts.outcomeKind = kind;
    if (kind === "skipped") {
      this.drafts.assistance = null;
    } else {
      this.drafts.assistance = assistance ?? this.suggestedAssistance();
    }
  }

  private metadataPayload(): ItemMetadata {
    const transcriptText =
      this.drafts.outcomeKind === "skipped" ? null : this.drafts.transcriptDraft.trim() || null;
    return {
      gender: this.drafts.gender,
      state: this.drafts.state,
      district: this.drafts.district,
      sub_district: this.drafts.subDistrict,
      village: this.drafts.village,
      tags: this.drafts.tags,
      rating: this.drafts.rating,
      title: this.drafts.title,
      transcription_text: transcriptText,
    };
  }

  /** Assemble the POST body; throws ValidationError instead of calling the
   * network when the session is not submittable. */
  buildPayload(decidedAt: string): DecisionRequest {
    if (this.drafts.action === null) {
      throw new ValidationError("choose accept or reject first");
    }
    if (this.drafts.action === "reject" && this.drafts.rejectionReason === null) {
      throw new ValidationError("rejection needs a reason");
    }
    this.timers.stop();
    const timings: TimingRecord[] = this.timers.toRecords(this.phase);
    return {
      decision: {
        action: this.drafts.action,
        rejection_reason: this.drafts.action === "reject" ? this.drafts.rejectionReason : null,
        transcription_outcome: {
          kind: this.drafts.outcomeKind,
          assistance: this.drafts.outcomeKind === "skipped" ? null : this.drafts.assistance,
        },
        moderator_id: this.moderatorId,
        decided_at: decidedAt,
      },
      metadata: this.metadataPayload(),
      timings,
    };
  }

  /** Submit; on a stale item (decided elsewhere) refresh state, keep drafts. */
  async submit(client: ApiClient, decidedAt?: string): Promise<ItemView> {
    const payload = this.buildPayload(decidedAt ?? new Date().toISOString());
    try {
      this.item = await client.submitDecision(this.item.id, payload);
      this.stale = false;
      return this.item;
    } catch (error) {
      if (error instanceof StaleItemError) {
        this.item = await client.item(this.item.id);
        this.stale = true;
      }
      throw error;
    }
  }
}
