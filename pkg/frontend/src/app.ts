/** Minimal DOM shell: queue table, review pane with audio player, transcript
 * editor, metadata form, stopwatch readouts, and submit. All logic lives in
 * the session/queue/transcript modules; this file only wires events. */

import { ApiClient, StaleItemError } from "./api.js";
import { toQueueViewModel } from "./queue.js";
import { ReviewSession, ValidationError } from "./session.js";
import { editorHtml } from "./transcript.js";
import { TIMED_TASKS } from "./timers.js";
import type { Assistance, Gender, OutcomeKind, RejectionReason } from "./types.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing #${id}`);
  return node as T;
}

export function startApp(): void {
  const baseUrl = (window as any).VOXMOD_BASE_URL ?? "http://127.0.0.1:8000";
  const token = (window as any).VOXMOD_TOKEN;
  const moderatorId = (window as any).VOXMOD_MODERATOR ?? "console-moderator";
  const client = new ApiClient({ baseUrl, token });
  let session: ReviewSession | null = null;
  let ticker: number | undefined;

  async function refreshQueue(): Promise<void> {
    const vm = toQueueViewModel(await client.queue());
    const tbody = el<HTMLTableSectionElement>("queue-body");
    tbody.innerHTML = "";
    for (const row of vm.rows) {
      const tr = document.createElement("tr");
      const blank = row.blankBadge
        ? `${row.blankBadge.label} ${(row.blankBadge.confidence * 100).toFixed(0)}%`
        : "—";
      const gender = row.genderBadge
        ? `${row.genderBadge.label} ${(row.genderBadge.confidence * 100).toFixed(0)}%`
        : "—";
      tr.innerHTML = `
        <td>${row.id}</td>
        <td>${row.durationBin ?? "—"}</td>
        <td>${blank}</td>
        <td>${gender}</td>
        <td>${row.locationPrefill ?? ""}</td>
        <td>${row.sttSnippet ?? "(no transcript)"}</td>`;
      tr.addEventListener("click", () => void openItem(row.id));
      tbody.appendChild(tr);
    }
    el("queue-total").textContent = `${vm.total} pending`;
  }

  async function openItem(id: string): Promise<void> {
    const item = await client.item(id);
    session = new ReviewSession(item, moderatorId);
    el<HTMLAudioElement>("player").src = client.audioUrl(id);
    el("review-id").textContent = `item ${item.id} (${item.duration_bin ?? "?"})`;
    el("editor").innerHTML = editorHtml(session.editor);
    const draftBox = el<HTMLTextAreaElement>("draft");
    draftBox.value = session.drafts.transcriptDraft;
    el<HTMLInputElement>("gender").value = session.drafts.gender;
    el<HTMLInputElement>("state").value = session.drafts.state ?? "";
    el<HTMLInputElement>("district").value = session.drafts.district ?? "";
    el("banner").textContent = "";
    if (ticker !== undefined) window.clearInterval(ticker);
    ticker = window.setInterval(() => {
      if (!session) return;
      for (const task of TIMED_TASKS) {
        el(`timer-${task}`).textContent = session.timers.elapsedSeconds(task).toFixed(1);
      }
    }, 100);
    for (const task of ["triage", "metadata", "transcription"] as const) {
      el(`section-${task}`).addEventListener("focusin", () => session?.focusSection(task));
    }
    draftBox.addEventListener("input", () => session?.setTranscriptDraft(draftBox.value));
  }

  el<HTMLButtonElement>("submit").addEventListener("click", async () => {
    if (!session) return;
    const action = el<HTMLSelectElement>("action").value as "accept" | "reject" | "";
    session.drafts.action = action === "" ? null : action;
    const reason = el<HTMLSelectElement>("reason").value as RejectionReason | "";
    session.drafts.rejectionReason = reason === "" ? null : reason;
    session.drafts.gender = el<HTMLInputElement>("gender").value as Gender;
    session.drafts.state = el<HTMLInputElement>("state").value || null;
    session.drafts.district = el<HTMLInputElement>("district").value || null;
    const kind = el<HTMLSelectElement>("outcome").value as OutcomeKind;
    const assistance = el<HTMLSelectElement>("assistance").value as Assistance | "";
    session.chooseOutcome(kind, assistance === "" ? undefined : assistance);
    try {
      await session.submit(client);
      el("banner").textContent = `submitted ${session.item.id}: ${session.item.state}`;
      await refreshQueue();
    } catch (error) {
      if (error instanceof ValidationError) {
        el("banner").textContent = error.message;
      } else if (error instanceof StaleItemError) {
        el("banner").textContent =
          `item was decided elsewhere (now ${session.item.state}); drafts kept`;
      } else {
        el("banner").textContent = String(error);
      }
    }
  });

  el<HTMLButtonElement>("reload").addEventListener("click", () => void refreshQueue());
  void refreshQueue();
}

if (typeof document !== "undefined" && document.getElementById("queue-body")) {
  startApp();
}
