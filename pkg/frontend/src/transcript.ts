/** Transcript editor model: server-provided low-confidence spans drive the
 * highlighting, and the draft's relation to the machine transcript drives
 * the suggested assistance level. The client never recomputes spans. */

import type { Assistance, Transcript } from "./types.js";

export interface EditorWord {
  index: number;
  text: string;
  confidence: number | null;
  highlighted: boolean;
}

export interface EditorView {
  /** null when the item has no machine transcript (blank compose box). */
  words: EditorWord[] | null;
  originalText: string;
  hasTranscript: boolean;
}

export function renderTranscriptEditor(
  transcript: Transcript | null,
  spans: [number, number][],
): EditorView {
  if (transcript === null || transcript.words.length === 0) {
    return { words: null, originalText: "", hasTranscript: false };
  }
  const highlighted = new Set<number>();
  for (const [start, end] of spans) {
    for (let i = start; i <= end; i++) highlighted.add(i);
  }
  const words = transcript.words.map((w, index) => ({
    index,
    text: w.text,
    confidence: w.confidence ?? null,
    highlighted: highlighted.has(index),
  }));
  return {
    words,
    originalText: transcript.words.map((w) => w.text).join(" "),
    hasTranscript: true,
  };
}

/** Plain-HTML rendering of the editor words; low-confidence runs are
 * wrapped in <mark>. */
export function editorHtml(view: EditorView): string {
  if (!view.hasTranscript || view.words === null) {
    return '<textarea class="compose" placeholder="no transcript — type one"></textarea>';
  }
  return view.words
    .map((w) =>
      w.highlighted
        ? `<mark data-index="${w.index}">${escapeHtml(w.text)}</mark>`
        : `<span data-index="${w.index}">${escapeHtml(w.text)}</span>`,
    )
    .join(" ");
}

function escapeHtml(text: string): string {
  return text
    .replaceAll("&", "&amp;")
    .replaceAll("<", "&lt;")
    .replaceAll(">", "&gt;")
    .replaceAll('"', "&quot;");
}

const collapse = (text: string) => text.trim().split(/\s+/).filter(Boolean).join(" ");

/** Machine transcript reused verbatim => full; edited => partial;
 * cleared (or never present) => none. */
export function suggestAssistance(view: EditorView, draft: string): Assistance {
  if (!view.hasTranscript) return "none";
  const cleaned = collapse(draft);
  if (cleaned.length === 0) return "none";
  if (cleaned === collapse(view.originalText)) return "full";
  return "partial";
}
