/** Queue view model: a direct projection of the server's queue listing.
 * Badges, snippets, and prefills are rearrangements of server fields; the
 * client computes nothing the server owns (bins, spans, confidences all
 * arrive precomputed). */

import type { ItemView, QueueResponse } from "./types.js";

export interface QueueRow {
  id: string;
  durationSeconds: number;
  durationBin: string | null;
  blankBadge: { label: string; confidence: number } | null;
  genderBadge: { label: string; confidence: number } | null;
  sttSnippet: string | null;
  locationPrefill: string | null;
  warnings: string[];
}

export interface QueueViewModel {
  total: number;
  page: number;
  perPage: number;
  rows: QueueRow[];
}

const SNIPPET_WORDS = 12;

export function toQueueRow(item: ItemView): QueueRow {
  const blank = item.predictions["blank"] ?? null;
  const gender = item.predictions["gender"] ?? null;
  let snippet: string | null = null;
  if (item.stt && item.stt.words.length > 0) {
    const words = item.stt.words.slice(0, SNIPPET_WORDS).map((w) => w.text);
    snippet = words.join(" ") + (item.stt.words.length > SNIPPET_WORDS ? " …" : "");
  }
  const location = item.locations.find((m) => !m.ambiguous && m.state) ?? null;
  const locationPrefill = location
    ? [location.sub_district, location.district, location.state].filter(Boolean).join(", ")
    : null;
  return {
    id: item.id,
    durationSeconds: item.duration_s,
    durationBin: item.duration_bin,
    blankBadge: blank && { label: blank.label, confidence: blank.confidence },
    genderBadge: gender && { label: gender.label, confidence: gender.confidence },
    sttSnippet: snippet,
    locationPrefill,
    warnings: item.warnings,
  };
}

export function toQueueViewModel(response: QueueResponse): QueueViewModel {
  return {
    total: response.total,
    page: response.page,
    perPage: response.per_page,
    rows: response.items.map(toQueueRow),
  };
}
