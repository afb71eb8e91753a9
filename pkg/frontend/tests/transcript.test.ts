import { describe, expect, it } from "vitest";

import { editorHtml, renderTranscriptEditor, suggestAssistance } from "../src/transcript.js";
import type { Transcript } from "../src/types.js";

const transcript: Transcript = {
  language: "hi",
  source: "mock-asr",
  words: [
    { text: "patna", confidence: 0.9 },
    { text: "se", confidence: 0.5 },
    { text: "khabar", confidence: 0.4 },
    { text: "aayi", confidence: 0.9 },
  ],
};

describe("renderTranscriptEditor", () => {
  it("highlights exactly the server-provided spans", () => {
    const view = renderTranscriptEditor(transcript, [[1, 2]]);
    expect(view.words?.map((w) => w.highlighted)).toEqual([false, true, true, false]);
  });

  it("handles multiple spans", () => {
    const view = renderTranscriptEditor(transcript, [
      [0, 0],
      [3, 3],
    ]);
    expect(view.words?.map((w) => w.highlighted)).toEqual([true, false, false, true]);
  });

  it("does not invent spans when the server sends none", () => {
    const view = renderTranscriptEditor(transcript, []);
    expect(view.words?.every((w) => !w.highlighted)).toBe(true);
  });

  it("no transcript collapses to the compose box state", () => {
    const view = renderTranscriptEditor(null, []);
    expect(view.hasTranscript).toBe(false);
    expect(view.words).toBeNull();
    expect(editorHtml(view)).toContain("textarea");
  });

  it("marks highlighted words in the html rendering", () => {
    const html = editorHtml(renderTranscriptEditor(transcript, [[1, 2]]));
    expect(html).toContain('<mark data-index="1">se</mark>');
    expect(html).toContain('<mark data-index="2">khabar</mark>');
    expect(html).toContain('<span data-index="0">patna</span>');
  });

  it("escapes html in words", () => {
    const sneaky: Transcript = {
      language: "hi",
      source: "mock-asr",
      words: [{ text: "<script>", confidence: 0.2 }],
    };
    const html = editorHtml(renderTranscriptEditor(sneaky, [[0, 0]]));
    expect(html).toContain("&lt;script&gt;");
    expect(html).not.toContain("<script>");
  });
});

describe("suggestAssistance", () => {
  const view = renderTranscriptEditor(transcript, []);

  it("verbatim reuse suggests full", () => {
    expect(suggestAssistance(view, "patna se khabar aayi")).toBe("full");
  });

  it("whitespace differences still count as verbatim", () => {
    expect(suggestAssistance(view, "  patna   se khabar aayi ")).toBe("full");
  });

  it("edits suggest partial", () => {
    expect(suggestAssistance(view, "patna se achhi khabar aayi")).toBe("partial");
  });

  it("cleared text suggests none", () => {
    expect(suggestAssistance(view, "   ")).toBe("none");
  });

  it("no machine transcript forces none", () => {
    const empty = renderTranscriptEditor(null, []);
    expect(suggestAssistance(empty, "typed from scratch")).toBe("none");
  });
});
