import { describe, expect, it } from "vitest";

import { TaskTimers } from "../src/timers.js";

function manualClock(start = 0) {
  let t = start;
  return {
    now: () => t,
    advance: (ms: number) => {
      t += ms;
    },
  };
}

describe("TaskTimers", () => {
  it("accumulates elapsed time for one task", () => {
    const clock = manualClock();
    const timers = new TaskTimers(clock.now);
    timers.start("triage");
    clock.advance(4200);
    timers.stop();
    expect(timers.elapsedSeconds("triage")).toBe(4.2);
  });

  it("allows at most one running timer: starting pauses the previous", () => {
    const clock = manualClock();
    const timers = new TaskTimers(clock.now);
    timers.start("triage");
    clock.advance(1000);
    timers.start("metadata");
    expect(timers.running).toBe("metadata");
    clock.advance(2000);
    timers.stop();
    expect(timers.elapsedSeconds("triage")).toBe(1.0);
    expect(timers.elapsedSeconds("metadata")).toBe(2.0);
  });

  it("elapsed strictly increases while running", () => {
    const clock = manualClock();
    const timers = new TaskTimers(clock.now);
    timers.start("transcription");
    let previous = timers.elapsedSeconds("transcription");
    for (let i = 0; i < 5; i++) {
      clock.advance(250);
      const current = timers.elapsedSeconds("transcription");
      expect(current).toBeGreaterThan(previous);
      previous = current;
    }
  });

  it("accumulates across pause/resume cycles", () => {
    const clock = manualClock();
    const timers = new TaskTimers(clock.now);
    timers.start("metadata");
    clock.advance(500);
    timers.stop();
    clock.advance(9999); // paused time does not count
    timers.start("metadata");
    clock.advance(700);
    timers.stop();
    expect(timers.elapsedSeconds("metadata")).toBe(1.2);
  });

  it("focus is start", () => {
    const clock = manualClock();
    const timers = new TaskTimers(clock.now);
    timers.focus("triage");
    clock.advance(300);
    expect(timers.running).toBe("triage");
    timers.focus("triage"); // re-focusing the running section is a no-op
    clock.advance(300);
    timers.stop();
    expect(timers.elapsedSeconds("triage")).toBe(0.6);
  });

  it("submitted records equal the displayed stopwatch values", () => {
    const clock = manualClock();
    const timers = new TaskTimers(clock.now);
    timers.start("triage");
    clock.advance(4230); // displays 4.2
    timers.start("metadata");
    clock.advance(41060); // displays 41.1
    timers.start("transcription");
    clock.advance(66600);
    timers.stop();
    const displayed = {
      triage: timers.elapsedSeconds("triage"),
      metadata: timers.elapsedSeconds("metadata"),
      transcription: timers.elapsedSeconds("transcription"),
    };
    const records = timers.toRecords("with_automation");
    expect(records).toHaveLength(3);
    for (const record of records) {
      expect(record.seconds).toBe(displayed[record.task as keyof typeof displayed]);
      expect(record.phase).toBe("with_automation");
    }
  });

  it("refuses to build records while a timer runs", () => {
    const clock = manualClock();
    const timers = new TaskTimers(clock.now);
    timers.start("triage");
    expect(() => timers.toRecords("with_automation")).toThrow(/stop all timers/);
  });

  it("omits zero-valued tasks from the payload", () => {
    const clock = manualClock();
    const timers = new TaskTimers(clock.now);
    timers.start("metadata");
    clock.advance(1500);
    timers.stop();
    const records = timers.toRecords("without_automation");
    expect(records).toEqual([{ task: "metadata", seconds: 1.5, phase: "without_automation" }]);
  });
});
