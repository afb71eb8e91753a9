/** Per-task stopwatches mirroring the moderators' instrumentation protocol.
 *
 * At most one timer runs at a time: starting a task (or focusing its
 * section) pauses whichever task was running. Elapsed time accumulates
 * across pauses, strictly increases while running, and is reported at
 * 0.1 s resolution — the submitted seconds are exactly the displayed ones.
 */

import type { Phase, TaskName, TimingRecord } from "./types.js";

export type Clock = () => number; // milliseconds

export const TIMED_TASKS: TaskName[] = ["triage", "metadata", "transcription"];

export class TaskTimers {
  private accumulatedMs = new Map<TaskName, number>();
  private runningTask: TaskName | null = null;
  private runningSince = 0;

  constructor(private readonly now: Clock = () => Date.now()) {
    for (const task of TIMED_TASKS) this.accumulatedMs.set(task, 0);
  }

  get running(): TaskName | null {
    return this.runningTask;
  }

  /** Manual start; also invoked by section focus. Pauses any other timer. */
  start(task: TaskName): void {
    if (!this.accumulatedMs.has(task)) throw new Error(`not a timed task: ${task}`);
    if (this.runningTask === task) return;
    this.stop();
    this.runningTask = task;
    this.runningSince = this.now();
  }

  /** Auto-start hook for section focus; same semantics as start(). */
  focus(task: TaskName): void {
    this.start(task);
  }

  stop(): void {
    if (this.runningTask === null) return;
    const elapsed = this.now() - this.runningSince;
    this.accumulatedMs.set(
      this.runningTask,
      (this.accumulatedMs.get(this.runningTask) ?? 0) + Math.max(0, elapsed),
    );
    this.runningTask = null;
  }

  /** Live value for display, including the running segment. */
  elapsedSeconds(task: TaskName): number {
    let ms = this.accumulatedMs.get(task) ?? 0;
    if (this.runningTask === task) ms += Math.max(0, this.now() - this.runningSince);
    return Math.round(ms / 100) / 10;
  }

  /** Stopwatch values as submitted: identical to the displayed 0.1 s figures. */
  toRecords(phase: Phase): TimingRecord[] {
    if (this.runningTask !== null) throw new Error("stop all timers before submitting");
    const records: TimingRecord[] = [];
    for (const task of TIMED_TASKS) {
      const seconds = this.elapsedSeconds(task);
      if (seconds > 0) records.push({ task, seconds, phase });
    }
    return records;
  }
}
