import { VersionConflictError } from "./api.js";
import type { SessionSnapshot } from "./types.js";

export interface ViewState {
  snapshot: SessionSnapshot | null;
  version: number;
  lastError: string | null;
}

interface SnapshotSource {
  getSession(id: string): Promise<SessionSnapshot>;
}

/** Holds the snapshot the views render from.
 *
 * The displayed version is always the snapshot's version.  A mutation that
 * fails with a stale version triggers exactly one refresh and surfaces the
 * error; it is never silently retried, because the analyst must see what
 * changed under them before acting again.
 */
export class SessionStore {
  state: ViewState = { snapshot: null, version: 0, lastError: null };
  refreshCount = 0;
  private listeners: Array<(state: ViewState) => void> = [];
  private timer: ReturnType<typeof setInterval> | null = null;

  constructor(
    private readonly api: SnapshotSource,
    readonly sessionId: string,
  ) {}

  subscribe(listener: (state: ViewState) => void): void {
    this.listeners.push(listener);
  }

  private notify(): void {
    for (const listener of this.listeners) listener(this.state);
  }

  async refresh(): Promise<SessionSnapshot> {
    const snapshot = await this.api.getSession(this.sessionId);
    this.refreshCount += 1;
    this.state = { snapshot, version: snapshot.version, lastError: null };
    this.notify();
    return snapshot;
  }

  /** Run one mutation against the current version, then refresh.
   *
   * On a version conflict: refresh once, report, and stop.  The caller
   * decides whether the action still makes sense against the new state.
   */
  async mutate<T>(action: (expectedVersion: number) => Promise<T>): Promise<T | null> {
    try {
      const result = await action(this.state.version);
      await this.refresh();
      return result;
    } catch (err) {
      if (err instanceof VersionConflictError) {
        await this.refresh();
        this.state = { ...this.state, lastError: "session changed underneath; view refreshed" };
        this.notify();
        return null;
      }
      throw err;
    }
  }

  startPolling(intervalMs: number): void {
    this.stopPolling();
    this.timer = setInterval(() => {
      void this.refresh().catch(() => {
        // transient poll failures keep the last good snapshot on screen
      });
    }, intervalMs);
  }

  stopPolling(): void {
    if (this.timer !== null) {
      clearInterval(this.timer);
      this.timer = null;
    }
  }
}
