// Episode list polling. The service has no push channel; the list is
// re-fetched every 2 seconds while any episode is still pending/recording,
// with at most one request in flight (a slow response simply delays the
// next tick instead of stacking up).

import { ApiClient } from "./api.js";
import { Episode } from "./types.js";

export const POLL_INTERVAL_MS = 2000;

export function hasUnsettled(episodes: Episode[]): boolean {
  return episodes.some(
    (e) => e.status === "pending" || e.status === "recording",
  );
}

export interface PollerOptions {
  intervalMs?: number;
  /** Called after every successful fetch with the fresh list. */
  onUpdate: (episodes: Episode[]) => void;
  /** Called once when no episode is pending/recording anymore. */
  onSettled?: (episodes: Episode[]) => void;
  onError?: (error: unknown) => void;
}

export class EpisodePoller {
  private timer: ReturnType<typeof setTimeout> | null = null;
  private inFlight = false;
  private stopped = true;

  constructor(
    private readonly client: ApiClient,
    private readonly options: PollerOptions,
  ) {}

  /** Fetch immediately, then keep polling until the list settles or stop(). */
  start(): void {
    this.stopped = false;
    void this.tick();
  }

  stop(): void {
    this.stopped = true;
    if (this.timer !== null) {
      clearTimeout(this.timer);
      this.timer = null;
    }
  }

  get polling(): boolean {
    return !this.stopped;
  }

  private schedule(): void {
    if (this.stopped) return;
    this.timer = setTimeout(() => {
      this.timer = null;
      void this.tick();
    }, this.options.intervalMs ?? POLL_INTERVAL_MS);
  }

  private async tick(): Promise<void> {
    if (this.inFlight || this.stopped) return;
    this.inFlight = true;
    try {
      const episodes = await this.client.listEpisodes();
      if (this.stopped) return;
      this.options.onUpdate(episodes);
      if (!hasUnsettled(episodes)) {
        this.stopped = true;
        this.options.onSettled?.(episodes);
        return;
      }
    } catch (error) {
      this.options.onError?.(error);
    } finally {
      this.inFlight = false;
    }
    this.schedule();
  }
}
