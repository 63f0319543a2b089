// Polling contract: re-fetch every 2 s while any episode is unsettled,
// never stack requests, stop once everything is complete/failed.

import { afterEach, beforeEach, describe, expect, it, vi } from "vitest";

import { ApiClient } from "../src/api.js";
import { EpisodePoller, POLL_INTERVAL_MS, hasUnsettled } from "../src/poll.js";
import { Episode, EpisodeStatus } from "../src/types.js";
import { jsonResponse, makeEpisode, scriptedFetch } from "./helpers.js";

beforeEach(() => vi.useFakeTimers());
afterEach(() => vi.useRealTimers());

function listOf(status: EpisodeStatus): Episode[] {
  return [
    makeEpisode({
      status,
      duration_sec: status === "complete" ? 924.6 : 0,
      audio_ref: status === "complete" ? "a".repeat(64) : "",
      failure_reason: status === "failed" ? "interrupted" : "",
    }),
  ];
}

async function advance(ms: number): Promise<void> {
  await vi.advanceTimersByTimeAsync(ms);
}

describe("hasUnsettled", () => {
  it("is true only while something is pending or recording", () => {
    expect(hasUnsettled(listOf("pending"))).toBe(true);
    expect(hasUnsettled(listOf("recording"))).toBe(true);
    expect(hasUnsettled(listOf("complete"))).toBe(false);
    expect(hasUnsettled(listOf("failed"))).toBe(false);
    expect(hasUnsettled([])).toBe(false);
  });
});

describe("EpisodePoller", () => {
  it("walks pending -> recording -> complete over three 2 s polls, then stops", async () => {
    const { fetchFn, requests } = scriptedFetch([
      jsonResponse(listOf("pending")),
      jsonResponse(listOf("recording")),
      jsonResponse(listOf("complete")),
    ]);
    const seen: EpisodeStatus[] = [];
    let settled = 0;
    const poller = new EpisodePoller(new ApiClient("", fetchFn), {
      onUpdate: (eps) => seen.push(eps[0]!.status),
      onSettled: () => (settled += 1),
    });

    poller.start();
    await advance(0);
    expect(seen).toEqual(["pending"]);

    await advance(POLL_INTERVAL_MS);
    expect(seen).toEqual(["pending", "recording"]);

    await advance(POLL_INTERVAL_MS);
    expect(seen).toEqual(["pending", "recording", "complete"]);
    expect(settled).toBe(1);
    expect(poller.polling).toBe(false);

    // settled: no further requests even as time passes
    await advance(POLL_INTERVAL_MS * 5);
    expect(requests).toHaveLength(3);
  });

  it("keeps at most one request in flight when responses are slow", async () => {
    let inFlight = 0;
    let maxInFlight = 0;
    const slow = () =>
      new Promise<Response>((resolve) => {
        inFlight += 1;
        maxInFlight = Math.max(maxInFlight, inFlight);
        setTimeout(() => {
          inFlight -= 1;
          resolve(jsonResponse(listOf("recording")));
        }, POLL_INTERVAL_MS * 3); // each response takes longer than the interval
      });
    const { fetchFn, requests } = scriptedFetch([slow, slow, slow, slow]);
    const poller = new EpisodePoller(new ApiClient("", fetchFn), {
      onUpdate: () => undefined,
    });

    poller.start();
    await advance(POLL_INTERVAL_MS * 12);
    poller.stop();
    expect(maxInFlight).toBe(1);
    expect(requests.length).toBeGreaterThan(1);
  });

  it("reports fetch errors and keeps polling", async () => {
    const { fetchFn, requests } = scriptedFetch([
      () => Promise.reject(new Error("network down")),
      jsonResponse(listOf("complete")),
    ]);
    const errors: unknown[] = [];
    const seen: EpisodeStatus[] = [];
    const poller = new EpisodePoller(new ApiClient("", fetchFn), {
      onUpdate: (eps) => seen.push(eps[0]!.status),
      onError: (e) => errors.push(e),
    });

    poller.start();
    await advance(0);
    expect(errors).toHaveLength(1);
    await advance(POLL_INTERVAL_MS);
    expect(seen).toEqual(["complete"]);
    expect(requests).toHaveLength(2);
  });

  it("stop() cancels the next scheduled poll", async () => {
    const { fetchFn, requests } = scriptedFetch([
      jsonResponse(listOf("pending")),
    ]);
    const poller = new EpisodePoller(new ApiClient("", fetchFn), {
      onUpdate: () => undefined,
    });
    poller.start();
    await advance(0);
    poller.stop();
    await advance(POLL_INTERVAL_MS * 5);
    expect(requests).toHaveLength(1);
  });
});
