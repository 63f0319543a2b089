// Shared fixtures: canned episodes and a scripted fetch for driving the
// client and poller without a real server.

import { FetchLike } from "../src/api.js";
import { Episode } from "../src/types.js";

export const SHA = "a".repeat(64);

export function makeEpisode(overrides: Partial<Episode> = {}): Episode {
  return {
    id: "0123456789abcdef-00000001",
    title: "Fixture Episode",
    status: "pending",
    created_at: "2026-08-25T12:00:00+00:00",
    duration_sec: 0,
    language: "en",
    model_id: "mock",
    channel_id: "default",
    description: "",
    keywords: [],
    cover_image_url: "",
    source_papers: [["paper.pdf", SHA]],
    audio_ref: "",
    failure_reason: "",
    ...overrides,
  };
}

export function jsonResponse(body: unknown, status = 200): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "content-type": "application/json" },
  });
}

export interface RecordedRequest {
  url: string;
  init?: RequestInit;
}

/**
 * A fetch that replays one response per call in order and records requests.
 * Entries may be Response objects or factories (for per-call behavior).
 */
export function scriptedFetch(
  script: (Response | (() => Response | Promise<Response>))[],
): { fetchFn: FetchLike; requests: RecordedRequest[] } {
  const requests: RecordedRequest[] = [];
  let index = 0;
  const fetchFn: FetchLike = async (url, init) => {
    requests.push({ url, init });
    const entry = script[Math.min(index, script.length - 1)];
    index += 1;
    if (entry === undefined) throw new Error("scripted fetch exhausted");
    return typeof entry === "function" ? entry() : entry.clone();
  };
  return { fetchFn, requests };
}
