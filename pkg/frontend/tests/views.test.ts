import { readFileSync } from "node:fs";
import { join } from "node:path";
import { fileURLToPath } from "node:url";

import { describe, expect, it } from "vitest";

import { EPISODE_STATUSES } from "../src/types.js";
import {
  BADGE_LABELS,
  SINGLE_COLUMN_MAX_WIDTH,
  columnCountForWidth,
  escapeHtml,
  renderChannelEpisodes,
  renderChannelsPage,
  renderEpisodeRow,
  renderEpisodesPage,
  renderNotFound,
  statusBadge,
} from "../src/views.js";
import { makeEpisode } from "./helpers.js";

const audioUrlFor = (id: string) => `/episodes/${id}/audio`;

describe("status badges", () => {
  it("labels only the four API statuses — no invented states", () => {
    expect(Object.keys(BADGE_LABELS).sort()).toEqual(
      [...EPISODE_STATUSES].sort(),
    );
  });

  it("shows Recording... for a freshly submitted (pending) episode", () => {
    expect(statusBadge("pending")).toContain("Recording...");
    expect(statusBadge("recording")).toContain("Recording...");
  });

  it("throws on a status outside the API enum", () => {
    expect(() => statusBadge("uploading" as never)).toThrow(/unknown/);
  });
});

describe("episode rows", () => {
  it("renders a player with the range-served audio URL when complete", () => {
    const episode = makeEpisode({
      status: "complete",
      duration_sec: 1304,
      audio_ref: "b".repeat(64),
    });
    const html = renderEpisodeRow(episode, audioUrlFor(episode.id));
    expect(html).toContain("<audio controls");
    expect(html).toContain(`src="/episodes/${episode.id}/audio"`);
    expect(html).toContain("21:44"); // derived display duration
  });

  it("shows no player while recording", () => {
    const html = renderEpisodeRow(makeEpisode({ status: "recording" }), "");
    expect(html).not.toContain("<audio");
    expect(html).toContain("Recording...");
  });

  it("shows the failure reason on failed rows with the failed badge", () => {
    const episode = makeEpisode({
      status: "failed",
      failure_reason: "ProviderUnreachable: LLM endpoint failed",
    });
    const html = renderEpisodeRow(episode, "");
    expect(html).toContain("badge-failed");
    expect(html).toContain("ProviderUnreachable: LLM endpoint failed");
    expect(html).not.toContain("<audio");
  });

  it("escapes titles and reasons", () => {
    const episode = makeEpisode({
      title: "<script>alert(1)</script>",
      status: "failed",
      failure_reason: "a < b",
    });
    const html = renderEpisodeRow(episode, "");
    expect(html).not.toContain("<script>");
    expect(html).toContain("&lt;script&gt;");
    expect(html).toContain("a &lt; b");
  });

  it("renders an empty state when there are no episodes", () => {
    expect(renderEpisodesPage([], audioUrlFor)).toContain("No episodes yet");
  });
});

describe("channels", () => {
  it("renders one card per channel with episode counts", () => {
    const channels = Array.from({ length: 9 }, (_, i) => ({
      id: `user${i}`,
      display_name: `user${i}`,
      episode_ids: Array.from({ length: i }, (_, j) => `e${j}`),
    }));
    const html = renderChannelsPage(channels);
    expect(html.match(/channel-card/g)).toHaveLength(9);
    expect(html).toContain("0 episodes");
    expect(html).toContain("1 episode<");
    expect(html).toContain("8 episodes");
  });

  it("renders an empty state with no channels", () => {
    expect(renderChannelsPage([])).toContain("No channels yet");
  });

  it("renders an empty-state message for a channel with zero episodes", () => {
    const channel = { id: "alice", display_name: "alice", episode_ids: [] };
    const html = renderChannelEpisodes(channel, [], audioUrlFor);
    expect(html).toContain("alice");
    expect(html).toContain("no episodes yet");
  });

  it("renders a not-found view for unknown channels", () => {
    expect(renderNotFound("channel nobody")).toContain("Not found");
  });
});

describe("responsive layout", () => {
  it("uses a single column at 360 px", () => {
    expect(columnCountForWidth(360)).toBe(1);
  });

  it("uses two columns on desktop widths", () => {
    expect(columnCountForWidth(1280)).toBe(2);
  });

  it("the stylesheet collapses the grid at the same breakpoint", () => {
    const here = fileURLToPath(new URL(".", import.meta.url));
    const css = readFileSync(join(here, "..", "styles.css"), "utf-8");
    expect(css).toContain(`@media (max-width: ${SINGLE_COLUMN_MAX_WIDTH}px)`);
    expect(css).toMatch(/max-width: 720px\)\s*{\s*#page\s*{\s*grid-template-columns:\s*1fr;/);
    expect(SINGLE_COLUMN_MAX_WIDTH).toBeGreaterThanOrEqual(360);
  });
});

describe("escapeHtml", () => {
  it("escapes the four dangerous characters", () => {
    expect(escapeHtml(`<a href="x">&`)).toBe(
      "&lt;a href=&quot;x&quot;&gt;&amp;",
    );
  });
});
