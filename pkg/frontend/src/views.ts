// HTML renderers for the three pages. Pure string-producing functions so
// they are unit-testable without a DOM; app.ts injects the results.
//
// Status rendering never invents state: every badge label below is derived
// from exactly the four API status values, and an unknown status throws.

import { formatDuration } from "./format.js";
import { Channel, Episode, EpisodeStatus } from "./types.js";

export const BADGE_LABELS: Record<EpisodeStatus, string> = {
  pending: "Recording...",
  recording: "Recording...",
  complete: "Complete",
  failed: "Failed",
};

/** Viewport widths up to this many CSS px get the single-column layout. */
export const SINGLE_COLUMN_MAX_WIDTH = 720;

export function columnCountForWidth(widthPx: number): 1 | 2 {
  return widthPx <= SINGLE_COLUMN_MAX_WIDTH ? 1 : 2;
}

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

export function statusBadge(status: EpisodeStatus): string {
  const label = BADGE_LABELS[status];
  if (label === undefined) {
    throw new Error(`unknown episode status: ${status}`);
  }
  return `<span class="badge badge-${status}">${label}</span>`;
}

export function renderEpisodeRow(episode: Episode, audioUrl: string): string {
  const parts = [
    `<article class="episode-row" data-id="${escapeHtml(episode.id)}" data-status="${episode.status}">`,
    `<h3 class="episode-title">${escapeHtml(episode.title)}</h3>`,
    statusBadge(episode.status),
  ];
  if (episode.status === "complete") {
    parts.push(
      `<span class="episode-duration">${formatDuration(episode.duration_sec)}</span>`,
      `<audio controls preload="none" src="${escapeHtml(audioUrl)}"></audio>`,
    );
  } else if (episode.status === "failed") {
    parts.push(
      `<p class="failure-reason">${escapeHtml(episode.failure_reason)}</p>`,
    );
  }
  parts.push(`</article>`);
  return parts.join("\n");
}

export function renderEpisodesPage(
  episodes: Episode[],
  audioUrlFor: (id: string) => string,
): string {
  if (episodes.length === 0) {
    return `<p class="empty-state">No episodes yet. Record one from the Recording page.</p>`;
  }
  return episodes
    .map((e) => renderEpisodeRow(e, audioUrlFor(e.id)))
    .join("\n");
}

export function renderChannelCard(channel: Channel): string {
  const count = channel.episode_ids.length;
  const noun = count === 1 ? "episode" : "episodes";
  return [
    `<a class="channel-card" href="#/channels/${escapeHtml(channel.id)}">`,
    `<h3>${escapeHtml(channel.display_name)}</h3>`,
    `<span class="channel-count">${count} ${noun}</span>`,
    `</a>`,
  ].join("\n");
}

export function renderChannelsPage(channels: Channel[]): string {
  if (channels.length === 0) {
    return `<p class="empty-state">No channels yet.</p>`;
  }
  return channels.map(renderChannelCard).join("\n");
}

export function renderChannelEpisodes(
  channel: Channel,
  episodes: Episode[],
  audioUrlFor: (id: string) => string,
): string {
  const header = `<h2>${escapeHtml(channel.display_name)}</h2>`;
  if (episodes.length === 0) {
    return `${header}\n<p class="empty-state">This channel has no episodes yet.</p>`;
  }
  return `${header}\n${renderEpisodesPage(episodes, audioUrlFor)}`;
}

export function renderNotFound(what: string): string {
  return `<p class="not-found">Not found: ${escapeHtml(what)}</p>`;
}

export function renderFormBanner(message: string): string {
  return `<div class="form-banner" role="alert">${escapeHtml(message)}</div>`;
}
