// Display helpers for episode metadata.

/**
 * Render a duration in seconds as "MM:SS" (minutes are not capped at 59,
 * so a 90-minute episode shows as "90:00"). Example: 1304 -> "21:44".
 */
export function formatDuration(seconds: number): string {
  if (!Number.isFinite(seconds) || seconds < 0) {
    throw new RangeError(`duration must be a non-negative number, got ${seconds}`);
  }
  const whole = Math.floor(seconds);
  const minutes = Math.floor(whole / 60);
  const rest = whole % 60;
  return `${minutes}:${String(rest).padStart(2, "0")}`;
}

/** Render an ISO timestamp as a short local date-time, or "" if unparsable. */
export function formatCreatedAt(iso: string): string {
  const date = new Date(iso);
  if (Number.isNaN(date.getTime())) return "";
  return date.toLocaleString();
}
