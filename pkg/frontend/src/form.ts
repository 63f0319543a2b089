// Client-side validation for the recording form. The rules mirror the
// server's request validation exactly (same fields, same bounds, same
// first-offending-field reporting), so anything this module accepts will
// not bounce with a 400 for a predictable reason.

import { LANGUAGES } from "./types.js";

export interface RecordingFormValues {
  title: string;
  minutes: string; // raw input field value
  language: string;
  model: string;
  channel?: string;
  description?: string;
  keywords?: string; // comma-separated
  files: { name: string; size: number }[];
}

export interface FormError {
  field: string;
  message: string;
}

export const MIN_MINUTES = 1;
export const MAX_MINUTES = 120;

/**
 * Returns the first invalid field, or null if the form may be submitted.
 * Field names match the server's 400 responses so inline errors from either
 * side land on the same input.
 */
export function validateRecordingForm(
  values: RecordingFormValues,
): FormError | null {
  if (values.title.trim() === "") {
    return { field: "title", message: "Title is required." };
  }
  const minutes = Number(values.minutes);
  if (
    values.minutes.trim() === "" ||
    !Number.isInteger(minutes) ||
    minutes < MIN_MINUTES ||
    minutes > MAX_MINUTES
  ) {
    return {
      field: "minutes",
      message: `Duration must be a whole number of minutes between ${MIN_MINUTES} and ${MAX_MINUTES}.`,
    };
  }
  if (!(LANGUAGES as readonly string[]).includes(values.language)) {
    return { field: "language", message: "Choose a supported language." };
  }
  if (values.model.trim() === "") {
    return { field: "model_id", message: "Choose an LLM model." };
  }
  if (values.files.length === 0) {
    return { field: "source_papers", message: "Attach at least one PDF." };
  }
  const empty = values.files.find((f) => f.size === 0);
  if (empty) {
    return { field: "source_papers", message: `${empty.name} is empty.` };
  }
  return null;
}

/** Build the multipart body for POST /recordings from validated values. */
export function buildRecordingBody(
  values: RecordingFormValues,
  fileBlobs: Blob[],
): FormData {
  const body = new FormData();
  body.set("title", values.title.trim());
  body.set("minutes", String(Number(values.minutes)));
  body.set("language", values.language);
  body.set("model", values.model.trim());
  if (values.channel?.trim()) body.set("channel", values.channel.trim());
  if (values.description) body.set("description", values.description);
  if (values.keywords?.trim()) body.set("keywords", values.keywords.trim());
  fileBlobs.forEach((blob, i) => {
    const name = values.files[i]?.name ?? `paper-${i}.pdf`;
    body.append("pdf", blob, name);
  });
  return body;
}
