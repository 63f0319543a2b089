// Wire types for the episode service, mirrored from the JSON Schemas the
// server commits to (see ../../src/paperwave/schemas). Every response the
// client accepts is parsed through these zod schemas, so a server drift
// fails loudly instead of rendering garbage.

import { z } from "zod";

export const EPISODE_STATUSES = [
  "pending",
  "recording",
  "complete",
  "failed",
] as const;

export const LANGUAGES = ["en", "ja", "ko"] as const;

export const episodeSchema = z
  .object({
    id: z.string().min(1),
    title: z.string().min(1),
    status: z.enum(EPISODE_STATUSES),
    created_at: z.string().min(1),
    duration_sec: z.number().min(0),
    language: z.enum(LANGUAGES),
    model_id: z.string().min(1),
    channel_id: z.string().min(1),
    description: z.string(),
    keywords: z.array(z.string()),
    cover_image_url: z.string(),
    source_papers: z
      .array(z.tuple([z.string(), z.string().regex(/^[0-9a-f]{64}$/)]))
      .min(1),
    audio_ref: z.string(),
    failure_reason: z.string(),
  })
  .strict();

export const episodeListSchema = z.array(episodeSchema);

export const channelSchema = z
  .object({
    id: z.string().min(1),
    display_name: z.string().min(1),
    episode_ids: z.array(z.string()),
  })
  .strict();

export const channelListSchema = z.array(channelSchema);

export const fieldErrorSchema = z.object({
  field: z.string(),
  reason: z.string(),
});

export type Episode = z.infer<typeof episodeSchema>;
export type EpisodeStatus = Episode["status"];
export type Language = Episode["language"];
export type Channel = z.infer<typeof channelSchema>;
export type FieldError = z.infer<typeof fieldErrorSchema>;
