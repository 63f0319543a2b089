// The single typed client for the episode service. Every page goes through
// this module; responses are validated against the zod mirrors of the
// server's committed JSON Schemas before any view sees them.

import {
  Channel,
  Episode,
  FieldError,
  channelListSchema,
  episodeListSchema,
  episodeSchema,
  fieldErrorSchema,
} from "./types.js";

export type FetchLike = (
  input: string,
  init?: RequestInit,
) => Promise<Response>;

/** A 400 from POST /recordings, carrying the offending field. */
export class RecordingRejected extends Error {
  constructor(public readonly fieldError: FieldError) {
    super(`${fieldError.field}: ${fieldError.reason}`);
    this.name = "RecordingRejected";
  }
}

/** The upload exceeded the server's size limit (413). */
export class UploadTooLarge extends Error {
  constructor() {
    super("The uploaded files exceed the server's size limit.");
    this.name = "UploadTooLarge";
  }
}

export class ApiError extends Error {
  constructor(public readonly status: number, message: string) {
    super(message);
    this.name = "ApiError";
  }
}

export class ApiClient {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async getJson(path: string): Promise<unknown> {
    const resp = await this.fetchFn(`${this.baseUrl}${path}`);
    if (!resp.ok) {
      throw new ApiError(resp.status, `GET ${path} failed (${resp.status})`);
    }
    return resp.json();
  }

  async submitRecording(body: FormData): Promise<Episode> {
    const resp = await this.fetchFn(`${this.baseUrl}/recordings`, {
      method: "POST",
      body,
    });
    if (resp.status === 413) throw new UploadTooLarge();
    if (resp.status === 400) {
      throw new RecordingRejected(fieldErrorSchema.parse(await resp.json()));
    }
    if (resp.status !== 202) {
      throw new ApiError(resp.status, `POST /recordings failed (${resp.status})`);
    }
    return episodeSchema.parse(await resp.json());
  }

  async listEpisodes(): Promise<Episode[]> {
    return episodeListSchema.parse(await this.getJson("/episodes"));
  }

  async getEpisode(id: string): Promise<Episode> {
    return episodeSchema.parse(
      await this.getJson(`/episodes/${encodeURIComponent(id)}`),
    );
  }

  async listChannels(): Promise<Channel[]> {
    return channelListSchema.parse(await this.getJson("/channels"));
  }

  async listChannelEpisodes(channelId: string): Promise<Episode[]> {
    return episodeListSchema.parse(
      await this.getJson(`/channels/${encodeURIComponent(channelId)}/episodes`),
    );
  }

  /** URL for the <audio> element; the server streams it with Range support. */
  audioUrl(episodeId: string): string {
    return `${this.baseUrl}/episodes/${encodeURIComponent(episodeId)}/audio`;
  }
}
