// Browser entry point: hash routing over the three pages and wiring between
// the form, the poller, and the renderers.

import { ApiClient, RecordingRejected, UploadTooLarge } from "./api.js";
import {
  RecordingFormValues,
  buildRecordingBody,
  validateRecordingForm,
} from "./form.js";
import { EpisodePoller } from "./poll.js";
import {
  columnCountForWidth,
  renderChannelEpisodes,
  renderChannelsPage,
  renderEpisodesPage,
  renderFormBanner,
  renderNotFound,
} from "./views.js";

const client = new ApiClient("");
let poller: EpisodePoller | null = null;

function mount(): HTMLElement {
  const el = document.getElementById("page");
  if (!el) throw new Error("missing #page mount point");
  return el;
}

function applyLayout(): void {
  document.body.dataset.columns = String(
    columnCountForWidth(window.innerWidth),
  );
}

function stopPolling(): void {
  poller?.stop();
  poller = null;
}

function showEpisodes(): void {
  stopPolling();
  const page = mount();
  page.innerHTML = `<p class="empty-state">Loading…</p>`;
  poller = new EpisodePoller(client, {
    onUpdate: (episodes) => {
      page.innerHTML = renderEpisodesPage(episodes, (id) =>
        client.audioUrl(id),
      );
    },
    onError: () => {
      page.innerHTML = renderFormBanner(
        "Could not reach the service. Retrying…",
      );
    },
  });
  poller.start();
}

async function showChannels(channelId?: string): Promise<void> {
  stopPolling();
  const page = mount();
  if (channelId === undefined) {
    page.innerHTML = renderChannelsPage(await client.listChannels());
    return;
  }
  const channel = (await client.listChannels()).find(
    (c) => c.id === channelId,
  );
  if (!channel) {
    page.innerHTML = renderNotFound(`channel ${channelId}`);
    return;
  }
  const episodes =
    channel.episode_ids.length === 0
      ? []
      : await client.listChannelEpisodes(channelId);
  page.innerHTML = renderChannelEpisodes(channel, episodes, (id) =>
    client.audioUrl(id),
  );
}

function readForm(form: HTMLFormElement): {
  values: RecordingFormValues;
  blobs: File[];
} {
  const data = new FormData(form);
  const files = (data.getAll("pdf") as File[]).filter((f) => f.name !== "");
  return {
    values: {
      title: String(data.get("title") ?? ""),
      minutes: String(data.get("minutes") ?? ""),
      language: String(data.get("language") ?? ""),
      model: String(data.get("model") ?? ""),
      channel: String(data.get("channel") ?? ""),
      description: String(data.get("description") ?? ""),
      keywords: String(data.get("keywords") ?? ""),
      files: files.map((f) => ({ name: f.name, size: f.size })),
    },
    blobs: files,
  };
}

function clearFormErrors(form: HTMLFormElement): void {
  form.querySelectorAll(".field-error").forEach((el) => el.remove());
  document.getElementById("form-banner")!.innerHTML = "";
}

function showFieldError(
  form: HTMLFormElement,
  field: string,
  message: string,
): void {
  const input = form.querySelector(`[data-field="${field}"]`);
  const note = document.createElement("p");
  note.className = "field-error";
  note.textContent = message;
  (input ?? form).append(note);
}

function wireRecordingForm(): void {
  const form = document.getElementById("recording-form") as HTMLFormElement;
  form.addEventListener("submit", async (event) => {
    event.preventDefault();
    clearFormErrors(form);
    const { values, blobs } = readForm(form);
    const invalid = validateRecordingForm(values);
    if (invalid) {
      showFieldError(form, invalid.field, invalid.message);
      return; // no request is sent for an invalid form
    }
    try {
      await client.submitRecording(buildRecordingBody(values, blobs));
      window.location.hash = "#/episodes";
    } catch (error) {
      if (error instanceof RecordingRejected) {
        showFieldError(
          form,
          error.fieldError.field,
          error.fieldError.reason,
        );
      } else if (error instanceof UploadTooLarge) {
        document.getElementById("form-banner")!.innerHTML = renderFormBanner(
          error.message,
        );
      } else {
        document.getElementById("form-banner")!.innerHTML = renderFormBanner(
          "Submitting the recording failed. Please try again.",
        );
      }
    }
  });
}

function route(): void {
  const hash = window.location.hash || "#/recording";
  document
    .querySelectorAll("nav a")
    .forEach((a) =>
      a.classList.toggle("active", a.getAttribute("href") === hash),
    );
  const formSection = document.getElementById("recording-section")!;
  const pageSection = document.getElementById("page")!;
  if (hash === "#/recording") {
    stopPolling();
    formSection.hidden = false;
    pageSection.innerHTML = "";
    return;
  }
  formSection.hidden = true;
  if (hash === "#/episodes") {
    showEpisodes();
  } else if (hash === "#/channels") {
    void showChannels();
  } else if (hash.startsWith("#/channels/")) {
    void showChannels(decodeURIComponent(hash.slice("#/channels/".length)));
  } else {
    stopPolling();
    pageSection.innerHTML = renderNotFound(hash);
  }
}

export function boot(): void {
  applyLayout();
  window.addEventListener("resize", applyLayout);
  window.addEventListener("hashchange", route);
  wireRecordingForm();
  route();
}

if (typeof document !== "undefined" && document.getElementById("page")) {
  boot();
}
