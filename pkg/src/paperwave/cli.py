"""Command-line front door: record episodes, inspect the store, run the
service."""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from .options import SUPPORTED_LANGUAGES, RecordingRequest
from .pipeline import PipelineConfig, run_episode_job
from .providers import ProviderConfig
from .store import EpisodeStore, canonical_json

EXIT_PIPELINE_FAILURE = 3
EXIT_UNKNOWN_ID = 4


def _minutes_check(ctx, param, value):
    if not 1 <= value <= 120:
        raise click.BadParameter("--minutes must be between 1 and 120")
    return value


@click.group()
@click.option("--store", "store_root", default="./paperwave-store",
              envvar="PAPERWAVE_STORE", show_default=True,
              help="Store root directory.")
@click.pass_context
def main(ctx, store_root):
    """Adapt research-paper PDFs into conversational podcast episodes."""
    ctx.ensure_object(dict)
    ctx.obj["store_root"] = store_root


@main.command()
@click.option("--pdf", "pdfs", multiple=True, required=True,
              type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.option("--title", required=True)
@click.option("--minutes", required=True, type=int, callback=_minutes_check)
@click.option("--language", required=True,
              type=click.Choice(SUPPORTED_LANGUAGES))
@click.option("--model", "model_id", required=True)
@click.option("--description", default="")
@click.option("--keywords", default="", help="Comma-separated keywords.")
@click.option("--cover-image-url", default="")
@click.option("--channel", "channel_id", default="default")
@click.option("--offline", is_flag=True,
              help="Use the deterministic local providers (no network).")
@click.option("--out", "out_dir", default="./output", show_default=True,
              type=click.Path(file_okay=False, path_type=Path))
@click.option("--llm-endpoint", default="")
@click.option("--tts-endpoint", default="")
@click.pass_context
def record(ctx, pdfs, title, minutes, language, model_id, description,
           keywords, cover_image_url, channel_id, offline, out_dir,
           llm_endpoint, tts_endpoint):
    """Run the full pipeline inline and export the episode."""
    store = EpisodeStore(ctx.obj["store_root"])
    request = RecordingRequest(
        title=title,
        minutes=minutes,
        language=language,
        model_id=model_id,
        papers=[(p.name, p.read_bytes()) for p in pdfs],
        channel_id=channel_id,
        description=description,
        keywords=[k.strip() for k in keywords.split(",") if k.strip()],
        cover_image_url=cover_image_url,
    )
    episode = store.create_episode(request)
    store.transition(episode.id, "recording")

    provider = ProviderConfig(
        llm_endpoint=llm_endpoint or "offline:llm",
        tts_endpoint=tts_endpoint or "offline:tts",
        model_id=model_id,
    )
    cfg = PipelineConfig(provider=provider, offline=offline or not llm_endpoint)
    episode = run_episode_job(store, episode, cfg)

    if episode.status != "complete":
        click.echo(f"recording failed: {episode.failure_reason}", err=True)
        sys.exit(EXIT_PIPELINE_FAILURE)

    episode_dir = out_dir / episode.id
    episode_dir.mkdir(parents=True, exist_ok=True)
    (episode_dir / "episode.json").write_bytes(canonical_json(episode))
    (episode_dir / "audio.wav").write_bytes(store.get_blob(episode.audio_ref))
    script_doc = store.get_script(episode.id)
    (episode_dir / "script.json").write_text(
        json.dumps(script_doc, ensure_ascii=False, indent=2), "utf-8"
    )
    click.echo(episode.id)


@main.group()
def episodes():
    """Inspect and export stored episodes."""


@episodes.command("list")
@click.option("--channel", "channel_id", default=None)
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
def episodes_list(ctx, channel_id, as_json):
    store = EpisodeStore(ctx.obj["store_root"])
    try:
        rows = store.list_episodes(channel_id)
    except Exception:
        click.echo(f"unknown channel: {channel_id}", err=True)
        sys.exit(EXIT_UNKNOWN_ID)
    if as_json:
        click.echo(json.dumps([e.to_dict() for e in rows], ensure_ascii=False))
        return
    click.echo(f"{'ID':34}  {'STATUS':10}  {'DUR(s)':>8}  TITLE")
    for e in rows:
        click.echo(f"{e.id:34}  {e.status:10}  {e.duration_sec:8.1f}  {e.title}")


@episodes.command("export")
@click.argument("episode_id")
@click.option("--out", "out_path", required=True,
              type=click.Path(dir_okay=False, path_type=Path))
@click.pass_context
def episodes_export(ctx, episode_id, out_path):
    store = EpisodeStore(ctx.obj["store_root"])
    try:
        episode = store.get_episode(episode_id)
    except Exception:
        click.echo(f"unknown episode: {episode_id}", err=True)
        sys.exit(EXIT_UNKNOWN_ID)
    if episode.status != "complete" or not episode.audio_ref:
        click.echo("episode has no audio yet", err=True)
        sys.exit(EXIT_PIPELINE_FAILURE)
    out_path.parent.mkdir(parents=True, exist_ok=True)
    out_path.write_bytes(store.get_blob(episode.audio_ref))
    click.echo(str(out_path))


@main.command()
@click.option("--config", "config_path", required=True,
              type=click.Path(exists=True, dir_okay=False, path_type=Path))
@click.pass_context
def serve(ctx, config_path):
    """Run the HTTP API and the background job runner."""
    import uvicorn

    from .service import JobRunner, JobRunnerConfig, create_app

    cfg = json.loads(config_path.read_text("utf-8"))
    store = EpisodeStore(cfg.get("store_root", ctx.obj["store_root"]))
    provider = ProviderConfig(**cfg.get("provider", {}))
    pipeline_cfg = PipelineConfig(
        provider=provider,
        offline=cfg.get("offline", True),
        **cfg.get("mix", {}),
    )
    runner = JobRunner(store, JobRunnerConfig(
        worker_count=cfg.get("worker_count", 2),
        poll_interval=cfg.get("poll_interval", 1.0),
        pipeline=pipeline_cfg,
    ))
    app = create_app(store, upload_limit=cfg.get("upload_limit", 50 * 2**20))
    runner.start()
    try:
        uvicorn.run(app, host=cfg.get("host", "127.0.0.1"),
                    port=cfg.get("port", 8080))
    finally:
        runner.stop()


if __name__ == "__main__":
    main()
