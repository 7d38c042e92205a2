"""Command-line workbench: parsing, tagging, datasets, generation, eval, serving.

Exit codes: 0 success, 1 validation failure, 2 backend failure.  ``--format
json`` switches every command to machine-readable output on stdout.
"""

from __future__ import annotations

import functools
import json
import sys
from pathlib import Path

import click

from .dataset import (
    Dataset,
    DatasetRecord,
    FinetuneFormat,
    export_finetune,
    genre_distribution,
    import_corpus,
    load_dataset,
    save_dataset,
    write_finetune_jsonl,
)
from .errors import KurosawaError
from .generation import GenerationConfig, generate_plot, generate_scene
from .metrics import LIKERT_FEATURES, LikertRating, likert_summary, metric_report
from .model import ACT_NAMES, Scene, Script
from .plots import GenerationProfile, validate_annotated_plot
from .screenplay import decode_tagged, encode_tagged, parse_script, render_screenplay
from .service.config import load_config, make_backend
from .service.store import JsonlStore

BACKEND_FAILURE_CODES = {"BackendUnavailable", "BackendRejected", "Timeout"}

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_BACKEND = 2


def guarded(func):
    """Map library errors onto the documented exit codes."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        ctx = click.get_current_context()
        json_mode = ctx.obj.get("format") == "json" if ctx.obj else False
        try:
            return func(*args, **kwargs)
        except KurosawaError as exc:
            if json_mode:
                click.echo(json.dumps({
                    "error": {"code": exc.code, "message": str(exc), "detail": exc.detail()},
                }))
            else:
                click.echo(f"error [{exc.code}]: {exc}", err=True)
            sys.exit(EXIT_BACKEND if exc.code in BACKEND_FAILURE_CODES else EXIT_VALIDATION)
        except ValueError as exc:
            if json_mode:
                click.echo(json.dumps({"error": {"code": "Validation", "message": str(exc)}}))
            else:
                click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_VALIDATION)

    return wrapper


def _emit(ctx: click.Context, data: dict, text: str) -> None:
    if ctx.obj.get("format") == "json":
        click.echo(json.dumps(data, ensure_ascii=False))
    else:
        click.echo(text)


def _effective_config(ctx: click.Context):
    config = load_config(ctx.obj.get("config_path"))
    overrides = {}
    if ctx.obj.get("data_dir"):
        overrides["data_dir"] = Path(ctx.obj["data_dir"])
    if ctx.obj.get("backend"):
        overrides["backend_kind"] = ctx.obj["backend"]
    if overrides:
        from dataclasses import replace

        config = replace(config, **overrides)
    return config


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True, dir_okay=False), default=None,
              help="Path to a YAML config file.")
@click.option("--data-dir", type=click.Path(file_okay=False), default=None,
              help="Directory for the append-only item store.")
@click.option("--backend", type=click.Choice(["mock", "live"]), default=None,
              help="Completion backend to use for generation.")
@click.option("--format", "output_format", type=click.Choice(["text", "json"]), default="text",
              help="Output format.")
@click.pass_context
def main(ctx: click.Context, config_path, data_dir, backend, output_format) -> None:
    """Scriptwriter's workbench: storylines to plots to scenes."""
    ctx.ensure_object(dict)
    ctx.obj.update(
        config_path=config_path,
        data_dir=data_dir,
        backend=backend,
        format=output_format,
    )


# ------------------------------------------------------------------ parsing

@main.command()
@click.argument("script_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--title", default="", help="Script title to record.")
@click.pass_context
@guarded
def parse(ctx: click.Context, script_file: str, title: str) -> None:
    """Parse a plain-text screenplay into scenes and elements."""
    text = Path(script_file).read_text(encoding="utf-8")
    result = parse_script(text, title=title or Path(script_file).stem)
    script = result.script
    element_count = sum(len(s.elements) for s in script.scenes)
    lines = [f"{script.title}: {len(script.scenes)} scenes, {element_count} elements"]
    for warning in result.warnings:
        lines.append(f"  warning [{warning.code}]: {warning.message}")
    _emit(ctx, {
        "script": script.to_dict(),
        "warnings": [w.to_dict() for w in result.warnings],
    }, "\n".join(lines))


@main.command()
@click.argument("scene_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--index", default=0, show_default=True, help="Scene index when the input is a full script.")
@click.pass_context
@guarded
def encode(ctx: click.Context, scene_file: str, index: int) -> None:
    """Encode a parsed scene (JSON) into tagged text."""
    doc = json.loads(Path(scene_file).read_text(encoding="utf-8"))
    if isinstance(doc, dict) and isinstance(doc.get("script"), dict):
        # output envelope of `parse --format json`
        doc = doc["script"]
    if not isinstance(doc, dict) or not ("scenes" in doc or "elements" in doc):
        raise ValueError("input is neither a parsed script nor a scene")
    if "scenes" in doc:
        scenes = Script.from_dict(doc).scenes
        if not 0 <= index < len(scenes):
            raise ValueError(f"scene index {index} out of range (script has {len(scenes)})")
        scene = scenes[index]
    else:
        scene = Scene.from_dict(doc)
    tagged = encode_tagged(scene)
    _emit(ctx, {"text": tagged}, tagged)


@main.command()
@click.argument("tagged_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--mode", type=click.Choice(["lenient", "strict"]), default="lenient", show_default=True)
@click.option("--render", is_flag=True, help="Print the scene as formatted screenplay text.")
@click.pass_context
@guarded
def decode(ctx: click.Context, tagged_file: str, mode: str, render: bool) -> None:
    """Decode tagged text back into a structured scene."""
    text = Path(tagged_file).read_text(encoding="utf-8")
    decoded = decode_tagged(text, strict=mode == "strict")
    if render:
        body = render_screenplay(decoded.scene)
    else:
        body = json.dumps(decoded.scene.to_dict(), indent=2, ensure_ascii=False)
    lines = [body]
    for warning in decoded.warnings:
        lines.append(f"warning [{warning.code}]: {warning.message}")
    _emit(ctx, {
        "scene": decoded.scene.to_dict(),
        "warnings": [w.to_dict() for w in decoded.warnings],
    }, "\n".join(lines))


@main.command("validate-plot")
@click.argument("plot_file", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
@guarded
def validate_plot(ctx: click.Context, plot_file: str) -> None:
    """Check an annotated plot for tag structure and length."""
    report = validate_annotated_plot(Path(plot_file).read_text(encoding="utf-8"))
    lines = []
    for entry in report.errors:
        lines.append(f"error [{entry.code}]: {entry.message}")
    for entry in report.warnings:
        lines.append(f"warning [{entry.code}]: {entry.message}")
    if report.ok and not report.warnings:
        lines.append("ok")
    _emit(ctx, {"report": report.to_dict()}, "\n".join(lines))
    if not report.ok:
        sys.exit(EXIT_VALIDATION)


# ----------------------------------------------------------------- datasets

@main.group()
def dataset() -> None:
    """Create, grow, inspect, and export datasets (JSONL files)."""


@dataset.command("create")
@click.argument("path", type=click.Path(dir_okay=False))
@click.pass_context
@guarded
def dataset_create(ctx: click.Context, path: str) -> None:
    """Create an empty dataset file."""
    target = Path(path)
    if target.exists():
        raise ValueError(f"{path} already exists")
    save_dataset(Dataset(name=target.stem), target)
    _emit(ctx, {"path": path, "size": 0}, f"created {path}")


@dataset.command("add")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.argument("record_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--mode", type=click.Choice(["lenient", "strict"]), default="lenient", show_default=True)
@click.pass_context
@guarded
def dataset_add(ctx: click.Context, path: str, record_file: str, mode: str) -> None:
    """Validate and append one record (a JSON file) to a dataset."""
    ds = load_dataset(path)
    record = DatasetRecord.from_dict(json.loads(Path(record_file).read_text(encoding="utf-8")))
    warnings = ds.add(record, mode=mode)
    save_dataset(ds, path)
    lines = [f"added {record.id} ({len(ds.records)} records)"]
    lines += [f"warning [{w.code}]: {w.message}" for w in warnings]
    _emit(ctx, {
        "id": record.id,
        "size": len(ds.records),
        "warnings": [w.to_dict() for w in warnings],
    }, "\n".join(lines))


@dataset.command("import")
@click.argument("manifest", type=click.Path(exists=True, dir_okay=False))
@click.option("--out", "out_path", type=click.Path(dir_okay=False), required=True)
@click.pass_context
@guarded
def dataset_import(ctx: click.Context, manifest: str, out_path: str) -> None:
    """Build a dataset from a pairing manifest (CSV)."""
    ds, report = import_corpus(manifest)
    save_dataset(ds, out_path)
    lines = [f"accepted {report.accepted}, rejected {len(report.rejected)}"]
    lines += [f"  {rid}: {reason}" for rid, reason in report.rejected]
    _emit(ctx, {"path": out_path, **report.to_dict()}, "\n".join(lines))


@dataset.command("export")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.option("--profile", type=click.Choice([p.value for p in GenerationProfile]), required=True)
@click.option("--out", "out_path", type=click.Path(dir_okay=False), required=True)
@click.pass_context
@guarded
def dataset_export(ctx: click.Context, path: str, profile: str, out_path: str) -> None:
    """Write fine-tune prompt/completion JSONL for a profile."""
    ds = load_dataset(path)
    fmt = FinetuneFormat()
    records = export_finetune(ds, GenerationProfile(profile), fmt)
    write_finetune_jsonl(records, out_path, fmt)
    _emit(ctx, {"path": out_path, "records": len(records)},
          f"wrote {len(records)} records to {out_path}")


@dataset.command("stats")
@click.argument("path", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
@guarded
def dataset_stats(ctx: click.Context, path: str) -> None:
    """Record count and genre histogram."""
    ds = load_dataset(path)
    histogram = genre_distribution(ds)
    lines = [f"{ds.name}: {len(ds.records)} records"]
    lines += [f"  {genre}: {count}" for genre, count in histogram.items()]
    _emit(ctx, {"name": ds.name, "size": len(ds.records), "genres": histogram},
          "\n".join(lines))


# --------------------------------------------------------------- evaluation

@main.command("eval")
@click.option("--candidates", "candidates_file", type=click.Path(exists=True, dir_okay=False), required=True,
              help="Text file, one candidate document per line.")
@click.option("--references", "references_file", type=click.Path(exists=True, dir_okay=False), required=True,
              help="Text file, one reference document per line.")
@click.option("--logprobs", "logprobs_file", type=click.Path(exists=True, dir_okay=False), default=None,
              help="JSON file with token log-probabilities.")
@click.pass_context
@guarded
def eval_cmd(ctx: click.Context, candidates_file: str, references_file: str, logprobs_file: str | None) -> None:
    """Score candidates against references with the full metric suite."""
    candidates = Path(candidates_file).read_text(encoding="utf-8").splitlines()
    references = Path(references_file).read_text(encoding="utf-8").splitlines()
    candidates = [c for c in candidates if c.strip()]
    references = [r for r in references if r.strip()]
    logprobs = None
    if logprobs_file:
        logprobs = json.loads(Path(logprobs_file).read_text(encoding="utf-8"))
    report = metric_report(candidates, references, logprobs)
    _emit(ctx, {"report": report.to_dict()}, report.render_table())


# --------------------------------------------------------------- generation

@main.group()
def generate() -> None:
    """Generate plots and scenes through the configured backend."""


def _build_backend(ctx: click.Context, seed: int, pin: str | None):
    config = _effective_config(ctx)
    if config.backend_kind == "mock":
        from .generation import MockBackend

        return config, MockBackend(seed=seed, pin=pin)
    return config, make_backend(config)


def _generation_config(config, max_tokens: int | None) -> GenerationConfig:
    if max_tokens is None:
        return config.generation
    from dataclasses import replace

    return replace(config.generation, max_tokens=max_tokens)


@generate.command("plot")
@click.option("--storyline", required=True)
@click.option("--genre", "genres", multiple=True, help="Repeatable; required for ASG/ALG.")
@click.option("--profile", type=click.Choice([p.value for p in GenerationProfile]), default="AS", show_default=True)
@click.option("--seed", default=0, show_default=True, help="Mock backend selection seed.")
@click.option("--pin", default=None, help="Pin a named mock fixture.")
@click.option("--max-tokens", type=int, default=None)
@click.option("--save", is_flag=True, help="Persist to the data directory so the item can be rated.")
@click.pass_context
@guarded
def generate_plot_cmd(ctx, storyline, genres, profile, seed, pin, max_tokens, save) -> None:
    """Generate a plot from a storyline."""
    config, backend = _build_backend(ctx, seed, pin)
    result = generate_plot(
        storyline, list(genres), GenerationProfile(profile),
        backend, _generation_config(config, max_tokens),
    )
    lines = []
    if result.acts:
        for name, text in zip(ACT_NAMES, result.acts.as_tuple()):
            lines.append(f"[act {name}]")
            lines.append(text)
            lines.append("")
    else:
        lines.append(result.raw.text.strip())
    for entry in result.report.errors:
        lines.append(f"error [{entry.code}]: {entry.message}")
    for entry in result.report.warnings:
        lines.append(f"warning [{entry.code}]: {entry.message}")
    payload = result.to_dict()
    if save:
        item = JsonlStore(config.data_dir).append("plot_generation", {
            "storyline": storyline, "genres": list(genres),
            "profile": profile, **payload,
        })
        payload = {"id": item.id, **payload}
        lines.append(f"saved {item.id}")
    _emit(ctx, payload, "\n".join(lines).strip())
    if result.report.errors:
        sys.exit(EXIT_VALIDATION)


@generate.command("scene")
@click.option("--description", required=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--pin", default=None, help="Pin a named mock fixture.")
@click.option("--max-tokens", type=int, default=None)
@click.option("--render", is_flag=True, help="Print formatted screenplay text.")
@click.option("--save", is_flag=True, help="Persist to the data directory so the item can be rated.")
@click.pass_context
@guarded
def generate_scene_cmd(ctx, description, seed, pin, max_tokens, render, save) -> None:
    """Generate a screenplay scene from a description."""
    config, backend = _build_backend(ctx, seed, pin)
    result = generate_scene(description, backend, _generation_config(config, max_tokens))
    lines = []
    if result.scene and result.scene.elements:
        if render:
            lines.append(render_screenplay(result.scene))
        else:
            lines.append(encode_tagged(result.scene))
    else:
        lines.append(result.raw.text.strip())
    for entry in result.report.errors:
        lines.append(f"error [{entry.code}]: {entry.message}")
    for entry in result.report.warnings:
        lines.append(f"warning [{entry.code}]: {entry.message}")
    payload = result.to_dict()
    if save:
        item = JsonlStore(config.data_dir).append("scene_generation", {
            "description": description, **payload,
        })
        payload = {"id": item.id, **payload}
        lines.append(f"saved {item.id}")
    _emit(ctx, payload, "\n".join(lines).strip())
    if result.report.errors:
        sys.exit(EXIT_VALIDATION)


# ------------------------------------------------------------------ ratings

@main.group()
def ratings() -> None:
    """Record and summarize five-feature Likert ratings."""


@ratings.command("add")
@click.option("--item-id", required=True, help="Stored generation item to rate.")
@click.option("--rater", default="anonymous", show_default=True)
@click.option("--fluency", type=click.IntRange(1, 5), required=True)
@click.option("--coherence", type=click.IntRange(1, 5), required=True)
@click.option("--relevance", type=click.IntRange(1, 5), required=True)
@click.option("--likability", type=click.IntRange(1, 5), required=True)
@click.option("--creativity", type=click.IntRange(1, 5), required=True)
@click.pass_context
@guarded
def ratings_add(ctx, item_id, rater, fluency, coherence, relevance, likability, creativity) -> None:
    """Append one rating to the item store."""
    config = _effective_config(ctx)
    store = JsonlStore(config.data_dir)
    store.get(item_id)
    rating = LikertRating(
        item_id=item_id, rater_id=rater,
        fluency=fluency, coherence=coherence, relevance=relevance,
        likability=likability, creativity=creativity,
    )
    item = store.append("rating", rating.to_dict())
    _emit(ctx, {"id": item.id, **rating.to_dict()}, f"recorded rating {item.id}")


@ratings.command("summary")
@click.option("--kind", type=click.Choice(["plot_generation", "scene_generation"]), default=None)
@click.option("--item-id", default=None)
@click.pass_context
@guarded
def ratings_summary(ctx, kind, item_id) -> None:
    """Per-feature mean/median/quartile summary of stored ratings."""
    config = _effective_config(ctx)
    store = JsonlStore(config.data_dir)
    selected = []
    for item in store.all_items("rating"):
        payload = item.payload
        if item_id is not None and payload.get("item_id") != item_id:
            continue
        if kind is not None:
            try:
                rated = store.get(payload["item_id"])
            except KurosawaError:
                continue
            if rated.kind != kind:
                continue
        selected.append(LikertRating.from_dict(payload))
    summary = likert_summary(selected)
    lines = [f"{summary.n_ratings} ratings"]
    for feature in LIKERT_FEATURES:
        stats = summary.features[feature]
        lines.append(
            f"  {feature}: mean {stats.mean:.2f}, median {stats.median:.1f}, "
            f"q1 {stats.q1:.1f}, q3 {stats.q3:.1f}, min {stats.min}, max {stats.max}"
        )
    _emit(ctx, {"summary": summary.to_dict()}, "\n".join(lines))


# -------------------------------------------------------------------- serve

@main.command()
@click.option("--host", default=None, help="Override the configured listen host.")
@click.option("--port", type=int, default=None, help="Override the configured listen port.")
@click.pass_context
@guarded
def serve(ctx: click.Context, host: str | None, port: int | None) -> None:
    """Run the workbench HTTP service."""
    import uvicorn

    from .service.app import create_app

    config = _effective_config(ctx)
    app = create_app(config)
    uvicorn.run(app, host=host or config.host, port=port or config.port, log_level="info")


if __name__ == "__main__":
    main()
