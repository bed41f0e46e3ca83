"""Command line entry points: batch generation, inspection, serving.

``generate`` is the headless twin of the HTTP pipeline: the same engine,
the same layers, the same parameters, so a CLI run and an API session
with identical inputs produce identical artifacts. Outputs are staged in
a temporary directory and moved into place only when everything
succeeded; a failed run leaves no partial output directory behind.
"""

from __future__ import annotations

import json
import os
import sys
import tempfile
from pathlib import Path
from typing import Any

import click

from . import graph as g
from .assets import AssetPool
from .config import AppConfig, load_config
from .errors import PanelsmithError
from .layers import DEFAULT_PIPELINE
from .render import png_bytes, render_sequence
from .service import build_engine


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(1)


def _load(config_path: str | None) -> AppConfig:
    try:
        return load_config(config_path) if config_path else load_config()
    except PanelsmithError as exc:
        _fail(str(exc))
        raise  # unreachable; keeps type checkers happy


def _parse_param(text: str) -> tuple[str, Any]:
    key, sep, raw = text.partition("=")
    if not sep or not key:
        raise click.BadParameter(f"expected KEY=VALUE, got {text!r}")
    try:
        value: Any = json.loads(raw)
    except json.JSONDecodeError:
        value = raw  # bare words pass through as strings
    return key, value


def _import_asset_tree(pool: AssetPool, root: Path) -> int:
    """Each subdirectory of ``root`` becomes/extends the visual set of
    the same name; loose PNGs directly in ``root`` are rejected."""
    if not root.is_dir():
        _fail(f"asset path is not a directory: {root}")
    count = 0
    subdirs = sorted(p for p in root.iterdir() if p.is_dir())
    if not subdirs:
        _fail(f"asset directory has no per-set subdirectories: {root}")
    for subdir in subdirs:
        count += pool.add_visuals(subdir.name, subdir)
    return count


@click.group()
def main() -> None:
    """Plan, render and serve grammar-driven comic strips."""


@main.command()
@click.option("--length", type=int, required=True, help="Number of panels to start from.")
@click.option("--seed", type=int, default=0, show_default=True, help="Generation seed.")
@click.option(
    "--layers",
    "layer_csv",
    default=",".join(DEFAULT_PIPELINE),
    show_default=True,
    help="Comma-separated pipeline to apply.",
)
@click.option(
    "--assets",
    "assets_dir",
    type=click.Path(path_type=Path),
    default=None,
    help="Directory whose subdirectories extend the visual sets.",
)
@click.option(
    "--out",
    type=click.Path(path_type=Path),
    required=True,
    help="Output directory for strip.png, panel_*.png and document.json.",
)
@click.option("--config", "config_path", type=click.Path(), default=None, help="TOML/JSON config file.")
@click.option(
    "--param",
    "params",
    multiple=True,
    metavar="KEY=VALUE",
    help="Layer parameter (JSON value or bare string); repeatable.",
)
def generate(
    length: int,
    seed: int,
    layer_csv: str,
    assets_dir: Path | None,
    out: Path,
    config_path: str | None,
    params: tuple[str, ...],
) -> None:
    """Build a sequence, run the pipeline, write the rendered strip."""
    cfg = _load(config_path)
    names = [n.strip() for n in layer_csv.split(",") if n.strip()]
    try:
        param_map = dict(_parse_param(p) for p in params)
        engine = build_engine(cfg)
        if assets_dir is not None:
            _import_asset_tree(engine.assets, assets_dir)
        seq = g.create_sequence(length, seed)
        engine.apply_layers(seq, names, params=param_map)
        result = render_sequence(seq, engine.assets)
    except PanelsmithError as exc:
        _fail(str(exc))
        return

    out = out.resolve()
    out.parent.mkdir(parents=True, exist_ok=True)
    stage = Path(tempfile.mkdtemp(prefix=".panelsmith_stage_", dir=out.parent))
    try:
        (stage / "document.json").write_text(
            g.document_json(result.document), encoding="utf-8"
        )
        for index, image in enumerate(result.panels.values()):
            (stage / f"panel_{index}.png").write_bytes(png_bytes(image))
        if result.strip is not None:
            (stage / "strip.png").write_bytes(png_bytes(result.strip))
        out.mkdir(exist_ok=True)
        for item in sorted(stage.iterdir()):
            os.replace(item, out / item.name)
    finally:
        if stage.exists():
            for leftover in stage.iterdir():
                leftover.unlink()
            stage.rmdir()
    click.echo(f"wrote {len(result.panels)} panels to {out}")


@main.command()
@click.argument("file", type=click.Path(path_type=Path))
@click.option("--tension", "show_tension", is_flag=True, help="Plot the tension curve.")
@click.option("--structure", "show_structure", is_flag=True, help="Print the grammar tree.")
def inspect(file: Path, show_tension: bool, show_structure: bool) -> None:
    """Summarize a scene document: one row per panel."""
    try:
        document = json.loads(file.read_text(encoding="utf-8"))
        seq = g.parse_document(document)
    except (OSError, json.JSONDecodeError, PanelsmithError) as exc:
        _fail(f"unreadable document: {exc}")
        return

    rows = []
    for position, panel in enumerate(seq.panels()):
        actions = []
        for node in seq.walk(panel.id):
            if node.type == g.CHARACTER:
                identity = node.get("identity") or node.name
                actions.append(f"{identity}:{node.get('action', '-')}")
        rows.append(
            (
                str(position),
                str(panel.get("grammar_phase", "-")),
                str(panel.get("tension", "-")),
                str(panel.get("transition_in", "-")),
                ", ".join(actions) or "-",
            )
        )
    header = ("#", "phase", "tension", "transition", "actions")
    widths = [max(len(r[i]) for r in [header, *rows]) for i in range(len(header))]
    for row in [header, *rows]:
        click.echo("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip())

    if show_tension:
        click.echo()
        for position, panel in enumerate(seq.panels()):
            value = panel.get("tension")
            bar = "#" * int(value) if isinstance(value, (int, float)) else "?"
            click.echo(f"{position:>3} {str(panel.get('tension', '-')):>3} {bar}")

    if show_structure:
        click.echo()
        if seq.structure is None:
            click.echo("no structure recorded")
        else:
            click.echo(json.dumps(seq.structure, indent=2, sort_keys=True))


@main.command()
@click.option("--host", default=None, help="Bind address (overrides config).")
@click.option("--port", type=int, default=None, help="Port (overrides config).")
@click.option("--config", "config_path", type=click.Path(), default=None, help="TOML/JSON config file.")
def serve(host: str | None, port: int | None, config_path: str | None) -> None:
    """Run the HTTP service until interrupted."""
    from dataclasses import replace

    from .service import run

    cfg = _load(config_path)
    if host is not None:
        cfg = replace(cfg, host=host)
    if port is not None:
        cfg = replace(cfg, port=port)
    try:
        run(cfg)
    except OSError as exc:  # port in use, bad bind address
        _fail(str(exc))


@main.group()
def assets() -> None:
    """Asset pool utilities."""


@assets.command("import")
@click.option("--set", "set_name", required=True, help="Visual set to import into.")
@click.argument("directory", type=click.Path(path_type=Path))
def assets_import(set_name: str, directory: Path) -> None:
    """Validate and count the PNGs a directory would contribute."""
    pool = AssetPool()
    try:
        count = pool.add_visuals(set_name, directory)
    except PanelsmithError as exc:
        _fail(str(exc))
        return
    click.echo(str(count))


if __name__ == "__main__":  # pragma: no cover - module execution hook
    main()
