"""Command line interface: batch analysis reports and the HTTP service."""
from __future__ import annotations

import json
import sys
from typing import Optional

import click

from .config import ConfigError, EngineConfig
from .dataset import DatasetError, load_csv
from .engine import UnknownAttributeError, analyze, recommendations_to_dict


@click.group()
def cli():
    """Insight discovery and visualization recommendation for tabular data."""


@cli.command("analyze")
@click.argument("csv_path", type=click.Path())
@click.option("--top-r", default=None, type=int, help="Insight-type rows to emit.")
@click.option("--top-k", default=None, type=int, help="Insights per row.")
@click.option("--filter", "filter_attrs", default=None, help="Comma-separated attribute filter.")
@click.option("--format", "fmt", default="json", type=click.Choice(["json", "markdown"]))
@click.option("--seed", default=None, type=int)
@click.option("--config", "config_path", default=None, type=click.Path())
@click.option("--out", default=None, type=click.Path(), help="Write report to a file.")
def analyze_command(csv_path, top_r, top_k, filter_attrs, fmt, seed, config_path, out):
    """Analyze a CSV and print the recommendation report."""
    try:
        config = EngineConfig.from_json(config_path) if config_path else EngineConfig()
        overrides = {}
        if seed is not None:
            overrides["seed"] = seed
        if top_r is not None:
            overrides["top_r"] = top_r
        if top_k is not None:
            overrides["top_k"] = top_k
        if overrides:
            config = EngineConfig.from_dict({**_as_dict(config), **overrides})
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(2)
    try:
        ds = load_csv(csv_path, config)
        result = analyze(ds, config)
        attrs = [a for a in (filter_attrs or "").split(",") if a]
        recs = result.recommendations(attributes=attrs)
    except (DatasetError, UnknownAttributeError, OSError) as exc:
        click.echo(f"input error: {exc}", err=True)
        sys.exit(1)
    doc = recommendations_to_dict(recs)
    report = (
        json.dumps(doc, sort_keys=True, indent=2) if fmt == "json" else _markdown_report(doc)
    )
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(report + "\n")
    else:
        click.echo(report)


def _as_dict(config: EngineConfig) -> dict:
    import dataclasses

    return dataclasses.asdict(config)


def _markdown_report(doc: dict) -> str:
    lines = [f"# Insight report: {doc['dataset']}", ""]
    if doc["empty"]:
        lines.append("_No insights found (no satisfiable attribute combination)._")
        return "\n".join(lines)
    # section order mirrors the JSON row order exactly
    for row in doc["rows"]:
        lines.append(f"## {row['insight_type']}  (score {row['psi']:.4f})")
        lines.append("")
        lines.append("| # | combination | score | insight |")
        lines.append("|---|-------------|-------|---------|")
        for i, ins in enumerate(row["insights"], 1):
            combo = " x ".join(ins["combination"]["columns"])
            sentence = ins["chart"]["insight_sentence"] if ins["chart"] else ""
            lines.append(f"| {i} | {combo} | {ins['score']:.3f} | {sentence} |")
        lines.append("")
    return "\n".join(lines)


@cli.command("serve")
@click.option("--port", default=8000, type=int)
@click.option("--data-dir", default="./insightrank-data", type=click.Path())
@click.option("--config", "config_path", default=None, type=click.Path())
def serve_command(port, data_dir, config_path):
    """Run the HTTP service until interrupted."""
    try:
        config = EngineConfig.from_json(config_path) if config_path else EngineConfig()
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(2)
    from .service import main

    main(port=port, data_dir=data_dir, config=config)


def main():
    cli()


if __name__ == "__main__":
    main()
