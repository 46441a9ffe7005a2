"""Command-line entry point.

Exit codes: 0 success, 1 domain error (bad input, unknown profile,
syntax error), 2 validation problems found by ``validate``.  Every flag
can also be set through a ``CMOKB_``-prefixed environment variable
(e.g. ``CMOKB_QUERY_FORMAT=json``) or through the JSON file passed to
``--config``; flags beat the config file, which beats built-in
defaults.
"""

from __future__ import annotations

import json
import sys
from datetime import date
from pathlib import Path
from typing import Optional

import click

from .analysis import missing_competences, recommend_trainings, require_profile
from .errors import KbError
from .inference import saturate
from .model import Graph, Iri, PrefixMap
from .namespaces import CMO
from .privacy import PseudonymizationPolicy, pseudonymize
from .referential import import_referential_csv
from .schema import DEFAULT_LEVEL_SCALE, LevelScale, level_scale_from_json, validate_graph
from .sparql import evaluate, parse_query
from .turtle import parse, serialize_graph
from .service import create_app


def _load_kb(path: str) -> Graph:
    text = Path(path).read_text(encoding="utf-8")
    result = parse(text)
    for warning in result.warnings:
        click.echo(f"warning: {warning}", err=True)
    return result.graph


def _load_scale(path: Optional[str]) -> LevelScale:
    if not path:
        return DEFAULT_LEVEL_SCALE
    return level_scale_from_json(json.loads(Path(path).read_text(encoding="utf-8")))


def _resolve_iri(value: str) -> Iri:
    if value.startswith("http://") or value.startswith("https://"):
        return Iri(value)
    if ":" in value:
        return PrefixMap.default().expand(value)
    return Iri(CMO + value)


def _maybe_saturate(graph: Graph, enabled: bool, reference_date: Optional[str]) -> Graph:
    if not enabled:
        return graph
    at = date.fromisoformat(reference_date) if reference_date else date.today()
    return saturate(graph, reference_date=at).graph


format_option = click.option(
    "--format", "fmt", type=click.Choice(["table", "json"]), default="table",
    show_default=True, help="Output format.",
)
saturate_option = click.option(
    "--saturate/--no-saturate", "do_saturate", default=False, show_default=True,
    help="Run rule inference before the operation.",
)
reference_date_option = click.option(
    "--reference-date", default=None, metavar="YYYY-MM-DD",
    help="Reference date for certification validity (default: today).",
)
scale_option = click.option(
    "--level-scale", default=None, metavar="FILE",
    help="JSON file overriding the built-in proficiency scale.",
)


@click.group()
@click.option("--config", "config_path", default=None, metavar="FILE",
              help="JSON file with default values for command options.")
@click.pass_context
def main(ctx: click.Context, config_path: Optional[str]):
    """Competence knowledge-base toolkit."""
    if config_path:
        ctx.default_map = json.loads(Path(config_path).read_text(encoding="utf-8"))


@main.command()
@click.argument("kb", type=click.Path(exists=True))
def validate(kb: str):
    """Check a knowledge base against the CMO vocabulary."""
    graph = _load_kb(kb)
    report = validate_graph(graph)
    for issue in report.warnings:
        click.echo(f"warning {issue}")
    for issue in report.errors:
        click.echo(f"error {issue}")
    click.echo(f"{len(report.errors)} errors, {len(report.warnings)} warnings")
    if report.errors:
        sys.exit(2)


@main.command()
@click.argument("kb", type=click.Path(exists=True))
@click.argument("query_file", type=click.Path(exists=True))
@format_option
@saturate_option
@reference_date_option
@click.option("--null-label", default="—", show_default=True,
              help="Display label for unbound cells in table output.")
def query(kb: str, query_file: str, fmt: str, do_saturate: bool,
          reference_date: Optional[str], null_label: str):
    """Run a query file (.rq) against a knowledge base."""
    graph = _maybe_saturate(_load_kb(kb), do_saturate, reference_date)
    ast = parse_query(Path(query_file).read_text(encoding="utf-8"))
    for warning in ast.warnings:
        click.echo(f"warning: {warning}", err=True)
    table = evaluate(graph, ast)
    if fmt == "json":
        click.echo(table.to_json_text())
    else:
        click.echo(table.to_text(null_label), nl=False)


@main.command()
@click.argument("kb", type=click.Path(exists=True))
@click.option("--profile", required=True, help="Learner profile (IRI, qname or local name).")
@click.option("--occupation", required=True, help="Target occupation (IRI, qname or local name).")
@click.option("--level-aware", is_flag=True, default=False,
              help="Also report possessed-but-under-leveled competencies.")
@format_option
@saturate_option
@reference_date_option
@scale_option
def gap(kb: str, profile: str, occupation: str, level_aware: bool, fmt: str,
        do_saturate: bool, reference_date: Optional[str], level_scale: Optional[str]):
    """Missing competencies of a profile against a target occupation."""
    graph = _maybe_saturate(_load_kb(kb), do_saturate, reference_date)
    target = _resolve_iri(profile)
    require_profile(graph, target)
    report = missing_competences(
        graph, target, _resolve_iri(occupation),
        level_aware=level_aware, scale=_load_scale(level_scale),
    )
    if fmt == "json":
        click.echo(json.dumps(report.to_json(), ensure_ascii=False, indent=2))
        return
    click.echo(f"profile:    {report.profile.value}")
    click.echo(f"occupation: {report.occupation.value}")
    click.echo("missing:")
    for entry in report.missing:
        suffix = f" (requires {entry.required_level.value})" if entry.required_level else ""
        click.echo(f"  - {entry.competence.value}{suffix}")
    if report.under_leveled:
        click.echo("under-leveled:")
        for entry in report.under_leveled:
            click.echo(f"  - {entry.competence.value}: has {entry.possessed_level.n3()}, "
                       f"requires {entry.required_level.value}")
    click.echo("satisfied:")
    for comp in report.satisfied:
        click.echo(f"  - {comp.value}")


@main.command()
@click.argument("kb", type=click.Path(exists=True))
@click.option("--profile", required=True)
@click.option("--occupation", required=True)
@click.option("--catalog", multiple=True,
              help="Restrict to these trainings (default: every cmo:Formation).")
@format_option
@saturate_option
@reference_date_option
@scale_option
def recommend(kb: str, profile: str, occupation: str, catalog: tuple[str, ...], fmt: str,
              do_saturate: bool, reference_date: Optional[str], level_scale: Optional[str]):
    """Training plans covering a profile's gap for an occupation."""
    graph = _maybe_saturate(_load_kb(kb), do_saturate, reference_date)
    target = _resolve_iri(profile)
    require_profile(graph, target)
    report = missing_competences(graph, target, _resolve_iri(occupation),
                                 scale=_load_scale(level_scale))
    plans = recommend_trainings(
        graph, report, [_resolve_iri(c) for c in catalog] if catalog else None,
    )
    if fmt == "json":
        click.echo(json.dumps({"plans": [p.to_json() for p in plans]},
                              ensure_ascii=False, indent=2))
        return
    for rank, plan in enumerate(plans, start=1):
        click.echo(f"plan {rank} (cost {plan.total_cost:g}, {plan.total_duration_days} days):")
        for step in plan.steps:
            covers = ", ".join(c.value.rsplit('#', 1)[-1] for c in step.covers)
            click.echo(f"  day {step.start_offset_days:>3}: {step.training.value} covers {covers}")
        if plan.uncoverable:
            click.echo("  uncoverable: " + ", ".join(c.value for c in plan.uncoverable))
        if not plan.steps:
            click.echo("  (nothing to do)")


@main.command("import-csv")
@click.argument("csv_file", type=click.Path(exists=True))
@click.option("-o", "--output", required=True, metavar="KB",
              help="Write the resulting knowledge base here (.cmo.ttl).")
@scale_option
def import_csv(csv_file: str, output: str, level_scale: Optional[str]):
    """Import an occupational referential from CSV."""
    graph = import_referential_csv(
        Path(csv_file).read_text(encoding="utf-8-sig"), scale=_load_scale(level_scale),
    )
    Path(output).write_text(serialize_graph(graph), encoding="utf-8")
    click.echo(f"{len(graph)} triples written to {output}")


@main.command()
@click.argument("kb", type=click.Path(exists=True))
@click.option("--key", required=True, help="Secret key driving the renaming.")
@click.option("-o", "--output", required=True, metavar="KB")
def pseudonymize_cmd(kb: str, key: str, output: str):
    """Pseudonymize personal instances in a knowledge base."""
    graph = _load_kb(kb)
    result = pseudonymize(graph, PseudonymizationPolicy(key))
    Path(output).write_text(serialize_graph(result), encoding="utf-8")
    click.echo(f"{len(result)} triples written to {output}")


# click derives the command name from the function name; keep the
# public name clean despite the _cmd suffix avoiding the import clash.
pseudonymize_cmd.name = "pseudonymize"


@main.command()
@click.argument("kb", type=click.Path(exists=True), required=False)
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8765, show_default=True, type=int)
@click.option("--cors-origin", default=None, help="Origin allowed for browser clients.")
@click.option("--session-timeout", default=3600.0, show_default=True, type=float,
              help="Idle what-if session expiry, seconds.")
def serve(kb: Optional[str], host: str, port: int, cors_origin: Optional[str],
          session_timeout: float):
    """Serve the HTTP/JSON API (optionally preloading a knowledge base)."""
    import uvicorn

    graph = _load_kb(kb) if kb else None
    app = create_app(graph, cors_origin=cors_origin, session_timeout=session_timeout)
    uvicorn.run(app, host=host, port=port, log_level="warning")


@main.command()
@click.option("-o", "--output", default=None, metavar="FILE",
              help="Write to a file instead of stdout.")
def vocab(output: Optional[str]):
    """Export the built-in CMO vocabulary as a Turtle document."""
    from .schema import vocabulary_graph

    text = serialize_graph(vocabulary_graph())
    if output:
        Path(output).write_text(text, encoding="utf-8")
        click.echo(f"written to {output}")
    else:
        click.echo(text, nl=False)


def run() -> None:
    try:
        main(auto_envvar_prefix="CMOKB", standalone_mode=False)
    except KbError as exc:
        click.echo(f"error [{exc.code}]: {exc}", err=True)
        sys.exit(1)
    except OSError as exc:
        click.echo(f"error: {exc}", err=True)
        sys.exit(1)
    except click.exceptions.Exit as exc:
        sys.exit(exc.exit_code)
    except click.ClickException as exc:
        exc.show()
        sys.exit(exc.exit_code)
    except click.exceptions.Abort:
        sys.exit(130)


if __name__ == "__main__":
    run()
