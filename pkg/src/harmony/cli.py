"""Command-line entry point.

Conventions shared by every subcommand:

* the snapshot path comes from --snapshot or the HARMONY_SNAPSHOT variable;
* --format json emits a single JSON document on stdout with the same numbers
  as the text rendering;
* domain failures print one machine-parsable JSON line on stderr and exit
  nonzero.
"""

from __future__ import annotations

import functools
import json
import os
import sys
from dataclasses import replace

import click

from . import composer as composer_mod
from .counts import CountTable, load_snapshot, save_snapshot, snapshot_hash
from .errors import HarmonyError
from .graph import GRAPH_FORMATS, graph_export
from .index import (
    AnalysisConfig,
    PairAssessment,
    assess_all_pairs,
    classify_pair,
)
from .counts import pair_rates
from .records import DEFAULT_TEAM_SIZE, ParseError, parse_match_log, record_to_json
from .report import (
    CLASS_ORDER,
    distribution_report,
    render_figures,
    write_histogram_csv,
    write_pairs_csv,
    write_summary_csv,
)


def _fail(payload: dict, code: int = 1) -> None:
    click.echo(json.dumps(payload, sort_keys=True), err=True)
    sys.exit(code)


def domain_errors(f):
    """Translate domain failures into one JSON error line and exit 1."""

    @functools.wraps(f)
    def wrapper(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except HarmonyError as exc:
            payload = exc.to_dict() if hasattr(exc, "to_dict") else {"error": str(exc)}
            if "message" not in payload:
                payload["message"] = str(exc)
            _fail(payload)
        except (ValueError, OSError) as exc:
            _fail({"error": type(exc).__name__.lower(), "message": str(exc)})

    return wrapper


def snapshot_option(required: bool = True):
    def deco(f):
        return click.option(
            "--snapshot",
            "-s",
            envvar="HARMONY_SNAPSHOT",
            required=required,
            type=click.Path(),
            help="Count-table snapshot path (default: $HARMONY_SNAPSHOT).",
        )(f)

    return deco


def analysis_options(f):
    f = click.option(
        "--min-shared",
        type=click.IntRange(min=1),
        default=1000,
        show_default=True,
        help="Minimum shared games for a pair to be assessed.",
    )(f)
    f = click.option(
        "--target",
        type=click.FloatRange(min=0, max=1, min_open=True, max_open=True),
        default=0.5,
        show_default=True,
        help="Target joint success rate for the below-target flag.",
    )(f)
    f = click.option(
        "--alpha",
        type=click.FloatRange(min=0),
        default=0.0,
        show_default=True,
        help="Additive smoothing for all rates (0 = raw frequencies).",
    )(f)
    return f


def format_option(f):
    return click.option(
        "--format",
        "out_format",
        type=click.Choice(["text", "json"]),
        default="text",
        show_default=True,
        help="Output rendering; json is a single document on stdout.",
    )(f)


def _config(min_shared: int, target: float, alpha: float) -> AnalysisConfig:
    return AnalysisConfig(
        min_shared_games=min_shared, target_success_rate=target, smoothing_alpha=alpha
    )


def _load_table(snapshot: str) -> CountTable:
    return load_snapshot(snapshot)


def _print_assessment_text(a: PairAssessment) -> None:
    p = a.probabilities
    click.echo(f"pair          {p.x} + {p.y}")
    click.echo(f"p_x           {p.p_x:.6f}")
    click.echo(f"p_y           {p.p_y:.6f}")
    click.echo(f"p_joint       {p.p_joint:.6f}")
    click.echo(f"p_x_not_y     {p.p_x_not_y:.6f}")
    click.echo(f"p_y_not_x     {p.p_y_not_x:.6f}")
    click.echo(f"index         {a.index:.6f}")
    click.echo(f"ratio_x       {a.ratio_x:.6f}")
    click.echo(f"ratio_y       {a.ratio_y:.6f}")
    click.echo(f"class         {a.harmony_class.value}")
    click.echo(f"below_target  {str(a.below_target).lower()}")
    click.echo(f"shared_games  {p.n_joint}")


@click.group()
@click.version_option(package_name="harmony")
def cli() -> None:
    """Pairwise synergy analytics over team-versus-team match logs."""


@cli.command()
@click.argument("inputs", nargs=-1, required=True, type=click.Path(exists=True, dir_okay=False))
@snapshot_option()
@click.option(
    "--format",
    "log_format",
    type=click.Choice(["auto", "jsonl", "csv"]),
    default="auto",
    show_default=True,
    help="Match log format; auto picks by file extension.",
)
@click.option(
    "--team-size",
    type=click.IntRange(min=1),
    default=DEFAULT_TEAM_SIZE,
    show_default=True,
    help="Required side size; mismatching lines are rejected.",
)
@click.option(
    "--merge/--no-merge",
    default=False,
    show_default=True,
    help="Merge into an existing snapshot instead of replacing it.",
)
@domain_errors
def ingest(inputs, snapshot, log_format, team_size, merge) -> None:
    """Accumulate match logs into a count-table snapshot.

    Malformed lines are reported on stderr as JSON (one line each) and
    skipped; they never abort the run.
    """
    table = CountTable()
    if merge and os.path.exists(snapshot):
        table = _load_table(snapshot)
    records = 0
    errors = 0
    for path in inputs:
        fmt = log_format
        if fmt == "auto":
            fmt = "csv" if path.endswith(".csv") else "jsonl"
        with open(path, "rb") as fh:
            for item in parse_match_log(fh, fmt, team_size=team_size):
                if isinstance(item, ParseError):
                    errors += 1
                    click.echo(
                        json.dumps(
                            {
                                "error": "parse",
                                "file": path,
                                "line": item.line_no,
                                "reason": item.reason,
                            },
                            sort_keys=True,
                        ),
                        err=True,
                    )
                else:
                    table.add_match(item)
                    records += 1
    save_snapshot(table, snapshot)
    digest = snapshot_hash(snapshot)
    click.echo(
        json.dumps(
            {
                "records": records,
                "parse_errors": errors,
                "agents": len(table.agent_games),
                "pairs": len(table.pair_games),
                "snapshot": snapshot,
                "content_hash": digest,
            },
            sort_keys=True,
        )
    )


@cli.command()
@snapshot_option()
@analysis_options
@format_option
@click.option(
    "--bin-width",
    type=click.FloatRange(min=0, min_open=True),
    default=0.01,
    show_default=True,
    help="Histogram bin width over the index values.",
)
@click.option(
    "--out-dir",
    type=click.Path(file_okay=False),
    default=None,
    help="Also write pairs/summary/histogram CSVs and PNG figures here.",
)
@domain_errors
def report(snapshot, min_shared, target, alpha, out_format, bin_width, out_dir) -> None:
    """Class distribution, quartiles, and histogram over all assessed pairs."""
    cfg = _config(min_shared, target, alpha)
    table = _load_table(snapshot)
    assessments, summary = assess_all_pairs(table, cfg)
    rep = distribution_report(assessments, bin_width=bin_width)

    if out_dir is not None:
        os.makedirs(out_dir, exist_ok=True)
        write_pairs_csv(assessments, os.path.join(out_dir, "pairs.csv"))
        write_summary_csv(rep, summary, os.path.join(out_dir, "summary.csv"))
        write_histogram_csv(rep, os.path.join(out_dir, "histogram.csv"))
        figures = render_figures(assessments, rep, out_dir)
    else:
        figures = []

    if out_format == "json":
        doc = {
            "report": rep.to_dict(),
            "filter_summary": summary.to_dict(),
            "files": [os.path.join(out_dir, n) for n in ("pairs.csv", "summary.csv", "histogram.csv")]
            + figures
            if out_dir
            else [],
        }
        click.echo(json.dumps(doc, sort_keys=True))
        return

    click.echo(f"assessed pairs            {rep.total}")
    for c in CLASS_ORDER:
        click.echo(f"  {c.value:<24}{rep.class_counts[c]}")
    click.echo(f"below target              {rep.below_target_count}")
    click.echo(f"filtered by threshold     {summary.filtered_by_threshold}")
    click.echo(f"filtered (no baseline)    {summary.filtered_undefined_baseline}")
    if rep.quartiles:
        q = rep.quartiles
        d = rep.quartile_deviations
        click.echo(
            f"index quartiles           {q[0]:.6f} / {q[1]:.6f} / {q[2]:.6f}"
        )
        click.echo(
            f"  deviation from 1        {d[0]:+.6f} / {d[1]:+.6f} / {d[2]:+.6f}"
        )
    if rep.min_pair:
        (a, b), v = rep.min_pair
        click.echo(f"min index                 {v:.6f}  ({a} + {b})")
        (a, b), v = rep.max_pair
        click.echo(f"max index                 {v:.6f}  ({a} + {b})")
    if out_dir:
        click.echo(f"wrote delimited output and figures to {out_dir}")


@cli.command()
@click.argument("agent_a")
@click.argument("agent_b")
@snapshot_option()
@analysis_options
@format_option
@domain_errors
def pair(agent_a, agent_b, snapshot, min_shared, target, alpha, out_format) -> None:
    """Probabilities, index, and class for one agent pair.

    An explicit pair query is answered even below the shared-games
    threshold; a warning marks such results as unreliable.
    """
    cfg = _config(min_shared, target, alpha)
    table = _load_table(snapshot)
    probs = pair_rates(table, agent_a, agent_b, alpha=cfg.smoothing_alpha)
    assessment = classify_pair(probs, cfg, enforce_min_shared=False)
    below = probs.n_joint < cfg.min_shared_games
    if out_format == "json":
        doc = assessment.to_dict()
        doc["below_min_shared"] = below
        click.echo(json.dumps(doc, sort_keys=True))
        return
    _print_assessment_text(assessment)
    if below:
        click.echo(
            json.dumps(
                {
                    "warning": "below_min_shared",
                    "shared_games": probs.n_joint,
                    "required": cfg.min_shared_games,
                },
                sort_keys=True,
            ),
            err=True,
        )


@cli.command()
@click.argument("members", nargs=-1, required=True)
@snapshot_option()
@analysis_options
@format_option
@click.option(
    "--partial/--strict",
    default=False,
    show_default=True,
    help="Compute over surviving edges instead of failing on missing data.",
)
@domain_errors
def team(members, snapshot, min_shared, target, alpha, out_format, partial) -> None:
    """Team index over every ordered pair in the roster."""
    from .index import harmony_index_team

    cfg = _config(min_shared, target, alpha)
    table = _load_table(snapshot)
    assessment = harmony_index_team(table, members, cfg, partial=partial)
    if out_format == "json":
        click.echo(json.dumps(assessment.to_dict(), sort_keys=True))
        return
    click.echo(f"team          {' '.join(assessment.team)}")
    click.echo(f"index         {assessment.index:.6f}")
    click.echo(f"partial       {str(assessment.partial).lower()}")
    for (x, y), r in sorted(assessment.edge_ratios.items()):
        click.echo(f"  ratio {x} -> {y}   {r:.6f}")
    for x, y, reason in assessment.excluded_edges:
        click.echo(f"  excluded {x} -> {y}   {reason}")
    weakest = assessment.weakest_edge()
    if weakest:
        (x, y), r = weakest
        click.echo(f"weakest edge  {x} -> {y} at {r:.6f}")


@cli.command()
@snapshot_option()
@analysis_options
@format_option
@click.option("--pool", default=None, help="Comma-separated candidates (default: all agents).")
@click.option("-k", "--team-size", "k", type=click.IntRange(min=2), default=DEFAULT_TEAM_SIZE, show_default=True)
@click.option(
    "--method",
    type=click.Choice(["auto", "exhaustive", "greedy"]),
    default="auto",
    show_default=True,
    help="auto picks exhaustive when the pool is small enough.",
)
@click.option("--beam-width", type=click.IntRange(min=1), default=composer_mod.DEFAULT_BEAM_WIDTH, show_default=True)
@domain_errors
def search(snapshot, min_shared, target, alpha, out_format, pool, k, method, beam_width) -> None:
    """Best k-agent roster from a candidate pool."""
    import math as _math

    cfg = _config(min_shared, target, alpha)
    table = _load_table(snapshot)
    candidates = (
        [p for p in (s.strip() for s in pool.split(",")) if p]
        if pool
        else sorted(table.agent_games)
    )
    if method == "auto":
        n_comb = _math.comb(len(set(candidates)), k) if len(set(candidates)) >= k else 0
        method = "exhaustive" if n_comb <= composer_mod.EXHAUSTIVE_GUARD else "greedy"
    if method == "exhaustive":
        result = composer_mod.best_team_exhaustive(table, candidates, k, cfg)
    else:
        result = composer_mod.best_team_greedy(table, candidates, k, cfg, beam_width=beam_width)
    if out_format == "json":
        doc = result.to_dict()
        doc["method"] = method
        click.echo(json.dumps(doc, sort_keys=True))
        return
    click.echo(f"method        {method}")
    click.echo(f"team          {' '.join(result.team)}")
    click.echo(f"index         {result.assessment.index:.6f}")
    weakest = result.assessment.weakest_edge()
    if weakest:
        (x, y), r = weakest
        click.echo(f"weakest edge  {x} -> {y} at {r:.6f}")
    if result.no_edge_agents:
        click.echo(f"no usable edges: {' '.join(result.no_edge_agents)}")


@cli.command()
@snapshot_option()
@analysis_options
@format_option
@click.option("--picked", required=True, help="Comma-separated already-picked agents.")
@click.option("--pool", default=None, help="Comma-separated candidates (default: the rest).")
@click.option("--banned", default="", help="Comma-separated excluded agents.")
@click.option("--team-size", type=click.IntRange(min=1), default=DEFAULT_TEAM_SIZE, show_default=True)
@click.option("--top", type=click.IntRange(min=1), default=None, help="Show only the best N candidates.")
@domain_errors
def draft(snapshot, min_shared, target, alpha, out_format, picked, pool, banned, team_size, top) -> None:
    """Ranked next-pick recommendations for a partial roster."""
    cfg = _config(min_shared, target, alpha)
    table = _load_table(snapshot)
    picked_list = tuple(p for p in (s.strip() for s in picked.split(",")) if p)
    banned_set = frozenset(p for p in (s.strip() for s in banned.split(",")) if p)
    if pool:
        pool_set = frozenset(p for p in (s.strip() for s in pool.split(",")) if p)
    else:
        pool_set = frozenset(table.agent_games) - set(picked_list) - banned_set
    state = composer_mod.DraftState(
        picked=picked_list, pool=pool_set, banned=banned_set, team_size=team_size
    )
    result = composer_mod.recommend_next(table, state, cfg)
    recs = result.recommendations[:top] if top else result.recommendations
    if out_format == "json":
        doc = {
            "recommendations": [r.to_dict() for r in recs],
            "no_data_warning": result.no_data_warning,
        }
        click.echo(json.dumps(doc, sort_keys=True))
        return
    if result.no_data_warning:
        click.echo(
            json.dumps({"warning": "no_candidate_has_qualifying_edges"}), err=True
        )
    click.echo(f"{'candidate':<16}{'projected':<12}{'coverage':<10}weakest edge")
    for r in recs:
        if r.weakest_edge:
            (x, y), ratio = r.weakest_edge
            weakest = f"{x} -> {y} at {ratio:.6f}"
        else:
            weakest = "-"
        click.echo(
            f"{r.candidate:<16}{r.projected_index:<12.6f}{r.data_coverage:<10.3f}{weakest}"
        )


@cli.command()
@snapshot_option()
@analysis_options
@click.option(
    "--format",
    "graph_format",
    type=click.Choice(list(GRAPH_FORMATS)),
    default="graph_json",
    show_default=True,
)
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None, help="Write to a file instead of stdout.")
@domain_errors
def graph(snapshot, min_shared, target, alpha, graph_format, output) -> None:
    """Export the assessed pair network as graph_json or dot."""
    cfg = _config(min_shared, target, alpha)
    table = _load_table(snapshot)
    assessments, _ = assess_all_pairs(table, cfg)
    doc = graph_export(assessments, cfg, format=graph_format)
    if output:
        with open(output, "w", encoding="utf-8", newline="") as fh:
            fh.write(doc if doc.endswith("\n") else doc + "\n")
        click.echo(json.dumps({"wrote": output, "format": graph_format}, sort_keys=True))
    else:
        click.echo(doc, nl=not doc.endswith("\n"))


@cli.command()
@click.option("--config", "config_path", required=True, type=click.Path(exists=True, dir_okay=False), help="Generator config JSON.")
@click.option("--seed", type=int, default=None, help="Override the config seed.")
@click.option("-o", "--output", required=True, type=click.Path(dir_okay=False), help="Output JSONL path.")
@domain_errors
def synth(config_path, seed, output) -> None:
    """Generate a synthetic match log with known ground truth.

    Output is byte-identical across runs and platforms for the same config
    and seed.
    """
    from .synth import SynthConfig, generate_dataset

    cfg = SynthConfig.from_json_file(config_path)
    if seed is not None:
        cfg = replace(cfg, seed=seed)
    count = 0
    with open(output, "w", encoding="utf-8", newline="\n") as fh:
        for rec in generate_dataset(cfg):
            fh.write(record_to_json(rec))
            fh.write("\n")
            count += 1
    click.echo(
        json.dumps(
            {"matches": count, "agents": len(cfg.agents), "seed": cfg.seed, "output": output},
            sort_keys=True,
        )
    )


@cli.command()
@snapshot_option()
@analysis_options
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=click.IntRange(min=1, max=65535), default=8710, show_default=True)
@domain_errors
def serve(snapshot, min_shared, target, alpha, host, port) -> None:
    """Serve the read-only HTTP API over a snapshot."""
    import uvicorn

    from .service import create_app

    cfg = _config(min_shared, target, alpha)
    app = create_app(snapshot, cfg)
    uvicorn.run(app, host=host, port=port, log_level="info")


def main() -> None:  # pragma: no cover - console-script shim
    cli()


if __name__ == "__main__":  # pragma: no cover
    main()
