"""Command-line front door: generate, analyze, anatomy, odds, demo, approx, serve.

Every command is deterministic given its arguments and input files; the
generation seed resolves as flag > SIXBOX_SEED environment variable >
config file > 0.  Data goes to stdout or the requested files, diagnostics
to stderr, and the exit code is 0 exactly when nothing failed.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Sequence

import numpy as np

from sixbox import analysis
from sixbox.model import (
    IMPOSSIBLE,
    BoxModel,
    LogPosterior,
    SequenceSummary,
    frequency_estimate,
    laplace_rule,
    posterior_from_summary,
    predictive_white,
    uniform_prior,
)
from sixbox.sequences import (
    SequenceFileError,
    generate,
    read_sequence,
    split_runs,
    write_sequence,
)

__all__ = ["main", "Config"]

DEFAULT_SEED = 0
SEED_ENV_VAR = "SIXBOX_SEED"


class CliError(Exception):
    """Fatal command error; message goes to stderr, exit code 1."""


@dataclass(frozen=True)
class Config:
    """Resolved settings shared by the subcommands."""

    m: int = 5
    seed: int = DEFAULT_SEED
    run_length: int = 100
    output_format: str = "csv"
    prior: tuple[float, ...] | None = None  # None means uniform


def _load_config_file(path: str | None) -> dict[str, Any]:
    if path is None:
        return {}
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except OSError as exc:
        raise CliError(f"cannot read config {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CliError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise CliError(f"config {path} must hold a JSON object")
    return raw


def _parse_prior_weights(text: str) -> tuple[float, ...] | None:
    if text.strip() == "uniform":
        return None
    try:
        weights = tuple(float(tok) for tok in text.split(","))
    except ValueError as exc:
        raise CliError(f"prior must be 'uniform' or comma-separated weights: {exc}")
    return weights


def resolve_config(args: argparse.Namespace) -> Config:
    """Merge defaults, config file, environment, and flags (flags win)."""
    file_cfg = _load_config_file(getattr(args, "config", None))
    cfg = Config()

    m = getattr(args, "m", None)
    if m is None:
        m = file_cfg.get("m", cfg.m)
    seed = getattr(args, "seed", None)
    if seed is None and SEED_ENV_VAR in os.environ:
        try:
            seed = int(os.environ[SEED_ENV_VAR])
        except ValueError as exc:
            raise CliError(f"{SEED_ENV_VAR} must be an integer: {exc}")
    if seed is None:
        seed = file_cfg.get("seed", cfg.seed)
    run_length = getattr(args, "run_length", None)
    if run_length is None:
        run_length = file_cfg.get("runLength", cfg.run_length)
    output_format = getattr(args, "format", None)
    if output_format is None:
        output_format = file_cfg.get("outputFormat", cfg.output_format)
    if output_format not in ("csv", "json"):
        raise CliError(f"output format must be csv or json, got {output_format!r}")

    prior_text = getattr(args, "prior", None)
    if prior_text is not None:
        prior = _parse_prior_weights(prior_text)
    else:
        file_prior = file_cfg.get("prior")
        if file_prior in (None, "uniform"):
            prior = None
        else:
            prior = tuple(float(w) for w in file_prior)

    return Config(
        m=int(m),
        seed=int(seed),
        run_length=int(run_length),
        output_format=output_format,
        prior=prior,
    )


def _prior_from_config(cfg: Config, model: BoxModel) -> LogPosterior:
    if cfg.prior is None:
        return uniform_prior(model)
    weights = cfg.prior
    if len(weights) != model.num_boxes:
        raise CliError(
            f"prior needs {model.num_boxes} weights for m={model.m}, got {len(weights)}"
        )
    if any(w < 0 for w in weights) or not any(w > 0 for w in weights):
        raise CliError("prior weights must be non-negative and not all zero")
    total = math.fsum(weights)
    lw = np.array(
        [math.log(w / total) if w > 0 else IMPOSSIBLE for w in weights]
    )
    return LogPosterior(model, lw)


# -- subcommand implementations ---------------------------------------------


def cmd_generate(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    model = BoxModel(cfg.m)
    seq = generate(model, args.box, args.n, cfg.seed)
    try:
        write_sequence(seq, args.out)
    except OSError as exc:
        raise CliError(f"cannot write {args.out}: {exc}") from exc
    print(f"wrote {args.n} draws from box {args.box} to {args.out}", file=sys.stderr)
    return 0


def _write_trajectory(points, path: Path, output_format: str) -> None:
    with path.open("w", encoding="utf-8") as fh:
        if output_format == "csv":
            analysis.trajectory_to_csv(points, fh)
        else:
            analysis.dump_json(analysis.trajectory_records(points), fh)


def cmd_analyze(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    model = BoxModel(cfg.m)
    prior = _prior_from_config(cfg, model)
    seq = read_sequence(args.input)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    ext = cfg.output_format

    full = analysis.trajectory(seq, prior)
    _write_trajectory(full, out_dir / f"trajectory_full.{ext}", ext)
    partition = split_runs(seq, cfg.run_length)
    for k, run in enumerate(partition.runs, start=1):
        points = analysis.trajectory(run, prior)
        _write_trajectory(points, out_dir / f"trajectory_run_{k:03d}.{ext}", ext)

    summary = seq.summary()
    final = posterior_from_summary(prior, summary)
    table = analysis.odds_table(summary, model)
    final_state = {
        "summary": {"n": summary.n, "x": summary.x},
        "posterior": [float(p) for p in final.probabilities],
        "predictiveWhite": predictive_white(final),
        "frequencyWhite": frequency_estimate(summary),
        "laplaceWhite": laplace_rule(summary),
    }
    if ext == "json":
        final_state["odds"] = [[float(v) for v in row] for row in table.odds]
        with (out_dir / "summary.json").open("w", encoding="utf-8") as fh:
            analysis.dump_json(final_state, fh)
    else:
        with (out_dir / "summary.csv").open("w", encoding="utf-8") as fh:
            fh.write("quantity,box,value\n")
            fh.write(f"n,,{summary.n}\n")
            fh.write(f"x,,{summary.x}\n")
            for i, p in enumerate(final_state["posterior"]):
                fh.write(f"posterior,{i},{analysis._fmt(p)}\n")
            fh.write(f"predictive_white,,{analysis._fmt(final_state['predictiveWhite'])}\n")
            fh.write(f"frequency_white,,{analysis._fmt(final_state['frequencyWhite'])}\n")
            fh.write(f"laplace_white,,{analysis._fmt(final_state['laplaceWhite'])}\n")
        with (out_dir / "odds.csv").open("w", encoding="utf-8") as fh:
            analysis.odds_to_csv(table, fh)
    print(
        f"analyzed {summary.n} draws ({len(partition.runs)} runs) into {out_dir}",
        file=sys.stderr,
    )
    return 0


def cmd_anatomy(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    result = analysis.anatomy(SequenceSummary(args.n, args.x), BoxModel(cfg.m))
    if cfg.output_format == "csv":
        analysis.anatomy_to_csv(result, sys.stdout)
    else:
        analysis.dump_json(analysis.anatomy_records(result), sys.stdout)
    return 0


def cmd_odds(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    table = analysis.odds_table(SequenceSummary(args.n, args.x), BoxModel(cfg.m))
    if cfg.output_format == "csv":
        analysis.odds_to_csv(table, sys.stdout)
    else:
        analysis.dump_json(analysis.odds_records(table), sys.stdout)
    return 0


def cmd_demo_gaussian(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    p = analysis.gaussian_tiny_chance(args.value, args.decimals)
    if cfg.output_format == "csv":
        print("value,decimals,probability")
        print(f"{args.value!r},{args.decimals},{analysis._fmt(p)}")
    else:
        analysis.dump_json(
            {"value": args.value, "decimals": args.decimals, "probability": p},
            sys.stdout,
        )
    return 0


def cmd_approx(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    rows = analysis.approximation_report(BoxModel(cfg.m), args.max_n)
    if cfg.output_format == "csv":
        analysis.approximation_report_to_csv(rows, sys.stdout)
    else:
        analysis.dump_json(analysis.approximation_report_records(rows), sys.stdout)
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    cfg = resolve_config(args)
    import uvicorn

    from sixbox.service import create_app

    if args.static_dir is not None and not Path(args.static_dir).is_dir():
        raise CliError(f"static dir {args.static_dir} does not exist")
    app = create_app(
        BoxModel(cfg.m), journal_path=args.journal, static_dir=args.static_dir
    )
    try:
        uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    except SystemExit as exc:  # uvicorn signals bind failures this way
        return int(exc.code or 1)
    except OSError as exc:
        raise CliError(f"cannot serve on {args.host}:{args.port}: {exc}") from exc
    return 0


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sixbox",
        description="Bayesian inference and forecasting for the box-of-balls game.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, fmt: bool = True) -> None:
        p.add_argument("--m", type=int, default=None, help="balls per box (default 5)")
        p.add_argument("--config", default=None, help="JSON config file; flags win")
        if fmt:
            p.add_argument(
                "--format",
                choices=("csv", "json"),
                default=None,
                help="output format (default csv)",
            )

    p = sub.add_parser("generate", help="write a seeded draw-sequence file")
    p.add_argument("--box", type=int, required=True, help="source box index")
    p.add_argument("--n", type=int, required=True, help="number of draws")
    p.add_argument(
        "--seed", type=int, default=None, help=f"PRNG seed (default ${SEED_ENV_VAR} or 0)"
    )
    p.add_argument("--out", required=True, help="destination file (one 0/1 per line)")
    common(p, fmt=False)
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("analyze", help="trajectories and final-state summary for a sequence file")
    p.add_argument("input", help="sequence file (0/1 lines, or CSV with an 'x' column)")
    p.add_argument("--run-length", type=int, default=None, help="independent-run length (default 100)")
    p.add_argument(
        "--prior",
        default=None,
        help="'uniform' or comma-separated non-negative weights, one per box",
    )
    p.add_argument("--out-dir", required=True, help="directory for the report files")
    common(p)
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("anatomy", help="posterior vs summary vs sequence likelihoods for (n, x)")
    p.add_argument("n", type=int, help="number of draws")
    p.add_argument("x", type=int, help="number of White draws")
    common(p)
    p.set_defaults(func=cmd_anatomy)

    p = sub.add_parser("odds", help="pairwise betting-odds table for (n, x)")
    p.add_argument("n", type=int)
    p.add_argument("x", type=int)
    common(p)
    p.set_defaults(func=cmd_odds)

    p = sub.add_parser(
        "demo-gaussian",
        help="chance that a standard Gaussian draw rounds to a given value",
    )
    p.add_argument("value", type=float)
    p.add_argument("decimals", type=int, nargs="?", default=12)
    common(p)
    p.set_defaults(func=cmd_demo_gaussian)

    p = sub.add_parser("approx", help="exact vs closed-form decay under all-Black data")
    p.add_argument("max_n", type=int)
    common(p)
    p.set_defaults(func=cmd_approx)

    p = sub.add_parser("serve", help="run the live hidden-box game service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    p.add_argument("--static-dir", default=None, help="serve the web client from here")
    p.add_argument("--journal", default=None, help="append-only session journal file")
    common(p, fmt=False)
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (CliError, SequenceFileError, ValueError, IndexError) as exc:
        print(f"sixbox: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
