"""
Command-line front end.

Subcommands:

- ``synth``: write a synthetic dataset as an uptake CSV and a query CSV
- ``run``: walk-forward run of the adaptive estimator
- ``baseline``: walk-forward run of the lasso or elastic-net baseline
- ``tune``: random search, writes the winning configuration
- ``compare``: RMSE report of several methods on several series
- ``version``: print the package version

Every output file is accompanied by ``<output>.manifest.json``. Logs go to
stderr. Exit status: 0 success, 1 usage or configuration error, 2 data
error, 3 runtime error.
"""

import argparse
import sys
from pathlib import Path
from typing import Any, Dict, List, NoReturn, Optional, Sequence, Tuple

from nowcast_core.__version__ import __version__
from nowcast_core.baselines.runner import run_baseline
from nowcast_core.data.ingestion import read_dataset, serialize_query_csv, serialize_uptake_csv
from nowcast_core.data.synthgen import (
    GENERATOR_ALGORITHM,
    PRESETS,
    decouple_queries,
    generate,
    preset,
)
from nowcast_core.evaluation.compare import compare
from nowcast_core.evaluation.report import build_manifest, trace_summary, write_artifact
from nowcast_core.evaluation.search import best_trial, random_search
from nowcast_core.models.config import (
    BaselineConfig,
    EstimatorConfig,
    NowcastSettings,
    SearchIntervals,
)
from nowcast_core.models.results import trials_to_frame
from nowcast_core.models.scenario import Scenario
from nowcast_core.models.timeseries import Dataset
from nowcast_core.online.estimator import run as run_estimator
from nowcast_core.registry.method_registry import MethodRegistry
from nowcast_core.utils.config import (
    build_model,
    dump_model,
    format_for_path,
    load_baseline_config,
    load_compare_spec,
    load_estimator_config,
    load_references,
    load_scenario,
    load_search_intervals,
    load_settings,
    merge_configs,
    parse_value,
)
from nowcast_core.utils.exceptions import (
    ConfigError,
    DataError,
    NowcastError,
    ParameterError,
    RegistryError,
)
from nowcast_core.utils.logging import get_logger, log_error, setup_logging

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_RUNTIME = 3


class CommandParser(argparse.ArgumentParser):
    """Argument parser that reports usage errors with help text and status 1."""

    def error(self, message: str) -> NoReturn:
        self.print_help(sys.stderr)
        self.exit(EXIT_USAGE, f"\n{self.prog}: error: {message}\n")


def _interval(text: str) -> Tuple[int, int]:
    value = parse_value(text)
    if (
        not isinstance(value, tuple)
        or not all(isinstance(v, int) for v in value)
        or value[0] >= value[1]
    ):
        raise argparse.ArgumentTypeError(f"expected a:b with integers a < b, got '{text}'")
    return value


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got '{text}'")
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _common_options() -> argparse.ArgumentParser:
    common = CommandParser(add_help=False)
    group = common.add_argument_group("global options")
    group.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="Seed")
    group.add_argument(
        "--warmup",
        type=_positive,
        default=argparse.SUPPRESS,
        help="Observations consumed before the first prediction (default 24)",
    )
    group.add_argument(
        "--quiet", action="store_true", default=argparse.SUPPRESS, help="Only log warnings"
    )
    group.add_argument(
        "--log-format", choices=["text", "json"], default=argparse.SUPPRESS, help="Log format"
    )
    group.add_argument(
        "--n-jobs", type=_positive, default=argparse.SUPPRESS, help="Worker threads"
    )
    group.add_argument("--env-file", default=argparse.SUPPRESS, help="Environment file")
    return common


def _data_options(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--uptake", required=True, help="Uptake CSV")
    parser.add_argument("--queries", required=True, help="Query-frequency CSV")


def build_parser() -> CommandParser:
    """Argument parser for ``nowcast``; global options go before or after the subcommand."""
    common = _common_options()
    parser = CommandParser(
        prog="nowcast",
        description="Adaptive nowcasting of monthly uptake from query frequencies.",
        parents=[common],
    )
    commands = parser.add_subparsers(dest="command", metavar="COMMAND")
    commands.required = True

    synth = commands.add_parser("synth", parents=[common], help="Write a synthetic dataset")
    synth.add_argument(
        "--scenario",
        required=True,
        help=f"Scenario file or preset ({', '.join(PRESETS)})",
    )
    synth.add_argument(
        "--out-prefix",
        required=True,
        help="Writes PREFIX.uptake.csv and PREFIX.queries.csv",
    )
    synth.add_argument(
        "--decouple-queries",
        action="store_true",
        help="Query terms ignore the level changes of the scenario",
    )

    run = commands.add_parser("run", parents=[common], help="Run the adaptive estimator")
    _data_options(run)
    run.add_argument("--config", help="Estimator configuration file")
    run.add_argument("--out", required=True, help="Trace CSV")
    run.add_argument(
        "--dump-weights", action="store_true", help="Append per-expert weight columns"
    )

    baseline = commands.add_parser("baseline", parents=[common], help="Run a linear baseline")
    baseline.add_argument("--kind", choices=["lasso", "enet"], default="lasso")
    _data_options(baseline)
    baseline.add_argument("--config", help="Baseline configuration file")
    baseline.add_argument("--out", required=True, help="Trace CSV")

    tune = commands.add_parser("tune", parents=[common], help="Random hyperparameter search")
    _data_options(tune)
    tune.add_argument("--trials", type=_positive, default=100, help="Number of trials")
    tune.add_argument("--tune-range", type=_interval, help="Scored steps a:b (half-open)")
    tune.add_argument("--intervals", help="Search interval file")
    tune.add_argument("--config", help="Template for fields not searched")
    tune.add_argument("--out", required=True, help="Winning configuration file")
    tune.add_argument("--trials-out", help="Trial log CSV")

    comp = commands.add_parser("compare", parents=[common], help="Compare methods")
    comp.add_argument("--spec", required=True, help="Comparison document (YAML or JSON)")
    comp.add_argument("--out", required=True, help="Report (.csv, .json or .txt table)")
    comp.add_argument("--references", help="Reference scores per series")

    commands.add_parser("version", parents=[common], help="Print the version")
    return parser


def _settings(args: argparse.Namespace) -> NowcastSettings:
    overrides: Dict[str, Any] = {
        "seed": getattr(args, "seed", None),
        "warmup": getattr(args, "warmup", None),
        "log_format": getattr(args, "log_format", None),
        "n_jobs": getattr(args, "n_jobs", None),
    }
    return load_settings(getattr(args, "env_file", None), overrides)


def _with_updates(model: Any, updates: Dict[str, Any]) -> Any:
    data = merge_configs(model.model_dump(), {k: v for k, v in updates.items() if v is not None})
    return build_model(type(model), data, source=type(model).__name__)


def _estimator_config(
    path: Optional[str], args: argparse.Namespace, settings: NowcastSettings
) -> EstimatorConfig:
    if path is None:
        return EstimatorConfig(warmup=settings.warmup, master_seed=settings.seed)
    cfg = load_estimator_config(path)
    return _with_updates(
        cfg,
        {"warmup": getattr(args, "warmup", None), "master_seed": getattr(args, "seed", None)},
    )


def _summary_line(command: str, values: Dict[str, Any]) -> None:
    fields = " ".join(f"{k}={v}" for k, v in values.items())
    print(f"{command}: {fields}")


def cmd_synth(args: argparse.Namespace, settings: NowcastSettings) -> int:
    inputs: List[str] = []
    if args.scenario in PRESETS:
        scenario: Scenario = preset(args.scenario, seed=settings.seed)
    elif Path(args.scenario).exists():
        scenario = load_scenario(args.scenario)
        if getattr(args, "seed", None) is not None:
            scenario = _with_updates(scenario, {"seed": args.seed})
        inputs.append(args.scenario)
    else:
        raise ConfigError(
            f"unknown scenario '{args.scenario}'",
            details={"presets": list(PRESETS)},
        )
    if args.decouple_queries:
        scenario = decouple_queries(scenario)

    ds = generate(scenario)
    manifest = build_manifest(
        "synth",
        inputs=inputs,
        config={
            "scenario": scenario.model_dump(mode="json"),
            "generator": GENERATOR_ALGORITHM,
        },
        seed=scenario.seed,
        summary=ds.describe(),
    )
    prefix = args.out_prefix
    for suffix, text in (
        ("uptake.csv", serialize_uptake_csv(ds.uptake)),
        ("queries.csv", serialize_query_csv(ds.panel)),
    ):
        write_artifact(f"{prefix}.{suffix}", text, manifest)
    _summary_line("synth", {"months": len(ds), "terms": ds.n_terms, "seed": scenario.seed})
    return EXIT_OK


def _load(args: argparse.Namespace) -> Dataset:
    ds, _ = read_dataset(args.uptake, args.queries)
    return ds


def cmd_run(args: argparse.Namespace, settings: NowcastSettings) -> int:
    cfg = _estimator_config(args.config, args, settings)
    ds = _load(args)
    trace = run_estimator(ds, cfg, record_weights=args.dump_weights, n_jobs=settings.n_jobs)
    summary = trace_summary(trace)
    manifest = build_manifest(
        "run",
        inputs=[p for p in (args.uptake, args.queries, args.config) if p],
        config=cfg.model_dump(mode="json"),
        seed=cfg.master_seed,
        summary=summary,
    )
    write_artifact(args.out, trace.to_csv(include_weights=args.dump_weights), manifest)
    _summary_line("run", summary)
    return EXIT_OK


def cmd_baseline(args: argparse.Namespace, settings: NowcastSettings) -> int:
    if args.config:
        base = load_baseline_config(args.config)
        cfg = _with_updates(base, {"kind": args.kind, "warmup": getattr(args, "warmup", None)})
    else:
        cfg = BaselineConfig(kind=args.kind, warmup=settings.warmup)
    ds = _load(args)
    trace = run_baseline(ds, cfg)
    summary = trace_summary(trace)
    manifest = build_manifest(
        "baseline",
        inputs=[p for p in (args.uptake, args.queries, args.config) if p],
        config=cfg.model_dump(mode="json"),
        summary=summary,
    )
    write_artifact(args.out, trace.to_csv(), manifest)
    _summary_line(cfg.kind, summary)
    return EXIT_OK


def cmd_tune(args: argparse.Namespace, settings: NowcastSettings) -> int:
    base = _estimator_config(args.config, args, settings)
    intervals = load_search_intervals(args.intervals) if args.intervals else SearchIntervals()
    ds = _load(args)
    best, trials = random_search(
        ds,
        intervals=intervals,
        n_samples=args.trials,
        tune_range=args.tune_range,
        seed=settings.seed,
        base=base,
        n_jobs=settings.n_jobs,
    )
    winner = best_trial(trials)
    summary = {
        "trials": len(trials),
        "failed": sum(1 for tr in trials if tr.status == "failed"),
        "best_trial": winner.index,
        "rmse": winner.rmse,
    }
    manifest = build_manifest(
        "tune",
        inputs=[p for p in (args.uptake, args.queries, args.config, args.intervals) if p],
        config={
            "intervals": intervals.model_dump(mode="json"),
            "tune_range": list(args.tune_range) if args.tune_range else None,
            "base": base.model_dump(mode="json"),
        },
        seed=settings.seed,
        summary=summary,
    )
    out = Path(args.out)
    write_artifact(out, dump_model(best, format_for_path(out)), manifest)
    if args.trials_out:
        frame = trials_to_frame(trials)
        write_artifact(
            args.trials_out, str(frame.to_csv(index=False, lineterminator="\n")), manifest
        )
    _summary_line("tune", summary)
    return EXIT_OK


def cmd_compare(args: argparse.Namespace, settings: NowcastSettings) -> int:
    spec = load_compare_spec(args.spec)
    root = Path(args.spec).parent
    inputs: List[str] = [args.spec]
    datasets: Dict[str, Dataset] = {}
    for series in spec.series:
        if series.name in datasets:
            raise ConfigError("series names must be unique", details={"name": series.name})
        if series.preset is not None:
            if series.preset not in PRESETS:
                raise ConfigError(
                    f"unknown scenario '{series.preset}'", details={"presets": list(PRESETS)}
                )
            datasets[series.name] = generate(preset(series.preset, seed=series.seed))
        else:
            uptake, queries = root / str(series.uptake), root / str(series.queries)
            datasets[series.name], _ = read_dataset(uptake, queries)
            inputs.extend([str(uptake), str(queries)])

    references = dict(spec.references)
    if args.references:
        references.update(load_references(args.references))
        inputs.append(args.references)

    warmup = getattr(args, "warmup", None) or spec.warmup
    report = compare(
        datasets,
        spec.methods,
        warmup=warmup,
        score_from=spec.score_from,
        references=references,
        registry=MethodRegistry(discover=True),
        n_jobs=settings.n_jobs,
    )
    suffix = Path(args.out).suffix.lower()
    if suffix == ".json":
        text = report.to_json()
    elif suffix == ".txt":
        text = report.to_table()
    else:
        text = report.to_csv()
    manifest = build_manifest(
        "compare",
        inputs=inputs,
        config={**spec.model_dump(mode="json"), "warmup": warmup},
        summary={s: report.best_method(s) for s in report.series()},
    )
    write_artifact(args.out, text, manifest)
    sys.stdout.write(report.to_table())
    return EXIT_OK


COMMANDS = {
    "synth": cmd_synth,
    "run": cmd_run,
    "baseline": cmd_baseline,
    "tune": cmd_tune,
    "compare": cmd_compare,
}


def exit_status(error: BaseException) -> int:
    """Exit status for an error raised by a command."""
    if isinstance(error, (ConfigError, ParameterError, RegistryError)):
        return EXIT_USAGE
    if isinstance(error, (DataError, OSError)):
        return EXIT_DATA
    return EXIT_RUNTIME


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Entry point of the ``nowcast`` command.

    Returns:
        Process exit status

    Example:
        >>> main(["synth", "--scenario", "regime_drop", "--out-prefix", "drop", "--seed", "1"])
        0
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    if args.command == "version":
        print(f"nowcast-core {__version__}")
        return EXIT_OK

    try:
        settings = _settings(args)
    except ConfigError as e:
        print(f"nowcast: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    level = "WARNING" if getattr(args, "quiet", False) else settings.log_level
    setup_logging(level=level, format_type=settings.log_format)

    try:
        status = COMMANDS[args.command](args, settings)
    except (NowcastError, OSError) as e:
        logger.error("command_failed", **log_error(e, {"command": args.command}))
        print(f"nowcast: error: {e}", file=sys.stderr)
        return exit_status(e)
    except Exception as e:
        logger.exception("command_crashed", **log_error(e, {"command": args.command}))
        print(f"nowcast: error: {e}", file=sys.stderr)
        return EXIT_RUNTIME
    return status
