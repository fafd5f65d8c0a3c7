# src/cli.py
"""
Command-line front end.

    python -m src.cli model --config config/fig8_base.json
    python -m src.cli sweep --config config/fig9.json --out fig9.csv
    python -m src.cli validate --config config/fig8_base.json --runs 500 --intervals 1000 --seed 42

Exit codes: 0 ok, 1 I/O failure, 2 config or validation error,
3 numerical non-convergence, 4 model and simulator disagree.
"""
import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence

from .analysis_pipeline import LinkAnalysisPipeline, simulation_row
from .analyzers.throughput_model import THROUGHPUT_MODES
from .collectors.config_loader import (
    PRESETS,
    ConfigDocument,
    default_seed,
    default_workers,
    load_config_document,
    preset_document,
    write_presets,
)
from .database import FORMATS, write_results
from .errors import (
    AcceptanceError,
    ConsistencyError,
    NumericalConvergenceError,
    ScenarioIssue,
    ScenarioValidationError,
    SweepPointError,
)
from .simulation.protocol import CHANNEL_MODES, SIM_MODES, SimProtocol

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_IO = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_ACCEPTANCE = 4

PRESET_DIR = Path(__file__).resolve().parent.parent / "config"


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", required=True, help="scenario/sweep JSON file or preset name")
    common.add_argument("--out", help="result file (CSV or JSON)")
    common.add_argument("--format", choices=FORMATS, help="output format (default: from --out suffix, else csv)")
    common.add_argument("--throughput-mode", choices=THROUGHPUT_MODES, default="payload")
    common.add_argument("-v", "--verbose", action="count", default=0)

    sim = argparse.ArgumentParser(add_help=False)
    sim.add_argument("--seed", type=int, help="master seed (default: BLE_LINK_SEED or 42)")
    sim.add_argument("--runs", type=int)
    sim.add_argument("--intervals", type=int, help="connection intervals per run")
    sim.add_argument("--workers", type=int, help="worker processes (default: BLE_LINK_WORKERS or 1)")
    sim.add_argument("--mode", choices=SIM_MODES)
    sim.add_argument("--channel-mode", choices=CHANNEL_MODES)

    parser = argparse.ArgumentParser(prog="ble-link", description="BLE link throughput and reliability analysis")
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("model", parents=[common], help="TSR, throughput and reliability of one scenario")
    sub.add_parser("reliability", parents=[common], help="P_TF and reliability under a disturber")
    sub.add_parser("sweep", parents=[common], help="Pareto curves over a parameter grid")
    sub.add_parser("simulate", parents=[common, sim], help="Monte Carlo estimates")
    sub.add_parser("validate", parents=[common, sim], help="models against the simulator")

    presets = sub.add_parser("presets", help="list the preset configs or write them as JSON")
    presets.add_argument("--write", metavar="DIR", nargs="?", const=str(PRESET_DIR))
    presets.add_argument("-v", "--verbose", action="count", default=0)
    return parser


def _configure_logging(verbosity: int):
    level = logging.WARNING if verbosity <= 0 else logging.INFO if verbosity == 1 else logging.DEBUG
    logging.basicConfig(level=level, format="%(asctime)s %(levelname)s %(name)s: %(message)s", stream=sys.stderr)


def resolve_config(ref: str) -> ConfigDocument:
    """A config path, a file in config/, or a preset name"""
    path = Path(ref)
    if path.exists():
        return load_config_document(path)
    local = PRESET_DIR / path.name
    if local.exists():
        return load_config_document(local)
    if path.stem in PRESETS:
        logger.info(f"{ref} not found on disk, using built-in preset '{path.stem}'")
        return preset_document(path.stem)
    return load_config_document(path)


def build_protocol(args: argparse.Namespace, document: ConfigDocument) -> SimProtocol:
    settings = dict(document.simulation)
    overrides = {
        "runs": args.runs,
        "intervals_per_run": args.intervals,
        "mode": args.mode,
        "channel_mode": args.channel_mode,
    }
    settings.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return SimProtocol(
            master_seed=default_seed() if args.seed is None else args.seed,
            workers=default_workers() if args.workers is None else args.workers,
            throughput_mode=args.throughput_mode,
            **settings,
        )
    except ValueError as e:
        raise ScenarioValidationError([ScenarioIssue("simulation", str(e))]) from None


def _write(results, args: argparse.Namespace):
    if args.out:
        path = write_results(results, args.out, args.format)
        print(f"💾 Results written to {path}")


def cmd_model(args, pipeline: LinkAnalysisPipeline) -> int:
    document = resolve_config(args.config)
    outputs = pipeline.analyze_scenario(document.scenario, document.name)
    pipeline.visualizer.model_report(outputs)
    _write(outputs, args)
    return EXIT_OK


def cmd_reliability(args, pipeline: LinkAnalysisPipeline) -> int:
    document = resolve_config(args.config)
    outputs = pipeline.analyze_scenario(document.scenario, document.name)
    if outputs.p_tf is None:
        raise ScenarioValidationError([ScenarioIssue("n", "reliability needs a disturber (payload_d_bytes, n, ci_d_us)")])
    print(f"P_TF:        {outputs.p_tf:.6f}")
    print(f"Reliability: {outputs.reliability:.6f}")
    for term in ("bit_error_term", "busy_term", "gap_term"):
        print(f"  {term}: {outputs.extras[term]:.6f}")
    _write(outputs, args)
    return EXIT_OK


def cmd_sweep(args, pipeline: LinkAnalysisPipeline) -> int:
    document = resolve_config(args.config)
    curves = pipeline.run_sweep(document)
    pipeline.visualizer.summary_dashboard(curves)
    _write(curves, args)
    return EXIT_OK


def cmd_simulate(args, pipeline: LinkAnalysisPipeline) -> int:
    document = resolve_config(args.config)
    protocol = build_protocol(args, document)
    result = pipeline.simulate(document.scenario, protocol)
    pipeline.visualizer.simulation_report(result)
    _write([simulation_row(result, document.scenario, args.throughput_mode)], args)
    return EXIT_OK


def cmd_validate(args, pipeline: LinkAnalysisPipeline) -> int:
    document = resolve_config(args.config)
    protocol = build_protocol(args, document)
    report = pipeline.validate(document.scenario, protocol)
    report.raise_for_failures()
    _write(report.as_rows(), args)
    return EXIT_OK


def cmd_presets(args) -> int:
    if args.write:
        for path in write_presets(args.write):
            print(f"✓ Wrote {path}")
        return EXIT_OK
    for name, document in PRESETS.items():
        print(f"{name:<10} {document.get('description', '')}")
    return EXIT_OK


COMMANDS = {
    "model": cmd_model,
    "reliability": cmd_reliability,
    "sweep": cmd_sweep,
    "simulate": cmd_simulate,
    "validate": cmd_validate,
}


def _print_issues(title: str, issues: Sequence[ScenarioIssue]):
    print(f"❌ {title}", file=sys.stderr)
    for issue in issues:
        print(f"   - {issue}", file=sys.stderr)


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_CONFIG
    _configure_logging(args.verbose)

    try:
        if args.command == "presets":
            return cmd_presets(args)
        pipeline = LinkAnalysisPipeline(throughput_mode=args.throughput_mode)
        return COMMANDS[args.command](args, pipeline)

    except SweepPointError as e:
        print(f"❌ Grid point {e.swept_param}={e.value:g} failed: {e.cause}", file=sys.stderr)
        if isinstance(e.cause, ScenarioValidationError):
            _print_issues("Invalid scenario at that grid point:", e.cause.errors)
            return EXIT_CONFIG
        if isinstance(e.cause, (NumericalConvergenceError, ConsistencyError)):
            return EXIT_NUMERICAL
        return EXIT_CONFIG
    except ScenarioValidationError as e:
        _print_issues("Invalid configuration:", e.errors)
        return EXIT_CONFIG
    except (NumericalConvergenceError, ConsistencyError) as e:
        print(f"❌ Numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except AcceptanceError as e:
        print("❌ Model and simulator disagree:", file=sys.stderr)
        for failure in e.failures:
            print(f"   - {failure}", file=sys.stderr)
        return EXIT_ACCEPTANCE
    except OSError as e:
        print(f"❌ I/O failure on {getattr(e, 'filename', None) or 'output'}: {e}", file=sys.stderr)
        return EXIT_IO
    except ValueError as e:
        print(f"❌ Invalid input: {e}", file=sys.stderr)
        return EXIT_CONFIG


def main():
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
