"""
Main entry point for the group-md command line
"""
import argparse
import logging
import os
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional

from dotenv import load_dotenv
from pydantic import ValidationError

from group_md.analysis.verify import run_verification
from group_md.core.config import LoggingConfig, RunConfig
from group_md.core.engine import ExperimentEngine, ExperimentResult
from group_md.core.plotting import PLOT_KINDS, emit_plot
from group_md.core.storage import write_summary_json
from group_md.utils.logger import setup_logging

logger = logging.getLogger(__name__)

DEFAULT_CONFIG = 'config/config.yaml'
NOISE_SEED_OFFSET = 1000

EXIT_OK = 0
EXIT_FATAL = 1
EXIT_DEGENERATE = 2


def _csv_list(text: str) -> List[str]:
    return [item.strip() for item in text.split(',') if item.strip()]


def _float_list(text: str) -> List[float]:
    try:
        return [float(item) for item in _csv_list(text)]
    except ValueError:
        raise argparse.ArgumentTypeError(f"Expected comma-separated numbers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='group-md',
        description='Group-logarithm mirror descent experiments on simplex-constrained QPs',
    )
    sub = parser.add_subparsers(dest='command', required=True)

    def common(p: argparse.ArgumentParser) -> None:
        p.add_argument('--config', help=f"YAML/JSON config (default: $CONFIG_FILE or {DEFAULT_CONFIG})")
        p.add_argument('--out', help='Output directory (default: output_dir from the config)')

    def experiment(p: argparse.ArgumentParser) -> None:
        common(p)
        p.add_argument('--seed', type=int, help='Base instance seed; noise seeds follow at +1000')
        p.add_argument('--runs', type=int, help='Number of seeded runs per cell')
        p.add_argument('--algo', type=_csv_list, help='Comma-separated algorithms (eg,geg,dmd,mmd-geg,mmd-dmd)')
        p.add_argument('--parallel', type=int, help='Worker threads for independent cells')

    experiment(sub.add_parser('run', help='Run all configured algorithms on one instance'))

    sweep = sub.add_parser('sweep', help='Sweep one instance or link parameter')
    experiment(sweep)
    sweep.add_argument('--axis', choices=['n', 'kappa', 'K', 'snr_db', 'q'])
    sweep.add_argument('--values', type=_float_list, help='Comma-separated axis values')

    verify = sub.add_parser('verify', help='Run the theorem and invariant checks')
    common(verify)
    verify.add_argument('--seed', type=int, default=0)

    plot = sub.add_parser('plot', help='Render SVG figures from traces or summaries')
    common(plot)
    plot.add_argument('--kind', required=True, choices=PLOT_KINDS)
    plot.add_argument('inputs', nargs='+', help='Trace CSVs, trace directories or summary.json files')
    return parser


def cli_overrides(args: argparse.Namespace) -> Dict[str, Any]:
    """Nested config overrides from command-line flags"""
    overrides: Dict[str, Any] = {}
    if getattr(args, 'seed', None) is not None and args.command in ('run', 'sweep'):
        overrides['seeds'] = {'instance_seed': args.seed, 'noise_seed': args.seed + NOISE_SEED_OFFSET}
    if getattr(args, 'runs', None) is not None:
        overrides.setdefault('seeds', {})['n_runs'] = args.runs
    if getattr(args, 'algo', None):
        overrides['update'] = {'algorithms': args.algo}
    if getattr(args, 'parallel', None) is not None:
        overrides['parallel'] = args.parallel
    if getattr(args, 'out', None):
        overrides['output_dir'] = args.out
    return overrides


def load_config(args: argparse.Namespace) -> RunConfig:
    """
    Resolve the config file and apply command-line overrides

    An explicit --config or CONFIG_FILE must exist; without either the
    default file is used when present, else built-in defaults.
    """
    overrides = cli_overrides(args)
    config_file: Optional[str] = args.config or os.getenv('CONFIG_FILE')
    if config_file is None:
        if not Path(DEFAULT_CONFIG).exists():
            return RunConfig(**overrides)
        config_file = DEFAULT_CONFIG
    return RunConfig.from_yaml(config_file, overrides)


def format_validation_error(error: ValidationError) -> str:
    lines = [f"Invalid configuration ({error.error_count()} errors):"]
    for item in error.errors():
        location = '.'.join(str(part) for part in item['loc']) or '<root>'
        lines.append(f"  {location}: {item['msg']}")
    return "\n".join(lines)


def log_results(experiment: ExperimentResult) -> None:
    for row in experiment.rows:
        point = "" if row.value is None else f" {experiment.axis}={row.value:g}"
        its = row.metrics.get('iterations')
        if its is None:
            logger.warning(f"{row.algorithm}{point}: no successful runs")
            continue
        line = f"{row.algorithm:<8}{point}: iterations {its.mean:.1f} +- {its.std:.1f}"
        fw = row.metrics.get('final_rel_fw')
        if fw is not None:
            line += f", rel FW {fw.mean:.3e}"
        iou = row.metrics.get('final_iou')
        if iou is not None:
            line += f", IoU {iou.mean:.3f}"
        if row.n_failed:
            line += f", {row.n_failed} failed"
        logger.info(line)


def cmd_run(config: RunConfig) -> int:
    engine = ExperimentEngine(config, config.output_dir)
    experiment = engine.run_all()
    log_results(experiment)
    return EXIT_DEGENERATE if experiment.degenerate else EXIT_OK


def cmd_sweep(config: RunConfig, axis: Optional[str], values: Optional[List[float]]) -> int:
    if axis is None and config.sweep is not None:
        axis = config.sweep.axis
    if values is None and config.sweep is not None and axis == config.sweep.axis:
        values = config.sweep.values
    if axis is None or not values:
        logger.error("sweep needs --axis and --values (or a sweep section in the config)")
        return EXIT_FATAL
    engine = ExperimentEngine(config, config.output_dir)
    experiment = engine.sweep(axis, values)
    log_results(experiment)
    return EXIT_DEGENERATE if experiment.degenerate else EXIT_OK


def cmd_verify(out_dir: str, seed: int) -> int:
    report = run_verification(seed)
    path = write_summary_json(report.to_dict(), Path(out_dir) / "verify.json")
    logger.info(f"Verification report written to {path}")
    for failure in report.failures:
        logger.error(f"FAILED {failure.name}: observed={failure.observed} bound={failure.bound} "
                     f"{failure.detail}")
    return EXIT_OK if report.passed else EXIT_FATAL


def cmd_plot(kind: str, inputs: List[str], out_dir: str) -> int:
    emit_plot(kind, inputs, out_dir)
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    """Main function"""
    load_dotenv()
    args = build_parser().parse_args(argv)

    try:
        try:
            config = load_config(args)
        except ValidationError as e:
            setup_logging(LoggingConfig().model_dump())
            logger.error(format_validation_error(e))
            return EXIT_FATAL

        setup_logging(config.logging.model_dump())
        logger.info(f"group-md {args.command} (config: {config.name})")

        if args.command == 'run':
            return cmd_run(config)
        if args.command == 'sweep':
            return cmd_sweep(config, args.axis, args.values)
        if args.command == 'verify':
            return cmd_verify(config.output_dir, args.seed)
        return cmd_plot(args.kind, args.inputs, config.output_dir)

    except KeyboardInterrupt:
        logger.info("Interrupted by user")
        return EXIT_FATAL
    except Exception as e:
        logger.exception(f"Fatal error: {e}")
        return EXIT_FATAL


if __name__ == '__main__':
    sys.exit(main())
