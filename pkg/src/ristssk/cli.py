"""Command line entry point.

Precedence for every setting is: command-line flag > config file > default.
``RISTSSK_OUTPUT_DIR`` sets the directory used when ``--out`` is omitted.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from pathlib import Path

from .channel import PhaseMode, PhasePolicy
from .config import ConfigError, Detector, FixedTrials, SystemConfig, dump_config, parse_config
from .engine import BerPoint, run_sweep
from .errors import InvalidParameterError
from .results_io import RunManifest, emit_plot_data, write_results
from .validation import run_checks

OUTPUT_DIR_ENV = "RISTSSK_OUTPUT_DIR"


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed {value} is not an unsigned 64-bit integer")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _add_overrides(p: argparse.ArgumentParser) -> None:
    p.add_argument("--seed", type=_u64, help="master seed (overrides the config file)")
    p.add_argument("--detector", choices=[d.value for d in Detector])
    p.add_argument("--phase", choices=[m.value for m in PhaseMode], help="RIS phase policy")
    p.add_argument("--trials", type=_positive, help="fixed number of trials per SNR point")
    p.add_argument("--workers", type=_positive, default=1, help="worker processes (results do not depend on this)")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ristssk", description="RIS-CIM-TSSK link-level BER simulator")
    sub = parser.add_subparsers(dest="command", required=True)

    sweep = sub.add_parser("sweep", help="run one config and write a results CSV")
    sweep.add_argument("--config", required=True, type=Path)
    sweep.add_argument("--out", type=Path, help="results CSV path")
    sweep.add_argument("--plot-out", type=Path, help="also write long-format plot data here")
    sweep.add_argument("--label", help="curve label (default: config file stem)")
    sweep.add_argument("--echo-config", action="store_true", help="print the resolved config as YAML and exit")
    _add_overrides(sweep)

    compare = sub.add_parser("compare", help="run several configs and merge them into one plot-data CSV")
    compare.add_argument("--config", required=True, type=Path, action="append", help="repeat once per curve")
    compare.add_argument("--label", action="append", help="one per --config, in order (default: file stems)")
    compare.add_argument("--out", type=Path, help="plot-data CSV path")
    compare.add_argument("--results-dir", type=Path, help="also write one results CSV per curve here")
    _add_overrides(compare)

    validate = sub.add_parser("validate", help="run the built-in exactness and oracle checks")
    validate.add_argument("--full", action="store_true", help="use acceptance-level sample sizes")
    return parser


def load_config(path: Path, args: argparse.Namespace) -> SystemConfig:
    try:
        text = path.read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from None
    config = parse_config(text)
    phase = None
    if args.phase is not None:
        phase = PhasePolicy(PhaseMode(args.phase), config.phase_policy.target_rx_antenna)
    try:
        return config.with_overrides(
            master_seed=args.seed,
            detector=Detector(args.detector) if args.detector else None,
            phase_policy=phase,
            trial_policy=FixedTrials(args.trials) if args.trials else None,
        )
    except InvalidParameterError as exc:
        raise ConfigError(str(exc)) from None


def _default_out(name: str) -> Path:
    return Path(os.environ.get(OUTPUT_DIR_ENV, ".")) / name


def _progress(label: str):
    def report(pt: BerPoint) -> None:
        print(f"{label}: snr={pt.snr_db:g} dB trials={pt.trials} ber={pt.ber:.4e} bler={pt.bler:.4e}", file=sys.stderr)

    return report


def cmd_sweep(args) -> int:
    config = load_config(args.config, args)
    if args.echo_config:
        sys.stdout.write(dump_config(config))
        return 0
    label = args.label or args.config.stem
    manifest = RunManifest(config, label, args.out or _default_out(f"{label}.csv"), args.plot_out)
    result = run_sweep(config, workers=args.workers, label=label, progress=_progress(label))
    write_results(result, manifest.results_path)
    print(f"wrote {manifest.results_path}")
    if manifest.plot_path is not None:
        emit_plot_data([result], manifest.plot_path)
        print(f"wrote {manifest.plot_path}")
    return 0


def cmd_compare(args) -> int:
    labels = args.label or [p.stem for p in args.config]
    if len(labels) != len(args.config):
        raise ConfigError(f"--label given {len(labels)} times but --config {len(args.config)} times")
    if len(set(labels)) != len(labels):
        raise ConfigError(f"curve labels must be unique, got {labels}")
    configs = [load_config(path, args) for path in args.config]
    results = []
    for label, config in zip(labels, configs):
        result = run_sweep(config, workers=args.workers, label=label, progress=_progress(label))
        if args.results_dir is not None:
            write_results(result, args.results_dir / f"{label}.csv")
        results.append(result)
    out = args.out or _default_out("compare.csv")
    emit_plot_data(results, out)
    print(f"wrote {out}")
    return 0


def cmd_validate(args) -> int:
    results = run_checks(full=args.full, report=lambda r: print(r.line(), flush=True))
    failed = sum(not r.passed for r in results)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 1 if failed else 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if getattr(args, "verbose", False) else logging.WARNING)
    handler = {"sweep": cmd_sweep, "compare": cmd_compare, "validate": cmd_validate}[args.command]
    try:
        return handler(args)
    except (ConfigError, InvalidParameterError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
