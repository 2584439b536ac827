"""Command-line interface.

Exit status: 0 on success, 2 for configuration/usage errors, 3 for numerical
or physicality failures.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import runs
from .config import SimulateConfig, SweepConfig
from .errors import ConfigError, NumericalFailure, OamError
from .measurement import estimate_report, read_sample_sets
from .oam_modes import DEFAULT_EXTENT, DEFAULT_SIZE, DEFAULT_TILT, interference, lg_field, write_pgm

log = logging.getLogger("oamcoherence")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL = 0, 2, 3


def _emit(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
        return
    path = Path(out)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="\n", encoding="ascii") as f:
        f.write(text)
    log.info("wrote %s", path)


def _load(args) -> SweepConfig:
    config = SweepConfig.load(args.config) if args.config else SweepConfig()
    return config.with_overrides(seed=args.seed)


def _out(args, config) -> str:
    return args.out if args.out is not None else config.output_path


def _unit(value, name):
    if not 0.0 <= value <= 1.0:
        raise ConfigError(name, f"must lie in [0, 1], got {value}")
    return value


def _nonneg(value, name):
    if value < 0:
        raise ConfigError(name, f"must be >= 0, got {value}")
    return value


def cmd_sweep(args) -> int:
    config = _load(args)
    out = _out(args, config)
    if {"ppt", "coherence"} & set(config.outputs):
        rows = runs.run_sweep(config)
        _emit(runs.sweep_json(rows) if args.format == "json" else runs.sweep_csv(rows), out)
    if "boundary" in config.outputs:
        rows = runs.run_boundary(config)
        text = runs.boundary_json(rows) if args.format == "json" else runs.boundary_csv(rows)
        if out in (None, "-"):
            _emit(text, "-")
        else:
            p = Path(out)
            _emit(text, str(p.with_name(p.stem + ".boundary" + p.suffix)))
    return EXIT_OK


def cmd_boundary(args) -> int:
    config = _load(args)
    rows = runs.run_boundary(config)
    text = runs.boundary_json(rows) if args.format == "json" else runs.boundary_csv(rows)
    _emit(text, _out(args, config))
    return EXIT_OK


def cmd_point(args) -> int:
    config = _load(args)
    result = runs.point(config, _unit(args.eta, "--eta"), _nonneg(args.delta, "--delta"))
    _emit(runs.dumps_json(result), args.out)
    return EXIT_OK


def cmd_simulate(args) -> int:
    config = _load(args)
    sim = SimulateConfig(
        eta=_unit(args.eta, "--eta") if args.eta is not None else config.simulate.eta,
        delta=_nonneg(args.delta, "--delta") if args.delta is not None else config.simulate.delta,
        n=args.n if args.n is not None else config.simulate.n,
        blocks=args.blocks if args.blocks is not None else config.simulate.blocks,
    )
    if sim.n < 100:
        raise ConfigError("--n", f"must be >= 100, got {sim.n}")
    if sim.blocks < 2:
        raise ConfigError("--blocks", f"must be >= 2, got {sim.blocks}")
    config = config.with_overrides(simulate=sim)
    out_dir = args.out if args.out not in (None, "-") else "simulate_out"
    result = runs.run_simulate(config, out_dir)
    sys.stdout.write(runs.dumps_json(result))
    return EXIT_OK


def cmd_estimate(args) -> int:
    if args.blocks < 2:
        raise ConfigError("--blocks", f"must be >= 2, got {args.blocks}")
    try:
        sets = read_sample_sets(args.input)
    except (OSError, ValueError) as exc:
        if isinstance(exc, OamError):
            raise
        raise ConfigError("--in", str(exc)) from None
    result = estimate_report(sets, args.blocks).as_dict()
    _emit(runs.dumps_json(result), args.out)
    return EXIT_OK


def cmd_render(args) -> int:
    if args.size < 16:
        raise ConfigError("--size", f"must be >= 16, got {args.size}")
    field = lg_field(args.l, size=args.size, extent=args.extent)
    grid = interference(field, args.tilt) if args.interfere else field.intensity
    out = args.out or f"lg_l{args.l}{'_fork' if args.interfere else ''}.pgm"
    write_pgm(grid, out)
    log.info("wrote %s", out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="oamcoherence",
        description="Coherence and entanglement of OAM-multiplexed EPR pairs in noisy channels.",
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="YAML run configuration")
    common.add_argument("--out", help="output path ('-' for stdout)")
    common.add_argument("--seed", type=int)
    common.add_argument("--format", choices=("csv", "json"), default="csv")

    p = sub.add_parser("sweep", parents=[common], help="PPT value and coherence over the eta/delta grid")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("boundary", parents=[common], help="sudden-death efficiency per delta")
    p.set_defaults(func=cmd_boundary)

    p = sub.add_parser("point", parents=[common], help="single evaluation, JSON on stdout")
    p.add_argument("--eta", type=float, default=1.0)
    p.add_argument("--delta", type=float, default=0.0)
    p.set_defaults(func=cmd_point)

    p = sub.add_parser("simulate", parents=[common], help="synthetic homodyne data and re-estimation")
    p.add_argument("--eta", type=float)
    p.add_argument("--delta", type=float)
    p.add_argument("--n", type=int)
    p.add_argument("--blocks", type=int)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("estimate", parents=[common], help="estimate from samples_*.csv files")
    p.add_argument("--in", dest="input", required=True, help="directory holding samples_*.csv")
    p.add_argument("--blocks", type=int, default=10)
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("render-mode", help="write an LG beam or fork pattern as PGM")
    p.add_argument("--l", type=int, default=1)
    p.add_argument("--size", type=int, default=DEFAULT_SIZE)
    p.add_argument("--tilt", type=float, default=DEFAULT_TILT)
    p.add_argument("--extent", type=float, default=DEFAULT_EXTENT)
    p.add_argument("--interfere", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_render)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalFailure as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OamError as exc:
        # missing or short input data: a usage problem, not a numerical one
        print(f"input error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
