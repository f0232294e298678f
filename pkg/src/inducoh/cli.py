"""Command-line interface: sweeps, figure data, optimization, validation.

Exit codes: 0 on success (including a reported-but-infeasible
optimization), 1 on usage errors, 2 when a validation suite fails.

All numbers are printed with 12 significant digits, so identical
arguments (and seed) give byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import replace

import numpy as np

from . import model, validation
from .fock import LeakageError

_FLOAT_FMT = "{:.12g}"

_SWEEP_COLUMNS = (
    "n1_det",
    "n2_det",
    "visibility",
    "gamma12",
    "n_minus_mean",
    "n_minus_var",
    "snr",
)

_PARAM_DEFAULTS = {"va": 1.0, "vb": 1.0, "t": 1.0, "t2": 1.0, "phi": 0.0, "pulses": 1}

_CONFIG_TYPES = {
    "va": float,
    "vb": float,
    "t": float,
    "t2": float,
    "phi": float,
    "pulses": int,
    "grid": str,
    "format": str,
    "out": str,
    "seed": int,
    "cutoff": int,
    "r_max": float,
    "samples": int,
    "gains": str,
    "resolution": int,
    "vary": str,
}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad flags; route that to status 1 instead
    def error(self, message):
        raise _UsageError(message)


def _fmt(value: float) -> str:
    return _FLOAT_FMT.format(float(value))


def _load_config(path: str) -> dict:
    values = {}
    try:
        with open(path, "r", encoding="utf-8") as handle:
            lines = handle.readlines()
    except OSError as exc:
        raise _UsageError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise _UsageError(f"{path}:{lineno}: expected key=value, got {raw.strip()!r}")
        key, _, text = line.partition("=")
        key = key.strip().lower().replace("-", "_")
        if key not in _CONFIG_TYPES:
            raise _UsageError(f"{path}:{lineno}: unknown config key {key!r}")
        try:
            values[key] = _CONFIG_TYPES[key](text.strip())
        except ValueError as exc:
            raise _UsageError(f"{path}:{lineno}: bad value for {key}: {exc}") from exc
    return values


def _merge_config(args: argparse.Namespace) -> None:
    """Fill arguments not given on the command line from the config file.
    Flags always win over config values."""
    config = _load_config(args.config) if getattr(args, "config", None) else {}
    for key, value in config.items():
        if hasattr(args, key) and getattr(args, key) is None:
            setattr(args, key, value)


def _apply_param_defaults(args: argparse.Namespace) -> None:
    for key, default in _PARAM_DEFAULTS.items():
        if hasattr(args, key) and getattr(args, key) is None:
            setattr(args, key, default)


def _setup_from_args(args: argparse.Namespace) -> model.SetupParams:
    return model.SetupParams(
        va=args.va,
        vb=args.vb,
        t=args.t,
        t2=args.t2,
        theta_a=2.0 * args.phi,
        pulses=args.pulses,
    )


def _parse_grid(text: str) -> np.ndarray:
    parts = text.split(":")
    if len(parts) != 3:
        raise _UsageError(f"grid must be start:stop:count, got {text!r}")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError as exc:
        raise _UsageError(f"bad grid {text!r}: {exc}") from exc
    if count < 2:
        raise _UsageError(f"grid count must be >= 2, got {count}")
    return np.linspace(start, stop, count)


def _parse_gains(text: str) -> list[float]:
    try:
        gains = [float(g) for g in text.split(",") if g.strip() != ""]
    except ValueError as exc:
        raise _UsageError(f"bad gains list {text!r}: {exc}") from exc
    if not gains:
        raise _UsageError("gains list is empty")
    return gains


def _emit_rows(header: list[str], rows: list[list[float]], fmt: str, out: str | None) -> None:
    if fmt == "csv":
        lines = [",".join(header)]
        lines.extend(",".join(_fmt(value) for value in row) for row in rows)
        text = "\n".join(lines) + "\n"
    else:
        records = [
            {key: float(_fmt(value)) for key, value in zip(header, row)} for row in rows
        ]
        text = json.dumps(records, indent=2) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8") as handle:
            handle.write(text)


def _sweep_point(base: model.SetupParams, parameter: str, value: float, vary: str) -> model.SetupParams:
    if parameter == "va":
        return replace(base, va=float(value))
    if parameter == "vb":
        return replace(base, vb=float(value))
    if parameter == "t":
        return replace(base, t=float(value))
    if parameter == "t2":
        return replace(base, t2=float(value))
    if parameter == "phi":
        return replace(base, theta_a=2.0 * float(value))
    if parameter == "tau":
        if not 0.0 <= value <= 1.0:
            raise ValueError(f"tau must lie in [0, 1], got {value}")
        if vary == "phase":
            # tau = cos^2(2 phi) at full transmittance
            return replace(base, t=1.0, theta_a=math.acos(math.sqrt(value)))
        # tau = T at zero phase
        return replace(base, t=float(value), theta_a=0.0)
    raise _UsageError(f"unknown sweep parameter {parameter!r}")


def _cmd_sweep(args: argparse.Namespace) -> int:
    _apply_param_defaults(args)
    base = _setup_from_args(args)
    grid = _parse_grid(args.grid)
    rows = []
    for value in grid:
        point = _sweep_point(base, args.parameter, float(value), args.vary)
        obs = model.observables(point)
        rows.append(
            [
                float(value),
                obs.n1_det,
                obs.n2_det,
                obs.visibility,
                obs.gamma12,
                obs.n_minus_mean,
                obs.n_minus_var,
                obs.snr_multipulse,
            ]
        )
    _emit_rows([args.parameter, *_SWEEP_COLUMNS], rows, args.format, args.out)
    return 0


def _figure_path(out_dir: str, stem: str, fmt: str) -> str:
    return os.path.join(out_dir, f"{stem}.{fmt}")


def _cmd_figure(args: argparse.Namespace) -> int:
    resolution = args.resolution if args.resolution is not None else 200
    if resolution < 2:
        raise _UsageError(f"resolution must be >= 2, got {resolution}")
    out_dir = args.out if args.out is not None else "."
    os.makedirs(out_dir, exist_ok=True)
    grid = np.linspace(0.0, 1.0, resolution)
    written = []

    def emit(stem: str, header: list[str], rows: list[list[float]]) -> None:
        path = _figure_path(out_dir, stem, args.format)
        _emit_rows(header, rows, args.format, path)
        written.append(path)

    if args.figure == "coherence":
        gains = _parse_gains(args.gains) if args.gains else [0.0, 1.0, 10.0, 100.0]
        for gain in gains:
            rows = [[t, model.visibility_optimal(gain, t)] for t in grid]
            emit(f"coherence_va{gain:g}", ["t", "gamma12"], rows)
    elif args.figure == "visibility":
        gains = _parse_gains(args.gains) if args.gains else [1.0, 10.0, 100.0]
        for gain in gains:
            rows = [[t, model.visibility_equal_gain(gain, t)] for t in grid]
            emit(f"visibility_eg_va{gain:g}", ["t", "visibility"], rows)
            rows = [[t, model.visibility_optimal(gain, t)] for t in grid]
            emit(f"visibility_opt_va{gain:g}", ["t", "visibility"], rows)
    else:
        gains = _parse_gains(args.gains) if args.gains else [1.0, 10.0, 100.0]
        rows = [[tau, model.snr_low_gain(0.01, tau)] for tau in grid]
        emit("snr_lg", ["tau", "snr"], rows)
        for gain in gains:
            rows = [[tau, model.snr_high_gain_source(gain, 0.01, tau)] for tau in grid]
            emit(f"snr_hgs_va{gain:g}", ["tau", "snr"], rows)
            rows = [[tau, model.snr_optimal(gain, tau)] for tau in grid]
            emit(f"snr_opt_va{gain:g}", ["tau", "snr"], rows)
    for path in written:
        sys.stdout.write(path + "\n")
    return 0


def _cmd_optimize(args: argparse.Namespace) -> int:
    if args.va is None or args.t is None:
        raise _UsageError("optimize requires --va and --t")
    va, t = args.va, args.t
    phi = args.phi if args.phi is not None else 0.0
    pulses = args.pulses if args.pulses is not None else 1
    vb_star = model.optimize_vb(va, t)
    optimal = model.SetupParams(va=va, vb=vb_star, t=t, theta_a=2.0 * phi, pulses=pulses)
    record: dict = {
        "va": va,
        "t": t,
        "vb_star": vb_star,
        "visibility": model.visibility(optimal),
        "gamma12": model.induced_coherence(optimal),
        "snr": model.snr(optimal),
        "snr_multipulse": model.snr_multipulse(optimal),
    }
    if args.vb is not None:
        t2_star = model.optimize_t2(va, args.vb, t)
        record["vb"] = args.vb
        record["t2_star"] = t2_star if t2_star is not None else "infeasible"
    if args.format == "json":
        payload = {
            key: (float(_fmt(value)) if isinstance(value, float) else value)
            for key, value in record.items()
        }
        sys.stdout.write(json.dumps(payload, indent=2) + "\n")
    else:
        for key, value in record.items():
            text = _fmt(value) if isinstance(value, float) else str(value)
            sys.stdout.write(f"{key} = {text}\n")
    return 0


def _cmd_validate(args: argparse.Namespace) -> int:
    samples = args.samples if args.samples is not None else 50
    seed = args.seed if args.seed is not None else validation.DEFAULT_SEED
    cutoff = args.cutoff if args.cutoff is not None else validation.DEFAULT_CUTOFF
    r_max = args.r_max if args.r_max is not None else validation.DEFAULT_R_MAX
    if samples < 1:
        raise _UsageError(f"--samples must be >= 1, got {samples}")
    if cutoff < 1:
        raise _UsageError(f"--cutoff must be >= 1, got {cutoff}")
    if r_max <= 0.0:
        raise _UsageError(f"--r-max must be > 0, got {r_max}")
    try:
        results = validation.run_suites(samples=samples, seed=seed, cutoff=cutoff, r_max=r_max)
    except LeakageError as exc:
        sys.stdout.write(f"oracle vs engine: FAIL: {exc}\n")
        return 2
    for result in results:
        sys.stdout.write(result.summary() + "\n")
    if all(result.passed for result in results):
        sys.stdout.write("overall: PASS\n")
        return 0
    sys.stdout.write("overall: FAIL\n")
    return 2


def _add_param_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--va", type=float, help="brightness of crystal A, sinh^2(r_A)")
    parser.add_argument("--vb", type=float, help="brightness of crystal B, sinh^2(r_B)")
    parser.add_argument("--t", type=float, help="idler filter intensity transmittance")
    parser.add_argument("--t2", type=float, help="signal-B arm attenuator transmittance")
    parser.add_argument("--phi", type=float, help="interference phase phi (2 phi enters cos)")
    parser.add_argument("--pulses", type=int, help="pulses averaged per measurement")


def _build_parser() -> _Parser:
    parser = _Parser(prog="inducoh", description=__doc__)
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    sweep = sub.add_parser("sweep", help="tabulate observables along one parameter")
    sweep.add_argument("parameter", choices=["va", "vb", "t", "t2", "phi", "tau"])
    sweep.add_argument("--grid", required=True, help="start:stop:count")
    sweep.add_argument(
        "--vary",
        choices=["transmission", "phase"],
        default="transmission",
        help="how a tau sweep is realized: vary T at phi=0, or vary phi at T=1",
    )
    _add_param_flags(sweep)
    sweep.add_argument("--format", choices=["csv", "json"], default="csv")
    sweep.add_argument("--out", help="output file (default: stdout)")
    sweep.add_argument("--config", help="key=value config file; flags override it")

    figure = sub.add_parser("figure", help="emit curve families as CSV/JSON files")
    figure.add_argument("figure", choices=["coherence", "visibility", "snr"])
    figure.add_argument("--gains", help="comma-separated brightness list for the curves")
    figure.add_argument("--resolution", type=int, help="points per curve (default 200)")
    figure.add_argument("--format", choices=["csv", "json"], default="csv")
    figure.add_argument("--out", help="output directory (default: current)")
    figure.add_argument("--config", help="key=value config file; flags override it")

    optimize = sub.add_parser("optimize", help="optimal vb (and t2 when --vb is given)")
    _add_param_flags(optimize)
    optimize.add_argument("--format", choices=["text", "json"], default="text")
    optimize.add_argument("--config", help="key=value config file; flags override it")

    val = sub.add_parser("validate", help="run the dual-path validation suites")
    val.add_argument("--samples", type=int, help="oracle suite sample count (default 50)")
    val.add_argument("--seed", type=int, help="RNG seed (default 1234)")
    val.add_argument("--cutoff", type=int, help="oracle Fock cutoff (default 12)")
    val.add_argument("--r-max", type=float, dest="r_max", help="largest drawn gain (default 0.6)")
    val.add_argument("--config", help="key=value config file; flags override it")

    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise _UsageError("missing subcommand (sweep, figure, optimize, validate)")
        _merge_config(args)
        handler = {
            "sweep": _cmd_sweep,
            "figure": _cmd_figure,
            "optimize": _cmd_optimize,
            "validate": _cmd_validate,
        }[args.command]
        return handler(args)
    except _UsageError as exc:
        sys.stderr.write(f"inducoh: error: {exc}\n")
        return 1
    except ValueError as exc:
        sys.stderr.write(f"inducoh: error: {exc}\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
