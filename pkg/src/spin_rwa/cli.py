"""``spin-rwa`` command line: figure scenarios, custom runs, sweeps, validation.

Errors are reported on stderr as a single line::

    spin-rwa: error: <ErrorType>: <message>

with exit status 1 (2 for command-line usage errors).
"""
from __future__ import annotations

import argparse
import math
import sys
from typing import Sequence

import numpy as np

from . import dynamics, oracle
from .errors import SpinRWAError
from .field import FieldConfig
from .output import (
    emit_csv,
    emit_profile_csv,
    emit_svg,
    resolve_output,
)
from .scenarios import (
    DEFAULT_RATIO,
    DEFAULT_SAMPLES,
    DRIVES,
    SCENARIO_IDS,
    builtin_scenario,
    frequency_sweep,
    load_config,
    parse_probabilities,
    run_scenario,
    scenario_from_mapping,
    with_sampling,
)
from .spin import SpinQuantum, StateVector

PROG = "spin-rwa"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _emit_series(series, name, out, svg):
    csv_path = resolve_output(out, f"{name}.csv")
    if csv_path is None:
        emit_csv(series, sys.stdout)
    else:
        csv_path.parent.mkdir(parents=True, exist_ok=True)
        emit_csv(series, csv_path)
    if svg is not None:
        svg_path = resolve_output(svg)
        svg_path.parent.mkdir(parents=True, exist_ok=True)
        emit_svg(series, svg_path, {"title": name})


def cmd_scenario(args) -> int:
    if args.list:
        for sid in SCENARIO_IDS:
            print(sid)
        return 0
    if args.id is None:
        raise UsageError("scenario id required (or --list)")
    scenario = with_sampling(builtin_scenario(args.id), args.samples, args.periods)
    _emit_series(run_scenario(scenario), scenario.name, args.out, args.svg)
    return 0


def cmd_evolve(args) -> int:
    values: dict[str, object] = {}
    if args.config:
        values.update(load_config(args.config))
    overrides = {
        "name": args.name,
        "spin": args.spin,
        "init": args.init,
        "ratio": args.ratio,
        "periods": args.periods,
        "samples": args.samples,
    }
    values.update({k: v for k, v in overrides.items() if v is not None})
    if args.omega is not None:
        values["omega"], values["drive"] = args.omega, None
    elif args.drive is not None:
        values["drive"], values["omega"] = args.drive, None
    scenario = scenario_from_mapping(values)
    _emit_series(run_scenario(scenario), scenario.name, args.out, args.svg)
    return 0


def cmd_sweep(args) -> int:
    spin = SpinQuantum.from_value(args.spin)
    probs = parse_probabilities(args.init, spin)
    initial = StateVector.from_probabilities(spin, probs)
    initial.require_normalized(1e-12)
    target = None
    if args.target is not None:
        target = int(round(2 * _parse_number(args.target)))
    profile = frequency_sweep(
        spin, initial, args.omega_from, args.omega_to, args.points,
        samples_per_period=args.samples, ratio=args.ratio, target=target,
        workers=args.workers,
    )
    path = resolve_output(args.out, "sweep.csv")
    if path is None:
        emit_profile_csv(profile, sys.stdout)
    else:
        path.parent.mkdir(parents=True, exist_ok=True)
        emit_profile_csv(profile, path)
    return 0


def _parse_number(text: str) -> float:
    num, sep, den = text.partition("/")
    return float(num) / float(den) if sep else float(num)


def validation_checks(spins: Sequence[SpinQuantum], ratio: float = DEFAULT_RATIO):
    """Yield ``(check, label, residual, tolerance)`` for the oracle cross-checks."""
    rng = np.random.default_rng(20240601)
    for spin in spins:
        for drive in DRIVES:
            field = FieldConfig.from_drive(drive, ratio)
            frame = dynamics.derive_frame(field)
            raw = rng.normal(size=spin.dimension()) + 1j * rng.normal(size=spin.dimension())
            initial = StateVector(spin, raw).normalized()
            times, rk4 = oracle.trajectory(spin, initial, field, frame.period, checkpoints=8)
            exact = dynamics.evolve_times(spin, initial, field, times)
            err = max(oracle.global_phase_distance(e, r) for e, r in zip(exact, rk4))
            label = f"s={spin} drive={drive}"
            yield "oracle", label, err, 1e-6
            yield "diagonalization", label, oracle.rotated_diagonalization_residual(spin, field), 1e-12
            series = dynamics.evolve_series(spin, initial, field, 1.0, 201)
            yield "normalization", label, float(np.max(np.abs(series.row_sums() - 1))), 1e-12
            yield "periodicity", label, float(np.max(np.abs(series.probabilities[-1]
                                                             - series.probabilities[0]))), 1e-10
        yield "rotation", f"s={spin}", max(
            oracle.rotation_identity_residual(spin, phi) for phi in rng.uniform(-math.pi, math.pi, 5)
        ), 1e-12


def cmd_validate(args) -> int:
    spins = [SpinQuantum.from_value(v) for v in args.spins.split(",")]
    failures = 0
    for check, label, residual, tol in validation_checks(spins, args.ratio):
        status = "pass" if residual < tol else "FAIL"
        failures += status == "FAIL"
        print(f"{status} check={check} {label} residual={residual:.3e} tol={tol:.0e}", flush=True)
    print(f"{'ok' if not failures else 'failed'}: {failures} failure(s)")
    return 1 if failures else 0


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog=PROG, description="Exact spin-s dynamics in a rotating magnetic field.")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    def add_output(p):
        p.add_argument("--out", help="CSV destination (default: stdout, or $SPIN_RWA_OUTPUT_DIR)")
        p.add_argument("--svg", help="also render an SVG plot here")
        p.add_argument("--samples", type=int, help=f"tau samples (default {DEFAULT_SAMPLES})")
        p.add_argument("--periods", type=float, help="number of periods (default 1)")

    p = sub.add_parser("scenario", help="run a built-in figure scenario")
    p.add_argument("id", nargs="?", help="figN-top|middle|bottom")
    p.add_argument("--list", action="store_true", help="list scenario ids")
    add_output(p)
    p.set_defaults(func=cmd_scenario)

    p = sub.add_parser("evolve", help="run a custom configuration")
    p.add_argument("--config", help="key=value file; flags override its values")
    p.add_argument("--name")
    p.add_argument("--spin", help="spin s, e.g. 7/2 or 3.5")
    p.add_argument("--init", help="p1,p2,... in descending m, or stretched|uniform")
    group = p.add_mutually_exclusive_group()
    group.add_argument("--omega", type=float, help="drive angular frequency (omega0 = 1)")
    group.add_argument("--drive", choices=DRIVES)
    p.add_argument("--ratio", type=float, help=f"omega1/omega0 (default {DEFAULT_RATIO})")
    add_output(p)
    p.set_defaults(func=cmd_evolve)

    p = sub.add_parser("sweep", help="peak transfer versus drive frequency")
    p.add_argument("--spin", required=True)
    p.add_argument("--init", default="stretched")
    p.add_argument("--from", dest="omega_from", type=float, required=True)
    p.add_argument("--to", dest="omega_to", type=float, required=True)
    p.add_argument("--points", type=int, default=41)
    p.add_argument("--ratio", type=float, default=DEFAULT_RATIO)
    p.add_argument("--samples", type=int, default=DEFAULT_SAMPLES, help="samples per period")
    p.add_argument("--target", help="track population of this m instead")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--out")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("validate", help="cross-check closed form against lab-frame RK4")
    p.add_argument("--spins", default="1/2,1,2,7/2,9/2")
    p.add_argument("--ratio", type=float, default=DEFAULT_RATIO)
    p.set_defaults(func=cmd_validate)
    return parser


def _fail(kind: str, message: str, code: int) -> int:
    message = " ".join(str(message).split())
    print(f"{PROG}: error: {kind}: {message}", file=sys.stderr)
    return code


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("a command is required: scenario, evolve, sweep or validate")
        return args.func(args)
    except UsageError as exc:
        return _fail("UsageError", exc, 2)
    except SpinRWAError as exc:
        return _fail(type(exc).__name__, exc, 1)
    except (OSError, ValueError) as exc:
        return _fail(type(exc).__name__, exc, 1)


if __name__ == "__main__":
    sys.exit(main())
