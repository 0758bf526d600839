"""Command-line front end.

Exit codes: 0 success, 1 failed property check, 2 usage error, 3 numerical
failure.  Any flag may also come from ``--config FILE`` (``key = value`` lines,
keys spelled like the long flags); flags on the command line win.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from parrondo_lab import TOOL_NAME, __version__, checks, classical, linalg, quantum, sweep
from parrondo_lab.errors import NumericalError, ParameterError
from parrondo_lab.quantum import CoinParams, GameAConfig, GameBConfig, InitialStateSpec, ParrondoConfig

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2, 3

# radians; the standard configuration
ANGLE_DEFAULTS = {"phiA": 0.0, "thetaA": math.pi / 2, "phiB": math.pi / 2, "thetaB": 0.0, "phiW": 0.0, "thetaW": math.pi / 2}
ANGLE_FLAGS = tuple(ANGLE_DEFAULTS)


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def _add_classical_params(p):
    p.add_argument("--M", type=int, default=3, help="cycle length (>= 3)")
    p.add_argument("--eps1", type=float, default=None, help="bias at site 0 (default 0.4)")
    p.add_argument("--eps2", type=float, default=0.25, help="bias at the other sites")


def _add_quantum_params(p):
    for name in ANGLE_FLAGS:
        p.add_argument(f"--{name}", type=float, default=None, help=f"default {ANGLE_DEFAULTS[name] / math.pi:g} pi")
    p.add_argument("--qW", type=float, default=0.2, help="game-A probability of the game coin W")
    p.add_argument("--pi-units", action="store_true", help="angles are given in units of pi")
    p.add_argument("--null-config", action="store_true", help="thetaA=thetaB=pi/2, phiA=phiB=0")
    p.add_argument("--random-W", action="store_true", help="draw (qW, phiW, thetaW) at random from --seed")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--walker-site", type=int, default=0)
    p.add_argument("--coin-sign", type=int, choices=(1, -1), default=1)
    p.add_argument("--game-coin-sign", type=int, choices=(1, -1), default=1)
    p.add_argument("--mixed-coin", action="store_true", help="walk coin starts in I/2")
    p.add_argument("--mixed-game-coin", action="store_true", help="game coin starts in I/2")
    p.add_argument("--method", choices=("spectral", "cesaro"), default="spectral")
    p.add_argument("--T", type=int, default=100000, help="horizon of the cesaro average")
    p.add_argument("--phase-tol", type=float, default=linalg.DEFAULT_PHASE_TOL)


def _add_output(p, formats=("text", "json")):
    p.add_argument("-o", "--output", default=None, help="write to this file instead of stdout")
    p.add_argument("--format", choices=formats, default=formats[0])


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="parrondo-lab", description="Classical and quantum Parrondo games on cycles.")
    parser.add_argument("--version", action="version", version=f"{TOOL_NAME} {__version__}")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)

    p = sub.add_parser("classical", help="stationary distribution and current of game A, B or C")
    p.add_argument("--config", default=None)
    p.add_argument("--game", choices=("A", "B", "C"), default="C")
    _add_classical_params(p)
    p.add_argument("--pA", type=float, default=0.5, help="probability of playing game A (game C)")
    p.add_argument("--fair-eps1", action="store_true", help="set eps1 so that game B is fair (numeric for M != 3)")
    _add_output(p)

    p = sub.add_parser("quantum", help="long-time averaged current of quantum game A, B or C")
    p.add_argument("--config", default=None)
    p.add_argument("--game", choices=("A", "B", "C"), default="C")
    _add_classical_params(p)
    _add_quantum_params(p)
    _add_output(p)

    p = sub.add_parser("figure", help="write the data grid of one figure")
    p.add_argument("--config", default=None)
    p.add_argument("name", help=f"one of {', '.join(sweep.FIGURES)}")
    p.add_argument("--steps-1d", type=int, default=sweep.DEFAULT_1D_STEPS)
    p.add_argument("--steps-2d", type=int, default=sweep.DEFAULT_2D_STEPS)
    p.add_argument("--method", choices=("spectral", "cesaro"), default="spectral")
    p.add_argument("--T", type=int, default=100000)
    p.add_argument("--phase-tol", type=float, default=linalg.DEFAULT_PHASE_TOL)
    _add_output(p, ("csv", "json"))

    p = sub.add_parser("sweep", help="custom 1-D or 2-D sweep")
    p.add_argument("--config", default=None)
    p.add_argument("--game", choices=("classical", "A", "B", "C"), default="C")
    p.add_argument("--axis", action="append", default=None, metavar="NAME:START:STOP:STEPS")
    _add_classical_params(p)
    p.add_argument("--pA", type=float, default=0.5)
    _add_quantum_params(p)
    _add_output(p, ("csv", "json"))

    p = sub.add_parser("fair", help="eps1 that makes classical game B fair")
    p.add_argument("--config", default=None)
    p.add_argument("--M", type=int, default=3)
    p.add_argument("--eps2", type=float, default=0.25)
    _add_output(p)

    p = sub.add_parser("check", help="run the randomized invariant suite")
    p.add_argument("--config", default=None)
    p.add_argument("--samples", type=int, default=6)
    p.add_argument("--seed", type=int, default=2024)
    p.add_argument("--perturb-shift", type=float, default=0.0, help=argparse.SUPPRESS)
    _add_output(p, ("json",))
    return parser


def _config_tokens(path: str) -> list[str]:
    """Translate a ``key = value`` file into command-line tokens."""
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from None
    tokens = []
    for n, line in enumerate(lines, 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{n}: expected 'key = value'")
        key, value = (s.strip() for s in line.split("=", 1))
        flag = "--" + key.lstrip("-")
        if value.lower() in ("true", "yes", "on"):
            tokens.append(flag)
        elif value.lower() in ("false", "no", "off"):
            continue
        elif key == "axis":
            for item in value.split(","):
                tokens += [flag, item.strip()]
        else:
            tokens += [flag, value]
    return tokens


def parse_args(argv: list[str]) -> argparse.Namespace:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command is None:
        raise UsageError(parser.format_usage().strip())
    if getattr(args, "config", None):
        # file values first, so that explicit flags override them
        cmd_index = argv.index(args.command)
        argv = argv[: cmd_index + 1] + _config_tokens(args.config) + argv[cmd_index + 1 :]
        args = parser.parse_args(argv)
    if hasattr(args, "pi_units"):
        for name in ANGLE_FLAGS:
            value = getattr(args, name)
            if value is None:
                value = ANGLE_DEFAULTS[name]
            elif args.pi_units:
                value *= math.pi
            setattr(args, name, value)
    return args


def _check_positive(name: str, value, minimum=1):
    if value < minimum:
        raise ParameterError(f"--{name} must be >= {minimum}, got {value}")


def _reduce_angles(args):
    for name in ANGLE_FLAGS:
        value = getattr(args, name)
        if not (math.isfinite(value) and 0.0 <= value <= 2 * math.pi):
            raise ParameterError(f"--{name}={value} must lie in [0, 2*pi] (or [0, 2] with --pi-units)")


def quantum_config(args):
    """Game configuration described by the quantum flags."""
    _reduce_angles(args)
    eps1 = 0.4 if args.eps1 is None else args.eps1
    if args.null_config:
        args.phiA, args.thetaA, args.phiB, args.thetaB = 0.0, math.pi / 2, 0.0, math.pi / 2
    ga = GameAConfig(args.M, args.phiA, args.thetaA)
    gb = GameBConfig(args.M, eps1, args.eps2, args.phiB, args.thetaB)
    if args.game == "A":
        return ga
    if args.game == "B":
        return gb
    if args.random_W:
        w = checks.random_coin(np.random.default_rng(args.seed))
    else:
        if not 0.0 <= args.qW <= 1.0:
            raise ParameterError(f"--qW={args.qW} must lie in [0, 1]")
        w = CoinParams(args.qW, args.phiW, args.thetaW)
    return ParrondoConfig(ga, gb, w)


def initial_spec(args) -> InitialStateSpec:
    return InitialStateSpec(args.walker_site, args.coin_sign, args.game_coin_sign, args.mixed_coin, args.mixed_game_coin)


def _emit(args, text: str) -> None:
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def cmd_classical(args) -> int:
    if not 0.0 <= args.pA <= 1.0:
        raise ParameterError(f"--pA={args.pA} must lie in [0, 1]")
    classical.ClassicalGameParams(args.M, 0.0, args.eps2)
    if args.fair_eps1:
        args.eps1 = classical.fair_eps1(args.eps2) if args.M == 3 else classical.fair_eps1_numeric(args.M, args.eps2)
    eps1 = 0.4 if args.eps1 is None else args.eps1
    params = classical.ClassicalGameParams(args.M, eps1, args.eps2)
    pA = {"A": 1.0, "B": 0.0, "C": args.pA}[args.game]
    L = classical.game_matrix(params, pA)
    res = classical.current(L, classical.stationary(L))
    report = {
        "game": args.game,
        "M": args.M,
        "eps1": eps1,
        "eps2": args.eps2,
        "pA": pA,
        "stationary": res.rho.tolist(),
        "current_matrix": res.current_matrix.tolist(),
        "scalar_current": res.scalar_current,
    }
    if args.format == "json":
        _emit(args, json.dumps(report, indent=2) + "\n")
        return EXIT_OK
    lines = [
        f"game {args.game}  M={args.M}  eps1={_fmt(eps1)}  eps2={_fmt(args.eps2)}  pA={_fmt(pA)}",
        "stationary distribution: " + " ".join(_fmt(x) for x in res.rho),
        "current matrix j[x, y] (net flow y -> x):",
    ]
    lines += ["  " + " ".join(f"{v: .17e}" for v in row) for row in res.current_matrix]
    lines.append(f"scalar current: {_fmt(res.scalar_current)}")
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def cmd_quantum(args) -> int:
    if args.T < 1:
        raise ParameterError(f"--T must be >= 1, got {args.T}")
    cfg = quantum_config(args)
    init = initial_spec(args)
    U, rho0, O = quantum.game_parts(cfg, init)
    dec = linalg.eig_unitary(U, args.phase_tol)
    if args.method == "spectral":
        res = quantum.current_spectral(U, rho0, O, args.phase_tol, decomposition=dec)
    else:
        res = quantum.current_cesaro(U, rho0, O, args.T)
    report = {
        "game": args.game,
        "config": repr(cfg),
        "initial_state": repr(init),
        "dim": U.shape[0],
        "eigenphases": [c.phase for c in dec.clusters],
        "multiplicities": dec.multiplicities,
        "method": res.method,
        "T": res.T,
        "j": res.j,
        "fingerprint": quantum.fingerprint(cfg, init),
    }
    if args.format == "json":
        _emit(args, json.dumps(report, indent=2) + "\n")
        return EXIT_OK
    lines = [f"{cfg!r}", f"{init!r}", f"dimension {U.shape[0]}, {len(dec.clusters)} eigenspaces", "phase                    multiplicity"]
    lines += [f"{c.phase: .17f}  {c.multiplicity}" for c in dec.clusters]
    method = "spectral" if res.T is None else f"cesaro T={res.T}"
    lines.append(f"current j ({method}): {_fmt(res.j)}")
    _emit(args, "\n".join(lines) + "\n")
    return EXIT_OK


def _write_sweep(args, result) -> None:
    _emit(args, sweep.to_csv(result) if args.format == "csv" else sweep.to_json(result))


def cmd_figure(args) -> int:
    _check_positive("steps-1d", args.steps_1d, 2)
    _check_positive("steps-2d", args.steps_2d, 2)
    spec = sweep.figure_preset(args.name, args.steps_1d, args.steps_2d)
    if args.method != "spectral" or args.phase_tol != spec.phase_tol:
        spec = sweep.SweepSpec(spec.base, spec.axes, args.method, args.T, spec.init, args.phase_tol, spec.name)
    _write_sweep(args, sweep.run_sweep(spec))
    return EXIT_OK


def _parse_axis(text: str) -> sweep.Axis:
    parts = text.split(":")
    if len(parts) != 4:
        raise ParameterError(f"--axis {text!r}: expected NAME:START:STOP:STEPS")
    name, start, stop, steps = parts
    try:
        start_v, stop_v, steps_v = float(start), float(stop), int(steps)
    except ValueError:
        raise ParameterError(f"--axis {text!r}: START/STOP must be numbers and STEPS an integer") from None
    return sweep.Axis(name, start_v, stop_v, steps_v)


def cmd_sweep(args) -> int:
    if not args.axis:
        raise ParameterError("--axis is required (once or twice)")
    axes = tuple(_parse_axis(a) for a in args.axis)
    if args.pi_units:
        axes = tuple(
            sweep.Axis(a.name, a.start * math.pi, a.stop * math.pi, a.steps) if a.name in ANGLE_FLAGS else a for a in axes
        )
    if args.game == "classical":
        eps1 = 0.4 if args.eps1 is None else args.eps1
        base = classical.ClassicalConfig(args.M, eps1, args.eps2, args.pA)
    else:
        base = quantum_config(args)
    spec = sweep.SweepSpec(base, axes, args.method, args.T if args.method == "cesaro" else None, initial_spec(args), args.phase_tol)
    _write_sweep(args, sweep.run_sweep(spec))
    return EXIT_OK


def cmd_fair(args) -> int:
    numeric = classical.fair_eps1_numeric(args.M, args.eps2)
    report = {"M": args.M, "eps2": args.eps2, "eps1_numeric": numeric}
    if args.M == 3:
        report["eps1_closed_form"] = classical.fair_eps1(args.eps2)
    report["scalar_current"] = classical.scalar_current(classical.ClassicalGameParams(args.M, numeric, args.eps2))
    if args.format == "json":
        _emit(args, json.dumps(report, indent=2) + "\n")
    else:
        _emit(args, "".join(f"{k}: {v if isinstance(v, int) else _fmt(v)}\n" for k, v in report.items()))
    return EXIT_OK


def cmd_check(args) -> int:
    _check_positive("samples", args.samples)
    results = checks.run_checks(args.samples, args.seed, args.perturb_shift)
    summary = checks.summary(results)
    _emit(args, json.dumps(summary, indent=2) + "\n")
    return EXIT_OK if summary["passed"] else EXIT_CHECK_FAILED


COMMANDS = {
    "classical": cmd_classical,
    "quantum": cmd_quantum,
    "figure": cmd_figure,
    "sweep": cmd_sweep,
    "fair": cmd_fair,
    "check": cmd_check,
}


def main(argv: list[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse_args(argv)
        return COMMANDS[args.command](args)
    except SystemExit as exc:  # --help / --version
        return int(exc.code or 0)
    except (UsageError, ParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
