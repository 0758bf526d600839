"""Deterministic 1-D and 2-D parameter sweeps and their serialization.

Grids are stored row-major with the first axis as rows.  Every grid point is
an independent evaluation written into a pre-indexed slot, so the output does
not depend on evaluation order or on the number of worker threads.
"""

from __future__ import annotations

import dataclasses
import io
import itertools
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from parrondo_lab import TOOL_NAME, __version__, classical, linalg, quantum
from parrondo_lab.classical import ClassicalConfig
from parrondo_lab.errors import NumericalError, ParameterError
from parrondo_lab.quantum import CoinParams, GameAConfig, GameBConfig, InitialStateSpec, ParrondoConfig

THREADS_ENV = "PARRONDO_LAB_THREADS"
DEFAULT_1D_STEPS = 101
DEFAULT_2D_STEPS = 65

# parameter name -> (path of dataclass fields, per base type)
_PATHS = {
    ClassicalConfig: {"pA": ("pA",), "eps1": ("eps1",), "eps2": ("eps2",)},
    GameAConfig: {"phiA": ("phi",), "thetaA": ("theta",)},
    GameBConfig: {"phiB": ("phi",), "thetaB": ("theta",), "eps1": ("eps1",), "eps2": ("eps2",)},
    ParrondoConfig: {
        "phiA": ("game_a", "phi"),
        "thetaA": ("game_a", "theta"),
        "phiB": ("game_b", "phi"),
        "thetaB": ("game_b", "theta"),
        "eps1": ("game_b", "eps1"),
        "eps2": ("game_b", "eps2"),
        "qW": ("coin_w", "q"),
        "phiW": ("coin_w", "phi"),
        "thetaW": ("coin_w", "theta"),
    },
}
PARAMETERS = ("pA", "qW", "phiA", "thetaA", "phiB", "thetaB", "phiW", "thetaW", "eps1", "eps2")


class SweepError(NumericalError):
    def __init__(self, message: str, coordinates: dict[str, float]):
        super().__init__(f"{message} at {coordinates}")
        self.coordinates = coordinates


@dataclass(frozen=True)
class Axis:
    """Uniform grid with inclusive endpoints."""

    name: str
    start: float
    stop: float
    steps: int

    def __post_init__(self):
        if self.name not in PARAMETERS:
            raise ParameterError(f"unknown sweep parameter {self.name!r}; choose from {', '.join(PARAMETERS)}")
        if not (math.isfinite(self.start) and math.isfinite(self.stop) and self.start < self.stop):
            raise ParameterError(f"axis {self.name}: need finite start < stop, got {self.start}..{self.stop}")
        if isinstance(self.steps, bool) or int(self.steps) != self.steps or self.steps < 2:
            raise ParameterError(f"axis {self.name}: steps must be an integer >= 2, got {self.steps}")

    def values(self) -> np.ndarray:
        k = np.arange(self.steps)
        return self.start + k * (self.stop - self.start) / (self.steps - 1)


@dataclass(frozen=True)
class SweepSpec:
    base: object
    axes: tuple[Axis, ...]
    method: str = "spectral"
    T: int | None = None
    init: InitialStateSpec = field(default_factory=InitialStateSpec)
    phase_tol: float = linalg.DEFAULT_PHASE_TOL
    name: str = "custom"

    def __post_init__(self):
        object.__setattr__(self, "axes", tuple(self.axes))
        paths = _PATHS.get(type(self.base))
        if paths is None:
            raise ParameterError(f"unsupported sweep base {type(self.base).__name__}")
        if len(self.axes) not in (1, 2):
            raise ParameterError(f"a sweep has 1 or 2 axes, got {len(self.axes)}")
        names = [a.name for a in self.axes]
        if len(set(names)) != len(names):
            raise ParameterError(f"duplicate sweep axes {names}")
        for a in self.axes:
            if a.name not in paths:
                raise ParameterError(f"parameter {a.name!r} does not exist for {type(self.base).__name__}")
        if self.method not in ("spectral", "cesaro"):
            raise ParameterError(f"unknown method {self.method!r} (spectral | cesaro)")
        if self.method == "cesaro" and (self.T is None or self.T < 1):
            raise ParameterError("cesaro sweeps need a horizon T >= 1")
        if not self.phase_tol > 0:
            raise ParameterError("phase_tol must be positive")

    @property
    def is_classical(self) -> bool:
        return isinstance(self.base, ClassicalConfig)

    @property
    def shape(self) -> tuple[int, ...]:
        return tuple(a.steps for a in self.axes)


@dataclass(frozen=True)
class SweepResult:
    spec: SweepSpec
    values: np.ndarray
    provenance: dict

    def axis_values(self) -> list[np.ndarray]:
        return [a.values() for a in self.spec.axes]


def with_parameter(base, name: str, value: float):
    """Copy of ``base`` with the named sweep parameter replaced."""
    try:
        path = _PATHS[type(base)][name]
    except KeyError:
        raise ParameterError(f"parameter {name!r} does not exist for {type(base).__name__}") from None
    if len(path) == 1:
        return dataclasses.replace(base, **{path[0]: value})
    inner = getattr(base, path[0])
    return dataclasses.replace(base, **{path[0]: dataclasses.replace(inner, **{path[1]: value})})


def point_config(spec: SweepSpec, index: tuple[int, ...]):
    cfg = spec.base
    for axis, k in zip(spec.axes, index):
        cfg = with_parameter(cfg, axis.name, float(axis.values()[k]))
    return cfg


def _evaluator(spec: SweepSpec):
    if spec.is_classical:

        def evaluate(cfg: ClassicalConfig) -> float:
            return classical.scalar_current(cfg.params, cfg.pA)

        return evaluate

    combined = isinstance(spec.base, ParrondoConfig)
    rho0 = quantum.initial_state(spec.init, spec.base.M, combined)
    obs = quantum.observable_current(spec.base.M, combined)
    build = {GameAConfig: quantum.build_UA, GameBConfig: quantum.build_UB, ParrondoConfig: quantum.build_U}[
        type(spec.base)
    ]

    def evaluate(cfg) -> float:
        U = build(cfg)
        if spec.method == "spectral":
            return quantum.current_spectral(U, rho0, obs, spec.phase_tol).j
        return quantum.current_cesaro(U, rho0, obs, spec.T).j

    return evaluate


def thread_count() -> int:
    raw = os.environ.get(THREADS_ENV, "1")
    try:
        n = int(raw)
    except ValueError:
        raise ParameterError(f"{THREADS_ENV}={raw!r} is not an integer") from None
    if n < 1:
        raise ParameterError(f"{THREADS_ENV} must be >= 1")
    return n


def run_sweep(spec: SweepSpec, threads: int | None = None) -> SweepResult:
    """Evaluate the current at every grid point of ``spec``."""
    threads = thread_count() if threads is None else threads
    evaluate = _evaluator(spec)
    indices = list(itertools.product(*(range(n) for n in spec.shape)))
    out = np.empty(len(indices))

    def task(slot: int) -> None:
        idx = indices[slot]
        try:
            cfg = point_config(spec, idx)
            value = evaluate(cfg)
        except (NumericalError, ParameterError) as exc:
            coords = {a.name: float(a.values()[k]) for a, k in zip(spec.axes, idx)}
            raise SweepError(str(exc), coords) from exc
        if not math.isfinite(value) or (not spec.is_classical and abs(value) > 1.0 + 1e-12):
            coords = {a.name: float(a.values()[k]) for a, k in zip(spec.axes, idx)}
            raise SweepError(f"current {value} out of range", coords)
        out[slot] = value

    if threads == 1:
        for slot in range(len(indices)):
            task(slot)
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            for f in [pool.submit(task, s) for s in range(len(indices))]:
                f.result()

    values = out.reshape(spec.shape)
    values.setflags(write=False)
    provenance = {
        "tool": TOOL_NAME,
        "version": __version__,
        "method": spec.method if not spec.is_classical else "stationary",
        "T": spec.T,
        "phase_tol": spec.phase_tol,
        "stationary_tol": classical.STATIONARY_TOL,
    }
    return SweepResult(spec, values, provenance)


def figure_preset(name: str, steps_1d: int = DEFAULT_1D_STEPS, steps_2d: int = DEFAULT_2D_STEPS) -> SweepSpec:
    """Sweep reproducing one figure.

    ``fig1`` classical pA curve; ``fig2`` game A over (thetaA, phiA);
    ``fig2b`` game B over (thetaB, phiB); ``fig3`` combined game over qW;
    ``fig4``/``fig5`` combined game over (thetaW, phiW) at qW = 0.2 / 0.8.
    """
    two_pi = 2.0 * math.pi
    if name == "fig1":
        return SweepSpec(ClassicalConfig(3, 0.4, 0.25, 0.0), (Axis("pA", 0.0, 1.0, steps_1d),), name=name)
    if name == "fig2":
        axes = (Axis("thetaA", 0.0, two_pi, steps_2d), Axis("phiA", 0.0, two_pi, steps_2d))
        return SweepSpec(GameAConfig(), axes, name=name)
    if name == "fig2b":
        axes = (Axis("thetaB", 0.0, two_pi, steps_2d), Axis("phiB", 0.0, two_pi, steps_2d))
        return SweepSpec(GameBConfig(), axes, name=name)
    if name == "fig3":
        base = ParrondoConfig(coin_w=CoinParams(0.0, 0.0, math.pi / 2))
        return SweepSpec(base, (Axis("qW", 0.0, 1.0, steps_1d),), name=name)
    if name in ("fig4", "fig5"):
        q = 0.2 if name == "fig4" else 0.8
        axes = (Axis("thetaW", 0.0, two_pi, steps_2d), Axis("phiW", 0.0, two_pi, steps_2d))
        return SweepSpec(ParrondoConfig(coin_w=CoinParams(q, 0.0, 0.0)), axes, name=name)
    raise ParameterError(f"unknown figure preset {name!r}; choose from {', '.join(FIGURES)}")


FIGURES = ("fig1", "fig2", "fig2b", "fig3", "fig4", "fig5")


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def header_line(result: SweepResult) -> str:
    return f"# {TOOL_NAME} v{__version__} preset={result.spec.name} tol={_fmt(result.spec.phase_tol)}"


def to_csv(result: SweepResult) -> str:
    buf = io.StringIO(newline="")
    buf.write(header_line(result) + "\n")
    axes = result.spec.axes
    if len(axes) == 1:
        buf.write(f"{axes[0].name},j\n")
        for x, v in zip(axes[0].values(), result.values):
            buf.write(f"{_fmt(x)},{_fmt(v)}\n")
    else:
        rows, cols = axes[0].values(), axes[1].values()
        buf.write(",".join([f"{axes[0].name}\\{axes[1].name}"] + [_fmt(c) for c in cols]) + "\n")
        for r, line in zip(rows, result.values):
            buf.write(",".join([_fmt(r)] + [_fmt(v) for v in line]) + "\n")
    return buf.getvalue()


def parse_csv(text: str):
    """Inverse of :func:`to_csv`: returns ``(axis_names, axis_values, grid)``."""
    lines = [ln for ln in text.splitlines() if ln and not ln.startswith("#")]
    head = lines[0].split(",")
    body = [[float(x) for x in ln.split(",")] for ln in lines[1:]]
    if head[1] == "j" and len(head) == 2:
        arr = np.array(body)
        return [head[0]], [arr[:, 0]], arr[:, 1]
    names = head[0].split("\\")
    cols = np.array([float(x) for x in head[1:]])
    arr = np.array(body)
    return names, [arr[:, 0], cols], arr[:, 1:]


def _spec_echo(spec: SweepSpec) -> dict:
    return {
        "preset": spec.name,
        "base_type": type(spec.base).__name__,
        "base": dataclasses.asdict(spec.base),
        "axes": [dataclasses.asdict(a) for a in spec.axes],
        "method": spec.method,
        "T": spec.T,
        "init": dataclasses.asdict(spec.init),
        "phase_tol": spec.phase_tol,
    }


def to_json(result: SweepResult) -> str:
    marker = "__VALUES__"
    doc = {
        "spec": _spec_echo(result.spec),
        "shape": list(result.values.shape),
        "values": marker,
        "provenance": result.provenance,
    }
    text = json.dumps(doc, indent=2, sort_keys=True)
    flat = "[" + ", ".join(_fmt(v) for v in result.values.ravel()) + "]"
    return text.replace(json.dumps(marker), flat) + "\n"


def write_result(result: SweepResult, path: str, fmt: str = "csv") -> None:
    text = to_csv(result) if fmt == "csv" else to_json(result)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
