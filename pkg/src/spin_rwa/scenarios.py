"""Named figure scenarios, frequency sweeps and key=value run configs."""
from __future__ import annotations

import math
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field as dataclass_field, replace
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .dynamics import TimeSeries, evolve_series
from .errors import ConfigError, UnknownScenario
from .field import FieldConfig
from .spin import SpinQuantum, StateVector

DRIVES = ("resonance", "peak", "off")
PANELS = {"top": "resonance", "middle": "peak", "bottom": "off"}
DEFAULT_RATIO = 0.01
DEFAULT_SAMPLES = 201

# (twice_s, initial probabilities in descending m) per figure
_FIGURES = {
    1: (1, (1.0, 0.0)),
    2: (1, (1 / 3, 2 / 3)),
    3: (2, (1 / 3, 1 / 3, 1 / 3)),
    4: (2, (1.0, 0.0, 0.0)),
    5: (2, (0.0, 1.0, 0.0)),
    6: (4, (0.2,) * 5),
    7: (7, (1 / 8,) * 8),
    8: (9, (0.1,) * 10),
}

SCENARIO_IDS = tuple(f"fig{n}-{panel}" for n in _FIGURES for panel in PANELS)


@dataclass(frozen=True)
class Scenario:
    """One run: spin, initial occupation, drive and sampling.

    Exactly one of ``drive`` (a name from :data:`DRIVES`) or ``omega`` is set.
    The static field is fixed at ``omega0 = 1``; ``ratio`` is ``omega1 / omega0``.
    """

    name: str
    spin: SpinQuantum
    probabilities: tuple[float, ...]
    drive: str | None = "resonance"
    omega: float | None = None
    ratio: float = DEFAULT_RATIO
    n_periods: float = 1.0
    samples: int = DEFAULT_SAMPLES

    def __post_init__(self):
        probs = tuple(float(p) for p in self.probabilities)
        object.__setattr__(self, "probabilities", probs)
        if len(probs) != self.spin.dimension():
            raise ConfigError(
                f"{self.name}: expected {self.spin.dimension()} probabilities for "
                f"s={self.spin}, got {len(probs)}"
            )
        if any(p < 0 or not math.isfinite(p) for p in probs):
            raise ConfigError(f"{self.name}: probabilities must be finite and non-negative")
        if abs(math.fsum(probs) - 1.0) > 1e-12:
            raise ConfigError(f"{self.name}: probabilities sum to {math.fsum(probs)!r}, not 1")
        if (self.drive is None) == (self.omega is None):
            raise ConfigError(f"{self.name}: give exactly one of drive or omega")
        if self.drive is not None and self.drive not in DRIVES:
            raise ConfigError(f"{self.name}: unknown drive {self.drive!r}; expected one of {DRIVES}")
        if not self.ratio > 0:
            raise ConfigError(f"{self.name}: ratio must be positive, got {self.ratio!r}")
        if self.samples < 2:
            raise ConfigError(f"{self.name}: samples must be >= 2, got {self.samples}")
        if not self.n_periods > 0:
            raise ConfigError(f"{self.name}: periods must be positive, got {self.n_periods}")

    def field(self) -> FieldConfig:
        if self.drive is not None:
            return FieldConfig.from_drive(self.drive, self.ratio, omega0=1.0)
        return FieldConfig(1.0, self.ratio, self.omega)

    def initial_state(self) -> StateVector:
        return StateVector.from_probabilities(self.spin, self.probabilities)


def builtin_scenario(scenario_id: str) -> Scenario:
    """Scenario ``figN-{top,middle,bottom}`` for N in 1..8."""
    match = re.fullmatch(r"fig([1-8])-(top|middle|bottom)", scenario_id.strip())
    if match is None:
        raise UnknownScenario(
            f"unknown scenario {scenario_id!r}; expected figN-top|middle|bottom with N in 1..8"
        )
    twice_s, probs = _FIGURES[int(match.group(1))]
    return Scenario(
        name=scenario_id.strip(),
        spin=SpinQuantum(twice_s),
        probabilities=probs,
        drive=PANELS[match.group(2)],
    )


def run_scenario(scenario: Scenario) -> TimeSeries:
    return evolve_series(
        scenario.spin,
        scenario.initial_state(),
        scenario.field(),
        n_periods=scenario.n_periods,
        samples=scenario.samples,
    )


# key=value configuration files

_CONFIG_KEYS = {"name", "spin", "init", "drive", "omega", "ratio", "periods", "samples"}


def parse_config(text: str) -> dict[str, str]:
    """Parse ``key = value`` lines; ``#`` starts a comment, blank lines are skipped."""
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        key = key.strip().lower()
        if not sep or not key:
            raise ConfigError(f"line {lineno}: expected key=value, got {raw.strip()!r}")
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}; known keys {sorted(_CONFIG_KEYS)}")
        values[key] = value.strip()
    return values


def load_config(path) -> dict[str, str]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from exc
    return parse_config(text)


def parse_probabilities(text: str, spin: SpinQuantum) -> tuple[float, ...]:
    """``p1,p2,...`` in descending m, or one of ``stretched`` / ``uniform``.

    Entries may be fractions such as ``1/3``.
    """
    text = text.strip().lower()
    dim = spin.dimension()
    if text == "stretched":
        return (1.0,) + (0.0,) * (dim - 1)
    if text == "uniform":
        return (1.0 / dim,) * dim
    try:
        return tuple(float(_fraction(part)) for part in text.split(","))
    except ValueError as exc:
        raise ConfigError(f"cannot parse initial probabilities {text!r}") from exc


def _fraction(text: str) -> float:
    num, sep, den = text.strip().partition("/")
    return float(num) / float(den) if sep else float(num)


def _get(values: Mapping[str, object], key: str, default):
    value = values.get(key)
    return default if value is None or value == "" else value


def scenario_from_mapping(values: Mapping[str, object]) -> Scenario:
    """Build a scenario from config-file keys (already merged with CLI overrides)."""
    if "spin" not in values or values["spin"] in (None, ""):
        raise ConfigError("missing required key 'spin'")
    spin = SpinQuantum.from_value(values["spin"])
    init = values.get("init") or "stretched"
    probs = init if isinstance(init, tuple) else parse_probabilities(str(init), spin)
    omega = values.get("omega")
    drive = values.get("drive")
    try:
        if omega not in (None, ""):
            omega, drive = float(omega), None
        else:
            omega, drive = None, (drive or "resonance")
        return Scenario(
            name=str(_get(values, "name", "custom")),
            spin=spin,
            probabilities=probs,
            drive=drive,
            omega=omega,
            ratio=float(_get(values, "ratio", DEFAULT_RATIO)),
            n_periods=float(_get(values, "periods", 1.0)),
            samples=int(_get(values, "samples", DEFAULT_SAMPLES)),
        )
    except ConfigError:
        raise
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def with_sampling(scenario: Scenario, samples: int | None = None,
                  n_periods: float | None = None) -> Scenario:
    changes = {}
    if samples is not None:
        changes["samples"] = samples
    if n_periods is not None:
        changes["n_periods"] = n_periods
    return replace(scenario, **changes) if changes else scenario


# frequency sweeps

@dataclass(frozen=True, eq=False)
class ResonanceProfile:
    """Largest transfer out of the initial state over one period, per drive frequency.

    ``target`` is the ``twice_m`` whose population is tracked, or None when
    the transfer is ``1 - |<psi(0)|psi(t)>|^2``.
    """

    omegas: np.ndarray = dataclass_field(repr=False)
    peak_transfer: np.ndarray = dataclass_field(repr=False)
    target: int | None = None


def _stretched_target(initial: StateVector) -> int | None:
    spin = initial.spin
    probs = initial.probabilities()
    for twice_m in (spin.twice_s, -spin.twice_s):
        if abs(probs[spin.index(twice_m)] - 1.0) <= 1e-12:
            return -twice_m
    return None


def _peak_transfer(initial: StateVector, field: FieldConfig, samples: int,
                   target: int | None) -> float:
    series = evolve_series(initial.spin, initial, field, 1.0, samples, keep_amplitudes=True)
    if target is not None:
        transfer = series.column(target)
    else:
        overlap = series.amplitudes @ initial.amplitudes.conj()
        transfer = 1.0 - np.abs(overlap) ** 2
    return float(np.clip(transfer.max(), 0.0, 1.0))


def frequency_sweep(spin: SpinQuantum, initial: StateVector, omega_from: float, omega_to: float,
                    n_points: int, samples_per_period: int = DEFAULT_SAMPLES,
                    ratio: float = DEFAULT_RATIO, omega0: float = 1.0,
                    target: int | None = None, workers: int | None = None) -> ResonanceProfile:
    """Sample the resonance profile on ``n_points`` uniform drive frequencies.

    Each point is evaluated on ``samples_per_period`` reduced times over one
    period; an odd count includes ``tau = 1/2``, where transfer from a
    stretched state peaks. Points are independent and are spread over
    ``workers`` threads when given.
    """
    if n_points < 2:
        raise ValueError(f"n_points must be >= 2, got {n_points}")
    if initial.spin != spin:
        raise ValueError(f"state belongs to s={initial.spin}, expected s={spin}")
    initial.require_normalized()
    if target is None:
        target = _stretched_target(initial)
    omegas = np.linspace(omega_from, omega_to, n_points)
    fields = [FieldConfig(omega0, ratio * omega0, w) for w in omegas]

    def point(f):
        return _peak_transfer(initial, f, samples_per_period, target)

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            peaks = list(pool.map(point, fields))
    else:
        peaks = [point(f) for f in fields]
    return ResonanceProfile(omegas, np.array(peaks), target)


def all_scenarios(ids: Sequence[str] = SCENARIO_IDS) -> list[Scenario]:
    return [builtin_scenario(i) for i in ids]
