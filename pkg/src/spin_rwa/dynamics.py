"""Exact substate amplitudes of a spin-s multiplet in a rotating transverse field.

The lab-frame Hamiltonian ``omega0 S_z + omega1 (S_x cos wt + S_y sin wt)`` is
removed to the frame rotating with the drive, where it becomes the constant
``H_eff = (omega0 - omega) S_z + omega1 S_x``. A y-rotation by the mixing angle
``beta`` maps ``H_eff`` onto ``Omega S_z``, so the propagator factorizes into
four exponentials and each amplitude is a finite sum::

    C_m(t) = exp(-i m w t) sum_{m', m''} C_{m'}(0) exp(-i m'' Omega t)
             d_{m, m''}(beta) d_{m', m''}(beta)
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field as dataclass_field

import numpy as np

from .errors import DegenerateField
from .field import FieldConfig
from .spin import SpinQuantum, StateVector, m_values, spin_matrices
from .wigner import wigner_d_from_field

__all__ = [
    "FieldConfig",
    "DerivedFrame",
    "TimeSeries",
    "derive_frame",
    "effective_hamiltonian",
    "evolve",
    "evolve_times",
    "evolve_series",
    "probabilities",
    "propagator",
    "adiabatic_evolve",
    "hall_klemm_coefficients",
    "hall_klemm_sum",
]


@dataclass(frozen=True)
class DerivedFrame:
    """Effective precession frequency, mixing angle and probability period."""

    big_omega: float
    beta: float
    period: float

    @property
    def unit_vector(self) -> tuple[float, float]:
        """(x, z) components of the effective field direction."""
        return math.sin(self.beta), math.cos(self.beta)


def derive_frame(field: FieldConfig) -> DerivedFrame:
    """``Omega = sqrt((omega0-omega)^2 + omega1^2)``, ``beta = atan2(omega1, omega0-omega)``
    and ``T = 2 pi / Omega``.

    Raises
    ------
    DegenerateField
        If ``omega1 <= 0``; beta is then 0 or pi and not continuous in the drive.
    """
    if not field.omega1 > 0:
        raise DegenerateField(f"omega1 must be > 0, got {field.omega1!r}")
    big_omega = math.hypot(field.detuning, field.omega1)
    beta = math.atan2(field.omega1, field.detuning)
    return DerivedFrame(big_omega=big_omega, beta=beta, period=2 * math.pi / big_omega)


def effective_hamiltonian(spin: SpinQuantum, field: FieldConfig) -> np.ndarray:
    """Time-independent Hamiltonian in the frame co-rotating with the drive."""
    ops = spin_matrices(spin)
    return field.detuning * ops.sz + field.omega1 * ops.sx


def _check_state(spin: SpinQuantum, state: StateVector, check_norm: bool) -> np.ndarray:
    if state.spin != spin:
        raise ValueError(f"state belongs to s={state.spin}, expected s={spin}")
    if check_norm:
        state.require_normalized()
    return state.amplitudes


def evolve_times(spin: SpinQuantum, initial: StateVector, field: FieldConfig,
                 times, *, t0: float = 0.0, check_norm: bool = True) -> np.ndarray:
    """Amplitudes at every time in ``times``; returns shape ``(len(times), 2s+1)``.

    ``initial`` is the state at ``t0``. For ``t0 != 0`` the drive phase at the
    start time is accounted for, so ``U(t0, t) U(t, t0)`` is the identity.
    """
    c0 = _check_state(spin, initial, check_norm)
    frame = derive_frame(field)
    d = wigner_d_from_field(spin, field).entries
    m = m_values(spin)
    times = np.atleast_1d(np.asarray(times, dtype=float))

    # undo the frame rotation at t0, then project onto the Omega S_z eigenbasis
    rotating = c0 if t0 == 0 else np.exp(1j * m * field.omega * t0) * c0
    weights = d.T @ rotating
    precession = np.exp(-1j * np.outer(times - t0, m) * frame.big_omega)
    frame_phase = np.exp(-1j * np.outer(times, m) * field.omega)
    return frame_phase * ((precession * weights) @ d.T)


def evolve(spin: SpinQuantum, initial: StateVector, field: FieldConfig, t: float,
           *, t0: float = 0.0, check_norm: bool = True) -> StateVector:
    """State at time ``t`` given ``initial`` at ``t0`` (default 0).

    Raises
    ------
    DegenerateField
        If ``field.omega1 <= 0``.
    NotNormalized
        If ``check_norm`` and ``sum |C_m|^2`` is off by more than 1e-9.
    """
    amps = evolve_times(spin, initial, field, [t], t0=t0, check_norm=check_norm)[0]
    return StateVector(spin, amps)


def propagator(spin: SpinQuantum, field: FieldConfig, t: float) -> np.ndarray:
    """Unitary ``U(t, 0) = exp(-i S_z w t) d(beta) exp(-i S_z Omega t) d(beta)^T``."""
    frame = derive_frame(field)
    d = wigner_d_from_field(spin, field).entries
    m = m_values(spin)
    return (np.exp(-1j * m * field.omega * t)[:, None] * d
            * np.exp(-1j * m * frame.big_omega * t)[None, :]) @ d.T


def probabilities(state: StateVector) -> np.ndarray:
    """Occupation probabilities ``|C_m|^2`` in descending-m order."""
    return np.abs(state.amplitudes) ** 2


@dataclass(frozen=True, eq=False)
class TimeSeries:
    """Sampled ``|C_m(tau)|^2`` over reduced time ``tau = t / T``."""

    spin: SpinQuantum
    field: FieldConfig
    taus: np.ndarray = dataclass_field(repr=False)
    probabilities: np.ndarray = dataclass_field(repr=False)
    period: float = 0.0
    amplitudes: np.ndarray | None = dataclass_field(default=None, repr=False)

    @property
    def times(self) -> np.ndarray:
        return self.taus * self.period

    def row_sums(self) -> np.ndarray:
        return self.probabilities.sum(axis=1)

    def column(self, twice_m: int) -> np.ndarray:
        return self.probabilities[:, self.spin.index(twice_m)]

    def __len__(self):
        return len(self.taus)


def evolve_series(spin: SpinQuantum, initial: StateVector, field: FieldConfig,
                  n_periods: float = 1.0, samples: int = 201,
                  keep_amplitudes: bool = False) -> TimeSeries:
    """Probabilities on ``samples`` uniform reduced times spanning ``[0, n_periods]``."""
    if samples < 2:
        raise ValueError(f"samples must be >= 2, got {samples}")
    if not n_periods > 0:
        raise ValueError(f"n_periods must be positive, got {n_periods}")
    frame = derive_frame(field)
    taus = np.linspace(0.0, n_periods, samples)
    amps = evolve_times(spin, initial, field, taus * frame.period)
    probs = np.abs(amps) ** 2
    for array in (taus, probs, amps):
        array.setflags(write=False)
    return TimeSeries(spin, field, taus, probs, frame.period, amps if keep_amplitudes else None)


def adiabatic_evolve(spin: SpinQuantum, initial: StateVector, field: FieldConfig,
                     t: float) -> StateVector:
    """No-transition approximation ``C_m(0) exp(-i m w t) exp(-i m Omega t) |d_mm(beta)|^2``.

    The ``|d_mm|^2`` weight is applied as written, so the result is in general
    not normalized. The second phase accumulates the Berry phase ``m Omega T``
    over one period.
    """
    c0 = _check_state(spin, initial, check_norm=False)
    frame = derive_frame(field)
    d = wigner_d_from_field(spin, field).entries
    m = m_values(spin)
    weight = np.abs(np.diag(d)) ** 2
    phase = np.exp(-1j * m * field.omega * t) * np.exp(-1j * m * frame.big_omega * t)
    return StateVector(spin, c0 * phase * weight)


def hall_klemm_coefficients(spin: SpinQuantum, initial: StateVector,
                            field: FieldConfig) -> np.ndarray:
    """Fourier weights ``K[m, m'']`` with ``C_m(t) exp(+i m w t) = sum_m'' K[m, m''] exp(-i m'' Omega t)``.

    ``K[m, m''] = d_{m, m''} sum_{m'} C_{m'}(0) d_{m', m''}``; rows and columns
    are in descending-m order.
    """
    c0 = _check_state(spin, initial, check_norm=True)
    d = wigner_d_from_field(spin, field).entries
    return d * (d.T @ c0)[None, :]


def hall_klemm_sum(spin: SpinQuantum, coefficients: np.ndarray, field: FieldConfig,
                   t: float) -> np.ndarray:
    """Rebuild ``C_m(t) exp(+i m w t)`` from Hall-Klemm coefficients."""
    frame = derive_frame(field)
    return coefficients @ np.exp(-1j * m_values(spin) * frame.big_omega * t)

