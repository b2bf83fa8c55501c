"""Brute-force validators for the closed-form dynamics.

Nothing here imports :mod:`spin_rwa.wigner` or :mod:`spin_rwa.dynamics`. The
lab-frame Schrodinger equation is integrated directly with fixed-step RK4,
and matrix exponentials come from Hermitian eigendecomposition.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateField, StepTooLarge
from .field import FieldConfig
from .spin import SpinQuantum, StateVector, m_values, spin_matrices

MAX_PHASE_PER_STEP = 1e-2


def lab_hamiltonian(spin: SpinQuantum, field: FieldConfig, t: float) -> np.ndarray:
    """``H(t) = omega0 S_z + omega1 (S_x cos(w t) + S_y sin(w t))`` (hbar = 1)."""
    ops = spin_matrices(spin)
    wt = field.omega * t
    return field.omega0 * ops.sz + field.omega1 * (ops.sx * math.cos(wt) + ops.sy * math.sin(wt))


def expm_hermitian(generator: np.ndarray, angle: float) -> np.ndarray:
    """``exp(-i * angle * G)`` for Hermitian ``G`` via ``G = V diag(lam) V^dagger``."""
    lam, vecs = np.linalg.eigh(generator)
    return (vecs * np.exp(-1j * angle * lam)) @ vecs.conj().T


def _rabi_frequency(field: FieldConfig) -> float:
    return math.hypot(field.omega0 - field.omega, field.omega1)


@dataclass(frozen=True)
class IntegratorConfig:
    """Fixed-step fourth-order Runge-Kutta settings."""

    step: float
    method: str = "rk4"

    def validate(self, spin: SpinQuantum, field: FieldConfig) -> None:
        if self.method != "rk4":
            raise ValueError(f"unsupported integrator {self.method!r}")
        if not (self.step > 0 and math.isfinite(self.step)):
            raise StepTooLarge(f"step must be positive and finite, got {self.step!r}")
        limit = MAX_PHASE_PER_STEP * (1 + 1e-12)
        if self.step * abs(field.omega0) > limit:
            raise StepTooLarge(
                f"step*omega0 = {self.step * abs(field.omega0):.3g} exceeds {MAX_PHASE_PER_STEP}"
            )
        if self.step * _rabi_frequency(field) > limit:
            raise StepTooLarge(
                f"step*Omega = {self.step * _rabi_frequency(field):.3g} exceeds {MAX_PHASE_PER_STEP}"
            )

    @classmethod
    def auto(cls, spin: SpinQuantum, field: FieldConfig, phase_per_step: float = 0.01) -> "IntegratorConfig":
        """Step meeting the validity limits and keeping the largest lab-frame
        eigenphase per step below ``phase_per_step`` (max amplitude error
        ~3e-8 over a period for ``s <= 9/2`` at the default)."""
        rates = [abs(field.omega0) / MAX_PHASE_PER_STEP, _rabi_frequency(field) / MAX_PHASE_PER_STEP]
        spectral = spin.s * math.hypot(field.omega0, field.omega1)
        if spectral > 0:
            rates.append(spectral / phase_per_step)
        rate = max(rates)
        return cls(step=1.0 / rate if rate > 0 else 1.0)


def trajectory(spin: SpinQuantum, initial: StateVector, field: FieldConfig, t_final: float,
               checkpoints: int = 1, config: IntegratorConfig | None = None):
    """Integrate ``i dpsi/dt = H(t) psi`` from 0 to ``t_final``.

    Returns ``(times, amplitudes)`` at ``checkpoints + 1`` equally spaced
    times including 0 and ``t_final``. The step is shrunk so that every
    checkpoint is hit exactly.
    """
    if initial.spin != spin:
        raise ValueError(f"state belongs to s={initial.spin}, expected s={spin}")
    initial.require_normalized()
    if t_final < 0:
        raise ValueError(f"t_final must be non-negative, got {t_final}")
    if checkpoints < 1:
        raise ValueError("checkpoints must be >= 1")
    if config is None:
        config = IntegratorConfig.auto(spin, field)
    config.validate(spin, field)

    per_segment = max(1, math.ceil(t_final / checkpoints / config.step - 1e-9))
    n_steps = per_segment * checkpoints
    h = t_final / n_steps if t_final > 0 else 0.0

    ops = spin_matrices(spin)
    static = field.omega0 * ops.sz
    drive_x = field.omega1 * ops.sx
    drive_y = field.omega1 * ops.sy
    # drive phases at t_n and t_n + h/2 for every step
    half_grid = field.omega * h * np.arange(2 * n_steps + 1) / 2
    cos_w, sin_w = np.cos(half_grid), np.sin(half_grid)

    def hamiltonian(j):
        return static + cos_w[j] * drive_x + sin_w[j] * drive_y

    psi = initial.amplitudes.astype(complex)
    out = np.empty((checkpoints + 1, spin.dimension()), dtype=complex)
    out[0] = psi
    h_next = hamiltonian(0)
    for n in range(n_steps):
        h_now = h_next
        h_mid = hamiltonian(2 * n + 1)
        h_next = hamiltonian(2 * n + 2)
        k1 = -1j * (h_now @ psi)
        k2 = -1j * (h_mid @ (psi + 0.5 * h * k1))
        k3 = -1j * (h_mid @ (psi + 0.5 * h * k2))
        k4 = -1j * (h_next @ (psi + h * k3))
        psi = psi + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4)
        if (n + 1) % per_segment == 0:
            out[(n + 1) // per_segment] = psi
    times = np.linspace(0.0, t_final, checkpoints + 1)
    return times, out


def integrate(spin: SpinQuantum, initial: StateVector, field: FieldConfig, t_final: float,
              config: IntegratorConfig | None = None) -> StateVector:
    """Lab-frame RK4 state at ``t_final`` starting from ``initial`` at t = 0."""
    _, amps = trajectory(spin, initial, field, t_final, 1, config)
    return StateVector(spin, amps[-1])


def rotating_frame_state(spin: SpinQuantum, initial: StateVector, field: FieldConfig,
                         t: float) -> StateVector:
    """``exp(-i S_z w t) exp(-i H_eff t) psi(0)`` with ``H_eff`` exponentiated numerically.

    Valid for any ``omega1``, including zero.
    """
    ops = spin_matrices(spin)
    h_eff = (field.omega0 - field.omega) * ops.sz + field.omega1 * ops.sx
    psi = expm_hermitian(h_eff, t) @ initial.amplitudes
    return StateVector(spin, np.exp(-1j * m_values(spin) * field.omega * t) * psi)


def rotation_identity_residual(spin: SpinQuantum, phi: float) -> float:
    """``max |exp(-i S_z phi) S_x exp(+i S_z phi) - (S_x cos phi + S_y sin phi)|``."""
    ops = spin_matrices(spin)
    rot = expm_hermitian(ops.sz, phi)
    lhs = rot @ ops.sx @ rot.conj().T
    rhs = ops.sx * math.cos(phi) + ops.sy * math.sin(phi)
    return float(np.max(np.abs(lhs - rhs)))


def y_rotation_identity_residual(spin: SpinQuantum, beta: float) -> float:
    """Residual of the y-rotation laws
    ``exp(+i beta S_y) S_x exp(-i beta S_y) = S_x cos b + S_z sin b`` and
    ``exp(+i beta S_y) S_z exp(-i beta S_y) = S_z cos b - S_x sin b``."""
    ops = spin_matrices(spin)
    rot = expm_hermitian(ops.sy, -beta)
    sx_rot = rot @ ops.sx @ rot.conj().T
    sz_rot = rot @ ops.sz @ rot.conj().T
    c, s = math.cos(beta), math.sin(beta)
    return float(max(np.max(np.abs(sx_rot - (ops.sx * c + ops.sz * s))),
                     np.max(np.abs(sz_rot - (ops.sz * c - ops.sx * s)))))


def frame_factorization_residual(spin: SpinQuantum, field: FieldConfig, t: float) -> float:
    """``max |H(t) - exp(-i S_z w t) (omega0 S_z + omega1 S_x) exp(+i S_z w t)|``."""
    ops = spin_matrices(spin)
    rot = expm_hermitian(ops.sz, field.omega * t)
    static = field.omega0 * ops.sz + field.omega1 * ops.sx
    return float(np.max(np.abs(lab_hamiltonian(spin, field, t) - rot @ static @ rot.conj().T)))


def rotated_diagonalization_residual(spin: SpinQuantum, field: FieldConfig) -> float:
    """``max |exp(+i b S_y) H_eff exp(-i b S_y) - Omega S_z|`` with
    ``b = atan2(omega1, omega0 - omega)``."""
    if not field.omega1 > 0:
        raise DegenerateField(f"omega1 must be > 0, got {field.omega1!r}")
    ops = spin_matrices(spin)
    detuning = field.omega0 - field.omega
    beta = math.atan2(field.omega1, detuning)
    big_omega = math.hypot(detuning, field.omega1)
    h_eff = detuning * ops.sz + field.omega1 * ops.sx
    rot = expm_hermitian(ops.sy, -beta)
    return float(np.max(np.abs(rot @ h_eff @ rot.conj().T - big_omega * ops.sz)))


def rabi_transfer(field: FieldConfig, t: float) -> float:
    """Two-level flip probability ``(omega1/Omega)^2 sin^2(Omega t / 2)``."""
    big_omega = _rabi_frequency(field)
    return (field.omega1 / big_omega) ** 2 * math.sin(big_omega * t / 2) ** 2


def majorana_probabilities(spin: SpinQuantum, field: FieldConfig, t: float) -> np.ndarray:
    """Substate probabilities from the stretched state ``m = s``:
    ``binom(2s, s-m) p^(s-m) (1-p)^(s+m)`` with ``p`` the two-level transfer."""
    p = rabi_transfer(field, t)
    n = spin.twice_s
    return np.array([math.comb(n, k) * p ** k * (1 - p) ** (n - k) for k in range(n + 1)])


def global_phase_distance(a: np.ndarray, b: np.ndarray) -> float:
    """``min_phi max_m |a_m - exp(i phi) b_m|`` with phi fixed by the overlap."""
    overlap = np.vdot(b, a)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return float(np.max(np.abs(a - phase * b)))
