"""Spin multiplets: substate indexing, state vectors and spin matrices.

All matrices use the descending-m basis ordering ``m = s, s-1, ..., -s`` and
hbar = 1, so ``sz`` carries the eigenvalues ``m`` directly.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidSpin, NotNormalized

NORM_TOL = 1e-12


@dataclass(frozen=True, order=True)
class SpinQuantum:
    """Spin quantum number stored exactly as the integer ``2s``."""

    twice_s: int

    def __post_init__(self):
        if isinstance(self.twice_s, bool) or not isinstance(self.twice_s, (int, np.integer)):
            raise InvalidSpin(f"twice_s must be an integer, got {self.twice_s!r}")
        if self.twice_s < 0:
            raise InvalidSpin(f"twice_s must be non-negative, got {self.twice_s}")
        object.__setattr__(self, "twice_s", int(self.twice_s))

    @classmethod
    def from_value(cls, value) -> "SpinQuantum":
        """Build from ``s`` given as a number, Fraction or string ("7/2", "3.5").

        Values that are not exact multiples of 1/2 are rejected.
        """
        if isinstance(value, SpinQuantum):
            return value
        try:
            if isinstance(value, str):
                frac = Fraction(value.strip())
            elif isinstance(value, float):
                if not np.isfinite(value):
                    raise InvalidSpin(f"spin must be finite, got {value!r}")
                frac = Fraction(value)
            else:
                frac = Fraction(value)
        except (ValueError, ZeroDivisionError, TypeError) as exc:
            raise InvalidSpin(f"cannot interpret {value!r} as a spin") from exc
        twice = 2 * frac
        if twice.denominator != 1:
            raise InvalidSpin(f"spin {value!r} is not a multiple of 1/2")
        return cls(int(twice))

    @property
    def s(self) -> float:
        return self.twice_s / 2

    def dimension(self) -> int:
        return self.twice_s + 1

    def substates(self) -> list[int]:
        return enumerate_substates(self)

    def index(self, twice_m: int) -> int:
        """Row index of substate ``m = twice_m / 2`` in the descending basis."""
        if (self.twice_s - twice_m) % 2 or abs(twice_m) > self.twice_s:
            raise ValueError(f"twice_m={twice_m} is not a substate of s={self.label()}")
        return (self.twice_s - twice_m) // 2

    def label(self) -> str:
        return str(self.twice_s // 2) if self.twice_s % 2 == 0 else f"{self.twice_s}/2"

    def __str__(self):
        return self.label()


def enumerate_substates(spin: SpinQuantum) -> list[int]:
    """Return ``[2s, 2s-2, ..., -2s]``, the substates in ``twice_m`` units."""
    return list(range(spin.twice_s, -spin.twice_s - 1, -2))


def m_values(spin: SpinQuantum) -> np.ndarray:
    """Magnetic quantum numbers ``m`` as floats, descending."""
    return np.array(enumerate_substates(spin), dtype=float) / 2.0


def m_label(twice_m: int) -> str:
    """Decimal rendering of ``m`` used in CSV headers and legends, e.g. ``-0.5``."""
    if twice_m % 2 == 0:
        return str(twice_m // 2)
    return repr(twice_m / 2)


def _frozen(array: np.ndarray) -> np.ndarray:
    array.setflags(write=False)
    return array


@dataclass(frozen=True, eq=False)
class StateVector:
    """Complex amplitudes ``C_m`` in descending-m order."""

    spin: SpinQuantum
    amplitudes: np.ndarray = field(repr=False)

    def __post_init__(self):
        amps = np.array(self.amplitudes, dtype=complex).reshape(-1)
        if amps.shape[0] != self.spin.dimension():
            raise ValueError(
                f"expected {self.spin.dimension()} amplitudes for s={self.spin}, "
                f"got {amps.shape[0]}"
            )
        object.__setattr__(self, "amplitudes", _frozen(amps))

    @classmethod
    def basis(cls, spin: SpinQuantum, twice_m: int) -> "StateVector":
        amps = np.zeros(spin.dimension(), dtype=complex)
        amps[spin.index(twice_m)] = 1.0
        return cls(spin, amps)

    @classmethod
    def from_probabilities(cls, spin: SpinQuantum, probabilities: Sequence[float]) -> "StateVector":
        """Real non-negative amplitudes ``sqrt(p_m)``; phases are taken as zero."""
        probs = np.asarray(probabilities, dtype=float)
        if probs.shape != (spin.dimension(),):
            raise ValueError(
                f"expected {spin.dimension()} probabilities for s={spin}, got {probs.size}"
            )
        if np.any(probs < 0) or not np.all(np.isfinite(probs)):
            raise ValueError("probabilities must be finite and non-negative")
        return cls(spin, np.sqrt(probs))

    def norm_squared(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2))

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm_squared() - 1.0) <= tol

    def require_normalized(self, tol: float = 1e-9) -> None:
        deviation = self.norm_squared() - 1.0
        if not abs(deviation) <= tol:
            raise NotNormalized(
                f"sum |C_m|^2 = {self.norm_squared():.17g} deviates from 1 by {deviation:.3g}"
            )

    def normalized(self) -> "StateVector":
        n2 = self.norm_squared()
        if n2 == 0.0:
            raise NotNormalized("cannot normalize the zero vector")
        return StateVector(self.spin, self.amplitudes / np.sqrt(n2))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2

    def amplitude(self, twice_m: int) -> complex:
        return complex(self.amplitudes[self.spin.index(twice_m)])

    def __len__(self):
        return self.spin.dimension()

    def __iter__(self):
        return iter(self.amplitudes)


@dataclass(frozen=True, eq=False)
class SpinOperators:
    """Spin matrices ``S_x, S_y, S_z`` (units of hbar) for one multiplet."""

    spin: SpinQuantum
    sx: np.ndarray = field(repr=False)
    sy: np.ndarray = field(repr=False)
    sz: np.ndarray = field(repr=False)

    @property
    def raising(self) -> np.ndarray:
        return self.sx + 1j * self.sy

    @property
    def lowering(self) -> np.ndarray:
        return self.sx - 1j * self.sy

    def casimir(self) -> np.ndarray:
        return self.sx @ self.sx + self.sy @ self.sy + self.sz @ self.sz

    def __iter__(self):
        return iter((self.sx, self.sy, self.sz))


@lru_cache(maxsize=None)
def spin_matrices(spin: SpinQuantum) -> SpinOperators:
    """Spin matrices built from the ladder elements.

    ``<m+1|S+|m> = sqrt(s(s+1) - m(m+1))``; ``S_x = (S+ + S-)/2`` and
    ``S_y = (S+ - S-)/(2i)``.
    """
    s = spin.s
    m = m_values(spin)
    # S+ sits on the superdiagonal in descending order: row m+1, column m
    ladder = np.sqrt(np.maximum(s * (s + 1) - m[1:] * (m[1:] + 1), 0.0))
    s_plus = np.diag(ladder, 1).astype(complex)
    s_minus = s_plus.T.copy()
    sx = (s_plus + s_minus) / 2
    sy = (s_plus - s_minus) / 2j
    sz = np.diag(m).astype(complex)
    return SpinOperators(spin, _frozen(sx), _frozen(sy), _frozen(sz))


def levi_civita(i: int, j: int, k: int) -> int:
    return (i - j) * (j - k) * (k - i) // 2


def commutator_residual(ops: SpinOperators) -> float:
    """Max entrywise deviation of ``[S_i, S_j] - i eps_ijk S_k`` over all i, j."""
    mats = (ops.sx, ops.sy, ops.sz)
    worst = 0.0
    for i in range(3):
        for j in range(3):
            comm = mats[i] @ mats[j] - mats[j] @ mats[i]
            expected = sum(1j * levi_civita(i, j, k) * mats[k] for k in range(3))
            worst = max(worst, float(np.max(np.abs(comm - expected))))
    return worst


def spins(values: Iterable) -> list[SpinQuantum]:
    return [SpinQuantum.from_value(v) for v in values]
