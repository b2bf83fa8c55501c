"""Drive-field configuration in reduced angular-frequency units."""
from __future__ import annotations

import math
from dataclasses import dataclass


@dataclass(frozen=True)
class FieldConfig:
    """Static field ``omega0`` along z plus a transverse field of strength
    ``omega1`` rotating about z at angular frequency ``omega``.

    Only finiteness is checked here; the closed-form propagator additionally
    requires ``omega1 > 0`` (see :func:`spin_rwa.dynamics.derive_frame`).
    """

    omega0: float
    omega1: float
    omega: float

    def __post_init__(self):
        for name in ("omega0", "omega1", "omega"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)

    @property
    def detuning(self) -> float:
        """``omega0 - omega``, the z coefficient of the rotating-frame Hamiltonian."""
        return self.omega0 - self.omega

    @classmethod
    def from_drive(cls, drive: str, ratio: float = 0.01, omega0: float = 1.0) -> "FieldConfig":
        """Field for one of the named drives: resonance, peak (``omega0+omega1``)
        or off (``omega0+3*omega1``)."""
        omega1 = ratio * omega0
        offsets = {"resonance": 0.0, "peak": 1.0, "off": 3.0}
        try:
            offset = offsets[drive]
        except KeyError:
            raise ValueError(
                f"unknown drive {drive!r}; expected one of {sorted(offsets)}"
            ) from None
        return cls(omega0, omega1, omega0 + offset * omega1)
