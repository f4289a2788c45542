"""Optical elements as mode unitaries.

Conventions (angles in degrees at every public surface):

* beam splitter ``[[sqrt(R), sqrt(1-R)], [sqrt(1-R), -sqrt(R)]]``; the diagonal is
  the reflected path and the sign change sits on reflection from the second mode.
* half-wave plate ``[[cos 2t, sin 2t], [sin 2t, -cos 2t]]``
* quarter-wave plate ``(1/sqrt 2) [[1 + i cos 2t, i sin 2t], [i sin 2t, 1 - i cos 2t]]``
* polarizing beam splitter on ``(aH, aV, bH, bV)``: H transmitted, V exchanged
  between the two rails.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .fock import embed

# HWP axis giving exactly 1/3 same-polarization intensity: cos(2t) = -1/sqrt(3).
THETA_THIRD = 0.5 * math.degrees(math.acos(-1 / math.sqrt(3)))
THETA_THIRD_NOMINAL = 62.5

KINDS = ("bs", "hwp", "qwp", "pbs", "phase")


def bs_unitary(R: float) -> np.ndarray:
    if not 0.0 <= R <= 1.0:
        raise ValueError(f"reflectivity must be in [0, 1], got {R}")
    r = math.sqrt(R)
    t = math.sqrt(1.0 - R)
    return np.array([[r, t], [t, -r]], dtype=complex)


def hwp_unitary(theta: float) -> np.ndarray:
    if not math.isfinite(theta):
        raise ValueError("waveplate angle must be finite")
    c = math.cos(math.radians(2 * theta))
    s = math.sin(math.radians(2 * theta))
    return np.array([[c, s], [s, -c]], dtype=complex)


def qwp_unitary(theta: float) -> np.ndarray:
    if not math.isfinite(theta):
        raise ValueError("waveplate angle must be finite")
    c = math.cos(math.radians(2 * theta))
    s = math.sin(math.radians(2 * theta))
    return np.array([[1 + 1j * c, 1j * s], [1j * s, 1 - 1j * c]], dtype=complex) / math.sqrt(2)


def phase_unitary(phi: float) -> np.ndarray:
    """1x1 phase shift, ``phi`` in radians."""
    if not math.isfinite(phi):
        raise ValueError("phase must be finite")
    return np.array([[np.exp(1j * phi)]])


def pbs_unitary() -> np.ndarray:
    """Permutation on ``(aH, aV, bH, bV)``."""
    p = np.zeros((4, 4), dtype=complex)
    p[0, 0] = 1  # aH -> aH
    p[2, 2] = 1  # bH -> bH
    p[3, 1] = 1  # aV -> bV
    p[1, 3] = 1  # bV -> aV
    return p


@dataclass(frozen=True)
class OpticalElement:
    """One element of a circuit.

    ``param`` is the reflectivity for ``bs``, the axis angle in degrees for
    ``hwp``/``qwp``, the phase in radians for ``phase`` and unused for ``pbs``.
    ``modes`` has 2 entries (4 for ``pbs``, 1 for ``phase``).
    """

    kind: str
    modes: tuple[int, ...]
    param: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown element kind {self.kind!r}")
        object.__setattr__(self, "modes", tuple(int(m) for m in self.modes))
        object.__setattr__(self, "param", float(self.param))
        arity = {"pbs": 4, "phase": 1}.get(self.kind, 2)
        if len(self.modes) != arity:
            raise ValueError(f"{self.kind} acts on {arity} modes, got {len(self.modes)}")
        if len(set(self.modes)) != len(self.modes):
            raise ValueError(f"{self.kind} modes must be distinct: {self.modes}")
        if any(m < 0 for m in self.modes):
            raise ValueError(f"negative mode index in {self.modes}")
        if self.kind == "bs" and not 0.0 <= self.param <= 1.0:
            raise ValueError(f"reflectivity must be in [0, 1], got {self.param}")
        if not math.isfinite(self.param):
            raise ValueError("element parameter must be finite")

    def local_unitary(self) -> np.ndarray:
        if self.kind == "bs":
            return bs_unitary(self.param)
        if self.kind == "hwp":
            return hwp_unitary(self.param)
        if self.kind == "qwp":
            return qwp_unitary(self.param)
        if self.kind == "pbs":
            return pbs_unitary()
        return phase_unitary(self.param)

    def unitary(self, total_modes: int) -> np.ndarray:
        if max(self.modes) >= total_modes:
            raise ValueError(f"{self.kind} on {self.modes} exceeds {total_modes} modes")
        if len(self.modes) == 2:
            return embed(self.local_unitary(), self.modes, total_modes)
        u = np.eye(total_modes, dtype=complex)
        u[np.ix_(self.modes, self.modes)] = self.local_unitary()
        return u


def bs(i: int, j: int, R: float) -> OpticalElement:
    return OpticalElement("bs", (i, j), R)


def hwp(i: int, j: int, theta: float) -> OpticalElement:
    return OpticalElement("hwp", (i, j), theta)


def qwp(i: int, j: int, theta: float) -> OpticalElement:
    return OpticalElement("qwp", (i, j), theta)


def pbs(a_h: int, a_v: int, b_h: int, b_v: int) -> OpticalElement:
    return OpticalElement("pbs", (a_h, a_v, b_h, b_v))


def phase(i: int, phi: float) -> OpticalElement:
    return OpticalElement("phase", (i,), phi)
