"""Polarization analyzers, coincidence probabilities and fringe visibility.

Each analyzer is HWP(h) then QWP(q) then a PBS; the transmitted (H) port is
detected. The projector is onto ``(QWP(q) HWP(h))^dag |H>``.

Named settings (degrees):

=====  =======  =======  =========================
tag    HWP h    QWP q    projected state
=====  =======  =======  =========================
H      0        0        |0>
V      45       0        |1>
D      22.5     0        (|0> + |1>)/sqrt 2
A      -22.5    0        (|0> - |1>)/sqrt 2
R      0        -45      (|0> - i|1>)/sqrt 2
L      0        45       (|0> + i|1>)/sqrt 2
=====  =======  =======  =========================
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Union

import numpy as np

from .elements import hwp_unitary, qwp_unitary
from .gate import build_conceptual_cnot
from .noise import run_with_mismatch

ANALYZER_ANGLES = {
    "H": (0.0, 0.0),
    "V": (45.0, 0.0),
    "D": (22.5, 0.0),
    "A": (-22.5, 0.0),
    "R": (0.0, -45.0),
    "L": (0.0, 45.0),
}

FRINGE_PERIOD = 90.0


@dataclass(frozen=True)
class MeasurementSetting:
    hwp: float
    qwp: float = 0.0
    tag: str = ""

    @classmethod
    def named(cls, tag: str) -> "MeasurementSetting":
        try:
            h, q = ANALYZER_ANGLES[tag]
        except KeyError:
            raise ValueError(f"unknown analyzer tag {tag!r}; expected one of {sorted(ANALYZER_ANGLES)}") from None
        return cls(h, q, tag)


Setting = Union[MeasurementSetting, str]


def _setting(s: Setting) -> MeasurementSetting:
    return MeasurementSetting.named(s) if isinstance(s, str) else s


def analyzer_state(setting: Setting) -> np.ndarray:
    s = _setting(setting)
    w = qwp_unitary(s.qwp) @ hwp_unitary(s.hwp)
    return w.conj().T @ np.array([1, 0], dtype=complex)


def analyzer_projector(setting: Setting) -> np.ndarray:
    v = analyzer_state(setting)
    return np.outer(v, v.conj())


def joint_projector(control: Setting, target: Setting) -> np.ndarray:
    return np.kron(analyzer_projector(control), analyzer_projector(target))


def coincidence_probability(rho, control: Setting, target: Setting) -> float:
    p = float(np.real(np.trace(np.asarray(rho) @ joint_projector(control, target))))
    return min(max(p, 0.0), 1.0)


def visibility(vmax: float, vmin: float) -> float:
    if vmax < vmin or vmin < 0:
        raise ValueError("visibility needs max >= min >= 0")
    if vmax == 0:
        return 0.0
    return (vmax - vmin) / (vmax + vmin)


@dataclass(frozen=True)
class FringeData:
    """Fringe samples and the fixed-period sinusoid fit ``offset + amplitude*cos(4(h - phase))``."""

    angles: tuple[float, ...]
    probabilities: tuple[float, ...]
    offset: float
    amplitude: float
    phase: float
    visibility: float
    period: float = FRINGE_PERIOD

    @property
    def fit_max(self) -> float:
        return self.offset + self.amplitude

    @property
    def fit_min(self) -> float:
        return max(self.offset - self.amplitude, 0.0)


def fit_fringe(angles: Sequence[float], values: Sequence[float]) -> FringeData:
    """Linear least squares on ``1, cos, sin`` at the fixed 90 degree period."""
    angles = np.asarray(angles, dtype=float)
    values = np.asarray(values, dtype=float)
    if angles.size == 0 or angles.shape != values.shape:
        raise ValueError("need equal-length, non-empty angle and value lists")
    w = 2 * math.pi / FRINGE_PERIOD  # fringe radians per degree of HWP rotation
    x = angles * w
    design = np.column_stack([np.ones_like(x), np.cos(x), np.sin(x)])
    (a, b, c), *_ = np.linalg.lstsq(design, values, rcond=None)
    amp = math.hypot(b, c)
    if amp <= 1e-15 * max(abs(a), 1.0):
        amp, ph = 0.0, 0.0
    else:
        ph = (math.atan2(c, b) / w) % FRINGE_PERIOD
    vmax = a + amp
    vmin = max(a - amp, 0.0)
    nu = visibility(vmax, vmin) if vmax > 0 else 0.0
    return FringeData(
        angles=tuple(float(t) for t in angles),
        probabilities=tuple(float(v) for v in values),
        offset=float(a),
        amplitude=float(amp),
        phase=float(ph),
        visibility=float(nu),
    )


def fringe_from_rho(rho, control_setting: Setting, target_hwp_angles: Sequence[float]) -> FringeData:
    angles = list(target_hwp_angles)
    if not angles:
        raise ValueError("angle list must not be empty")
    probs = [coincidence_probability(rho, control_setting, MeasurementSetting(h, 0.0)) for h in angles]
    return fit_fringe(angles, probs)


def fringe_scan(
    control, target, control_setting: Setting, target_hwp_angles: Sequence[float], xi: float = 1.0, circuit=None
) -> FringeData:
    """Run the gate on a product input and scan the target analyzer HWP."""
    circuit = circuit or build_conceptual_cnot()
    rho, _ = run_with_mismatch(control, target, circuit, xi)
    if rho is None:
        raise ValueError("input never produces a coincidence")
    return fringe_from_rho(rho, control_setting, target_hwp_angles)


def default_angles(step: float = 5.0, stop: float = 180.0) -> list[float]:
    n = int(round(stop / step))
    return [i * step for i in range(n + 1)]
