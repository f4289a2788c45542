"""Partial distinguishability between control and target photons.

Every optical mode is split into two internal sub-modes (``a`` and ``b``). The
control photon lives in ``a``; the target photon has amplitude ``sqrt(xi)`` in
``a`` and ``sqrt(1 - xi)`` in ``b``. Only the ``a``/``a`` part interferes
non-classically. After coincidence post-selection the internal degree is traced
out, giving a mixed two-qubit state.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.linalg import block_diag
from scipy.optimize import brentq

from .fock import KetState, apply_unitary
from .gate import LOGICAL_BASIS, Circuit, QubitAmplitudes, build_conceptual_cnot


def _check_xi(xi: float) -> float:
    xi = float(xi)
    if not 0.0 <= xi <= 1.0:
        raise ValueError(f"overlap xi must be in [0, 1], got {xi}")
    return xi


def is_density_matrix(rho, tol: float = 1e-10) -> bool:
    rho = np.asarray(rho)
    if rho.shape != (4, 4):
        return False
    if not np.allclose(rho, rho.conj().T, atol=tol, rtol=0):
        return False
    if abs(np.trace(rho) - 1) > tol:
        return False
    return bool(np.linalg.eigvalsh((rho + rho.conj().T) / 2).min() >= -tol)


def run_with_mismatch(
    control: QubitAmplitudes, target: QubitAmplitudes, circuit: Circuit, xi: float
) -> tuple[np.ndarray | None, float]:
    """Return ``(rho, success_probability)``; ``rho`` is ``None`` if no coincidence is possible."""
    xi = _check_xi(xi)
    m = circuit.mode_count
    u = circuit.mode_unitary()
    big = block_diag(u, u)

    amps: dict[tuple[int, ...], complex] = {}
    t_sectors = ((0, math.sqrt(xi)), (m, math.sqrt(1.0 - xi)))
    for cm, ca in zip(circuit.inputs["C"], (control.alpha, control.beta)):
        for tm, ta in zip(circuit.inputs["T"], (target.alpha, target.beta)):
            for offset, w in t_sectors:
                if w == 0:
                    continue
                occ = [0] * (2 * m)
                occ[cm] += 1
                occ[tm + offset] += 1
                occ = tuple(occ)
                amps[occ] = amps.get(occ, 0j) + ca * ta * w
    out = apply_unitary(KetState(2 * m, amps), big)

    # psi[logical k, control sector, target sector]
    psi = np.zeros((4, 2, 2), dtype=complex)
    for k, bits in enumerate(LOGICAL_BASIS):
        c_mode = circuit.outputs["C"][int(bits[0])]
        t_mode = circuit.outputs["T"][int(bits[1])]
        for s1 in range(2):
            for s2 in range(2):
                occ = [0] * (2 * m)
                occ[c_mode + s1 * m] += 1
                occ[t_mode + s2 * m] += 1
                psi[k, s1, s2] = out.amplitude(occ)
    flat = psi.reshape(4, 4)
    rho = flat @ flat.conj().T
    p = float(np.trace(rho).real)
    if p < 1e-28:
        return None, 0.0
    return rho / p, min(p, 1.0)


def truth_table(circuit: Circuit, xi: float) -> np.ndarray:
    """``P[input, output]`` in the logical basis; each row sums to 1."""
    table = np.zeros((4, 4))
    for k, bits in enumerate(LOGICAL_BASIS):
        rho, _ = run_with_mismatch(
            QubitAmplitudes.from_bit(int(bits[0])), QubitAmplitudes.from_bit(int(bits[1])), circuit, xi
        )
        if rho is not None:
            table[k] = np.real(np.diag(rho))
    return table


def success_probabilities(circuit: Circuit, xi: float) -> np.ndarray:
    return np.array(
        [
            run_with_mismatch(
                QubitAmplitudes.from_bit(int(b[0])), QubitAmplitudes.from_bit(int(b[1])), circuit, xi
            )[1]
            for b in LOGICAL_BASIS
        ]
    )


def flip_probability(circuit: Circuit, xi: float) -> float:
    """P(output |11> | input |10>): the target flips when the control is 1."""
    rho, _ = run_with_mismatch(QubitAmplitudes.one(), QubitAmplitudes.zero(), circuit, xi)
    return float(rho[3, 3].real)


def calibrate_overlap(target_flip_probability: float, circuit: Circuit | None = None) -> float:
    """Solve ``flip_probability(xi) = target`` for ``xi`` to 1e-6 in probability."""
    circuit = circuit or build_conceptual_cnot()
    p = float(target_flip_probability)
    floor = flip_probability(circuit, 0.0)
    top = flip_probability(circuit, 1.0)
    if not floor < p <= top + 1e-12:
        raise ValueError(
            f"flip probability {p} outside attainable range ({floor:.6g}, {top:.6g}]"
        )
    if p >= top:
        return 1.0
    xi = brentq(lambda x: flip_probability(circuit, x) - p, 0.0, 1.0, xtol=1e-13, rtol=1e-14)
    return float(xi)
