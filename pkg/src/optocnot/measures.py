"""Two-qubit state measures: fidelity, concurrence/tangle, linear entropy, CHSH bound."""

from __future__ import annotations

import math

import numpy as np

PAULI = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.array([[1, 0], [0, -1]], dtype=complex),
}
_YY = np.kron(PAULI["Y"], PAULI["Y"])


def as_density(state) -> np.ndarray:
    state = np.asarray(state, dtype=complex)
    if state.ndim == 1:
        return np.outer(state, state.conj())
    return state


def _psd_sqrt(a: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh((a + a.conj().T) / 2)
    # Eigenvalues inside eigh's round-off band are zero for our purposes.
    floor = 8 * np.finfo(float).eps * max(np.max(np.abs(w)), 1e-300)
    w = np.where(w > floor, w, 0.0)
    return (v * np.sqrt(w)) @ v.conj().T


def fidelity(rho, psi) -> float:
    """Overlap with a target state.

    For a pure ``psi`` (vector) this is ``<psi|rho|psi>``; for a matrix it is
    the Uhlmann fidelity ``(Tr sqrt(sqrt(rho) sigma sqrt(rho)))**2``, taken as
    the squared nuclear norm of ``sqrt(rho) sqrt(sigma)`` so round-off
    eigenvalues are not square-rooted.
    """
    rho = as_density(rho)
    psi = np.asarray(psi, dtype=complex)
    if psi.ndim == 1:
        psi = psi / np.linalg.norm(psi)
        f = float(np.real(psi.conj() @ rho @ psi))
    else:
        sv = np.linalg.svd(_psd_sqrt(rho) @ _psd_sqrt(psi), compute_uv=False)
        f = float(np.sum(sv) ** 2)
    return min(max(f, 0.0), 1.0)


def concurrence(rho) -> float:
    rho = as_density(rho)
    r = rho @ _YY @ rho.conj() @ _YY
    lam = np.sqrt(np.clip(np.sort(np.real(np.linalg.eigvals(r)))[::-1], 0.0, None))
    return float(max(0.0, lam[0] - lam[1] - lam[2] - lam[3]))


def tangle(rho) -> float:
    return concurrence(rho) ** 2


def purity(rho) -> float:
    rho = as_density(rho)
    return float(np.real(np.trace(rho @ rho)))


def linear_entropy(rho) -> float:
    """``(4/3)(1 - Tr rho^2)``: 0 for pure, 1 for maximally mixed."""
    return float(min(max(4.0 / 3.0 * (1.0 - purity(rho)), 0.0), 1.0))


def correlation_matrix(rho) -> np.ndarray:
    rho = as_density(rho)
    axes = ("X", "Y", "Z")
    return np.array(
        [[np.real(np.trace(rho @ np.kron(PAULI[a], PAULI[b]))) for b in axes] for a in axes]
    )


def chsh_max(rho) -> float:
    """Largest CHSH value over analyzer settings (Horodecki); above 2 means violation."""
    m = correlation_matrix(rho)
    ev = np.sort(np.linalg.eigvalsh(m.T @ m))[::-1]
    return float(2 * math.sqrt(max(ev[0] + ev[1], 0.0)))


def werner_state(p: float, psi=None) -> np.ndarray:
    if psi is None:
        psi = np.array([0, 1, -1, 0]) / math.sqrt(2)
    return p * as_density(psi) + (1 - p) / 4 * np.eye(4)
