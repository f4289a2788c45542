"""Bosonic Fock-space machinery for passive linear optics.

A mode unitary ``U`` acts on creation operators as ``a_j^dag -> sum_i U[i, j] b_i^dag``,
so column ``j`` is the image of input mode ``j``. Lifting to ``n`` photons uses
matrix permanents.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

import numpy as np

FockState = tuple[int, ...]

PRUNE_TOL = 1e-14
UNITARY_TOL = 1e-12


@dataclass(frozen=True)
class ModeIndex:
    index: int
    label: str = ""

    def __post_init__(self):
        if self.index < 0:
            raise ValueError(f"mode index must be non-negative, got {self.index}")


def fock_basis(mode_count: int, photon_count: int) -> list[FockState]:
    """All occupation tuples of ``photon_count`` photons in ``mode_count`` modes.

    Ordered lexicographically descending, so for two modes and one photon the
    order is ``[(1, 0), (0, 1)]``.
    """
    if mode_count < 1:
        raise ValueError("mode_count must be >= 1")
    if photon_count < 0:
        raise ValueError("photon_count must be >= 0")
    return list(_compositions(mode_count, photon_count))


def _compositions(m: int, n: int):
    if m == 1:
        yield (n,)
        return
    for first in range(n, -1, -1):
        for rest in _compositions(m - 1, n - first):
            yield (first,) + rest


def permanent(a: np.ndarray) -> complex:
    """Matrix permanent; direct expansion up to 2x2, Ryser's formula beyond."""
    a = np.asarray(a, dtype=complex)
    n = a.shape[0]
    if a.shape != (n, n):
        raise ValueError("permanent needs a square matrix")
    if n == 0:
        return 1.0 + 0j
    if n == 1:
        return complex(a[0, 0])
    if n == 2:
        return complex(a[0, 0] * a[1, 1] + a[0, 1] * a[1, 0])
    return _ryser(a)


def _ryser(a: np.ndarray) -> complex:
    n = a.shape[0]
    total = 0j
    for r in range(1, n + 1):
        sign = (-1) ** r
        for cols in itertools.combinations(range(n), r):
            total += sign * np.prod(a[:, cols].sum(axis=1))
    return complex((-1) ** n * total)


def is_unitary(u: np.ndarray, tol: float = UNITARY_TOL) -> bool:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return bool(np.allclose(u @ u.conj().T, np.eye(u.shape[0]), atol=tol, rtol=0))


def check_unitary(u, tol: float = UNITARY_TOL) -> np.ndarray:
    u = np.asarray(u, dtype=complex)
    if not is_unitary(u, tol):
        raise ValueError("matrix is not unitary")
    return u


def _expand(occ: FockState) -> list[int]:
    return [i for i, k in enumerate(occ) for _ in range(k)]


def transition_amplitude(u: np.ndarray, out: FockState, inp: FockState) -> complex:
    """``<out| Phi(U) |inp>`` for Fock states of equal photon number."""
    if sum(out) != sum(inp):
        return 0j
    rows = _expand(out)
    cols = _expand(inp)
    sub = u[np.ix_(rows, cols)]
    norm = math.prod(math.factorial(k) for k in out) * math.prod(math.factorial(k) for k in inp)
    return permanent(sub) / math.sqrt(norm)


def lift_unitary(u, photon_count: int) -> np.ndarray:
    """Fock-space representation of a mode unitary, in ``fock_basis`` order."""
    u = check_unitary(u)
    if photon_count < 1:
        raise ValueError("photon_count must be >= 1")
    basis = fock_basis(u.shape[0], photon_count)
    out = np.empty((len(basis), len(basis)), dtype=complex)
    for j, inp in enumerate(basis):
        for i, occ in enumerate(basis):
            out[i, j] = transition_amplitude(u, occ, inp)
    return out


@dataclass(frozen=True)
class KetState:
    """Sparse superposition over Fock states of a fixed photon number.

    Post-selected branches are sub-normalized, so only ``0 < norm <= 1`` is
    required (the empty state is allowed as the result of a failed projection).
    """

    mode_count: int
    amplitudes: Mapping[FockState, complex] = field(default_factory=dict)

    def __post_init__(self):
        clean = {}
        n = None
        for occ, amp in self.amplitudes.items():
            occ = tuple(int(k) for k in occ)
            if len(occ) != self.mode_count:
                raise ValueError(f"occupation {occ} does not have {self.mode_count} modes")
            if any(k < 0 for k in occ):
                raise ValueError(f"negative occupation in {occ}")
            if n is None:
                n = sum(occ)
            elif sum(occ) != n:
                raise ValueError("all basis states must share one photon number")
            if abs(amp) >= PRUNE_TOL:
                clean[occ] = clean.get(occ, 0j) + complex(amp)
        object.__setattr__(self, "amplitudes", clean)
        if self.norm() > 1 + 1e-9:
            raise ValueError(f"state norm {self.norm():.6g} exceeds 1")

    @classmethod
    def basis(cls, occupations: Sequence[int]) -> "KetState":
        occ = tuple(occupations)
        return cls(len(occ), {occ: 1.0})

    @property
    def photon_count(self) -> int:
        for occ in self.amplitudes:
            return sum(occ)
        return 0

    def norm(self) -> float:
        return math.sqrt(sum(abs(a) ** 2 for a in self.amplitudes.values()))

    def amplitude(self, occ: Iterable[int]) -> complex:
        return self.amplitudes.get(tuple(occ), 0j)

    def to_vector(self) -> np.ndarray:
        basis = fock_basis(self.mode_count, self.photon_count)
        return np.array([self.amplitude(b) for b in basis], dtype=complex)


def apply_unitary(state: KetState, u) -> KetState:
    """Evolve ``state`` through mode unitary ``u``.

    Only the columns of the lifted unitary touched by the input support are
    evaluated.
    """
    u = check_unitary(u)
    if u.shape[0] != state.mode_count:
        raise ValueError(
            f"unitary acts on {u.shape[0]} modes but state has {state.mode_count}"
        )
    n = state.photon_count
    if n == 0:
        return state
    out: dict[FockState, complex] = {}
    outputs = fock_basis(state.mode_count, n)
    for inp, amp in state.amplitudes.items():
        for occ in outputs:
            t = transition_amplitude(u, occ, inp)
            if t != 0:
                out[occ] = out.get(occ, 0j) + amp * t
    return KetState(state.mode_count, out)


def embed(u2, modes: tuple[int, int], total_modes: int) -> np.ndarray:
    """Place a 2x2 block on ``modes`` inside an identity of size ``total_modes``."""
    u2 = np.asarray(u2, dtype=complex)
    if u2.shape != (2, 2):
        raise ValueError("embed expects a 2x2 block")
    i, j = (m.index if isinstance(m, ModeIndex) else int(m) for m in modes)
    if i == j:
        raise ValueError(f"duplicate mode {i}")
    for k in (i, j):
        if not 0 <= k < total_modes:
            raise ValueError(f"mode {k} out of range for {total_modes} modes")
    u = np.eye(total_modes, dtype=complex)
    u[np.ix_([i, j], [i, j])] = u2
    return u
