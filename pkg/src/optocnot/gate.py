"""Post-selected linear-optical CNOT: circuits, input encoding, coincidence post-selection."""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from functools import reduce
from typing import Mapping, Optional

import numpy as np

from . import elements as el
from .fock import KetState, apply_unitary

QUBITS = ("C", "T")
LOGICAL_BASIS = ("00", "01", "10", "11")


@dataclass(frozen=True)
class Circuit:
    """A mode list, an ordered element list and the qubit-to-mode maps.

    ``inputs``/``outputs`` map qubit name (``"C"``, ``"T"``) to the mode pair
    carrying logical ``|0>`` and ``|1>``. Modes outside ``outputs`` are dumps:
    any photon found there fails the coincidence.
    """

    mode_count: int
    elements: tuple[el.OpticalElement, ...] = ()
    inputs: Mapping[str, tuple[int, int]] = field(default_factory=dict)
    outputs: Mapping[str, tuple[int, int]] = field(default_factory=dict)
    labels: tuple[str, ...] = ()

    def __post_init__(self):
        if self.mode_count < 1:
            raise ValueError("circuit needs at least one mode")
        object.__setattr__(self, "elements", tuple(self.elements))
        labels = tuple(self.labels) or tuple(f"m{i}" for i in range(self.mode_count))
        if len(labels) != self.mode_count:
            raise ValueError("one label per mode required")
        object.__setattr__(self, "labels", labels)
        for e in self.elements:
            if max(e.modes) >= self.mode_count:
                raise ValueError(f"{e.kind} on {e.modes} exceeds {self.mode_count} modes")
        for name in ("inputs", "outputs"):
            m = {q: tuple(int(x) for x in pair) for q, pair in dict(getattr(self, name)).items()}
            if set(m) != set(QUBITS):
                raise ValueError(f"{name} must map exactly qubits C and T, got {sorted(m)}")
            used = [x for pair in m.values() for x in pair]
            if len(set(used)) != len(used):
                raise ValueError(f"{name} mode pairs must be disjoint")
            if any(not 0 <= x < self.mode_count for x in used):
                raise ValueError(f"{name} reference modes out of range")
            object.__setattr__(self, name, m)

    @property
    def dump_modes(self) -> tuple[int, ...]:
        used = {x for pair in self.outputs.values() for x in pair}
        return tuple(i for i in range(self.mode_count) if i not in used)

    def mode_unitary(self) -> np.ndarray:
        eye = np.eye(self.mode_count, dtype=complex)
        return reduce(lambda acc, e: e.unitary(self.mode_count) @ acc, self.elements, eye)


@dataclass(frozen=True)
class QubitAmplitudes:
    alpha: complex
    beta: complex

    def __post_init__(self):
        object.__setattr__(self, "alpha", complex(self.alpha))
        object.__setattr__(self, "beta", complex(self.beta))
        n = abs(self.alpha) ** 2 + abs(self.beta) ** 2
        if abs(n - 1) > 1e-12:
            raise ValueError(f"qubit amplitudes not normalized (|a|^2+|b|^2 = {n})")

    @classmethod
    def zero(cls):
        return cls(1, 0)

    @classmethod
    def one(cls):
        return cls(0, 1)

    @classmethod
    def plus(cls):
        return cls(1 / math.sqrt(2), 1 / math.sqrt(2))

    @classmethod
    def minus(cls):
        return cls(1 / math.sqrt(2), -1 / math.sqrt(2))

    @classmethod
    def from_bit(cls, bit: int):
        return cls.one() if bit else cls.zero()

    def vector(self) -> np.ndarray:
        return np.array([self.alpha, self.beta])


@dataclass(frozen=True)
class PostSelected:
    """Coincidence-conditioned output.

    ``state`` is the normalized two-qubit vector in ``|00>, |01>, |10>, |11>``
    order (control first), or ``None`` when the projection vanished.
    """

    state: Optional[np.ndarray]
    success_probability: float

    @property
    def defined(self) -> bool:
        return self.state is not None

    def density_matrix(self) -> np.ndarray:
        if self.state is None:
            raise ValueError("post-selection failed; no output state")
        return np.outer(self.state, self.state.conj())


def build_conceptual_cnot() -> Circuit:
    """Six-mode spatial network: target interferometer of two 1/2 BSs, three 1/3 BSs.

    The two outer 1/3 BSs face their sign-flipping side toward C0 and T-, so
    every kept path through a 1/3 BS picks up the same phase as its partner
    rail and the target interferometer stays balanced.
    """
    c0, c1, t0, t1, d1, d2 = range(6)
    third = 1 / 3
    return Circuit(
        mode_count=6,
        labels=("C0", "C1", "T0", "T1", "dump1", "dump2"),
        elements=(
            el.bs(t0, t1, 0.5),  # T0/T1 -> T+/T-
            el.bs(c1, t0, third),  # central: C1 with T+
            el.bs(d1, c0, third),
            el.bs(d2, t1, third),
            el.bs(t0, t1, 0.5),
        ),
        inputs={"C": (c0, c1), "T": (t0, t1)},
        outputs={"C": (c0, c1), "T": (t0, t1)},
    )


def build_experimental_cnot(phi_c: float = 0.0, theta_third: float = el.THETA_THIRD) -> Circuit:
    """Polarization realization with displaced-beam PBSs and one shared 1/3 HWP.

    Modes are (rail, polarization): rails C, T and an auxiliary rail D that
    carries T- through the middle section and holds the dumped light at the end.
    ``phi_c`` is a phase on the control |1> (V) output mode, in radians.
    """
    ch, cv, th, tv, dh, dv = range(6)
    return Circuit(
        mode_count=6,
        labels=("C_H", "C_V", "T_H", "T_V", "D_H", "D_V"),
        elements=(
            el.hwp(th, tv, 22.5),  # target Hadamard
            el.pbs(th, tv, dh, dv),  # T- onto rail D
            el.pbs(ch, cv, th, tv),  # C1 onto rail T beside T+
            el.hwp(dh, dv, 45.0),  # T- to H so all kept light shares the 1/3 HWP phase
            el.hwp(ch, cv, theta_third),
            el.hwp(th, tv, theta_third),
            el.hwp(dh, dv, theta_third),
            el.hwp(dh, dv, 45.0),
            el.pbs(ch, cv, th, tv),  # C1 back to rail C, C0 dump onto rail T
            el.pbs(th, tv, dh, dv),  # T- back to rail T, C0 dump onto rail D
            el.phase(cv, phi_c),
            el.hwp(th, tv, 22.5),
        ),
        inputs={"C": (ch, cv), "T": (th, tv)},
        outputs={"C": (ch, cv), "T": (th, tv)},
    )


def identity_circuit() -> Circuit:
    return Circuit(mode_count=4, inputs={"C": (0, 1), "T": (2, 3)}, outputs={"C": (0, 1), "T": (2, 3)})


def encode_input(control: QubitAmplitudes, target: QubitAmplitudes, circuit: Circuit) -> KetState:
    """Two-photon product state: one photon over each qubit's input mode pair."""
    amps: dict[tuple[int, ...], complex] = {}
    for cm, ca in zip(circuit.inputs["C"], (control.alpha, control.beta)):
        for tm, ta in zip(circuit.inputs["T"], (target.alpha, target.beta)):
            occ = [0] * circuit.mode_count
            occ[cm] += 1
            occ[tm] += 1
            amps[tuple(occ)] = amps.get(tuple(occ), 0j) + ca * ta
    return KetState(circuit.mode_count, amps)


def evolve(state: KetState, circuit: Circuit) -> KetState:
    return apply_unitary(state, circuit.mode_unitary())


def coincidence_amplitudes(state: KetState, circuit: Circuit) -> np.ndarray:
    """Unnormalized amplitudes of one photon per output pair, ``|00>..|11>`` order."""
    out = np.zeros(4, dtype=complex)
    for k, bits in enumerate(LOGICAL_BASIS):
        occ = [0] * circuit.mode_count
        occ[circuit.outputs["C"][int(bits[0])]] += 1
        occ[circuit.outputs["T"][int(bits[1])]] += 1
        out[k] = state.amplitude(occ)
    return out


def post_select(state: KetState, circuit: Circuit) -> PostSelected:
    amps = coincidence_amplitudes(state, circuit)
    p = float(np.vdot(amps, amps).real)
    if p < 1e-28:
        return PostSelected(None, 0.0)
    return PostSelected(amps / math.sqrt(p), min(p, 1.0))


def run(circuit: Circuit, control: QubitAmplitudes, target: QubitAmplitudes) -> PostSelected:
    return post_select(evolve(encode_input(control, target, circuit), circuit), circuit)


def run_single(circuit: Circuit, qubit: str, amps: QubitAmplitudes) -> PostSelected:
    """Send one photon into ``qubit``'s input pair and keep runs where it exits that qubit's output pair.

    Returns a one-qubit ``PostSelected`` (2-vector state).
    """
    occ0 = [0] * circuit.mode_count
    occ1 = [0] * circuit.mode_count
    occ0[circuit.inputs[qubit][0]] = 1
    occ1[circuit.inputs[qubit][1]] = 1
    state = evolve(KetState(circuit.mode_count, {tuple(occ0): amps.alpha, tuple(occ1): amps.beta}), circuit)
    out = np.zeros(2, dtype=complex)
    for b, m in enumerate(circuit.outputs[qubit]):
        occ = [0] * circuit.mode_count
        occ[m] = 1
        out[b] = state.amplitude(occ)
    p = float(np.vdot(out, out).real)
    if p < 1e-28:
        return PostSelected(None, 0.0)
    return PostSelected(out / math.sqrt(p), p)


def logical_operator(circuit: Circuit) -> np.ndarray:
    """Post-selected (unnormalized) map on the two-qubit space; column k is the image of basis input k."""
    op = np.zeros((4, 4), dtype=complex)
    for k, bits in enumerate(LOGICAL_BASIS):
        state = encode_input(
            QubitAmplitudes.from_bit(int(bits[0])), QubitAmplitudes.from_bit(int(bits[1])), circuit
        )
        op[:, k] = coincidence_amplitudes(evolve(state, circuit), circuit)
    return op


def align_global_phase(reference: np.ndarray, other: np.ndarray) -> np.ndarray:
    """Rotate ``other`` by the phase that matches its entry at ``reference``'s largest-magnitude entry."""
    reference = np.asarray(reference)
    other = np.asarray(other, dtype=complex)
    k = np.unravel_index(np.argmax(np.abs(reference)), reference.shape)
    if abs(other[k]) == 0:
        return other
    return other * cmath.exp(1j * (cmath.phase(reference[k]) - cmath.phase(other[k])))


def equal_up_to_global_phase(a, b, tol: float = 1e-10) -> bool:
    a = np.asarray(a)
    return bool(np.max(np.abs(a - align_global_phase(a, b))) <= tol)


CNOT = np.array([[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 0, 1], [0, 0, 1, 0]], dtype=complex)

BELL_STATES = {
    "psi-": np.array([0, 1, -1, 0]) / math.sqrt(2),
    "psi+": np.array([0, 1, 1, 0]) / math.sqrt(2),
    "phi-": np.array([1, 0, 0, -1]) / math.sqrt(2),
    "phi+": np.array([1, 0, 0, 1]) / math.sqrt(2),
}

# Product inputs whose ideal CNOT output is each Bell state.
BELL_INPUTS = {
    "psi-": (QubitAmplitudes.minus(), QubitAmplitudes.one()),
    "psi+": (QubitAmplitudes.plus(), QubitAmplitudes.one()),
    "phi-": (QubitAmplitudes.minus(), QubitAmplitudes.zero()),
    "phi+": (QubitAmplitudes.plus(), QubitAmplitudes.zero()),
}
