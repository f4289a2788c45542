"""Post-selected linear-optical CNOT gate: Fock-state simulation, mode-mismatch noise,
fringe analysis and two-qubit state tomography."""

from .fock import KetState, apply_unitary, embed, fock_basis, lift_unitary, permanent
from .elements import THETA_THIRD, bs_unitary, hwp_unitary, pbs_unitary, qwp_unitary
from .gate import (
    BELL_INPUTS,
    BELL_STATES,
    CNOT,
    Circuit,
    PostSelected,
    QubitAmplitudes,
    build_conceptual_cnot,
    build_experimental_cnot,
    encode_input,
    logical_operator,
    post_select,
    run,
)
from .noise import calibrate_overlap, run_with_mismatch, truth_table
from .measures import chsh_max, concurrence, fidelity, linear_entropy, tangle
from .tomography import mle_reconstruct, linear_reconstruct, simulate_counts, tomography_settings

__version__ = "0.1.0"
