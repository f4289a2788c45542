import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from optocnot.gate import CNOT, QubitAmplitudes, run
from optocnot.noise import (
    calibrate_overlap,
    flip_probability,
    is_density_matrix,
    run_with_mismatch,
    success_probabilities,
    truth_table,
)
from oracles import flip_probability_closed_form, mismatch_density

XI_GRID = np.linspace(0, 1, 11)


def qubit(theta, phi):
    return QubitAmplitudes(math.cos(theta / 2), np.exp(1j * phi) * math.sin(theta / 2))


qubits = st.builds(qubit, st.floats(0, math.pi), st.floats(0, 2 * math.pi))


def test_xi_one_matches_pure_evolution(conceptual):
    c, t = QubitAmplitudes.plus(), QubitAmplitudes(0.6, 0.8j)
    rho, p = run_with_mismatch(c, t, conceptual, 1.0)
    pure = run(conceptual, c, t)
    assert p == pytest.approx(pure.success_probability, abs=1e-12)
    assert np.allclose(rho, pure.density_matrix(), atol=1e-12)


@settings(max_examples=30, deadline=None)
@given(c=qubits, t=qubits, xi=st.floats(0, 1))
def test_matches_branch_oracle(conceptual, c, t, xi):
    rho, p = run_with_mismatch(c, t, conceptual, xi)
    ref, p_ref = mismatch_density(conceptual, c, t, xi)
    assert p == pytest.approx(p_ref, abs=1e-12)
    assert np.allclose(rho, ref, atol=1e-10)


def test_fully_distinguishable_flip_row(conceptual):
    # Hand count at xi = 0: |10> goes to |10> w.p. 2/3 and |11> w.p. 1/3, success 1/3 overall.
    rho, p = run_with_mismatch(QubitAmplitudes.one(), QubitAmplitudes.zero(), conceptual, 0.0)
    assert np.real(np.diag(rho)) == pytest.approx([0, 0, 2 / 3, 1 / 3], abs=1e-12)
    assert p == pytest.approx(1 / 3, abs=1e-12)


@pytest.mark.parametrize("xi", XI_GRID)
def test_flip_closed_form(conceptual, xi):
    assert flip_probability(conceptual, xi) == pytest.approx(flip_probability_closed_form(xi), abs=1e-12)


def test_control_zero_rows_unaffected(conceptual):
    for xi in (0.0, 0.4, 1.0):
        table = truth_table(conceptual, xi)
        assert table[0, 0] == pytest.approx(1, abs=1e-12)
        assert table[1, 1] == pytest.approx(1, abs=1e-12)


@pytest.mark.parametrize("xi", XI_GRID)
def test_rows_stochastic_and_states_physical(conceptual, xi):
    table = truth_table(conceptual, xi)
    assert np.allclose(table.sum(axis=1), 1, atol=1e-12)
    rho, _ = run_with_mismatch(QubitAmplitudes.minus(), QubitAmplitudes.one(), conceptual, xi)
    assert is_density_matrix(rho)


def test_ideal_truth_table_and_success(conceptual):
    assert np.allclose(truth_table(conceptual, 1.0), np.abs(CNOT.T) ** 2, atol=1e-12)
    assert np.allclose(success_probabilities(conceptual, 1.0), 1 / 9, atol=1e-12)


def test_calibration_is_five_sixths(conceptual):
    assert calibrate_overlap(0.75, conceptual) == pytest.approx(5 / 6, abs=1e-9)


def test_calibration_edges(conceptual):
    assert calibrate_overlap(1.0, conceptual) == 1.0
    with pytest.raises(ValueError):
        calibrate_overlap(1 / 3, conceptual)
    with pytest.raises(ValueError):
        calibrate_overlap(1.2, conceptual)


def test_xi_range_checked(conceptual):
    with pytest.raises(ValueError):
        run_with_mismatch(QubitAmplitudes.zero(), QubitAmplitudes.zero(), conceptual, 1.1)


def test_is_density_matrix():
    assert is_density_matrix(np.eye(4) / 4)
    assert not is_density_matrix(np.eye(4))
    assert not is_density_matrix(np.diag([1.1, -0.1, 0, 0]))
    assert not is_density_matrix(np.eye(2) / 2)
