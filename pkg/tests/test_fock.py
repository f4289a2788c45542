import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from optocnot.elements import bs_unitary
from optocnot.fock import (
    KetState,
    ModeIndex,
    apply_unitary,
    embed,
    fock_basis,
    lift_unitary,
    permanent,
    transition_amplitude,
)
from oracles import creation_operator_evolve, permanent_bruteforce, random_unitary


def test_basis_size_and_order():
    basis = fock_basis(3, 2)
    assert len(basis) == math.comb(4, 2)
    assert basis[0] == (2, 0, 0)
    assert basis[-1] == (0, 0, 2)
    assert basis == sorted(basis, reverse=True)


def test_basis_zero_photons():
    assert fock_basis(4, 0) == [(0, 0, 0, 0)]


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_permanent_matches_bruteforce(n, rng):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    assert permanent(a) == pytest.approx(permanent_bruteforce(a), rel=1e-10, abs=1e-12)


def test_permanent_of_ones():
    assert permanent(np.ones((4, 4))) == pytest.approx(24)


def test_permanent_empty():
    assert permanent(np.zeros((0, 0))) == 1


def test_hom_dip():
    # Balanced beam splitter: |1,1> never exits as |1,1>.
    state = apply_unitary(KetState.basis((1, 1)), bs_unitary(0.5))
    assert abs(state.amplitude((1, 1))) < 1e-15
    assert abs(state.amplitude((2, 0))) ** 2 == pytest.approx(0.5)
    assert abs(state.amplitude((0, 2))) ** 2 == pytest.approx(0.5)


def test_one_third_coincidence_amplitude():
    # Residual coincidence at R = 1/3 is 1 - 2R = +1/3 under the package convention.
    amp = transition_amplitude(bs_unitary(1 / 3), (1, 1), (1, 1))
    assert amp == pytest.approx(1 / 3, abs=1e-15)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), m=st.integers(2, 5), n=st.integers(1, 3))
def test_lift_matches_creation_operator_oracle(seed, m, n):
    rng = np.random.default_rng(seed)
    u = random_unitary(m, rng)
    basis = fock_basis(m, n)
    big = lift_unitary(u, n)
    col = int(rng.integers(len(basis)))
    expected = creation_operator_evolve(u, basis[col])
    for row, occ in enumerate(basis):
        assert big[row, col] == pytest.approx(expected.get(occ, 0), abs=1e-10)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), m=st.integers(2, 4), n=st.integers(1, 3))
def test_lift_is_unitary_homomorphism(seed, m, n):
    rng = np.random.default_rng(seed)
    u, v = random_unitary(m, rng), random_unitary(m, rng)
    lu, lv = lift_unitary(u, n), lift_unitary(v, n)
    assert np.allclose(lu.conj().T @ lu, np.eye(len(lu)), atol=1e-10)
    assert np.allclose(lift_unitary(u @ v, n), lu @ lv, atol=1e-10)


@settings(max_examples=25, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_apply_unitary_preserves_norm(seed):
    rng = np.random.default_rng(seed)
    u = random_unitary(4, rng)
    basis = fock_basis(4, 2)
    amps = rng.normal(size=len(basis)) + 1j * rng.normal(size=len(basis))
    amps /= np.linalg.norm(amps)
    state = KetState(4, dict(zip(basis, amps)))
    out = apply_unitary(state, u)
    assert out.norm() == pytest.approx(1.0, abs=1e-12)
    assert np.allclose(out.to_vector(), lift_unitary(u, 2) @ amps, atol=1e-12)


def test_non_unitary_rejected():
    with pytest.raises(ValueError):
        apply_unitary(KetState.basis((1, 0)), np.array([[1, 1], [0, 1]]))


def test_dimension_mismatch_rejected():
    with pytest.raises(ValueError, match="modes"):
        apply_unitary(KetState.basis((1, 0, 0)), np.eye(2))


def test_ketstate_validation():
    with pytest.raises(ValueError):
        KetState(2, {(1, 0, 0): 1})
    with pytest.raises(ValueError):
        KetState(2, {(-1, 1): 1})
    with pytest.raises(ValueError):
        KetState(2, {(1, 0): 1, (1, 1): 0.1})
    with pytest.raises(ValueError, match="exceeds"):
        KetState(2, {(1, 0): 1, (0, 1): 1})


def test_ketstate_prunes_tiny_amplitudes():
    s = KetState(2, {(1, 0): 1, (0, 1): 1e-16})
    assert (0, 1) not in s.amplitudes


def test_subnormalized_state_allowed():
    assert KetState(2, {(1, 0): 0.5}).norm() == pytest.approx(0.5)


def test_embed():
    u = embed(bs_unitary(0.5), (3, 1), 4)
    assert u[3, 3] == pytest.approx(math.sqrt(0.5))
    assert u[1, 1] == pytest.approx(-math.sqrt(0.5))
    assert u[0, 0] == 1 and u[2, 2] == 1
    with pytest.raises(ValueError):
        embed(bs_unitary(0.5), (1, 1), 4)
    with pytest.raises(ValueError):
        embed(bs_unitary(0.5), (0, 4), 4)


def test_mode_index_validation():
    with pytest.raises(ValueError):
        ModeIndex(-1)
