import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from optocnot.analysis import (
    ANALYZER_ANGLES,
    MeasurementSetting,
    analyzer_state,
    coincidence_probability,
    default_angles,
    fit_fringe,
    fringe_from_rho,
    fringe_scan,
    visibility,
)
from optocnot.gate import BELL_INPUTS, BELL_STATES
from optocnot.measures import as_density

S = 1 / math.sqrt(2)
EXPECTED = {
    "H": [1, 0],
    "V": [0, 1],
    "D": [S, S],
    "A": [S, -S],
    "R": [S, -1j * S],
    "L": [S, 1j * S],
}


@pytest.mark.parametrize("tag", sorted(ANALYZER_ANGLES))
def test_analyzer_states(tag):
    v = analyzer_state(tag)
    assert abs(np.vdot(EXPECTED[tag], v)) == pytest.approx(1, abs=1e-12)


def test_unknown_tag():
    with pytest.raises(ValueError):
        MeasurementSetting.named("X")


def test_singlet_fringe_analytic():
    rho = as_density(BELL_STATES["psi-"])
    for h in np.arange(0, 180, 7.5):
        p = coincidence_probability(rho, "D", MeasurementSetting(h))
        assert p == pytest.approx((1 - math.sin(math.radians(4 * h))) / 4, abs=1e-12)


@pytest.mark.parametrize("tag, phase", [("D", 67.5), ("H", 45.0)])
def test_ideal_fringes(conceptual, tag, phase):
    fit = fringe_scan(*BELL_INPUTS["psi-"], tag, default_angles(2.5), circuit=conceptual)
    assert fit.visibility == pytest.approx(1, abs=1e-9)
    assert fit.period == 90
    assert fit.phase == pytest.approx(phase, abs=1e-9)


def test_mixed_state_zero_visibility():
    fit = fringe_from_rho(np.eye(4) / 4, "D", default_angles(5))
    assert fit.visibility == 0
    assert fit.offset == pytest.approx(0.25)


def test_mismatch_reduces_visibility(conceptual):
    fit = fringe_scan(*BELL_INPUTS["psi-"], "D", default_angles(2.5), xi=5 / 6, circuit=conceptual)
    assert fit.visibility == pytest.approx(0.559, abs=1e-3)
    h = fringe_scan(*BELL_INPUTS["psi-"], "H", default_angles(2.5), xi=5 / 6, circuit=conceptual)
    assert h.visibility == pytest.approx(1, abs=1e-9)


@given(
    offset=st.floats(0.2, 1),
    frac=st.floats(0, 1),
    phase=st.floats(0, 89.9),
)
def test_fit_recovers_sinusoid(offset, frac, phase):
    angles = np.arange(0, 180, 5.0)
    amp = offset * frac
    values = offset + amp * np.cos(np.radians(4 * (angles - phase)))
    fit = fit_fringe(angles, values)
    assert fit.offset == pytest.approx(offset, abs=1e-10)
    assert fit.amplitude == pytest.approx(amp, abs=1e-10)
    assert fit.visibility == pytest.approx(frac, abs=1e-9)
    if amp > 1e-6:
        d = (fit.phase - phase + 45) % 90 - 45
        assert abs(d) < 1e-6


def test_visibility_validation():
    assert visibility(0, 0) == 0
    assert visibility(1, 0) == 1
    with pytest.raises(ValueError):
        visibility(0.1, 0.2)
    with pytest.raises(ValueError):
        fit_fringe([], [])


def test_default_angles():
    a = default_angles(2.5, 180)
    assert a[0] == 0 and a[-1] == 180 and len(a) == 73
