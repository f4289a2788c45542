import numpy as np
import pytest

from optocnot.dsl import DSLError, load_builtin, parse_circuit_dsl, serialize_circuit
from optocnot.gate import build_experimental_cnot, logical_operator

HEADER = "modes 4\ninput C 0 1\ninput T 2 3\noutput C 0 1\noutput T 2 3\n"


def test_golden_file_matches_builder(conceptual):
    parsed = parse_circuit_dsl(load_builtin("conceptual_cnot.circ"))
    assert parsed == conceptual
    assert np.array_equal(parsed.mode_unitary(), conceptual.mode_unitary())


@pytest.mark.parametrize("circuit", [build_experimental_cnot(), build_experimental_cnot(0.3, 61.0)])
def test_serialize_round_trip(circuit):
    back = parse_circuit_dsl(serialize_circuit(circuit))
    assert back == circuit
    assert np.array_equal(logical_operator(back), logical_operator(circuit))


def test_fraction_parameters_exact():
    c = parse_circuit_dsl(HEADER + "bs 0 2 R=1/3\nphase 1 phi=3.5\nqwp 2 3 theta=-45\npbs 0 1 2 3\n")
    assert c.elements[0].param == 1 / 3
    assert c.elements[1].param == 3.5
    assert [e.kind for e in c.elements] == ["bs", "phase", "qwp", "pbs"]


def test_comments_and_blank_lines():
    c = parse_circuit_dsl("# header\n\n" + HEADER + "  hwp 0 1 theta=22.5   # rotate\n")
    assert c.elements[0].param == 22.5


@pytest.mark.parametrize(
    "text, line, fragment",
    [
        ("bs 0 1 R=1.5\n", 1, "outside [0, 1]"),
        ("hwp 0 1 theta=1\n" + HEADER, 1, "before 'modes'"),
        (HEADER + "bs 0 9 R=0.5\n", 6, "out of range"),
        (HEADER + "bs 0 0 R=0.5\n", 6, "distinct"),
        (HEADER + "bs 0 1 T=0.5\n", 6, "expected R="),
        (HEADER + "bs 0 1 R=abc\n", 6, "not a number"),
        (HEADER + "bs 0 1\n", 6, "usage"),
        (HEADER + "mirror 0 1\n", 6, "unknown directive"),
        (HEADER + "modes 3\n", 6, "already declared"),
        (HEADER + "input X 0 1\n", 6, "unknown qubit"),
        (HEADER + "input C 0 1\n", 6, "already given"),
        ("modes 4\ninput C 0 1\n", 3, "missing input"),
        ("", 1, "no modes"),
        ("modes 0\n", 1, ">= 1"),
    ],
)
def test_errors_report_line(text, line, fragment):
    with pytest.raises(DSLError) as info:
        parse_circuit_dsl(text)
    assert info.value.line == line
    assert fragment in str(info.value)


def test_error_column():
    with pytest.raises(DSLError) as info:
        parse_circuit_dsl(HEADER + "bs 0 1 R=nan\n")
    assert info.value.column == 10
