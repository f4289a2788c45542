"""Line-oriented circuit description format.

::

    modes 6
    label 0 C0
    bs 2 3 R=1/2
    hwp 2 3 theta=22.5
    qwp 2 3 theta=45
    pbs 0 1 2 3
    phase 1 phi=3.14159
    input C 0 1
    output T 2 3

``#`` starts a comment. Numbers may be decimals or fractions (``1/3``).
Angles are degrees, phases radians.
"""

from __future__ import annotations

import math
from fractions import Fraction
from importlib import resources

from . import elements as el
from .gate import QUBITS, Circuit


class DSLError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def _tokens(raw: str) -> list[tuple[str, int]]:
    out = []
    i = 0
    while i < len(raw):
        if raw[i].isspace():
            i += 1
            continue
        j = i
        while j < len(raw) and not raw[j].isspace():
            j += 1
        out.append((raw[i:j], i + 1))
        i = j
    return out


def _number(tok: str, line: int, col: int) -> float:
    try:
        value = float(Fraction(tok))
    except (ValueError, ZeroDivisionError):
        raise DSLError(f"not a number: {tok!r}", line, col) from None
    if not math.isfinite(value):
        raise DSLError(f"not a finite number: {tok!r}", line, col)
    return value


def _int(tok: str, line: int, col: int) -> int:
    try:
        return int(tok)
    except ValueError:
        raise DSLError(f"expected a mode index, got {tok!r}", line, col) from None


_ARITY = {"bs": 2, "hwp": 2, "qwp": 2, "pbs": 4, "phase": 1}
_KEY = {"bs": "R", "hwp": "theta", "qwp": "theta", "phase": "phi"}


def parse_circuit_dsl(text: str) -> Circuit:
    modes = None
    modes_line = 0
    labels: dict[int, str] = {}
    elements: list[el.OpticalElement] = []
    maps: dict[str, dict[str, tuple[int, int]]] = {"input": {}, "output": {}}
    last_line = 0

    def mode(tok, line, col):
        if modes is None:
            raise DSLError("mode referenced before 'modes' declaration", line, col)
        m = _int(tok, line, col)
        if not 0 <= m < modes:
            raise DSLError(f"mode {m} out of range (0..{modes - 1})", line, col)
        return m

    for line, raw in enumerate(text.splitlines(), start=1):
        last_line = line
        toks = _tokens(raw.split("#", 1)[0])
        if not toks:
            continue
        (word, wcol), args = toks[0], toks[1:]
        word = word.lower()
        if word == "modes":
            if modes is not None:
                raise DSLError(f"modes already declared on line {modes_line}", line, wcol)
            if len(args) != 1:
                raise DSLError("usage: modes <n>", line, wcol)
            modes = _int(args[0][0], line, args[0][1])
            if modes < 1:
                raise DSLError("mode count must be >= 1", line, args[0][1])
            modes_line = line
        elif word == "label":
            if len(args) != 2:
                raise DSLError("usage: label <idx> <name>", line, wcol)
            labels[mode(args[0][0], line, args[0][1])] = args[1][0]
        elif word in _ARITY:
            n = _ARITY[word]
            key = _KEY.get(word)
            want = n + (1 if key else 0)
            if len(args) != want:
                usage = " ".join([word] + ["<i>"] * n + ([f"{key}=<value>"] if key else []))
                raise DSLError(f"usage: {usage}", line, wcol)
            param = 0.0
            if key:
                tok, col = args[n]
                name, sep, value = tok.partition("=")
                if not sep or name != key:
                    raise DSLError(f"expected {key}=<value>, got {tok!r}", line, col)
                param = _number(value, line, col + len(name) + 1)
                if word == "bs" and not 0.0 <= param <= 1.0:
                    raise DSLError(f"reflectivity R={value} outside [0, 1]", line, col)
            idx = [mode(t, line, c) for t, c in args[:n]]
            if len(set(idx)) != len(idx):
                raise DSLError(f"{word} modes must be distinct", line, args[0][1])
            elements.append(el.OpticalElement(word, tuple(idx), param))
        elif word in maps:
            if len(args) != 3:
                raise DSLError(f"usage: {word} <qubit> <i0> <i1>", line, wcol)
            q, qcol = args[0]
            if q not in QUBITS:
                raise DSLError(f"unknown qubit {q!r}; expected C or T", line, qcol)
            if q in maps[word]:
                raise DSLError(f"{word} for qubit {q} already given", line, qcol)
            pair = (mode(args[1][0], line, args[1][1]), mode(args[2][0], line, args[2][1]))
            if pair[0] == pair[1]:
                raise DSLError("qubit modes must be distinct", line, args[2][1])
            maps[word][q] = pair
        else:
            raise DSLError(f"unknown directive {word!r}", line, wcol)

    if modes is None:
        raise DSLError("no modes declared", max(last_line, 1))
    for word in ("input", "output"):
        missing = [q for q in QUBITS if q not in maps[word]]
        if missing:
            raise DSLError(f"missing {word} map for qubit(s) {', '.join(missing)}", last_line + 1)
    try:
        return Circuit(
            mode_count=modes,
            elements=tuple(elements),
            inputs=maps["input"],
            outputs=maps["output"],
            labels=tuple(labels.get(i, f"m{i}") for i in range(modes)),
        )
    except ValueError as exc:
        raise DSLError(str(exc), last_line + 1) from None


def serialize_circuit(circuit: Circuit) -> str:
    lines = [f"modes {circuit.mode_count}"]
    lines += [f"label {i} {name}" for i, name in enumerate(circuit.labels)]
    for e in circuit.elements:
        modes = " ".join(str(m) for m in e.modes)
        key = _KEY.get(e.kind)
        lines.append(f"{e.kind} {modes} {key}={e.param!r}" if key else f"{e.kind} {modes}")
    for word, m in (("input", circuit.inputs), ("output", circuit.outputs)):
        lines += [f"{word} {q} {m[q][0]} {m[q][1]}" for q in QUBITS]
    return "\n".join(lines) + "\n"


def load_builtin(name: str) -> str:
    return resources.files("optocnot.circuits").joinpath(name).read_text(encoding="utf-8")
