"""Experiment runners behind the CLI commands, plus JSON/CSV emission.

Every runner returns a plain dict; ``dumps`` renders it with floats rounded to
12 significant digits so seeded runs are byte-identical.
"""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import analysis, measures, noise, tomography
from .dsl import parse_circuit_dsl
from .elements import THETA_THIRD
from .gate import BELL_INPUTS, BELL_STATES, LOGICAL_BASIS, Circuit, QubitAmplitudes, build_conceptual_cnot, build_experimental_cnot

# P(|11> | |10>) from the logical-basis table used to fix the overlap.
DEFAULT_FLIP_TARGET = 0.75

FRINGE_INPUT = (QubitAmplitudes.minus(), QubitAmplitudes.one())
FRINGE_CONTROL_SETTINGS = ("D", "H")

BELL_LABELS = {
    "psi-": "(|0>-|1>)_C |1>_T",
    "psi+": "(|0>+|1>)_C |1>_T",
    "phi-": "(|0>-|1>)_C |0>_T",
    "phi+": "(|0>+|1>)_C |0>_T",
}


@dataclass
class RunConfig:
    command: str
    circuit: str = "conceptual"
    xi: float = 1.0
    xi_source: str = "given"
    seed: int = 0
    counts: int = 10_000
    out: Optional[Path] = None
    theta_third: float = THETA_THIRD
    phi_c: float = 0.0
    sampled: bool = False
    resamples: int = 20
    step: float = 2.5
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if not 0.0 <= self.xi <= 1.0:
            raise ValueError(f"xi must be in [0, 1], got {self.xi}")
        if self.counts < 1:
            raise ValueError("counts must be >= 1")
        if not 0 <= self.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")


def resolve_circuit(name: str, theta_third: float = THETA_THIRD, phi_c: float = 0.0) -> Circuit:
    if name == "conceptual":
        return build_conceptual_cnot()
    if name == "experimental":
        return build_experimental_cnot(phi_c=phi_c, theta_third=theta_third)
    path = Path(name)
    if not path.is_file():
        raise ValueError(f"circuit {name!r} is neither a builtin (conceptual, experimental) nor a file")
    return parse_circuit_dsl(path.read_text(encoding="utf-8"))


def _clean(obj):
    if isinstance(obj, dict):
        return {k: _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _clean(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(f"{float(obj):.12g}")
        return 0.0 if x == 0 else x
    if isinstance(obj, Path):
        return str(obj)
    return obj


def dumps(obj) -> str:
    return json.dumps(_clean(obj), indent=2) + "\n"


def matrix_json(rho) -> dict:
    rho = np.asarray(rho)
    return {"real": np.real(rho), "imag": np.imag(rho)}


def _config_json(cfg: RunConfig) -> dict:
    return {
        "circuit": cfg.circuit,
        "xi": cfg.xi,
        "xi_source": cfg.xi_source,
        "mode": "sampled" if cfg.sampled else "analytic",
        "seed": cfg.seed if cfg.sampled else None,
        "counts": cfg.counts if cfg.sampled else None,
        "theta_third": cfg.theta_third,
        "phi_c": cfg.phi_c,
    }


def truth_table_report(cfg: RunConfig) -> dict:
    circuit = resolve_circuit(cfg.circuit, cfg.theta_third, cfg.phi_c)
    exact = noise.truth_table(circuit, cfg.xi)
    success = noise.success_probabilities(circuit, cfg.xi)
    sigma = None
    table = exact
    if cfg.sampled:
        rng = np.random.default_rng(cfg.seed)
        counts = rng.poisson(cfg.counts * exact)
        totals = counts.sum(axis=1, keepdims=True)
        safe = np.where(totals > 0, totals, 1)
        table = counts / safe
        sigma = np.sqrt(counts) / safe
    return {
        "command": "truth-table",
        **_config_json(cfg),
        "inputs": list(LOGICAL_BASIS),
        "outputs": list(LOGICAL_BASIS),
        "table": table,
        "sigma": sigma,
        "success_probability": success,
        "mean_correct": float(np.mean([table[k, j] for k, j in enumerate((0, 1, 3, 2))])),
    }


def truth_table_csv(report: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["input"] + [f"P_{o}" for o in report["outputs"]] + ["success_probability"])
    table = _clean(report["table"])
    success = _clean(report["success_probability"])
    for name, row, p in zip(report["inputs"], table, success):
        w.writerow([name] + row + [p])
    return buf.getvalue()


def fringe_report(cfg: RunConfig) -> dict:
    circuit = resolve_circuit(cfg.circuit, cfg.theta_third, cfg.phi_c)
    rho, p_success = noise.run_with_mismatch(*FRINGE_INPUT, circuit, cfg.xi)
    if rho is None:
        raise ValueError("fringe input never produces a coincidence")
    angles = analysis.default_angles(cfg.step, 180.0)
    rng = np.random.default_rng(cfg.seed)
    curves = {}
    for tag in FRINGE_CONTROL_SETTINGS:
        probs = np.array(
            [analysis.coincidence_probability(rho, tag, analysis.MeasurementSetting(h)) for h in angles]
        )
        if cfg.sampled:
            probs = rng.poisson(cfg.counts * probs) / cfg.counts
        fit = analysis.fit_fringe(angles, probs)
        curves[tag] = {
            "control_analyzer": tag,
            "visibility": fit.visibility,
            "phase_deg": fit.phase,
            "period_deg": fit.period,
            "fit_max": fit.fit_max,
            "fit_min": fit.fit_min,
            "angles": list(fit.angles),
            "probabilities": list(fit.probabilities),
        }
    return {
        "command": "fringe",
        **_config_json(cfg),
        "input": "(|0>-|1>)_C |1>_T",
        "success_probability": p_success,
        "curves": curves,
    }


def fringe_csv(curve: dict) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["angle_deg", "probability"])
    for a, p in zip(_clean(curve["angles"]), _clean(curve["probabilities"])):
        w.writerow([a, p])
    return buf.getvalue()


def bell_report(cfg: RunConfig) -> dict:
    circuit = resolve_circuit(cfg.circuit, cfg.theta_third, cfg.phi_c)
    seeds = np.random.SeedSequence(cfg.seed).spawn(len(BELL_INPUTS))
    states = {}
    all_converged = True
    for (name, (control, target)), child in zip(BELL_INPUTS.items(), seeds):
        rho, p_success = noise.run_with_mismatch(control, target, circuit, cfg.xi)
        psi = BELL_STATES[name]
        entry = {"input": BELL_LABELS[name], "success_probability": p_success}
        if cfg.sampled:
            count_seed, boot_seed = child.spawn(2)
            records = tomography.simulate_counts(rho, cfg.counts, seed=count_seed)
            result = tomography.tomograph(records, target=psi, n_resamples=cfg.resamples, seed=boot_seed)
            all_converged &= result.converged
            entry.update(
                fidelity=result.fidelity,
                tangle=result.tangle,
                linear_entropy=result.linear_entropy,
                chsh_max=result.chsh_max,
                sigma=result.sigma,
                converged=result.converged,
                resample_failures=result.resample_failures,
                rho=matrix_json(result.rho),
            )
        else:
            entry.update(tomography.state_measures(rho, psi))
            entry["rho"] = matrix_json(rho)
        entry["violates_chsh"] = entry["chsh_max"] > 2
        states[name] = entry
    return {"command": "bell", **_config_json(cfg), "resamples": cfg.resamples if cfg.sampled else None,
            "converged": all_converged, "states": states}


def tomo_report(records, target: Optional[str], resamples: int, seed: int) -> dict:
    psi = BELL_STATES[target] if target else None
    result = tomography.tomograph(records, target=psi, n_resamples=resamples, seed=seed)
    return {
        "command": "tomo",
        "target": target,
        "seed": seed,
        "resamples": resamples,
        "converged": result.converged,
        "resample_failures": result.resample_failures,
        "log_likelihood": result.log_likelihood,
        "rho": matrix_json(result.rho),
        "fidelity": result.fidelity,
        "tangle": result.tangle,
        "linear_entropy": result.linear_entropy,
        "chsh_max": result.chsh_max,
        "violates_chsh": result.chsh_max > 2,
        "sigma": result.sigma,
    }


def simulate_bell_counts(cfg: RunConfig, state: str, noise_free: bool = False) -> list:
    circuit = resolve_circuit(cfg.circuit, cfg.theta_third, cfg.phi_c)
    control, target = BELL_INPUTS[state]
    rho, _ = noise.run_with_mismatch(control, target, circuit, cfg.xi)
    if noise_free:
        return tomography.expected_counts(rho, cfg.counts)
    return tomography.simulate_counts(rho, cfg.counts, seed=cfg.seed)


def write_outputs(out: Optional[Path], files: dict[str, str]) -> None:
    if out is None:
        return
    out.mkdir(parents=True, exist_ok=True)
    for name, text in files.items():
        (out / name).write_text(text, encoding="utf-8")


def violation_threshold_tangle() -> float:
    """Tangle of the Werner state at the CHSH boundary ``p = 1/sqrt 2``."""
    p = 1 / math.sqrt(2)
    return measures.tangle(measures.werner_state(p))
