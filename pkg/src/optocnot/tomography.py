"""Two-qubit state tomography from coincidence counts.

Reconstruction is maximum likelihood under independent Poisson counts, with
``rho = T^dag T / Tr(T^dag T)`` and ``T`` lower triangular (16 real parameters).
The unknown count intensity is profiled out analytically.
"""

from __future__ import annotations

import csv
import io
import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np
from scipy.optimize import minimize

from . import measures
from .analysis import MeasurementSetting, joint_projector

TAGS = ("H", "V", "D", "A", "R", "L")


@dataclass(frozen=True)
class CountRecord:
    control: MeasurementSetting
    target: MeasurementSetting
    counts: float

    def __post_init__(self):
        if isinstance(self.control, str):
            object.__setattr__(self, "control", MeasurementSetting.named(self.control))
        if isinstance(self.target, str):
            object.__setattr__(self, "target", MeasurementSetting.named(self.target))
        if not self.counts >= 0:
            raise ValueError(f"counts must be non-negative, got {self.counts}")

    @property
    def tags(self) -> tuple[str, str]:
        return self.control.tag, self.target.tag

    def projector(self) -> np.ndarray:
        return joint_projector(self.control, self.target)


def tomography_settings() -> list[tuple[MeasurementSetting, MeasurementSetting]]:
    """The 16 joint settings ``{H, V, D, R}^2``; the logical-basis four come first."""
    first = [("H", "H"), ("H", "V"), ("V", "H"), ("V", "V")]
    rest = [p for p in itertools.product("HVDR", repeat=2) if p not in first]
    return [(MeasurementSetting.named(c), MeasurementSetting.named(t)) for c, t in first + rest]


def probabilities(rho, settings=None) -> np.ndarray:
    settings = settings or tomography_settings()
    rho = np.asarray(rho)
    return np.array([np.real(np.trace(rho @ joint_projector(c, t))) for c, t in settings])


def expected_counts(rho, n_per_setting: float, settings=None) -> list[CountRecord]:
    """Noise-free records: counts equal their mean."""
    settings = settings or tomography_settings()
    p = np.clip(probabilities(rho, settings), 0.0, None)
    return [CountRecord(c, t, float(n_per_setting * pk)) for (c, t), pk in zip(settings, p)]


def simulate_counts(rho, n_per_setting: int, seed=None, settings=None) -> list[CountRecord]:
    if n_per_setting < 1:
        raise ValueError("n_per_setting must be >= 1")
    settings = settings or tomography_settings()
    rng = np.random.default_rng(seed)
    mean = n_per_setting * np.clip(probabilities(rho, settings), 0.0, None)
    counts = rng.poisson(mean)
    return [CountRecord(c, t, int(k)) for (c, t), k in zip(settings, counts)]


def _pauli_basis() -> list[np.ndarray]:
    return [np.kron(measures.PAULI[a], measures.PAULI[b]) for a in "IXYZ" for b in "IXYZ"]


def linear_reconstruct(records: Sequence[CountRecord]) -> np.ndarray:
    """Linear inversion of counts to a unit-trace Hermitian matrix (may be non-PSD)."""
    paulis = _pauli_basis()
    design = np.array([[np.real(np.trace(r.projector() @ s)) / 4 for s in paulis] for r in records])
    if np.linalg.matrix_rank(design) < 16:
        raise ValueError("measurement set is not informationally complete")
    counts = np.array([r.counts for r in records], dtype=float)
    coef, *_ = np.linalg.lstsq(design, counts, rcond=None)
    rho = sum(c * s for c, s in zip(coef, paulis)) / 4
    tr = np.real(np.trace(rho))
    if tr <= 0:
        raise ValueError("counts carry no signal")
    rho = rho / tr
    return (rho + rho.conj().T) / 2


def _params_to_t(x: np.ndarray) -> np.ndarray:
    t = np.zeros((4, 4), dtype=complex)
    t[np.diag_indices(4)] = x[:4]
    rows, cols = np.tril_indices(4, -1)
    t[rows, cols] = x[4:10] + 1j * x[10:16]
    return t


def _t_to_params(t: np.ndarray) -> np.ndarray:
    rows, cols = np.tril_indices(4, -1)
    return np.concatenate([np.real(np.diag(t)), np.real(t[rows, cols]), np.imag(t[rows, cols])])


def cholesky_params(rho) -> np.ndarray:
    """Parameters of a lower-triangular ``T`` with ``T^dag T = rho`` (rho must be positive definite)."""
    j = np.eye(4)[::-1]
    lower = np.linalg.cholesky(j @ np.asarray(rho) @ j)
    return _t_to_params(j @ lower.conj().T @ j)


def params_to_rho(x: np.ndarray) -> np.ndarray:
    t = _params_to_t(x)
    a = t.conj().T @ t
    return a / np.real(np.trace(a))


START_EIGEN_FLOOR = 1e-9


def _start_state(records) -> np.ndarray:
    rho = linear_reconstruct(records)
    w, v = np.linalg.eigh(rho)
    w = np.clip(w, START_EIGEN_FLOOR, None)
    rho = (v * w) @ v.conj().T
    return rho / np.real(np.trace(rho))


@dataclass(frozen=True)
class MLEResult:
    rho: np.ndarray
    log_likelihood: float
    converged: bool
    iterations: int
    gradient_norm: float


def mle_reconstruct(
    records: Sequence[CountRecord], max_iter: int = 10_000, gtol: float = 1e-8
) -> MLEResult:
    projectors = np.array([r.projector() for r in records])
    n = np.array([r.counts for r in records], dtype=float)
    n_tot = n.sum()
    if n_tot <= 0:
        raise ValueError("no counts recorded")
    pi_sum = projectors.sum(axis=0)
    mask = n > 0

    def loglike(rho):
        p = np.real(np.einsum("kij,ji->k", projectors, rho))
        p = np.clip(p, 1e-300, None)
        s = p.sum()
        return float(np.sum(n[mask] * np.log(p[mask])) - n_tot * math.log(s)), p, s

    def objective(x):
        t = _params_to_t(x)
        a = t.conj().T @ t
        tr = np.real(np.trace(a))
        rho = a / tr
        ll, p, s = loglike(rho)
        g = np.einsum("k,kij->ij", np.where(mask, n / p, 0.0), projectors) - (n_tot / s) * pi_sum
        m = g / tr
        tm = t @ m
        rows, cols = np.tril_indices(4, -1)
        grad = np.concatenate([2 * np.real(np.diag(tm)), 2 * np.real(tm[rows, cols]), 2 * np.imag(tm[rows, cols])])
        return -ll / n_tot, -grad / n_tot

    x = cholesky_params(_start_state(records))
    res = minimize(
        objective,
        x,
        jac=True,
        method="L-BFGS-B",
        options={"maxiter": max_iter, "gtol": gtol * 1e-2, "ftol": 1e-16, "maxcor": 30},
    )
    x, iterations = res.x, int(res.nit)
    gnorm = float(np.linalg.norm(objective(x)[1]))
    if gnorm >= gtol and iterations < max_iter:
        x, gnorm, steps = _newton_polish(lambda v: objective(v)[1], x, gtol, max_iter - iterations)
        iterations += steps
    rho = params_to_rho(x)
    rho = (rho + rho.conj().T) / 2
    ll, _, _ = loglike(rho)
    return MLEResult(rho, ll, gnorm < gtol, iterations, gnorm)


def _newton_polish(grad, x, gtol, max_steps, h=1e-6):
    """Damped Newton on the gradient alone.

    Line searches need objective differences of order ``|g|^2`` which fall below
    double precision once ``|g|`` nears 1e-8; Newton steps only need the gradient.
    """
    g = grad(x)
    gnorm = float(np.linalg.norm(g))
    steps = 0
    lam = 1e-8
    while gnorm >= gtol and steps < min(max_steps, 50):
        steps += 1
        eye = np.eye(x.size)
        hess = np.array([(grad(x + h * e) - grad(x - h * e)) / (2 * h) for e in eye])
        hess = (hess + hess.T) / 2
        improved = False
        for _ in range(12):
            step = np.linalg.lstsq(hess + lam * eye, -g, rcond=1e-12)[0]
            g_new = grad(x + step)
            n_new = float(np.linalg.norm(g_new))
            if n_new < gnorm:
                x, g, gnorm = x + step, g_new, n_new
                lam = max(lam / 10, 1e-12)
                improved = True
                break
            lam *= 10
        if not improved:
            break
    return x, gnorm, steps


@dataclass
class TomographyResult:
    rho: np.ndarray
    log_likelihood: float
    converged: bool
    fidelity: Optional[float]
    tangle: float
    linear_entropy: float
    chsh_max: float
    sigma: dict = field(default_factory=dict)
    resample_failures: int = 0


def state_measures(rho, target=None) -> dict:
    out = {
        "tangle": measures.tangle(rho),
        "linear_entropy": measures.linear_entropy(rho),
        "chsh_max": measures.chsh_max(rho),
    }
    if target is not None:
        out["fidelity"] = measures.fidelity(rho, target)
    return out


def bootstrap_uncertainty(
    records: Sequence[CountRecord], n_resamples: int, seed=None, target=None
) -> tuple[dict, int]:
    """Parametric bootstrap: redraw each count as Poisson(observed), reconstruct, take sample std.

    Each resample uses its own child seed of ``seed``, so results do not depend
    on evaluation order. Returns ``(sigmas, number of non-converged resamples)``.
    """
    if n_resamples < 2:
        raise ValueError("n_resamples must be >= 2")
    root = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    children = root.spawn(n_resamples)
    samples: dict[str, list[float]] = {}
    failures = 0
    for child in children:
        rng = np.random.default_rng(child)
        redrawn = [CountRecord(r.control, r.target, int(rng.poisson(r.counts))) for r in records]
        fit = mle_reconstruct(redrawn)
        failures += not fit.converged
        for k, v in state_measures(fit.rho, target).items():
            samples.setdefault(k, []).append(v)
    return {k: float(np.std(v, ddof=1)) for k, v in samples.items()}, failures


def tomograph(records, target=None, n_resamples: int = 0, seed=None) -> TomographyResult:
    fit = mle_reconstruct(records)
    m = state_measures(fit.rho, target)
    sigma, failures = ({}, 0)
    if n_resamples:
        sigma, failures = bootstrap_uncertainty(records, n_resamples, seed, target)
    return TomographyResult(
        rho=fit.rho,
        log_likelihood=fit.log_likelihood,
        converged=fit.converged,
        fidelity=m.get("fidelity"),
        tangle=m["tangle"],
        linear_entropy=m["linear_entropy"],
        chsh_max=m["chsh_max"],
        sigma=sigma,
        resample_failures=failures,
    )


class CountFileError(ValueError):
    pass


CSV_HEADER = ("setting_c", "setting_t", "counts")


def read_counts_csv(text: str, expected: int = 16) -> list[CountRecord]:
    """Parse ``setting_c,setting_t,counts`` rows; errors name the offending line."""
    rows = list(csv.reader(io.StringIO(text)))
    rows = [(i + 1, r) for i, r in enumerate(rows) if r and any(c.strip() for c in r)]
    if not rows:
        raise CountFileError("empty counts file")
    lineno, header = rows[0]
    if tuple(c.strip() for c in header) != CSV_HEADER:
        raise CountFileError(f"line {lineno}: expected header {','.join(CSV_HEADER)}")
    records = []
    seen: dict[tuple[str, str], int] = {}
    for lineno, row in rows[1:]:
        if len(row) != 3:
            raise CountFileError(f"line {lineno}: expected 3 fields, got {len(row)}")
        c, t, k = (x.strip() for x in row)
        for tag in (c, t):
            if tag not in TAGS:
                raise CountFileError(f"line {lineno}: unknown setting {tag!r}")
        try:
            value = float(k)
        except ValueError:
            raise CountFileError(f"line {lineno}: counts {k!r} is not a number") from None
        if not math.isfinite(value) or value < 0:
            raise CountFileError(f"line {lineno}: counts must be non-negative, got {k}")
        if (c, t) in seen:
            raise CountFileError(f"line {lineno}: duplicate setting {c}{t} (first on line {seen[(c, t)]})")
        seen[(c, t)] = lineno
        records.append(CountRecord(c, t, int(value) if value.is_integer() else value))
    if len(records) != expected:
        raise CountFileError(f"expected {expected} settings, got {len(records)}")
    return records


def write_counts_csv(records: Iterable[CountRecord]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_HEADER)
    for r in records:
        c, t = r.tags
        if not c or not t:
            raise ValueError("only named settings can be written to CSV")
        k = r.counts
        w.writerow([c, t, int(k) if float(k).is_integer() else repr(float(k))])
    return buf.getvalue()
