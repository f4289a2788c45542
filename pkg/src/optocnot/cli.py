"""Command-line front end.

Exit codes: 0 success, 1 validation error, 2 reconstruction did not converge.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from . import report, tomography
from .elements import THETA_THIRD
from .gate import BELL_STATES
from .noise import calibrate_overlap


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _common(p: argparse.ArgumentParser, sampled_default: bool) -> None:
    p.add_argument("--circuit", default="conceptual", help="conceptual, experimental, or a circuit file")
    p.add_argument("--xi", default="1", help="photon overlap in [0, 1], or 'calibrated'")
    p.add_argument("--flip-target", type=float, default=report.DEFAULT_FLIP_TARGET,
                   help="P(11|10) used by --xi calibrated (default %(default)s)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--counts", type=int, default=10_000, help="counts per setting/input when sampling")
    p.add_argument("--out", type=Path, default=None, help="directory for JSON/CSV files")
    p.add_argument("--theta-third", type=float, default=THETA_THIRD, help="1/3 HWP axis, degrees")
    p.add_argument("--phi-c", type=float, default=0.0, help="control |1> phase, radians")
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--analytic", dest="sampled", action="store_false")
    mode.add_argument("--sampled", dest="sampled", action="store_true")
    p.set_defaults(sampled=sampled_default)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="optocnot", description="Linear-optical CNOT simulator and analysis")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    tt = sub.add_parser("truth-table", help="logical-basis output probabilities")
    _common(tt, sampled_default=False)

    fr = sub.add_parser("fringe", help="conditional coincidence fringes and visibilities")
    _common(fr, sampled_default=False)
    fr.add_argument("--step", type=float, default=2.5, help="target HWP step, degrees")

    bell = sub.add_parser("bell", help="Bell-state production with simulated tomography")
    _common(bell, sampled_default=True)
    bell.add_argument("--resamples", type=int, default=20)

    tomo = sub.add_parser("tomo", help="reconstruct a state from a counts CSV")
    tomo.add_argument("counts_csv", type=Path)
    tomo.add_argument("--target", choices=sorted(BELL_STATES), default=None)
    tomo.add_argument("--resamples", type=int, default=20)
    tomo.add_argument("--seed", type=int, default=0)
    tomo.add_argument("--out", type=Path, default=None)

    sim = sub.add_parser("simulate-counts", help="write a tomography counts CSV for a Bell-producing input")
    _common(sim, sampled_default=True)
    sim.add_argument("--state", choices=sorted(BELL_STATES), default="psi-")
    return parser


def _config(args) -> report.RunConfig:
    circuit = report.resolve_circuit(args.circuit, args.theta_third, args.phi_c)
    if args.xi == "calibrated":
        xi, source = calibrate_overlap(args.flip_target, circuit), f"calibrated to P(11|10)={args.flip_target}"
    else:
        try:
            xi, source = float(args.xi), "given"
        except ValueError:
            raise ValueError(f"--xi must be a number or 'calibrated', got {args.xi!r}") from None
    return report.RunConfig(
        command=args.command,
        circuit=args.circuit,
        xi=xi,
        xi_source=source,
        seed=args.seed,
        counts=args.counts,
        out=args.out,
        theta_third=args.theta_third,
        phi_c=args.phi_c,
        sampled=args.sampled,
        resamples=getattr(args, "resamples", 20),
        step=getattr(args, "step", 2.5),
    )


def _run(args) -> int:
    if args.command == "tomo":
        if not 0 <= args.seed < 2**64:
            raise ValueError("seed must be an unsigned 64-bit integer")
        if args.resamples == 1 or args.resamples < 0:
            raise ValueError("--resamples must be 0 or >= 2")
        records = tomography.read_counts_csv(args.counts_csv.read_text(encoding="utf-8"))
        rep = report.tomo_report(records, args.target, args.resamples, args.seed)
        text = report.dumps(rep)
        report.write_outputs(args.out, {"tomo.json": text})
        sys.stdout.write(text)
        return 0 if rep["converged"] else 2

    cfg = _config(args)
    if cfg.command == "truth-table":
        rep = report.truth_table_report(cfg)
        text = report.dumps(rep)
        report.write_outputs(cfg.out, {"truth_table.json": text, "truth_table.csv": report.truth_table_csv(rep)})
    elif cfg.command == "fringe":
        rep = report.fringe_report(cfg)
        text = report.dumps(rep)
        files = {"fringe.json": text}
        files.update({f"fringe_{k}.csv": report.fringe_csv(c) for k, c in rep["curves"].items()})
        report.write_outputs(cfg.out, files)
    elif cfg.command == "bell":
        if cfg.sampled and cfg.resamples == 1:
            raise ValueError("--resamples must be 0 or >= 2")
        rep = report.bell_report(cfg)
        text = report.dumps(rep)
        report.write_outputs(cfg.out, {"bell.json": text})
        sys.stdout.write(text)
        return 0 if rep["converged"] else 2
    else:  # simulate-counts
        records = report.simulate_bell_counts(cfg, args.state, noise_free=not cfg.sampled)
        text = tomography.write_counts_csv(records)
        report.write_outputs(cfg.out, {"counts.csv": text})
    sys.stdout.write(text)
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except (ValueError, OSError) as exc:
        print(f"optocnot: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
