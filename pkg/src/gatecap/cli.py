"""Command line front end: point evaluations, grid sweeps, comparisons.

Exit codes: 0 on full success, 1 when any record failed or a file could
not be read or written, 2 on usage errors (argparse's convention).
"""

from __future__ import annotations

import argparse
import sys

from .gates import FAMILY_TAGS
from .objectives import ENTANGLEMENT_KINDS, KINDS
from .sweep import (GRID_DEFAULT, PointTask, SweepSpec, compare_report, emit,
                    format_report, load_records, run_point, run_sweep)


def _schedule_overrides(args) -> dict:
    over = {}
    if args.sigma0 is not None:
        over["sigma0"] = args.sigma0
    if args.tau0 is not None:
        over["tau0"] = args.tau0
    if args.max_steps is not None:
        over["max_steps"] = args.max_steps
    if args.scheme is not None:
        over["sigma_scheme"] = args.scheme
    return over


def _add_common(p: argparse.ArgumentParser, multi: bool) -> None:
    p.add_argument("--family", required=True, choices=FAMILY_TAGS,
                   help="gate family")
    kind_kw = dict(action="append") if multi else {}
    p.add_argument("--kind", required=True, choices=KINDS, **kind_kw,
                   help="capacity kind" + (" (repeatable)" if multi else ""))
    anc_kw = dict(action="append") if multi else dict(default=1)
    p.add_argument("--anc", type=int, **anc_kw,
                   help="ancilla dimension per side (default 1%s)"
                        % (", repeatable" if multi else ""))
    ens_kw = dict(action="append") if multi else dict(default=2)
    p.add_argument("--ensemble", type=int, **ens_kw,
                   help="ensemble size for chi/dchi (default 2%s)"
                        % (", repeatable" if multi else ""))
    p.add_argument("--equal-probs", action="store_true",
                   help="hold ensemble probabilities fixed at 1/n")
    p.add_argument("--restarts", type=int, default=5, metavar="R")
    p.add_argument("--seed", type=int, default=0, metavar="S")
    p.add_argument("--out", default="-", metavar="PATH",
                   help="output file, - for stdout (default)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--sigma0", type=float, default=None,
                   help="initial proposal step size")
    p.add_argument("--tau0", type=float, default=None,
                   help="initial annealing temperature")
    p.add_argument("--max-steps", type=int, default=None)
    p.add_argument("--scheme", choices=("stall", "rate20"), default=None,
                   help="step-size schedule after warmup")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="gatecap",
        description="Entanglement and Holevo capacities of two-qubit gates "
                    "by stochastic optimization.")
    sub = p.add_subparsers(dest="command", required=True)

    pt = sub.add_parser("point", help="evaluate one capacity at one alpha")
    pt.add_argument("--alpha", type=float, required=True)
    _add_common(pt, multi=False)

    sw = sub.add_parser("sweep", help="evaluate capacities over an alpha grid")
    sw.add_argument("--alpha", type=float, action="append", metavar="A",
                    help="explicit grid point (repeatable, overrides --grid)")
    sw.add_argument("--grid", type=int, default=GRID_DEFAULT, metavar="N",
                    help="number of intervals over [0, pi/4] (default %(default)s)")
    _add_common(sw, multi=True)

    cp = sub.add_parser("compare",
                        help="entanglement-vs-Holevo report from result files")
    cp.add_argument("inputs", nargs="+", metavar="FILE",
                    help="csv or json result files")
    cp.add_argument("--out", default="-", metavar="PATH")
    return p


def _cmd_point(args) -> int:
    task = PointTask(
        family=args.family, alpha=args.alpha, kind=args.kind, d_anc=args.anc,
        ensemble_size=args.ensemble, seed=args.seed, restarts=args.restarts,
        equal_probs=args.equal_probs, schedule=_schedule_overrides(args))
    rec = run_point(task)
    emit([rec], args.format, args.out)
    if rec.error is not None:
        print(f"gatecap: point failed: {rec.error}", file=sys.stderr)
        return 1
    return 0


def _cmd_sweep(args) -> int:
    spec = SweepSpec(
        family=args.family, kinds=tuple(args.kind),
        alphas=tuple(args.alpha) if args.alpha else None, grid=args.grid,
        d_anc=tuple(args.anc) if args.anc else (1,),
        ensemble_size=tuple(args.ensemble) if args.ensemble else (2,),
        equal_probs=args.equal_probs, restarts=args.restarts, seed=args.seed,
        schedule=_schedule_overrides(args))
    records = run_sweep(spec)
    emit(records, args.format, args.out)
    failed = [r for r in records if not r.ok]
    for r in failed:
        print(f"gatecap: {r.family} alpha={r.alpha:.6g} {r.kind} failed: {r.error}",
              file=sys.stderr)
    return 1 if failed else 0


def _cmd_compare(args) -> int:
    records = []
    for path in args.inputs:
        records.extend(load_records(path))
    report = compare_report(records)
    text = format_report(report)
    if args.out == "-":
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handler = {"point": _cmd_point, "sweep": _cmd_sweep, "compare": _cmd_compare}
    try:
        return handler[args.command](args)
    except (OSError, ValueError) as exc:
        print(f"gatecap: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
