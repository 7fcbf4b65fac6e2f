#!/usr/bin/env python3
"""Sweep one gate family's capacities over an alpha grid and save the table.

Typical uses:

    python scripts/run_family_sweep.py u1 --kind E --kind chi --out u1.csv
    python scripts/run_family_sweep.py u3 --kind chi --anc 3 --anc 4 \
        --ensemble 4 --grid 10 --format json --out u3_chi.json

The CSV is the plotting artifact; pass --gnuplot DIR to also drop
two-column (alpha, value) files per series.
"""

import argparse
import sys

from gatecap.sweep import SweepSpec, emit, emit_gnuplot, run_sweep


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("family", choices=("u1", "u2", "u3"))
    ap.add_argument("--kind", action="append", required=True,
                    choices=("E", "dE", "chi", "dchi"))
    ap.add_argument("--grid", type=int, default=10)
    ap.add_argument("--anc", type=int, action="append")
    ap.add_argument("--ensemble", type=int, action="append")
    ap.add_argument("--equal-probs", action="store_true")
    ap.add_argument("--restarts", type=int, default=5)
    ap.add_argument("--max-steps", type=int, default=500_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--format", choices=("csv", "json"), default="csv")
    ap.add_argument("--out", default="-")
    ap.add_argument("--gnuplot", metavar="DIR", default=None)
    args = ap.parse_args()

    spec = SweepSpec(
        family=args.family, kinds=tuple(args.kind), grid=args.grid,
        d_anc=tuple(args.anc) if args.anc else (1,),
        ensemble_size=tuple(args.ensemble) if args.ensemble else (2,),
        equal_probs=args.equal_probs, restarts=args.restarts, seed=args.seed,
        schedule={"max_steps": args.max_steps})
    records = run_sweep(spec)
    emit(records, args.format, args.out)
    if args.gnuplot:
        for path in emit_gnuplot(records, args.gnuplot):
            print(f"wrote {path}", file=sys.stderr)
    return 1 if any(not r.ok for r in records) else 0


if __name__ == "__main__":
    raise SystemExit(main())
