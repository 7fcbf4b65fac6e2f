#!/usr/bin/env python3
"""How well does entanglement capacity estimate Holevo capacity?

Runs E and chi over one family's alpha grid, prints the per-point gap
table, and optionally saves the raw records.  chi uses a two-member
ensemble by default; bump --ensemble and --anc to probe saturation.
"""

import argparse
import sys

from gatecap.sweep import SweepSpec, compare_report, emit, format_report, run_sweep


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("family", choices=("u1", "u2", "u3"))
    ap.add_argument("--grid", type=int, default=10)
    ap.add_argument("--anc", type=int, default=1)
    ap.add_argument("--ensemble", type=int, default=2)
    ap.add_argument("--restarts", type=int, default=5)
    ap.add_argument("--max-steps", type=int, default=500_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--records-out", default=None,
                    help="also write the raw records (csv)")
    args = ap.parse_args()

    spec = SweepSpec(
        family=args.family, kinds=("E", "chi"), grid=args.grid,
        d_anc=(args.anc,), ensemble_size=(args.ensemble,),
        restarts=args.restarts, seed=args.seed,
        schedule={"max_steps": args.max_steps})
    records = run_sweep(spec)
    if args.records_out:
        emit(records, "csv", args.records_out)
        print(f"wrote {args.records_out}", file=sys.stderr)
    sys.stdout.write(format_report(compare_report(records)))
    return 1 if any(not r.ok for r in records) else 0


if __name__ == "__main__":
    raise SystemExit(main())
