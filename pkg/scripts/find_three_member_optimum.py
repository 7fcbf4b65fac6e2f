#!/usr/bin/env python3
"""Locate grid points where free probabilities beat equal ones for chi_U2.

For each alpha on the grid, optimizes chi of the u2 gate with a
four-member ensemble twice (probabilities pinned to 1/4 versus free) and
reports the advantage together with the sorted witness probabilities.
Points whose optimum concentrates on three members with two equal weights
stand out immediately in the last column.
"""

import argparse
import math

import numpy as np

from gatecap.annealer import OptProblem, default_config, maximize
from gatecap.gates import GateFamily
from gatecap.linalg import SubsystemLayout


def optimize(alpha, d_anc, size, equal, restarts, max_steps, seed):
    problem = OptProblem("chi", GateFamily("u2", alpha),
                         SubsystemLayout(2, d_anc, 2, d_anc),
                         ensemble_size=size, equal_probs=equal)
    cfg = default_config("chi", seed=seed, restarts=restarts, max_steps=max_steps)
    return maximize(problem, cfg)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--grid", type=int, default=10)
    ap.add_argument("--anc", type=int, default=2)
    ap.add_argument("--ensemble", type=int, default=4)
    ap.add_argument("--restarts", type=int, default=5)
    ap.add_argument("--max-steps", type=int, default=400_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print("alpha        equal          free           advantage   free probs (sorted)")
    for i in range(args.grid + 1):
        alpha = i * math.pi / 4 / args.grid
        eq = optimize(alpha, args.anc, args.ensemble, True,
                      args.restarts, args.max_steps, args.seed)
        free = optimize(alpha, args.anc, args.ensemble, False,
                        args.restarts, args.max_steps, args.seed)
        probs = np.sort(free.witness.probs)[::-1]
        print("%-12.6g %-14.10f %-14.10f %+.3e  %s"
              % (alpha, eq.best_value, free.best_value,
                 free.best_value - eq.best_value, np.round(probs, 4)))
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
