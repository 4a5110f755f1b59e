"""How the worst per-op edges_scanned grows with capacity.

Each row fills the graph to capacity (5 * mhat ops, mostly inserts). With
--fixed-n the vertex count stays put, so the graph gets denser as mhat grows;
otherwise n grows with mhat and the average degree stays the same.
"""

import argparse

from dynconn.experiments import RunConfig, replay_checked
from dynconn.trace import generate


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--mhats", type=int, nargs="+", default=[250, 1000, 4000])
    ap.add_argument("--degree", type=float, default=10.0, help="target average degree")
    ap.add_argument("--fixed-n", type=int)
    ap.add_argument("--seeds", type=int, default=2)
    args = ap.parse_args()

    cfg = RunConfig(check_witness=False)
    prev = None
    print(f"{'n':>6} {'mhat':>6} {'K':>4} {'max scan':>9} {'scan/K':>7} {'growth':>7}")
    for mhat in args.mhats:
        n = args.fixed_n or max(8, round(2 * mhat / args.degree))
        peak, K = 0, None
        for seed in range(args.seeds):
            r = replay_checked(generate(n, mhat, 5 * mhat, mix=(0.6, 0.3, 0.1), seed=seed), cfg)
            peak, K = max(peak, r.maxima()["edges_scanned"]), r.K
        growth = f"x{peak / prev:.2f}" if prev else "-"
        print(f"{n:>6} {mhat:>6} {K:>4} {peak:>9} {peak / K:>7.2f} {growth:>7}")
        prev = peak


if __name__ == "__main__":
    main()
