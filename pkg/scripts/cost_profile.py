"""Worst per-operation cost, broken down by kind of operation.

    python scripts/cost_profile.py --seeds 3 --n 200 --mhat 1000 --ops 5000
"""

import argparse

from dynconn.experiments import COST_KEYS, RunConfig, merge_worst, replay_checked
from dynconn.trace import generate


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=200)
    ap.add_argument("--mhat", type=int, default=1000)
    ap.add_argument("--ops", type=int, default=5000)
    ap.add_argument("--seeds", type=int, default=3)
    ap.add_argument("--encoding", default="dense")
    ap.add_argument("--K", type=int)
    ap.add_argument("--h", type=int)
    args = ap.parse_args()

    cfg = RunConfig(args.encoding, args.K, args.h, check_witness=False)
    runs = []
    for seed in range(args.seeds):
        r = replay_checked(generate(args.n, args.mhat, args.ops, seed=seed), cfg)
        print(f"seed {seed}: K={r.K} h={r.h} {r.seconds:.2f}s maxima {r.maxima()}")
        runs.append(r)
    K = runs[0].K
    print(f"\n{'kind':<12}" + "".join(f"{k:>16}" for k in COST_KEYS))
    for kind, per in sorted(merge_worst(runs).items()):
        print(f"{kind:<12}" + "".join(f"{per[k]:>16}" for k in COST_KEYS))
    print(f"\nbounds: chunk ops <= 8, superchunk ops <= 8, edges_scanned <= 12K = {12 * K}")


if __name__ == "__main__":
    main()
