"""Replay one trace under both cell encodings and report the first divergence.

Both runs use the same K and h; only the ChAdj cell encoding differs.
"""

import argparse

from dynconn.experiments import RunConfig, replay_checked
from dynconn.trace import generate


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=80)
    ap.add_argument("--mhat", type=int, default=400)
    ap.add_argument("--ops", type=int, default=2000)
    ap.add_argument("--K", type=int, default=4)
    ap.add_argument("--h", type=int, default=8)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    trace = generate(args.n, args.mhat, args.ops, seed=args.seed)
    runs = {enc: replay_checked(trace, RunConfig(enc, args.K, args.h, keep_rows=True))
            for enc in ("dense", "packed")}
    for enc, r in runs.items():
        print(f"{enc:>6}: {r.seconds:.2f}s clean={r.clean} maxima={r.maxima()}")
    a, b = runs["dense"].rows, runs["packed"].rows
    diff = next((i for i, (x, y) in enumerate(zip(a, b)) if x != y), None)
    if diff is None:
        print(f"identical answers, forests and structural counters over {len(a)} ops")
    else:
        print(f"first divergence at op {diff}: {trace.ops[diff]}\n  dense  {a[diff]}\n  packed {b[diff]}")


if __name__ == "__main__":
    main()
