"""Command-line front end: ``run``, ``generate`` and ``bench``.

Exit codes: 0 on success, 1 for bad input (parse errors, contract
violations, capacity), 2 when the structure itself misbehaves.
"""

from __future__ import annotations

import argparse
import csv
import sys
import time

from .engine import Connectivity
from .graph import GraphError
from .listsum import CapacityError
from .oracle import audit
from .params import ENCODINGS, ParamError
from .trace import TraceError, generate, parse

EXIT_OK, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2

BENCH_COLUMNS = ["op_index", "op_kind", "latency_ns", "chunks_split", "chunks_merged",
                 "superchunks_split", "superchunks_merged", "edges_scanned", "word_ops"]


class InvariantFailure(RuntimeError):
    pass


def _structure(args, trace) -> Connectivity:
    return Connectivity(trace.n, trace.mhat, args.encoding, K=args.k_override,
                        h=args.h_override, w=args.word_bits)


def _replay(args, trace, on_op):
    """Apply every op, calling on_op(index, op, answer, latency_ns) after each."""
    c = _structure(args, trace)
    every = args.audit_every
    for idx, op in enumerate(trace.ops):
        try:
            t0 = time.perf_counter_ns()
            if op.kind == "q":
                c.counters.reset()
                ans = c.connected(op.u, op.v)
            elif op.kind == "i":
                ans = c.insert(op.u, op.v)
            else:
                ans = c.delete(op.u, op.v)
            dt = time.perf_counter_ns() - t0
        except (GraphError, CapacityError) as exc:
            raise TraceError(str(exc), op.line) from None
        if every and (idx + 1) % every == 0:
            bad = audit(c)
            if bad:
                raise InvariantFailure(f"after op {idx} ({op}, line {op.line}): " + "; ".join(bad[:5]))
        on_op(idx, op, ans, max(1, dt), c)
    return c


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def cmd_run(args) -> int:
    trace = parse(_read(args.trace))
    out = sys.stdout

    def emit(idx, op, ans, dt, c):
        if op.kind == "q":
            out.write("1\n" if ans else "0\n")

    _replay(args, trace, emit)
    return EXIT_OK


def cmd_bench(args) -> int:
    trace = parse(_read(args.trace))
    w = csv.writer(sys.stdout, lineterminator="\n")
    w.writerow(BENCH_COLUMNS)

    def emit(idx, op, ans, dt, c):
        k = c.counters
        w.writerow([idx, op.kind, dt, k.chunks_split, k.chunks_merged, k.superchunks_split,
                    k.superchunks_merged, k.edges_scanned, k.word_ops])

    _replay(args, trace, emit)
    return EXIT_OK


def _mix(text: str):
    try:
        parts = tuple(float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad mix {text!r}") from None
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("mix needs three comma-separated weights (i,d,q)")
    return parts


def cmd_generate(args) -> int:
    try:
        trace = generate(args.n, args.mhat, args.ops, args.mix, args.seed)
    except ValueError as exc:
        raise TraceError(str(exc)) from None
    text = trace.dump()
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dynconn", description="Worst-case dynamic connectivity traces.")
    sub = p.add_subparsers(dest="command", required=True)

    def structure_flags(sp):
        sp.add_argument("trace", help="trace file, or - for stdin")
        sp.add_argument("--encoding", choices=ENCODINGS, default="dense")
        sp.add_argument("--k-override", type=int, default=None, metavar="K")
        sp.add_argument("--h-override", type=int, default=None, metavar="H")
        sp.add_argument("--seed", type=int, default=0, help="accepted for symmetry; replay is deterministic")
        sp.add_argument("--audit-every", type=int, default=0, metavar="N",
                        help="run the full auditor after every N operations")
        sp.add_argument("--word-bits", type=int, default=64, help=argparse.SUPPRESS)

    sp = sub.add_parser("run", help="replay a trace and print query answers")
    structure_flags(sp)
    sp.set_defaults(func=cmd_run)

    sp = sub.add_parser("bench", help="replay a trace and print per-op counters as CSV")
    structure_flags(sp)
    sp.set_defaults(func=cmd_bench)

    sp = sub.add_parser("generate", help="write a random trace")
    sp.add_argument("n", type=int)
    sp.add_argument("mhat", type=int)
    sp.add_argument("ops", type=int)
    sp.add_argument("--mix", type=_mix, default=(0.4, 0.3, 0.3), help="insert,delete,query weights")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("-o", "--output", default=None)
    sp.set_defaults(func=cmd_generate)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (TraceError, ParamError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InvariantFailure as exc:
        print(f"invariant failure: {exc}", file=sys.stderr)
        return EXIT_INTERNAL
    except Exception as exc:  # noqa: BLE001 - anything else is our bug
        print(f"internal error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
