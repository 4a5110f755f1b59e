"""Acceptance checks, one test and one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -s`` or ``python tests/test_acceptance.py``.
Every criterion is measured, never relaxed: a bound that the structure does
not meet shows up as a FAIL line with the measured numbers.
"""

from __future__ import annotations

import functools
import random
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))

import reference as ref  # noqa: E402
from dynconn import packed as pk  # noqa: E402
from dynconn import wordmatrix as wm  # noqa: E402
from dynconn.experiments import RunConfig, merge_worst, replay_checked  # noqa: E402
from dynconn.packed import PackedMatrix  # noqa: E402
from dynconn.trace import generate  # noqa: E402

ORACLE_SEEDS = range(10)
TIME_TARGET = 10.0
AUDIT_CONFIGS = [("dense", None, None), ("packed", None, None), ("dense", 4, 4), ("packed", 4, 4)]
CHUNK_BOUND = 8
SUP_BOUND = 8
SCAN_FACTOR = 12
# quadrupling capacity: (n, mhat) pairs keep the average degree fixed so both graphs fill up
SCALING = [(200, 1000), (800, 4000)]
SCALING_SEEDS = (0, 1)
SCALING_LIMIT = 2 * 1.25


# ----------------------------------------------------------------------
# shared trace runs (each trace is replayed once per session)
@functools.lru_cache(maxsize=None)
def oracle_run(seed):
    return replay_checked(generate(200, 1000, 5000, mix=(0.4, 0.3, 0.3), seed=seed))


@functools.lru_cache(maxsize=None)
def audit_run(encoding, K, h):
    trace = generate(64, 256, 2000, seed=17)
    return replay_checked(trace, RunConfig(encoding, K, h, audit_every=1))


@functools.lru_cache(maxsize=None)
def encoding_runs():
    trace = generate(80, 400, 2000, seed=23)
    return tuple(replay_checked(trace, RunConfig(enc, K=4, h=8, keep_rows=True))
                 for enc in ("dense", "packed"))


@functools.lru_cache(maxsize=None)
def scaling_run(n, mhat, seed):
    return replay_checked(generate(n, mhat, 5 * mhat, mix=(0.6, 0.3, 0.1), seed=seed))


def all_runs():
    runs = [oracle_run(s) for s in ORACLE_SEEDS]
    runs += [audit_run(*cfg) for cfg in AUDIT_CONFIGS]
    runs += list(encoding_runs())
    runs += [scaling_run(n, m, s) for n, m in SCALING for s in SCALING_SEEDS]
    return runs


def report(name, ok, detail):
    line = f"{'PASS' if ok else 'FAIL'} {name}: {detail}"
    print(line, flush=True)
    return line


# ----------------------------------------------------------------------
# criteria
def check_oracle_equivalence():
    runs = [oracle_run(s) for s in ORACLE_SEEDS]
    wrong = sum(len(r.wrong_answers) for r in runs)
    slowest = max(r.seconds for r in runs)
    ok = wrong == 0 and slowest < TIME_TARGET
    detail = (f"{len(runs)} traces, {sum(r.queries for r in runs)} queries, {wrong} wrong; "
              f"slowest trace {slowest:.2f}s (target < {TIME_TARGET:.0f}s)")
    return ok, detail


def check_invariant_audit():
    parts, bad = [], 0
    for cfg in AUDIT_CONFIGS:
        r = audit_run(*cfg)
        bad += len(r.audit_problems)
        parts.append(f"{cfg[0]} K={r.K} h={r.h}: {len(r.audit_problems)}")
        if r.audit_problems:
            parts[-1] += f" (first: {r.audit_problems[0]})"
    return bad == 0, "violations after 2000 audited ops: " + "; ".join(parts)


def _word_kernel_cases(h, m, rng):
    """Yield (name, got, want) for one random matrix under every kernel."""
    a = rng.getrandbits(h * h)
    b = rng.getrandbits(h * h)
    arr, brr = ref.to_array(a, h), ref.to_array(b, h)
    k = rng.randrange(h)
    lo = rng.randrange(h + 1)
    hi = rng.randrange(lo, h + 1)
    t = rng.randrange(h - (hi - lo) + 1)
    yield "insert_zero_row", wm.insert_zero_row(a, k, m), ref.from_array(ref.insert_zero_row(arr, k))
    yield "insert_zero_col", wm.insert_zero_col(a, k, m), ref.from_array(ref.insert_zero_col(arr, k))
    z = arr.copy()
    z[k] = False
    yield "zero_row", wm.zero_row(a, k, m), ref.from_array(z)
    z = arr.copy()
    z[:, k] = False
    yield "zero_col", wm.zero_col(a, k, m), ref.from_array(z)
    yield "copy_row_interval", wm.copy_row_interval(a, b, lo, hi, t, m), \
        ref.from_array(ref.copy_rows(arr, brr, lo, hi, t))
    yield "copy_col_interval", wm.copy_col_interval(a, b, lo, hi, t, m), \
        ref.from_array(ref.copy_cols(arr, brr, lo, hi, t))
    j = rng.randrange(h - 1)
    yield "merge_rows", wm.merge_rows(a, j, m), ref.from_array(ref.merge_rows(arr, j))
    yield "merge_cols", wm.merge_cols(a, j, m), ref.from_array(ref.merge_cols(arr, j))
    sparse = a & b & rng.getrandbits(h * h)
    yield "find_one", wm.find_one(sparse, m), ref.find_one(ref.to_array(sparse, h))
    r2, c2 = rng.randrange(h), rng.randrange(h)
    yield "get_bit", wm.get_bit(a, r2, c2, m), int(arr[r2, c2])
    z = arr.copy()
    z[r2, c2] = True
    yield "set_bit", wm.set_bit(a, r2, c2, m), ref.from_array(z)
    z[r2, c2] = False
    yield "clear_bit", wm.clear_bit(a, r2, c2, m), ref.from_array(z)
    z = np.zeros_like(arr)
    z[lo:hi, t:t + (hi - lo)] = arr[lo:hi, t:t + (hi - lo)]
    yield "select", wm.select(a, [(lo, hi)], [(t, t + hi - lo)], m), ref.from_array(z)


def check_word_kernels():
    mismatches = []
    m4 = wm.build_masks(4)
    worked = {
        "nu1 for h=4": (m4.nu[1], 0b0111011101110111),
        "mu for h=4": (m4.mu, 0b1111000011110000),
        "nu0 for h=2": (wm.build_masks(2).nu[0], 0b1111),
    }
    for name, (got, want) in worked.items():
        if got != want:
            mismatches.append(name)
    checked = 0
    for h in (2, 4, 6, 8):
        m = wm.build_masks(h, 64)
        rng = random.Random(h)
        for _ in range(1000):
            for name, got, want in _word_kernel_cases(h, m, rng):
                checked += 1
                if got != want:
                    mismatches.append(f"{name} h={h}")
    ok = not mismatches
    detail = f"{checked} kernel results compared, {len(mismatches)} mismatches"
    if mismatches:
        detail += f" (first: {mismatches[0]})"
    return ok, detail


def _packed_trial(lay, rng, problems):
    h = lay.h
    pos = {(rng.randint(1, h), rng.randint(1, h)) for _ in range(rng.randint(0, 40))}
    m = PackedMatrix.from_positions(lay, pos)
    arr = m.to_dense()

    def ok_now(what):
        if m.violations():
            problems.append(f"{what}: {m.violations()[0]}")
        if not np.array_equal(m.to_dense(), arr):
            problems.append(f"{what}: differs from the dense matrix")

    ok_now("build")
    for k, l in list(pos) + [(rng.randint(1, h), rng.randint(1, h)) for _ in range(10)]:
        found, _ = m.search(k, l)
        if found != bool(arr[k - 1, l - 1]):
            problems.append(f"search ({k},{l})")
    for _ in range(4):
        k, l = rng.randint(1, h), rng.randint(1, h)
        (m.delete_one if arr[k - 1, l - 1] else m.insert_one)(k, l)
        arr[k - 1, l - 1] ^= True
        ok_now("insert/delete")
    tr = m.transpose()
    if tr.violations() or not np.array_equal(tr.to_dense(), arr.T):
        problems.append("transpose")
    if tr.transpose() != m:
        problems.append("transpose twice is not the identity")
    k = rng.randint(1, h - 1)
    m.merge_rows(k)
    merged = arr[k - 1] | arr[k]
    arr[k:-1] = arr[k + 1:].copy()
    arr[-1] = False
    arr[k - 1] = merged
    ok_now("merge_rows")
    k = rng.randint(1, h)
    m.insert_zero_row(k)
    arr[k:] = arr[k - 1:-1].copy()
    arr[k - 1] = False
    ok_now("insert_zero_row")
    a = rng.randint(1, h)
    b = rng.randint(a, h)
    m.zero_rows(a, b + 1)
    arr[a - 1:b] = False
    ok_now("zero_rows")


def check_packed_suite():
    problems = []
    lay8 = pk.layout(8)
    v = lay8.encode(3, 5)
    word = lay8.pack([lay8.encode(1, 2), v])
    ge, _ = lay8.marks(word, 2, v)
    if v != 53 or 256 - v != 203 or bin(ge).count("1") != 1:
        problems.append("worked control-bit example")
    lay = pk.layout(64)
    rng = random.Random(64)
    for _ in range(1000):
        _packed_trial(lay, rng, problems)
    detail = f"1000 random h=64 matrices plus the worked example, {len(problems)} problems"
    if problems:
        detail += f" (first: {problems[0]})"
    return not problems, detail


def check_encoding_equivalence():
    dense, packed = encoding_runs()
    diffs = [i for i, (a, b) in enumerate(zip(dense.rows, packed.rows)) if a != b]
    ok = not diffs and len(dense.rows) == len(packed.rows) == 2000 and dense.clean and packed.clean
    detail = f"2000 ops at K={dense.K} h={dense.h}: {len(diffs)} differing ops"
    if diffs:
        detail += f" (first at op {diffs[0]})"
    return ok, detail


def _over(worst, key, bound):
    return sorted(kind for kind, per in worst.items() if per[key] > bound)


def check_cost_discipline():
    runs = all_runs()
    chunk = max(r.maxima()["chunk_ops"] for r in runs)
    sup = max(r.maxima()["superchunk_ops"] for r in runs)
    scan_ratio = max(r.maxima()["edges_scanned"] / (SCAN_FACTOR * r.K) for r in runs)
    worst = merge_worst(runs)

    peak = {}
    for n, mhat in SCALING:
        peak[mhat] = max(scaling_run(n, mhat, s).maxima()["edges_scanned"] for s in SCALING_SEEDS)
    (_, m1), (_, m2) = SCALING
    growth = peak[m2] / max(1, peak[m1])

    ok = chunk <= CHUNK_BOUND and sup <= SUP_BOUND and scan_ratio <= 1 and growth <= SCALING_LIMIT
    detail = (f"max chunk ops {chunk} (bound {CHUNK_BOUND}, over in {_over(worst, 'chunk_ops', CHUNK_BOUND)}); "
              f"max superchunk ops {sup} (bound {SUP_BOUND}, over in "
              f"{_over(worst, 'superchunk_ops', SUP_BOUND)}); "
              f"max edges_scanned/(12K) {scan_ratio:.2f}; "
              f"scaling {m1}->{m2}: max scan {peak[m1]} -> {peak[m2]} = x{growth:.2f} "
              f"(limit x{SCALING_LIMIT})")
    return ok, detail


def check_witness_validity():
    runs = all_runs()
    bad = [p for r in runs for p in r.witness_problems]
    detail = f"{len(runs)} traces checked after every update, {len(bad)} problems"
    if bad:
        detail += f" (first: {bad[0]})"
    return not bad, detail


CRITERIA = [
    ("oracle equivalence", check_oracle_equivalence),
    ("invariant audit", check_invariant_audit),
    ("word-kernel differential suite", check_word_kernels),
    ("packed-encoding suite", check_packed_suite),
    ("encoding equivalence", check_encoding_equivalence),
    ("cost discipline", check_cost_discipline),
    ("witness validity", check_witness_validity),
]


def _run(name, capsys):
    fn = dict(CRITERIA)[name]
    ok, detail = fn()
    with capsys.disabled():
        print()
        report(name, ok, detail)
    assert ok, detail


def test_oracle_equivalence(capsys):
    _run("oracle equivalence", capsys)


def test_invariant_audit(capsys):
    _run("invariant audit", capsys)


def test_word_kernel_suite(capsys):
    _run("word-kernel differential suite", capsys)


def test_packed_suite(capsys):
    _run("packed-encoding suite", capsys)


def test_encoding_equivalence(capsys):
    _run("encoding equivalence", capsys)


def test_cost_discipline(capsys):
    _run("cost discipline", capsys)


def test_witness_validity(capsys):
    _run("witness validity", capsys)


if __name__ == "__main__":
    failed = 0
    for name, fn in CRITERIA:
        ok, detail = fn()
        report(name, ok, detail)
        failed += not ok
    sys.exit(1 if failed else 0)
