"""Checked replays of traces, shared by the acceptance tests and scripts/.

``replay_checked`` drives a Connectivity through a trace next to a plain
edge set and records everything the acceptance checks look at: wrong
answers, witness-forest problems, audit findings and per-operation cost
maxima broken down by kind of operation.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field

from .engine import Connectivity
from .oracle import OracleGraph, audit, forest_problems
from .trace import Trace

COST_KEYS = ("chunk_ops", "superchunk_ops", "edges_scanned")


@dataclass
class RunConfig:
    encoding: str = "dense"
    K: int | None = None
    h: int | None = None
    w: int = 64
    audit_every: int = 0
    check_witness: bool = True
    keep_rows: bool = False


@dataclass
class Report:
    K: int = 0
    h: int = 0
    seconds: float = 0.0
    queries: int = 0
    wrong_answers: list = field(default_factory=list)
    witness_problems: list = field(default_factory=list)
    audit_problems: list = field(default_factory=list)
    worst: dict = field(default_factory=dict)  # op kind -> {cost key: max}
    rows: list = field(default_factory=list)

    def maxima(self) -> dict:
        out = dict.fromkeys(COST_KEYS, 0)
        for per in self.worst.values():
            for k in COST_KEYS:
                out[k] = max(out[k], per[k])
        return out

    @property
    def clean(self) -> bool:
        return not (self.wrong_answers or self.witness_problems or self.audit_problems)


def merge_worst(reports) -> dict:
    out = {}
    for r in reports:
        for kind, per in r.worst.items():
            slot = out.setdefault(kind, dict.fromkeys(COST_KEYS, 0))
            for k in COST_KEYS:
                slot[k] = max(slot[k], per[k])
    return out


class _Labels:
    """Oracle component labels, kept current after each update."""

    def __init__(self, g: OracleGraph):
        self.g = g
        self.lab = list(range(g.n))

    def inserted(self, u: int, v: int) -> None:
        a, b = self.lab[u], self.lab[v]
        if a != b:
            keep, drop = min(a, b), max(a, b)
            self.lab = [keep if x == drop else x for x in self.lab]

    def deleted(self, u: int, v: int) -> None:
        # relabel u's side from scratch; v's side keeps or takes a fresh label
        for s in (u, v):
            seen = {s}
            todo = deque([s])
            while todo:
                x = todo.popleft()
                for y in self.g.adj[x]:
                    if y not in seen:
                        seen.add(y)
                        todo.append(y)
            low = min(seen)
            for x in seen:
                self.lab[x] = low


def kind_of(c: Connectivity, op, was_tree: bool) -> str:
    if op.kind == "q":
        return "q"
    if op.kind == "i":
        return "i-link" if was_tree else "i-nontree"
    if not was_tree:
        return "d-nontree"
    return "d-tree+r" if c.last_replacement is not None else "d-tree"


def replay_checked(trace: Trace, cfg: RunConfig = RunConfig()) -> Report:
    c = Connectivity(trace.n, trace.mhat, cfg.encoding, K=cfg.K, h=cfg.h, w=cfg.w)
    g = OracleGraph(trace.n)
    labels = _Labels(g)
    rep = Report(K=c.params.K, h=c.params.h)
    elapsed = 0.0
    for idx, op in enumerate(trace.ops):
        tree = False
        t0 = time.perf_counter()
        if op.kind == "q":
            c.counters.reset()
            ans = c.connected(op.u, op.v)
        elif op.kind == "i":
            ans = None
            c.insert(op.u, op.v)
            tree = c.graph.lookup_edge(op.u, op.v).tree
        else:
            ans = None
            tree = c.graph.lookup_edge(op.u, op.v).tree
            c.delete(op.u, op.v)
        elapsed += time.perf_counter() - t0

        if op.kind == "i":
            g.insert(op.u, op.v)
            labels.inserted(op.u, op.v)
        elif op.kind == "d":
            g.delete(op.u, op.v)
            labels.deleted(op.u, op.v)
        else:
            rep.queries += 1
            want = labels.lab[op.u] == labels.lab[op.v]
            if ans != want:
                rep.wrong_answers.append((idx, op.line, ans, want))

        kind = kind_of(c, op, tree)
        cnt = c.counters
        slot = rep.worst.setdefault(kind, dict.fromkeys(COST_KEYS, 0))
        for k in COST_KEYS:
            slot[k] = max(slot[k], getattr(cnt, k))

        if cfg.keep_rows:
            rep.rows.append((ans, cnt.structural(), tuple(sorted(c.witness_forest()))))
        if cfg.check_witness and op.kind != "q":
            for msg in forest_problems(c.witness_forest(), labels.lab):
                rep.witness_problems.append((idx, msg))
        if cfg.audit_every and (idx + 1) % cfg.audit_every == 0:
            for msg in audit(c, g):
                rep.audit_problems.append((idx, msg))
    rep.seconds = elapsed
    return rep
