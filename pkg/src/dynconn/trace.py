"""Trace files: parsing, random generation and replay."""

from __future__ import annotations

import random
from dataclasses import dataclass


class TraceError(ValueError):
    """Malformed trace; ``line`` is 1-based."""

    def __init__(self, msg: str, line: int | None = None):
        super().__init__(msg if line is None else f"line {line}: {msg}")
        self.line = line


@dataclass(frozen=True)
class TraceOp:
    kind: str
    u: int
    v: int
    line: int = 0

    def __str__(self) -> str:
        return f"{self.kind} {self.u} {self.v}"


@dataclass(frozen=True)
class Trace:
    n: int
    mhat: int
    ops: tuple

    def dump(self) -> str:
        return "".join([f"init {self.n} {self.mhat}\n"] + [f"{op}\n" for op in self.ops])


def _int(tok: str, line: int) -> int:
    try:
        return int(tok, 10)
    except ValueError:
        raise TraceError(f"not a decimal integer: {tok!r}", line) from None


def parse(text: str) -> Trace:
    header = None
    ops = []
    for no, raw in enumerate(text.splitlines(), 1):
        s = raw.split("#", 1)[0].strip()
        if not s:
            continue
        parts = s.split()
        if parts[0] == "init":
            if header is not None:
                raise TraceError("second init line", no)
            if len(parts) != 3:
                raise TraceError("expected: init <n> <mhat>", no)
            n, mhat = _int(parts[1], no), _int(parts[2], no)
            if n < 1 or mhat < 1:
                raise TraceError("n and mhat must be positive", no)
            header = (n, mhat)
            continue
        if parts[0] not in ("i", "d", "q"):
            raise TraceError(f"unknown operation {parts[0]!r}", no)
        if header is None:
            raise TraceError("operation before the init line", no)
        if len(parts) != 3:
            raise TraceError(f"expected: {parts[0]} <u> <v>", no)
        u, v = _int(parts[1], no), _int(parts[2], no)
        for x in (u, v):
            if not 0 <= x < header[0]:
                raise TraceError(f"vertex {x} outside [0, {header[0]})", no)
        ops.append(TraceOp(parts[0], u, v, no))
    if header is None:
        raise TraceError("missing init line")
    return Trace(header[0], header[1], tuple(ops))


def generate(n: int, mhat: int, ops: int, mix=(0.4, 0.3, 0.3), seed: int = 0) -> Trace:
    """A random valid trace; deletes pick live edges and inserts respect mhat."""
    if n < 2:
        raise ValueError("need at least two vertices")
    if len(mix) != 3 or any(p < 0 for p in mix) or abs(sum(mix) - 1) > 1e-9:
        raise ValueError(f"mix must be three non-negative weights summing to 1, got {mix}")
    limit = min(mhat, n * (n - 1) // 2)
    rng = random.Random(seed)
    live: list = []
    where: dict = {}
    out = []

    def add():
        while True:
            u, v = rng.sample(range(n), 2)
            key = (min(u, v), max(u, v))
            if key not in where:
                break
        where[key] = len(live)
        live.append(key)
        return TraceOp("i", u, v)

    def drop():
        k = rng.randrange(len(live))
        key = live[k]
        live[k] = live[-1]
        where[live[k]] = k
        live.pop()
        del where[key]
        u, v = key if rng.random() < 0.5 else key[::-1]
        return TraceOp("d", u, v)

    for _ in range(ops):
        r = rng.random()
        if r < mix[0]:
            out.append(add() if len(live) < limit else drop())
        elif r < mix[0] + mix[1]:
            out.append(drop() if live else add())
        else:
            u, v = rng.sample(range(n), 2)
            out.append(TraceOp("q", u, v))
    return Trace(n, mhat, tuple(out))
