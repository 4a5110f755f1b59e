"""Fully dynamic connectivity with worst-case bounded updates.

A spanning forest is kept as Euler tours (see :mod:`dynconn.tour`).  Every
non-tree edge sets one bit in the chunk adjacency of its two host chunks;
the list-sum trees OR those bits up to whole tours, so deleting a tree edge
finds a replacement with a constant number of vector ANDs, one leaf descent
and one chunk scan.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass

from .adjacency import make_store
from .graph import GraphError, GraphStore
from .params import DENSE, ParamError, Params
from .tour import TourIndex


@dataclass
class OpCounters:
    chunks_split: int = 0
    chunks_merged: int = 0
    superchunks_split: int = 0
    superchunks_merged: int = 0
    edges_scanned: int = 0
    word_ops: int = 0

    def reset(self) -> None:
        for f in dataclasses.fields(self):
            setattr(self, f.name, 0)

    def add(self, other: "OpCounters") -> None:
        for f in dataclasses.fields(self):
            setattr(self, f.name, getattr(self, f.name) + getattr(other, f.name))

    def as_dict(self) -> dict:
        return dataclasses.asdict(self)

    def structural(self) -> tuple:
        """Everything but word_ops, which depends on the cell encoding."""
        return (self.chunks_split, self.chunks_merged, self.superchunks_split,
                self.superchunks_merged, self.edges_scanned)

    @property
    def chunk_ops(self) -> int:
        return self.chunks_split + self.chunks_merged

    @property
    def superchunk_ops(self) -> int:
        return self.superchunks_split + self.superchunks_merged


class Connectivity:
    def __init__(self, n: int, mhat: int, encoding: str = DENSE, K: int | None = None,
                 h: int | None = None, w: int = 64):
        self.params = Params.build(mhat, w=w, encoding=encoding, K=K, h=h)
        if self.params.h < 4:
            raise ParamError("the tour index needs h >= 4")
        self.n = n
        self.graph = GraphStore(n, mhat, self.params.K)
        self.adj = make_store(self.params)
        self.counters = OpCounters()
        self.total = OpCounters()
        self.tours = TourIndex(self.params, self.graph.vertices, self.adj, self.counters)
        self.lsum = self.tours.ls
        self.last_replacement = None

    # ------------------------------------------------------------------
    def _check(self, x) -> None:
        if not (isinstance(x, int) and 0 <= x < self.n):
            raise GraphError(f"vertex {x} outside [0, {self.n})")

    def connected(self, u: int, v: int) -> bool:
        self._check(u)
        self._check(v)
        vs = self.graph.vertices
        return self.tours.list_of(vs[u]) == self.tours.list_of(vs[v])

    def witness_forest(self) -> set:
        return {e.key for e in self.graph.edges.values() if e.tree}

    def _begin(self):
        self.counters.reset()
        return self.adj.word_ops + self.lsum.word_ops

    def _end(self, w0: int) -> None:
        t = self.tours
        t.restore()
        t.flush()
        self.counters.word_ops = self.adj.word_ops + self.lsum.word_ops - w0
        self.total.add(self.counters)

    # ------------------------------------------------------------------
    def insert(self, u: int, v: int) -> None:
        t = self.tours
        vs = self.graph.vertices
        self._check(u)
        self._check(v)
        ta, tb = t.tour_of_vertex(vs[u]), t.tour_of_vertex(vs[v])
        if ta is not tb:
            e, _ = self.graph.add_edge(u, v, tree=True)
            w0 = self._begin()
            t.link(e, ta, tb)
        else:
            e, surgeries = self.graph.add_edge(u, v)
            w0 = self._begin()
            t.apply_surgeries(surgeries)
            t.set_edge_bit(e)
        self._end(w0)

    def delete(self, u: int, v: int) -> None:
        e = self.graph.lookup_edge(u, v)
        if e is None:
            self.graph.remove_edge(u, v)  # raises with the right message
        t = self.tours
        self.last_replacement = None
        if not e.tree:
            ca, cb = e.host[e.u].elem.chunk, e.host[e.v].elem.chunk
            _, surgeries = self.graph.remove_edge(u, v)
            w0 = self._begin()
            t.apply_surgeries(surgeries)
            t.drop_edge_bit(e, ca, cb)
            self._end(w0)
            return
        self.graph.remove_edge(u, v)
        w0 = self._begin()
        plan = t.begin_cut(e)
        if plan.tour.long:
            tu, tv = t.finish_cut(plan)
            t.flush()
            chunk = t.find_replacement_long(tu, tv)
        else:
            t.flush()
            chunk = t.find_replacement_short(plan)
            tu, tv = t.finish_cut(plan)
        r = None
        if chunk is not None:
            r = t.scan_for_crossing(chunk, tv if chunk.sup.tour is tu else tu)
            if r is None:
                raise RuntimeError("adjacency bit without a crossing edge")
        if r is not None:
            self._promote_replacement(r)
        self._end(w0)

    def replacement_edge(self, tu, tv):
        """A non-tree edge joining tours tu and tv, or None; both must be long."""
        chunk = self.tours.find_replacement_long(tu, tv)
        if chunk is None:
            return None
        return self.tours.scan_for_crossing(chunk, tv if chunk.sup.tour is tu else tu)

    def _promote_replacement(self, r) -> None:
        t = self.tours
        ca, cb = r.host[r.u].elem.chunk, r.host[r.v].elem.chunk
        ta, tb = ca.sup.tour, cb.sup.tour
        surgeries = self.graph.make_tree(r)
        t.apply_surgeries(surgeries)
        t.drop_edge_bit(r, ca, cb)
        t.link(r, ta, tb)
        self.last_replacement = r.key
