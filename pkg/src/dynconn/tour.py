"""Euler tours cut into chunks and superchunks.

A tour is a linear list of superchunks, each a list of chunks, each a list
of elements; the tour itself is read cyclically.  An element is either one
artificial vertex of the principal visit of its vertex or a lone
non-principal copy.  Every visit knows the tree edge whose occurrence leaves
it (``out``), and every tree edge knows, for each orientation, the visit it
leaves from.

The mass of an element is its hosted non-tree load plus one if it closes a
visit that an edge occurrence leaves.  Chunks hold mass in [K, 3K] (or the
whole tour when its mass is below K); superchunks hold h/2..h-1 chunks and a
list-sum id, except that a tour of fewer than h/2 chunks is one superchunk
under a private negative key.

Every structural step keeps the adjacency store aligned: row and column
surgery follows chunks and superchunks around, while chunks whose rows can
no longer be trusted are queued as *dirty* and rebuilt by :meth:`flush`.
"""

from __future__ import annotations

import itertools

from .graph import Artificial, EdgeRecord, Surgery, Vertex
from .listsum import ListSum
from .params import Params


class TourError(RuntimeError):
    pass


class Visit:
    __slots__ = ("vertex", "principal", "elem", "out")

    def __init__(self, vertex: Vertex, principal: bool, elem=None):
        self.vertex = vertex
        self.principal = principal
        self.elem = elem
        self.out: EdgeRecord | None = None

    @property
    def first(self):
        return self.vertex.arts[0].elem if self.principal else self.elem

    @property
    def last(self):
        return self.vertex.arts[-1].elem if self.principal else self.elem

    def __repr__(self) -> str:
        mark = "" if self.principal else "'"
        return f"Visit(v{self.vertex.id}{mark})"


class Elem:
    __slots__ = ("vertex", "art", "visit", "chunk")

    def __init__(self, vertex: Vertex, art: Artificial | None, visit: Visit):
        self.vertex = vertex
        self.art = art
        self.visit = visit
        self.chunk: Chunk | None = None

    @property
    def mass(self) -> int:
        m = self.art.load if self.art is not None else 0
        v = self.visit
        if v.out is not None and v.last is self:
            m += 1
        return m

    def __repr__(self) -> str:
        mark = "" if self.art is not None else "'"
        return f"e{self.vertex.id}{mark}"


class Chunk:
    __slots__ = ("elems", "sup", "pos")

    def __init__(self, elems=()):
        self.elems = list(elems)
        for e in self.elems:
            e.chunk = self
        self.sup: Superchunk | None = None
        self.pos = 0

    @property
    def alive(self) -> bool:
        return self.sup is not None

    @property
    def mass(self) -> int:
        return sum(e.mass for e in self.elems)

    def __repr__(self) -> str:
        return f"Chunk({self.elems})"


class Superchunk:
    __slots__ = ("chunks", "key", "tour")

    def __init__(self, key: int):
        self.chunks: list = []
        self.key = key
        self.tour: Tour | None = None

    @property
    def alive(self) -> bool:
        return self.tour is not None

    @property
    def short(self) -> bool:
        return self.key < 0

    def renumber(self, start: int = 0) -> None:
        for p in range(start, len(self.chunks)):
            c = self.chunks[p]
            c.pos = p
            c.sup = self

    def __repr__(self) -> str:
        return f"Sup(key={self.key}, {len(self.chunks)} chunks)"


class Tour:
    __slots__ = ("lid", "sups")

    def __init__(self, lid: int):
        self.lid = lid
        self.sups: list = []

    @property
    def long(self) -> bool:
        return bool(self.sups) and self.sups[0].key >= 0

    @property
    def nchunks(self) -> int:
        return sum(len(s.chunks) for s in self.sups)

    def elements(self):
        for s in self.sups:
            for c in s.chunks:
                yield from c.elems

    def chunks(self):
        for s in self.sups:
            yield from s.chunks

    def __repr__(self) -> str:
        return f"Tour({self.lid}, {len(self.sups)} sups)"


class CutPlan:
    """State carried between the two halves of a tree-edge cut."""

    __slots__ = ("edge", "tour", "first", "second", "middle_is_v", "X", "Y", "Z", "W")


class TourIndex:
    def __init__(self, params: Params, vertices, store, counters):
        self.p = params
        self.h = params.h
        self.K = params.K
        self.store = store
        self.ls = ListSum(params.J, params.w)
        self.c = counters
        self._tokens = itertools.count(-1, -1)
        self._lids = itertools.count()
        self.dirty: dict = {}
        self.keys_touched: set = set()
        self.t_chunks: dict = {}
        self.t_sups: dict = {}
        self.tours: set = set()
        self.by_key: dict = {}
        self.vertices = list(vertices)
        for vx in self.vertices:
            self._singleton(vx)

    # ------------------------------------------------------------------
    # construction and lookup
    def _singleton(self, vx: Vertex) -> None:
        visit = Visit(vx, True)
        vx.visit = visit
        art = vx.arts[0]
        art.elem = Elem(vx, art, visit)
        chunk = Chunk([art.elem])
        sup = Superchunk(next(self._tokens))
        sup.chunks = [chunk]
        sup.renumber()
        self.by_key[sup.key] = sup
        tour = Tour(next(self._lids))
        self._adopt(tour, [sup])
        self.tours.add(tour)

    def _adopt(self, tour: Tour, sups) -> None:
        tour.sups = list(sups)
        for s in tour.sups:
            s.tour = tour

    def tour_of_vertex(self, vx: Vertex) -> Tour:
        return vx.arts[0].elem.chunk.sup.tour

    def list_of(self, x) -> int:
        """List id of an element (or of a vertex's principal copy)."""
        if isinstance(x, Vertex):
            x = x.arts[0].elem
        return x.chunk.sup.tour.lid

    def root(self, tour: Tour):
        return self.ls.root_of(tour.sups[0].key)

    # ------------------------------------------------------------------
    # bookkeeping helpers
    def _touch(self, *chunks) -> None:
        for c in chunks:
            if c is not None:
                self.t_chunks[c] = None
                if c.sup is not None:
                    self.t_sups[c.sup] = None

    def _mark_dirty(self, c: Chunk) -> None:
        if c is not None and c.alive:
            self.dirty[c] = None

    def _index(self, e: Elem):
        c = e.chunk
        s = c.sup
        return (s.tour.sups.index(s), c.pos, c.elems.index(e))

    def _next_elem(self, e: Elem) -> Elem:
        """Cyclic successor."""
        c = e.chunk
        i = c.elems.index(e)
        if i + 1 < len(c.elems):
            return c.elems[i + 1]
        s = c.sup
        if c.pos + 1 < len(s.chunks):
            return s.chunks[c.pos + 1].elems[0]
        sups = s.tour.sups
        t = sups.index(s)
        nxt = sups[(t + 1) % len(sups)]
        return nxt.chunks[0].elems[0]

    # ------------------------------------------------------------------
    # chunk level
    def _insert_chunk(self, sup: Superchunk, pos: int, chunk: Chunk) -> None:
        if len(sup.chunks) >= self.h:
            raise TourError(f"superchunk {sup.key} is full")
        self.store.open_slot(sup.key, pos)
        sup.chunks.insert(pos, chunk)
        sup.renumber(pos)

    def _remove_chunk(self, chunk: Chunk) -> None:
        sup = chunk.sup
        self.keys_touched |= self.store.remove_slot(sup.key, chunk.pos)
        self.keys_touched.add(sup.key)
        sup.chunks.pop(chunk.pos)
        sup.renumber(chunk.pos)
        chunk.sup = None
        self.dirty.pop(chunk, None)
        self.t_sups[sup] = None
        if not sup.chunks:
            self._remove_superchunk(sup)

    def _make_room(self, sup: Superchunk) -> None:
        if len(sup.chunks) >= self.h:
            self.split_superchunk(sup, len(sup.chunks) // 2)

    def split_chunk(self, chunk: Chunk, idx: int) -> Chunk:
        """Elements idx.. of chunk move to a new chunk right after it."""
        if not 0 < idx < len(chunk.elems):
            raise TourError("chunk split would leave an empty side")
        self._make_room(chunk.sup)
        sup = chunk.sup
        new = Chunk(chunk.elems[idx:])
        del chunk.elems[idx:]
        self._insert_chunk(sup, chunk.pos + 1, new)
        self.c.chunks_split += 1
        self._mark_dirty(chunk)
        self._mark_dirty(new)
        self._touch(chunk, new)
        return new

    def merge_chunks(self, left: Chunk, right: Chunk) -> Chunk:
        sup = left.sup
        if right.sup is not sup or right.pos != left.pos + 1:
            raise TourError("chunks to merge are not neighbours")
        self.store.merge_slots(sup.key, left.pos)
        for e in right.elems:
            e.chunk = left
        left.elems += right.elems
        sup.chunks.pop(right.pos)
        sup.renumber(right.pos)
        right.sup = None
        if self.dirty.pop(right, False) is None:
            self._mark_dirty(left)
        self.t_chunks.pop(right, None)
        self.c.chunks_merged += 1
        self._touch(left)
        return left

    # ------------------------------------------------------------------
    # superchunk level
    def _new_key(self, like: Superchunk | None, after: Superchunk | None = None) -> int:
        if like is not None and like.key >= 0:
            return self.ls.sc_insert(after.key if after is not None else None)
        return next(self._tokens)

    def split_superchunk(self, sup: Superchunk, k: int) -> Superchunk:
        """Chunks k.. of sup move to a new superchunk right after it."""
        if not 0 < k < len(sup.chunks):
            raise TourError(f"cannot split a {len(sup.chunks)}-chunk superchunk at {k}")
        new = Superchunk(self._new_key(sup, after=sup))
        self.by_key[new.key] = new
        self.store.split_off(sup.key, k, new.key)
        new.chunks = sup.chunks[k:]
        del sup.chunks[k:]
        new.renumber()
        tour = sup.tour
        tour.sups.insert(tour.sups.index(sup) + 1, new)
        new.tour = tour
        self.keys_touched |= {sup.key, new.key}
        self.c.superchunks_split += 1
        self.t_sups[sup] = None
        self.t_sups[new] = None
        return new

    def merge_superchunks(self, left: Superchunk, right: Superchunk) -> Superchunk:
        tour = left.tour
        if right.tour is not tour or tour.sups.index(right) != tour.sups.index(left) + 1:
            raise TourError("superchunks to merge are not neighbours")
        if (left.key < 0) != (right.key < 0):
            raise TourError("cannot merge a short-tour superchunk with a long-tour one")
        n = len(left.chunks)
        if n + len(right.chunks) > self.h:
            raise TourError("merged superchunk would exceed h chunks")
        self.store.absorb(left.key, right.key, n)
        left.chunks += right.chunks
        left.renumber(n)
        right.chunks = []
        tour.sups.remove(right)
        right.tour = None
        if right.key >= 0:
            self.ls.sc_delete(right.key)
        del self.by_key[right.key]
        self.keys_touched.add(left.key)
        self.keys_touched.discard(right.key)
        self.t_sups.pop(right, None)
        self.t_sups[left] = None
        self.c.superchunks_merged += 1
        return left

    def _remove_superchunk(self, sup: Superchunk) -> None:
        tour = sup.tour
        tour.sups.remove(sup)
        sup.tour = None
        self.t_sups.pop(sup, None)
        if sup.key >= 0:
            self.ls.sc_delete(sup.key)
        del self.by_key[sup.key]
        self.keys_touched.discard(sup.key)
        if not tour.sups:
            raise TourError("a tour lost its last element")

    def _rekey(self, sup: Superchunk, key: int) -> None:
        old = sup.key
        del self.by_key[old]
        self.store.rename(old, key)
        sup.key = key
        self.by_key[key] = sup

    def promote(self, tour: Tour) -> None:
        """Give every superchunk of a short tour an id and build its list-sum tree."""
        if tour.long:
            raise TourError("tour is already long")
        prev = None
        for s in tour.sups:
            self._rekey(s, self.ls.sc_insert(prev))
            prev = s.key
            self.keys_touched.add(s.key)
            self.t_sups[s] = None

    def demote(self, tour: Tour) -> None:
        """Fold a long tour with few chunks into one superchunk under a private key."""
        if not tour.long:
            raise TourError("tour is already short")
        while len(tour.sups) > 1:
            self.merge_superchunks(tour.sups[0], tour.sups[1])
        sup = tour.sups[0]
        old = sup.key
        for j in self.store.neighbours(old):
            if j != old:
                raise TourError(f"demoting superchunk {old} that still touches {j}")
        self._rekey(sup, next(self._tokens))
        self.ls.sc_delete(old)
        self.keys_touched.discard(old)

    # ------------------------------------------------------------------
    # boundaries
    def _boundary_after(self, e: Elem) -> Chunk:
        """Make e the last element of its chunk and that chunk the last of its superchunk."""
        c = e.chunk
        i = c.elems.index(e)
        if i + 1 < len(c.elems):
            self.split_chunk(c, i + 1)
        c = e.chunk
        if c.pos + 1 < len(c.sup.chunks):
            self.split_superchunk(c.sup, c.pos + 1)
        return e.chunk

    def _boundary_before(self, e: Elem) -> Chunk:
        c = e.chunk
        i = c.elems.index(e)
        if i > 0:
            self.split_chunk(c, i)
        c = e.chunk
        if c.pos > 0:
            self.split_superchunk(c.sup, c.pos)
        return e.chunk

    def _split_tour_after(self, tour: Tour, sup: Superchunk):
        """Superchunk lists up to and including sup, and after it."""
        t = tour.sups.index(sup) + 1
        left, right = tour.sups[:t], tour.sups[t:]
        if tour.long and right:
            self.ls.split(sup.key, after=True)
        return left, right

    def _join_lists(self, parts) -> list:
        out = []
        for part in parts:
            if not part:
                continue
            if out and out[-1].key >= 0 and part[0].key >= 0:
                self.ls.join(self.ls.root_of(out[-1].key), self.ls.root_of(part[0].key))
            out += part
        return out

    # ------------------------------------------------------------------
    # element surgery
    def _remove_elem(self, e: Elem) -> None:
        c = e.chunk
        c.elems.remove(e)
        e.chunk = None
        self._touch(c)
        if not c.elems:
            self.t_chunks.pop(c, None)
            self._remove_chunk(c)

    def _insert_elem_after(self, prev: Elem, e: Elem) -> None:
        c = prev.chunk
        c.elems.insert(c.elems.index(prev) + 1, e)
        e.chunk = c
        self._touch(c)

    def apply_surgeries(self, surgeries) -> None:
        """Follow artificial-vertex rebalancing in the tours and the adjacency bits."""
        for s in surgeries:
            if s.kind == "split":
                old = s.src.elem
                s.dst.elem = Elem(old.vertex, s.dst, old.visit)
                self._insert_elem_after(old, s.dst.elem)
            elif s.kind == "merge":
                gone = s.src.elem
                s.src.elem = None
                src_chunk = gone.chunk
                self._remove_elem(gone)
                self._moved(s.edges, src_chunk, s.dst)
                self._touch(s.dst.elem.chunk, s.dst.elem.visit.last.chunk)
            elif s.kind == "move":
                self._moved(s.edges, s.src.elem.chunk, s.dst)
                self._touch(s.src.elem.chunk, s.dst.elem.chunk)
            else:
                raise TourError(f"unknown surgery {s.kind!r}")

    def _moved(self, edges, src_chunk: Chunk, dst: Artificial) -> None:
        dst_chunk = dst.elem.chunk
        if src_chunk is dst_chunk:
            return
        x = dst.owner.id
        for e in edges:
            other = e.host[e.other(x)].elem.chunk
            self.c.edges_scanned += 1
            self._set_bit(dst_chunk, other)
        self._mark_dirty(src_chunk)

    def _set_bit(self, a: Chunk, b: Chunk) -> None:
        if self.store.set_bit(a.sup.key, b.sup.key, a.pos, b.pos):
            self.keys_touched |= {a.sup.key, b.sup.key}

    def set_edge_bit(self, e: EdgeRecord) -> None:
        a = e.host[e.u].elem.chunk
        b = e.host[e.v].elem.chunk
        self._set_bit(a, b)
        self._touch(a, b)

    def nontree_edges(self, chunk: Chunk):
        """(edge, endpoint vertex id in chunk) for every hosted edge, counted as scanned."""
        for el in chunk.elems:
            if el.art is None:
                continue
            x = el.vertex.id
            for e in el.art.edges:
                self.c.edges_scanned += 1
                yield e, x

    def drop_edge_bit(self, e: EdgeRecord, ca: Chunk, cb: Chunk) -> None:
        """After e left chunks ca and cb, clear their bit unless another edge still joins them."""
        self._touch(*(c for c in (ca, cb) if c.alive))
        if not (ca.alive and cb.alive) or ca in self.dirty or cb in self.dirty:
            return
        scan, target = (ca, cb) if ca.mass <= cb.mass else (cb, ca)
        for f, x in self.nontree_edges(scan):
            if f.host[f.other(x)].elem.chunk is target:
                return
        if self.store.clear_bit(scan.sup.key, target.sup.key, scan.pos, target.pos):
            self.keys_touched |= {scan.sup.key, target.sup.key}

    # ------------------------------------------------------------------
    # rederivation and list-sum vectors
    def flush(self) -> None:
        """Rebuild dirty chunk rows from their edges, then refresh SupAdj of touched ids."""
        dirty = [c for c in self.dirty if c.alive]
        self.dirty.clear()
        for c in dirty:
            key = c.sup.key
            self.keys_touched |= self.store.clear_slot(key, c.pos)
            self.keys_touched.add(key)
        for c in dirty:
            for e, x in self.nontree_edges(c):
                self._set_bit(c, e.host[e.other(x)].elem.chunk)
        for i in sorted(self.keys_touched):
            if i >= 0 and i in self.ls.leaves:
                x = self.store.vector(i)
                if self.ls.leaves[i].sup != x:
                    self.ls.update_adj(i, x)
        self.keys_touched.clear()

    # ------------------------------------------------------------------
    # tree-edge cut
    def begin_cut(self, e: EdgeRecord) -> CutPlan:
        """Make chunk boundaries at both occurrences of tree edge e."""
        if not e.tree:
            raise TourError(f"{e} is not a tree edge")
        u, v = e.u, e.v
        plan = CutPlan()
        plan.edge = e
        plan.X, plan.Z = e.vis[u], e.vis[v]
        plan.Y = self._next_elem(plan.X.last).visit
        plan.W = self._next_elem(plan.Z.last).visit
        a, c = plan.X.last, plan.Z.last
        plan.tour = a.chunk.sup.tour
        first, second = (a, c) if self._index(a) < self._index(c) else (c, a)
        plan.middle_is_v = first is a
        plan.first, plan.second = first, second
        for x in (first, second):
            ch = x.chunk
            i = ch.elems.index(x)
            if i + 1 < len(ch.elems):
                self.split_chunk(ch, i + 1)
        return plan

    def short_cut_intervals(self, plan: CutPlan):
        """Chunk-position intervals of the u side and the v side of a short tour being cut."""
        sup = plan.tour.sups[0]
        p1, p2 = plan.first.chunk.pos, plan.second.chunk.pos
        n = len(sup.chunks)
        middle = [(p1 + 1, p2 + 1)]
        outer = [(0, p1 + 1), (p2 + 1, n)]
        return (outer, middle) if plan.middle_is_v else (middle, outer)

    def finish_cut(self, plan: CutPlan):
        """Separate the two trees; returns (tour of u, tour of v)."""
        e = plan.edge
        u, v = e.u, e.v
        tour = plan.tour
        long = tour.long
        self._boundary_after(plan.first)
        self._boundary_after(plan.second)
        s1, s2 = plan.first.chunk.sup, plan.second.chunk.sup
        i1, i2 = tour.sups.index(s1), tour.sups.index(s2)
        q1, q2, q3 = tour.sups[: i1 + 1], tour.sups[i1 + 1: i2 + 1], tour.sups[i2 + 1:]
        if long:
            if q3:
                self.ls.split(s2.key, after=True)
            self.ls.split(s1.key, after=True)
        outer = self._join_lists([q1, q3])
        mid_tour, out_tour = self._two_tours(tour, q2, outer)
        tv, tu = (mid_tour, out_tour) if plan.middle_is_v else (out_tour, mid_tour)
        if q1 and q3:
            self.t_sups[q1[-1]] = None
            self.t_sups[q3[0]] = None
            if not long:
                self.merge_superchunks(q1[-1], q3[0])
        # the two visits of v (Y, Z) and of u (X, W) now meet
        X, Y, Z, W = plan.X, plan.Y, plan.Z, plan.W
        del e.vis[u], e.vis[v]
        self._merge_visits(Z, Y, v)
        self._merge_visits(X, W, u)
        for t in (tu, tv):
            for s in (t.sups[0], t.sups[-1]):
                self.t_sups[s] = None
                self._touch(s.chunks[0], s.chunks[-1])
        return tu, tv

    def _merge_visits(self, before: Visit, after: Visit, x: int) -> None:
        """``before`` lost its leaving occurrence and is now followed by ``after``, a visit of the same vertex."""
        self._touch(before.last.chunk, after.last.chunk)
        if before is after:
            before.out = None
            return
        if not after.principal:
            f = after.out
            before.out = f
            if f is not None:
                f.vis[x] = before
            self._destroy(after)
        elif not before.principal:
            self._destroy(before)
        else:
            raise TourError("two principal visits of one vertex")

    def _destroy(self, visit: Visit) -> None:
        el = visit.elem
        self._touch(el.chunk)
        self._remove_elem(el)
        visit.out = None

    def _two_tours(self, tour: Tour, a: list, b: list):
        """Attach superchunk lists a and b to tours; the longer keeps ``tour``."""
        fresh = Tour(next(self._lids))
        self.tours.add(fresh)
        if len(a) > len(b):
            self._adopt(tour, a)
            self._adopt(fresh, b)
            return tour, fresh
        self._adopt(tour, b)
        self._adopt(fresh, a)
        return fresh, tour


    # ------------------------------------------------------------------
    # link
    def link(self, e: EdgeRecord, ta: Tour, tb: Tour) -> Tour:
        """Splice the tour of e.v into the tour of e.u through tree edge e."""
        u, v = e.u, e.v
        vu, vv = self.vertices[u], self.vertices[v]
        U, V = vu.visit, vv.visit
        if ta.long != tb.long:
            self.promote(tb if ta.long else ta)
        long = ta.long
        self._boundary_after(U.last)
        left, right = self._split_tour_after(ta, U.last.chunk.sup)
        self._boundary_before(V.first)
        k = tb.sups.index(V.first.chunk.sup)
        b0, b1 = tb.sups[:k], tb.sups[k:]
        if long and b0:
            self.ls.split(b0[-1].key, after=True)

        fresh = []
        if V.out is None:
            V.out = e
            e.vis[v] = V
        else:
            vp = Visit(vv, False)
            vp.elem = Elem(vv, None, vp)
            vp.out = e
            e.vis[v] = vp
            fresh.append(vp.elem)
        if U.out is not None:
            up = Visit(vu, False)
            up.elem = Elem(vu, None, up)
            up.out = U.out
            U.out.vis[u] = up
            fresh.append(up.elem)
        U.out = e
        e.vis[u] = U

        tail = (b1 + b0)[-1].chunks[-1]
        for el in fresh:
            el.chunk = tail
        tail.elems += fresh
        self._touch(tail)
        sups = self._join_lists([left, b1, b0, right])
        keep, gone = (ta, tb) if len(ta.sups) >= len(tb.sups) else (tb, ta)
        self._adopt(keep, sups)
        gone.sups = []
        self.tours.discard(gone)
        self._touch(U.last.chunk, V.last.chunk, e.vis[v].last.chunk)
        for s in (sups[0], sups[-1]):
            self._touch(s.chunks[0], s.chunks[-1])
        return keep

    # ------------------------------------------------------------------
    # restoration
    def restore(self) -> None:
        """Bring every touched superchunk and chunk back within bounds."""
        while self.t_chunks or self.t_sups:
            while self.t_sups:
                s = next(iter(self.t_sups))
                del self.t_sups[s]
                if s.alive:
                    self._fix_sup(s)
            while self.t_chunks and not self.t_sups:
                c = next(iter(self.t_chunks))
                del self.t_chunks[c]
                if c.alive:
                    self._fix_chunk(c)

    def plan_cuts(self, masses) -> list:
        """Cut points splitting an over-heavy run of element masses into pieces of mass in [K, 3K]."""
        K = self.K
        cuts, acc = [], 0
        for idx, m in enumerate(masses):
            acc += m
            if acc >= 2 * K and idx + 1 < len(masses):
                cuts.append(idx + 1)
                acc = 0
        if cuts and acc < K:
            cuts.pop()
            start = cuts[-1] if cuts else 0
            if sum(masses[start:]) > 3 * K:
                acc = 0
                for j in range(start, len(masses)):
                    acc += masses[j]
                    if acc >= K:
                        cuts.append(j + 1)
                        break
        return cuts

    def _fix_chunk(self, c: Chunk) -> None:
        masses = [e.mass for e in c.elems]
        m = sum(masses)
        if m > 3 * self.K:
            for idx in reversed(self.plan_cuts(masses)):
                self.split_chunk(c, idx)
            return
        if m >= self.K:
            return
        s = c.sup
        if len(s.chunks) > 1:
            left = s.chunks[c.pos - 1] if c.pos > 0 else None
            right = s.chunks[c.pos + 1] if c.pos + 1 < len(s.chunks) else None
            if left is not None and (right is None or left.mass <= right.mass):
                self.merge_chunks(left, c)
            else:
                self.merge_chunks(c, right)
        elif len(s.tour.sups) > 1:
            self._merge_with_neighbour(s)
            self.t_chunks[c] = None

    def _merge_with_neighbour(self, s: Superchunk) -> Superchunk:
        """Merge s into the smaller adjacent superchunk, or take chunks from it when both are too big."""
        sups = s.tour.sups
        t = sups.index(s)
        left = sups[t - 1] if t > 0 else None
        right = sups[t + 1] if t + 1 < len(sups) else None
        from_left = left is not None and (right is None or len(left.chunks) <= len(right.chunks))
        nb = left if from_left else right
        total = len(s.chunks) + len(nb.chunks)
        if total < self.h:
            return self.merge_superchunks(nb, s) if from_left else self.merge_superchunks(s, nb)
        take = total // 2 - len(s.chunks)
        if from_left:
            part = self.split_superchunk(nb, len(nb.chunks) - take)
            return self.merge_superchunks(part, s)
        self.split_superchunk(nb, take)
        return self.merge_superchunks(s, nb)

    def _fix_sup(self, s: Superchunk) -> None:
        T = s.tour
        half = self.h // 2
        if not T.long:
            n = T.nchunks
            if n >= half:
                self.promote(T)
                return
            while len(T.sups) > 1:
                self.merge_superchunks(T.sups[0], T.sups[1])
            return
        if T.nchunks < half:
            self.demote(T)
            return
        if len(s.chunks) > self.h - 1:
            self.split_superchunk(s, len(s.chunks) // 2)
        elif len(s.chunks) < half and len(T.sups) > 1:
            self._merge_with_neighbour(s)

    # ------------------------------------------------------------------
    # replacement search
    def scan_for_crossing(self, chunk: Chunk, target: Tour):
        """A non-tree edge hosted in chunk whose other end lies in target."""
        for f, x in self.nontree_edges(chunk):
            if f.host[f.other(x)].elem.chunk.sup.tour is target:
                return f
        return None

    def find_replacement_short(self, plan: CutPlan):
        """Chunk of the u side holding an edge to the v side, for a short tour; call between the cut halves."""
        sup = plan.tour.sups[0]
        rows, cols = self.short_cut_intervals(plan)
        hit = self.store.find_in(sup.key, sup.key, rows, cols)
        return None if hit is None else sup.chunks[hit[0]]

    def find_replacement_long(self, tu: Tour, tv: Tour):
        """Chunk of tu holding an edge into tv, located through the list-sum trees."""
        ru, rv = self.root(tu), self.root(tv)
        gamma = self.ls.adj_query(ru) & self.ls.memb_query(rv)
        if not gamma:
            return None
        j = (gamma & -gamma).bit_length() - 1
        i = self.ls.locate_leaf(ru, j)
        k, _ = self.store.find_one(i, j)
        return self.by_key[i].chunks[k]
