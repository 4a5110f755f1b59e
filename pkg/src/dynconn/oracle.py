"""Brute-force ground truth: connectivity by graph search and a full auditor.

The auditor recomputes everything the connectivity structure maintains from
the raw edge set and reports each disagreement as one line of text.
"""

from __future__ import annotations

from collections import deque


class OracleGraph:
    """A plain undirected edge set."""

    def __init__(self, n: int):
        self.n = n
        self.adj = [set() for _ in range(n)]
        self.m = 0

    def has(self, u: int, v: int) -> bool:
        return v in self.adj[u]

    def insert(self, u: int, v: int) -> None:
        if u == v or v in self.adj[u]:
            raise ValueError(f"bad insert ({u}, {v})")
        self.adj[u].add(v)
        self.adj[v].add(u)
        self.m += 1

    def delete(self, u: int, v: int) -> None:
        self.adj[u].remove(v)
        self.adj[v].remove(u)
        self.m -= 1

    def edges(self):
        for u in range(self.n):
            for v in self.adj[u]:
                if u < v:
                    yield u, v

    def components(self) -> list:
        """Component label per vertex (smallest vertex of the component)."""
        label = [-1] * self.n
        for s in range(self.n):
            if label[s] >= 0:
                continue
            label[s] = s
            todo = deque([s])
            while todo:
                x = todo.popleft()
                for y in self.adj[x]:
                    if label[y] < 0:
                        label[y] = s
                        todo.append(y)
        return label


def o_connected(g: OracleGraph, u: int, v: int) -> bool:
    if u == v:
        return True
    seen = {u}
    todo = deque([u])
    while todo:
        x = todo.popleft()
        for y in g.adj[x]:
            if y == v:
                return True
            if y not in seen:
                seen.add(y)
                todo.append(y)
    return False


def forest_problems(forest, labels) -> list:
    """Check that forest (vertex pairs) is acyclic and spans exactly the components in labels."""
    out = []
    n = len(labels)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in forest:
        if labels[u] != labels[v]:
            out.append(f"forest edge ({u}, {v}) joins different components")
        a, b = find(u), find(v)
        if a == b:
            out.append(f"forest edge ({u}, {v}) closes a cycle")
        else:
            parent[a] = b
    for x in range(n):
        if find(x) != find(labels[x]):
            out.append(f"forest does not connect {x} to {labels[x]}")
    return out


def graph_of(c) -> OracleGraph:
    g = OracleGraph(c.n)
    for u, v in c.graph.edges:
        g.insert(u, v)
    return g


def audit(c, g: OracleGraph | None = None) -> list:
    """Every violation found in Connectivity ``c``; g defaults to c's own edge set."""
    saved = c.adj.word_ops
    try:
        return _Auditor(c, g if g is not None else graph_of(c)).run()
    finally:
        c.adj.word_ops = saved


class _Auditor:
    def __init__(self, c, g: OracleGraph):
        self.c = c
        self.g = g
        self.t = c.tours
        self.out = []

    def bad(self, msg: str) -> None:
        self.out.append(msg)

    def run(self) -> list:
        self.edges()
        self.loads()
        self.partition()
        for tour in self.t.tours:
            self.tour(tour)
        self.chunks()
        self.adjacency()
        self.listsum()
        if self.t.dirty or self.t.t_chunks or self.t.t_sups or self.t.keys_touched:
            self.bad("pending work left between operations")
        return self.out

    # ------------------------------------------------------------------
    def edges(self) -> None:
        mine = set(self.c.graph.edges)
        truth = set(self.g.edges())
        for k in sorted(truth - mine):
            self.bad(f"edge {k} missing from the structure")
        for k in sorted(mine - truth):
            self.bad(f"edge {k} present but not in the graph")
        for k, e in self.c.graph.edges.items():
            if e.key != k:
                self.bad(f"edge {k} filed under the wrong key")
            if e.tree and e.host:
                self.bad(f"tree edge {k} is hosted")
            if not e.tree and set(e.host) != {e.u, e.v}:
                self.bad(f"non-tree edge {k} not hosted at both ends")
            if not e.tree and e.vis:
                self.bad(f"non-tree edge {k} has tour handles")

    def loads(self) -> None:
        for msg in self.c.graph.load_violations():
            self.bad(msg)
        for vx in self.c.graph.vertices:
            for a in vx.arts:
                if a.elem is None or a.elem.art is not a:
                    self.bad(f"artificial of vertex {vx.id} has no tour element")

    def partition(self) -> None:
        labels = self.g.components()
        lid_of = {}
        vs = self.c.graph.vertices
        for x in range(self.c.n):
            lid = self.t.list_of(vs[x])
            first = lid_of.setdefault(labels[x], lid)
            if first != lid:
                self.bad(f"vertex {x} and vertex {labels[x]} are connected but in lists {lid} and {first}")
        if len(set(lid_of.values())) != len(lid_of):
            self.bad("two components share a list")
        if len(self.t.tours) != len(lid_of):
            self.bad(f"{len(self.t.tours)} tours for {len(lid_of)} components")
        for msg in forest_problems(self.c.witness_forest(), labels):
            self.bad(msg)

    # ------------------------------------------------------------------
    def tour(self, tour) -> None:
        elems = list(tour.elements())
        lid = tour.lid
        for s in tour.sups:
            if s.tour is not tour:
                self.bad(f"superchunk {s.key} points at the wrong tour")
        if not elems:
            self.bad(f"tour {lid} is empty")
            return
        # group consecutive elements into visits
        visits = []
        for el in elems:
            if visits and visits[-1][0] is el.visit:
                visits[-1][1].append(el)
            else:
                visits.append((el.visit, [el]))
        if len(visits) > 1 and visits[0][0] is visits[-1][0]:
            self.bad(f"tour {lid}: a visit wraps around the list end")
        seen = set()
        vertices = set()
        for vis, els in visits:
            if id(vis) in seen:
                self.bad(f"tour {lid}: visit of {vis.vertex.id} is not contiguous")
            seen.add(id(vis))
            vx = vis.vertex
            vertices.add(vx.id)
            if vis.principal:
                want = [a.elem for a in vx.arts]
                if els != want or vx.visit is not vis:
                    self.bad(f"tour {lid}: principal visit of {vx.id} does not match its artificials")
            elif len(els) != 1 or vis.elem is not els[0] or els[0].art is not None:
                self.bad(f"tour {lid}: malformed copy of {vx.id}")
            for el in els:
                if el.vertex is not vx:
                    self.bad(f"tour {lid}: element of {el.vertex.id} inside a visit of {vx.id}")
        k = len(vertices)
        want_visits = 1 if k == 1 else 2 * (k - 1)
        if len(visits) != want_visits:
            self.bad(f"tour {lid}: {len(visits)} visits for a {k}-vertex tree")
        principals = sum(1 for vis, _ in visits if vis.principal)
        if principals != k:
            self.bad(f"tour {lid}: {principals} principal visits for {k} vertices")
        # consecutive visits are joined by the leaving edge
        used = set()
        for idx, (vis, _) in enumerate(visits):
            nxt = visits[(idx + 1) % len(visits)][0]
            e = vis.out
            x = vis.vertex.id
            if k == 1:
                if e is not None:
                    self.bad(f"tour {lid}: lone vertex {x} has a leaving edge")
                continue
            if e is None:
                self.bad(f"tour {lid}: visit of {x} has no leaving edge")
                continue
            if not e.tree or self.c.graph.edges.get(e.key) is not e:
                self.bad(f"tour {lid}: visit of {x} leaves by a non-tree or stale edge {e}")
            if x not in (e.u, e.v) or nxt.vertex.id != e.other(x):
                self.bad(f"tour {lid}: {e} does not lead from {x} to {nxt.vertex.id}")
            if e.vis.get(x) is not vis:
                self.bad(f"tour {lid}: {e} has a stale handle at {x}")
            if (e.key, x) in used:
                self.bad(f"tour {lid}: {e} used twice from {x}")
            used.add((e.key, x))
        tree_in = {e.key for e in self.c.graph.edges.values()
                   if e.tree and e.u in vertices}
        if len(used) != 2 * len(tree_in):
            self.bad(f"tour {lid}: {len(used)} edge occurrences for {len(tree_in)} tree edges")

    # ------------------------------------------------------------------
    def chunks(self) -> None:
        K, h = self.c.params.K, self.c.params.h
        total = 0
        keys = {}
        for tour in self.t.tours:
            chunks = list(tour.chunks())
            masses = []
            for s in tour.sups:
                if self.t.by_key.get(s.key) is not s:
                    self.bad(f"superchunk {s.key} not registered under its key")
                if s.key in keys:
                    self.bad(f"key {s.key} used twice")
                keys[s.key] = s
                if not s.chunks:
                    self.bad(f"superchunk {s.key} is empty")
                for p, ch in enumerate(s.chunks):
                    if ch.sup is not s or ch.pos != p:
                        self.bad(f"chunk at {s.key}:{p} has a stale position")
                    for el in ch.elems:
                        if el.chunk is not ch:
                            self.bad(f"element {el} has a stale chunk reference")
                    m = sum(self._mass(el) for el in ch.elems)
                    masses.append(m)
                    if len(ch.elems) > m + 1:
                        self.bad(f"chunk {s.key}:{p} has {len(ch.elems)} elements for mass {m}")
                    if not ch.elems:
                        self.bad(f"chunk {s.key}:{p} is empty")
            mass = sum(masses)
            total += mass
            if mass < K:
                if len(chunks) != 1:
                    self.bad(f"tour {tour.lid} of mass {mass} < K spans {len(chunks)} chunks")
            else:
                for p, m in enumerate(masses):
                    if not K <= m <= 3 * K:
                        self.bad(f"tour {tour.lid}: chunk {p} has mass {m} outside [{K}, {3 * K}]")
            n = len(chunks)
            if n < h // 2:
                if len(tour.sups) != 1 or tour.sups[0].key >= 0:
                    self.bad(f"short tour {tour.lid} is not a single private superchunk")
            else:
                for s in tour.sups:
                    if s.key < 0:
                        self.bad(f"long tour {tour.lid} has a superchunk without an id")
                    if not h // 2 <= len(s.chunks) <= h - 1:
                        self.bad(f"superchunk {s.key} holds {len(s.chunks)} chunks")
        if total != 2 * len(self.c.graph.edges):
            self.bad(f"total mass {total} != 2|E| = {2 * len(self.c.graph.edges)}")
        if set(self.t.by_key) != set(keys):
            self.bad("key registry lists superchunks that are gone")
        self.keys = keys

    @staticmethod
    def _mass(el) -> int:
        m = el.art.load if el.art is not None else 0
        vis = el.visit
        last = vis.vertex.arts[-1].elem if vis.principal else vis.elem
        if vis.out is not None and last is el:
            m += 1
        return m

    # ------------------------------------------------------------------
    def adjacency(self) -> None:
        want = set()
        for e in self.c.graph.edges.values():
            if e.tree or len(e.host) != 2:
                continue
            a, b = e.host[e.u].elem, e.host[e.v].elem
            if a is None or b is None or a.chunk is None or b.chunk is None or a.chunk.sup is None:
                continue
            p = (a.chunk.sup.key, a.chunk.pos)
            q = (b.chunk.sup.key, b.chunk.pos)
            want.add(min(p, q) + max(p, q))
        store = self.c.adj
        have = set()
        for i in store.keys():
            for j in store.neighbours(i):
                if i > j:
                    continue
                rows = store.to_rows(i, j)
                if not rows:
                    self.bad(f"cell ({i}, {j}) is registered but empty")
                for k, l in rows:
                    p, q = (i, k), (j, l)
                    have.add(min(p, q) + max(p, q))
        for i, k, j, l in sorted(want - have):
            self.bad(f"ChAdj({i},{j})({k},{l}) should be set")
        for i, k, j, l in sorted(have - want):
            self.bad(f"ChAdj({i},{j})({k},{l}) is set without an edge")
        for i in store.keys():
            if i not in self.keys:
                self.bad(f"cells stored for dead key {i}")
                continue
            for j in store.neighbours(i):
                if (i < 0 or j < 0) and i != j:
                    self.bad(f"short-tour key shares cells: ({i}, {j})")
                if j in self.keys and self.keys[j].tour is not self.keys[i].tour:
                    self.bad(f"cell ({i}, {j}) joins two different lists")

    def listsum(self) -> None:
        ls = self.t.ls
        ids = {k for k in self.keys if k >= 0}
        if set(ls.leaves) != ids or ls.ids.live() != ids:
            self.bad(f"live ids {sorted(ls.leaves)} differ from long superchunks {sorted(ids)}")
        store = self.c.adj
        for i in ids & set(ls.leaves):
            want = 0
            for j in store.neighbours(i):
                if j >= 0:
                    want |= 1 << j
            leaf = ls.leaves[i]
            if leaf.sup != want:
                self.bad(f"SupAdj_{i} is stale")
            if leaf.memb != 1 << i:
                self.bad(f"Memb_{i} is wrong")
        for tour in self.t.tours:
            if not tour.long:
                continue
            keys = [s.key for s in tour.sups]
            try:
                root = ls.root_of(keys[0])
            except Exception as exc:  # noqa: BLE001 - reported, not raised
                self.bad(f"tour {tour.lid}: {exc}")
                continue
            if ls.leaf_ids(root) != keys:
                self.bad(f"tour {tour.lid}: list-sum leaves {ls.leaf_ids(root)} != superchunks {keys}")
            for msg in ls.violations(root):
                self.bad(f"tour {tour.lid}: {msg}")
