"""Vertices, edges and degree virtualization.

Each vertex owns one or more *artificial* vertices, kept in tour order, that
host its non-tree edges.  When a vertex hosts at least K/2 such edges, every
artificial carries between K/2 and K of them; below that there is just one.
Rebalancing after a single hosting change splits, merges or borrows between
two neighbouring artificials, and reports what it did so the tour structure
can follow.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class GraphError(ValueError):
    pass


class CapacityExceeded(GraphError):
    pass


class EdgeRecord:
    __slots__ = ("u", "v", "tree", "host", "vis")

    def __init__(self, u: int, v: int):
        self.u, self.v = u, v
        self.tree = False
        self.host: dict = {}  # vertex id -> Artificial (non-tree edges)
        self.vis: dict = {}  # vertex id -> Visit preceding the occurrence leaving it (tree edges)

    @property
    def key(self):
        return (self.u, self.v) if self.u < self.v else (self.v, self.u)

    def other(self, x: int) -> int:
        return self.v if x == self.u else self.u

    def __repr__(self) -> str:
        return f"Edge({self.u},{self.v}{',tree' if self.tree else ''})"


class Artificial:
    __slots__ = ("owner", "edges", "elem")

    def __init__(self, owner: "Vertex"):
        self.owner = owner
        self.edges: dict = {}  # insertion-ordered set of EdgeRecord
        self.elem = None

    @property
    def load(self) -> int:
        return len(self.edges)

    def __repr__(self) -> str:
        return f"Art(v{self.owner.id}, load={self.load})"


class Vertex:
    __slots__ = ("id", "arts", "visit")

    def __init__(self, vid: int):
        self.id = vid
        self.arts = [Artificial(self)]
        self.visit = None  # principal visit, set by the tour index

    @property
    def hosted(self) -> int:
        return sum(a.load for a in self.arts)


@dataclass
class Surgery:
    """One rebalancing step.

    kind is "split" (``dst`` is a new artificial placed right after ``src``),
    "merge" (``src`` is gone, its edges now live in ``dst``) or "move"
    (``edges`` went from ``src`` to ``dst``).
    """

    kind: str
    src: Artificial
    dst: Artificial
    edges: list = field(default_factory=list)


class GraphStore:
    def __init__(self, n: int, mhat: int, K: int):
        if n < 1:
            raise GraphError("need at least one vertex")
        self.n = n
        self.mhat = mhat
        self.K = K
        self.vertices = [Vertex(i) for i in range(n)]
        self.edges: dict = {}

    def _check_vertex(self, x: int) -> None:
        if not (isinstance(x, int) and 0 <= x < self.n):
            raise GraphError(f"vertex {x} outside [0, {self.n})")

    @staticmethod
    def _key(u, v):
        return (u, v) if u < v else (v, u)

    def lookup_edge(self, u: int, v: int):
        return self.edges.get(self._key(u, v))

    def __len__(self) -> int:
        return len(self.edges)

    def add_edge(self, u: int, v: int, tree: bool = False):
        """Register (u, v); non-tree edges are hosted at once.  Returns (record, surgeries)."""
        self._check_vertex(u)
        self._check_vertex(v)
        if u == v:
            raise GraphError(f"self-loop at {u}")
        key = self._key(u, v)
        if key in self.edges:
            raise GraphError(f"edge {key} already present")
        if len(self.edges) >= self.mhat:
            raise CapacityExceeded(f"edge capacity {self.mhat} reached")
        e = EdgeRecord(u, v)
        e.tree = tree
        self.edges[key] = e
        return e, ([] if tree else self.host(e))

    def remove_edge(self, u: int, v: int):
        """Drop (u, v).  Returns (record, surgeries); tree edges need the caller to cut."""
        self._check_vertex(u)
        self._check_vertex(v)
        e = self.edges.pop(self._key(u, v), None)
        if e is None:
            raise GraphError(f"edge {self._key(u, v)} not present")
        return e, ([] if e.tree else self.unhost(e))

    def incident_edges(self, a: Artificial):
        return iter(list(a.edges))

    # hosting
    def host(self, e: EdgeRecord) -> list:
        out = []
        for x in (e.u, e.v):
            vx = self.vertices[x]
            art = min(reversed(vx.arts), key=lambda a: a.load)
            art.edges[e] = None
            e.host[x] = art
            out += self._after_grow(vx, art)
        return out

    def unhost(self, e: EdgeRecord) -> list:
        out = []
        for x in (e.u, e.v):
            art = e.host.pop(x)
            del art.edges[e]
            out += self._after_shrink(self.vertices[x], art)
        return out

    def _move(self, edges, src: Artificial, dst: Artificial) -> None:
        x = src.owner.id
        for e in edges:
            del src.edges[e]
            dst.edges[e] = None
            e.host[x] = dst

    def _after_grow(self, vx: Vertex, art: Artificial) -> list:
        if art.load <= self.K:
            return []
        new = Artificial(vx)
        moving = list(art.edges)[art.load - art.load // 2:]
        self._move(moving, art, new)
        vx.arts.insert(vx.arts.index(art) + 1, new)
        return [Surgery("split", art, new, moving)]

    def _after_shrink(self, vx: Vertex, art: Artificial) -> list:
        if 2 * art.load >= self.K or len(vx.arts) == 1:
            return []
        k = vx.arts.index(art)
        nb = vx.arts[k + 1] if k + 1 < len(vx.arts) else vx.arts[k - 1]
        if art.load + nb.load <= self.K:
            moving = list(art.edges)
            self._move(moving, art, nb)
            vx.arts.remove(art)
            return [Surgery("merge", art, nb, moving)]
        moving = list(nb.edges)[: (nb.load - art.load) // 2]
        self._move(moving, nb, art)
        return [Surgery("move", nb, art, moving)]

    def make_tree(self, e: EdgeRecord) -> list:
        """Turn a hosted non-tree edge into a tree edge; returns the unhosting surgeries."""
        if e.tree:
            raise GraphError(f"{e} is already a tree edge")
        out = self.unhost(e)
        e.tree = True
        return out

    def load_violations(self) -> list:
        out = []
        K = self.K
        for vx in self.vertices:
            if len(vx.arts) > 1:
                for a in vx.arts:
                    if not (K <= 2 * a.load and a.load <= K):
                        out.append(f"vertex {vx.id}: artificial load {a.load} outside [K/2, K]")
            elif vx.arts[0].load > K:
                out.append(f"vertex {vx.id}: single artificial overloaded ({vx.arts[0].load} > {K})")
            for a in vx.arts:
                for e in a.edges:
                    if e.tree or e.host.get(vx.id) is not a:
                        out.append(f"vertex {vx.id}: stale hosting of {e}")
        return out
