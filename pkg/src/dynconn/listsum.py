"""OR-aggregating 2-3-4 trees over superchunk lists.

Every live superchunk id ``i`` in ``[J]`` is a leaf carrying two length-J
bit-vectors held as Python ints: ``sup`` (bit j set iff the chunk matrix of
the pair (i, j) is nonzero) and ``memb`` (just bit i).  Internal nodes keep
the OR of their leaves, so the root of a list answers "which superchunks
touch this list" and "which superchunks belong to it" in one vector.

All leaves of a tree sit at the same depth and internal nodes have 2 to 4
children (a root may have fewer).  Join and split run along one or two
root paths.
"""

from __future__ import annotations

import heapq


class CapacityError(RuntimeError):
    pass


class ListSumError(ValueError):
    pass


class Node:
    __slots__ = ("children", "parent", "height", "sup", "memb", "id")

    def __init__(self, height: int = 0, leaf_id: int | None = None):
        self.children: list = []
        self.parent: Node | None = None
        self.height = height
        self.sup = 0
        self.memb = 0
        self.id = leaf_id

    @property
    def is_leaf(self) -> bool:
        return self.height == 0

    def __repr__(self) -> str:
        if self.is_leaf:
            return f"Leaf({self.id})"
        return f"Node(h={self.height}, {len(self.children)} children)"


class IdAllocator:
    """Smallest-free allocation over [J]."""

    def __init__(self, J: int):
        self.J = J
        self._free = list(range(J))
        self._live: set = set()

    def take(self) -> int:
        if not self._free:
            raise CapacityError(f"all {self.J} superchunk ids are in use")
        i = heapq.heappop(self._free)
        self._live.add(i)
        return i

    def give_back(self, i: int) -> None:
        self._live.remove(i)
        heapq.heappush(self._free, i)

    def live(self) -> set:
        return set(self._live)

    def __len__(self) -> int:
        return len(self._live)


class ListSum:
    """Forest of list-sum trees, one per long tour, sharing an id space."""

    def __init__(self, J: int, w: int = 64):
        self.J = J
        self.w = w
        self.ids = IdAllocator(J)
        self.leaves: dict[int, Node] = {}
        self.word_ops = 0
        self._vw = -(-J // w)

    # --- helpers -------------------------------------------------------
    def _refresh(self, z: Node) -> None:
        sup = memb = 0
        for c in z.children:
            sup |= c.sup
            memb |= c.memb
        z.sup, z.memb = sup, memb
        self.word_ops += 2 * self._vw * len(z.children)

    def _refresh_up(self, z: Node | None) -> None:
        while z is not None:
            self._refresh(z)
            z = z.parent

    def root_of(self, i: int) -> Node:
        z = self.leaf(i)
        while z.parent is not None:
            z = z.parent
        return z

    def leaf(self, i: int) -> Node:
        try:
            return self.leaves[i]
        except KeyError:
            raise ListSumError(f"superchunk id {i} is not live") from None

    def _adopt(self, parent: Node, children) -> None:
        parent.children = list(children)
        for c in parent.children:
            c.parent = parent

    # --- join ----------------------------------------------------------
    def join(self, a: Node | None, b: Node | None) -> Node | None:
        """Concatenate two trees; returns the new root."""
        if a is None or b is None:
            root = a if b is None else b
            if root is not None:
                root.parent = None
            return root
        a.parent = b.parent = None
        if a.height == b.height:
            root = Node(a.height + 1)
            self._adopt(root, [a, b])
            self._refresh(root)
            return root
        if a.height > b.height:
            z = a
            while z.height > b.height + 1:
                z = z.children[-1]
            z.children.append(b)
            b.parent = z
        else:
            z = b
            while z.height > a.height + 1:
                z = z.children[0]
            z.children.insert(0, a)
            a.parent = z
        return self._fix_overflow(z)

    def _fix_overflow(self, z: Node) -> Node:
        while True:
            if len(z.children) > 4:
                left = Node(z.height)
                right = Node(z.height)
                self._adopt(left, z.children[:2])
                self._adopt(right, z.children[2:])
                self._refresh(left)
                self._refresh(right)
                parent = z.parent
                if parent is None:
                    root = Node(z.height + 1)
                    self._adopt(root, [left, right])
                    self._refresh(root)
                    return root
                k = parent.children.index(z)
                parent.children[k:k + 1] = [left, right]
                left.parent = right.parent = parent
                z = parent
                continue
            self._refresh(z)
            if z.parent is None:
                return z
            z = z.parent

    # --- split ---------------------------------------------------------
    def split(self, i: int, after: bool = True):
        """Cut the tree holding leaf i just after it (or just before it).

        Returns (left root, right root); either may be None.
        """
        leaf = self.leaf(i)
        left = leaf if after else None
        right = None if after else leaf
        z = leaf
        while z.parent is not None:
            p = z.parent
            k = p.children.index(z)
            lsib, rsib = p.children[:k], p.children[k + 1:]
            left = self.join(self._group(lsib, z.height), left)
            right = self.join(right, self._group(rsib, z.height))
            z = p
        return left, right

    def _group(self, nodes, height: int):
        """Bundle same-height siblings (at most 3) into one subtree."""
        if not nodes:
            return None
        if len(nodes) == 1:
            nodes[0].parent = None
            return nodes[0]
        g = Node(height + 1)
        self._adopt(g, nodes)
        self._refresh(g)
        return g

    # --- superchunk lifecycle -------------------------------------------
    def sc_new(self) -> int:
        """A fresh one-leaf tree; returns its id."""
        i = self.ids.take()
        leaf = Node(0, i)
        leaf.memb = 1 << i
        self.leaves[i] = leaf
        return i

    def sc_insert(self, after: int | None) -> int:
        """Allocate an id and place its leaf right after leaf ``after`` (or alone)."""
        i = self.sc_new()
        if after is not None:
            left, right = self.split(after, after=True)
            self.join(self.join(left, self.leaves[i]), right)
        return i

    def sc_delete(self, i: int) -> Node | None:
        """Remove leaf i from its tree and retire the id; returns the remaining root."""
        if self.leaf(i).sup:
            self.update_adj(i, 0)
        left, _ = self.split(i, after=False)
        _, right = self.split(i, after=True)
        del self.leaves[i]
        self.ids.give_back(i)
        return self.join(left, right)

    def sc_join(self, i: int, j: int) -> Node:
        """Concatenate the list ending in leaf i with the list starting at leaf j."""
        a, b = self.root_of(i), self.root_of(j)
        if a is b:
            raise ListSumError("cannot join a list with itself")
        return self.join(a, b)

    def sc_split(self, i: int):
        """Split after leaf i; the right part must be nonempty."""
        left, right = self.split(i, after=True)
        if right is None:
            self.join(left, None)
            raise ListSumError(f"split after the final leaf {i}")
        return left, right

    # --- vectors --------------------------------------------------------
    def update_adj(self, i: int, x: int) -> None:
        """Set SupAdj_i = x and mirror the change into bit i of every other leaf."""
        leaf = self.leaf(i)
        diff = leaf.sup ^ x
        leaf.sup = x
        self.word_ops += self._vw
        self._refresh_up(leaf.parent)
        bit = 1 << i
        while diff:
            low = diff & -diff
            j = low.bit_length() - 1
            diff ^= low
            other = self.leaves.get(j)
            if j == i or other is None:
                continue
            if x & low:
                other.sup |= bit
            else:
                other.sup &= ~bit
            self._refresh_bit(other.parent, bit)

    def set_pair(self, i: int, j: int, on: bool) -> None:
        """Flip the single symmetric entry (i, j); refreshes only two root paths."""
        li, lj = self.leaf(i), self.leaf(j)
        bi, bj = 1 << i, 1 << j
        if on:
            li.sup |= bj
            lj.sup |= bi
        else:
            li.sup &= ~bj
            lj.sup &= ~bi
        self._refresh_bit(li.parent, bj)
        if i != j:
            self._refresh_bit(lj.parent, bi)

    def _refresh_bit(self, z: Node | None, bit: int) -> None:
        while z is not None:
            want = 0
            for c in z.children:
                want |= c.sup & bit
            self.word_ops += len(z.children)
            if (z.sup & bit) == want:
                return
            z.sup = (z.sup & ~bit) | want
            z = z.parent

    def adj_query(self, root: Node) -> int:
        if root is None:
            raise ListSumError("empty list")
        self.word_ops += self._vw
        return root.sup

    def memb_query(self, root: Node) -> int:
        if root is None:
            raise ListSumError("empty list")
        self.word_ops += self._vw
        return root.memb

    def locate_leaf(self, root: Node, j: int) -> int:
        """A leaf under root whose SupAdj has bit j set."""
        bit = 1 << j
        if not root.sup & bit:
            raise ListSumError(f"bit {j} is not set in this list")
        z = root
        while not z.is_leaf:
            self.word_ops += len(z.children)
            z = next(c for c in z.children if c.sup & bit)
        return z.id

    # --- inspection -----------------------------------------------------
    def leaf_ids(self, root: Node | None) -> list:
        out = []
        if root is None:
            return out
        stack = [root]
        while stack:
            z = stack.pop()
            if z.is_leaf:
                out.append(z.id)
            else:
                stack.extend(reversed(z.children))
        return out

    def violations(self, root: Node) -> list:
        """Structural and aggregate problems in one tree."""
        out = []
        if root.parent is not None:
            out.append("root has a parent")

        def walk(z):
            if z.is_leaf:
                if self.leaves.get(z.id) is not z:
                    out.append(f"leaf {z.id} not registered")
                if z.memb != 1 << z.id:
                    out.append(f"leaf {z.id} has wrong membership vector")
                return z.sup, z.memb
            n = len(z.children)
            if n > 4 or (n < 2 and z is not root) or n < 1:
                out.append(f"node at height {z.height} has {n} children")
            sup = memb = 0
            for c in z.children:
                if c.parent is not z:
                    out.append(f"broken parent link at height {c.height}")
                if c.height != z.height - 1:
                    out.append(f"uneven leaf depth under height {z.height}")
                s, m = walk(c)
                sup |= s
                memb |= m
            if (sup, memb) != (z.sup, z.memb):
                out.append(f"stale aggregate at height {z.height}")
            return z.sup, z.memb

        walk(root)
        return out
