"""Chunk-adjacency matrices between superchunks.

Superchunks are addressed by a *key*: a non-negative id from the list-sum
universe for superchunks of long tours, or a private negative token for the
single superchunk of a short tour.  ``cell(i, j)`` is the h x h matrix whose
bit (k, l) says some non-tree edge joins chunk k of superchunk i to chunk l
of superchunk j.  Only nonzero cells are stored.

Two interchangeable stores share one interface and use 0-based positions:

* :class:`DenseChAdj` keeps one machine word per ordered pair, both
  orientations, and performs every slot operation with the word kernels.
* :class:`PackedChAdj` keeps one packed list per unordered pair plus the key
  whose chunks index its rows, transposing lazily when the other orientation
  is needed.
"""

from __future__ import annotations

from . import wordmatrix as wm
from .packed import PackedMatrix, layout
from .params import DENSE, PACKED, Params


class AdjacencyError(RuntimeError):
    pass


class _Store:
    encoding = ""

    def __init__(self, h: int, w: int):
        self.h = h
        self.w = w
        self.word_ops = 0
        self._nbrs: dict[int, set] = {}

    # neighbour bookkeeping: keys j with a nonzero cell (i, j)
    def _link(self, i, j):
        self._nbrs.setdefault(i, set()).add(j)
        self._nbrs.setdefault(j, set()).add(i)

    def _unlink(self, i, j):
        for a, b in ((i, j), (j, i)):
            s = self._nbrs.get(a)
            if s is not None:
                s.discard(b)
                if not s:
                    del self._nbrs[a]

    def neighbours(self, i) -> set:
        """Keys j (possibly i itself) whose cell with i is nonzero."""
        return set(self._nbrs.get(i, ()))

    def keys(self) -> set:
        return set(self._nbrs)

    def nonzero(self, i, j) -> bool:
        return j in self._nbrs.get(i, ())

    def vector(self, i) -> int:
        """SupAdj-style bit-vector over the non-negative neighbour keys of i."""
        x = 0
        for j in self._nbrs.get(i, ()):
            if j >= 0:
                x |= 1 << j
        return x

    def _check_pos(self, *ps):
        for p in ps:
            if not 0 <= p < self.h:
                raise AdjacencyError(f"chunk position {p} outside [0, {self.h})")


class DenseChAdj(_Store):
    encoding = DENSE

    def __init__(self, h: int, w: int = 64):
        super().__init__(h, w)
        self.m = wm.build_masks(h, w)
        self.cells: dict[tuple, int] = {}

    def cell(self, i, j) -> int:
        return self.cells.get((i, j), 0)

    def _put(self, i, j, a: int) -> None:
        if a:
            self.cells[(i, j)] = a
            self._link(i, j)
        else:
            self.cells.pop((i, j), None)
            if i != j:
                self.cells.pop((j, i), None)
            self._unlink(i, j)

    def _put_pair(self, i, j, a: int, at: int) -> None:
        """Store (i, j) = a and (j, i) = at, or drop both."""
        if i == j:
            self._put(i, i, a)
            return
        if a:
            self.cells[(i, j)] = a
            self.cells[(j, i)] = at
            self._link(i, j)
        else:
            self._put(i, j, 0)

    def to_rows(self, i, j) -> list:
        """Cell (i, j) as a list of (k, l) positions (for comparison across stores)."""
        a = self.cell(i, j)
        out = []
        while a:
            k, l = wm.find_one(a, self.m)
            out.append((k, l))
            a = wm.clear_bit(a, k, l, self.m)
        return out

    def get(self, i, j, k, l) -> bool:
        self._check_pos(k, l)
        return bool(wm.get_bit(self.cell(i, j), k, l, self.m))

    def set_bit(self, i, j, k, l) -> bool:
        """Set bit (k, l) of cell (i, j) and its mirror; True if the cell was zero."""
        self._check_pos(k, l)
        m = self.m
        was = self.cell(i, j)
        self.word_ops += 2
        self._put_pair(i, j, wm.set_bit(was, k, l, m), wm.set_bit(self.cell(j, i), l, k, m))
        if i == j:
            self._put(i, i, wm.set_bit(self.cell(i, i), l, k, m))
        return was == 0

    def clear_bit(self, i, j, k, l) -> bool:
        """Clear bit (k, l) of cell (i, j) and its mirror; True if the cell became zero."""
        self._check_pos(k, l)
        m = self.m
        a = wm.clear_bit(self.cell(i, j), k, l, m)
        at = wm.clear_bit(self.cell(j, i), l, k, m)
        if i == j:
            a = wm.clear_bit(a, l, k, m)
            at = a
        was_nonzero = self.nonzero(i, j)
        self.word_ops += 2
        self._put_pair(i, j, a, at)
        return was_nonzero and a == 0

    def _map_slot(self, i, row_op, col_op) -> set:
        """Apply row_op to every (i, j), col_op to every (j, i); returns keys whose cell emptied."""
        emptied = set()
        for j in self.neighbours(i):
            if j == i:
                a = col_op(row_op(self.cell(i, i)))
                self._put(i, i, a)
            else:
                a = row_op(self.cell(i, j))
                self._put_pair(i, j, a, col_op(self.cell(j, i)))
            self.word_ops += 2
            if not a:
                emptied.add(j)
        return emptied

    def open_slot(self, i, k) -> None:
        """Open an empty row and column at position k of superchunk i."""
        self._check_pos(k)
        m = self.m
        self._map_slot(i, lambda a: wm.insert_zero_row(a, k, m), lambda a: wm.insert_zero_col(a, k, m))

    def clear_slot(self, i, k) -> set:
        self._check_pos(k)
        m = self.m
        return self._map_slot(i, lambda a: wm.zero_row(a, k, m), lambda a: wm.zero_col(a, k, m))

    def merge_slots(self, i, k) -> None:
        """Chunks k and k+1 of superchunk i become one chunk at k."""
        self._check_pos(k, k + 1)
        m = self.m
        self._map_slot(i, lambda a: wm.merge_rows(a, k, m), lambda a: wm.merge_cols(a, k, m))

    def remove_slot(self, i, k) -> set:
        """Drop position k of superchunk i; later positions move down."""
        emptied = self.clear_slot(i, k)
        if k < self.h - 1:
            self.merge_slots(i, k)
        return emptied

    def split_off(self, i, k, i2) -> None:
        """Positions k.. of superchunk i become positions 0.. of the new superchunk i2."""
        self._check_pos(k)
        m, h = self.m, self.h
        if self._nbrs.get(i2):
            raise AdjacencyError(f"key {i2} already has cells")
        top_rows, low_rows = m.row_range(0, k), m.row_range(k, h)
        left_cols, right_cols = m.col_range(0, k), m.col_range(k, h)

        def rows_down(a):
            return wm.copy_row_interval(a, 0, k, h, 0, m)

        def cols_left(a):
            return wm.copy_col_interval(a, 0, k, h, 0, m)

        for j in self.neighbours(i):
            self.word_ops += 4
            if j == i:
                a = self.cell(i, i)
                self._put(i, i, a & top_rows & left_cols)
                b = cols_left(a & top_rows & right_cols)
                self._put_pair(i, i2, b, rows_down(a & low_rows & left_cols))
                self._put(i2, i2, cols_left(rows_down(a & low_rows & right_cols)))
            else:
                a, at = self.cell(i, j), self.cell(j, i)
                self._put_pair(i, j, a & top_rows, at & left_cols)
                self._put_pair(i2, j, rows_down(a & low_rows), cols_left(at & right_cols))

    def absorb(self, i, i2, n) -> None:
        """Append superchunk i2 to superchunk i at position offset n; i2 disappears."""
        m, h = self.m, self.h
        cnt = h - n

        def rows_up(a):
            return wm.copy_row_interval(a, 0, 0, cnt, n, m)

        def cols_right(a):
            return wm.copy_col_interval(a, 0, 0, cnt, n, m)

        for j in self.neighbours(i2):
            self.word_ops += 4
            if j == i2:
                d = self.cell(i2, i2)
                self._put(i2, i2, 0)
                self._put(i, i, self.cell(i, i) | cols_right(rows_up(d)))
            elif j == i:
                b, c = self.cell(i, i2), self.cell(i2, i)
                self._put(i, i2, 0)
                self._put(i, i, self.cell(i, i) | cols_right(b) | rows_up(c))
            else:
                a, at = self.cell(i2, j), self.cell(j, i2)
                self._put(i2, j, 0)
                self._put_pair(i, j, self.cell(i, j) | rows_up(a), self.cell(j, i) | cols_right(at))

    def rename(self, i, i2) -> None:
        if self._nbrs.get(i2):
            raise AdjacencyError(f"key {i2} already has cells")
        moved = {}
        for j in self.neighbours(i):
            if j == i:
                moved[(i2, i2)] = self.cell(i, i)
            else:
                moved[(i2, j)] = self.cell(i, j)
                moved[(j, i2)] = self.cell(j, i)
            self._put(i, j, 0)
        for (a, b), v in moved.items():
            self.cells[(a, b)] = v
            self._link(a, b)
            self.word_ops += 1

    def find_one(self, i, j):
        a = self.cell(i, j)
        if not a:
            raise AdjacencyError(f"cell ({i}, {j}) is zero")
        self.word_ops += 1
        return wm.find_one(a, self.m)

    def find_in(self, i, j, row_intervals, col_intervals):
        """First 1 of cell (i, j) inside the given row and column intervals."""
        self.word_ops += 1
        return wm.find_one(wm.select(self.cell(i, j), row_intervals, col_intervals, self.m), self.m)


class PackedChAdj(_Store):
    encoding = PACKED

    def __init__(self, h: int, w: int = 64):
        super().__init__(h, w)
        self.lay = layout(h, w)
        # (a, b) with a <= b -> [row key, PackedMatrix]
        self.cells: dict[tuple, list] = {}

    @staticmethod
    def _pair(i, j):
        return (i, j) if i <= j else (j, i)

    def _count_words(self, mat: PackedMatrix) -> None:
        self.word_ops += max(1, len(mat.words))

    def view(self, i, j) -> PackedMatrix:
        """The stored matrix with rows indexed by i, transposing it in place if needed."""
        p = self._pair(i, j)
        entry = self.cells.get(p)
        if entry is None:
            return PackedMatrix(self.lay)
        if entry[0] != i and i != j:
            self._count_words(entry[1])
            entry[1] = entry[1].transpose()
            entry[0] = i
        entry[1].transposed = entry[0] != p[0]
        return entry[1]

    def _store(self, i, j, mat: PackedMatrix) -> None:
        p = self._pair(i, j)
        if mat:
            mat.transposed = i != p[0]
            self.cells[p] = [i, mat]
            self._link(i, j)
        else:
            self.cells.pop(p, None)
            self._unlink(i, j)

    def cell(self, i, j) -> PackedMatrix:
        return self.view(i, j).copy()

    def to_rows(self, i, j) -> list:
        return [(k - 1, l - 1) for k, l in self.view(i, j).positions()]

    def get(self, i, j, k, l) -> bool:
        self._check_pos(k, l)
        return self.view(i, j).contains(k + 1, l + 1)

    def set_bit(self, i, j, k, l) -> bool:
        self._check_pos(k, l)
        mat = self.view(i, j)
        was_zero = not mat
        for a, b in ((k, l), (l, k)) if i == j else ((k, l),):
            if not mat.contains(a + 1, b + 1):
                mat.insert_one(a + 1, b + 1)
        self._count_words(mat)
        self._store(i, j, mat)
        return was_zero

    def clear_bit(self, i, j, k, l) -> bool:
        self._check_pos(k, l)
        if not self.nonzero(i, j):
            return False
        mat = self.view(i, j)
        for a, b in ((k, l), (l, k)) if i == j else ((k, l),):
            if mat.contains(a + 1, b + 1):
                mat.delete_one(a + 1, b + 1)
        self._count_words(mat)
        self._store(i, j, mat)
        return not mat

    def _map_slot(self, i, row_op) -> set:
        """row_op on every (i, j) viewed with rows = i; the diagonal also gets it on columns."""
        emptied = set()
        for j in self.neighbours(i):
            mat = self.view(i, j)
            row_op(mat)
            if j == i:
                mat = mat.transpose()
                row_op(mat)
                self._count_words(mat)
            self._count_words(mat)
            self._store(i, j, mat)
            if not mat:
                emptied.add(j)
        return emptied

    def open_slot(self, i, k) -> None:
        self._check_pos(k)
        self._map_slot(i, lambda mat: mat.insert_zero_row(k + 1))

    def clear_slot(self, i, k) -> set:
        self._check_pos(k)
        return self._map_slot(i, lambda mat: mat.zero_row(k + 1))

    def merge_slots(self, i, k) -> None:
        self._check_pos(k, k + 1)
        self._map_slot(i, lambda mat: mat.merge_rows(k + 1))

    def remove_slot(self, i, k) -> set:
        emptied = self.clear_slot(i, k)
        if k < self.h - 1:
            self.merge_slots(i, k)
        return emptied

    def _shift_up(self, mat: PackedMatrix, delta: int) -> None:
        mat.shift_row_indices(1, self.h + 1 - delta, delta)

    def split_off(self, i, k, i2) -> None:
        self._check_pos(k)
        h = self.h
        if self._nbrs.get(i2):
            raise AdjacencyError(f"key {i2} already has cells")
        for j in self.neighbours(i):
            mat = self.view(i, j)
            low = mat.extract_rows(k + 1, h + 1)
            if low:
                low.shift_row_indices(k + 1, h + 1, -k)
            self._count_words(mat)
            if j != i:
                self._store(i, j, mat)
                self._store(i2, j, low)
                continue
            # diagonal: mat holds rows < k, low holds rows >= k (shifted); both span all columns
            top_t = mat.transpose()  # rows = columns of the old diagonal
            a = top_t.extract_rows(1, k + 1)  # cols < k of the top rows
            self._store(i, i, a)  # symmetric, so no transpose back
            low_t = low.transpose()
            b = low_t.extract_rows(1, k + 1)  # rows: i's chunks < k ; cols: i2's chunks
            if low_t:
                low_t.shift_row_indices(k + 1, h + 1, -k)
            self._store(i, i2, b)
            self._store(i2, i2, low_t)
            self._count_words(top_t)
            self._count_words(low_t)

    def absorb(self, i, i2, n) -> None:
        for j in self.neighbours(i2):
            mat = self.view(i2, j)
            self._count_words(mat)
            self._store(i2, j, PackedMatrix(self.lay))
            if j == i2:
                d = mat
                self._shift_up(d, n)
                d = d.transpose()
                self._shift_up(d, n)
                add = d
            elif j == i:
                b = mat  # rows: i2's chunks, cols: i's chunks
                self._shift_up(b, n)
                add = b.copy()
                bt = b.transpose()  # rows: i's chunks, cols: i2's chunks (shifted)
                add.union_into(bt)
            else:
                self._shift_up(mat, n)
                base = self.view(i, j)
                base.union_into(mat)
                self._store(i, j, base)
                continue
            base = self.view(i, i)
            base.union_into(add)
            self._store(i, i, base)

    def rename(self, i, i2) -> None:
        if self._nbrs.get(i2):
            raise AdjacencyError(f"key {i2} already has cells")
        for j in self.neighbours(i):
            mat = self.view(i, j)
            self._store(i, j, PackedMatrix(self.lay))
            self._store(i2, i2 if j == i else j, mat)
            self.word_ops += 1

    def find_one(self, i, j):
        if not self.nonzero(i, j):
            raise AdjacencyError(f"cell ({i}, {j}) is zero")
        mat = self.view(i, j)
        self.word_ops += 1
        k, l = mat.find_one()
        return k - 1, l - 1

    def find_in(self, i, j, row_intervals, col_intervals):
        if not self.nonzero(i, j):
            return None
        mat = self.view(i, j)
        self._count_words(mat)
        for k, l in mat.positions():
            if any(a <= k - 1 < b for a, b in row_intervals) and any(a <= l - 1 < b for a, b in col_intervals):
                return k - 1, l - 1
        return None


def make_store(params: Params):
    if params.encoding == PACKED:
        return PackedChAdj(params.h, params.w)
    return DenseChAdj(params.h, params.w)
