"""Sparse chunk-adjacency matrices stored as packed lists of their 1 positions.

Each machine word holds up to ``F = w // f`` fields of ``f = 1 + 2r`` bits,
``r = ceil(log2(h + 1))``.  A field is ``[control | row | col]`` with the
control bit on top; rows and columns are numbered 1..h so an all-zero field
means "unused".  Field 0 of a word is its lowest-order field and the fields in
use are contiguous from field 0.  Fields are kept in strictly increasing
row-major order across the word list, and every word is between half-full
and full (a lone word may hold fewer).

Comparisons against a query value run on all fields of a word at once by
arithmetic that carries into the control bits; sorting uses a word-parallel
bitonic network over fields.
"""

from __future__ import annotations

import heapq
import math
from functools import lru_cache

import numpy as np

from .params import field_width


class PackedError(ValueError):
    pass


class PackedLayout:
    """Field geometry and precomputed masks for one (h, w) pair."""

    def __init__(self, h: int, w: int = 64):
        self.h = h
        self.w = w
        self.r = math.ceil(math.log2(h + 1))
        self.f = field_width(h)
        if self.f > w:
            raise PackedError(f"field width {self.f} exceeds word size {w}")
        self.F = w // self.f
        self.min_fill = (self.F + 1) // 2
        self.vbits = 2 * self.r
        self.vmask = (1 << self.vbits) - 1
        self.sentinel = self.vmask
        self.colmask = (1 << self.r) - 1
        self.P = 1 << max(0, (self.F - 1).bit_length())  # network width, power of two
        # per-count masks over the first c fields
        self.ctrl = [self._rep(1 << self.vbits, c) for c in range(2 * self.P + 1)]
        self.vals = [self._rep(self.vmask, c) for c in range(2 * self.P + 1)]
        self.fields = [self._rep((1 << self.f) - 1, c) for c in range(2 * self.P + 1)]
        self.cols_rep = [self._rep(self.colmask, c) for c in range(2 * self.P + 1)]

    def _rep(self, x: int, c: int) -> int:
        """x copied into fields 0..c-1 by doubling shifts."""
        if c <= 0:
            return 0
        y, n = x, 1
        while n < c:
            y |= y << (n * self.f)
            n *= 2
        return y & ((1 << (c * self.f)) - 1)

    def encode(self, k: int, l: int) -> int:
        return (k << self.r) | l

    def decode(self, v: int):
        return v >> self.r, v & self.colmask

    def check_index(self, k: int, l: int) -> None:
        if not (1 <= k <= self.h and 1 <= l <= self.h):
            raise PackedError(f"({k},{l}) outside 1..{self.h}")

    def unpack(self, word: int, c: int) -> list:
        f, vm = self.f, self.vmask
        return [(word >> (t * f)) & vm for t in range(c)]

    def pack(self, values) -> int:
        word = 0
        for t, v in enumerate(values):
            word |= v << (t * self.f)
        return word

    def marks(self, word: int, c: int, v: int):
        """Control-bit masks of the fields >= v and of the fields > v."""
        ctrl = self.ctrl[c]
        ge = (word + self._rep((1 << self.vbits) - v, c)) & ctrl
        gt = ((word | ctrl) - self._rep(v + 1, c)) & ctrl
        return ge, gt


@lru_cache(maxsize=None)
def layout(h: int, w: int = 64) -> PackedLayout:
    return PackedLayout(h, w)


# --- word-parallel sorting -------------------------------------------------

def _spread(lay: PackedLayout, ctrl_bits: int) -> int:
    """Turn set control bits into masks over the value bits of those fields."""
    return ctrl_bits - (ctrl_bits >> (lay.f - 1))


@lru_cache(maxsize=None)
def _network_masks(h: int, w: int, n: int):
    """Per-step masks of a bitonic network over n (power of two) fields."""
    lay = layout(h, w)
    f = lay.f
    sort_steps = []
    s = 2
    while s <= n:
        d = s // 2
        while d >= 1:
            low = asc = 0
            for i in range(n):
                if i & d == 0:
                    low |= 1 << (i * f + lay.vbits)
                    if i & s == 0:
                        asc |= 1 << (i * f + lay.vbits)
            sort_steps.append((d, low, asc))
            d //= 2
        s *= 2
    merge_steps = []
    d = n // 2
    while d >= 1:
        low = 0
        for i in range(n):
            if i & d == 0:
                low |= 1 << (i * f + lay.vbits)
        merge_steps.append((d, low, low))
        d //= 2
    reverse_steps = []
    d = n // 2
    while d >= 1:
        lo = 0
        for i in range(n):
            if i & d == 0:
                lo |= ((1 << f) - 1) << (i * f)
        reverse_steps.append((d, lo))
        d //= 2
    return sort_steps, merge_steps, reverse_steps


def _compare_exchange(lay: PackedLayout, x: int, d: int, low_ctrl: int, asc_ctrl: int) -> int:
    f = lay.f
    vals_low = _spread(lay, low_ctrl)
    a = x & vals_low
    b = (x >> (d * f)) & vals_low
    b_ge_a = ((b | low_ctrl) - a) & low_ctrl
    a_ge_b = ((a | low_ctrl) - b) & low_ctrl
    a_gt_b = low_ctrl & ~b_ge_a
    a_lt_b = low_ctrl & ~a_ge_b
    desc_ctrl = low_ctrl & ~asc_ctrl
    swap = _spread(lay, (a_gt_b & asc_ctrl) | (a_lt_b & desc_ctrl))
    na = (a & ~swap) | (b & swap)
    nb = (b & ~swap) | (a & swap)
    return (x & ~(vals_low | (vals_low << (d * f)))) | na | (nb << (d * f))


def _pad(lay: PackedLayout, word: int, c: int, n: int) -> int:
    return word | (lay.vals[n] & ~lay.vals[c])


def sort_word(lay: PackedLayout, word: int, c: int) -> int:
    """Sort the c fields of one word with a packed bitonic network."""
    if c <= 1:
        return word
    n = lay.P
    x = _pad(lay, word, c, n)
    sort_steps, _, _ = _network_masks(lay.h, lay.w, n)
    for d, low, asc in sort_steps:
        x = _compare_exchange(lay, x, d, low, asc)
    return x & lay.vals[c]


def _reverse(lay: PackedLayout, x: int, n: int) -> int:
    f = lay.f
    _, _, rev = _network_masks(lay.h, lay.w, n)
    for d, lo in rev:
        x = ((x & lo) << (d * f)) | ((x >> (d * f)) & lo)
    return x


def merge_words(lay: PackedLayout, a: int, ca: int, b: int, cb: int) -> int:
    """Merge two sorted words (ca and cb fields) into one sorted 2P-field value."""
    n = lay.P
    x = _pad(lay, a, ca, n) | (_reverse(lay, _pad(lay, b, cb, n), n) << (n * lay.f))
    _, merge_steps, _ = _network_masks(lay.h, lay.w, 2 * n)
    for d, low, asc in merge_steps:
        x = _compare_exchange(lay, x, d, low, asc)
    return x


def merge_lists(lay: PackedLayout, xs, ys):
    """Blocked merge of two sorted lists of (word, count) pairs.

    Each step merges the carried block with the next word of the list whose
    last fetched block ended lower, emitting as many fields as the smaller of
    the two blocks holds.
    """
    f = lay.f
    out = []
    cur, cur_n = 0, 0
    carry, carry_n = 0, 0
    sources = [list(xs), list(ys)]
    pos = [0, 0]
    last = [-1, -1]

    def emit(word, n):
        nonlocal cur, cur_n
        while n:
            take = min(n, lay.F - cur_n)
            cur |= (word & lay.vals[take]) << (cur_n * f)
            cur_n += take
            word >>= take * f
            n -= take
            if cur_n == lay.F:
                out.append((cur, cur_n))
                cur, cur_n = 0, 0

    while pos[0] < len(sources[0]) or pos[1] < len(sources[1]):
        if pos[0] >= len(sources[0]):
            s = 1
        elif pos[1] >= len(sources[1]):
            s = 0
        else:
            s = 0 if last[0] <= last[1] else 1
        word, n = sources[s][pos[s]]
        pos[s] += 1
        last[s] = (word >> ((n - 1) * f)) & lay.vmask
        if carry_n == 0:
            carry, carry_n = word, n
            continue
        merged = merge_words(lay, carry, carry_n, word, n)
        k = min(carry_n, n)
        emit(merged, k)
        carry_n = carry_n + n - k
        carry = (merged >> (k * f)) & lay.vals[carry_n]
    emit(carry, carry_n)
    if cur_n:
        out.append((cur, cur_n))
    return out


# --- the matrix ------------------------------------------------------------

class PackedMatrix:
    """An h x h 0-1 matrix as a sorted packed list of its 1 positions.

    ``transposed`` is the orientation flag: owners that keep one matrix for a
    pair of superchunks use it to record which side indexes the rows.
    Mutating methods work in place; use :meth:`copy` for value semantics.
    """

    __slots__ = ("lay", "words", "counts", "transposed")

    def __init__(self, lay: PackedLayout, words=None, counts=None, transposed: bool = False):
        self.lay = lay
        self.words = list(words or [])
        self.counts = list(counts or [])
        self.transposed = transposed

    # construction / conversion
    @classmethod
    def from_positions(cls, lay: PackedLayout, positions, transposed=False) -> "PackedMatrix":
        vals = sorted({lay.encode(k, l) for k, l in positions})
        for v in vals:
            lay.check_index(*lay.decode(v))
        m = cls(lay, transposed=transposed)
        m._load(vals)
        return m

    @classmethod
    def from_dense(cls, lay: PackedLayout, arr) -> "PackedMatrix":
        ks, ls = np.nonzero(np.asarray(arr))
        return cls.from_positions(lay, [(int(k) + 1, int(l) + 1) for k, l in zip(ks, ls)])

    def _load(self, vals) -> None:
        F = self.lay.F
        n = len(vals)
        nw = -(-n // F)
        self.words, self.counts = [], []
        start = 0
        for i in range(nw):
            size = n // nw + (1 if i < n % nw else 0)
            self.words.append(self.lay.pack(vals[start:start + size]))
            self.counts.append(size)
            start += size

    def copy(self) -> "PackedMatrix":
        return PackedMatrix(self.lay, self.words, self.counts, self.transposed)

    def values(self) -> list:
        out = []
        for word, c in zip(self.words, self.counts):
            out.extend(self.lay.unpack(word, c))
        return out

    def positions(self) -> list:
        return [self.lay.decode(v) for v in self.values()]

    def to_dense(self) -> np.ndarray:
        arr = np.zeros((self.lay.h, self.lay.h), dtype=bool)
        for k, l in self.positions():
            arr[k - 1, l - 1] = True
        return arr

    @property
    def count(self) -> int:
        return sum(self.counts)

    def __len__(self) -> int:
        return self.count

    def __bool__(self) -> bool:
        return bool(self.words)

    def __eq__(self, other) -> bool:
        if not isinstance(other, PackedMatrix):
            return NotImplemented
        return self.lay is other.lay and self.values() == other.values()

    def __repr__(self) -> str:
        return f"PackedMatrix(h={self.lay.h}, {self.positions()})"

    # searching
    def _first(self, i: int) -> int:
        return self.words[i] & self.lay.vmask

    def _find(self, v: int):
        """(word, field, found) of the first field >= v."""
        words = self.words
        if not words:
            return 0, 0, False
        lo, hi = 0, len(words)
        while lo < hi:
            mid = (lo + hi) // 2
            if self._first(mid) <= v:
                lo = mid + 1
            else:
                hi = mid
        wi = lo - 1
        if wi < 0:
            return 0, 0, False
        c = self.counts[wi]
        ge, gt = self.lay.marks(words[wi], c, v)
        n_le = c - gt.bit_count()
        if ge & ~gt:
            return wi, n_le - 1, True
        if n_le == c and wi + 1 < len(words):
            return wi + 1, 0, False
        return wi, n_le, False

    def search(self, k: int, l: int):
        """(found, (word index, field index)); the position is the insertion point when absent."""
        self.lay.check_index(k, l)
        wi, fi, found = self._find(self.lay.encode(k, l))
        return found, (wi, fi)

    def contains(self, k: int, l: int) -> bool:
        return self.search(k, l)[0]

    def find_one(self):
        if not self.words:
            return None
        return self.lay.decode(self._first(0))

    # local word surgery
    def _split_word(self, wi: int, fi: int) -> None:
        f = self.lay.f
        word, c = self.words[wi], self.counts[wi]
        self.words[wi] = word & self.lay.fields[fi]
        self.counts[wi] = fi
        self.words.insert(wi + 1, word >> (fi * f))
        self.counts.insert(wi + 1, c - fi)

    def _boundary(self, v: int) -> int:
        """Split words so that a word boundary separates fields < v from fields >= v."""
        wi, fi, _ = self._find(v)
        if wi >= len(self.words):
            return len(self.words)
        if fi == 0:
            return wi
        if fi >= self.counts[wi]:
            return wi + 1
        self._split_word(wi, fi)
        return wi + 1

    def _row_boundary(self, k: int) -> int:
        if k > self.lay.h:
            return len(self.words)
        return self._boundary(self.lay.encode(k, 0))

    def _repack(self, i: int, j: int) -> None:
        vals = []
        for word, c in zip(self.words[i:j], self.counts[i:j]):
            vals.extend(self.lay.unpack(word, c))
        F = self.lay.F
        n = len(vals)
        nw = -(-n // F)
        words, counts = [], []
        start = 0
        for t in range(nw):
            size = n // nw + (1 if t < n % nw else 0)
            words.append(self.lay.pack(vals[start:start + size]))
            counts.append(size)
            start += size
        self.words[i:j] = words
        self.counts[i:j] = counts

    def _fix_seam(self, i: int) -> None:
        """Restore the fill invariant around the word boundary before index i."""
        lo = max(0, i - 2)
        hi = min(len(self.words), i + 2)
        if any(c < self.lay.min_fill for c in self.counts[lo:hi]) or 0 in self.counts[lo:hi]:
            self._repack(lo, hi)

    # single-entry updates
    def insert_one(self, k: int, l: int) -> None:
        self.lay.check_index(k, l)
        v = self.lay.encode(k, l)
        wi, fi, found = self._find(v)
        if found:
            raise PackedError(f"({k},{l}) already present")
        if not self.words:
            self.words, self.counts = [v], [1]
            return
        if wi >= len(self.words):
            wi, fi = len(self.words) - 1, self.counts[-1]
        if fi == 0 and wi > 0 and self.counts[wi - 1] < self.lay.F:
            wi, fi = wi - 1, self.counts[wi - 1]
        F, f = self.lay.F, self.lay.f
        word = self.words[wi]
        low = word & self.lay.fields[fi]
        self.words[wi] = low | (v << (fi * f)) | ((word ^ low) << f)
        self.counts[wi] += 1
        if self.counts[wi] > F:
            # F+1 fields: the overflow field spills into a fresh word
            self._split_word(wi, (F + 2) // 2)

    def delete_one(self, k: int, l: int) -> None:
        self.lay.check_index(k, l)
        wi, fi, found = self._find(self.lay.encode(k, l))
        if not found:
            raise PackedError(f"({k},{l}) not present")
        f = self.lay.f
        word = self.words[wi]
        low = word & self.lay.fields[fi]
        self.words[wi] = low | ((word >> ((fi + 1) * f)) << (fi * f))
        self.counts[wi] -= 1
        if self.counts[wi] == 0:
            del self.words[wi]
            del self.counts[wi]
            self._fix_seam(wi)
        elif self.counts[wi] < self.lay.min_fill and len(self.words) > 1:
            self._fix_seam(wi)

    # row operations
    def zero_rows(self, a: int, b: int) -> None:
        """Clear rows a..b-1."""
        if a >= b:
            return
        i = self._row_boundary(a)
        j = self._row_boundary(b)
        del self.words[i:j]
        del self.counts[i:j]
        self._fix_seam(i)

    def zero_row(self, k: int) -> None:
        if not 1 <= k <= self.lay.h:
            raise PackedError(f"row {k} outside 1..{self.lay.h}")
        self.zero_rows(k, k + 1)

    def _row_empty(self, a: int, b: int) -> bool:
        if a >= b:
            return True
        lay = self.lay
        wa, fa, _ = self._find(lay.encode(a, 0))
        if b > lay.h:
            return wa >= len(self.words) or (fa >= self.counts[wa] and wa == len(self.words) - 1)
        wb, fb, _ = self._find(lay.encode(b, 0))
        return (wa, fa) == (wb, fb) or (fa >= self.counts[wa] and (wb, fb) == (wa + 1, 0))

    def _shift_words(self, i: int, j: int, delta: int) -> None:
        lay = self.lay
        for t in range(i, j):
            rep = lay._rep(abs(delta) << lay.r, self.counts[t])
            self.words[t] = self.words[t] + rep if delta > 0 else self.words[t] - rep

    def shift_row_indices(self, a: int, b: int, delta: int) -> None:
        """Move rows a..b-1 to a+delta..b-1+delta; the destination rows must be free."""
        h = self.lay.h
        if a >= b or delta == 0:
            return
        if not (1 <= a + delta and b - 1 + delta <= h and 1 <= a and b <= h + 1):
            raise PackedError(f"shifting rows [{a},{b}) by {delta} leaves 1..{h}")
        if delta > 0:
            free = self._row_empty(max(b, a + delta), b + delta)
        else:
            free = self._row_empty(a + delta, min(a, b + delta))
        if not free:
            raise PackedError(f"shifting rows [{a},{b}) by {delta} collides with occupied rows")
        i = self._row_boundary(a)
        j = self._row_boundary(b)
        self._shift_words(i, j, delta)
        self._fix_seam(j)
        self._fix_seam(i)

    def _slice(self, a: int, b: int):
        """Copies of the words holding rows a..b-1, without modifying self."""
        tmp = self.copy()
        i = tmp._row_boundary(a)
        j = tmp._row_boundary(b)
        return tmp.words[i:j], tmp.counts[i:j]

    def extract_rows(self, a: int, b: int) -> "PackedMatrix":
        """Remove rows a..b-1 and return them (row indices unchanged) as a new matrix."""
        out = PackedMatrix(self.lay, transposed=self.transposed)
        if a >= b:
            return out
        i = self._row_boundary(a)
        j = self._row_boundary(b)
        out.words, out.counts = self.words[i:j], self.counts[i:j]
        del self.words[i:j]
        del self.counts[i:j]
        self._fix_seam(i)
        if len(out.words) > 1:
            out._fix_seam(1)
            out._fix_seam(len(out.words) - 1)
        return out

    def copy_row_interval(self, src: "PackedMatrix", a: int, b: int, target: int) -> None:
        """Paste rows a..b-1 of src at rows target.. of self (which must be empty there)."""
        if a >= b:
            return
        h = self.lay.h
        n = b - a
        if not (1 <= a and b <= h + 1 and 1 <= target and target + n - 1 <= h):
            raise PackedError(f"row interval [{a},{b}) -> {target} overflows 1..{h}")
        if not self._row_empty(target, target + n):
            raise PackedError(f"destination rows [{target},{target + n}) are not empty")
        words, counts = src._slice(a, b)
        if not words:
            return
        block = PackedMatrix(self.lay, words, counts)
        block._shift_words(0, len(words), target - a)
        i = self._row_boundary(target)
        self.words[i:i] = block.words
        self.counts[i:i] = block.counts
        self._fix_seam(i + len(block.words))
        self._fix_seam(i)

    def union_into(self, other: "PackedMatrix") -> None:
        """self |= other."""
        if not other.words:
            return
        if not self.words:
            self.words, self.counts = list(other.words), list(other.counts)
            return
        merged = merge_lists(self.lay, zip(self.words, self.counts), zip(other.words, other.counts))
        vals = []
        prev = -1
        for word, c in merged:
            for v in self.lay.unpack(word, c):
                if v != prev:
                    vals.append(v)
                    prev = v
        self._load(vals)

    def merge_rows(self, k: int) -> None:
        """Row k becomes row k OR row k+1; rows k+2.. move up by one."""
        h = self.lay.h
        if not 1 <= k < h:
            raise PackedError(f"cannot merge row {k} with its successor (h={h})")
        nxt = self.extract_rows(k + 1, k + 2)
        nxt._shift_words(0, len(nxt.words), -1)
        self.shift_row_indices(k + 2, h + 1, -1)
        self.union_into(nxt)

    def insert_zero_row(self, k: int) -> None:
        """Open an empty row at k; row h is dropped."""
        h = self.lay.h
        if not 1 <= k <= h:
            raise PackedError(f"row {k} outside 1..{h}")
        self.zero_row(h)
        self.shift_row_indices(k, h, 1)

    # transpose
    def transpose(self) -> "PackedMatrix":
        """Swap row and column subfields word-parallel, sort each word, then merge shortest-first."""
        lay = self.lay
        r = lay.r
        lists = []
        for word, c in zip(self.words, self.counts):
            cols = word & lay.cols_rep[c]
            rows = (word >> r) & lay.cols_rep[c]
            swapped = (cols << r) | rows
            lists.append([(sort_word(lay, swapped, c), c)])
        heap = [(1, i, lst) for i, lst in enumerate(lists)]
        heapq.heapify(heap)
        seq = len(heap)
        while len(heap) > 1:
            _, _, xs = heapq.heappop(heap)
            _, _, ys = heapq.heappop(heap)
            merged = merge_lists(lay, xs, ys)
            heapq.heappush(heap, (len(merged), seq, merged))
            seq += 1
        out = PackedMatrix(lay, transposed=not self.transposed)
        if heap:
            final = heap[0][2]
            out.words = [w for w, _ in final]
            out.counts = [c for _, c in final]
            if len(out.words) > 1:
                out._fix_seam(len(out.words) - 1)
        return out

    # validation
    def violations(self) -> list:
        lay = self.lay
        out = []
        if len(self.words) != len(self.counts):
            out.append("word/count length mismatch")
            return out
        prev = -1
        for i, (word, c) in enumerate(zip(self.words, self.counts)):
            if c < 1 or c > lay.F:
                out.append(f"word {i} holds {c} fields")
            elif len(self.words) > 1 and c < lay.min_fill:
                out.append(f"word {i} below half-full ({c} < {lay.min_fill})")
            if word >> (c * lay.f):
                out.append(f"word {i} has bits beyond its {c} fields")
            if word & lay.ctrl[c]:
                out.append(f"word {i} has a raised control bit")
            for v in lay.unpack(word, c):
                k, l = lay.decode(v)
                if not (1 <= k <= lay.h and 1 <= l <= lay.h):
                    out.append(f"word {i} holds out-of-range field ({k},{l})")
                if v <= prev:
                    out.append(f"word {i} breaks row-major order at ({k},{l})")
                prev = v
        return out
