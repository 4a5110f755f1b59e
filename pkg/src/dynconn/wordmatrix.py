"""Dense h x h 0-1 matrices packed into one machine word.

Entry (k, l) lives at bit ``(h*h - 1) - (k*h + l)`` counting from the least
significant bit, so row 0 / column 0 is the most significant used bit and a
right shift by one moves every entry one column to the right.  Row and column
surgery is done with a handful of shifts and masks; the column masks are
derived from the single word ``mu = (1^h 0^h)^(h/2)``.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class MatrixIndexError(IndexError):
    pass


@dataclass(frozen=True)
class MaskSet:
    h: int
    mu: int
    nu: tuple  # nu[k] selects columns k..h-1; nu[h] == 0
    full: int
    rows: tuple = field(repr=False)  # rows[k] selects row k

    @property
    def size(self) -> int:
        return self.h * self.h

    def row_range(self, a: int, b: int) -> int:
        """Mask for rows a..b-1."""
        if a >= b:
            return 0
        h = self.h
        return ((1 << ((b - a) * h)) - 1) << ((h - b) * h)

    def col_range(self, a: int, b: int) -> int:
        """Mask for columns a..b-1."""
        if a >= b:
            return 0
        return self.nu[a] & ~self.nu[b]


def build_masks(h: int, w: int | None = None) -> MaskSet:
    if h < 2 or h % 2:
        raise ValueError(f"h must be even and >= 2, got {h}")
    if w is not None and h * h > w:
        raise ValueError(f"an {h}x{h} matrix does not fit a {w}-bit word")
    full = (1 << (h * h)) - 1
    block = ((1 << h) - 1) << h  # 1^h 0^h
    mu = 0
    for _ in range(h // 2):
        mu = (mu << (2 * h)) | block
    nu = []
    for k in range(h + 1):
        half = (mu >> k) & mu
        nu.append(half | (half >> h))
    rows = tuple(((1 << h) - 1) << ((h - 1 - k) * h) for k in range(h))
    return MaskSet(h=h, mu=mu, nu=tuple(nu), full=full, rows=rows)


def _check(k: int, h: int, what: str = "index") -> None:
    if not 0 <= k < h:
        raise MatrixIndexError(f"{what} {k} outside [0, {h})")


def bit_position(k: int, l: int, h: int) -> int:
    return h * h - 1 - (k * h + l)


def get_bit(a: int, k: int, l: int, m: MaskSet) -> int:
    _check(k, m.h, "row")
    _check(l, m.h, "column")
    return (a >> bit_position(k, l, m.h)) & 1


def set_bit(a: int, k: int, l: int, m: MaskSet) -> int:
    _check(k, m.h, "row")
    _check(l, m.h, "column")
    return a | (1 << bit_position(k, l, m.h))


def clear_bit(a: int, k: int, l: int, m: MaskSet) -> int:
    _check(k, m.h, "row")
    _check(l, m.h, "column")
    return a & ~(1 << bit_position(k, l, m.h))


def insert_zero_row(a: int, k: int, m: MaskSet) -> int:
    """Open an all-zero row at k; old rows k..h-2 move down, row h-1 falls off."""
    _check(k, m.h, "row")
    low = a & m.row_range(k, m.h)
    return (a ^ low) | (low >> m.h)


def insert_zero_col(a: int, k: int, m: MaskSet) -> int:
    """Open an all-zero column at k; old column h-1 falls off."""
    _check(k, m.h, "column")
    moved = a & (m.nu[k + 1] << 1)
    return (a & ~m.nu[k] & m.full) | (moved >> 1)


def zero_row(a: int, k: int, m: MaskSet) -> int:
    _check(k, m.h, "row")
    return a & ~m.rows[k]


def zero_col(a: int, k: int, m: MaskSet) -> int:
    _check(k, m.h, "column")
    return a & ~m.col_range(k, k + 1)


def _shift(x: int, by: int) -> int:
    # positive: toward higher row/column indices (machine right shift)
    return x >> by if by >= 0 else x << -by


def copy_row_interval(src: int, dst: int, a: int, b: int, target: int, m: MaskSet) -> int:
    """Overwrite rows target.. of dst with rows a..b-1 of src."""
    if a >= b:
        return dst
    h = m.h
    if not (0 <= a < b <= h and 0 <= target and target + (b - a) <= h):
        raise MatrixIndexError(f"row interval [{a},{b}) -> {target} overflows {h} rows")
    block = _shift(src & m.row_range(a, b), (target - a) * h)
    return (dst & ~m.row_range(target, target + b - a)) | block


def copy_col_interval(src: int, dst: int, a: int, b: int, target: int, m: MaskSet) -> int:
    """Overwrite columns target.. of dst with columns a..b-1 of src."""
    if a >= b:
        return dst
    h = m.h
    if not (0 <= a < b <= h and 0 <= target and target + (b - a) <= h):
        raise MatrixIndexError(f"column interval [{a},{b}) -> {target} overflows {h} columns")
    block = _shift(src & m.col_range(a, b), target - a)
    return (dst & ~m.col_range(target, target + b - a)) | block


def merge_rows(a: int, k: int, m: MaskSet) -> int:
    """Row k becomes row k OR row k+1; later rows move up; the last row is cleared."""
    h = m.h
    if not 0 <= k < h - 1:
        raise MatrixIndexError(f"cannot merge row {k} with its successor (h={h})")
    head = a & m.row_range(0, k + 1)
    tail = (a & m.row_range(k + 1, h)) << h  # row k+1 lands on row k
    return head | tail


def merge_cols(a: int, k: int, m: MaskSet) -> int:
    """Column analogue of :func:`merge_rows`."""
    h = m.h
    if not 0 <= k < h - 1:
        raise MatrixIndexError(f"cannot merge column {k} with its successor (h={h})")
    head = a & ~m.nu[k + 1] & m.full
    tail = (a & m.nu[k + 1]) << 1
    keep_tail = tail & m.nu[k + 1]  # old columns k+2.. now at k+1..
    col_k = tail & m.col_range(k, k + 1)  # old column k+1 folded onto k
    return head | keep_tail | col_k


def find_one(a: int, m: MaskSet):
    """Row-major smallest set position, or None for the zero matrix."""
    if not a:
        return None
    idx = m.size - a.bit_length()
    return divmod(idx, m.h)


def rows_to_word(rows, h: int) -> int:
    """Build a word from h row bitmasks given as strings ('1010') or ints (MSB = column 0)."""
    a = 0
    for r in rows:
        v = int(r, 2) if isinstance(r, str) else r
        a = (a << h) | v
    return a


def word_to_rows(a: int, h: int) -> list:
    return [format((a >> ((h - 1 - k) * h)) & ((1 << h) - 1), f"0{h}b") for k in range(h)]


def select(a: int, row_intervals, col_intervals, m: MaskSet) -> int:
    """Restrict a to the union of the given row and column intervals."""
    rmask = 0
    for lo, hi in row_intervals:
        rmask |= m.row_range(lo, hi)
    cmask = 0
    for lo, hi in col_intervals:
        cmask |= m.col_range(lo, hi)
    return a & rmask & cmask
