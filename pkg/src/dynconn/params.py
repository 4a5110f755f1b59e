"""Structural parameters shared by every layer of the connectivity structure."""

from __future__ import annotations

import math
from dataclasses import dataclass

DENSE = "dense"
PACKED = "packed"
ENCODINGS = (DENSE, PACKED)


class ParamError(ValueError):
    pass


def default_h(w: int, encoding: str = DENSE) -> int:
    if encoding == PACKED:
        return w
    return 2 * (math.isqrt(w) // 2)


def default_k(mhat: int, w: int, encoding: str = DENSE) -> int:
    if encoding == PACKED:
        return max(1, math.ceil(math.sqrt(mhat / (w * math.log2(w)))))
    return max(1, math.ceil(math.sqrt(mhat / math.sqrt(w))))


def id_universe(mhat: int, K: int, h: int) -> int:
    return max(1, math.ceil(4 * mhat / (K * h)))


@dataclass(frozen=True)
class Params:
    """Word size ``w``, matrix side ``h``, chunk mass bound ``K``, id universe ``J``.

    ``mhat`` is the fixed edge-count ceiling the instance is built for.
    """

    w: int
    h: int
    K: int
    J: int
    mhat: int
    encoding: str = DENSE

    def __post_init__(self):
        if self.encoding not in ENCODINGS:
            raise ParamError(f"unknown encoding {self.encoding!r}")
        if self.w < 4:
            raise ParamError("word size must be at least 4 bits")
        if self.h < 2 or self.h % 2:
            raise ParamError(f"h must be even and >= 2, got {self.h}")
        if self.encoding == DENSE and self.h * self.h > self.w:
            raise ParamError(f"dense encoding needs h*h <= w (h={self.h}, w={self.w})")
        if self.encoding == PACKED and field_width(self.h) > self.w:
            raise ParamError(f"a packed field of h={self.h} does not fit a {self.w}-bit word")
        if self.K < 1:
            raise ParamError("K must be positive")
        if self.mhat < 1:
            raise ParamError("mhat must be positive")
        if self.J < 1:
            raise ParamError("J must be positive")

    @classmethod
    def build(cls, mhat: int, w: int = 64, encoding: str = DENSE,
              K: int | None = None, h: int | None = None) -> "Params":
        if encoding not in ENCODINGS:
            raise ParamError(f"unknown encoding {encoding!r}")
        h = default_h(w, encoding) if h is None else h
        K = default_k(mhat, w, encoding) if K is None else K
        if K < 1:
            raise ParamError("K must be positive")
        if h < 2:
            raise ParamError(f"h must be even and >= 2, got {h}")
        return cls(w=w, h=h, K=K, J=id_universe(mhat, K, h), mhat=mhat, encoding=encoding)

    @property
    def half_h(self) -> int:
        return self.h // 2

    @property
    def vector_words(self) -> int:
        """Machine words in one length-J bit-vector."""
        return -(-self.J // self.w)


def field_width(h: int) -> int:
    """Bits per packed field: a control bit plus row and column subfields."""
    return 1 + 2 * math.ceil(math.log2(h + 1))
