"""Fixed-width binary vectors packed into 64-bit words.

Bit ``i`` lives in word ``i // 64`` at position ``i % 64``.  Padding bits in
the last word are always zero, so popcount and ``is_ones`` stay exact.
"""
from __future__ import annotations

from fractions import Fraction

import numpy as np

WORD = 64
DEFAULT_WIDTH = 16384


class WidthMismatch(ValueError):
    pass


def _nwords(width: int) -> int:
    return (width + WORD - 1) // WORD


def _tail_mask(width: int) -> np.uint64:
    rem = width % WORD
    if rem == 0:
        return np.uint64(0xFFFFFFFFFFFFFFFF)
    return np.uint64((1 << rem) - 1)


class BitVec:
    """Immutable bit vector of a fixed width."""

    __slots__ = ("width", "words")

    def __init__(self, width: int, words: np.ndarray):
        if width < 1:
            raise ValueError("width must be positive")
        words = np.asarray(words, dtype=np.uint64)
        if words.shape != (_nwords(width),):
            raise ValueError(f"expected {_nwords(width)} words, got {words.shape}")
        words = words.copy()
        words[-1] &= _tail_mask(width)
        words.setflags(write=False)
        self.width = width
        self.words = words

    @classmethod
    def zeros(cls, width: int) -> "BitVec":
        return cls(width, np.zeros(_nwords(width), dtype=np.uint64))

    @classmethod
    def ones(cls, width: int) -> "BitVec":
        return cls(width, np.full(_nwords(width), 0xFFFFFFFFFFFFFFFF, dtype=np.uint64))

    @classmethod
    def from_bools(cls, bits) -> "BitVec":
        bits = np.asarray(bits, dtype=bool)
        width = bits.size
        if width < 1:
            raise ValueError("width must be positive")
        padded = np.zeros(_nwords(width) * WORD, dtype=bool)
        padded[:width] = bits
        packed = np.packbits(padded, bitorder="little")
        return cls(width, packed.view("<u8").astype(np.uint64))

    @classmethod
    def from_string(cls, s: str) -> "BitVec":
        """Build from a string of 0/1 characters; character ``k`` is bit ``k``."""
        s = s.replace("_", "").replace(" ", "")
        if not s or set(s) - {"0", "1"}:
            raise ValueError(f"not a bit string: {s!r}")
        return cls.from_bools([c == "1" for c in s])

    @classmethod
    def from_hex(cls, text: str, width: int) -> "BitVec":
        value = int(text, 16)
        if value >> width:
            raise ValueError("hex value wider than width")
        return cls.from_bools([(value >> i) & 1 for i in range(width)])

    def to_bools(self) -> np.ndarray:
        raw = self.words.astype("<u8").view(np.uint8)
        return np.unpackbits(raw, bitorder="little")[: self.width].astype(bool)

    def to_string(self) -> str:
        return "".join("1" if b else "0" for b in self.to_bools())

    def to_hex(self) -> str:
        """Lowercase hex, most significant bit (index ``width - 1``) first."""
        value = 0
        for k, w in enumerate(self.words.tolist()):
            value |= int(w) << (WORD * k)
        return format(value, "0%dx" % ((self.width + 3) // 4))

    def __getitem__(self, i: int) -> bool:
        if not 0 <= i < self.width:
            raise IndexError(i)
        return bool((int(self.words[i // WORD]) >> (i % WORD)) & 1)

    def __len__(self) -> int:
        return self.width

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitVec):
            return NotImplemented
        return self.width == other.width and bool(np.array_equal(self.words, other.words))

    def __hash__(self) -> int:
        return hash((self.width, self.words.tobytes()))

    def __repr__(self) -> str:
        if self.width <= 64:
            return f"BitVec({self.to_string()!r})"
        return f"BitVec(width={self.width}, popcount={popcount(self)})"

    def __and__(self, other: "BitVec") -> "BitVec":
        return band(self, other)

    def __or__(self, other: "BitVec") -> "BitVec":
        return bor(self, other)

    def __invert__(self) -> "BitVec":
        return bnot(self)


def _check(a: BitVec, b: BitVec) -> None:
    if a.width != b.width:
        raise WidthMismatch(f"width {a.width} != {b.width}")


def band(a: BitVec, b: BitVec) -> BitVec:
    _check(a, b)
    return BitVec(a.width, a.words & b.words)


def bor(a: BitVec, b: BitVec) -> BitVec:
    _check(a, b)
    return BitVec(a.width, a.words | b.words)


def bnot(a: BitVec) -> BitVec:
    # the constructor clears the padding bits again
    return BitVec(a.width, ~a.words)


def popcount(a: BitVec) -> int:
    return int(np.bitwise_count(a.words).sum(dtype=np.int64))


def is_zero(a: BitVec) -> bool:
    return not a.words.any()


def is_ones(a: BitVec) -> bool:
    return popcount(a) == a.width


def symbol_rng(seed: int, draw_index: int) -> np.random.Generator:
    """Independent generator for one draw, keyed by ``(seed, draw_index)``.

    Each draw gets its own child stream of a PCG64 ``SeedSequence``; the vector
    drawn at a given index never depends on what was drawn before it.
    """
    ss = np.random.SeedSequence(entropy=int(seed) & ((1 << 128) - 1), spawn_key=(int(draw_index),))
    return np.random.Generator(np.random.PCG64(ss))


def random_bitvec(width: int, density=Fraction(1, 2), rng: np.random.Generator | None = None) -> BitVec:
    """Each bit is 1 independently with probability ``density``."""
    if width < 1:
        raise ValueError("width must be positive")
    density = float(density)
    if not 0.0 < density <= 1.0:
        raise ValueError(f"density must lie in (0, 1], got {density}")
    if rng is None:
        rng = np.random.default_rng()
    if density == 0.5:
        words = rng.integers(0, 1 << 64, size=_nwords(width), dtype=np.uint64, endpoint=False)
        return BitVec(width, words)
    return BitVec.from_bools(rng.random(width) < density)
