"""Splittable counter-based pseudo-random generator.

Streams are keyed by a 64-bit master seed plus a path of child indices, so any
replica or subsystem can derive an independent, reproducible stream without
coordination. Blocks come from BLAKE2b over (key, counter); the same
(seed, path) always yields the same stream.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from fractions import Fraction


@dataclass(frozen=True)
class Seed:
    """Master seed plus split path identifying one deterministic stream."""

    master: int
    path: tuple = ()

    def child(self, *steps) -> "Seed":
        return Seed(self.master, self.path + tuple(steps))

    def stream(self) -> "Stream":
        return Stream(self)

    def _key_bytes(self) -> bytes:
        parts = [str(self.master & 0xFFFF_FFFF_FFFF_FFFF)]
        for p in self.path:
            parts.append(repr(p))
        return "/".join(parts).encode()


@dataclass
class Stream:
    """Stateful byte stream for one (seed, path)."""

    seed: Seed
    _counter: int = 0
    _buf: bytes = b""
    _pos: int = 0
    _key: bytes = field(default=b"", repr=False)

    def __post_init__(self):
        self._key = hashlib.blake2b(self.seed._key_bytes(), digest_size=32).digest()

    def _refill(self) -> None:
        h = hashlib.blake2b(
            self._counter.to_bytes(8, "little"), digest_size=64, key=self._key
        )
        self._buf = h.digest()
        self._pos = 0
        self._counter += 1

    def bytes(self, n: int) -> bytes:
        out = bytearray()
        while len(out) < n:
            if self._pos >= len(self._buf):
                self._refill()
            take = min(n - len(out), len(self._buf) - self._pos)
            out += self._buf[self._pos : self._pos + take]
            self._pos += take
        return bytes(out)

    def bits(self, n: int) -> int:
        """Uniform integer in [0, 2^n)."""
        nbytes = (n + 7) // 8
        v = int.from_bytes(self.bytes(nbytes), "little")
        return v >> (nbytes * 8 - n)

    def u64(self) -> int:
        return self.bits(64)

    def randint_below(self, n: int) -> int:
        """Uniform integer in [0, n) by rejection."""
        if n <= 0:
            raise ValueError("n must be positive")
        k = n.bit_length()
        while True:
            v = self.bits(k)
            if v < n:
                return v

    def randint(self, a: int, b: int) -> int:
        """Uniform integer in [a, b] inclusive."""
        return a + self.randint_below(b - a + 1)

    def uniform_fraction(self, bits: int = 128) -> Fraction:
        """Exact dyadic uniform in [0, 1)."""
        return Fraction(self.bits(bits), 1 << bits)

    def bernoulli(self, p: Fraction) -> bool:
        """Exact Bernoulli(p) for rational p."""
        num, den = p.numerator, p.denominator
        # u < p with u = U/2^128 exactly: U * den < num * 2^128
        return self.bits(128) * den < num << 128

    def shuffle(self, items: list) -> list:
        for i in range(len(items) - 1, 0, -1):
            j = self.randint(0, i)
            items[i], items[j] = items[j], items[i]
        return items

    def choice(self, items):
        return items[self.randint_below(len(items))]

    def lazy_uniform(self) -> "LazyUniform":
        return LazyUniform(self)


class LazyUniform:
    """A uniform real in [0,1) revealed bit by bit, for exact comparisons
    against rational thresholds (the comparison refines until decided)."""

    __slots__ = ("_stream", "num", "bits")

    def __init__(self, stream: Stream):
        self._stream = stream
        self.num = 0
        self.bits = 0

    def _refine(self, extra: int = 64) -> None:
        self.num = (self.num << extra) | self._stream.bits(extra)
        self.bits += extra

    def less_than(self, q: Fraction) -> bool:
        """Exact u < q."""
        if q <= 0:
            return False
        if q >= 1:
            return True
        while True:
            # u in [num/2^bits, (num+1)/2^bits)
            if (self.num + 1) * q.denominator <= q.numerator << self.bits:
                return True
            if self.num * q.denominator >= q.numerator << self.bits:
                return False
            if self.bits > 8192:
                raise AssertionError("lazy uniform comparison did not resolve")
            self._refine()
