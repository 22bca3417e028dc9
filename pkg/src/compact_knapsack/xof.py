"""Deterministic byte streams expanded from a seed with SHAKE-256.

Block ``i`` of the stream is ``SHAKE256(tag || seed || i_be64)`` truncated
to :data:`BLOCK_BYTES`.  Every key, nonce and seeded sample in the package
is drawn through :func:`sample_interval`, so seeds reproduce bit-exactly.
"""

from __future__ import annotations

import hashlib
import os
import random

BLOCK_BYTES = 136  # SHAKE-256 rate

TAG_KEYGEN = b"CKKEYGv1"
TAG_MATRIX = b"CKAMATv1"
TAG_SECRET = b"CKSECXv1"
TAG_NONCE = b"CKNONCv1"


class XofStream:
    """Byte stream ``XOF(tag || seed || counter)``."""

    def __init__(self, seed: bytes, tag: bytes = TAG_NONCE):
        if len(tag) != 8:
            raise ValueError("domain tags are 8 bytes")
        self.tag = bytes(tag)
        self.seed = bytes(seed)
        self._counter = 0
        self._buf = b""

    @classmethod
    def fresh(cls, tag: bytes = TAG_NONCE) -> XofStream:
        return cls(os.urandom(32), tag)

    def read(self, count: int) -> bytes:
        while len(self._buf) < count:
            block = hashlib.shake_256(self.tag + self.seed + self._counter.to_bytes(8, "big"))
            self._buf += block.digest(BLOCK_BYTES)
            self._counter += 1
        out, self._buf = self._buf[:count], self._buf[count:]
        return out

    def interval(self, bits: int) -> int:
        """Uniform integer with exactly ``bits`` bits, i.e. in ``[2^(bits-1), 2^bits - 1]``.

        Reads ``ceil(bits/8)``-byte big-endian chunks, keeps the low ``bits``
        bits and rejects values below ``2^(bits-1)``.
        """
        if bits < 1:
            raise ValueError("bit length must be positive")
        width = (bits + 7) // 8
        mask = (1 << bits) - 1
        low = 1 << (bits - 1)
        while True:
            v = int.from_bytes(self.read(width), "big") & mask
            if v >= low:
                return v

    def randbits(self, bits: int) -> int:
        width = (bits + 7) // 8
        return int.from_bytes(self.read(width), "big") & ((1 << bits) - 1)


def sample_interval(rng, bits: int) -> int:
    """Uniform draw from ``I_bits`` using either an :class:`XofStream` or a :class:`random.Random`."""
    if isinstance(rng, XofStream):
        return rng.interval(bits)
    return rng.randint(1 << (bits - 1), (1 << bits) - 1)


def random_bits(rng, count: int) -> tuple[int, ...]:
    if isinstance(rng, XofStream):
        v = rng.randbits(count)
    else:
        v = rng.getrandbits(count) if count else 0
    return tuple((v >> i) & 1 for i in range(count))


def derive_seed(master: bytes, label: bytes, length: int) -> bytes:
    return hashlib.shake_256(TAG_KEYGEN + label + bytes(master)).digest(length)


def ensure_rng(rng):
    if rng is None:
        return XofStream.fresh()
    if isinstance(rng, (XofStream, random.Random)):
        return rng
    if isinstance(rng, (bytes, bytearray)):
        return XofStream(bytes(rng))
    return random.Random(rng)
