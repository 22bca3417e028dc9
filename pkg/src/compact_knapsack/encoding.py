"""Bit-exact byte encodings for matrices, keys and signatures.

``canonical_bytes`` is the encoding hashed into challenges and used in key
files: ``b"CKR1"``, rows and cols as 4-byte big-endian, then each entry as
a 4-byte length followed by its minimal big-endian two's-complement bytes.

Signature files use the packed variant (``b"CKP1"``), identical except
that entry lengths take a single byte.
"""

from __future__ import annotations

from .intmatrix import IntMatrix

CANONICAL_MAGIC = b"CKR1"
PACKED_MAGIC = b"CKP1"


class DecodeError(ValueError):
    """Malformed or non-canonical serialization."""


def int_width(v: int) -> int:
    """Byte length of the minimal two's-complement encoding of ``v``."""
    return ((v if v >= 0 else ~v).bit_length() + 8) // 8


def int_to_bytes(v: int) -> bytes:
    return v.to_bytes(int_width(v), "big", signed=True)


def int_from_bytes(data: bytes) -> int:
    v = int.from_bytes(data, "big", signed=True)
    if len(data) != int_width(v):
        raise DecodeError("integer not minimally encoded")
    return v


def u32(v: int) -> bytes:
    if not 0 <= v < 1 << 32:
        raise ValueError(f"{v} does not fit in 4 bytes")
    return v.to_bytes(4, "big")


class Reader:
    def __init__(self, data: bytes, offset: int = 0):
        self.data = bytes(data)
        self.pos = offset

    def take(self, count: int) -> bytes:
        if self.pos + count > len(self.data):
            raise DecodeError("truncated input")
        out = self.data[self.pos:self.pos + count]
        self.pos += count
        return out

    def u8(self) -> int:
        return self.take(1)[0]

    def u32(self) -> int:
        return int.from_bytes(self.take(4), "big")

    def expect(self, magic: bytes) -> None:
        got = self.take(len(magic))
        if got != magic:
            raise DecodeError(f"bad magic {got!r}, expected {magic!r}")

    def done(self) -> None:
        if self.pos != len(self.data):
            raise DecodeError(f"{len(self.data) - self.pos} trailing bytes")


def _encode(M: IntMatrix, magic: bytes, len_bytes: int) -> bytes:
    out = bytearray(magic)
    out += u32(M.rows) + u32(M.cols)
    limit = 1 << (8 * len_bytes)
    for row in M:
        for v in row:
            raw = int_to_bytes(v)
            if len(raw) >= limit:
                raise ValueError(f"entry too large for a {len_bytes}-byte length prefix")
            out += len(raw).to_bytes(len_bytes, "big") + raw
    return bytes(out)


def _decode(reader: Reader, magic: bytes, len_bytes: int) -> IntMatrix:
    reader.expect(magic)
    rows, cols = reader.u32(), reader.u32()
    data = []
    for _ in range(rows):
        row = []
        for _ in range(cols):
            length = int.from_bytes(reader.take(len_bytes), "big")
            row.append(int_from_bytes(reader.take(length)))
        data.append(row)
    return IntMatrix(data, cols=cols)


def canonical_bytes(M: IntMatrix) -> bytes:
    return _encode(M, CANONICAL_MAGIC, 4)


def read_canonical(reader: Reader) -> IntMatrix:
    return _decode(reader, CANONICAL_MAGIC, 4)


def packed_bytes(M: IntMatrix) -> bytes:
    return _encode(M, PACKED_MAGIC, 1)


def read_packed(reader: Reader) -> IntMatrix:
    return _decode(reader, PACKED_MAGIC, 1)


def parse_canonical(data: bytes) -> IntMatrix:
    r = Reader(data)
    M = read_canonical(r)
    r.done()
    return M


def encoded_size(M: IntMatrix, len_bytes: int) -> int:
    """Length of the encoding without building it: header plus per-entry cost."""
    return 12 + sum(len_bytes + int_width(v) for row in M for v in row)
