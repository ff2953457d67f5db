"""Bit-exact file formats for codewords and binary sequences.

All multi-byte integers are big-endian; bits pack MSB-first within each
byte, zero-padded to the byte boundary, so files are identical across
platforms and implementations.
"""

from __future__ import annotations

import struct

import numpy as np

from .codec import Codeword
from .errors import InvalidParameter

CODEWORD_MAGIC = b"DAC1"
SEQUENCE_MAGIC = b"SEQ1"


def pack_bits(bits) -> bytes:
    return np.packbits(np.asarray(bits, dtype=np.uint8)).tobytes()


def unpack_bits(data: bytes, n_bits: int) -> np.ndarray:
    return np.unpackbits(np.frombuffer(data, dtype=np.uint8))[:n_bits]


def write_codeword(path, cw: Codeword) -> None:
    with open(path, "wb") as fh:
        fh.write(CODEWORD_MAGIC)
        fh.write(struct.pack(">II", cw.n_symbols, cw.n_bits))
        fh.write(pack_bits(cw.bits))


def read_codeword(path) -> Codeword:
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:4] != CODEWORD_MAGIC:
        raise InvalidParameter(f"{path}: bad magic, not a codeword file")
    n_symbols, n_bits = struct.unpack(">II", data[4:12])
    payload = data[12:]
    if not n_bits <= 8 * len(payload) < n_bits + 8:
        raise InvalidParameter(f"{path}: payload length inconsistent with bit count")
    return Codeword(unpack_bits(payload, n_bits), n_symbols)


def write_sequence(path, bits, binary: bool = False) -> None:
    """Write a 0/1 sequence, as text lines (default) or the packed binary form."""
    bits = np.asarray(bits, dtype=np.uint8)
    if binary:
        with open(path, "wb") as fh:
            fh.write(SEQUENCE_MAGIC)
            fh.write(struct.pack(">I", len(bits)))
            fh.write(pack_bits(bits))
    else:
        with open(path, "w") as fh:
            fh.write("".join(map(str, bits.tolist())))
            fh.write("\n")


def read_sequence(path) -> np.ndarray:
    """Read a 0/1 sequence; the binary form is detected by its magic."""
    with open(path, "rb") as fh:
        data = fh.read()
    if data[:4] == SEQUENCE_MAGIC:
        (n,) = struct.unpack(">I", data[4:8])
        payload = data[8:]
        if not n <= 8 * len(payload) < n + 8:
            raise InvalidParameter(f"{path}: payload length inconsistent with bit count")
        return unpack_bits(payload, n)
    try:
        text = data.decode("ascii")
    except UnicodeDecodeError as exc:
        raise InvalidParameter(f"{path}: neither binary nor text sequence") from exc
    chars = [c for c in text if not c.isspace()]
    if any(c not in "01" for c in chars):
        raise InvalidParameter(f"{path}: text sequence must contain only 0/1")
    return np.array([int(c) for c in chars], dtype=np.uint8)
