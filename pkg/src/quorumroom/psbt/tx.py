"""Raw Bitcoin transaction serialization, including segwit, plus TXID computation.

TXIDs are the double-SHA-256 of the witness-stripped serialization,
displayed byte-reversed in hex per Bitcoin convention.
"""

from __future__ import annotations

import hashlib
import struct
from dataclasses import dataclass, field
from io import BytesIO
from typing import BinaryIO


class SerializationError(Exception):
    pass


class Truncated(SerializationError):
    pass


class MalformedVarint(SerializationError):
    pass


class MalformedTx(SerializationError):
    pass


def sha256d(data: bytes) -> bytes:
    return hashlib.sha256(hashlib.sha256(data).digest()).digest()


def read_exact(f: BinaryIO, n: int) -> bytes:
    data = f.read(n)
    if len(data) != n:
        raise Truncated(f"wanted {n} bytes, got {len(data)}")
    return data


def read_compact_size(f: BinaryIO) -> int:
    """Read a CompactSize integer, rejecting non-minimal encodings."""
    first = read_exact(f, 1)[0]
    if first < 253:
        return first
    if first == 253:
        value = struct.unpack("<H", read_exact(f, 2))[0]
        floor = 253
    elif first == 254:
        value = struct.unpack("<I", read_exact(f, 4))[0]
        floor = 0x10000
    else:
        value = struct.unpack("<Q", read_exact(f, 8))[0]
        floor = 0x100000000
    if value < floor:
        raise MalformedVarint(f"non-canonical compact size {value}")
    return value


def write_compact_size(n: int) -> bytes:
    if n < 0:
        raise ValueError("compact size must be non-negative")
    if n < 253:
        return struct.pack("B", n)
    if n <= 0xFFFF:
        return struct.pack("<BH", 253, n)
    if n <= 0xFFFFFFFF:
        return struct.pack("<BI", 254, n)
    return struct.pack("<BQ", 255, n)


def read_var_bytes(f: BinaryIO) -> bytes:
    return read_exact(f, read_compact_size(f))


def write_var_bytes(data: bytes) -> bytes:
    return write_compact_size(len(data)) + data


@dataclass(frozen=True)
class OutPoint:
    txid: bytes  # 32 bytes, internal (little-endian) order as serialized
    vout: int

    def serialize(self) -> bytes:
        return self.txid + struct.pack("<I", self.vout)

    @classmethod
    def deserialize(cls, f: BinaryIO) -> "OutPoint":
        return cls(txid=read_exact(f, 32), vout=struct.unpack("<I", read_exact(f, 4))[0])


@dataclass(frozen=True)
class TxIn:
    prevout: OutPoint
    script_sig: bytes = b""
    sequence: int = 0xFFFFFFFF

    def serialize(self) -> bytes:
        return self.prevout.serialize() + write_var_bytes(self.script_sig) + struct.pack("<I", self.sequence)

    @classmethod
    def deserialize(cls, f: BinaryIO) -> "TxIn":
        prevout = OutPoint.deserialize(f)
        script_sig = read_var_bytes(f)
        sequence = struct.unpack("<I", read_exact(f, 4))[0]
        return cls(prevout=prevout, script_sig=script_sig, sequence=sequence)


@dataclass(frozen=True)
class TxOut:
    value: int  # satoshis
    script_pubkey: bytes

    def serialize(self) -> bytes:
        return struct.pack("<q", self.value) + write_var_bytes(self.script_pubkey)

    @classmethod
    def deserialize(cls, f: BinaryIO) -> "TxOut":
        value = struct.unpack("<q", read_exact(f, 8))[0]
        return cls(value=value, script_pubkey=read_var_bytes(f))


@dataclass
class Transaction:
    version: int = 2
    inputs: list[TxIn] = field(default_factory=list)
    outputs: list[TxOut] = field(default_factory=list)
    locktime: int = 0
    # One stack per input when witness data is present, else None.
    witnesses: list[list[bytes]] | None = None

    def has_witness(self) -> bool:
        return self.witnesses is not None and any(self.witnesses)

    def serialize(self, include_witness: bool = True) -> bytes:
        segwit = include_witness and self.has_witness()
        r = struct.pack("<i", self.version)
        if segwit:
            r += b"\x00\x01"
        r += write_compact_size(len(self.inputs))
        for txin in self.inputs:
            r += txin.serialize()
        r += write_compact_size(len(self.outputs))
        for txout in self.outputs:
            r += txout.serialize()
        if segwit:
            assert self.witnesses is not None
            for stack in self.witnesses:
                r += write_compact_size(len(stack))
                for item in stack:
                    r += write_var_bytes(item)
        r += struct.pack("<I", self.locktime)
        return r

    @classmethod
    def read_from(cls, f: BinaryIO) -> "Transaction":
        version = struct.unpack("<i", read_exact(f, 4))[0]
        marker = read_exact(f, 1)
        segwit = False
        if marker == b"\x00":
            # BIP-144 marker; flag must be 0x01
            flag = read_exact(f, 1)
            if flag != b"\x01":
                raise MalformedTx(f"bad segwit flag {flag!r}")
            segwit = True
            n_in = read_compact_size(f)
        else:
            f.seek(-1, 1)
            n_in = read_compact_size(f)
        inputs = [TxIn.deserialize(f) for _ in range(n_in)]
        n_out = read_compact_size(f)
        outputs = [TxOut.deserialize(f) for _ in range(n_out)]
        witnesses: list[list[bytes]] | None = None
        if segwit:
            witnesses = []
            for _ in range(n_in):
                n_items = read_compact_size(f)
                witnesses.append([read_var_bytes(f) for _ in range(n_items)])
            if not any(witnesses):
                raise MalformedTx("segwit marker but all witness stacks empty")
        locktime = struct.unpack("<I", read_exact(f, 4))[0]
        return cls(version=version, inputs=inputs, outputs=outputs, locktime=locktime, witnesses=witnesses)

    @classmethod
    def deserialize(cls, data: bytes) -> "Transaction":
        f = BytesIO(data)
        tx = cls.read_from(f)
        if f.read(1):
            raise MalformedTx("trailing bytes after transaction")
        return tx

    def txid_digest(self) -> bytes:
        """Double-SHA-256 of the witness-stripped serialization (internal byte order)."""
        return sha256d(self.serialize(include_witness=False))

    def txid(self) -> str:
        return self.txid_digest()[::-1].hex()


def compute_txid(raw_tx: bytes) -> str:
    """TXID of a raw transaction blob in display (reversed-hex) form."""
    return Transaction.deserialize(raw_tx).txid()
