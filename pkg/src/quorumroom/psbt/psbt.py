"""BIP-174 Partially Signed Bitcoin Transactions: parse, serialize, combine.

A PSBT is stored exactly as it is on the wire: one global key-value map,
one map per input, one per output, every key unique within its map.
Fields this engine does not interpret (bip32 derivations, proprietary
keys, ...) ride along verbatim and survive round-trips and combines.

Serialization emits each map's keys in lexicographic order, which is the
canonical form produced by the reference implementation; every published
test vector round-trips byte-identically.
"""

from __future__ import annotations

import base64
import binascii
import copy
import hashlib
import struct
from dataclasses import dataclass, field
from io import BytesIO
from typing import BinaryIO

from .tx import (
    SerializationError,
    Transaction,
    TxOut,
    read_var_bytes,
    sha256d,
    write_compact_size,
    write_var_bytes,
)

PSBT_MAGIC = b"psbt\xff"

GLOBAL_UNSIGNED_TX = 0x00

IN_NON_WITNESS_UTXO = 0x00
IN_WITNESS_UTXO = 0x01
IN_PARTIAL_SIG = 0x02
IN_SIGHASH_TYPE = 0x03
IN_REDEEM_SCRIPT = 0x04
IN_WITNESS_SCRIPT = 0x05
IN_FINAL_SCRIPTSIG = 0x07
IN_FINAL_WITNESS = 0x08

OUT_REDEEM_SCRIPT = 0x00
OUT_WITNESS_SCRIPT = 0x01


class PsbtError(SerializationError):
    pass


class BadMagic(PsbtError):
    pass


class DuplicateKey(PsbtError):
    pass


class SignedTxInGlobal(PsbtError):
    """The global unsigned transaction carries scriptSig or witness data."""


class InvalidStructure(PsbtError):
    pass


class DifferentUnsignedTx(PsbtError):
    """Combine was attempted across two different transactions."""


class ConflictingValues(PsbtError):
    """Same key, different values — e.g. two signatures for one pubkey."""


def _read_map(f: BinaryIO) -> dict[bytes, bytes]:
    """Read key-value pairs up to and including the 0x00 separator."""
    entries: dict[bytes, bytes] = {}
    while True:
        key = read_var_bytes(f)
        if key == b"":
            return entries
        value = read_var_bytes(f)
        if key in entries:
            raise DuplicateKey(f"duplicate key {key.hex()}")
        entries[key] = value


def _write_map(entries: dict[bytes, bytes]) -> bytes:
    r = b""
    for key in sorted(entries):
        r += write_var_bytes(key) + write_var_bytes(entries[key])
    return r + b"\x00"


def _require_bare_key(key: bytes, what: str) -> None:
    if len(key) != 1:
        raise InvalidStructure(f"{what} key must carry no extra data")


def _validate_global(global_map: dict[bytes, bytes]) -> Transaction:
    for key in global_map:
        if key[0] == GLOBAL_UNSIGNED_TX:
            _require_bare_key(key, "global unsigned tx")
    tx_bytes = global_map.get(bytes([GLOBAL_UNSIGNED_TX]))
    if tx_bytes is None:
        raise InvalidStructure("no unsigned transaction in global map")
    tx = Transaction.deserialize(tx_bytes)
    if tx.has_witness() or any(txin.script_sig for txin in tx.inputs):
        raise SignedTxInGlobal("unsigned tx must have empty scriptSigs and no witness")
    return tx


def _validate_input_map(entries: dict[bytes, bytes], prevout_txid: bytes) -> None:
    for key, value in entries.items():
        ktype = key[0]
        if ktype == IN_NON_WITNESS_UTXO:
            _require_bare_key(key, "non-witness utxo")
            utxo = Transaction.deserialize(value)
            if sha256d(utxo.serialize(include_witness=False)) != prevout_txid:
                raise InvalidStructure("non-witness utxo does not match outpoint txid")
        elif ktype == IN_WITNESS_UTXO:
            _require_bare_key(key, "witness utxo")
            TxOut.deserialize(BytesIO(value))
        elif ktype == IN_PARTIAL_SIG:
            if len(key) not in (34, 66):
                raise InvalidStructure(f"partial sig key has bad pubkey length {len(key) - 1}")
        elif ktype == IN_SIGHASH_TYPE:
            _require_bare_key(key, "sighash type")
            if len(value) != 4:
                raise InvalidStructure("sighash type must be 4 bytes")
        elif ktype in (IN_REDEEM_SCRIPT, IN_WITNESS_SCRIPT, IN_FINAL_SCRIPTSIG, IN_FINAL_WITNESS):
            _require_bare_key(key, f"input field {ktype:#04x}")


def _validate_output_map(entries: dict[bytes, bytes]) -> None:
    for key in entries:
        if key[0] in (OUT_REDEEM_SCRIPT, OUT_WITNESS_SCRIPT):
            _require_bare_key(key, f"output field {key[0]:#04x}")


@dataclass
class Psbt:
    global_map: dict[bytes, bytes] = field(default_factory=dict)
    inputs: list[dict[bytes, bytes]] = field(default_factory=list)
    outputs: list[dict[bytes, bytes]] = field(default_factory=list)

    @property
    def unsigned_tx_bytes(self) -> bytes:
        return self.global_map[bytes([GLOBAL_UNSIGNED_TX])]

    def unsigned_tx(self) -> Transaction:
        return Transaction.deserialize(self.unsigned_tx_bytes)

    def serialize(self) -> bytes:
        r = PSBT_MAGIC + _write_map(self.global_map)
        for entries in self.inputs:
            r += _write_map(entries)
        for entries in self.outputs:
            r += _write_map(entries)
        return r

    def to_base64(self) -> str:
        return base64.b64encode(self.serialize()).decode("ascii")

    def fingerprint(self) -> str:
        """SHA-256 hex of the canonical serialization; safe to log and publish."""
        return hashlib.sha256(self.serialize()).hexdigest()

    def clone(self) -> "Psbt":
        return copy.deepcopy(self)


def parse_psbt(data: bytes | str) -> Psbt:
    """Parse binary or base64 PSBT input, auto-detected by magic."""
    if isinstance(data, str):
        data = data.strip()
        try:
            raw = base64.b64decode(data, validate=True)
        except (binascii.Error, ValueError):
            raise BadMagic("text input is not valid base64") from None
    elif data[: len(PSBT_MAGIC)] != PSBT_MAGIC:
        # Bytes that do not open with the magic may still be base64 text.
        try:
            raw = base64.b64decode(data.decode("ascii").strip(), validate=True)
        except (binascii.Error, ValueError, UnicodeDecodeError):
            raw = data
    else:
        raw = data

    if raw[: len(PSBT_MAGIC)] != PSBT_MAGIC:
        raise BadMagic("missing psbt magic prefix")

    f = BytesIO(raw)
    f.seek(len(PSBT_MAGIC))
    global_map = _read_map(f)
    tx = _validate_global(global_map)

    inputs = []
    for txin in tx.inputs:
        entries = _read_map(f)
        _validate_input_map(entries, txin.prevout.txid)
        inputs.append(entries)
    outputs = []
    for _ in tx.outputs:
        entries = _read_map(f)
        _validate_output_map(entries)
        outputs.append(entries)

    if f.read(1):
        raise InvalidStructure("trailing bytes after output maps")
    return Psbt(global_map=global_map, inputs=inputs, outputs=outputs)


def combine(a: Psbt, b: Psbt) -> Psbt:
    """Merge two PSBTs for the same unsigned transaction.

    The union keeps every key from both sides; a key present in both with
    equal values collapses to one, and a key present in both with
    different values is an error rather than a silent overwrite.
    """
    if a.unsigned_tx_bytes != b.unsigned_tx_bytes:
        raise DifferentUnsignedTx("cannot combine PSBTs for different transactions")
    merged = a.clone()
    pairs = [(merged.global_map, b.global_map)]
    pairs += list(zip(merged.inputs, b.inputs))
    pairs += list(zip(merged.outputs, b.outputs))
    for ours, theirs in pairs:
        for key, value in theirs.items():
            if key in ours and ours[key] != value:
                raise ConflictingValues(f"conflicting values for key {key.hex()}")
            ours[key] = value
    return merged


# Typed accessors over one input map.


def input_partial_sigs(entries: dict[bytes, bytes]) -> dict[bytes, bytes]:
    return {key[1:]: value for key, value in entries.items() if key[0] == IN_PARTIAL_SIG}


def input_witness_script(entries: dict[bytes, bytes]) -> bytes | None:
    return entries.get(bytes([IN_WITNESS_SCRIPT]))


def input_redeem_script(entries: dict[bytes, bytes]) -> bytes | None:
    return entries.get(bytes([IN_REDEEM_SCRIPT]))


def input_witness_utxo(entries: dict[bytes, bytes]) -> TxOut | None:
    raw = entries.get(bytes([IN_WITNESS_UTXO]))
    return TxOut.deserialize(BytesIO(raw)) if raw is not None else None


def input_non_witness_utxo(entries: dict[bytes, bytes]) -> Transaction | None:
    raw = entries.get(bytes([IN_NON_WITNESS_UTXO]))
    return Transaction.deserialize(raw) if raw is not None else None


def input_sighash_type(entries: dict[bytes, bytes]) -> int | None:
    raw = entries.get(bytes([IN_SIGHASH_TYPE]))
    return struct.unpack("<I", raw)[0] if raw is not None else None


def set_input_final(entries: dict[bytes, bytes], script_sig: bytes | None, witness_stack: list[bytes]) -> None:
    """Replace a finalized input's fields per the BIP-174 finalizer role."""
    keep_types = (IN_NON_WITNESS_UTXO, IN_WITNESS_UTXO)
    for key in [k for k in entries if k[0] not in keep_types]:
        del entries[key]
    if script_sig is not None:
        entries[bytes([IN_FINAL_SCRIPTSIG])] = script_sig
    stack = write_compact_size(len(witness_stack))
    for item in witness_stack:
        stack += write_var_bytes(item)
    entries[bytes([IN_FINAL_WITNESS])] = stack
