"""m-of-n CHECKMULTISIG handling: quorum progress, sighashes, finalization.

Thresholds are always derived from the script itself, never from user
declarations. Supported spend types are native P2WSH multisig and
P2SH-wrapped P2WSH multisig. Partial signatures are counted by pubkey
membership for progress display and cryptographically verified against
their BIP-143 sighash at finalize time.
"""

from __future__ import annotations

import dataclasses
import hashlib
import struct
from dataclasses import dataclass

from cryptography.exceptions import InvalidSignature as _BadSig
from cryptography.hazmat.primitives import hashes
from cryptography.hazmat.primitives.asymmetric import ec
from cryptography.hazmat.primitives.asymmetric.utils import Prehashed

from .psbt import (
    Psbt,
    PsbtError,
    input_partial_sigs,
    input_redeem_script,
    input_sighash_type,
    input_witness_script,
    input_witness_utxo,
    set_input_final,
)
from .tx import Transaction, TxOut, sha256d, write_var_bytes

OP_0 = 0x00
OP_1 = 0x51
OP_16 = 0x60
OP_CHECKMULTISIG = 0xAE

SIGHASH_ALL = 0x01
SIGHASH_NONE = 0x02
SIGHASH_SINGLE = 0x03
SIGHASH_ANYONECANPAY = 0x80


class NoScript(PsbtError):
    """Input has neither a witness script nor a redeem script."""


class NonMultisigScript(PsbtError):
    pass


class QuorumNotMet(PsbtError):
    pass


class UnsupportedScriptType(PsbtError):
    pass


class InvalidSignature(PsbtError):
    pass


def parse_multisig_script(script: bytes) -> tuple[int, int, list[bytes]]:
    """Parse `OP_m <n pubkeys> OP_n OP_CHECKMULTISIG`; returns (m, n, pubkeys)."""
    if len(script) < 3 or not OP_1 <= script[0] <= OP_16:
        raise NonMultisigScript("script does not start with a small-number threshold")
    m = script[0] - OP_1 + 1
    pubkeys: list[bytes] = []
    i = 1
    while i < len(script) and script[i] in (33, 65):
        push_len = script[i]
        pubkey = script[i + 1 : i + 1 + push_len]
        if len(pubkey) != push_len:
            raise NonMultisigScript("truncated pubkey push")
        pubkeys.append(pubkey)
        i += 1 + push_len
    if i + 2 != len(script):
        raise NonMultisigScript("unexpected trailing script bytes")
    if not OP_1 <= script[i] <= OP_16 or script[i + 1] != OP_CHECKMULTISIG:
        raise NonMultisigScript("script does not end with OP_n OP_CHECKMULTISIG")
    n = script[i] - OP_1 + 1
    if n != len(pubkeys) or not 1 <= m <= n:
        raise NonMultisigScript(f"inconsistent multisig arity m={m} n={n} keys={len(pubkeys)}")
    return m, n, pubkeys


@dataclass(frozen=True)
class InputProgress:
    have: int
    need: int
    total: int


@dataclass(frozen=True)
class SignatureProgress:
    per_input: tuple[InputProgress, ...]
    overall_quorum: bool


def _input_quorum_script(entries: dict[bytes, bytes]) -> bytes:
    script = input_witness_script(entries) or input_redeem_script(entries)
    if script is None:
        raise NoScript("input has no witness or redeem script to derive m/n from")
    return script


def progress(psbt: Psbt) -> SignatureProgress:
    """Per-input m-of-n tally; quorum when every input has enough signatures."""
    per_input = []
    for entries in psbt.inputs:
        m, n, pubkeys = parse_multisig_script(_input_quorum_script(entries))
        sigs = input_partial_sigs(entries)
        have = sum(1 for pk in pubkeys if pk in sigs)
        per_input.append(InputProgress(have=have, need=m, total=n))
    quorum = bool(per_input) and all(p.have >= p.need for p in per_input)
    return SignatureProgress(per_input=tuple(per_input), overall_quorum=quorum)


def sighash_segwit_v0(
    tx: Transaction,
    input_index: int,
    script_code: bytes,
    amount: int,
    sighash_type: int = SIGHASH_ALL,
) -> bytes:
    """BIP-143 signature digest (double-SHA-256 of the preimage)."""
    anyonecanpay = bool(sighash_type & SIGHASH_ANYONECANPAY)
    base = sighash_type & 0x1F

    if anyonecanpay:
        hash_prevouts = b"\x00" * 32
    else:
        hash_prevouts = sha256d(b"".join(i.prevout.serialize() for i in tx.inputs))
    if anyonecanpay or base in (SIGHASH_NONE, SIGHASH_SINGLE):
        hash_sequence = b"\x00" * 32
    else:
        hash_sequence = sha256d(b"".join(struct.pack("<I", i.sequence) for i in tx.inputs))
    if base not in (SIGHASH_NONE, SIGHASH_SINGLE):
        hash_outputs = sha256d(b"".join(o.serialize() for o in tx.outputs))
    elif base == SIGHASH_SINGLE and input_index < len(tx.outputs):
        hash_outputs = sha256d(tx.outputs[input_index].serialize())
    else:
        hash_outputs = b"\x00" * 32

    txin = tx.inputs[input_index]
    preimage = (
        struct.pack("<i", tx.version)
        + hash_prevouts
        + hash_sequence
        + txin.prevout.serialize()
        + write_var_bytes(script_code)
        + struct.pack("<q", amount)
        + struct.pack("<I", txin.sequence)
        + hash_outputs
        + struct.pack("<I", tx.locktime)
        + struct.pack("<I", sighash_type)
    )
    return sha256d(preimage)


def verify_signature(pubkey: bytes, sig_der: bytes, digest: bytes) -> bool:
    """ECDSA-verify a DER signature (without sighash byte) over a 32-byte digest."""
    try:
        point = ec.EllipticCurvePublicKey.from_encoded_point(ec.SECP256K1(), pubkey)
        point.verify(sig_der, digest, ec.ECDSA(Prehashed(hashes.SHA256())))
        return True
    except (_BadSig, ValueError):
        return False


def _hash160(data: bytes) -> bytes:
    return hashlib.new("ripemd160", hashlib.sha256(data).digest()).digest()


def p2wsh_script_pubkey(witness_script: bytes) -> bytes:
    return b"\x00\x20" + hashlib.sha256(witness_script).digest()


def p2sh_script_pubkey(redeem_script: bytes) -> bytes:
    return b"\xa9\x14" + _hash160(redeem_script) + b"\x87"


@dataclass(frozen=True)
class FinalTx:
    raw: bytes
    txid: str


def finalize(psbt: Psbt, *, verify: bool = True) -> FinalTx:
    """Assemble the fully signed transaction from a quorum-complete PSBT.

    Witness signatures are ordered by pubkey position in the witness
    script — never by arrival order — with the empty push CHECKMULTISIG
    consumes placed first. When `verify` is set, every selected signature
    is checked against its BIP-143 sighash before assembly.
    """
    tally = progress(psbt)
    if not tally.overall_quorum:
        raise QuorumNotMet(
            "signatures incomplete: "
            + ", ".join(f"input {i}: {p.have}/{p.need}" for i, p in enumerate(tally.per_input))
        )

    tx = psbt.unsigned_tx()
    script_sigs: list[bytes | None] = []
    witnesses: list[list[bytes]] = []

    for index, entries in enumerate(psbt.inputs):
        witness_script = input_witness_script(entries)
        if witness_script is None:
            raise UnsupportedScriptType(f"input {index} is not a P2WSH spend")
        utxo = input_witness_utxo(entries)
        if utxo is None:
            raise UnsupportedScriptType(f"input {index} has no witness utxo")

        redeem_script = input_redeem_script(entries)
        expected_wsh = p2wsh_script_pubkey(witness_script)
        if utxo.script_pubkey == expected_wsh:
            script_sig = None
        elif redeem_script == expected_wsh and utxo.script_pubkey == p2sh_script_pubkey(redeem_script):
            script_sig = write_var_bytes(redeem_script)
        else:
            raise UnsupportedScriptType(f"input {index} utxo does not match its scripts")

        m, _, pubkeys = parse_multisig_script(witness_script)
        sigs = input_partial_sigs(entries)
        chosen: list[tuple[bytes, bytes]] = []
        for pk in pubkeys:
            if pk in sigs and len(chosen) < m:
                chosen.append((pk, sigs[pk]))
        if len(chosen) < m:
            raise QuorumNotMet(f"input {index} has {len(chosen)} of {m} usable signatures")

        declared = input_sighash_type(entries)
        if declared is not None and declared != SIGHASH_ALL:
            raise UnsupportedScriptType(f"input {index} requests unsupported sighash {declared:#x}")

        if verify:
            digest = sighash_segwit_v0(tx, index, witness_script, utxo.value, SIGHASH_ALL)
            for pk, sig in chosen:
                if not sig or sig[-1] != SIGHASH_ALL:
                    raise InvalidSignature(f"input {index}: signature for {pk.hex()} is not SIGHASH_ALL")
                if not verify_signature(pk, sig[:-1], digest):
                    raise InvalidSignature(f"input {index}: signature for {pk.hex()} does not verify")

        witnesses.append([b""] + [sig for _, sig in chosen] + [witness_script])
        script_sigs.append(script_sig)

    final = Transaction(
        version=tx.version,
        inputs=[
            txin if script_sigs[i] is None else dataclasses.replace(txin, script_sig=script_sigs[i])
            for i, txin in enumerate(tx.inputs)
        ],
        outputs=tx.outputs,
        locktime=tx.locktime,
        witnesses=witnesses,
    )
    return FinalTx(raw=final.serialize(), txid=final.txid())


def finalize_psbt_fields(psbt: Psbt) -> Psbt:
    """Return a copy whose inputs carry final fields instead of partial ones."""
    final = finalize(psbt)
    tx = Transaction.deserialize(final.raw)
    out = psbt.clone()
    assert tx.witnesses is not None
    for i, entries in enumerate(out.inputs):
        script_sig = tx.inputs[i].script_sig or None
        set_input_final(entries, script_sig, tx.witnesses[i])
    return out
