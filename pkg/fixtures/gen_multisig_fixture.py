#!/usr/bin/env python3
"""Generate the 2-of-3 multisig ceremony fixtures and golden transactions.

Deliberately self-contained: this script carries its own transaction
serialization, segwit-v0 sighash, DER handling, and PSBT emission so the
goldens it produces are independent of the package under test. Signing is
RFC 6979 deterministic, so re-running reproduces identical bytes.

Before emitting anything, the script checks its sighash code against the
published segwit-v0 test vectors; it refuses to write fixtures if any
check fails.

Run from the repository root:  python3 fixtures/gen_multisig_fixture.py
"""

import hashlib
import json
import struct
from pathlib import Path

from cryptography.hazmat.primitives import hashes
from cryptography.hazmat.primitives.asymmetric import ec
from cryptography.hazmat.primitives.asymmetric.utils import (
    Prehashed,
    decode_dss_signature,
    encode_dss_signature,
)
from cryptography.hazmat.primitives.serialization import Encoding, PublicFormat

OUT_DIR = Path(__file__).parent

SECP256K1_N = 0xFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEBAAEDCE6AF48A03BBFD25E8CD0364141
SIGHASH_ALL = 0x01


def sha256(b: bytes) -> bytes:
    return hashlib.sha256(b).digest()


def sha256d(b: bytes) -> bytes:
    return sha256(sha256(b))


def hash160(b: bytes) -> bytes:
    return hashlib.new("ripemd160", sha256(b)).digest()


def csize(n: int) -> bytes:
    if n < 253:
        return struct.pack("B", n)
    if n <= 0xFFFF:
        return struct.pack("<BH", 253, n)
    if n <= 0xFFFFFFFF:
        return struct.pack("<BI", 254, n)
    return struct.pack("<BQ", 255, n)


def vb(data: bytes) -> bytes:
    return csize(len(data)) + data


def ser_outpoint(txid_le: bytes, vout: int) -> bytes:
    return txid_le + struct.pack("<I", vout)


def ser_input(txid_le: bytes, vout: int, script_sig: bytes, sequence: int) -> bytes:
    return ser_outpoint(txid_le, vout) + vb(script_sig) + struct.pack("<I", sequence)


def ser_output(value: int, script_pubkey: bytes) -> bytes:
    return struct.pack("<q", value) + vb(script_pubkey)


def ser_tx(version, inputs, outputs, locktime, witnesses=None) -> bytes:
    r = struct.pack("<i", version)
    if witnesses is not None:
        r += b"\x00\x01"
    r += csize(len(inputs))
    for txid_le, vout, script_sig, sequence in inputs:
        r += ser_input(txid_le, vout, script_sig, sequence)
    r += csize(len(outputs))
    for value, spk in outputs:
        r += ser_output(value, spk)
    if witnesses is not None:
        for stack in witnesses:
            r += csize(len(stack))
            for item in stack:
                r += vb(item)
    r += struct.pack("<I", locktime)
    return r


def bip143_digest(version, inputs, outputs, locktime, index, script_code, amount, sighash_type) -> bytes:
    hash_prevouts = sha256d(b"".join(ser_outpoint(t, v) for t, v, _, _ in inputs))
    hash_sequence = sha256d(b"".join(struct.pack("<I", s) for _, _, _, s in inputs))
    hash_outputs = sha256d(b"".join(ser_output(v, s) for v, s in outputs))
    txid_le, vout, _, sequence = inputs[index]
    preimage = (
        struct.pack("<i", version)
        + hash_prevouts
        + hash_sequence
        + ser_outpoint(txid_le, vout)
        + vb(script_code)
        + struct.pack("<q", amount)
        + struct.pack("<I", sequence)
        + hash_outputs
        + struct.pack("<I", locktime)
        + struct.pack("<I", sighash_type)
    )
    return sha256d(preimage)


def self_check_sighash() -> None:
    """Pin the sighash code to the published segwit-v0 example vectors."""
    # Native P2WPKH example
    inputs = [
        (bytes.fromhex("fff7f7881a8099afa6940d42d1e7f6362bec38171ea3edf433541db4e4ad969f"), 0, b"", 0xFFFFFFEE),
        (bytes.fromhex("ef51e1b804cc89d182d279655c3aa89e815b1b309fe287d9b2b55d57b90ec68a"), 1, b"", 0xFFFFFFFF),
    ]
    outputs = [
        (0x06B22C20, bytes.fromhex("76a9148280b37df378db99f66f85c95a783a76ac7a6d5988ac")),
        (0x0D519390, bytes.fromhex("76a9143bde42dbee7e4dbe6a21b2d50ce2f0167faa815988ac")),
    ]
    digest = bip143_digest(
        1, inputs, outputs, 0x11, 1,
        bytes.fromhex("76a9141d0f172a0ecb48aee1be1f2687d2963ae33f71a188ac"),
        600000000, SIGHASH_ALL,
    )
    assert digest.hex() == "c37af31116d1b27caf68aae9e3ac82f1477929014d5b917657d0eb49478cb670", digest.hex()

    # P2SH-P2WPKH example
    inputs = [
        (bytes.fromhex("db6b1b20aa0fd7b23880be2ecbd4a98130974cf4748fb66092ac4d3ceb1a5477"), 1, b"", 0xFFFFFFFE),
    ]
    outputs = [
        (0x0BEBB4B8, bytes.fromhex("76a914a457b684d7f0d539a46a45bbc043f35b59d0d96388ac")),
        (0x2FAF0800, bytes.fromhex("76a914fd270b1ee6abcaea97fea7ad0402e8bd8ad6d77c88ac")),
    ]
    digest = bip143_digest(
        1, inputs, outputs, 0x492, 0,
        bytes.fromhex("76a91479091972186c449eb1ded22b78e40d009bdf008988ac"),
        1000000000, SIGHASH_ALL,
    )
    assert digest.hex() == "64f3b0f4dd2bb3aa1ce8566d220cc74dda9df97d8490cc81d89d735c92e59fb6", digest.hex()


def derive_key(label: str) -> ec.EllipticCurvePrivateKey:
    seed = int.from_bytes(sha256(label.encode()), "big") % (SECP256K1_N - 1) + 1
    return ec.derive_private_key(seed, ec.SECP256K1())


def compressed(key: ec.EllipticCurvePrivateKey) -> bytes:
    return key.public_key().public_bytes(Encoding.X962, PublicFormat.CompressedPoint)


def sign_low_s(key: ec.EllipticCurvePrivateKey, digest: bytes) -> bytes:
    der = key.sign(digest, ec.ECDSA(Prehashed(hashes.SHA256()), deterministic_signing=True))
    r, s = decode_dss_signature(der)
    if s > SECP256K1_N // 2:
        s = SECP256K1_N - s
        der = encode_dss_signature(r, s)
    return der + bytes([SIGHASH_ALL])


def emit_psbt(unsigned_tx: bytes, input_maps: list[dict], n_outputs: int) -> bytes:
    def emit_map(entries: dict) -> bytes:
        r = b""
        for key in sorted(entries):
            r += vb(key) + vb(entries[key])
        return r + b"\x00"

    blob = b"psbt\xff" + emit_map({b"\x00": unsigned_tx})
    for entries in input_maps:
        blob += emit_map(entries)
    blob += emit_map({}) * n_outputs
    return blob


def build_set(name: str, wrap_p2sh: bool) -> None:
    out = OUT_DIR / name
    out.mkdir(parents=True, exist_ok=True)

    signers = [derive_key(f"quorumroom fixture {name} signer {i}") for i in (1, 2, 3)]
    pubkeys = [compressed(k) for k in signers]
    extraneous_key = derive_key(f"quorumroom fixture {name} extraneous signer")

    # OP_2 <pk1> <pk2> <pk3> OP_3 OP_CHECKMULTISIG
    witness_script = b"\x52" + b"".join(vb(pk) for pk in pubkeys) + b"\x53\xae"
    p2wsh_spk = b"\x00\x20" + sha256(witness_script)
    if wrap_p2sh:
        redeem_script = p2wsh_spk
        funding_spk = b"\xa9\x14" + hash160(redeem_script) + b"\x87"
    else:
        redeem_script = None
        funding_spk = p2wsh_spk

    amount = 100_000_000
    funding_prevout = sha256(f"quorumroom fixture {name} funding prevout".encode())
    funding_tx = ser_tx(2, [(funding_prevout, 0, b"", 0xFFFFFFFF)], [(amount, funding_spk)], 0)
    funding_txid_le = sha256d(funding_tx)

    dest1 = b"\x00\x14" + hash160(compressed(derive_key(f"quorumroom fixture {name} dest 1")))
    dest2 = b"\x00\x14" + hash160(compressed(derive_key(f"quorumroom fixture {name} dest 2")))
    spend_inputs = [(funding_txid_le, 0, b"", 0xFFFFFFFD)]
    spend_outputs = [(60_000_000, dest1), (39_990_000, dest2)]
    unsigned_tx = ser_tx(2, spend_inputs, spend_outputs, 0)

    digest = bip143_digest(2, spend_inputs, spend_outputs, 0, 0, witness_script, amount, SIGHASH_ALL)
    sigs = [sign_low_s(k, digest) for k in signers]
    extraneous_sig = sign_low_s(extraneous_key, digest)

    utxo = ser_output(amount, funding_spk)
    base_map = {b"\x01": utxo, b"\x05": witness_script}
    if redeem_script is not None:
        base_map[b"\x04"] = redeem_script

    (out / "unsigned.psbt").write_bytes(emit_psbt(unsigned_tx, [dict(base_map)], 2))
    for i, sig in enumerate(sigs, start=1):
        entries = dict(base_map)
        entries[b"\x02" + pubkeys[i - 1]] = sig
        (out / f"signer{i}.psbt").write_bytes(emit_psbt(unsigned_tx, [entries], 2))
    entries = dict(base_map)
    entries[b"\x02" + compressed(extraneous_key)] = extraneous_sig
    (out / "extraneous.psbt").write_bytes(emit_psbt(unsigned_tx, [entries], 2))

    # Goldens for every 2-signer quorum; signatures ride in script order.
    script_sig = vb(redeem_script) if redeem_script is not None else b""
    final_inputs = [(funding_txid_le, 0, script_sig, 0xFFFFFFFD)]
    for a, b in ((1, 2), (1, 3), (2, 3)):
        witness = [[b"", sigs[a - 1], sigs[b - 1], witness_script]]
        final = ser_tx(2, final_inputs, spend_outputs, 0, witnesses=witness)
        (out / f"golden_sig{a}{b}.hex").write_text(final.hex() + "\n")
    txid = sha256d(ser_tx(2, final_inputs, spend_outputs, 0))[::-1].hex()
    (out / "golden.txid").write_text(txid + "\n")

    meta = {
        "threshold": 2,
        "total": 3,
        "witness_script": witness_script.hex(),
        "redeem_script": redeem_script.hex() if redeem_script else None,
        "funding_script_pubkey": funding_spk.hex(),
        "amount_sats": amount,
        "funding_txid": funding_txid_le[::-1].hex(),
        "unsigned_tx": unsigned_tx.hex(),
        "sighash": digest.hex(),
        "pubkeys": [pk.hex() for pk in pubkeys],
        "private_keys": [f"{k.private_numbers().private_value:064x}" for k in signers],
        "signatures": [s.hex() for s in sigs],
        "golden_txid": txid,
    }
    (out / "meta.json").write_text(json.dumps(meta, indent=2) + "\n")
    print(f"wrote {name}: txid {txid}")


def main() -> None:
    self_check_sighash()
    build_set("multisig_2of3", wrap_p2sh=False)
    build_set("multisig_2of3_p2sh", wrap_p2sh=True)


if __name__ == "__main__":
    main()
