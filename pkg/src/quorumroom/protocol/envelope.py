"""Authenticated symmetric envelopes: AES-256-GCM bound to a room and purpose.

Wire format of an envelope (the only thing the relay ever sees):

    version (1 byte, 0x01) || nonce (12 bytes) || ciphertext || tag (16 bytes)

The associated data for every envelope is

    version byte || canonical room id text || purpose label

so an envelope minted for one room or purpose authenticates in no other:
the encrypted admin token can never be replayed as a PSBT payload, and a
payload captured in room A is undecryptable in room B even under the same
key. Decryption failure is deliberately uniform — wrong key, wrong room,
wrong purpose, and tampering are indistinguishable.
"""

from __future__ import annotations

import secrets
import uuid
from dataclasses import dataclass

from cryptography.exceptions import InvalidTag
from cryptography.hazmat.primitives.ciphers.aead import AESGCM

from .keys import KEY_LEN

ENVELOPE_VERSION = 0x01
NONCE_LEN = 12
TAG_LEN = 16
HEADER_LEN = 1 + NONCE_LEN

PURPOSES = ("psbt", "token", "chat")

# Generous per-message bound; the relay independently caps frames.
DEFAULT_MAX_PLAINTEXT = 2 * 1024 * 1024


class EnvelopeError(Exception):
    pass


class PlaintextTooLarge(EnvelopeError):
    pass


class UnknownVersion(EnvelopeError):
    pass


class MalformedEnvelope(EnvelopeError):
    pass


class DecryptionFailed(EnvelopeError):
    """Authentication failed: wrong key, room, purpose, or tampered bytes."""


@dataclass(frozen=True)
class EncryptedEnvelope:
    version: int
    nonce: bytes
    ciphertext_and_tag: bytes

    def to_bytes(self) -> bytes:
        return bytes([self.version]) + self.nonce + self.ciphertext_and_tag

    @classmethod
    def from_bytes(cls, data: bytes) -> "EncryptedEnvelope":
        if len(data) < HEADER_LEN + TAG_LEN:
            raise MalformedEnvelope(f"envelope too short: {len(data)} bytes")
        version = data[0]
        if version != ENVELOPE_VERSION:
            raise UnknownVersion(f"unknown envelope version {version:#04x}")
        return cls(version=version, nonce=data[1:HEADER_LEN], ciphertext_and_tag=data[HEADER_LEN:])


def _check_purpose(purpose: str) -> None:
    if purpose not in PURPOSES:
        raise ValueError(f"unknown purpose label {purpose!r}")


def _associated_data(version: int, room_id: uuid.UUID, purpose: str) -> bytes:
    return bytes([version]) + str(room_id).encode("ascii") + purpose.encode("ascii")


def _gcm_seal(key: bytes, nonce: bytes, aad: bytes, plaintext: bytes) -> bytes:
    """Raw AES-256-GCM: returns ciphertext || tag. Test seam for known-answer vectors."""
    return AESGCM(key).encrypt(nonce, plaintext, aad)


def _gcm_open(key: bytes, nonce: bytes, aad: bytes, ciphertext_and_tag: bytes) -> bytes:
    try:
        return AESGCM(key).decrypt(nonce, ciphertext_and_tag, aad)
    except InvalidTag:
        raise DecryptionFailed("authentication failed") from None


def encrypt(
    key: bytes,
    room_id: uuid.UUID,
    purpose: str,
    plaintext: bytes,
    *,
    max_plaintext: int = DEFAULT_MAX_PLAINTEXT,
) -> EncryptedEnvelope:
    """Seal plaintext for one room and purpose under a fresh random nonce."""
    _check_purpose(purpose)
    if len(key) != KEY_LEN:
        raise ValueError(f"key must be {KEY_LEN} bytes")
    if len(plaintext) > max_plaintext:
        raise PlaintextTooLarge(f"plaintext of {len(plaintext)} bytes exceeds {max_plaintext}")
    nonce = secrets.token_bytes(NONCE_LEN)
    aad = _associated_data(ENVELOPE_VERSION, room_id, purpose)
    return EncryptedEnvelope(
        version=ENVELOPE_VERSION,
        nonce=nonce,
        ciphertext_and_tag=_gcm_seal(key, nonce, aad, plaintext),
    )


def decrypt(key: bytes, room_id: uuid.UUID, purpose: str, env: EncryptedEnvelope) -> bytes:
    """Open an envelope; raises DecryptionFailed unless key, room, purpose and bytes all match."""
    _check_purpose(purpose)
    if len(key) != KEY_LEN:
        raise ValueError(f"key must be {KEY_LEN} bytes")
    if env.version != ENVELOPE_VERSION:
        raise UnknownVersion(f"unknown envelope version {env.version:#04x}")
    if len(env.nonce) != NONCE_LEN or len(env.ciphertext_and_tag) < TAG_LEN:
        raise MalformedEnvelope("bad nonce or truncated ciphertext")
    aad = _associated_data(env.version, room_id, purpose)
    return _gcm_open(key, env.nonce, aad, env.ciphertext_and_tag)
