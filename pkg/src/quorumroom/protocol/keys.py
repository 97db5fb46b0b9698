"""Identifiers and key material: room ids, room keys, session ids, admin secrets.

Room keys travel exclusively inside URL fragments and are encoded as
unpadded base64url (RFC 4648 section 5), which is always exactly 43
characters for 32 bytes. Room and session ids are random UUIDs rendered
in canonical lowercase hyphenated form.
"""

from __future__ import annotations

import base64
import re
import secrets
import uuid

KEY_LEN = 32
FRAGMENT_LEN = 43  # unpadded base64url of 32 bytes

_CANONICAL_UUID = re.compile(r"^[0-9a-f]{8}-[0-9a-f]{4}-[0-9a-f]{4}-[0-9a-f]{4}-[0-9a-f]{12}$")
_FRAGMENT = re.compile(r"^[A-Za-z0-9_-]{43}$")


class BadRoomId(ValueError):
    """Text is not a canonical lowercase hyphenated UUID."""


class BadKeyEncoding(ValueError):
    """Text is not a 43-character base64url encoding of 32 bytes."""


def new_room_id() -> uuid.UUID:
    return uuid.uuid4()


def new_session_id() -> uuid.UUID:
    return uuid.uuid4()


def new_admin_secret() -> str:
    return str(uuid.uuid4())


def parse_room_id(text: str) -> uuid.UUID:
    """Parse canonical room id text, rejecting every non-canonical spelling."""
    if not _CANONICAL_UUID.match(text):
        raise BadRoomId(f"not a canonical uuid: {text!r}")
    return uuid.UUID(text)


def generate_room_key() -> bytes:
    """Draw a fresh 256-bit symmetric room key from the OS CSPRNG."""
    return secrets.token_bytes(KEY_LEN)


def encode_key_fragment(key: bytes) -> str:
    if len(key) != KEY_LEN:
        raise BadKeyEncoding(f"room key must be {KEY_LEN} bytes, got {len(key)}")
    return base64.urlsafe_b64encode(key).rstrip(b"=").decode("ascii")


def decode_key_fragment(text: str) -> bytes:
    """Decode a URL-fragment room key, enforcing canonical encoding.

    The final character of a 43-char base64url string carries 2 padding
    bits; re-encoding catches values where those bits are dirty.
    """
    if not _FRAGMENT.match(text):
        raise BadKeyEncoding(f"fragment must be {FRAGMENT_LEN} base64url chars")
    key = base64.urlsafe_b64decode(text + "=")
    if len(key) != KEY_LEN or encode_key_fragment(key) != text:
        raise BadKeyEncoding("fragment is not a canonical encoding of 32 bytes")
    return key
