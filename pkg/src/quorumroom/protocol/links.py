"""Room links: `<base>/room/<uuid>#<43-char base64url key>`.

The fragment after `#` is the symmetric room key. User agents never send
fragments in requests, which is what makes the link a safe out-of-band
key channel; nothing in this module may place the key anywhere else.
"""

from __future__ import annotations

import uuid
from dataclasses import dataclass

from .keys import decode_key_fragment, encode_key_fragment, parse_room_id

REDACTED_FRAGMENT = "#<redacted>"


class LinkError(ValueError):
    pass


class MissingFragment(LinkError):
    pass


class BadLinkPath(LinkError):
    pass


@dataclass(frozen=True)
class RoomLink:
    base: str
    room_id: uuid.UUID
    key: bytes

    def render(self) -> str:
        return format_room_link(self.base, self.room_id, self.key)


def format_room_link(base: str, room_id: uuid.UUID, key: bytes) -> str:
    if base.endswith("/"):
        raise LinkError("base must not have a trailing slash")
    if "#" in base:
        raise LinkError("base must not contain a fragment")
    return f"{base}/room/{room_id}#{encode_key_fragment(key)}"


def parse_room_link(text: str) -> tuple[uuid.UUID, bytes]:
    """Split a room link into (room id, room key); inverse of format_room_link."""
    locator, sep, fragment = text.partition("#")
    if not sep:
        raise MissingFragment("link has no #<key> fragment")
    prefix, sep, id_text = locator.rpartition("/room/")
    if not sep or not prefix or "/" in id_text:
        raise BadLinkPath("link path does not end in /room/<uuid>")
    return parse_room_id(id_text), decode_key_fragment(fragment)


def link_base(text: str) -> str:
    """Origin part of a link, for deriving the relay endpoints."""
    prefix, sep, _ = text.partition("#")[0].rpartition("/room/")
    if not sep or not prefix:
        raise BadLinkPath("link path does not end in /room/<uuid>")
    return prefix


def redact_link(text: str) -> str:
    """Replace any fragment with a fixed token, for diagnostics and logs."""
    locator, sep, _ = text.partition("#")
    return locator + REDACTED_FRAGMENT if sep else locator
