"""Wire messages: one JSON object per WebSocket text frame.

Schema (see docs/protocol.md for the bit-exact contract):

    {"type": "create_room", "room_id": str, "encrypted_admin_token": b64}
    {"type": "join",        "room_id": str}
    {"type": "joined",      "session_id": str, "member_count": int,
                            "locked": bool, "ttl_seconds": int?}
    {"type": "relay",       "payload": b64}
    {"type": "deliver",     "sender": str, "payload": b64}
    {"type": "admin",       "action": "lock"|"close", "presented_token": b64}
    {"type": "notify",      "event": "peer_joined"|"peer_left"|"locked"|"closing",
                            "session_id": str?}
    {"type": "error",       "code": str, "detail": str}

Binary fields are standard base64 with padding. Unknown fields are
ignored on decode; unknown types are rejected. Relay/deliver payloads are
opaque byte strings end to end — nothing in this module or in the relay
interprets them.
"""

from __future__ import annotations

import base64
import binascii
import json
from dataclasses import dataclass
from typing import Union

ADMIN_ACTIONS = ("lock", "close")
NOTIFY_EVENTS = ("peer_joined", "peer_left", "locked", "closing")


class WireError(Exception):
    pass


class MalformedFrame(WireError):
    pass


class UnknownType(WireError):
    pass


class MissingField(WireError):
    pass


@dataclass(frozen=True)
class CreateRoom:
    room_id: str
    encrypted_admin_token: bytes


@dataclass(frozen=True)
class Join:
    room_id: str


@dataclass(frozen=True)
class Joined:
    session_id: str
    member_count: int
    locked: bool
    ttl_seconds: int | None = None


@dataclass(frozen=True)
class Relay:
    payload: bytes


@dataclass(frozen=True)
class Deliver:
    sender: str
    payload: bytes


@dataclass(frozen=True)
class Admin:
    action: str
    presented_token: bytes


@dataclass(frozen=True)
class Notify:
    event: str
    session_id: str | None = None


@dataclass(frozen=True)
class Error:
    code: str
    detail: str = ""


WireMessage = Union[CreateRoom, Join, Joined, Relay, Deliver, Admin, Notify, Error]

_TYPE_TAGS = {
    CreateRoom: "create_room",
    Join: "join",
    Joined: "joined",
    Relay: "relay",
    Deliver: "deliver",
    Admin: "admin",
    Notify: "notify",
    Error: "error",
}


def _b64(data: bytes) -> str:
    return base64.b64encode(data).decode("ascii")


def encode_wire(msg: WireMessage) -> str:
    tag = _TYPE_TAGS.get(type(msg))
    if tag is None:
        raise WireError(f"not a wire message: {type(msg).__name__}")
    obj: dict = {"type": tag}
    if isinstance(msg, CreateRoom):
        obj.update(room_id=msg.room_id, encrypted_admin_token=_b64(msg.encrypted_admin_token))
    elif isinstance(msg, Join):
        obj.update(room_id=msg.room_id)
    elif isinstance(msg, Joined):
        obj.update(session_id=msg.session_id, member_count=msg.member_count, locked=msg.locked)
        if msg.ttl_seconds is not None:
            obj.update(ttl_seconds=msg.ttl_seconds)
    elif isinstance(msg, Relay):
        obj.update(payload=_b64(msg.payload))
    elif isinstance(msg, Deliver):
        obj.update(sender=msg.sender, payload=_b64(msg.payload))
    elif isinstance(msg, Admin):
        obj.update(action=msg.action, presented_token=_b64(msg.presented_token))
    elif isinstance(msg, Notify):
        obj.update(event=msg.event)
        if msg.session_id is not None:
            obj.update(session_id=msg.session_id)
    elif isinstance(msg, Error):
        obj.update(code=msg.code, detail=msg.detail)
    return json.dumps(obj, separators=(",", ":"))


class _Fields:
    """Typed accessors over one decoded JSON object."""

    def __init__(self, obj: dict):
        self.obj = obj

    def _get(self, name: str):
        try:
            return self.obj[name]
        except KeyError:
            raise MissingField(f"missing field {name!r}") from None

    def text(self, name: str) -> str:
        value = self._get(name)
        if not isinstance(value, str):
            raise MalformedFrame(f"field {name!r} must be a string")
        return value

    def integer(self, name: str) -> int:
        value = self._get(name)
        if not isinstance(value, int) or isinstance(value, bool):
            raise MalformedFrame(f"field {name!r} must be an integer")
        return value

    def boolean(self, name: str) -> bool:
        value = self._get(name)
        if not isinstance(value, bool):
            raise MalformedFrame(f"field {name!r} must be a boolean")
        return value

    def blob(self, name: str) -> bytes:
        value = self.text(name)
        try:
            return base64.b64decode(value, validate=True)
        except (binascii.Error, ValueError):
            raise MalformedFrame(f"field {name!r} is not valid base64") from None

    def choice(self, name: str, allowed: tuple[str, ...]) -> str:
        value = self.text(name)
        if value not in allowed:
            raise MalformedFrame(f"field {name!r} must be one of {allowed}")
        return value

    def optional_text(self, name: str) -> str | None:
        if name not in self.obj or self.obj[name] is None:
            return None
        return self.text(name)

    def optional_integer(self, name: str) -> int | None:
        if name not in self.obj or self.obj[name] is None:
            return None
        return self.integer(name)


def decode_wire(text: str | bytes) -> WireMessage:
    try:
        obj = json.loads(text)
    except (json.JSONDecodeError, UnicodeDecodeError):
        raise MalformedFrame("frame is not valid JSON") from None
    if not isinstance(obj, dict):
        raise MalformedFrame("frame is not a JSON object")
    f = _Fields(obj)
    tag = f.text("type")
    if tag == "create_room":
        return CreateRoom(room_id=f.text("room_id"), encrypted_admin_token=f.blob("encrypted_admin_token"))
    if tag == "join":
        return Join(room_id=f.text("room_id"))
    if tag == "joined":
        return Joined(
            session_id=f.text("session_id"),
            member_count=f.integer("member_count"),
            locked=f.boolean("locked"),
            ttl_seconds=f.optional_integer("ttl_seconds"),
        )
    if tag == "relay":
        return Relay(payload=f.blob("payload"))
    if tag == "deliver":
        return Deliver(sender=f.text("sender"), payload=f.blob("payload"))
    if tag == "admin":
        return Admin(action=f.choice("action", ADMIN_ACTIONS), presented_token=f.blob("presented_token"))
    if tag == "notify":
        return Notify(event=f.choice("event", NOTIFY_EVENTS), session_id=f.optional_text("session_id"))
    if tag == "error":
        return Error(code=f.text("code"), detail=f.text("detail") if "detail" in obj else "")
    raise UnknownType(f"unknown message type {tag!r}")
