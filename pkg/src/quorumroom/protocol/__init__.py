"""Pure protocol foundation shared by the relay, clients, and harness."""

from .envelope import (
    DEFAULT_MAX_PLAINTEXT,
    ENVELOPE_VERSION,
    DecryptionFailed,
    EncryptedEnvelope,
    EnvelopeError,
    MalformedEnvelope,
    PlaintextTooLarge,
    UnknownVersion,
    decrypt,
    encrypt,
)
from .keys import (
    FRAGMENT_LEN,
    KEY_LEN,
    BadKeyEncoding,
    BadRoomId,
    decode_key_fragment,
    encode_key_fragment,
    generate_room_key,
    new_admin_secret,
    new_room_id,
    new_session_id,
    parse_room_id,
)
from .links import (
    REDACTED_FRAGMENT,
    BadLinkPath,
    LinkError,
    MissingFragment,
    RoomLink,
    format_room_link,
    link_base,
    parse_room_link,
    redact_link,
)
from .wire import (
    Admin,
    CreateRoom,
    Deliver,
    Error,
    Join,
    Joined,
    MalformedFrame,
    MissingField,
    Notify,
    Relay,
    UnknownType,
    WireError,
    WireMessage,
    decode_wire,
    encode_wire,
)

__all__ = [
    "Admin",
    "BadKeyEncoding",
    "BadLinkPath",
    "BadRoomId",
    "CreateRoom",
    "DEFAULT_MAX_PLAINTEXT",
    "DecryptionFailed",
    "Deliver",
    "ENVELOPE_VERSION",
    "EncryptedEnvelope",
    "EnvelopeError",
    "Error",
    "FRAGMENT_LEN",
    "Join",
    "Joined",
    "KEY_LEN",
    "LinkError",
    "MalformedEnvelope",
    "MalformedFrame",
    "MissingField",
    "MissingFragment",
    "Notify",
    "PlaintextTooLarge",
    "REDACTED_FRAGMENT",
    "Relay",
    "RoomLink",
    "UnknownType",
    "UnknownVersion",
    "WireError",
    "WireMessage",
    "decode_key_fragment",
    "decode_wire",
    "decrypt",
    "encode_key_fragment",
    "encode_wire",
    "encrypt",
    "format_room_link",
    "generate_room_key",
    "link_base",
    "new_admin_secret",
    "new_room_id",
    "new_session_id",
    "parse_room_id",
    "parse_room_link",
    "redact_link",
]
