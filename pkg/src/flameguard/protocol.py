"""Text frame codec for the chat wire protocol.

One frame per line: ``verb#payload`` terminated by ``\\n``, UTF-8.  The
first ``#`` separates the verb; for frames carrying a name plus text,
the first ``": "`` inside the payload separates the two.  Frames over
64 KiB are rejected.  The same codec runs over TCP and WebSocket.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

MAX_FRAME_BYTES = 64 * 1024

USERNAME_RE = re.compile(r"\A[A-Za-z0-9_]{1,32}\Z")

_NAME_TEXT_SEP = ": "


class MalformedFrame(ValueError):
    """Inbound line that does not parse as any frame."""


class InvalidFrame(ValueError):
    """Frame whose fields violate protocol invariants (caught at send)."""


@dataclass(frozen=True)
class Login:
    name: str


@dataclass(frozen=True)
class Message:
    sender: str
    text: str


@dataclass(frozen=True)
class Logout:
    name: str


@dataclass(frozen=True)
class Warn:
    text: str


@dataclass(frozen=True)
class Block:
    name: str
    until: str  # RFC 3339 expiry; kept as text at the wire layer


@dataclass(frozen=True)
class System:
    text: str


Frame = Union[Login, Message, Logout, Warn, Block, System]


def is_valid_username(name: str) -> bool:
    """Usernames: 1-32 characters from [A-Za-z0-9_]."""
    return USERNAME_RE.fullmatch(name) is not None


def _frame_bytes(line: str) -> int:
    # "replace" keeps this total even for lone surrogates from fuzzed
    # input; the exact count only matters near the 64 KiB boundary
    return len(line.encode("utf-8", errors="replace"))


def _require_name(name: str, context: str) -> str:
    if not is_valid_username(name):
        raise MalformedFrame(f"{context}: invalid username {name!r}")
    return name


def _split_name_payload(payload: str, context: str) -> tuple[str, str]:
    name, sep, rest = payload.partition(_NAME_TEXT_SEP)
    if not sep:
        raise MalformedFrame(f"{context}: missing {_NAME_TEXT_SEP!r} separator")
    return _require_name(name, context), rest


def parse_frame(line: str) -> Frame:
    """Decode one line (without its terminator) into a frame.

    Raises:
        MalformedFrame: the line is overlong, contains a newline,
            lacks the ``#`` delimiter, names an unknown verb, or has an
            invalid payload for its verb.
    """
    if _frame_bytes(line) > MAX_FRAME_BYTES:
        raise MalformedFrame("frame exceeds 64 KiB")
    if "\n" in line or "\r" in line:
        raise MalformedFrame("frame contains a line terminator")
    verb, sep, payload = line.partition("#")
    if not sep:
        raise MalformedFrame("missing '#' delimiter")
    if verb == "login":
        return Login(_require_name(payload, "login"))
    if verb == "logout":
        return Logout(_require_name(payload, "logout"))
    if verb == "message":
        sender, text = _split_name_payload(payload, "message")
        return Message(sender, text)
    if verb == "warn":
        return Warn(payload)
    if verb == "system":
        return System(payload)
    if verb == "block":
        name, until = _split_name_payload(payload, "block")
        if not until:
            raise MalformedFrame("block: empty expiry timestamp")
        return Block(name, until)
    raise MalformedFrame(f"unknown verb {verb!r}")


def _check_text(text: str, context: str) -> str:
    if "\n" in text or "\r" in text:
        raise InvalidFrame(f"{context}: text contains a line terminator")
    return text


def _check_name(name: str, context: str) -> str:
    if not is_valid_username(name):
        raise InvalidFrame(f"{context}: invalid username {name!r}")
    return name


def serialize_frame(frame: Frame) -> str:
    """Encode a frame as a single line (terminator not included).

    ``parse_frame(serialize_frame(f)) == f`` for every valid frame.

    Raises:
        InvalidFrame: a field violates protocol invariants, or the
            encoded frame would exceed 64 KiB.
    """
    if isinstance(frame, Login):
        line = f"login#{_check_name(frame.name, 'login')}"
    elif isinstance(frame, Logout):
        line = f"logout#{_check_name(frame.name, 'logout')}"
    elif isinstance(frame, Message):
        name = _check_name(frame.sender, "message")
        text = _check_text(frame.text, "message")
        line = f"message#{name}{_NAME_TEXT_SEP}{text}"
    elif isinstance(frame, Warn):
        line = f"warn#{_check_text(frame.text, 'warn')}"
    elif isinstance(frame, System):
        line = f"system#{_check_text(frame.text, 'system')}"
    elif isinstance(frame, Block):
        name = _check_name(frame.name, "block")
        until = _check_text(frame.until, "block")
        if not until:
            raise InvalidFrame("block: empty expiry timestamp")
        line = f"block#{name}{_NAME_TEXT_SEP}{until}"
    else:
        raise InvalidFrame(f"not a frame: {frame!r}")
    if _frame_bytes(line) > MAX_FRAME_BYTES:
        raise InvalidFrame("frame exceeds 64 KiB")
    return line
