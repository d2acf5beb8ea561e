"""RFC 3339 timestamp helpers.

Every timestamp in the system (block expiries, wire frames, the user
store) is an aware UTC datetime rendered as RFC 3339 with a ``Z``
suffix.  ``datetime.fromisoformat`` on Python 3.10 cannot parse the
``Z`` form, hence these wrappers.
"""

from __future__ import annotations

from datetime import datetime, timezone


def utcnow() -> datetime:
    """Current time as an aware UTC datetime."""
    return datetime.now(timezone.utc)


def to_rfc3339(dt: datetime) -> str:
    """Render an aware datetime as RFC 3339 text in UTC.

    Sub-second precision is preserved so a round trip through text
    yields the exact same instant.
    """
    if dt.tzinfo is None:
        raise ValueError("naive datetime; timestamps must be timezone-aware")
    text = dt.astimezone(timezone.utc).isoformat()
    # isoformat() on a UTC datetime always ends with "+00:00"
    return text[:-6] + "Z"


def from_rfc3339(text: str) -> datetime:
    """Parse RFC 3339 text into an aware UTC datetime."""
    if text.endswith(("Z", "z")):
        text = text[:-1] + "+00:00"
    dt = datetime.fromisoformat(text)
    if dt.tzinfo is None:
        raise ValueError(f"timestamp lacks a UTC offset: {text!r}")
    return dt.astimezone(timezone.utc)
