"""Wire frame codec: parsing, serialization, robustness."""

from __future__ import annotations

import pytest
from hypothesis import given, settings, strategies as st

from flameguard.protocol import (
    Block,
    Frame,
    InvalidFrame,
    Login,
    Logout,
    MAX_FRAME_BYTES,
    MalformedFrame,
    Message,
    System,
    Warn,
    is_valid_username,
    parse_frame,
    serialize_frame,
)

# ------------------------------------------------------------- wire examples


GOLDEN = [
    ("login#JOHN", Login("JOHN")),
    ("logout#JOHN", Logout("JOHN")),
    ("message#MARY: you asshole", Message("MARY", "you asshole")),
    ("warn#Sorry can't send the censor words", Warn("Sorry can't send the censor words")),
    ("block#JOHN: 2026-01-15T12:00:00Z", Block("JOHN", "2026-01-15T12:00:00Z")),
    ("system#MARY connected", System("MARY connected")),
]


@pytest.mark.parametrize("line,frame", GOLDEN)
def test_golden_parse(line, frame):
    assert parse_frame(line) == frame


@pytest.mark.parametrize("line,frame", GOLDEN)
def test_golden_serialize(line, frame):
    assert serialize_frame(frame) == line


def test_max_frame_size_is_64k():
    assert MAX_FRAME_BYTES == 64 * 1024


# ------------------------------------------------------------- edge payloads


def test_message_text_may_be_empty():
    assert parse_frame("message#JOHN: ") == Message("JOHN", "")


def test_message_text_keeps_hash_and_separator():
    frame = parse_frame("message#JOHN: see #general: now")
    assert frame == Message("JOHN", "see #general: now")
    assert parse_frame(serialize_frame(frame)) == frame


def test_message_splits_on_first_separator_only():
    assert parse_frame("message#A: b: c") == Message("A", "b: c")


def test_block_until_contains_colons():
    frame = parse_frame("block#JOHN: 2026-01-15T12:00:00.123456Z")
    assert frame.until == "2026-01-15T12:00:00.123456Z"


def test_warn_text_may_contain_hash():
    assert parse_frame("warn#rule #3 applies") == Warn("rule #3 applies")


def test_unicode_round_trip():
    frame = Message("JOHN", "héllo wörld ☃")
    assert parse_frame(serialize_frame(frame)) == frame


# ------------------------------------------------------------- malformed input


@pytest.mark.parametrize(
    "line",
    [
        "",                      # no delimiter
        "hello there",           # no delimiter
        "#payload",              # empty verb
        "shout#loud",            # unknown verb
        "login#",                # empty name
        "login#bad name",        # space in name
        "login#" + "x" * 33,     # name too long
        "login#jo-hn",           # '-' not in grammar
        "message#JOHN",          # missing ': '
        "message#JOHN:no space", # missing ': '
        "message#: hi",          # empty name
        "message#bad name: hi",  # invalid name
        "block#JOHN",            # missing ': '
        "block#JOHN: ",          # empty expiry
        "LOGIN#JOHN",            # verbs are case-sensitive
    ],
)
def test_malformed_lines_rejected(line):
    with pytest.raises(MalformedFrame):
        parse_frame(line)


def test_embedded_newline_rejected():
    with pytest.raises(MalformedFrame):
        parse_frame("message#JOHN: hi\nlogin#EVE")
    with pytest.raises(MalformedFrame):
        parse_frame("warn#bad\rtext")


def test_overlong_line_rejected():
    with pytest.raises(MalformedFrame):
        parse_frame("message#JOHN: " + "x" * MAX_FRAME_BYTES)


def test_overlong_multibyte_line_rejected():
    # 3 bytes per char in UTF-8, so well past the limit in bytes
    with pytest.raises(MalformedFrame):
        parse_frame("warn#" + "☃" * (MAX_FRAME_BYTES // 3 + 1))


# ------------------------------------------------------------- invalid frames


def test_serialize_rejects_bad_username():
    with pytest.raises(InvalidFrame):
        serialize_frame(Login("no spaces allowed"))
    with pytest.raises(InvalidFrame):
        serialize_frame(Message("", "hi"))


def test_serialize_rejects_newlines_in_text():
    with pytest.raises(InvalidFrame):
        serialize_frame(Message("JOHN", "two\nlines"))
    with pytest.raises(InvalidFrame):
        serialize_frame(System("bad\rtext"))


def test_serialize_rejects_empty_block_expiry():
    with pytest.raises(InvalidFrame):
        serialize_frame(Block("JOHN", ""))


def test_serialize_rejects_oversize_frame():
    with pytest.raises(InvalidFrame):
        serialize_frame(Warn("x" * (MAX_FRAME_BYTES + 1)))


def test_serialize_rejects_non_frames():
    with pytest.raises(InvalidFrame):
        serialize_frame("login#JOHN")  # type: ignore[arg-type]


# ------------------------------------------------------------- username grammar


@pytest.mark.parametrize("name", ["a", "A", "0", "_", "JOHN", "user_42", "x" * 32])
def test_valid_usernames(name):
    assert is_valid_username(name)


@pytest.mark.parametrize("name", ["", " ", "x" * 33, "a b", "a-b", "a.b", "naïve", "a#b"])
def test_invalid_usernames(name):
    assert not is_valid_username(name)


# ------------------------------------------------------------- round-trip property


_names = st.from_regex(r"[A-Za-z0-9_]{1,32}", fullmatch=True)
_texts = st.text(max_size=120).filter(lambda s: "\n" not in s and "\r" not in s)
_nonempty_texts = _texts.filter(lambda s: s != "")

frames = st.one_of(
    st.builds(Login, _names),
    st.builds(Logout, _names),
    st.builds(Message, _names, _texts),
    st.builds(Warn, _texts),
    st.builds(System, _texts),
    st.builds(Block, _names, _nonempty_texts),
)


@settings(max_examples=500, deadline=None)
@given(frame=frames)
def test_round_trip_identity(frame):
    assert parse_frame(serialize_frame(frame)) == frame


@settings(max_examples=300, deadline=None)
@given(line=st.text(max_size=80))
def test_parse_never_crashes(line):
    try:
        frame = parse_frame(line)
    except MalformedFrame:
        return
    assert isinstance(
        frame, (Login, Logout, Message, Warn, System, Block)
    )
