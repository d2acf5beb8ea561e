"""Moderated chat service.

Every message is scanned against a censor lexicon; matched words are
masked with asterisks, each violation raises the sender's flame count,
and users who cross the block threshold are blocked for a fixed period.
The package ships the chat server (TCP + WebSocket + HTTP admin API)
and a terminal client.
"""

from .engine import (
    Action,
    INTENSITY_CAP,
    ModerationPolicy,
    UserFlameState,
    Verdict,
    assess,
    intensity,
    is_blocked,
    is_hostile,
)
from .lexicon import (
    CensorEntry,
    CensorLexicon,
    FlameCategory,
    InvalidWord,
    LexiconError,
    MatchMode,
    MatchSet,
    UnknownCategory,
    WordMatch,
    add_word,
    find_matches,
    fold_text,
    load_lexicon,
    mask,
    save_lexicon,
)
from .protocol import (
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
from .store import StorageUnavailable, UnknownUser, UserStore

__version__ = "0.1.0"

__all__ = [
    "Action",
    "Block",
    "CensorEntry",
    "CensorLexicon",
    "FlameCategory",
    "Frame",
    "INTENSITY_CAP",
    "InvalidFrame",
    "InvalidWord",
    "LexiconError",
    "Login",
    "Logout",
    "MAX_FRAME_BYTES",
    "MalformedFrame",
    "MatchMode",
    "MatchSet",
    "Message",
    "ModerationPolicy",
    "StorageUnavailable",
    "System",
    "UnknownCategory",
    "UnknownUser",
    "UserFlameState",
    "UserStore",
    "Verdict",
    "Warn",
    "WordMatch",
    "add_word",
    "assess",
    "find_matches",
    "fold_text",
    "intensity",
    "is_blocked",
    "is_hostile",
    "is_valid_username",
    "load_lexicon",
    "mask",
    "parse_frame",
    "save_lexicon",
    "serialize_frame",
    "__version__",
]
