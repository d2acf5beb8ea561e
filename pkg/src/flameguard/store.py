"""Durable JSON-backed storage of per-user flame state.

The whole store is one JSON document rewritten atomically on every
mutation: the new content goes to a temp file in the same directory,
is flushed and fsynced, then renamed over the old file.  A crash at
any point leaves either the old snapshot or the new one, never a
half-written file.  Flame counts survive restarts by design; blocks
outlive the server process.
"""

from __future__ import annotations

import json
import logging
import os
import tempfile
from dataclasses import replace
from pathlib import Path

from .engine import UserFlameState
from .lexicon import FlameCategory
from .protocol import is_valid_username
from .timefmt import from_rfc3339, to_rfc3339

logger = logging.getLogger(__name__)


class StorageUnavailable(Exception):
    """The store file cannot be read or written."""


class UnknownUser(Exception):
    """Admin operation aimed at a user the store has never seen."""


def _state_to_record(state: UserFlameState) -> dict:
    return {
        "name": state.name,
        "count": state.count,
        "tallies": {cat.value: n for cat, n in sorted(state.category_tallies.items())},
        "blocked_until": to_rfc3339(state.blocked_until) if state.blocked_until else None,
    }


def _record_to_state(record: dict) -> UserFlameState:
    tallies = {
        FlameCategory(label): int(n) for label, n in record.get("tallies", {}).items()
    }
    blocked_raw = record.get("blocked_until")
    return UserFlameState(
        name=record["name"],
        count=int(record["count"]),
        category_tallies=tallies,
        blocked_until=from_rfc3339(blocked_raw) if blocked_raw else None,
    )


class UserStore:
    """All known users, mirrored to a JSON file.

    Reads are served from memory; every ``put`` rewrites the file and
    only returns once the new snapshot is durable.  One event loop is
    the sole writer, so no file locking is needed.
    """

    def __init__(self, path: str | os.PathLike) -> None:
        self._path = Path(path)
        self._users: dict[str, UserFlameState] = {}
        self._load()

    def __len__(self) -> int:
        return len(self._users)

    def __contains__(self, name: str) -> bool:
        return name in self._users

    def _load(self) -> None:
        try:
            raw = self._path.read_text(encoding="utf-8")
        except FileNotFoundError:
            return  # first boot: empty store, file appears on first put
        except OSError as exc:
            raise StorageUnavailable(f"cannot read {self._path}: {exc}") from exc
        try:
            doc = json.loads(raw)
            users = doc["users"]
            for record in users:
                state = _record_to_state(record)
                self._users[state.name] = state
        except (KeyError, TypeError, ValueError) as exc:
            raise StorageUnavailable(f"corrupt user store {self._path}: {exc}") from exc

    def _flush(self) -> None:
        doc = {
            "users": [
                _state_to_record(self._users[name]) for name in sorted(self._users)
            ]
        }
        payload = json.dumps(doc, indent=2) + "\n"
        directory = self._path.parent
        fd, tmp_path = None, None
        try:
            fd, tmp_path = tempfile.mkstemp(
                prefix=self._path.name + ".", suffix=".tmp", dir=directory
            )
            with os.fdopen(fd, "w", encoding="utf-8") as handle:
                fd = None  # fdopen owns it now
                handle.write(payload)
                handle.flush()
                os.fsync(handle.fileno())
            os.replace(tmp_path, self._path)
            tmp_path = None
        except OSError as exc:
            raise StorageUnavailable(f"cannot write {self._path}: {exc}") from exc
        finally:
            if fd is not None:
                os.close(fd)
            if tmp_path is not None:
                try:
                    os.unlink(tmp_path)
                except OSError:
                    pass

    def get_or_create(self, name: str) -> UserFlameState:
        """Return the stored state for ``name``, or a fresh zero state.

        A fresh state is not persisted; the user becomes known to the
        store only once ``put`` is called.
        """
        if not is_valid_username(name):
            raise ValueError(f"invalid username {name!r}")
        state = self._users.get(name)
        return state if state is not None else UserFlameState(name=name)

    def put(self, state: UserFlameState) -> None:
        """Store a user's state; durable before this returns."""
        previous = self._users.get(state.name)
        self._users[state.name] = state
        try:
            self._flush()
        except StorageUnavailable:
            # keep memory consistent with the surviving file
            if previous is None:
                del self._users[state.name]
            else:
                self._users[state.name] = previous
            raise

    def admin_reset(self, name: str) -> UserFlameState:
        """Zero a user's count and tallies and clear any block."""
        if name not in self._users:
            raise UnknownUser(name)
        fresh = UserFlameState(name=name)
        self.put(fresh)
        logger.info("reset flame state for %s", name)
        return fresh

    def unblock(self, name: str) -> UserFlameState:
        """Clear a user's block; count and tallies stay as they are."""
        if name not in self._users:
            raise UnknownUser(name)
        updated = replace(self._users[name], blocked_until=None)
        self.put(updated)
        logger.info("unblocked %s", name)
        return updated

    def all_users(self) -> list[UserFlameState]:
        """Every stored user, sorted by name."""
        return [self._users[name] for name in sorted(self._users)]
