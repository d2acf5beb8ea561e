"""Chat server: session registry, moderation pipeline, TCP plane.

Everything runs on one asyncio event loop.  The moderation path for a
user is serialized by a per-user lock, so two messages from the same
user can never race the read-assess-persist sequence.  The lexicon is
an immutable snapshot swapped atomically by admin updates: a message
is scanned against whichever snapshot is active when it arrives.
"""

from __future__ import annotations

import argparse
import asyncio
import logging
import os
import tempfile
from dataclasses import dataclass
from datetime import datetime
from enum import Enum
from pathlib import Path

from .config import (
    ServerConfig,
    build_config,
    load_config_file,
)
from .engine import (
    Action,
    Verdict,
    assess,
    intensity,
    is_blocked,
    is_hostile,
)
from .lexicon import (
    CensorLexicon,
    DEFAULT_CATEGORY,
    FlameCategory,
    fold_text,
    load_lexicon,
    save_lexicon,
    add_word,
)
from .protocol import (
    MAX_FRAME_BYTES,
    Block,
    Frame,
    Login,
    Logout,
    MalformedFrame,
    Message,
    System,
    Warn,
    is_valid_username,
    parse_frame,
    serialize_frame,
)
from .store import UserStore
from .timefmt import to_rfc3339, utcnow

logger = logging.getLogger(__name__)

WARN_CENSORED = "Sorry can't send the censor words"
WARN_BLOCKED = "Sorry! You have been blocked"
WARN_LOGIN_REQUIRED = "Please log in first"
WARN_MALFORMED = "Malformed frame"
WARN_UNEXPECTED = "Unexpected frame"
WARN_SENDER_MISMATCH = "Sender name does not match the session"
WARN_STORAGE = "Message could not be processed, try again"


class LoginStatus(Enum):
    ACCEPTED = "accepted"
    BLOCKED = "blocked"
    DUPLICATE = "duplicate"


class AuthorBlocked(Exception):
    """Moderation requested for an author who is currently blocked."""

    def __init__(self, until: datetime) -> None:
        super().__init__(f"author blocked until {to_rfc3339(until)}")
        self.until = until


class Transport:
    """One connected peer, whatever the wire (TCP socket, WebSocket)."""

    async def send_line(self, line: str) -> None:
        raise NotImplementedError

    async def close(self) -> None:
        raise NotImplementedError


@dataclass
class Session:
    """A logged-in user bound to a live transport."""

    name: str
    transport: Transport
    connected_at: datetime

    async def send_frame(self, frame: Frame) -> None:
        await self.transport.send_line(serialize_frame(frame))


class ChatServer:
    """Moderation core shared by the TCP, WebSocket and HTTP planes."""

    def __init__(self, config: ServerConfig) -> None:
        self.config = config
        self.policy = config.policy
        self.store = UserStore(config.store_path)
        self.lexicon = self._load_lexicon(config.lexicon_path)
        self.sessions: dict[str, Session] = {}
        self._user_locks: dict[str, asyncio.Lock] = {}
        self._lexicon_lock = asyncio.Lock()

    @staticmethod
    def _load_lexicon(path: Path) -> CensorLexicon:
        if not path.exists():
            logger.warning("lexicon file %s missing, starting empty", path)
            return CensorLexicon()
        lexicon = load_lexicon(path.read_text(encoding="utf-8"))
        logger.info("loaded %d censor words from %s", len(lexicon), path)
        return lexicon

    def _lock_for(self, name: str) -> asyncio.Lock:
        lock = self._user_locks.get(name)
        if lock is None:
            lock = self._user_locks[name] = asyncio.Lock()
        return lock

    # ------------------------------------------------------------------
    # session lifecycle

    async def login(
        self, name: str, transport: Transport, now: datetime | None = None
    ) -> tuple[LoginStatus, Session | None]:
        """Admit a user, or send the rejection frame and refuse.

        Blocked users get a Block frame carrying their expiry; a name
        that already has a live session gets a Warn.  The caller closes
        the connection on any rejection.
        """
        now = now or utcnow()
        state = self.store.get_or_create(name)
        if is_blocked(state, now):
            await transport.send_line(
                serialize_frame(Block(name, to_rfc3339(state.blocked_until)))
            )
            logger.info("rejected login of blocked user %s", name)
            return LoginStatus.BLOCKED, None
        if name in self.sessions:
            await transport.send_line(
                serialize_frame(Warn(f"{name} is already connected"))
            )
            logger.info("rejected duplicate login %s", name)
            return LoginStatus.DUPLICATE, None
        session = Session(name, transport, now)
        self.sessions[name] = session
        logger.info("%s connected", name)
        await self.broadcast(System(f"{name} connected"))
        return LoginStatus.ACCEPTED, session

    async def disconnect(self, session: Session, announce: bool = True) -> None:
        """Drop a session from the registry, optionally telling the room."""
        if self.sessions.get(session.name) is session:
            del self.sessions[session.name]
            logger.info("%s disconnected", session.name)
            if announce:
                await self.broadcast(System(f"{session.name} disconnected"))

    async def broadcast(self, frame: Frame) -> None:
        """Send a frame to every live session, the sender included."""
        line = serialize_frame(frame)
        dead: list[Session] = []
        for session in list(self.sessions.values()):
            try:
                await session.transport.send_line(line)
            except Exception:
                logger.warning("dropping unreachable session %s", session.name)
                dead.append(session)
        for session in dead:
            await self.disconnect(session, announce=False)
            await session.transport.close()

    # ------------------------------------------------------------------
    # message path

    async def process_inbound(
        self, session: Session, frame: Frame, now: datetime | None = None
    ) -> bool:
        """Handle one parsed frame from a logged-in session.

        Returns False when the session was ended (logout or block); the
        transport loop should stop reading then.
        """
        if isinstance(frame, Message):
            if frame.sender != session.name:
                await session.send_frame(Warn(WARN_SENDER_MISMATCH))
                return True
            if frame.text.casefold() == "stop":
                # "stop" is the in-band quit word and is never relayed
                await self._logout(session)
                return False
            return await self._moderate_and_route(session, frame.text, now)
        if isinstance(frame, Logout):
            await self._logout(session)
            return False
        # clients have no business sending warn/block/system/login here
        await session.send_frame(Warn(WARN_UNEXPECTED))
        return True

    async def _logout(self, session: Session) -> None:
        await self.disconnect(session, announce=True)
        await session.transport.close()

    async def _moderate_and_route(
        self, session: Session, text: str, now: datetime | None
    ) -> bool:
        name = session.name
        async with self._lock_for(name):
            state = self.store.get_or_create(name)
            verdict, new_state = assess(
                state, text, self.lexicon, self.policy, now or utcnow()
            )
            if verdict.matched:
                try:
                    self.store.put(new_state)
                except Exception:
                    logger.exception("failed to persist state for %s", name)
                    await session.send_frame(Warn(WARN_STORAGE))
                    return True
        if verdict.action is Action.DELIVER:
            await self.broadcast(Message(name, text))
            return True
        if verdict.action is Action.WARN_AND_DELIVER:
            await session.send_frame(Warn(WARN_CENSORED))
            await self.broadcast(Message(name, verdict.masked_text))
            return True
        # Action.BLOCK: warn the offender, hand them the expiry, drop
        # them, tell the room; the triggering message reaches nobody.
        logger.info(
            "blocking %s until %s (count %d)",
            name,
            to_rfc3339(new_state.blocked_until),
            new_state.count,
        )
        await session.send_frame(Warn(WARN_BLOCKED))
        await session.send_frame(Block(name, to_rfc3339(new_state.blocked_until)))
        await self.disconnect(session, announce=False)
        await self.broadcast(System(f"{name} blocked"))
        await session.transport.close()
        return False

    # ------------------------------------------------------------------
    # admin plane

    async def admin_add_word(
        self, word: str, category: FlameCategory | str = DEFAULT_CATEGORY
    ) -> dict:
        """Add a censor word, persist the lexicon, swap it in atomically.

        The new word applies to every message scanned after the swap;
        messages already scanned are never revisited.
        """
        async with self._lexicon_lock:
            before = len(self.lexicon)
            updated = add_word(self.lexicon, word, category)
            created = len(updated) > before
            if created:
                _atomic_write_text(self.config.lexicon_path, save_lexicon(updated))
                self.lexicon = updated
                logger.info("lexicon now %d words (+%s)", len(updated), word)
            return {
                "word": fold_text(word.strip()),
                "created": created,
                "lexicon_size": len(self.lexicon),
            }

    def list_users(self, now: datetime | None = None) -> list[dict]:
        """Moderation summary for every user the store knows."""
        now = now or utcnow()
        rows = []
        for state in self.store.all_users():
            rows.append(
                {
                    "name": state.name,
                    "count": state.count,
                    "intensity": intensity(state.count),
                    "hostile": is_hostile(state, self.policy),
                    "blocked": is_blocked(state, now),
                    "blocked_until": to_rfc3339(state.blocked_until)
                    if state.blocked_until
                    else None,
                    "tallies": {
                        cat.value: n for cat, n in sorted(state.category_tallies.items())
                    },
                }
            )
        return rows

    async def moderate_post(
        self, author: str, text: str, now: datetime | None = None
    ) -> Verdict:
        """Run one text through moderation on behalf of ``author``.

        Same counting and blocking rules as chat; used by non-chat
        surfaces (e.g. blog comments) through the HTTP API.

        Raises:
            AuthorBlocked: the author is blocked right now.
            ValueError: the author name is not a valid username.
        """
        if not is_valid_username(author):
            raise ValueError(f"invalid username {author!r}")
        now = now or utcnow()
        async with self._lock_for(author):
            state = self.store.get_or_create(author)
            if is_blocked(state, now):
                raise AuthorBlocked(state.blocked_until)
            verdict, new_state = assess(state, text, self.lexicon, self.policy, now)
            if verdict.matched:
                self.store.put(new_state)
        return verdict


def _atomic_write_text(path: Path, text: str) -> None:
    fd, tmp_path = tempfile.mkstemp(prefix=path.name + ".", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
            handle.flush()
            os.fsync(handle.fileno())
        os.replace(tmp_path, path)
    except OSError:
        try:
            os.unlink(tmp_path)
        except OSError:
            pass
        raise


# ----------------------------------------------------------------------
# connection driving, shared by the TCP and WebSocket planes


class ConnectionDriver:
    """Login handshake then frame dispatch for one connection."""

    def __init__(self, core: ChatServer, transport: Transport) -> None:
        self.core = core
        self.transport = transport
        self.session: Session | None = None

    async def feed_line(self, line: str) -> bool:
        """Process one inbound line; False means stop reading."""
        try:
            frame = parse_frame(line)
        except MalformedFrame as exc:
            logger.debug("malformed frame: %s", exc)
            await self.transport.send_line(serialize_frame(Warn(WARN_MALFORMED)))
            return True
        if self.session is None:
            if isinstance(frame, Login):
                status, session = await self.core.login(frame.name, self.transport)
                if status is not LoginStatus.ACCEPTED:
                    return False
                self.session = session
                return True
            await self.transport.send_line(serialize_frame(Warn(WARN_LOGIN_REQUIRED)))
            return True
        keep = await self.core.process_inbound(self.session, frame)
        if not keep:
            self.session = None  # core already unregistered and closed
        return keep

    async def connection_lost(self) -> None:
        """Peer vanished without logout: clean up and tell the room."""
        if self.session is not None:
            await self.core.disconnect(self.session, announce=True)
            self.session = None


class TcpTransport(Transport):
    def __init__(self, writer: asyncio.StreamWriter) -> None:
        self._writer = writer

    async def send_line(self, line: str) -> None:
        self._writer.write(line.encode("utf-8") + b"\n")
        await self._writer.drain()

    async def close(self) -> None:
        try:
            self._writer.close()
            await self._writer.wait_closed()
        except (OSError, asyncio.CancelledError):
            pass


async def handle_tcp_connection(
    core: ChatServer, reader: asyncio.StreamReader, writer: asyncio.StreamWriter
) -> None:
    transport = TcpTransport(writer)
    driver = ConnectionDriver(core, transport)
    try:
        while True:
            try:
                raw = await reader.readline()
            except (asyncio.LimitOverrunError, ValueError):
                # line exceeded the stream limit: cannot resync mid-frame
                await transport.send_line(serialize_frame(Warn(WARN_MALFORMED)))
                break
            if not raw:
                break  # EOF
            line = raw.decode("utf-8", errors="replace").rstrip("\r\n")
            if not await driver.feed_line(line):
                return  # rejection or core-initiated close
    except ConnectionError:
        pass
    finally:
        await driver.connection_lost()
        await transport.close()


async def serve_tcp(core: ChatServer, host: str, port: int) -> asyncio.AbstractServer:
    async def handler(reader: asyncio.StreamReader, writer: asyncio.StreamWriter):
        await handle_tcp_connection(core, reader, writer)

    # headroom over the frame limit so the limit check happens in
    # parse_frame, not as a stream error
    server = await asyncio.start_server(
        handler, host, port, limit=MAX_FRAME_BYTES + 4096
    )
    logger.info("chat listening on %s:%d", host, port)
    return server


# ----------------------------------------------------------------------
# process entry point


async def run_server(config: ServerConfig) -> None:
    import uvicorn

    from .http_api import build_app

    core = ChatServer(config)
    tcp_server = await serve_tcp(core, *config.tcp_address)
    app = build_app(core)
    http_host, http_port = config.http_address
    uv_config = uvicorn.Config(
        app, host=http_host, port=http_port, log_level="warning", access_log=False
    )
    uv_server = uvicorn.Server(uv_config)
    logger.info("admin api listening on %s:%d", http_host, http_port)
    if not config.admin_token:
        logger.warning("no admin token configured; admin endpoints will refuse all calls")

    http_task = asyncio.ensure_future(uv_server.serve())
    tcp_task = asyncio.ensure_future(tcp_server.serve_forever())
    try:
        # uvicorn owns SIGINT/SIGTERM; when it exits we take everything down
        done, pending = await asyncio.wait(
            [http_task, tcp_task], return_when=asyncio.FIRST_COMPLETED
        )
        for task in done:
            task.result()  # surface startup failures
    finally:
        tcp_server.close()
        await tcp_server.wait_closed()
        for task in (http_task, tcp_task):
            if not task.done():
                task.cancel()
                try:
                    await task
                except (asyncio.CancelledError, Exception):
                    pass


def parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="flameguard-server",
        description="Moderated chat server with censor masking and flame tracking",
    )
    parser.add_argument("--config", metavar="PATH", help="config file (key = value lines)")
    parser.add_argument("--tcp", metavar="ADDR", help="chat listen address host:port")
    parser.add_argument("--http", metavar="ADDR", help="admin API listen address host:port")
    parser.add_argument("--lexicon", metavar="PATH", help="censor lexicon file")
    parser.add_argument("--store", metavar="PATH", help="user store JSON file")
    parser.add_argument("--token", metavar="TOKEN", help="admin API bearer token")
    parser.add_argument("--static", metavar="DIR", help="web console static directory")
    return parser.parse_args(argv)


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(
        level=logging.INFO, format="%(asctime)s %(name)s %(levelname)s %(message)s"
    )
    args = parse_args(argv)
    file_values = load_config_file(args.config) if args.config else {}
    cli_values = {
        "tcp": args.tcp,
        "http": args.http,
        "lexicon": args.lexicon,
        "store": args.store,
        "token": args.token,
        "static": args.static,
    }
    config = build_config(file_values, cli_values=cli_values)
    try:
        asyncio.run(run_server(config))
    except KeyboardInterrupt:
        pass
    return 0


if __name__ == "__main__":
    # `python -m flameguard.server` loads this file as `__main__` while
    # http_api imports it as `flameguard.server`, which would duplicate
    # every class here (two LoginStatus enums, two AuthorBlocked types)
    # and break identity comparisons across the two copies.  Re-enter
    # through the canonical module so one instance serves the process.
    from flameguard.server import main as canonical_main

    raise SystemExit(canonical_main())
