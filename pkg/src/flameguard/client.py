"""Terminal chat client.

Connects over TCP, logs in, then relays lines between the user (or a
script file) and the server, rendering inbound frames for a terminal.
Typing ``stop`` (any case) logs out.  Exit status: 0 after a normal
logout, 2 if the server blocked us, 3 on transport failure.
"""

from __future__ import annotations

import argparse
import asyncio
import sys
from typing import IO, Iterable

from .protocol import (
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

EXIT_OK = 0
EXIT_BLOCKED = 2
EXIT_TRANSPORT = 3

STOP_WORD = "stop"


def render_frame(frame: Frame) -> str:
    """One display line per frame, as shown in the transcript."""
    if isinstance(frame, Message):
        return f"{frame.sender}: {frame.text}"
    if isinstance(frame, Warn):
        return f"[WARNING] {frame.text}"
    if isinstance(frame, Block):
        return f"[BLOCKED until {frame.until}]"
    if isinstance(frame, System):
        return f"* {frame.text}"
    if isinstance(frame, Login):
        return f"* {frame.name} logging in"
    return f"* {frame.name} logged out"  # Logout


class ChatClient:
    """One connection's lifecycle; collects the transcript as it goes."""

    def __init__(
        self,
        host: str,
        port: int,
        name: str,
        out: IO[str] | None = None,
        delay: float = 0.05,
    ) -> None:
        self.host = host
        self.port = port
        self.name = name
        self.out = out if out is not None else sys.stdout
        self.delay = delay
        self.transcript: list[str] = []
        self.blocked = False
        self._logged_out = False

    def _emit(self, line: str) -> None:
        self.transcript.append(line)
        print(line, file=self.out, flush=True)

    async def _read_loop(self, reader: asyncio.StreamReader) -> None:
        while True:
            raw = await reader.readline()
            if not raw:
                return
            line = raw.decode("utf-8", errors="replace").rstrip("\r\n")
            if not line:
                continue
            try:
                frame = parse_frame(line)
            except MalformedFrame:
                self._emit(f"[?] {line}")
                continue
            self._emit(render_frame(frame))
            if isinstance(frame, Block) and frame.name == self.name:
                self.blocked = True

    async def _send(self, writer: asyncio.StreamWriter, frame: Frame) -> None:
        writer.write(serialize_frame(frame).encode("utf-8") + b"\n")
        await writer.drain()

    async def _send_user_lines(
        self, writer: asyncio.StreamWriter, lines: Iterable[str]
    ) -> None:
        for text in lines:
            if self.blocked:
                return
            if text.casefold() == STOP_WORD:
                await self._send(writer, Logout(self.name))
                self._logged_out = True
                return
            await self._send(writer, Message(self.name, text))
            if self.delay:
                await asyncio.sleep(self.delay)
        if not self.blocked:
            await self._send(writer, Logout(self.name))
            self._logged_out = True

    async def _stdin_lines(self):
        loop = asyncio.get_running_loop()
        while True:
            line = await loop.run_in_executor(None, sys.stdin.readline)
            if not line:
                return  # stdin EOF behaves like "stop"
            yield line.rstrip("\n")

    async def run(self, script: list[str] | None = None) -> int:
        try:
            reader, writer = await asyncio.open_connection(self.host, self.port)
        except OSError as exc:
            self._emit(f"[ERROR] cannot connect to {self.host}:{self.port}: {exc}")
            return EXIT_TRANSPORT
        read_task = asyncio.ensure_future(self._read_loop(reader))
        try:
            await self._send(writer, Login(self.name))
            if script is not None:
                await self._send_user_lines(writer, script)
            else:
                async for text in self._stdin_lines():
                    if self.blocked or read_task.done():
                        break
                    if text.casefold() == STOP_WORD:
                        await self._send(writer, Logout(self.name))
                        self._logged_out = True
                        break
                    await self._send(writer, Message(self.name, text))
                else:
                    await self._send(writer, Logout(self.name))
                    self._logged_out = True
            # wait for the server to finish talking and close
            try:
                await asyncio.wait_for(read_task, timeout=10)
            except asyncio.TimeoutError:
                read_task.cancel()
        except (ConnectionError, OSError):
            pass  # server closed on us mid-send; the read loop saw why
        finally:
            if not read_task.done():
                read_task.cancel()
            try:
                writer.close()
                await writer.wait_closed()
            except (OSError, ConnectionError):
                pass
        if self.blocked:
            return EXIT_BLOCKED
        if self._logged_out:
            return EXIT_OK
        self._emit("[ERROR] connection lost")
        return EXIT_TRANSPORT


def parse_args(argv: list[str] | None = None) -> argparse.Namespace:
    parser = argparse.ArgumentParser(
        prog="flameguard-client", description="Terminal chat client"
    )
    parser.add_argument(
        "--server", required=True, metavar="HOST:PORT", help="server chat address"
    )
    parser.add_argument("--name", required=True, metavar="NAME", help="username")
    parser.add_argument(
        "--script",
        metavar="FILE",
        help="send lines from FILE instead of stdin, then log out",
    )
    parser.add_argument(
        "--delay",
        type=float,
        default=0.05,
        metavar="SECONDS",
        help="pause between scripted lines (default 0.05)",
    )
    return parser.parse_args(argv)


def main(argv: list[str] | None = None) -> int:
    args = parse_args(argv)
    host, sep, port_text = args.server.rpartition(":")
    if not sep or not port_text.isdigit():
        print(f"[ERROR] --server must be HOST:PORT, got {args.server!r}", file=sys.stderr)
        return EXIT_TRANSPORT
    if not is_valid_username(args.name):
        print(f"[ERROR] invalid username {args.name!r}", file=sys.stderr)
        return EXIT_TRANSPORT
    script = None
    if args.script:
        try:
            with open(args.script, encoding="utf-8") as handle:
                script = handle.read().splitlines()
        except OSError as exc:
            print(f"[ERROR] cannot read script: {exc}", file=sys.stderr)
            return EXIT_TRANSPORT
    client = ChatClient(host, int(port_text), args.name, delay=args.delay)
    try:
        return asyncio.run(client.run(script))
    except KeyboardInterrupt:
        return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
