"""Shared fixtures: async backend, in-process server cores, subprocess servers."""

from __future__ import annotations

import os
import signal
import socket
import subprocess
import sys
import time
from dataclasses import dataclass
from pathlib import Path

import pytest

from flameguard.config import ServerConfig
from flameguard.engine import ModerationPolicy
from flameguard.protocol import parse_frame
from flameguard.server import ChatServer, Transport


@pytest.fixture
def anyio_backend():
    return "asyncio"


def free_port() -> int:
    with socket.socket() as sock:
        sock.bind(("127.0.0.1", 0))
        return sock.getsockname()[1]


class FakeTransport(Transport):
    """Records outbound lines; used by in-process server tests."""

    def __init__(self) -> None:
        self.lines: list[str] = []
        self.closed = False
        self.fail_sends = False

    async def send_line(self, line: str) -> None:
        if self.fail_sends:
            raise ConnectionResetError("peer gone")
        self.lines.append(line)

    async def close(self) -> None:
        self.closed = True

    def frames(self):
        return [parse_frame(line) for line in self.lines]


@pytest.fixture
def fake_transport():
    return FakeTransport


@pytest.fixture
def make_core(tmp_path):
    """Factory for in-process ChatServer cores with their own files."""

    counter = 0

    def build(
        words: str = "asshole\n",
        policy: ModerationPolicy | None = None,
        token: str = "test-token",
    ) -> ChatServer:
        nonlocal counter
        counter += 1
        root = tmp_path / f"core{counter}"
        root.mkdir()
        lexicon_path = root / "censor.txt"
        lexicon_path.write_text(words, encoding="utf-8")
        config = ServerConfig(
            lexicon_path=lexicon_path,
            store_path=root / "users.json",
            admin_token=token,
            policy=policy or ModerationPolicy(),
        )
        return ChatServer(config)

    return build


@dataclass
class ServerHandle:
    """A flameguard server running in a child process."""

    proc: subprocess.Popen
    tcp_port: int
    http_port: int
    token: str
    lexicon_path: Path
    store_path: Path

    @property
    def http_base(self) -> str:
        return f"http://127.0.0.1:{self.http_port}"

    def auth(self) -> dict[str, str]:
        return {"Authorization": f"Bearer {self.token}"}

    def stop(self, timeout: float = 10.0) -> None:
        if self.proc.poll() is None:
            self.proc.send_signal(signal.SIGTERM)
            try:
                self.proc.wait(timeout=timeout)
            except subprocess.TimeoutExpired:
                self.proc.kill()
                self.proc.wait()


def _wait_listening(port: int, proc: subprocess.Popen, timeout: float = 15.0) -> None:
    deadline = time.monotonic() + timeout
    while time.monotonic() < deadline:
        if proc.poll() is not None:
            raise RuntimeError(
                f"server exited early with {proc.returncode}:\n"
                + proc.stderr.read().decode("utf-8", "replace")
            )
        try:
            with socket.create_connection(("127.0.0.1", port), timeout=0.25):
                return
        except OSError:
            time.sleep(0.05)
    raise RuntimeError(f"server did not open port {port} within {timeout}s")


def start_server(
    workdir: Path,
    words: str = "asshole\n",
    token: str = "secret-token",
    extra_config: str = "",
    store_path: Path | None = None,
) -> ServerHandle:
    """Launch a flameguard server subprocess and wait until it listens."""
    workdir.mkdir(parents=True, exist_ok=True)
    lexicon_path = workdir / "censor.txt"
    if not lexicon_path.exists():
        lexicon_path.write_text(words, encoding="utf-8")
    if store_path is None:
        store_path = workdir / "users.json"
    tcp_port = free_port()
    http_port = free_port()
    config_path = workdir / "server.conf"
    config_path.write_text(
        f"tcp_listen_address = 127.0.0.1:{tcp_port}\n"
        f"http_listen_address = 127.0.0.1:{http_port}\n"
        f"lexicon_path = {lexicon_path}\n"
        f"user_store_path = {store_path}\n"
        f"admin_token = {token}\n" + extra_config,
        encoding="utf-8",
    )
    proc = subprocess.Popen(
        [sys.executable, "-m", "flameguard.server", "--config", str(config_path)],
        stdout=subprocess.DEVNULL,
        stderr=subprocess.PIPE,
        env={**os.environ, "PYTHONUNBUFFERED": "1"},
    )
    handle = ServerHandle(proc, tcp_port, http_port, token, lexicon_path, store_path)
    try:
        _wait_listening(tcp_port, proc)
        _wait_listening(http_port, proc)
    except Exception:
        handle.stop(timeout=2)
        raise
    return handle


@pytest.fixture
def server_proc(tmp_path):
    """One subprocess server per test, cleaned up afterwards."""
    handles: list[ServerHandle] = []

    def launch(**kwargs) -> ServerHandle:
        handle = start_server(tmp_path / f"srv{len(handles)}", **kwargs)
        handles.append(handle)
        return handle

    yield launch
    for handle in handles:
        handle.stop()
