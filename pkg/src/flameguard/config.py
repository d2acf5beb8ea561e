"""Server configuration from defaults, config file, environment, CLI.

Precedence, lowest to highest: built-in defaults, config file
(``key = value`` lines), environment variables, command-line flags.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from datetime import timedelta
from pathlib import Path
from typing import Mapping

from .engine import ModerationPolicy
from .lexicon import MatchMode

DEFAULT_TCP_ADDRESS = "127.0.0.1:5050"
DEFAULT_HTTP_ADDRESS = "127.0.0.1:8080"
DEFAULT_LEXICON_PATH = "censor.txt"
DEFAULT_STORE_PATH = "users.json"

ENV_TCP = "FLAMEGUARD_TCP"
ENV_HTTP = "FLAMEGUARD_HTTP"
ENV_TOKEN = "FLAMEGUARD_ADMIN_TOKEN"

_FILE_KEYS = {
    "tcp_listen_address",
    "http_listen_address",
    "lexicon_path",
    "user_store_path",
    "admin_token",
    "static_dir",
    "hostile_threshold",
    "block_threshold",
    "block_duration_seconds",
    "match_mode",
}


class ConfigError(ValueError):
    """Configuration that cannot be parsed or validated."""


def parse_address(text: str) -> tuple[str, int]:
    """Split ``host:port`` into its parts."""
    host, sep, port_text = text.strip().rpartition(":")
    if not sep or not host:
        raise ConfigError(f"address {text!r} is not host:port")
    try:
        port = int(port_text)
    except ValueError:
        raise ConfigError(f"address {text!r} has a non-numeric port") from None
    if not 0 <= port <= 65535:
        raise ConfigError(f"port {port} out of range")
    return host, port


@dataclass
class ServerConfig:
    """Everything the server process needs to start."""

    tcp_address: tuple[str, int] = parse_address(DEFAULT_TCP_ADDRESS)
    http_address: tuple[str, int] = parse_address(DEFAULT_HTTP_ADDRESS)
    lexicon_path: Path = Path(DEFAULT_LEXICON_PATH)
    store_path: Path = Path(DEFAULT_STORE_PATH)
    admin_token: str = ""  # empty disables the admin API
    policy: ModerationPolicy = field(default_factory=ModerationPolicy)
    static_dir: Path | None = None


def load_config_file(path: str | os.PathLike) -> dict[str, str]:
    """Read ``key = value`` lines; ``#`` starts a comment.

    Unknown keys are rejected so typos fail fast.
    """
    values: dict[str, str] = {}
    text = Path(path).read_text(encoding="utf-8")
    for lineno, raw_line in enumerate(text.splitlines(), start=1):
        line = raw_line.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ConfigError(f"{path}:{lineno}: expected key = value")
        key = key.strip()
        if key not in _FILE_KEYS:
            raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
        values[key] = value.strip()
    return values


def _policy_from_values(values: Mapping[str, str]) -> ModerationPolicy:
    kwargs: dict = {}
    try:
        if "hostile_threshold" in values:
            kwargs["hostile_threshold"] = int(values["hostile_threshold"])
        if "block_threshold" in values:
            kwargs["block_threshold"] = int(values["block_threshold"])
        if "block_duration_seconds" in values:
            kwargs["block_duration"] = timedelta(
                seconds=float(values["block_duration_seconds"])
            )
        if "match_mode" in values:
            kwargs["match_mode"] = MatchMode(values["match_mode"].strip().lower())
        return ModerationPolicy(**kwargs)
    except ValueError as exc:
        raise ConfigError(f"bad policy setting: {exc}") from None


def build_config(
    file_values: Mapping[str, str] | None = None,
    env: Mapping[str, str] | None = None,
    cli_values: Mapping[str, str] | None = None,
) -> ServerConfig:
    """Merge the three sources (plus defaults) into a ServerConfig."""
    file_values = dict(file_values or {})
    env = os.environ if env is None else env
    cli_values = dict(cli_values or {})

    def pick(cli_key: str, env_key: str | None, file_key: str, default: str) -> str:
        if cli_values.get(cli_key):
            return cli_values[cli_key]
        if env_key and env.get(env_key):
            return env[env_key]
        if file_values.get(file_key):
            return file_values[file_key]
        return default

    tcp = parse_address(pick("tcp", ENV_TCP, "tcp_listen_address", DEFAULT_TCP_ADDRESS))
    http = parse_address(
        pick("http", ENV_HTTP, "http_listen_address", DEFAULT_HTTP_ADDRESS)
    )
    lexicon_path = Path(pick("lexicon", None, "lexicon_path", DEFAULT_LEXICON_PATH))
    store_path = Path(pick("store", None, "user_store_path", DEFAULT_STORE_PATH))
    token = pick("token", ENV_TOKEN, "admin_token", "")
    static_raw = pick("static", None, "static_dir", "")
    return ServerConfig(
        tcp_address=tcp,
        http_address=http,
        lexicon_path=lexicon_path,
        store_path=store_path,
        admin_token=token,
        policy=_policy_from_values(file_values),
        static_dir=Path(static_raw) if static_raw else None,
    )
