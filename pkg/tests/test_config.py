"""Configuration parsing and source precedence."""

from __future__ import annotations

from datetime import timedelta
from pathlib import Path

import pytest

from flameguard.config import (
    ConfigError,
    DEFAULT_HTTP_ADDRESS,
    DEFAULT_TCP_ADDRESS,
    ENV_HTTP,
    ENV_TCP,
    ENV_TOKEN,
    ServerConfig,
    build_config,
    load_config_file,
    parse_address,
)
from flameguard.lexicon import MatchMode


def test_parse_address():
    assert parse_address("127.0.0.1:5050") == ("127.0.0.1", 5050)
    assert parse_address(" 0.0.0.0:80 ") == ("0.0.0.0", 80)


@pytest.mark.parametrize("bad", ["", "nohost", ":8080", "host:", "host:abc", "host:70000"])
def test_parse_address_rejects(bad):
    with pytest.raises(ConfigError):
        parse_address(bad)


def test_defaults():
    config = build_config(env={})
    assert config.tcp_address == parse_address(DEFAULT_TCP_ADDRESS)
    assert config.http_address == parse_address(DEFAULT_HTTP_ADDRESS)
    assert config.lexicon_path == Path("censor.txt")
    assert config.store_path == Path("users.json")
    assert config.admin_token == ""
    assert config.policy.hostile_threshold == 5
    assert config.policy.block_threshold == 7
    assert config.static_dir is None


def test_config_file_parsing(tmp_path):
    path = tmp_path / "server.conf"
    path.write_text(
        """
# chat plane
tcp_listen_address = 127.0.0.1:6000

http_listen_address = 127.0.0.1:6001  # admin
lexicon_path = /data/censor.txt
user_store_path = /data/users.json
admin_token = hunter2
block_duration_seconds = 60
match_mode = word
""",
        encoding="utf-8",
    )
    values = load_config_file(path)
    config = build_config(values, env={})
    assert config.tcp_address == ("127.0.0.1", 6000)
    assert config.http_address == ("127.0.0.1", 6001)
    assert config.lexicon_path == Path("/data/censor.txt")
    assert config.store_path == Path("/data/users.json")
    assert config.admin_token == "hunter2"
    assert config.policy.block_duration == timedelta(seconds=60)
    assert config.policy.match_mode is MatchMode.WORD


def test_config_file_rejects_unknown_key(tmp_path):
    path = tmp_path / "server.conf"
    path.write_text("tcp_listen_adress = x:1\n", encoding="utf-8")  # typo
    with pytest.raises(ConfigError):
        load_config_file(path)


def test_config_file_rejects_missing_equals(tmp_path):
    path = tmp_path / "server.conf"
    path.write_text("just some words\n", encoding="utf-8")
    with pytest.raises(ConfigError):
        load_config_file(path)


def test_env_overrides_file():
    env = {ENV_TCP: "127.0.0.1:7000", ENV_TOKEN: "env-token"}
    config = build_config({"tcp_listen_address": "127.0.0.1:1", "admin_token": "file"}, env=env)
    assert config.tcp_address == ("127.0.0.1", 7000)
    assert config.admin_token == "env-token"


def test_cli_overrides_env_and_file():
    env = {ENV_TCP: "127.0.0.1:7000", ENV_HTTP: "127.0.0.1:7001"}
    config = build_config(
        {"tcp_listen_address": "127.0.0.1:1"},
        env=env,
        cli_values={"tcp": "127.0.0.1:9000", "lexicon": "cli.txt"},
    )
    assert config.tcp_address == ("127.0.0.1", 9000)
    assert config.http_address == ("127.0.0.1", 7001)  # env still wins over default
    assert config.lexicon_path == Path("cli.txt")


def test_policy_thresholds_from_file():
    config = build_config(
        {"hostile_threshold": "2", "block_threshold": "3"}, env={}
    )
    assert config.policy.hostile_threshold == 2
    assert config.policy.block_threshold == 3


def test_bad_policy_value_raises():
    with pytest.raises(ConfigError):
        build_config({"block_threshold": "many"}, env={})
    with pytest.raises(ConfigError):
        build_config({"match_mode": "fuzzy"}, env={})
    with pytest.raises(ConfigError):
        build_config({"hostile_threshold": "9", "block_threshold": "3"}, env={})


def test_static_dir(tmp_path):
    config = build_config({"static_dir": str(tmp_path)}, env={})
    assert config.static_dir == tmp_path


def test_server_config_direct_construction(tmp_path):
    config = ServerConfig(lexicon_path=tmp_path / "c.txt", store_path=tmp_path / "u.json")
    assert config.tcp_address == ("127.0.0.1", 5050)
