"""Plain-text key=value configuration for the service."""

from __future__ import annotations

from dataclasses import dataclass

from .errors import InvalidArgument


@dataclass
class ServerConfig:
    storage_path: str = "stemma-store"
    port: int = 8080
    bind: str = "127.0.0.1"
    ttl_seconds: int = 3600
    pop_size_default: int = 12
    static_dir: str | None = None  # optional: directory of web UI assets


_KEYS = {
    "storage.path": ("storage_path", str),
    "server.port": ("port", int),
    "server.bind": ("bind", str),
    "session.ttl_seconds": ("ttl_seconds", int),
    "session.pop_size_default": ("pop_size_default", int),
    "server.static_dir": ("static_dir", str),
}


def parse_config(text: str) -> ServerConfig:
    """Parse key=value lines; '#' starts a comment, blank lines are skipped.
    Unknown keys are errors, not silently ignored."""
    cfg = ServerConfig()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise InvalidArgument(f"config line {lineno}: expected key=value")
        key, value = (part.strip() for part in line.split("=", 1))
        if key not in _KEYS:
            raise InvalidArgument(f"config line {lineno}: unknown key {key!r}")
        attr, typ = _KEYS[key]
        try:
            setattr(cfg, attr, typ(value))
        except ValueError:
            raise InvalidArgument(
                f"config line {lineno}: {key} needs a {typ.__name__}") from None
    return cfg


def load_config(path: str) -> ServerConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())


__all__ = ["ServerConfig", "parse_config", "load_config"]
