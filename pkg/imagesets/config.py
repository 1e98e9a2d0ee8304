"""Runtime settings, read from the environment (and a local .env file)."""

import os
from dataclasses import dataclass
from functools import lru_cache

from dotenv import load_dotenv

load_dotenv()

DEFAULT_TABLE_CAP = 2**22
DEFAULT_WALSH_CAP = 14
DEFAULT_WALSH_ZERO_CAP = 20
DEFAULT_WALSH_BATCH = 64


@dataclass(frozen=True)
class Settings:
    """Caps and knobs shared by the library, the CLI and the MCP server"""
    table_cap: int = DEFAULT_TABLE_CAP
    walsh_cap: int = DEFAULT_WALSH_CAP
    walsh_zero_cap: int = DEFAULT_WALSH_ZERO_CAP
    walsh_batch: int = DEFAULT_WALSH_BATCH
    log_level: str = "WARNING"
    mcp_host: str = "0.0.0.0"
    mcp_port: int = 8000


def _int_env(name: str, default: int) -> int:
    raw = os.environ.get(name)
    if raw is None or raw.strip() == "":
        return default
    try:
        return int(raw, 0)
    except ValueError:
        raise ValueError(f"{name} must be an integer, got {raw!r}")


@lru_cache(maxsize=1)
def get_settings() -> Settings:
    return Settings(
        table_cap=_int_env("IMAGESETS_TABLE_CAP", DEFAULT_TABLE_CAP),
        walsh_cap=_int_env("IMAGESETS_WALSH_CAP", DEFAULT_WALSH_CAP),
        walsh_zero_cap=_int_env("IMAGESETS_WALSH_ZERO_CAP", DEFAULT_WALSH_ZERO_CAP),
        walsh_batch=max(1, _int_env("IMAGESETS_WALSH_BATCH", DEFAULT_WALSH_BATCH)),
        log_level=os.environ.get("IMAGESETS_LOG_LEVEL", "WARNING").upper(),
        mcp_host=os.environ.get("IMAGESETS_MCP_HOST", "0.0.0.0"),
        mcp_port=_int_env("IMAGESETS_MCP_PORT", 8000),
    )
