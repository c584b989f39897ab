"""Runtime configuration: defaults, JSON config file, environment overrides.

Precedence, lowest to highest: built-in defaults, the config file, then
``GAZTRACK_*`` environment variables (e.g. ``GAZTRACK_PORT=9000``).
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, fields, replace
from pathlib import Path
from typing import Mapping

from .errors import MalformedRecord, ZeroAlpha

ENV_PREFIX = "GAZTRACK_"


@dataclass(frozen=True)
class AppConfig:
    rules_path: str | None = None  # None -> bundled demo rules
    data_dir: str = "gaztrack-data"
    ui_dir: str | None = None  # serve a built review UI from this directory
    host: str = "127.0.0.1"
    port: int = 8000
    seed: int = 42
    k: int = 10
    alpha: float = 1.0
    min_df: int = 2


_FIELD_NAMES = {f.name for f in fields(AppConfig)}
_INT_FIELDS = {"port", "seed", "k", "min_df"}
_FLOAT_FIELDS = {"alpha"}


def _coerce(name: str, value, *, source: str):
    try:
        if name in _INT_FIELDS:
            return int(value)
        if name in _FLOAT_FIELDS:
            return float(value)
    except (TypeError, ValueError):
        raise MalformedRecord(
            f"config value {name}={value!r} is not numeric", source=source
        ) from None
    if value is None:
        return None
    return str(value)


def _validate(config: AppConfig) -> AppConfig:
    if config.alpha <= 0:
        raise ZeroAlpha(config.alpha)
    if config.k < 2:
        raise MalformedRecord(f"k must be >= 2, got {config.k}", source="config")
    if config.min_df < 1:
        raise MalformedRecord(
            f"min_df must be >= 1, got {config.min_df}", source="config"
        )
    return config


def load_config(
    path: str | Path | None = None, env: Mapping[str, str] | None = None
) -> AppConfig:
    """Assemble the effective configuration.

    The config file, when given, must be a JSON object whose keys are
    AppConfig field names; unknown keys are rejected so typos fail loudly.
    """
    config = AppConfig()
    if path is not None:
        source = str(path)
        try:
            payload = json.loads(Path(path).read_text(encoding="utf-8"))
        except ValueError as exc:
            raise MalformedRecord(f"invalid JSON: {exc}", source=source) from None
        if not isinstance(payload, dict):
            raise MalformedRecord("config must be a JSON object", source=source)
        for key, value in payload.items():
            if key not in _FIELD_NAMES:
                raise MalformedRecord(f"unknown config key {key!r}", source=source)
            config = replace(config, **{key: _coerce(key, value, source=source)})
    env = os.environ if env is None else env
    for name in sorted(_FIELD_NAMES):
        var = ENV_PREFIX + name.upper()
        if var in env:
            config = replace(config, **{name: _coerce(name, env[var], source=var)})
    return _validate(config)
