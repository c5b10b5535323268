"""
Exploration bounds and where they come from.

Each setting is looked up on a ladder, first hit wins:
1. Explicit value (command-line flag)
2. Environment variable (JOINBENCH_MAX_STATES, JOINBENCH_MAX_DEPTH, JOINBENCH_MAX_REPL, JOINBENCH_JOBS)
3. TOML file: $JOINBENCH_CONFIG, else ~/.config/joinbench/config.toml, table [bounds]
4. Built-in default

A bad value on any rung is reported on stderr and skipped, never fatal.

Usage:
    from joinbench.config import load_settings

    settings = load_settings(max_states=args.max_states)
    settings.bounds()            # semantics.Bounds
    settings.sources["jobs"]     # "default", "env JOINBENCH_JOBS", ...
"""

import os
import sys
import tomllib
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

DEFAULT_MAX_STATES = 20000
DEFAULT_MAX_DEPTH = 200
DEFAULT_MAX_REPL = 3
DEFAULT_JOBS = 1

DEFAULTS = {
    "max_states": DEFAULT_MAX_STATES,
    "max_depth": DEFAULT_MAX_DEPTH,
    "max_repl": DEFAULT_MAX_REPL,
    "jobs": DEFAULT_JOBS,
}

ENV_VARS = {key: f"JOINBENCH_{key.upper()}" for key in DEFAULTS}
CONFIG_ENV = "JOINBENCH_CONFIG"
DEFAULT_CONFIG_FILE = Path.home() / ".config" / "joinbench" / "config.toml"

# max_repl may be 0 (replication never unfolds); the others must be positive.
_MINIMUM = {"max_states": 1, "max_depth": 1, "max_repl": 0, "jobs": 1}


@dataclass
class Settings:
    max_states: int = DEFAULT_MAX_STATES
    max_depth: int = DEFAULT_MAX_DEPTH
    max_repl: int = DEFAULT_MAX_REPL
    jobs: int = DEFAULT_JOBS
    sources: dict[str, str] = field(default_factory=lambda: {key: "default" for key in DEFAULTS})
    config_file: Optional[Path] = None

    def bounds(self):
        from joinbench.semantics import Bounds

        return Bounds(self.max_states, self.max_depth, self.max_repl)


def _warn(message: str) -> None:
    print(f"Warning: {message}", file=sys.stderr)


def _coerce(key: str, raw, source: str) -> Optional[int]:
    try:
        value = int(raw)
    except (TypeError, ValueError):
        _warn(f"{source}: {key} must be an integer, got {raw!r}; ignoring")
        return None
    if isinstance(raw, bool) or value < _MINIMUM[key]:
        _warn(f"{source}: {key} must be at least {_MINIMUM[key]}, got {raw!r}; ignoring")
        return None
    return value


def config_path() -> Path:
    override = os.environ.get(CONFIG_ENV)
    return Path(override).expanduser() if override else DEFAULT_CONFIG_FILE


def _read_file(path: Path) -> dict:
    """The [bounds] table of the config file, or {} when absent or unreadable."""
    if not path.exists():
        return {}
    try:
        with path.open("rb") as fh:
            data = tomllib.load(fh)
    except (OSError, tomllib.TOMLDecodeError) as e:
        _warn(f"{path.resolve()}: cannot read config ({e}); using defaults")
        return {}
    table = data.get("bounds", {})
    if not isinstance(table, dict):
        _warn(f"{path.resolve()}: [bounds] must be a table; using defaults")
        return {}
    unknown = sorted(set(table) - set(DEFAULTS))
    if unknown:
        _warn(f"{path.resolve()}: unknown keys in [bounds]: {', '.join(unknown)}")
    return table


def load_settings(**explicit: Optional[int]) -> Settings:
    """Resolve every setting down the ladder; explicit None means "not given"."""
    settings = Settings()
    path = config_path()
    file_values = _read_file(path)
    if file_values:
        settings.config_file = path

    for key, default in DEFAULTS.items():
        value, source = None, "default"
        if explicit.get(key) is not None:
            value = _coerce(key, explicit[key], f"--{key.replace('_', '-')}")
            source = "flag"
        if value is None and ENV_VARS[key] in os.environ:
            value = _coerce(key, os.environ[ENV_VARS[key]], f"env {ENV_VARS[key]}")
            source = f"env {ENV_VARS[key]}"
        if value is None and key in file_values:
            value = _coerce(key, file_values[key], str(path.resolve()))
            source = f"file {path}"
        if value is None:
            value, source = default, "default"
        setattr(settings, key, value)
        settings.sources[key] = source
    return settings
