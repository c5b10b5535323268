"""
Shared utilities for the joinbench CLI.

Provides common functions used across cli.py and repro.py:
- Exit codes and stderr diagnostics
- JSON output of dataclass results
- Reading process sources (file, stdin) and their `-- lang:` header
- Bundled corpus loading
"""

import dataclasses
import json
import re
import sys
from importlib import resources
from pathlib import Path
from typing import Any, Optional

# Exit codes
EXIT_OK = 0
EXIT_FAIL = 1  # assertion or validity check failed
EXIT_TRUNCATED = 2  # exploration hit a bound
EXIT_USAGE = 64  # bad flags, unreadable or invalid input

CORPUS_PACKAGE = "joinbench.corpus"
CORPUS_SUFFIX = ".jb"

_LANG_HEADER = re.compile(r"^\s*--\s*lang:\s*(L\s*\[[^\]]*\])", re.MULTILINE)


class InputError(Exception):
    """Input the CLI cannot work with: missing file, wrong language, empty corpus."""


def info(message: str) -> None:
    print(message, file=sys.stderr)


def warn(message: str) -> None:
    print(f"Warning: {message}", file=sys.stderr)


def to_dict(obj: Any) -> Any:
    """Convert results (dataclasses, sets, enums) to JSON-ready values."""
    if hasattr(obj, "as_dict"):
        return obj.as_dict()
    if dataclasses.is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_dict(getattr(obj, f.name)) for f in dataclasses.fields(obj)}
    if isinstance(obj, (set, frozenset)):
        return sorted(to_dict(x) for x in obj)
    if isinstance(obj, (list, tuple)):
        return [to_dict(x) for x in obj]
    if isinstance(obj, dict):
        return {str(k): to_dict(v) for k, v in obj.items()}
    return obj


def output_json(data: Any):
    """Output data as JSON."""
    print(json.dumps(to_dict(data), indent=2, default=str))


def read_source(path: Optional[str]) -> str:
    """Text of a process file; `-` or no path reads stdin."""
    if path is None or path == "-":
        return sys.stdin.read()
    file = Path(path)
    if not file.is_file():
        raise InputError(f"no such file: {path}")
    return file.read_text(encoding="utf-8")


def language_header(text: str) -> Optional[str]:
    """The `-- lang: L[...]` comment of a source, if any."""
    m = _LANG_HEADER.search(text)
    return m.group(1) if m else None


def corpus_names() -> list[str]:
    """Encodings that ship a corpus."""
    root = resources.files(CORPUS_PACKAGE)
    return sorted(entry.name for entry in root.iterdir() if entry.is_dir() and not entry.name.startswith("_"))


def load_corpus(encoding: Optional[str] = None, directory: Optional[str] = None) -> list[tuple[str, str]]:
    """(name, text) pairs, sorted by name, from a directory or the bundled corpus of an encoding."""
    if directory is not None:
        root = Path(directory)
        if not root.is_dir():
            raise InputError(f"no such corpus directory: {directory}")
        entries = [(f.stem, f.read_text(encoding="utf-8")) for f in root.glob(f"*{CORPUS_SUFFIX}")]
    else:
        root = resources.files(CORPUS_PACKAGE).joinpath(encoding or "")
        if not encoding or not root.is_dir():
            available = ", ".join(corpus_names())
            raise InputError(f"no bundled corpus for {encoding!r} (available: {available})")
        entries = [
            (Path(f.name).stem, f.read_text(encoding="utf-8"))
            for f in root.iterdir()
            if f.name.endswith(CORPUS_SUFFIX)
        ]
    if not entries:
        raise InputError(f"corpus {directory or encoding} is empty")
    return sorted(entries)
