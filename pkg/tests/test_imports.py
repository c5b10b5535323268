"""Smoke tests: every module imports and every entry point resolves.

cli.py imports most modules lazily inside its cmd_* handlers, so a broken
import in semantics or repro would only show up when someone ran that
command. Importing everything here keeps that from shipping silently.
"""

import importlib

import pytest

MODULES = [
    "joinbench.cli",
    "joinbench.common",
    "joinbench.config",
    "joinbench.encodings",
    "joinbench.language",
    "joinbench.matching",
    "joinbench.repro",
    "joinbench.semantics",
    "joinbench.syntax",
    "joinbench.terms",
    "joinbench.validator",
]


@pytest.mark.parametrize("module", MODULES)
def test_module_imports(module):
    importlib.import_module(module)


def test_entry_points_resolve():
    """The function pyproject.toml names as the console script must exist."""
    from joinbench import cli

    assert callable(cli.main)
    assert callable(cli.run)


def test_every_command_has_a_handler():
    from joinbench import cli

    parser = cli.build_parser()
    subparsers = next(a for a in parser._actions if a.dest == "command")
    assert set(subparsers.choices) == set(cli.COMMANDS)


def test_bundled_corpus_is_packaged():
    from joinbench.common import corpus_names

    assert {"leq", "naive-join", "sync-async", "sync-async-binary"} <= set(corpus_names())
