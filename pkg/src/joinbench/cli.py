#!/usr/bin/env python3
"""
joinbench - a workbench for the 48 process languages.

Usage:
    joinbench <command> [options]

Commands:
    parse FILE          Reprint a process canonically (--stats for sizes and accepting languages)
    validate FILE       Check a process against a language (--lang, wildcards allowed)
    match TERMS PATS    Poly-match comma-separated terms against patterns
    step FILE           List redexes of a process (--redex N to take one step)
    explore FILE        Explore reachable states (--graph-out FILE for the state graph)
    encode FILE         Translate between languages (--method, --from, --to)
    check               Run the validity checks of an encoding over a corpus
    repro ID            Run a bundled reproduction case (--list to see them)
    languages [FILTER]  List the 48 languages, e.g. 'L[-,M,-,-,B]'
    doctor              Check installation, configuration and bundled data
    version             Show version

Languages are written L[sync,arity,medium,matching,coordination], for example
L[S,M,C,NO,J]. A process file may name its language on a comment line:
    -- lang: L[A,M,D,NO,B]

Exploration bounds come from --max-states/--max-depth/--max-repl/--jobs, then
JOINBENCH_* environment variables, then ~/.config/joinbench/config.toml.

Exit codes: 0 ok, 1 a check failed, 2 a bound was hit, 64 bad usage or input.
"""

import argparse
import shutil
import sys
from typing import Optional

from joinbench.common import (
    EXIT_FAIL,
    EXIT_OK,
    EXIT_TRUNCATED,
    EXIT_USAGE,
    InputError,
    info,
    language_header,
    load_corpus,
    output_json,
    read_source,
    warn,
)


class _Parser(argparse.ArgumentParser):
    """Usage errors exit 64 rather than argparse's 2, which means truncation here."""

    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"Error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


def _version() -> str:
    from importlib.metadata import PackageNotFoundError, version as pkg_version

    try:
        return pkg_version("joinbench")
    except PackageNotFoundError:
        return "dev"


# --- Input helpers ---


def _language(args, text: Optional[str] = None, required: bool = True):
    """--lang, else the file's `-- lang:` header."""
    from joinbench.language import FeatureVector

    spec = getattr(args, "lang", None) or (language_header(text) if text else None)
    if spec is None:
        if required:
            raise InputError("no language: pass --lang L[...] or add a '-- lang: L[...]' line")
        return None
    return FeatureVector.parse(spec)


def _load(args, validate: bool = True):
    """(text, process, language) for a FILE argument, validated when asked."""
    from joinbench.language import validate_process
    from joinbench.syntax import parse

    text = read_source(args.file)
    process = parse(text)
    lang = _language(args, text)
    if validate:
        problems = validate_process(process, lang)
        if problems:
            raise InputError(
                f"process is not in {lang}:\n" + "\n".join(f"  {v}" for v in problems)
            )
    return text, process, lang


def _settings(args):
    from joinbench.config import load_settings

    return load_settings(
        max_states=getattr(args, "max_states", None),
        max_depth=getattr(args, "max_depth", None),
        max_repl=getattr(args, "max_repl", None),
        jobs=getattr(args, "jobs", None),
    )


# --- Commands ---


def cmd_parse(args):
    """Reprint a process canonically."""
    from joinbench.language import accepting_languages, combined_arity
    from joinbench.syntax import free_names, parse, print_process, size

    text = read_source(args.file)
    process = parse(text)
    printed = print_process(process)
    if not (args.stats or args.json):
        print(printed)
        return EXIT_OK

    stats = {
        "process": printed,
        "size": size(process),
        "free_names": sorted(str(n) for n in free_names(process)),
        "combined_arity": combined_arity(process),
        "languages": [str(lang) for lang in accepting_languages(process)],
    }
    if args.json:
        output_json(stats)
    else:
        print(printed)
        print(f"size:           {stats['size']}")
        print(f"free names:     {', '.join(stats['free_names']) or '-'}")
        print(f"combined arity: {stats['combined_arity']}")
        print(f"languages:      {len(stats['languages'])} of 48")
        for lang in stats["languages"]:
            print(f"  {lang}")
    return EXIT_OK


def cmd_validate(args):
    """Validate against one language, or every language a wildcard selects."""
    from joinbench.language import languages_matching, validate_process
    from joinbench.syntax import parse

    text = read_source(args.file)
    process = parse(text)
    pattern = args.lang or language_header(text) or "L[-,-,-,-,-]"
    languages = languages_matching(pattern)

    accepted = 0
    results = []
    for lang in languages:
        problems = validate_process(process, lang)
        accepted += not problems
        results.append({"language": str(lang), "valid": not problems, "violations": [str(v) for v in problems]})

    if args.json:
        output_json(results)
    else:
        for r in results:
            print(f"{r['language']:<16} {'valid' if r['valid'] else 'invalid'}")
            for v in r["violations"]:
                print(f"    {v}")
        if len(languages) > 1:
            print(f"\n{accepted}/{len(languages)} languages accept this process.")
    return EXIT_OK if accepted else EXIT_FAIL


def cmd_match(args):
    """Poly-match terms against patterns."""
    from joinbench.matching import poly_match
    from joinbench.syntax import parse_patterns, parse_terms

    terms = parse_terms(args.terms)
    patterns = parse_patterns(args.patterns)
    sigma = poly_match(terms, patterns)
    if args.json:
        output_json({"defined": sigma is not None, "substitution": None if sigma is None else str(sigma)})
    else:
        print("UNDEFINED" if sigma is None else str(sigma))
    return EXIT_OK if sigma is not None else EXIT_FAIL


def cmd_step(args):
    """List redexes; with --redex, take that step."""
    from joinbench.semantics import enumerate_redexes, normalize, step

    _, process, lang = _load(args)
    settings = _settings(args)
    state = normalize(process)
    redexes = enumerate_redexes(state, lang, settings.max_repl)

    if args.redex is None:
        rows = [
            {
                "index": i,
                "degree": r.degree,
                "join": str(r.join_index),
                "outputs": [str(o) for o in r.output_indices],
                "sigma": str(r.substitution),
            }
            for i, r in enumerate(redexes)
        ]
        if args.json:
            output_json({"state": str(state), "redexes": rows})
        else:
            print(f"state: {state}")
            if not redexes:
                print("no redexes")
            for i, r in enumerate(redexes):
                print(f"[{i}] {r}")
        return EXIT_OK

    if not 0 <= args.redex < len(redexes):
        raise InputError(f"--redex {args.redex} out of range: state has {len(redexes)} redexes")
    redex = redexes[args.redex]
    after = step(state, redex)
    if args.json:
        output_json({"state": str(state), "redex": str(redex), "result": str(after)})
    else:
        print(after)
    return EXIT_OK


def cmd_explore(args):
    """Explore reachable states within bounds."""
    from joinbench.semantics import dump_graph, explore, observations

    _, process, lang = _load(args)
    settings = _settings(args)
    bounds = settings.bounds()
    graph = explore(
        process, lang, bounds, jobs=settings.jobs, progress=info if args.verbose else None
    )
    profile = observations(graph)

    if args.graph_out:
        dump = dump_graph(graph)
        if args.graph_out == "-":
            sys.stdout.write(dump)
        else:
            with open(args.graph_out, "w", encoding="utf-8") as fh:
                fh.write(dump)
            info(f"graph written to {args.graph_out}")

    if args.json:
        output_json({"language": str(lang), "bounds": str(bounds), "profile": profile})
    elif args.graph_out != "-":
        print(f"language:   {lang}")
        for key, value in profile.as_dict().items():
            if isinstance(value, list):
                value = ", ".join(value) or "-"
            print(f"{key + ':':<32} {value}")

    if graph.bound_hit:
        what = "max_states" if graph.truncated else "max_depth"
        warn(f"exploration stopped at {what} ({bounds}); results are partial")
        return EXIT_TRUNCATED
    return EXIT_OK


def cmd_encode(args):
    """Translate a process between languages."""
    from joinbench.encodings import get_encoding
    from joinbench.language import FeatureVector
    from joinbench.syntax import parse, print_process

    text = read_source(args.file)
    process = parse(text)
    source = FeatureVector.parse(args.source) if args.source else None
    if source is None and args.method == "leq":
        source = _language(args, text, required=False)
    target = FeatureVector.parse(args.target) if args.target else None
    spec = get_encoding(args.method, source, target)
    print(print_process(spec.translate(process)))
    return EXIT_OK


def _check_corpus(args, spec):
    """Parse the corpus and keep the entries in the encoding's source language."""
    from joinbench.language import validate_process
    from joinbench.syntax import parse

    method = args.encoding
    entries = load_corpus(None if args.corpus else method, args.corpus)
    corpus = []
    for name, text in entries:
        process = parse(text)
        problems = validate_process(process, spec.source)
        if problems:
            if method == "leq":
                info(f"skipping {name}: not in {spec.source}")
                continue
            raise InputError(f"corpus entry {name} is not in {spec.source}: {problems[0]}")
        corpus.append((name, process))
    if not corpus:
        raise InputError(f"no corpus entry is in {spec.source}")
    return corpus


def cmd_check(args):
    """Run every validity check of an encoding over a corpus."""
    from joinbench.encodings import get_encoding
    from joinbench.language import FeatureVector
    from joinbench.validator import Status, run_all, summarize

    source = FeatureVector.parse(args.source) if args.source else None
    target = FeatureVector.parse(args.target) if args.target else None
    spec = get_encoding(args.encoding, source, target)
    settings = _settings(args)
    corpus = _check_corpus(args, spec)
    info(f"checking {spec} on {len(corpus)} processes ({settings.bounds()}, jobs={settings.jobs})")

    verdicts = run_all(
        spec, corpus, settings.bounds(), jobs=settings.jobs, progress=info if args.verbose else None
    )
    table = summarize(verdicts)

    if args.json:
        output_json({"encoding": str(spec), "verdicts": verdicts, "summary": table})
    else:
        for v in verdicts:
            print(v)
            if v.status is Status.FAIL:
                for line in v.witness:
                    print(f"    {line}")
        print(f"\n{'criterion':<27} {'pass':>5} {'fail':>5} {'inconclusive':>13}")
        for criterion, row in table.items():
            print(f"{criterion:<27} {row['pass']:>5} {row['fail']:>5} {row['inconclusive']:>13}")

    statuses = {v.status for v in verdicts}
    if Status.FAIL in statuses:
        return EXIT_FAIL
    if Status.INCONCLUSIVE in statuses:
        return EXIT_TRUNCATED
    return EXIT_OK


def cmd_repro(args):
    """Run a bundled reproduction case."""
    from joinbench.repro import CASES, get_case

    if args.list or not args.case:
        for case in CASES.values():
            print(f"{case.id:<24} {case.language:<16} {case.summary}")
        return EXIT_OK

    case = get_case(args.case)
    if case is None:
        raise InputError(f"unknown repro case {args.case!r} (available: {', '.join(CASES)})")
    settings = _settings(args)
    report = case.run(settings.bounds(), k=args.k, jobs=settings.jobs)

    if args.json:
        output_json(report)
    else:
        print(f"{case.id} in {case.language}: {case.summary}\n")
        for line in report.lines:
            print(line)
        print()
        for check in report.checks:
            print(check)
        print(f"\n{'PASS' if report.passed else 'FAIL'}")
    if report.passed:
        return EXIT_OK
    return EXIT_TRUNCATED if report.truncated else EXIT_FAIL


def cmd_languages(args):
    """List languages, optionally filtered."""
    from joinbench.language import ALL_LANGUAGES, languages_matching

    langs = languages_matching(args.filter) if args.filter else list(ALL_LANGUAGES)
    for lang in langs:
        print(lang)
    return EXIT_OK


def cmd_doctor(args):
    """Check installation, configuration and bundled data."""
    checks_passed = 0
    checks_failed = 0

    def check(name: str, passed: bool, detail: str = ""):
        nonlocal checks_passed, checks_failed
        if passed:
            checks_passed += 1
            print(f"  ✓ {name}")
        else:
            checks_failed += 1
            print(f"  ✗ {name}")
            if detail:
                print(f"    → {detail}")

    print("Checking joinbench setup...\n")

    # Python version (pyproject.toml requires-python is the enforcement point)
    print("[Python]")
    py_version = sys.version_info
    check(
        f"Python {py_version.major}.{py_version.minor}.{py_version.micro}",
        py_version >= (3, 11),
        "Requires Python 3.11+" if py_version < (3, 11) else ""
    )

    print("\n[Dependencies]")
    for pkg in ["lark"]:
        try:
            __import__(pkg)
            check(pkg, True)
        except ImportError:
            check(pkg, False, f"pip install {pkg}")

    print("\n[Installation]")
    shim = shutil.which("joinbench")
    check(
        "joinbench on PATH",
        shim is not None,
        "Run: uv tool install <path-to-clone>" if not shim else ""
    )

    print("\n[Configuration]")
    from joinbench.config import config_path

    settings = _settings(args)
    path = config_path()
    check(f"config file {path}", True if not path.exists() else settings.config_file is not None,
          "file exists but has no usable [bounds] table")
    for key in ("max_states", "max_depth", "max_repl", "jobs"):
        check(f"{key} = {getattr(settings, key)} ({settings.sources[key]})", True)

    print("\n[Bundled data]")
    from joinbench.common import corpus_names
    from joinbench.encodings import get_encoding
    from joinbench.language import FeatureVector, validate_process
    from joinbench.repro import CASES
    from joinbench.syntax import parse

    for case in CASES.values():
        try:
            problems = case.problems()
        except Exception as e:
            problems = [str(e)]
        check(f"repro {case.id}", not problems, "; ".join(problems[:2]))

    for encoding in corpus_names():
        bad = []
        entries = load_corpus(encoding)
        for name, text in entries:
            try:
                header = language_header(text)
                lang = FeatureVector.parse(header) if header else get_encoding(encoding).source
                if validate_process(parse(text), lang):
                    bad.append(name)
            except Exception as e:
                bad.append(f"{name} ({e})")
        check(f"corpus {encoding}: {len(entries)} processes", not bad, f"invalid: {', '.join(bad[:5])}")

    # Summary
    print(f"\n{'─' * 40}")
    total = checks_passed + checks_failed
    if checks_failed == 0:
        print(f"All {total} checks passed. Setup looks good!")
        return EXIT_OK
    print(f"{checks_passed}/{total} checks passed, {checks_failed} failed.")
    return EXIT_FAIL


def cmd_version(args):
    """Show version."""
    print(f"joinbench {_version()}")
    print(f"Python {sys.version_info.major}.{sys.version_info.minor}.{sys.version_info.micro}")
    return EXIT_OK


# --- Parser ---


def _add_lang(p):
    p.add_argument("--lang", help="Language, e.g. 'L[S,M,C,NO,J]' (default: the file's '-- lang:' line)")


def _add_bounds(p):
    p.add_argument("--max-states", type=int, help="Stop after this many states (default 20000)")
    p.add_argument("--max-depth", type=int, help="Stop at this BFS depth (default 200)")
    p.add_argument("--max-repl", type=int, help="Copies of each !P unfolded per step (default 3)")
    p.add_argument("--jobs", type=int, help="Worker threads; results are identical for any value (default 1)")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="joinbench",
        description="Workbench for the 48 process languages: parse, reduce, explore, encode, check",
        formatter_class=argparse.RawDescriptionHelpFormatter
    )
    parser.add_argument('--version', '-V', action='version', version=f'joinbench {_version()}')
    subparsers = parser.add_subparsers(dest="command", help="Command to run")

    p = subparsers.add_parser("parse", help="Reprint a process canonically")
    p.add_argument("file", nargs="?", help="Process file (default: stdin)")
    p.add_argument("--stats", action="store_true", help="Show size, free names, combined arity, languages")
    p.add_argument("--json", action="store_true", help="Output as JSON")

    p = subparsers.add_parser("validate", help="Check a process against languages")
    p.add_argument("file", nargs="?", help="Process file (default: stdin)")
    p.add_argument("--lang", help="Language or wildcard filter, e.g. 'L[-,M,-,-,B]' (default: all 48)")
    p.add_argument("--json", action="store_true", help="Output as JSON")

    p = subparsers.add_parser("match", help="Poly-match terms against patterns")
    p.add_argument("terms", help="Comma-separated terms, e.g. 'a * b, c'")
    p.add_argument("patterns", help="Comma-separated patterns, e.g. 'x * #b, y'")
    p.add_argument("--json", action="store_true", help="Output as JSON")

    p = subparsers.add_parser("step", help="List redexes or take one step")
    p.add_argument("file", nargs="?", help="Process file (default: stdin)")
    _add_lang(p)
    p.add_argument("--redex", type=int, help="Index of the redex to fire")
    p.add_argument("--max-repl", type=int, help="Copies of each !P unfolded (default 3)")
    p.add_argument("--json", action="store_true", help="Output as JSON")

    p = subparsers.add_parser("explore", help="Explore reachable states")
    p.add_argument("file", nargs="?", help="Process file (default: stdin)")
    _add_lang(p)
    _add_bounds(p)
    p.add_argument("--graph-out", help="Write the state graph to this file ('-' for stdout)")
    p.add_argument("--verbose", "-v", action="store_true", help="Progress per BFS level on stderr")
    p.add_argument("--json", action="store_true", help="Output as JSON")

    p = subparsers.add_parser("encode", help="Translate a process between languages")
    p.add_argument("file", nargs="?", help="Process file (default: stdin)")
    p.add_argument("--method", required=True,
                   choices=["leq", "sync-async", "sync-async-binary", "naive-join"], help="Encoding")
    p.add_argument("--from", dest="source", help="Source language (required for leq)")
    p.add_argument("--to", dest="target", help="Target language (required for leq)")

    p = subparsers.add_parser("check", help="Run the validity checks of an encoding")
    p.add_argument("--encoding", required=True,
                   choices=["leq", "sync-async", "sync-async-binary", "naive-join"], help="Encoding")
    p.add_argument("--corpus", help="Directory of .jb processes (default: the bundled corpus)")
    p.add_argument("--from", dest="source", help="Source language (required for leq)")
    p.add_argument("--to", dest="target", help="Target language (required for leq)")
    _add_bounds(p)
    p.add_argument("--verbose", "-v", action="store_true", help="Name each corpus entry on stderr")
    p.add_argument("--json", action="store_true", help="Output as JSON")

    p = subparsers.add_parser("repro", help="Run a bundled reproduction case")
    p.add_argument("case", nargs="?", help="Case id (see --list)")
    p.add_argument("--list", action="store_true", help="List the cases")
    p.add_argument("--k", type=int, help="Join size for thm1-degree (default 3)")
    _add_bounds(p)
    p.add_argument("--json", action="store_true", help="Output as JSON")

    p = subparsers.add_parser("languages", help="List languages")
    p.add_argument("filter", nargs="?", help="Wildcard filter, e.g. 'L[-,M,-,-,B]'")

    subparsers.add_parser("doctor", help="Check setup and bundled data")
    subparsers.add_parser("version", help="Show version")
    return parser


COMMANDS = {
    "parse": cmd_parse,
    "validate": cmd_validate,
    "match": cmd_match,
    "step": cmd_step,
    "explore": cmd_explore,
    "encode": cmd_encode,
    "check": cmd_check,
    "repro": cmd_repro,
    "languages": cmd_languages,
    "doctor": cmd_doctor,
    "version": cmd_version,
}


def run(argv=None) -> int:
    from joinbench.encodings import EncodingError
    from joinbench.language import LanguageError
    from joinbench.matching import SubstitutionClash
    from joinbench.syntax import ParseError
    from joinbench.terms import TermError

    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_USAGE

    if not args.command:
        parser.print_help()
        return EXIT_USAGE

    handler = COMMANDS[args.command]
    try:
        return handler(args) or EXIT_OK
    except (ParseError, InputError, LanguageError, TermError, EncodingError) as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except SubstitutionClash as e:
        print(f"Error: internal substitution clash: {e}", file=sys.stderr)
        return EXIT_FAIL
    except OSError as e:
        print(f"Error: {e}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
