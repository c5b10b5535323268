"""
Process AST, parser and printer.

Grammar (ASCII):

    P    ::= "0" | "ok" | OUT | JOIN | "(nu" name ("," name)* ")" P
           | P "|" P | "if" T "=" T "then" P ["else" P] | "!" P | "(" P ")"
           | "[[" n "]]"                         (context hole)
    OUT  ::= [T] "<" T ("," T)* ">" ["." P]
    JOIN ::= ATOM "." P | ATOM ">>" P | "(" ATOM ("|" ATOM)+ ")" ">>" P
    ATOM ::= [T] "(" PAT ("," PAT)* ")"
    T    ::= name | T "*" T | "(" T ")"
    PAT  ::= name | "#" name | PAT "*" PAT | "(" PAT ")"

`*` binds tightest, then the prefixes (`.`, `>>`, `!`, `(nu a)`, `if`), then `|`.
Comments run from `--` to the end of the line.

Usage:
    from joinbench.syntax import parse, print_process

    p = parse("(m(x) | n(y)) >> x<y>")
    print_process(p)
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cache, lru_cache
from typing import Callable, Iterator, Optional, Union

from lark import Lark, Transformer, v_args
from lark.exceptions import UnexpectedEOF, UnexpectedInput, VisitError

from joinbench.terms import (
    Bind,
    Compound,
    Name,
    PCompound,
    Pattern,
    Protect,
    Term,
    binder_list,
    format_pattern,
    format_term,
    free_names as term_free_names,
    leaves,
    name_from_text,
)


class ParseError(ValueError):
    """Syntax error with position and the terminals that would have been accepted."""

    def __init__(self, message: str, line: int = 0, column: int = 0, expected=()):
        self.line = line
        self.column = column
        self.expected = frozenset(expected)
        where = f"line {line}, column {column}: " if line else ""
        super().__init__(f"{where}{message}")


# --- AST ---


@dataclass(frozen=True)
class Null:
    pass


@dataclass(frozen=True)
class Ok:
    pass


@dataclass(frozen=True)
class Output:
    subject: Optional[Term]
    args: tuple[Term, ...]
    cont: Optional[Process] = None


@dataclass(frozen=True)
class InputAtom:
    subject: Optional[Term]
    patterns: tuple[Pattern, ...]


@dataclass(frozen=True)
class Join:
    atoms: tuple[InputAtom, ...]
    body: Process


@dataclass(frozen=True)
class Restrict:
    name: Name
    body: Process


@dataclass(frozen=True)
class Par:
    left: Process
    right: Process


@dataclass(frozen=True)
class Cond:
    lhs: Term
    rhs: Term
    then: Process
    orelse: Process = Null()


@dataclass(frozen=True)
class Repl:
    body: Process


@dataclass(frozen=True)
class Hole:
    """Opaque context hole `[[n]]`; never valid in a language."""

    label: int


Process = Union[Null, Ok, Output, Join, Restrict, Par, Cond, Repl, Hole]

NULL = Null()
OK = Ok()


def par(*procs: Process) -> Process:
    """Left-associated parallel composition; par() is 0."""
    if not procs:
        return NULL
    out = procs[0]
    for p in procs[1:]:
        out = Par(out, p)
    return out


def restrict(names, body: Process) -> Process:
    for name in reversed(list(names)):
        body = Restrict(name, body)
    return body


def par_components(p: Process) -> Iterator[Process]:
    if isinstance(p, Par):
        yield from par_components(p.left)
        yield from par_components(p.right)
    else:
        yield p


def atom_binders(atoms) -> list[Name]:
    return [b for atom in atoms for pat in atom.patterns for b in binder_list(pat)]


# --- Names ---


@lru_cache(maxsize=1 << 16)
def free_names(p: Process) -> frozenset[Name]:
    match p:
        case Null() | Ok() | Hole():
            return frozenset()
        case Output(subject, args, cont):
            out = set().union(*(term_free_names(a) for a in args))
            if subject is not None:
                out |= term_free_names(subject)
            if cont is not None:
                out |= free_names(cont)
            return frozenset(out)
        case Join(atoms, body):
            out = set()
            for atom in atoms:
                if atom.subject is not None:
                    out |= term_free_names(atom.subject)
                for pat in atom.patterns:
                    out |= term_free_names(pat)
            return frozenset(out | (free_names(body) - set(atom_binders(atoms))))
        case Restrict(name, body):
            return free_names(body) - {name}
        case Par(left, right):
            return free_names(left) | free_names(right)
        case Cond(lhs, rhs, then, orelse):
            return term_free_names(lhs) | term_free_names(rhs) | free_names(then) | free_names(orelse)
        case Repl(body):
            return free_names(body)
    raise TypeError(f"not a process: {p!r}")


def all_names(p: Process) -> frozenset[Name]:
    """Every name occurring anywhere in p, bound or free."""
    return frozenset(names_in_order(p))


def names_in_order(p: Process) -> Iterator[Name]:
    """Name occurrences in printing order."""
    match p:
        case Output(subject, args, cont):
            if subject is not None:
                yield from leaves(subject)
            for a in args:
                yield from leaves(a)
            if cont is not None:
                yield from names_in_order(cont)
        case Join(atoms, body):
            for atom in atoms:
                if atom.subject is not None:
                    yield from leaves(atom.subject)
                for pat in atom.patterns:
                    for leaf in leaves(pat):
                        yield leaf.name
            yield from names_in_order(body)
        case Restrict(name, body):
            yield name
            yield from names_in_order(body)
        case Par(left, right):
            yield from names_in_order(left)
            yield from names_in_order(right)
        case Cond(lhs, rhs, then, orelse):
            yield from leaves(lhs)
            yield from leaves(rhs)
            yield from names_in_order(then)
            yield from names_in_order(orelse)
        case Repl(body):
            yield from names_in_order(body)


def size(p: Process) -> int:
    match p:
        case Output(_, _, cont):
            return 1 + (size(cont) if cont is not None else 0)
        case Join(_, body) | Restrict(_, body) | Repl(body):
            return 1 + size(body)
        case Par(left, right) | Cond(_, _, left, right):
            return 1 + size(left) + size(right)
    return 1


# --- Printer ---

NameFmt = Callable[[Name], str]


def print_process(p: Process, name_fmt: NameFmt = str) -> str:
    """Canonical text of p with minimal parentheses; parse(print_process(p)) == p."""
    return _par_level(p, name_fmt)


def _par_level(p: Process, fmt: NameFmt) -> str:
    if isinstance(p, Par):
        return f"{_par_level(p.left, fmt)} | {_prefix_level(p.right, fmt)}"
    return _prefix_level(p, fmt)


def _prefix_level(p: Process, fmt: NameFmt) -> str:
    match p:
        case Null():
            return "0"
        case Ok():
            return "ok"
        case Hole(label):
            return f"[[{label}]]"
        case Par():
            return f"({_par_level(p, fmt)})"
        case Output(subject, args, cont):
            head = _subject(subject, fmt) + "<" + ", ".join(format_term(a, fmt) for a in args) + ">"
            if cont is None:
                return head
            return f"{head}.{_prefix_level(cont, fmt)}"
        case Join(atoms, body):
            if len(atoms) == 1:
                return f"{_atom(atoms[0], fmt)}.{_prefix_level(body, fmt)}"
            inner = " | ".join(_atom(a, fmt) for a in atoms)
            return f"({inner}) >> {_prefix_level(body, fmt)}"
        case Restrict(name, body):
            return f"(nu {fmt(name)}){_prefix_level(body, fmt)}"
        case Cond(lhs, rhs, then, orelse):
            then_text = _prefix_level(then, fmt)
            if _ends_in_cond(then):
                then_text = f"({then_text})"
            text = f"if {format_term(lhs, fmt)} = {format_term(rhs, fmt)} then {then_text}"
            if not isinstance(orelse, Null):
                text += f" else {_prefix_level(orelse, fmt)}"
            return text
        case Repl(body):
            return f"!{_prefix_level(body, fmt)}"
    raise TypeError(f"not a process: {p!r}")


def _ends_in_cond(p: Process) -> bool:
    """True when p's text ends in an `if`; as a then-branch it would fight over the next `else`."""
    match p:
        case Cond():
            return True
        case Output(_, _, cont) if cont is not None:
            return _ends_in_cond(cont)
        case Join(_, body) | Restrict(_, body) | Repl(body):
            return _ends_in_cond(body)
    return False


def _subject(subject: Optional[Term], fmt: NameFmt) -> str:
    if subject is None:
        return ""
    return format_term(subject, fmt)


def _atom(atom: InputAtom, fmt: NameFmt) -> str:
    pats = ", ".join(format_pattern(p, fmt) for p in atom.patterns)
    return f"{_subject(atom.subject, fmt)}({pats})"


# --- Parser ---

GRAMMAR = r"""
?start: proc

?proc: prefix
     | proc "|" prefix                               -> par

?prefix: "0"                                         -> null
       | "ok"                                        -> ok
       | output
       | join
       | "(" "nu" name ("," name)* ")" prefix        -> restrict
       | "if" term "=" term "then" prefix ("else" prefix)?  -> cond
       | "!" prefix                                  -> repl
       | "[[" INT "]]"                               -> hole
       | "(" proc ")"

output: [term] "<" terms ">" ["." prefix]

join: atom "." prefix                                -> join_one
    | atom ">>" prefix                               -> join_one
    | "(" atom ("|" atom)+ ")" ">>" prefix           -> join_many

atom: [term] "(" pats ")"

terms: term ("," term)*
pats: pat ("," pat)*

?term: tatom
     | term "*" tatom                                -> compound
?tatom: name
      | "(" term ")"

?pat: patom
    | pat "*" patom                                  -> pcompound
?patom: name                                         -> bind
      | "#" name                                     -> protect
      | "(" pat ")"

name: NAME
NAME: /(?!(nu|if|then|else|ok)(?![A-Za-z0-9_'$]))\$?[A-Za-z_][A-Za-z0-9_]*('[0-9]+)?/
COMMENT: /--[^\n]*/

%import common.INT
%import common.WS
%ignore WS
%ignore COMMENT
"""


@v_args(inline=True)
class _ToAst(Transformer):
    def name(self, token):
        return name_from_text(str(token))

    def compound(self, left, right):
        return Compound(left, right)

    def bind(self, name):
        return Bind(name)

    def protect(self, name):
        return Protect(name)

    def pcompound(self, left, right):
        return PCompound(left, right)

    def terms(self, *items):
        return tuple(items)

    def pats(self, *items):
        return tuple(items)

    def atom(self, subject, patterns):
        return InputAtom(subject, patterns)

    def output(self, subject, args, cont):
        return Output(subject, args, cont)

    def null(self):
        return NULL

    def ok(self):
        return OK

    def hole(self, label):
        return Hole(int(label))

    def restrict(self, *items):
        *names, body = items
        return restrict(names, body)

    def cond(self, lhs, rhs, then, orelse=None):
        return Cond(lhs, rhs, then, NULL if orelse is None else orelse)

    def repl(self, body):
        return Repl(body)

    def par(self, left, right):
        return Par(left, right)

    @v_args(meta=True)
    def join_one(self, meta, children):
        atom, body = children
        return _checked_join(meta, (atom,), body)

    @v_args(meta=True)
    def join_many(self, meta, children):
        *atoms, body = children
        return _checked_join(meta, tuple(atoms), body)


def _checked_join(meta, atoms, body) -> Join:
    seen = set()
    for binder in atom_binders(atoms):
        if binder in seen:
            raise ParseError(
                f"binder {binder} occurs more than once in one input",
                getattr(meta, "line", 0),
                getattr(meta, "column", 0),
            )
        seen.add(binder)
    return Join(atoms, body)


@cache
def _parser(start: str) -> Lark:
    return Lark(GRAMMAR, start=start, parser="earley", propagate_positions=True, maybe_placeholders=True)


def _run(text: str, start: str):
    try:
        tree = _parser(start).parse(text)
        return _ToAst().transform(tree)
    except VisitError as e:
        if isinstance(e.orig_exc, ParseError):
            raise e.orig_exc from None
        raise
    except UnexpectedInput as e:
        expected = set(getattr(e, "allowed", None) or getattr(e, "expected", None) or ())
        line, column = getattr(e, "line", -1), getattr(e, "column", -1)
        if line is None or line < 1:
            # end of input
            lines = text.split("\n")
            line, column = len(lines), len(lines[-1]) + 1
        message = "unexpected end of input" if isinstance(e, UnexpectedEOF) else "unexpected input"
        if expected:
            message += f"; expected one of {', '.join(sorted(expected))}"
        raise ParseError(message, line, column, expected) from None


def parse(text: str) -> Process:
    return _run(text, "start")


def parse_term(text: str) -> Term:
    return _run(text, "term")


def parse_pattern(text: str) -> Pattern:
    return _run(text, "pat")


def parse_terms(text: str) -> tuple[Term, ...]:
    return _run(text, "terms")


def parse_patterns(text: str) -> tuple[Pattern, ...]:
    return _run(text, "pats")
