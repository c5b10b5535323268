"""
The 48 languages and per-language validation.

A language is a FeatureVector over five axes, rendered `L[A,M,D,NO,B]`:

    synchronism   A (async)   S (sync)
    arity         M (monadic) P (polyadic)
    medium        D (dataspace) C (channel)
    matching      NO  NM  I
    coordination  B (binary)  J (joining)

Each axis is ordered (A<=S, M<=P, D<=C, NO<=NM<=I, B<=J); feature_leq is the
pointwise order. Filters may use `-` as a wildcard: `L[-,M,-,-,B]`.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass
from enum import StrEnum
from typing import Iterator

from joinbench.syntax import (
    Cond,
    Hole,
    InputAtom,
    Join,
    Null,
    Ok,
    Output,
    Par,
    Process,
    Repl,
    Restrict,
    atom_binders,
)
from joinbench.terms import Matching, Name, Term, well_formed_pattern


class LanguageError(ValueError):
    """Unparsable language name or filter."""


class Synchronism(StrEnum):
    A = "A"
    S = "S"


class Arity(StrEnum):
    M = "M"
    P = "P"


class Medium(StrEnum):
    D = "D"
    C = "C"


class Coordination(StrEnum):
    B = "B"
    J = "J"


AXES = (Synchronism, Arity, Medium, Matching, Coordination)


@dataclass(frozen=True, order=True)
class FeatureVector:
    synchronism: Synchronism
    arity: Arity
    medium: Medium
    matching: Matching
    coordination: Coordination

    def __str__(self) -> str:
        return "L[" + ",".join(v.value for v in self.features) + "]"

    @property
    def features(self) -> tuple:
        return (self.synchronism, self.arity, self.medium, self.matching, self.coordination)

    @property
    def is_sync(self) -> bool:
        return self.synchronism is Synchronism.S

    @property
    def is_channel(self) -> bool:
        return self.medium is Medium.C

    @property
    def is_joining(self) -> bool:
        return self.coordination is Coordination.J

    def replace(self, **changes) -> FeatureVector:
        values = dict(zip(("synchronism", "arity", "medium", "matching", "coordination"), self.features))
        values.update(changes)
        return FeatureVector(**values)

    @classmethod
    def parse(cls, text: str) -> FeatureVector:
        fields = _split(text)
        if any(f is None for f in fields):
            raise LanguageError(f"wildcard not allowed here: {text}")
        return cls(*fields)


_LANG_RE = re.compile(r"^\s*L\s*\[([^\]]*)\]\s*$")


def _split(text: str) -> list:
    m = _LANG_RE.match(text)
    if not m:
        raise LanguageError(f"expected L[sync,arity,medium,matching,coordination], got {text!r}")
    parts = [p.strip() for p in m.group(1).split(",")]
    if len(parts) != len(AXES):
        raise LanguageError(f"expected 5 features in {text!r}, got {len(parts)}")
    fields = []
    for part, axis in zip(parts, AXES):
        if part == "-":
            fields.append(None)
            continue
        try:
            fields.append(axis(part))
        except ValueError:
            allowed = "/".join(v.value for v in axis)
            raise LanguageError(f"bad feature {part!r} in {text!r} (expected {allowed} or -)") from None
    return fields


ALL_LANGUAGES: tuple[FeatureVector, ...] = tuple(
    FeatureVector(*combo) for combo in itertools.product(*AXES)
)


def languages_matching(pattern: str) -> list[FeatureVector]:
    """Languages selected by a filter such as `L[-,M,-,-,B]`."""
    fields = _split(pattern)
    return [
        lang
        for lang in ALL_LANGUAGES
        if all(want is None or want is have for want, have in zip(fields, lang.features))
    ]


_RANK = {
    Synchronism.A: 0, Synchronism.S: 1,
    Arity.M: 0, Arity.P: 1,
    Medium.D: 0, Medium.C: 1,
    Matching.NO: 0, Matching.NM: 1, Matching.I: 2,
    Coordination.B: 0, Coordination.J: 1,
}


def feature_leq(l1: FeatureVector, l2: FeatureVector) -> bool:
    return all(_RANK[a] <= _RANK[b] for a, b in zip(l1.features, l2.features))


# --- Validation ---


@dataclass(frozen=True)
class Violation:
    path: str
    rule: str
    message: str

    def __str__(self) -> str:
        return f"{self.path or '.'}: [{self.rule}] {self.message}"


def validate_process(p: Process, lang: FeatureVector) -> list[Violation]:
    """Every way p falls outside the grammar of lang; [] iff p is in it."""
    out: list[Violation] = []
    _validate(p, lang, "", out)
    return out


def _validate(p: Process, lang: FeatureVector, path: str, out: list[Violation]) -> None:
    def report(rule: str, message: str, where: str = path):
        out.append(Violation(where, rule, message))

    match p:
        case Null() | Ok():
            return
        case Hole(label):
            report("hole", f"context hole [[{label}]] is not a process")
        case Output(subject, args, cont):
            here = f"{path}/out"
            if lang.is_sync and cont is None:
                report("sync-output", "synchronous output needs a continuation", here)
            if not lang.is_sync and cont is not None:
                report("async-output", "asynchronous output has a continuation", here)
            _check_subject(subject, lang, here, report)
            _check_arity(len(args), lang, here, report)
            if lang.matching is not Matching.I:
                for i, arg in enumerate(args):
                    if not isinstance(arg, Name):
                        report("name-args", "output arguments must be names outside intensional languages",
                               f"{here}/arg[{i}]")
            if cont is not None:
                _validate(cont, lang, f"{here}.cont", out)
        case Join(atoms, body):
            here = f"{path}/join"
            if not atoms:
                report("empty-join", "input with no atoms", here)
            if not lang.is_joining and len(atoms) > 1:
                report("binary-input", f"binary language input has {len(atoms)} atoms", here)
            binders = atom_binders(atoms)
            if len(set(binders)) != len(binders):
                report("well-formed-input", "binding names in one input must be pairwise distinct", here)
            for i, atom in enumerate(atoms):
                _check_atom(atom, lang, f"{here}/atom[{i}]", report)
            _validate(body, lang, f"{here}.body", out)
        case Restrict(_, body):
            _validate(body, lang, f"{path}/nu", out)
        case Par(left, right):
            _validate(left, lang, f"{path}/par.left", out)
            _validate(right, lang, f"{path}/par.right", out)
        case Cond(lhs, rhs, then, orelse):
            here = f"{path}/if"
            if lang.matching is not Matching.I:
                for side, term in (("lhs", lhs), ("rhs", rhs)):
                    if not isinstance(term, Name):
                        report("name-terms", "compound terms only exist in intensional languages",
                               f"{here}.{side}")
            _validate(then, lang, f"{here}.then", out)
            _validate(orelse, lang, f"{here}.else", out)
        case Repl(body):
            _validate(body, lang, f"{path}/repl", out)
        case _:
            report("unknown", f"not a process: {p!r}")


def _check_subject(subject: Term | None, lang: FeatureVector, where: str, report) -> None:
    if lang.is_channel:
        if subject is None:
            report("channel-subject", "channel language needs a channel subject", where)
        elif lang.matching is not Matching.I and not isinstance(subject, Name):
            report("name-subject", "channel subjects must be names outside intensional languages", where)
    elif subject is not None:
        report("dataspace-subject", "dataspace language has no channel subjects", where)


def _check_arity(n: int, lang: FeatureVector, where: str, report) -> None:
    if n == 0:
        report("empty-tuple", "argument sequences are nonempty", where)
    elif lang.arity is Arity.M and n != 1:
        report("monadic", f"monadic language carries 1 argument, got {n}", where)


def _check_atom(atom: InputAtom, lang: FeatureVector, where: str, report) -> None:
    _check_subject(atom.subject, lang, where, report)
    _check_arity(len(atom.patterns), lang, where, report)
    for i, pattern in enumerate(atom.patterns):
        if not well_formed_pattern(pattern, lang.matching):
            report("pattern-grade", f"pattern {pattern} not allowed at grade {lang.matching}",
                   f"{where}/pat[{i}]")


def accepting_languages(p: Process) -> Iterator[FeatureVector]:
    for lang in ALL_LANGUAGES:
        if not validate_process(p, lang):
            yield lang


def combined_arity(p: Process) -> int:
    """Largest total pattern count over the atoms of any single input in p."""
    match p:
        case Join(atoms, body):
            return max(sum(len(a.patterns) for a in atoms), combined_arity(body))
        case Output(_, _, cont) if cont is not None:
            return combined_arity(cont)
        case Restrict(_, body) | Repl(body):
            return combined_arity(body)
        case Par(left, right) | Cond(_, _, left, right):
            return max(combined_arity(left), combined_arity(right))
    return 0
