"""
Translations between languages.

Every encoding is an EncodingSpec: a source and target language, a raw
structural transform, and the renaming policy that tells the validator how
a substitution on source names acts on target names.

    leq                 feature embedding L1 -> L2 for any L1 <= L2
    sync-async          L[S,M,C,NO,J] -> L[A,M,C,NO,J]
    sync-async-binary   L[S,M,C,NO,B] -> L[A,M,C,NO,B]
    naive-join          L[A,M,C,NO,J] -> L[A,M,C,NO,B]   (known invalid: can deadlock)

Names minted by a translation live in the reserved space (`$z3`, `$x3_2`,
`$k2`) and are numbered by a pre-order walk of the source, so output is
reproducible and no source name is ever captured.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Optional

from joinbench.language import (
    FeatureVector,
    Synchronism,
    Medium,
    feature_leq,
    validate_process,
)
from joinbench.syntax import (
    NULL,
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
    all_names,
    par,
    restrict,
)
from joinbench.terms import Bind, Name, Origin, reserved


class EncodingError(ValueError):
    """Source process outside an encoding's domain, or languages not ordered."""


def identity_policy(name: Name) -> tuple[Name, ...]:
    return (name,)


@dataclass(frozen=True)
class EncodingSpec:
    name: str
    source: FeatureVector
    target: FeatureVector
    transform: Callable[[Process], Process] = field(compare=False)
    rename_policy: Callable[[Name], tuple[Name, ...]] = field(default=identity_policy, compare=False)
    reserved_stems: frozenset[str] = frozenset()
    known_invalid: bool = False

    def __str__(self) -> str:
        return f"{self.name}: {self.source} -> {self.target}"

    def check_source(self, p: Process, allow_holes: bool = False) -> None:
        problems = [v for v in validate_process(p, self.source) if not (allow_holes and v.rule == "hole")]
        if problems:
            raise EncodingError(f"not a {self.source} process: {problems[0]}")
        if self.reserved_stems:
            clash = sorted(str(n) for n in all_names(p) if n.origin is Origin.RESERVED)
            if clash:
                raise EncodingError(f"source uses reserved names: {', '.join(clash)}")

    def translate(self, p: Process, allow_holes: bool = False) -> Process:
        self.check_source(p, allow_holes)
        out = self.transform(p)
        problems = [v for v in validate_process(out, self.target) if not (allow_holes and v.rule == "hole")]
        if problems:
            raise EncodingError(f"{self.name} produced a process outside {self.target}: {problems[0]}")
        return out


# --- Feature embedding ---


def embed_leq(p: Process, l1: FeatureVector, l2: FeatureVector) -> Process:
    """Embed a process of l1 into l2 >= l1."""
    spec = leq_encoding(l1, l2)
    return spec.translate(p)


def _embedder(l1: FeatureVector, l2: FeatureVector) -> Callable[[Process], Process]:
    add_cont = l1.synchronism is Synchronism.A and l2.synchronism is Synchronism.S
    add_channel = l1.medium is Medium.D and l2.medium is Medium.C

    def subject(s, arity: int):
        return reserved(f"k{arity}") if add_channel else s

    def go(p: Process) -> Process:
        match p:
            case Null() | Ok() | Hole():
                return p
            case Output(s, args, cont):
                if cont is not None:
                    cont = go(cont)
                elif add_cont:
                    cont = NULL
                return Output(subject(s, len(args)), args, cont)
            case Join(atoms, body):
                return Join(
                    tuple(InputAtom(subject(a.subject, len(a.patterns)), a.patterns) for a in atoms),
                    go(body),
                )
            case Restrict(name, body):
                return Restrict(name, go(body))
            case Par(left, right):
                return Par(go(left), go(right))
            case Cond(lhs, rhs, then, orelse):
                return Cond(lhs, rhs, go(then), go(orelse))
            case Repl(body):
                return Repl(go(body))
        raise TypeError(f"not a process: {p!r}")

    return go


def leq_encoding(l1: FeatureVector, l2: FeatureVector) -> EncodingSpec:
    if not feature_leq(l1, l2):
        raise EncodingError(f"{l1} is not below {l2}; no feature embedding")
    stems = frozenset({"k"}) if l1.medium is Medium.D and l2.medium is Medium.C else frozenset()
    return EncodingSpec("leq", l1, l2, _embedder(l1, l2), reserved_stems=stems)


# --- Synchronous to asynchronous ---


class _Clauses:
    """Pre-order numbering of output and input clauses."""

    def __init__(self):
        self._counter = itertools.count(1)

    def next(self) -> int:
        return next(self._counter)


def _sync_async(p: Process) -> Process:
    clauses = _Clauses()

    def go(p: Process) -> Process:
        match p:
            case Null() | Ok() | Hole():
                return p
            case Output(n, args, cont):
                # (nu z)(n<z> | z(x).(x<args> | [[cont]]))
                k = clauses.next()
                z, x = reserved(f"z{k}"), reserved(f"x{k}")
                rest = go(cont) if cont is not None else NULL
                reply = Join((InputAtom(z, (Bind(x),)),), par(Output(x, args), rest))
                return Restrict(z, Par(Output(n, (z,)), reply))
            case Join(atoms, body):
                # (nu x1..xi) (n1(z1) | .. | ni(zi)) >> (z1<x1> | .. | zi<xi> | (x1(a1) | .. | xi(ai)) >> [[Q]])
                k = clauses.next()
                suffix = (lambda j: f"{k}_{j}") if len(atoms) > 1 else (lambda j: f"{k}")
                xs = [reserved(f"x{suffix(j)}") for j in range(1, len(atoms) + 1)]
                zs = [reserved(f"z{suffix(j)}") for j in range(1, len(atoms) + 1)]
                requests = tuple(InputAtom(a.subject, (Bind(z),)) for a, z in zip(atoms, zs))
                answers = tuple(InputAtom(x, a.patterns) for a, x in zip(atoms, xs))
                inner = Join(answers, go(body))
                handshake = par(*(Output(z, (x,)) for z, x in zip(zs, xs)), inner)
                return restrict(xs, Join(requests, handshake))
            case Restrict(name, body):
                return Restrict(name, go(body))
            case Par(left, right):
                return Par(go(left), go(right))
            case Cond(lhs, rhs, then, orelse):
                return Cond(lhs, rhs, go(then), go(orelse))
            case Repl(body):
                return Repl(go(body))
        raise TypeError(f"not a process: {p!r}")

    return go(p)


SYNC_JOINING = FeatureVector.parse("L[S,M,C,NO,J]")
ASYNC_JOINING = FeatureVector.parse("L[A,M,C,NO,J]")
SYNC_BINARY = FeatureVector.parse("L[S,M,C,NO,B]")
ASYNC_BINARY = FeatureVector.parse("L[A,M,C,NO,B]")

SYNC_ASYNC = EncodingSpec(
    "sync-async", SYNC_JOINING, ASYNC_JOINING, _sync_async, reserved_stems=frozenset({"x", "z"})
)
SYNC_ASYNC_BINARY = EncodingSpec(
    "sync-async-binary", SYNC_BINARY, ASYNC_BINARY, _sync_async, reserved_stems=frozenset({"x", "z"})
)


def encode_sync_async_binary(p: Process) -> Process:
    return SYNC_ASYNC_BINARY.translate(p)


def encode_sync_async_joining(p: Process) -> Process:
    return SYNC_ASYNC.translate(p)


# --- Naive join flattening ---


def _flatten_joins(p: Process) -> Process:
    match p:
        case Null() | Ok() | Hole():
            return p
        case Output(n, args, cont):
            return Output(n, args, None if cont is None else _flatten_joins(cont))
        case Join(atoms, body):
            out = _flatten_joins(body)
            for atom in reversed(atoms):
                out = Join((atom,), out)
            return out
        case Restrict(name, body):
            return Restrict(name, _flatten_joins(body))
        case Par(left, right):
            return Par(_flatten_joins(left), _flatten_joins(right))
        case Cond(lhs, rhs, then, orelse):
            return Cond(lhs, rhs, _flatten_joins(then), _flatten_joins(orelse))
        case Repl(body):
            return Repl(_flatten_joins(body))
    raise TypeError(f"not a process: {p!r}")


NAIVE_JOIN = EncodingSpec("naive-join", ASYNC_JOINING, ASYNC_BINARY, _flatten_joins, known_invalid=True)


def encode_naive_join_flatten(p: Process) -> Process:
    return NAIVE_JOIN.translate(p)


# --- Registry ---

METHODS = ("leq", "sync-async", "sync-async-binary", "naive-join")

_FIXED = {spec.name: spec for spec in (SYNC_ASYNC, SYNC_ASYNC_BINARY, NAIVE_JOIN)}


def get_encoding(
    method: str, source: Optional[FeatureVector] = None, target: Optional[FeatureVector] = None
) -> EncodingSpec:
    """Look up an encoding; leq needs both languages, the others check any given ones."""
    if method == "leq":
        if source is None or target is None:
            raise EncodingError("leq needs --from and --to")
        return leq_encoding(source, target)
    spec = _FIXED.get(method)
    if spec is None:
        raise EncodingError(f"unknown encoding {method!r} (expected one of {', '.join(METHODS)})")
    if source is not None and source != spec.source:
        raise EncodingError(f"{method} translates from {spec.source}, not {source}")
    if target is not None and target != spec.target:
        raise EncodingError(f"{method} translates to {spec.target}, not {target}")
    return spec


def induced_renaming(spec: EncodingSpec, sigma) -> dict[Name, Name]:
    """The target renaming sigma' with policy(sigma a) = sigma'(policy a)."""
    out: dict[Name, Name] = {}
    for x, image in sigma.items():
        for before, after in zip(spec.rename_policy(x), spec.rename_policy(image)):
            out[before] = after
    return out
