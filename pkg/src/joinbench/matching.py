"""
Substitutions, matching and capture-avoiding application.

match_one(t, p) and poly_match(ts, ps) return a Substitution, or None when
the match is undefined. None is a result, not an error: reduction treats
it as the absence of a redex.
"""

from __future__ import annotations

from collections.abc import Mapping
from typing import Iterable, Iterator, Optional

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
    all_names,
    atom_binders,
    free_names as process_free_names,
)
from joinbench.terms import (
    Bind,
    Compound,
    Name,
    PCompound,
    Pattern,
    Protect,
    Term,
    format_term,
    free_names,
    fresh_name,
    protect_term,
)


class SubstitutionClash(ValueError):
    """Union of substitutions whose domains overlap."""


class _NoMatch(Exception):
    pass


class Substitution(Mapping):
    """Finite immutable map from names to terms, printed `{a/x, b/y}`."""

    __slots__ = ("_map", "_hash")

    def __init__(self, bindings=()):
        self._map: dict[Name, Term] = dict(bindings)
        self._hash: Optional[int] = None

    def __getitem__(self, name: Name) -> Term:
        return self._map[name]

    def __iter__(self) -> Iterator[Name]:
        return iter(self._map)

    def __len__(self) -> int:
        return len(self._map)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._map.items()))
        return self._hash

    def __eq__(self, other) -> bool:
        if isinstance(other, Substitution):
            return self._map == other._map
        return NotImplemented

    def __repr__(self) -> str:
        return f"Substitution({str(self)})"

    def __str__(self) -> str:
        items = sorted(self._map.items(), key=lambda kv: str(kv[0]))
        return "{" + ", ".join(f"{format_term(t)}/{x}" for x, t in items) + "}"

    def without(self, names: Iterable[Name]) -> Substitution:
        drop = set(names)
        return Substitution((x, t) for x, t in self._map.items() if x not in drop)

    def restricted_to(self, names: Iterable[Name]) -> Substitution:
        keep = set(names)
        return Substitution((x, t) for x, t in self._map.items() if x in keep)

    def range_names(self) -> frozenset[Name]:
        out: set[Name] = set()
        for t in self._map.values():
            out |= free_names(t)
        return frozenset(out)

    def is_renaming(self) -> bool:
        return all(isinstance(t, Name) for t in self._map.values())


EMPTY = Substitution()


def union_disjoint(s1: Substitution, s2: Substitution) -> Substitution:
    overlap = set(s1) & set(s2)
    if overlap:
        names = ", ".join(sorted(str(n) for n in overlap))
        raise SubstitutionClash(f"substitution domains overlap on {names}")
    return Substitution({**s1._map, **s2._map})


# --- Matching ---


def _match(t: Term, p: Pattern, acc: dict[Name, Term]) -> None:
    match p, t:
        case Bind(x), _:
            if x in acc:
                raise SubstitutionClash(f"binder {x} bound twice in one match")
            acc[x] = t
        case Protect(a), Name() if a == t:
            return
        case PCompound(pl, pr), Compound(tl, tr):
            _match(tl, pl, acc)
            _match(tr, pr, acc)
        case _:
            raise _NoMatch


def match_one(t: Term, p: Pattern) -> Optional[Substitution]:
    acc: dict[Name, Term] = {}
    try:
        _match(t, p, acc)
    except _NoMatch:
        return None
    return Substitution(acc)


def poly_match(ts, ps) -> Optional[Substitution]:
    if len(ts) != len(ps):
        return None
    acc: dict[Name, Term] = {}
    try:
        for t, p in zip(ts, ps):
            _match(t, p, acc)
    except _NoMatch:
        return None
    return Substitution(acc)


# --- Application ---


def apply(sigma: Mapping, x):
    """Apply sigma to a term, a pattern or a process (capture-avoiding on processes)."""
    match x:
        case Name() | Compound():
            return apply_term(sigma, x)
        case Bind() | Protect() | PCompound():
            return apply_pattern(sigma, x)
    return apply_process(sigma, x)


def apply_term(sigma: Mapping, t: Term) -> Term:
    match t:
        case Name():
            return sigma.get(t, t)
        case Compound(left, right):
            return Compound(apply_term(sigma, left), apply_term(sigma, right))
    raise TypeError(f"not a term: {t!r}")


def apply_pattern(sigma: Mapping, p: Pattern) -> Pattern:
    """#x becomes protect_term(sigma x); binders move only under name-to-name images."""
    match p:
        case Protect(name):
            return protect_term(sigma.get(name, name))
        case Bind(name):
            image = sigma.get(name, name)
            return Bind(image) if isinstance(image, Name) else p
        case PCompound(left, right):
            return PCompound(apply_pattern(sigma, left), apply_pattern(sigma, right))
    raise TypeError(f"not a pattern: {p!r}")


def apply_process(sigma: Mapping, p: Process) -> Process:
    if not isinstance(sigma, Substitution):
        sigma = Substitution(sigma)
    return _apply(sigma.restricted_to(process_free_names(p)), p)


def _opt(sigma: Substitution, t: Optional[Term]) -> Optional[Term]:
    return None if t is None else apply_term(sigma, t)


def _apply(sigma: Substitution, p: Process) -> Process:
    if not sigma:
        return p
    match p:
        case Null() | Ok() | Hole():
            return p
        case Output(subject, args, cont):
            return Output(
                _opt(sigma, subject),
                tuple(apply_term(sigma, a) for a in args),
                None if cont is None else _sub(sigma, cont),
            )
        case Par(left, right):
            return Par(_sub(sigma, left), _sub(sigma, right))
        case Cond(lhs, rhs, then, orelse):
            return Cond(apply_term(sigma, lhs), apply_term(sigma, rhs), _sub(sigma, then), _sub(sigma, orelse))
        case Repl(body):
            return Repl(_sub(sigma, body))
        case Restrict(name, body):
            inner = sigma.without([name]).restricted_to(process_free_names(body))
            if name in inner.range_names():
                renamed = fresh_name(name, _avoid(inner, body))
                body = _apply(Substitution({name: renamed}), body)
                name = renamed
            return Restrict(name, _apply(inner, body))
        case Join(atoms, body):
            binders = atom_binders(atoms)
            inner = sigma.without(binders).restricted_to(process_free_names(body))
            clashes = [b for b in binders if b in inner.range_names()]
            if clashes:
                avoid = set(_avoid(inner, body)) | set(binders)
                renaming = {}
                for b in clashes:
                    renaming[b] = fresh_name(b, avoid)
                    avoid.add(renaming[b])
                rename = Substitution(renaming)
                atoms = tuple(
                    InputAtom(a.subject, tuple(_rename_binders(rename, pat) for pat in a.patterns))
                    for a in atoms
                )
                body = _apply(rename.restricted_to(process_free_names(body)), body)
            new_atoms = tuple(
                InputAtom(_opt(sigma, a.subject), tuple(_protects(sigma, pat) for pat in a.patterns))
                for a in atoms
            )
            return Join(new_atoms, _apply(inner, body))
    raise TypeError(f"not a process: {p!r}")


def _sub(sigma: Substitution, p: Process) -> Process:
    return _apply(sigma.restricted_to(process_free_names(p)), p)


def _avoid(sigma: Substitution, body: Process) -> set[Name]:
    return set(all_names(body)) | set(sigma) | set(sigma.range_names())


def _rename_binders(rename: Substitution, p: Pattern) -> Pattern:
    match p:
        case Bind(name):
            return Bind(rename.get(name, name))
        case PCompound(left, right):
            return PCompound(_rename_binders(rename, left), _rename_binders(rename, right))
    return p


def _protects(sigma: Substitution, p: Pattern) -> Pattern:
    """Apply sigma to the protected names of an atom pattern, leaving binders alone."""
    match p:
        case Protect(name):
            return protect_term(sigma.get(name, name))
        case PCompound(left, right):
            return PCompound(_protects(sigma, left), _protects(sigma, right))
    return p


def rename_free(p: Process, mapping: Mapping) -> Process:
    """Capture-avoiding renaming of free names (mapping is name to name)."""
    return apply_process(Substitution(mapping), p)
