"""
Names, terms and patterns.

A term is a name or a left-associated compound `s * t`. A pattern is a
binder `x`, a protected name-match `#a`, or a compound of patterns. Patterns
come in three grades: NO (a single binder), NM (binder or protect, no
compound) and I (anything, intensional).

Names carry an origin tag so that three lexical spaces never collide:

    source     a, chan, x1        written by the user
    reserved   $k2, $z3           minted by encodings
    fresh      b'1, v'4           minted by renaming / canonicalisation
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import StrEnum
from typing import Iterable, Iterator, NamedTuple, Union


class TermError(ValueError):
    """Malformed term or pattern input."""


class Origin(StrEnum):
    SOURCE = "source"
    RESERVED = "reserved"
    FRESH = "fresh"


class Matching(StrEnum):
    """Pattern grade: no-matching, name-matching, intensional."""

    NO = "NO"
    NM = "NM"
    I = "I"  # noqa: E741


@dataclass(frozen=True, order=True)
class Name:
    ident: str
    origin: Origin = Origin.SOURCE
    counter: int = 0

    def __str__(self) -> str:
        if self.origin is Origin.RESERVED:
            return f"${self.ident}"
        if self.origin is Origin.FRESH:
            return f"{self.ident}'{self.counter}"
        return self.ident


def name_from_text(text: str) -> Name:
    """Inverse of str(Name): `a` source, `$a` reserved, `a'3` fresh."""
    if not text:
        raise TermError("empty name")
    if text.startswith("$"):
        return Name(text[1:], Origin.RESERVED)
    if "'" in text:
        ident, _, counter = text.partition("'")
        if not counter.isdigit():
            raise TermError(f"bad fresh-name counter in {text!r}")
        return Name(ident, Origin.FRESH, int(counter))
    return Name(text)


def reserved(ident: str) -> Name:
    return Name(ident, Origin.RESERVED)


def fresh_name(base: Name, avoid: Iterable[Name]) -> Name:
    """Fresh variant of `base` with the lowest counter not in `avoid`."""
    taken = {n.counter for n in avoid if n.origin is Origin.FRESH and n.ident == base.ident}
    counter = 1
    while counter in taken:
        counter += 1
    return Name(base.ident, Origin.FRESH, counter)


@dataclass(frozen=True)
class Compound:
    left: Term
    right: Term

    def __str__(self) -> str:
        return format_term(self)


Term = Union[Name, Compound]


@dataclass(frozen=True)
class Bind:
    name: Name

    def __str__(self) -> str:
        return str(self.name)


@dataclass(frozen=True)
class Protect:
    name: Name

    def __str__(self) -> str:
        return f"#{self.name}"


@dataclass(frozen=True)
class PCompound:
    left: Pattern
    right: Pattern

    def __str__(self) -> str:
        return format_pattern(self)


Pattern = Union[Bind, Protect, PCompound]


def compound(*parts: Term) -> Term:
    """Left-associated compound of one or more terms: compound(a, b, c) = (a * b) * c."""
    if not parts:
        raise TermError("compound of nothing")
    term = parts[0]
    for part in parts[1:]:
        term = Compound(term, part)
    return term


def pcompound(*parts: Pattern) -> Pattern:
    if not parts:
        raise TermError("pattern compound of nothing")
    pattern = parts[0]
    for part in parts[1:]:
        pattern = PCompound(pattern, part)
    return pattern


# --- Printing ---


def format_term(t: Term, name_fmt=str) -> str:
    match t:
        case Name():
            return name_fmt(t)
        case Compound(left, right):
            rhs = format_term(right, name_fmt)
            if isinstance(right, Compound):
                rhs = f"({rhs})"
            return f"{format_term(left, name_fmt)} * {rhs}"
    raise TermError(f"not a term: {t!r}")


def format_pattern(p: Pattern, name_fmt=str) -> str:
    match p:
        case Bind(name):
            return name_fmt(name)
        case Protect(name):
            return f"#{name_fmt(name)}"
        case PCompound(left, right):
            rhs = format_pattern(right, name_fmt)
            if isinstance(right, PCompound):
                rhs = f"({rhs})"
            return f"{format_pattern(left, name_fmt)} * {rhs}"
    raise TermError(f"not a pattern: {p!r}")


# --- Queries ---


def leaves(x: Term | Pattern) -> Iterator[Name | Bind | Protect]:
    """Leaf nodes left to right (names for terms, Bind/Protect for patterns)."""
    match x:
        case Compound(left, right) | PCompound(left, right):
            yield from leaves(left)
            yield from leaves(right)
        case _:
            yield x


def free_names(x: Term | Pattern) -> frozenset[Name]:
    """Names of a term; protected names of a pattern. Binders are not free."""
    out = set()
    for leaf in leaves(x):
        match leaf:
            case Name():
                out.add(leaf)
            case Protect(name):
                out.add(name)
    return frozenset(out)


class BindingNames(NamedTuple):
    names: frozenset[Name]
    duplicated: bool


def binder_list(p: Pattern) -> list[Name]:
    return [leaf.name for leaf in leaves(p) if isinstance(leaf, Bind)]


def binding_names(p: Pattern) -> BindingNames:
    binders = binder_list(p)
    names = frozenset(binders)
    return BindingNames(names, len(names) != len(binders))


def depth(x: Term | Pattern) -> int:
    match x:
        case Compound(left, right) | PCompound(left, right):
            return 1 + max(depth(left), depth(right))
    return 1


def is_name_pattern(p: Pattern) -> bool:
    return isinstance(p, (Bind, Protect))


def well_formed_pattern(p: Pattern, grade: Matching) -> bool:
    if binding_names(p).duplicated:
        return False
    if grade is Matching.NO:
        return isinstance(p, Bind)
    if grade is Matching.NM:
        return is_name_pattern(p)
    return True


def protect_term(t: Term) -> Pattern:
    match t:
        case Name():
            return Protect(t)
        case Compound(left, right):
            return PCompound(protect_term(left), protect_term(right))
    raise TermError(f"not a term: {t!r}")


def instantiate(p: Pattern, images: dict[Name, Term]) -> Term:
    """The term obtained by replacing each binder with its image and each #a with a."""
    match p:
        case Bind(name):
            return images.get(name, name)
        case Protect(name):
            return name
        case PCompound(left, right):
            return Compound(instantiate(left, images), instantiate(right, images))
    raise TermError(f"not a pattern: {p!r}")
