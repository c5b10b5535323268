"""Hypothesis strategies for names, terms, patterns and processes.

Processes are small and drawn from a handful of names so that
interesting coincidences (shared channels, shadowing, equal sides of a
conditional) turn up often.
"""

from hypothesis import strategies as st

from joinbench.syntax import NULL, OK, Cond, InputAtom, Join, Output, Par, Repl, Restrict, atom_binders
from joinbench.terms import Bind, Compound, Name, Origin, PCompound, Protect

NAMES = [Name("a"), Name("b"), Name("c"), Name("n")]
BINDERS = [Name("x"), Name("y"), Name("z")]
ODD_NAMES = [Name("k2", Origin.RESERVED), Name("v", Origin.FRESH, 3)]

names = st.sampled_from(NAMES)
any_names = st.sampled_from(NAMES + BINDERS + ODD_NAMES)


def terms(leaf=any_names, max_leaves=4):
    return st.recursive(leaf, lambda inner: st.builds(Compound, inner, inner), max_leaves=max_leaves)


def patterns(max_leaves=4):
    leaf = st.one_of(st.builds(Bind, st.sampled_from(BINDERS)), st.builds(Protect, names))
    return st.recursive(leaf, lambda inner: st.builds(PCompound, inner, inner), max_leaves=max_leaves)


def _linear(join: Join) -> bool:
    binders = atom_binders(join.atoms)
    return len(binders) == len(set(binders))


def processes(channel=True, sync=False, max_leaves=8, polyadic=True, max_atoms=2, restrict=True):
    """Well-formed processes over NAMES; binders x, y, z; outputs carry names only.

    `polyadic=False` keeps every output and atom to one argument, `max_atoms=1`
    keeps joins binary and `restrict=False` leaves out restriction.
    """
    subject = names if channel else st.none()
    width = 2 if polyadic else 1
    args = st.lists(st.sampled_from(NAMES + BINDERS), min_size=1, max_size=width).map(tuple)
    pats = st.lists(st.builds(Bind, st.sampled_from(BINDERS)), min_size=1, max_size=width).map(tuple)

    def extend(inner):
        cont = inner if sync else st.none()
        atom = st.builds(InputAtom, subject, pats)
        choices = [
            st.builds(Output, subject, args, cont),
            st.builds(Join, st.lists(atom, min_size=1, max_size=max_atoms).map(tuple), inner).filter(_linear),
            st.builds(Par, inner, inner),
            st.builds(Cond, st.sampled_from(NAMES + BINDERS), st.sampled_from(NAMES + BINDERS), inner, inner),
            st.builds(Repl, inner),
        ]
        if restrict:
            choices.append(st.builds(Restrict, names, inner))
        return st.one_of(*choices)

    leaf = st.sampled_from([NULL, OK])
    return st.recursive(leaf, extend, max_leaves=max_leaves)


def printable_processes(max_leaves=8):
    """Any AST the printer must round-trip: mixed media, compound terms, odd names."""
    subject = st.one_of(st.none(), terms(max_leaves=2))
    args = st.lists(terms(max_leaves=3), min_size=1, max_size=3).map(tuple)

    def extend(inner):
        atom = st.builds(InputAtom, subject, st.lists(patterns(), min_size=1, max_size=2).map(tuple))
        return st.one_of(
            st.builds(Output, subject, args, st.one_of(st.none(), inner)),
            st.builds(Join, st.lists(atom, min_size=1, max_size=3).map(tuple), inner).filter(_linear),
            st.builds(Restrict, any_names, inner),
            st.builds(Par, inner, inner),
            st.builds(Cond, terms(max_leaves=2), terms(max_leaves=2), inner, inner),
            st.builds(Repl, inner),
        )

    return st.recursive(st.sampled_from([NULL, OK]), extend, max_leaves=max_leaves)
