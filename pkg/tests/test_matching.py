"""Tests for matching, substitutions and capture-avoiding application."""

import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from process_strategies import BINDERS, NAMES, processes
from joinbench.matching import (
    Substitution,
    SubstitutionClash,
    apply,
    apply_process,
    match_one,
    poly_match,
    rename_free,
    union_disjoint,
)
from joinbench.semantics import struct_eq
from joinbench.syntax import Restrict, free_names, parse, parse_pattern, parse_term, print_process
from joinbench.terms import (
    Bind,
    Compound,
    Name,
    Origin,
    PCompound,
    Protect,
    binder_list,
    binding_names,
    instantiate,
    leaves,
)

a, b, c, x, y = (Name(s) for s in "abcxy")


def all_terms(max_depth):
    terms = [a, b, c]
    for _ in range(max_depth - 1):
        terms = [a, b, c] + [Compound(l, r) for l in terms for r in terms]
    return list(dict.fromkeys(terms))


def all_patterns(max_depth):
    leaf = [Bind(x), Bind(y), Protect(a), Protect(b)]
    patterns = list(leaf)
    for _ in range(max_depth - 1):
        patterns = leaf + [PCompound(l, r) for l in patterns for r in patterns]
    return [p for p in dict.fromkeys(patterns) if not binding_names(p).duplicated]


def subterms(t):
    yield t
    if isinstance(t, Compound):
        yield from subterms(t.left)
        yield from subterms(t.right)


def oracle(t, p):
    """Every binder assignment that instantiates p to t."""
    binders = binder_list(p)
    found = []
    pool = list(dict.fromkeys(subterms(t)))
    for images in itertools.product(pool, repeat=len(binders)):
        sigma = dict(zip(binders, images))
        if instantiate(p, sigma) == t:
            found.append(sigma)
    return found


class TestMatchOne:
    @pytest.mark.parametrize("term, pattern, expected", [
        ("a", "x", "{a/x}"),
        ("a * b", "x", "{a * b/x}"),
        ("a * b", "x * #b", "{a/x}"),
        ("a * b", "x * #a", None),
        ("a", "x * y", None),
        ("a * b * c", "x * y", "{a * b/x, c/y}"),
        ("a * (b * c)", "#a * (x * #c)", "{b/x}"),
    ])
    def test_examples(self, term, pattern, expected):
        sigma = match_one(parse_term(term), parse_pattern(pattern))
        assert (None if sigma is None else str(sigma)) == expected

    def test_agrees_with_brute_force(self):
        """Depth <= 3 terms over {a, b, c} against depth <= 3 patterns."""
        for t in all_terms(3):
            for p in all_patterns(3):
                solutions = oracle(t, p)
                sigma = match_one(t, p)
                assert len(solutions) <= 1, (t, p)
                if solutions:
                    assert sigma == Substitution(solutions[0]), (t, p)
                else:
                    assert sigma is None, (t, p)

    def test_domain_is_the_binders(self):
        p = parse_pattern("x * (#a * y)")
        sigma = match_one(parse_term("c * (a * b)"), p)
        assert set(sigma) == {leaf.name for leaf in leaves(p) if isinstance(leaf, Bind)}


class TestPolyMatch:
    def test_componentwise(self):
        sigma = poly_match((a, Compound(b, c)), (Bind(x), PCompound(Protect(b), Bind(y))))
        assert sigma == Substitution({x: a, y: c})

    def test_length_mismatch_is_undefined(self):
        assert poly_match((a, b), (Bind(x),)) is None

    def test_any_failure_is_undefined(self):
        assert poly_match((a, b), (Bind(x), Protect(a))) is None

    def test_repeated_binder_clashes(self):
        with pytest.raises(SubstitutionClash):
            poly_match((a, b), (Bind(x), Bind(x)))


class TestSubstitution:
    def test_union_needs_disjoint_domains(self):
        assert union_disjoint(Substitution({x: a}), Substitution({y: b})) == Substitution({x: a, y: b})
        with pytest.raises(SubstitutionClash):
            union_disjoint(Substitution({x: a}), Substitution({x: b}))

    def test_hashable_and_printed_sorted(self):
        s = Substitution({y: b, x: a})
        assert s == Substitution({x: a, y: b})
        assert hash(s) == hash(Substitution({x: a, y: b}))
        assert str(s) == "{a/x, b/y}"

    def test_range_and_renaming(self):
        s = Substitution({x: Compound(a, b)})
        assert s.range_names() == {a, b}
        assert not s.is_renaming()
        assert Substitution({x: a}).is_renaming()


class TestApplyProcess:
    def test_bound_names_untouched(self):
        p = parse("n(x).x<a> | x<a>")
        assert print_process(apply_process({x: b}, p)) == "n(x).x<a> | b<a>"

    def test_restriction_avoids_capture(self):
        p = parse("(nu a)(x<a>)")
        out = apply_process({x: a}, p)
        assert print_process(out) == "(nu a'1)a<a'1>"
        assert free_names(out) == {a}

    def test_input_binder_avoids_capture(self):
        p = parse("n(y).x<y>")
        out = apply_process({x: y}, p)
        assert print_process(out) == "n(y'1).y<y'1>"

    def test_protected_names_are_substituted(self):
        p = parse("(#x, y).ok")
        assert print_process(apply_process({x: b}, p)) == "(#b, y).ok"

    def test_compound_image_of_protected_name(self):
        p = parse("(#x).ok")
        assert print_process(apply_process({x: Compound(a, b)}, p)) == "(#a * #b).ok"

    def test_rename_free_keeps_origin_spaces_apart(self):
        k = Name("k", Origin.RESERVED)
        p = parse("$k<a> | k<a>")
        assert print_process(rename_free(p, {Name("k"): b})) == "$k<a> | b<a>"
        assert print_process(rename_free(p, {k: b})) == "b<a> | k<a>"

    @settings(max_examples=1000, deadline=None)
    @given(
        processes(max_leaves=6),
        st.dictionaries(st.sampled_from(NAMES), st.sampled_from(NAMES + BINDERS), max_size=3),
    )
    def test_alpha_equivalent_processes_stay_equivalent(self, p, sigma):
        e = Name("e")
        renamed = Restrict(e, rename_free(p, {a: e}))
        assert struct_eq(apply(sigma, Restrict(a, p)), apply(sigma, renamed))
