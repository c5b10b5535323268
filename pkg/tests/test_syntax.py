"""Tests for the process parser and printer."""

import pytest
from hypothesis import given, settings

from process_strategies import printable_processes
from joinbench.syntax import (
    NULL,
    OK,
    Cond,
    Hole,
    InputAtom,
    Join,
    Output,
    Par,
    ParseError,
    Repl,
    Restrict,
    free_names,
    par,
    parse,
    parse_patterns,
    parse_terms,
    print_process,
    size,
)
from joinbench.terms import Bind, Compound, Name, Origin, PCompound, Protect

a, b, m, n, x, y = (Name(s) for s in ("a", "b", "m", "n", "x", "y"))


class TestParse:
    def test_intro_join(self):
        p = parse("m<a>.0 | n<b>.0 | (m(x) | n(y)) >> x<y>.0")
        join = Join((InputAtom(m, (Bind(x),)), InputAtom(n, (Bind(y),))), Output(x, (y,), NULL))
        assert p == par(Output(m, (a,), NULL), Output(n, (b,), NULL), join)

    def test_dot_and_chevrons_are_the_same_join(self):
        assert parse("n(x).ok") == parse("n(x) >> ok")

    def test_dataspace_forms(self):
        assert parse("<a, b>") == Output(None, (a, b))
        assert parse("(x, #b).ok") == Join((InputAtom(None, (Bind(x), Protect(b))),), OK)

    def test_restriction_list_nests(self):
        assert parse("(nu a, b) 0") == Restrict(a, Restrict(b, NULL))

    def test_par_is_left_associated(self):
        assert parse("ok | 0 | ok") == Par(Par(OK, NULL), OK)

    def test_conditional_without_else(self):
        assert parse("if a = b then ok") == Cond(a, b, OK, NULL)

    def test_prefix_binds_tighter_than_par(self):
        assert parse("!n(x).ok | ok") == Par(Repl(Join((InputAtom(n, (Bind(x),)),), OK)), OK)

    def test_hole(self):
        assert parse("n<a>.[[1]]") == Output(n, (a,), Hole(1))

    def test_comments_ignored(self):
        assert parse("-- lang: L[A,M,D,NO,B]\n<a> -- trailing\n") == Output(None, (a,))

    def test_reserved_and_fresh_names(self):
        p = parse("$z1<b'2>")
        assert p == Output(Name("z1", Origin.RESERVED), (Name("b", Origin.FRESH, 2),))

    def test_terms_and_patterns(self):
        assert parse_terms("a * b, a") == (Compound(a, b), a)
        assert parse_patterns("x * #b, y") == (PCompound(Bind(x), Protect(b)), Bind(y))


class TestParseErrors:
    def test_position_reported(self):
        with pytest.raises(ParseError) as exc:
            parse("n<a> | | ok")
        assert exc.value.line == 1
        assert exc.value.column > 5
        assert str(exc.value).startswith("line 1, column ")

    def test_end_of_input(self):
        with pytest.raises(ParseError) as exc:
            parse("n<a")
        assert exc.value.line == 1
        assert exc.value.expected

    def test_repeated_binder_rejected(self):
        with pytest.raises(ParseError, match="binder x"):
            parse("(m(x) | n(x)) >> ok")

    def test_keyword_is_not_a_name(self):
        with pytest.raises(ParseError):
            parse("nu<a>")


class TestPrint:
    @pytest.mark.parametrize("text", [
        "m<a>.0 | n<b>.0 | (m(x) | n(y)) >> x<y>.0",
        "(nu a)(a<b> | a(x).ok)",
        "!(x).<x>",
        "if a = b then ok else n<a>",
        "if a = b then (if a = n then ok) else ok",
        "n<a * (b * a)>.(ok | 0)",
    ])
    def test_canonical_text_is_stable(self, text):
        assert print_process(parse(text)) == text

    def test_dangling_else_kept_apart(self):
        inner = Cond(a, b, OK, NULL)
        outer = Cond(a, n, inner, OK)
        assert parse(print_process(outer)) == outer

    def test_if_else_as_then_branch(self):
        inner = Cond(a, b, OK, Output(n, (a,)))
        outer = Cond(a, n, inner, NULL)
        assert parse(print_process(outer)) == outer

    @settings(max_examples=1000, deadline=None)
    @given(printable_processes())
    def test_parse_inverts_print(self, p):
        assert parse(print_process(p)) == p


class TestQueries:
    def test_free_names_respect_binders(self):
        p = parse("(nu a)(m(x).x<a, b> | a<m>)")
        assert free_names(p) == {m, b}

    def test_protected_names_are_free(self):
        assert free_names(parse("(#a, x).x<b>")) == {a, b}

    def test_size_counts_operators(self):
        assert size(parse("n<a>.ok | 0")) == 4
