"""Tests for the translations between languages."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from process_strategies import processes
from joinbench.encodings import (
    NAIVE_JOIN,
    SYNC_ASYNC,
    SYNC_ASYNC_BINARY,
    EncodingError,
    embed_leq,
    encode_naive_join_flatten,
    encode_sync_async_binary,
    encode_sync_async_joining,
    get_encoding,
    induced_renaming,
    leq_encoding,
)
from joinbench.language import ALL_LANGUAGES, FeatureVector, feature_leq, validate_process
from joinbench.semantics import enumerate_redexes, explore, normalize, observations, step, struct_eq
from joinbench.syntax import parse, print_process
from joinbench.terms import Name, reserved


def lang(text):
    return FeatureVector.parse(text)


# one edge per feature axis; sources leave out restriction so substitutions print alike
MONADIC = processes(polyadic=False, restrict=False, max_leaves=6)
FEATURE_EDGES = {
    "A->S": (lang("L[A,M,C,NO,J]"), lang("L[S,M,C,NO,J]"), MONADIC),
    "M->P": (lang("L[A,M,C,NO,J]"), lang("L[A,P,C,NO,J]"), MONADIC),
    "D->C": (
        lang("L[A,M,D,NO,J]"),
        lang("L[A,M,C,NO,J]"),
        processes(channel=False, polyadic=False, restrict=False, max_leaves=6),
    ),
    "NO->NM": (lang("L[A,M,C,NO,J]"), lang("L[A,M,C,NM,J]"), MONADIC),
    "NM->I": (lang("L[A,M,C,NM,J]"), lang("L[A,M,C,I,J]"), MONADIC),
    "B->J": (
        lang("L[A,M,C,NO,B]"),
        lang("L[A,M,C,NO,J]"),
        processes(polyadic=False, max_atoms=1, restrict=False, max_leaves=6),
    ),
}


class TestEmbedding:
    @pytest.mark.parametrize("pair", [
        (l1, l2) for l1 in ALL_LANGUAGES for l2 in ALL_LANGUAGES if feature_leq(l1, l2)
    ], ids=lambda pair: f"{pair[0]}->{pair[1]}")
    def test_defined_on_every_ordered_pair(self, pair):
        l1, l2 = pair
        spec = leq_encoding(l1, l2)
        assert spec.source == l1 and spec.target == l2

    def test_unordered_pair_rejected(self):
        with pytest.raises(EncodingError):
            leq_encoding(lang("L[S,M,C,NO,B]"), lang("L[A,M,C,NO,B]"))

    def test_async_to_sync_adds_nil_continuations(self):
        out = embed_leq(parse("n<a> | n(x).x<b>"), lang("L[A,M,C,NO,B]"), lang("L[S,M,C,NO,B]"))
        assert print_process(out) == "n<a>.0 | n(x).x<b>.0"

    def test_dataspace_to_channel_adds_arity_channels(self):
        out = embed_leq(parse("<a, b> | (x).ok"), lang("L[A,P,D,NO,B]"), lang("L[A,P,C,NO,B]"))
        assert print_process(out) == "$k2<a, b> | $k1(x).ok"

    def test_other_axes_are_the_identity(self):
        p = parse("<a> | (x).ok")
        assert embed_leq(p, lang("L[A,M,D,NO,B]"), lang("L[A,P,D,I,J]")) == p

    def test_embedding_preserves_behaviour(self):
        p = parse("<a> | (x).(y).ok | <b>")
        l1, l2 = lang("L[A,M,D,NO,B]"), lang("L[S,M,C,NO,J]")
        before = observations(explore(p, l1))
        after = observations(explore(embed_leq(p, l1, l2), l2))
        assert before.behaviour.may_succeed == after.behaviour.may_succeed
        assert before.reaches_stuck_without_success == after.reaches_stuck_without_success

    @pytest.mark.parametrize("edge", list(FEATURE_EDGES), ids=list(FEATURE_EDGES))
    @settings(max_examples=300, deadline=None)
    @given(data=st.data())
    def test_embedding_matches_redexes_one_to_one(self, edge, data):
        l1, l2, strategy = FEATURE_EDGES[edge]
        p = data.draw(strategy)
        out = embed_leq(p, l1, l2)
        assert validate_process(out, l2) == []

        source, target = normalize(p), normalize(out)
        rs = enumerate_redexes(source, l1)
        rt = enumerate_redexes(target, l2)
        assert sorted((str(r.substitution), r.degree) for r in rs) == sorted(
            (str(r.substitution), r.degree) for r in rt
        )
        assert {normalize(embed_leq(step(source, r).to_process(), l1, l2)) for r in rs} == {
            step(target, r) for r in rt
        }

    def test_reserved_channel_names_refused_in_source(self):
        with pytest.raises(EncodingError, match="reserved"):
            embed_leq(parse("<$k1>"), lang("L[A,M,D,NO,B]"), lang("L[A,M,C,NO,B]"))


class TestSyncAsync:
    def test_output_clause(self):
        out = encode_sync_async_binary(parse("n<a>.ok"))
        assert print_process(out) == "(nu $z1)(n<$z1> | $z1($x1).($x1<a> | ok))"

    def test_input_clause(self):
        out = encode_sync_async_binary(parse("n(y).ok"))
        assert print_process(out) == "(nu $x1)n($z1).($z1<$x1> | $x1(y).ok)"

    def test_join_clause_numbers_each_atom(self):
        out = encode_sync_async_joining(parse("(m(x) | n(y)) >> ok"))
        assert print_process(out) == (
            "(nu $x1_1)(nu $x1_2)(m($z1_1) | n($z1_2)) >> "
            "($z1_1<$x1_1> | $z1_2<$x1_2> | ($x1_1(x) | $x1_2(y)) >> ok)"
        )

    def test_clauses_numbered_in_pre_order(self):
        out = encode_sync_async_binary(parse("n<a>.m<b>.0 | n(x).0"))
        text = print_process(out)
        assert "$z1" in text and "$z2" in text and "$z3" in text
        assert text.index("$z1") < text.index("$z2") < text.index("$z3")

    def test_target_is_asynchronous(self):
        out = SYNC_ASYNC.translate(parse("(a(x) | b(y)) >> x<y>.0 | a<u>.0 | b<v>.0"))
        assert validate_process(out, SYNC_ASYNC.target) == []

    def test_handshake_behaviour_preserved(self):
        p = parse("n<a>.ok | n(x).0")
        source = observations(explore(p, SYNC_ASYNC_BINARY.source))
        target = observations(explore(SYNC_ASYNC_BINARY.translate(p), SYNC_ASYNC_BINARY.target))
        assert source.behaviour == target.behaviour

    def test_congruent_sources_translate_congruently(self):
        p = parse("n<a>.ok | m(x).0")
        q = parse("m(y).0 | n<a>.ok")
        assert struct_eq(SYNC_ASYNC.translate(p), SYNC_ASYNC.translate(q))

    def test_async_source_rejected(self):
        with pytest.raises(EncodingError, match="not a L\\[S,M,C,NO,J\\] process"):
            SYNC_ASYNC.translate(parse("n<a>"))

    def test_reserved_names_rejected(self):
        with pytest.raises(EncodingError, match=r"\$z1"):
            SYNC_ASYNC.translate(parse("$z1<a>.0"))

    def test_renaming_policy_is_the_identity(self):
        a, b = Name("a"), Name("b")
        assert induced_renaming(SYNC_ASYNC, {a: b}) == {a: b}


class TestNaiveJoin:
    def test_join_becomes_nested_inputs(self):
        out = encode_naive_join_flatten(parse("(m(x) | n(y)) >> x<y>"))
        assert print_process(out) == "m(x).n(y).x<y>"

    def test_binary_processes_untouched(self):
        p = parse("n<a> | n(x).ok")
        assert NAIVE_JOIN.translate(p) == p

    def test_known_invalid(self):
        assert NAIVE_JOIN.known_invalid
        assert not SYNC_ASYNC.known_invalid

    def test_flattening_can_get_stuck(self):
        p = parse("(c1(w) | c2(x)) >> ok | (c2(y) | c1(z)) >> ok | c1<a> | c2<b>")
        source = observations(explore(p, NAIVE_JOIN.source))
        target = observations(explore(NAIVE_JOIN.translate(p), NAIVE_JOIN.target))
        assert not source.reaches_stuck_without_success
        assert target.reaches_stuck_without_success


class TestRegistry:
    def test_fixed_encodings(self):
        assert get_encoding("sync-async") is SYNC_ASYNC
        assert get_encoding("naive-join", lang("L[A,M,C,NO,J]")) is NAIVE_JOIN

    def test_leq_needs_both_languages(self):
        with pytest.raises(EncodingError):
            get_encoding("leq", lang("L[A,M,D,NO,B]"))

    def test_wrong_source_rejected(self):
        with pytest.raises(EncodingError):
            get_encoding("sync-async", lang("L[A,M,C,NO,J]"))

    def test_unknown_method(self):
        with pytest.raises(EncodingError, match="unknown encoding"):
            get_encoding("telepathy")

    def test_reserved_helper(self):
        assert str(reserved("k2")) == "$k2"
