"""Tests for the validity checks, including deliberately broken encodings."""

import re

import pytest

from joinbench.common import load_corpus
from joinbench.encodings import NAIVE_JOIN, SYNC_ASYNC, EncodingSpec
from joinbench.language import FeatureVector
from joinbench.matching import rename_free
from joinbench.semantics import Bounds, replays
from joinbench.syntax import Hole, Par, parse, print_process
from joinbench.terms import Name
from joinbench.validator import (
    Criterion,
    Status,
    Verdict,
    check_compositionality,
    check_process,
    check_deadlock_reflection,
    check_divergence_reflection,
    check_name_invariance,
    check_operational_correspondence,
    check_success_sensitivity,
    default_substitutions,
    fill,
    operator_templates,
    run_all,
    summarize,
)

LANG = FeatureVector.parse("L[A,M,C,NO,J]")
OMEGA = parse("(nu d)(!(d(x) >> d<x>) | d<a>)")

HANDSHAKE = parse("n<a> | n(x).ok")
INTRO = parse("m<a> | n<b> | (m(x) | n(y)) >> x<y>")
DEADLOCK = parse("(c1(w) | c2(x)) >> ok | (c2(y) | c1(z)) >> (nu d)(!(d(x) >> d<x>) | d<a>) | c1<a> | c2<b>")


def encoding(name, transform):
    return EncodingSpec(name, LANG, LANG, transform)


IDENTITY = encoding("identity", lambda p: p)
OK_TO_NIL = encoding("ok-to-nil", lambda p: parse(re.sub(r"\bok\b", "0", print_process(p))))
ADD_OMEGA = encoding("add-omega", lambda p: Par(p, OMEGA))
DUPLICATE = encoding("duplicate", lambda p: Par(p, p))
HARDCODE = encoding("hardcode", lambda p: rename_free(p, {Name("a"): Name("c")}))


class TestVerdict:
    def test_fail_needs_a_witness(self):
        with pytest.raises(ValueError):
            Verdict(Criterion.SUCCESS_SENSITIVITY, Status.FAIL)

    def test_inconclusive_needs_a_bound(self):
        with pytest.raises(ValueError):
            Verdict(Criterion.SUCCESS_SENSITIVITY, Status.INCONCLUSIVE)

    def test_as_dict(self):
        v = Verdict(Criterion.NAME_INVARIANCE, Status.PASS, note="exact", subject="p")
        assert v.as_dict()["criterion"] == "name_invariance"
        assert v.as_dict()["bound"] is None


class TestIdentityEncoding:
    @pytest.mark.parametrize("check", [
        check_success_sensitivity,
        check_divergence_reflection,
        check_deadlock_reflection,
        check_operational_correspondence,
        check_name_invariance,
    ])
    @pytest.mark.parametrize("process", [HANDSHAKE, INTRO, OMEGA], ids=["handshake", "intro", "omega"])
    def test_every_check_passes(self, check, process):
        assert check(IDENTITY, process).status is Status.PASS

    def test_compositional(self):
        assert check_compositionality(IDENTITY).status is Status.PASS


class TestNegativeControls:
    def test_dropping_success_is_caught(self):
        verdict = check_success_sensitivity(OK_TO_NIL, HANDSHAKE)
        assert verdict.status is Status.FAIL
        assert verdict.note == "only the source succeeds"
        assert replays(verdict.witness, LANG)

    def test_added_divergence_is_caught(self):
        verdict = check_divergence_reflection(ADD_OMEGA, HANDSHAKE)
        assert verdict.status is Status.FAIL
        assert replays(verdict.witness, LANG)

    def test_duplicated_hole_is_caught(self):
        verdict = check_compositionality(DUPLICATE)
        assert verdict.status is Status.FAIL
        assert "exactly once" in verdict.note

    def test_hardcoded_name_is_caught(self):
        verdict = check_name_invariance(HARDCODE, HANDSHAKE)
        assert verdict.status is Status.FAIL
        assert len(verdict.witness) == 2

    def test_naive_flattening_breaks_correspondence(self):
        verdict = check_operational_correspondence(NAIVE_JOIN, DEADLOCK)
        assert verdict.status is Status.FAIL
        assert verdict.note.startswith("soundness")
        assert replays(verdict.witness, NAIVE_JOIN.target)

    def test_naive_flattening_deadlocks(self):
        verdict = check_deadlock_reflection(NAIVE_JOIN, DEADLOCK)
        assert verdict.status is Status.FAIL

    def test_shipped_deadlock_case_fails(self):
        text = dict(load_corpus("naive-join"))["deadlock"]
        verdicts = check_process(NAIVE_JOIN, "deadlock", parse(text))
        deadlock = next(v for v in verdicts if v.criterion is Criterion.DEADLOCK_REFLECTION)
        assert deadlock.status is Status.FAIL
        assert deadlock.subject == "deadlock"
        assert replays(deadlock.witness, NAIVE_JOIN.target)


class TestBounds:
    def test_truncation_is_inconclusive(self):
        tiny = Bounds(max_states=1)
        verdict = check_operational_correspondence(IDENTITY, INTRO, tiny)
        assert verdict.status is Status.INCONCLUSIVE
        assert verdict.bound == tiny

    def test_success_found_early_still_passes(self):
        grows = parse("ok | (nu d)(!(d(x) >> (d<x> | n<x>)) | d<a>)")
        verdict = check_success_sensitivity(IDENTITY, grows, Bounds(max_depth=3))
        assert verdict.status is Status.PASS


class TestSyncAsync:
    def test_handshake_corpus_passes(self):
        corpus = [("handshake", parse("n<a>.ok | n(x).0")), ("intro", parse("m<a>.ok | n<b>.0 | (m(x) | n(y)) >> x<y>.0"))]
        verdicts = run_all(SYNC_ASYNC, corpus)
        assert [v.status for v in verdicts] == [Status.PASS] * len(verdicts)
        assert len(verdicts) == 1 + 5 * len(corpus)
        assert verdicts[0].subject == "sync-async"
        assert {v.subject for v in verdicts[1:]} == {"handshake", "intro"}

    def test_jobs_give_the_same_verdicts(self):
        corpus = [("handshake", parse("n<a>.ok | n(x).0")), ("nil", parse("0"))]
        assert run_all(SYNC_ASYNC, corpus, jobs=1) == run_all(SYNC_ASYNC, corpus, jobs=3)

    def test_whole_shipped_corpus_passes(self):
        corpus = [(name, parse(text)) for name, text in load_corpus("sync-async")]
        verdicts = run_all(SYNC_ASYNC, corpus)
        assert [v for v in verdicts if v.status is not Status.PASS] == []
        assert len(verdicts) == 1 + 5 * len(corpus)

    def test_summary_counts(self):
        verdicts = run_all(SYNC_ASYNC, [("nil", parse("0"))])
        table = summarize(verdicts)
        assert table["compositionality"] == {"pass": 1, "fail": 0, "inconclusive": 0}
        assert set(table) == {str(c) for c in Criterion}


class TestHelpers:
    def test_fill_captures_on_purpose(self):
        context = parse("n(x).[[1]]")
        assert print_process(fill(context, {1: parse("x<a>")})) == "n(x).x<a>"

    def test_templates_follow_the_language(self):
        assert "join" in operator_templates(LANG)
        assert "join" not in operator_templates(FeatureVector.parse("L[A,M,C,NO,B]"))
        output, holes = operator_templates(FeatureVector.parse("L[S,M,D,NO,B]"))["output"]
        assert holes == 1 and output.cont == Hole(1) and output.subject is None

    def test_default_substitutions(self):
        subs = default_substitutions(parse("n<a>"))
        assert [str(s) for s in subs] == ["{}", "{n/a, a/n}", "{n/a}"]
