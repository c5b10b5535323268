"""
Bundled reproduction cases: the worked reductions and separation witnesses.

Each case parses its processes in a declared language, runs them, and
records named checks. A case passes when every check does.

    intro-join              one degree-3 join step
    thm1-degree             k-atom join needs all k+1 participants (--k)
    sec5-sync-async         synchronous-to-asynchronous encoding is valid on its examples
    sec8-deadlock           flattening joins into nested inputs can deadlock
    thm4-poly-separation    polyadic dataspace output meets a polyadic input
    thm8-namematch-witness  a name-match separates a pair that a swap makes inert
    thm5-dataspace-sync     one renaming turns termination into divergence
    thm7-channel-dataspace  erasing channels lets unrelated processes react
    thm6-intensional        one intensional pattern tests three names at arity 1
"""

from dataclasses import dataclass, field
from typing import Callable, Optional

from joinbench.encodings import NAIVE_JOIN, SYNC_ASYNC
from joinbench.language import FeatureVector, combined_arity, validate_process
from joinbench.matching import Substitution, apply_process
from joinbench.semantics import (
    Bounds,
    coordination_degree_demo,
    enumerate_redexes,
    explore,
    normalize,
    observations,
    replays,
    soup,
    step,
)
from joinbench.syntax import (
    Cond,
    InputAtom,
    Join,
    Null,
    Ok,
    Output,
    Par,
    Process,
    Repl,
    Restrict,
    parse,
    print_process,
)
from joinbench.terms import Name, Protect, leaves
from joinbench.validator import (
    Criterion,
    Status,
    check_operational_correspondence,
    run_all,
)


@dataclass(frozen=True)
class Check:
    label: str
    passed: bool
    detail: str = ""

    def __str__(self) -> str:
        mark = "✓" if self.passed else "✗"
        return f"  {mark} {self.label}" + (f"\n    → {self.detail}" if self.detail and not self.passed else "")


@dataclass
class ReproReport:
    case: str
    language: str
    checks: list[Check] = field(default_factory=list)
    lines: list[str] = field(default_factory=list)
    truncated: bool = False

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, label: str, passed: bool, detail: str = "") -> None:
        self.checks.append(Check(label, bool(passed), detail))

    def say(self, line: str) -> None:
        self.lines.append(line)

    def as_dict(self) -> dict:
        return {
            "case": self.case,
            "language": self.language,
            "passed": self.passed,
            "truncated": self.truncated,
            "checks": [{"label": c.label, "passed": c.passed, "detail": c.detail} for c in self.checks],
            "lines": self.lines,
        }


@dataclass(frozen=True)
class ReproCase:
    id: str
    language: str
    summary: str
    processes: dict[str, str]
    runner: Callable[["ReproCase", Bounds, dict], ReproReport] = field(compare=False)

    @property
    def lang(self) -> FeatureVector:
        return FeatureVector.parse(self.language)

    def parsed(self) -> dict[str, Process]:
        return {name: parse(text) for name, text in self.processes.items()}

    def problems(self) -> list[str]:
        """Bundled processes that fail to validate in the declared language."""
        out = []
        for name, p in self.parsed().items():
            for v in validate_process(p, self.lang):
                out.append(f"{self.id}/{name}: {v}")
        return out

    def run(self, bounds: Bounds = Bounds(), **options) -> ReproReport:
        return self.runner(self, bounds, options)


def _new_report(case: ReproCase) -> ReproReport:
    return ReproReport(case.id, case.language)


# --- Cases ---


def _intro_join(case: ReproCase, bounds: Bounds, options: dict) -> ReproReport:
    report = _new_report(case)
    procs = case.parsed()
    state = normalize(procs["soup"])
    redexes = enumerate_redexes(state, case.lang, bounds.max_repl_unfold)
    report.say(f"state:  {state}")
    for r in redexes:
        report.say(f"redex:  {r}")
    report.check("exactly one redex", len(redexes) == 1, f"found {len(redexes)}")
    if len(redexes) == 1:
        redex = redexes[0]
        after = step(state, redex)
        report.say(f"step:   {after}")
        report.check("redex has degree 3", redex.degree == 3, f"degree {redex.degree}")
        report.check(
            "result is P1 | P2 | {a/x,b/y}Q",
            after == normalize(procs["expected"]),
            f"got {after}",
        )
        report.check("result is final", not enumerate_redexes(after, case.lang, bounds.max_repl_unfold))
    return report


def _thm1_degree(case: ReproCase, bounds: Bounds, options: dict) -> ReproReport:
    report = _new_report(case)
    k = options.get("k") or 3
    family = coordination_degree_demo(k, case.lang)
    whole = soup(family)
    report.say(f"soup:   {print_process(whole)}")
    graph = explore(whole, case.lang, bounds)
    report.truncated = graph.bound_hit
    profile = observations(graph)
    report.check(f"the {k + 1}-participant soup succeeds", profile.may_succeed)
    report.check(
        f"every reduction has degree {k + 1}",
        profile.max_degree_seen == k + 1 and all(e.redex.degree == k + 1 for e in graph.edges),
        f"max degree {profile.max_degree_seen}",
    )
    for j in range(len(family)):
        variant = soup(family, drop=j)
        redexes = enumerate_redexes(normalize(variant), case.lang, bounds.max_repl_unfold)
        report.say(f"drop {j}: {print_process(variant)}  redexes={len(redexes)}")
        report.check(f"without participant {j} nothing reduces", not redexes)
    return report


def _sec5_sync_async(case: ReproCase, bounds: Bounds, options: dict) -> ReproReport:
    report = _new_report(case)
    corpus = list(case.parsed().items())
    for name, p in corpus:
        report.say(f"{name}: {print_process(p)}")
        report.say(f"  => {print_process(SYNC_ASYNC.translate(p))}")
    verdicts = run_all(SYNC_ASYNC, corpus, bounds, jobs=options.get("jobs") or 1)
    for v in verdicts:
        report.say(str(v))
    report.truncated = any(v.status is Status.INCONCLUSIVE for v in verdicts)
    for criterion in Criterion:
        mine = [v for v in verdicts if v.criterion is criterion]
        report.check(
            f"{criterion} passes",
            mine and all(v.status is Status.PASS for v in mine),
            "; ".join(f"{v.subject}: {v.status}" for v in mine if v.status is not Status.PASS),
        )
    return report


def _sec8_deadlock(case: ReproCase, bounds: Bounds, options: dict) -> ReproReport:
    report = _new_report(case)
    source = case.parsed()["soup"]
    target = NAIVE_JOIN.translate(source)
    report.say(f"source: {print_process(source)}")
    report.say(f"target: {print_process(target)}")
    src = observations(explore(source, NAIVE_JOIN.source, bounds))
    tgt = observations(explore(target, NAIVE_JOIN.target, bounds))
    report.truncated = src.bound_hit or tgt.bound_hit
    report.say(f"source profile: {src.as_dict()}")
    report.say(f"target profile: {tgt.as_dict()}")
    report.check("source may succeed", src.may_succeed)
    report.check("source never gets stuck", not src.reaches_stuck_without_success)
    report.check("source diverges (proven cycle)", src.proven_divergence)
    report.check("target may get stuck without success", tgt.reaches_stuck_without_success)

    verdict = check_operational_correspondence(NAIVE_JOIN, source, bounds)
    report.say(str(verdict))
    for line in verdict.witness:
        report.say(f"  witness: {line}")
    report.check("operational correspondence fails", verdict.status is Status.FAIL, str(verdict.status))
    if verdict.status is Status.FAIL:
        lang = NAIVE_JOIN.target if verdict.note.startswith("soundness") else NAIVE_JOIN.source
        report.check("witness replays", replays(verdict.witness, lang, bounds.max_repl_unfold))
    return report


def _thm4_poly(case: ReproCase, bounds: Bounds, options: dict) -> ReproReport:
    report = _new_report(case)
    procs = case.parsed()
    pair = Par(procs["P"], procs["Q"])
    graph = explore(pair, case.lang, bounds)
    report.truncated = graph.bound_hit
    profile = observations(graph)
    report.say(f"P | Q = {print_process(pair)}: {profile.as_dict()}")
    report.check("P | Q reduces to success", profile.may_succeed)
    report.check("with one polyadic step", profile.max_degree_seen == 2)
    return report


def _thm8_namematch(case: ReproCase, bounds: Bounds, options: dict) -> ReproReport:
    report = _new_report(case)
    procs = case.parsed()
    p, q = procs["P"], procs["Q"]
    a, b = Name("a"), Name("b")
    swap = Substitution({a: b, b: a})
    pair = Par(p, q)
    profile = observations(explore(pair, case.lang, bounds))
    report.say(f"P | Q = {print_process(pair)}: {profile.as_dict()}")
    report.check("P | Q reduces to success", profile.may_succeed)
    for label, variant in (("sigma P | Q", Par(apply_process(swap, p), q)), ("P | sigma Q", Par(p, apply_process(swap, q)))):
        redexes = enumerate_redexes(normalize(variant), case.lang, bounds.max_repl_unfold)
        report.say(f"{label} = {print_process(variant)}: {len(redexes)} redexes")
        report.check(f"{label} has no redex", not redexes)
    return report


def _thm5_dataspace_sync(case: ReproCase, bounds: Bounds, options: dict) -> ReproReport:
    report = _new_report(case)
    procs = case.parsed()
    p, q = procs["P"], procs["Q"]
    renamed = apply_process(Substitution({Name("a"): Name("b")}), q)
    plain = observations(explore(Par(p, q), case.lang, bounds))
    shifted = observations(explore(Par(p, renamed), case.lang, bounds))
    report.truncated = plain.bound_hit or shifted.bound_hit
    report.say(f"P | Q: {plain.as_dict()}")
    report.say(f"P | {{b/a}}Q: {shifted.as_dict()}")
    report.check("P | Q reduces", (plain.max_degree_seen or 0) >= 2)
    report.check("P | Q terminates", not plain.proven_divergence and not plain.bound_hit)
    report.check("P | {b/a}Q diverges", shifted.proven_divergence)
    return report


def erase_channels(p: Process) -> Process:
    """Drop every channel subject, reading a channel process in a dataspace."""
    match p:
        case Output(_, args, cont):
            return Output(None, args, None if cont is None else erase_channels(cont))
        case Join(atoms, body):
            return Join(tuple(InputAtom(None, a.patterns) for a in atoms), erase_channels(body))
        case Restrict(name, body):
            return Restrict(name, erase_channels(body))
        case Par(left, right):
            return Par(erase_channels(left), erase_channels(right))
        case Cond(lhs, rhs, then, orelse):
            return Cond(lhs, rhs, erase_channels(then), erase_channels(orelse))
        case Repl(body):
            return Repl(erase_channels(body))
        case Null() | Ok():
            return p
    raise TypeError(f"not a process: {p!r}")


ERASED_LANGUAGE = FeatureVector.parse("L[A,M,D,NO,J]")


def _thm7_channel_dataspace(case: ReproCase, bounds: Bounds, options: dict) -> ReproReport:
    report = _new_report(case)
    procs = case.parsed()
    lang = case.lang

    def redexes(proc: Process, in_lang: FeatureVector) -> int:
        return len(enumerate_redexes(normalize(proc), in_lang, bounds.max_repl_unfold))

    pq = Par(procs["P"], procs["Q"])
    sq = Par(procs["S"], procs["Q"])
    report.check("P | Q succeeds", observations(explore(pq, lang, bounds)).may_succeed)
    report.check("S | T reduces", redexes(Par(procs["S"], procs["T"]), lang) > 0)
    report.check("S | Q has no redex", redexes(sq, lang) == 0)
    erased = erase_channels(sq)
    report.say(f"erased S | Q = {print_process(erased)} in {ERASED_LANGUAGE}")
    report.check("erased S | Q reacts", redexes(erased, ERASED_LANGUAGE) > 0)
    report.check(
        "erasing channels is not an encoding (it adds behaviour)",
        observations(explore(erased, ERASED_LANGUAGE, bounds)).may_succeed,
    )
    return report


def _thm6_intensional(case: ReproCase, bounds: Bounds, options: dict) -> ReproReport:
    report = _new_report(case)
    s = case.parsed()

    def reacts(i: int, j: int) -> bool:
        return bool(enumerate_redexes(normalize(Par(s[f"S{i}"], s[f"S{j}"])), case.lang, bounds.max_repl_unfold))

    report.check("S0 reacts with S1", reacts(0, 1))
    report.check("S0 reacts with S2", reacts(0, 2))
    report.check("S3 does not react with S1", not reacts(3, 1))
    report.check("S3 reacts with S2", reacts(3, 2))
    arities = {name: combined_arity(p) for name, p in s.items()}
    report.say(f"combined arity: {arities}")
    report.check("every input has combined arity 1", all(arities[n] == 1 for n in ("S0", "S3")))
    atom = s["S3"].atoms[0]
    tested = [leaf for leaf in leaves(atom.patterns[0]) if isinstance(leaf, Protect)]
    report.check("S3 tests three names", len(tested) == 3, f"{len(tested)} protected names")
    return report


OMEGA = "(nu d)(!(d(x) >> d<x>) | d<a>)"
OMEGA_DATASPACE = "(nu d)(!((#d) >> <d>.0) | <d>.0)"

CASES: dict[str, ReproCase] = {
    case.id: case
    for case in (
        ReproCase(
            "intro-join",
            "L[S,M,C,NO,J]",
            "m<a>.P1 | n<b>.P2 | (m(x)|n(y)) >> Q reduces in one degree-3 step",
            {
                "soup": "m<a>.p<a>.0 | n<b>.q<b>.0 | (m(x) | n(y)) >> x<y>.0",
                "expected": "p<a>.0 | q<b>.0 | a<b>.0",
            },
            _intro_join,
        ),
        ReproCase(
            "thm1-degree",
            "L[A,M,C,NO,J]",
            "a k-atom join and its k outputs: every participant is needed",
            {},
            _thm1_degree,
        ),
        ReproCase(
            "sec5-sync-async",
            "L[S,M,C,NO,J]",
            "the synchronous-to-asynchronous join encoding passes every criterion",
            {
                "handshake": "n<a>.ok | n(x).0",
                "intro": "m<a>.ok | n<b>.0 | (m(x) | n(y)) >> x<y>.0",
                "three-way": "(a(x) | b(y) | c(z)) >> ok | a<u>.0 | b<v>.0 | c<w>.0",
            },
            _sec5_sync_async,
        ),
        ReproCase(
            "sec8-deadlock",
            "L[A,M,C,NO,J]",
            "flattening a join into nested inputs deadlocks where the join cannot",
            {"soup": f"(c1(w) | c2(x)) >> ok | (c2(y) | c1(z)) >> {OMEGA} | c1<a> | c2<b>"},
            _sec8_deadlock,
        ),
        ReproCase(
            "thm4-poly-separation",
            "L[A,P,D,NO,B]",
            "P = <a,b> and Q = (x,y).ok react in one polyadic step",
            {"P": "<a, b>", "Q": "(x, y).ok"},
            _thm4_poly,
        ),
        ReproCase(
            "thm8-namematch-witness",
            "L[A,M,D,NM,B]",
            "P = <a> and Q = (#a).(<b> | ok): swapping a and b on either side blocks the match",
            {"P": "<a>", "Q": "(#a).(<b> | ok)"},
            _thm8_namematch,
        ),
        ReproCase(
            "thm5-dataspace-sync",
            "L[S,M,D,NM,J]",
            "P | Q terminates while P | {b/a}Q diverges",
            {"P": f"(x) >> if x = b then {OMEGA_DATASPACE}", "Q": "<a>.0"},
            _thm5_dataspace_sync,
        ),
        ReproCase(
            "thm7-channel-dataspace",
            "L[A,M,C,NO,B]",
            "channels keep S | Q apart; erasing them makes it react",
            {"P": "a<b>", "Q": "a(x).ok", "S": "c<d>", "T": "c(z).0"},
            _thm7_channel_dataspace,
        ),
        ReproCase(
            "thm6-intensional",
            "L[A,M,D,I,B]",
            "an arity-1 intensional pattern that tests three names",
            {"S0": "(x).<m>", "S1": "<a>", "S2": "<a1 * a2 * a3>", "S3": "(#a1 * #a2 * #a3).<m>"},
            _thm6_intensional,
        ),
    )
}


def get_case(case_id: str) -> Optional[ReproCase]:
    return CASES.get(case_id)
