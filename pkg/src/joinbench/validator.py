"""
Bounded checks of the validity criteria for an encoding.

Each check explores the source process and its translation within Bounds
and returns a Verdict:

    pass            no counterexample, and the explorations were complete
                    wherever completeness matters for the claim
    fail            a counterexample; `witness` is a replayable trace of
                    printed states
    inconclusive    a bound was hit before a verdict; `bound` says which

Behavioural equivalence of target states is approximated by equality of
observation profiles (may succeed, may get stuck, may diverge, weak barbs).
Every verdict that relies on it says so in its note.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from enum import StrEnum
from typing import Iterable, Optional

from joinbench.encodings import EncodingSpec, induced_renaming
from joinbench.language import FeatureVector, Synchronism, Medium, Coordination
from joinbench.matching import Substitution, apply_process
from joinbench.semantics import (
    Bounds,
    StateBehaviour,
    StateGraph,
    cycle_states,
    explore,
    normalize,
    observations,
    state_profiles,
    stuck_states,
    struct_eq,
)
from joinbench.syntax import (
    NULL,
    OK,
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
    free_names,
    print_process,
)
from joinbench.terms import Bind, Name

PROFILE_NOTE = "behavioural equivalence approximated by observation-profile equality"


class Criterion(StrEnum):
    COMPOSITIONALITY = "compositionality"
    NAME_INVARIANCE = "name_invariance"
    OPERATIONAL_CORRESPONDENCE = "operational_correspondence"
    DIVERGENCE_REFLECTION = "divergence_reflection"
    SUCCESS_SENSITIVITY = "success_sensitivity"
    DEADLOCK_REFLECTION = "deadlock_reflection"


class Status(StrEnum):
    PASS = "pass"
    FAIL = "fail"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class Verdict:
    criterion: Criterion
    status: Status
    witness: tuple[str, ...] = ()
    bound: Optional[Bounds] = None
    note: str = ""
    subject: str = ""

    def __post_init__(self):
        if self.status is Status.FAIL and not self.witness:
            raise ValueError(f"{self.criterion} fail verdict without a witness")
        if self.status is Status.INCONCLUSIVE and self.bound is None:
            raise ValueError(f"{self.criterion} inconclusive verdict without a bound")

    def __str__(self) -> str:
        parts = [f"{self.criterion:<27}", f"{self.status:<12}"]
        if self.subject:
            parts.append(self.subject)
        if self.note:
            parts.append(f"({self.note})")
        return " ".join(parts).rstrip()

    def as_dict(self) -> dict:
        return {
            "criterion": str(self.criterion),
            "status": str(self.status),
            "subject": self.subject,
            "witness": list(self.witness),
            "bound": str(self.bound) if self.bound else None,
            "note": self.note,
        }


def _inconclusive(criterion: Criterion, bounds: Bounds, note: str, subject: str = "") -> Verdict:
    return Verdict(criterion, Status.INCONCLUSIVE, bound=bounds, note=note, subject=subject)


def _explore_pair(spec: EncodingSpec, p: Process, bounds: Bounds) -> tuple[StateGraph, StateGraph]:
    return explore(p, spec.source, bounds), explore(spec.translate(p), spec.target, bounds)


# --- Success sensitivity ---


def check_success_sensitivity(spec: EncodingSpec, p: Process, bounds: Bounds = Bounds()) -> Verdict:
    crit = Criterion.SUCCESS_SENSITIVITY
    src, tgt = _explore_pair(spec, p, bounds)
    s_ok, t_ok = observations(src).may_succeed, observations(tgt).may_succeed
    if s_ok == t_ok:
        if s_ok or (src.complete and tgt.complete):
            return Verdict(crit, Status.PASS, note=f"both {'succeed' if s_ok else 'never succeed'}")
        return _inconclusive(crit, bounds, "no success seen on either side before the bound")
    winner, loser = (src, tgt) if s_ok else (tgt, src)
    if not loser.complete:
        return _inconclusive(crit, bounds, "success on one side only, other side truncated")
    reached = next(i for i, s in enumerate(winner.states) if s.has_success)
    side = "source" if s_ok else "target"
    return Verdict(crit, Status.FAIL, winner.trace_to(reached), note=f"only the {side} succeeds")


# --- Divergence reflection ---


def check_divergence_reflection(spec: EncodingSpec, p: Process, bounds: Bounds = Bounds()) -> Verdict:
    crit = Criterion.DIVERGENCE_REFLECTION
    src, tgt = _explore_pair(spec, p, bounds)
    src_cycles, tgt_cycles = cycle_states(src), cycle_states(tgt)
    if src_cycles:
        return Verdict(crit, Status.PASS, note="source diverges")
    if not tgt_cycles:
        if tgt.complete:
            return Verdict(crit, Status.PASS, note="neither side diverges")
        return _inconclusive(crit, bounds, "target exploration truncated")
    if not src.complete:
        return _inconclusive(crit, bounds, "target diverges, source exploration truncated")
    return Verdict(crit, Status.FAIL, tgt.trace_to(tgt_cycles[0]), note="target diverges, source does not")


# --- Deadlock reflection ---


def check_deadlock_reflection(spec: EncodingSpec, p: Process, bounds: Bounds = Bounds()) -> Verdict:
    crit = Criterion.DEADLOCK_REFLECTION
    src, tgt = _explore_pair(spec, p, bounds)
    tgt_stuck = stuck_states(tgt)
    if not tgt_stuck:
        if tgt.complete:
            return Verdict(crit, Status.PASS, note="target never gets stuck")
        return _inconclusive(crit, bounds, "target exploration truncated")
    if stuck_states(src):
        return Verdict(crit, Status.PASS, note="source can get stuck too")
    if not src.complete:
        return _inconclusive(crit, bounds, "target gets stuck, source exploration truncated")
    return Verdict(crit, Status.FAIL, tgt.trace_to(tgt_stuck[0]), note="target gets stuck, source cannot")


# --- Operational correspondence ---


def _translated_profile(spec, state_process, tgt, tgt_profiles, bounds) -> Optional[StateBehaviour]:
    image = spec.translate(state_process)
    j = tgt.index.get(normalize(image))
    if j is not None:
        return tgt_profiles[j]
    graph = explore(image, spec.target, bounds)
    if not graph.complete:
        return None
    return state_profiles(graph)[0]


def check_operational_correspondence(spec: EncodingSpec, p: Process, bounds: Bounds = Bounds()) -> Verdict:
    crit = Criterion.OPERATIONAL_CORRESPONDENCE
    src, tgt = _explore_pair(spec, p, bounds)
    if not (src.complete and tgt.complete):
        return _inconclusive(crit, bounds, "exploration truncated")
    tgt_profiles = state_profiles(tgt)
    available = set(tgt_profiles)

    goals: list[StateBehaviour] = []
    for i, state in enumerate(src.states):
        goal = _translated_profile(spec, state.to_process(), tgt, tgt_profiles, bounds)
        if goal is None:
            return _inconclusive(crit, bounds, f"translation of source state {i} explodes the bound")
        if goal not in available:
            return Verdict(
                crit,
                Status.FAIL,
                src.trace_to(i),
                note=f"completeness: no target state behaves like the translation of source state {i}; "
                + PROFILE_NOTE,
            )
        goals.append(goal)

    # Soundness: every target state can still reach a translated source reduct.
    wanted = set(goals)
    good = {j for j, prof in enumerate(tgt_profiles) if prof in wanted}
    preds: list[list[int]] = [[] for _ in tgt.states]
    for e in tgt.edges:
        preds[e.target].append(e.source)
    reach = set(good)
    todo = list(good)
    while todo:
        for i in preds[todo.pop()]:
            if i not in reach:
                reach.add(i)
                todo.append(i)
    for j in range(len(tgt.states)):
        if j not in reach:
            return Verdict(
                crit,
                Status.FAIL,
                tgt.trace_to(j),
                note=f"soundness: target state {j} cannot reach any translated source reduct; " + PROFILE_NOTE,
            )
    return Verdict(crit, Status.PASS, note=PROFILE_NOTE)


# --- Name invariance ---


def _injective(sigma, names: Iterable[Name]) -> bool:
    images = [sigma.get(n, n) for n in set(names) | set(sigma)]
    return len(images) == len(set(images))


def default_substitutions(p: Process) -> list[Substitution]:
    """Identity, plus a swap and a collapse of the first two free names."""
    names = sorted(free_names(p), key=str)
    samples = [Substitution()]
    if len(names) >= 2:
        a, b = names[:2]
        samples.append(Substitution({a: b, b: a}))
        samples.append(Substitution({a: b}))
    return samples


def check_name_invariance(
    spec: EncodingSpec,
    p: Process,
    substitutions: Optional[list] = None,
    bounds: Bounds = Bounds(),
) -> Verdict:
    crit = Criterion.NAME_INVARIANCE
    if substitutions is None:
        substitutions = default_substitutions(p)
    image = spec.translate(p)
    approximated = False
    for sigma in substitutions:
        sigma = Substitution(sigma)
        left = spec.translate(apply_process(sigma, p))
        right = apply_process(induced_renaming(spec, sigma), image)
        if _injective(sigma, free_names(p)):
            if not struct_eq(left, right):
                return Verdict(
                    crit,
                    Status.FAIL,
                    (print_process(left), print_process(right)),
                    note=f"sigma={sigma}: translation of renamed process differs from renamed translation",
                )
            continue
        approximated = True
        lg, rg = explore(left, spec.target, bounds), explore(right, spec.target, bounds)
        if not (lg.complete and rg.complete):
            return _inconclusive(crit, bounds, f"sigma={sigma}: exploration truncated")
        if observations(lg).behaviour != observations(rg).behaviour:
            return Verdict(
                crit,
                Status.FAIL,
                (print_process(left), print_process(right)),
                note=f"sigma={sigma}: profiles differ; " + PROFILE_NOTE,
            )
    return Verdict(crit, Status.PASS, note=PROFILE_NOTE if approximated else "exact")


# --- Compositionality ---


def fill(context: Process, images: dict[int, Process]) -> Process:
    """Replace every hole [[i]] by images[i], capturing names on purpose."""
    match context:
        case Hole(label):
            return images.get(label, context)
        case Null() | Ok():
            return context
        case Output(subject, args, cont):
            return Output(subject, args, None if cont is None else fill(cont, images))
        case Join(atoms, body):
            return Join(atoms, fill(body, images))
        case Restrict(name, body):
            return Restrict(name, fill(body, images))
        case Par(left, right):
            return Par(fill(left, images), fill(right, images))
        case Cond(lhs, rhs, then, orelse):
            return Cond(lhs, rhs, fill(then, images), fill(orelse, images))
        case Repl(body):
            return Repl(fill(body, images))
    raise TypeError(f"not a process: {context!r}")


def _hole_paths(p: Process, path: tuple = ()) -> list[tuple[int, tuple]]:
    """Each hole with the operators above it."""
    match p:
        case Hole(label):
            return [(label, path)]
        case Output(_, _, cont) if cont is not None:
            return _hole_paths(cont, path + ("out",))
        case Join(_, body):
            return _hole_paths(body, path + ("in",))
        case Restrict(_, body):
            return _hole_paths(body, path + ("nu",))
        case Par(left, right):
            return _hole_paths(left, path + ("par",)) + _hole_paths(right, path + ("par",))
        case Cond(_, _, then, orelse):
            return _hole_paths(then, path + ("if",)) + _hole_paths(orelse, path + ("if",))
        case Repl(body):
            return _hole_paths(body, path + ("repl",))
    return []


def operator_templates(lang: FeatureVector) -> dict[str, tuple[Process, int]]:
    """One template per operator of lang with holes [[1]].., and its hole count."""
    n = Name("n") if lang.medium is Medium.C else None
    m = Name("m") if lang.medium is Medium.C else None
    a, b, x, y = Name("a"), Name("b"), Name("x"), Name("y")
    sync = lang.synchronism is Synchronism.S
    templates: dict[str, tuple[Process, int]] = {
        "nil": (NULL, 0),
        "ok": (OK, 0),
        "output": (Output(n, (a,), Hole(1)), 1) if sync else (Output(n, (a,)), 0),
        "input": (Join((InputAtom(n, (Bind(x),)),), Hole(1)), 1),
        "restriction": (Restrict(a, Hole(1)), 1),
        "parallel": (Par(Hole(1), Hole(2)), 2),
        "conditional": (Cond(a, b, Hole(1), Hole(2)), 2),
        "replication": (Repl(Hole(1)), 1),
    }
    if lang.coordination is Coordination.J:
        templates["join"] = (Join((InputAtom(n, (Bind(x),)), InputAtom(m, (Bind(y),))), Hole(1)), 1)
    return templates


def _hole_samples(lang: FeatureVector) -> list[Process]:
    n = Name("n") if lang.medium is Medium.C else None
    cont = NULL if lang.synchronism is Synchronism.S else None
    return [OK, Output(n, (Name("x"),), cont)]


def check_compositionality(spec: EncodingSpec) -> Verdict:
    crit = Criterion.COMPOSITIONALITY
    samples = _hole_samples(spec.source)
    for op, (template, holes) in operator_templates(spec.source).items():
        context = spec.translate(template, allow_holes=True)
        paths = _hole_paths(context)
        labels = sorted(label for label, _ in paths)
        if labels != list(range(1, holes + 1)):
            return Verdict(
                crit,
                Status.FAIL,
                (print_process(template), print_process(context)),
                note=f"{op}: context must use each of its {holes} holes exactly once",
            )
        if op == "parallel" and any(set(path) - {"par", "nu"} for _, path in paths):
            return Verdict(
                crit,
                Status.FAIL,
                (print_process(template), print_process(context)),
                note="parallel: holes are not at top level",
            )
        for chosen in itertools.product(samples, repeat=holes):
            images = {i + 1: spec.translate(s) for i, s in enumerate(chosen)}
            direct = spec.translate(fill(template, dict(enumerate(chosen, 1))))
            via_context = fill(context, images)
            if not struct_eq(direct, via_context):
                return Verdict(
                    crit,
                    Status.FAIL,
                    (print_process(direct), print_process(via_context)),
                    note=f"{op}: translation is not the fixed context filled with translated parts",
                )
    return Verdict(crit, Status.PASS, note="every operator translates through a fixed context")


# --- Whole corpus ---

PER_PROCESS = (
    check_success_sensitivity,
    check_divergence_reflection,
    check_operational_correspondence,
    check_deadlock_reflection,
)


def check_process(spec: EncodingSpec, name: str, p: Process, bounds: Bounds = Bounds()) -> list[Verdict]:
    verdicts = [check(spec, p, bounds) for check in PER_PROCESS]
    verdicts.append(check_name_invariance(spec, p, bounds=bounds))
    return [_about(v, name) for v in verdicts]


def _about(v: Verdict, subject: str) -> Verdict:
    return Verdict(v.criterion, v.status, v.witness, v.bound, v.note, subject)


def run_all(
    spec: EncodingSpec,
    corpus: list[tuple[str, Process]],
    bounds: Bounds = Bounds(),
    jobs: int = 1,
    progress=None,
) -> list[Verdict]:
    """Compositionality once, then every per-process check on each corpus entry, in corpus order."""
    verdicts = [_about(check_compositionality(spec), spec.name)]

    def one(entry):
        name, p = entry
        if progress is not None:
            progress(f"checking {name}")
        return check_process(spec, name, p, bounds)

    if jobs > 1:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(one, corpus))
    else:
        results = [one(entry) for entry in corpus]
    for batch in results:
        verdicts.extend(batch)
    return verdicts


def summarize(verdicts: list[Verdict]) -> dict[str, dict[str, int]]:
    """Counts per criterion and status."""
    table: dict[str, dict[str, int]] = {}
    for v in verdicts:
        row = table.setdefault(str(v.criterion), {str(s): 0 for s in Status})
        row[str(v.status)] += 1
    return table
