"""
Reduction semantics: canonical states, redexes, steps and bounded exploration.

normalize() maps a process to a CanonicalState, a representative of its
structural-congruence class without replication unfolding:

- parallel composition is flattened into a sorted multiset of threads
  (outputs, joins, replications, ok), with 0 dropped;
- restrictions are hoisted to the top of their scope and unused ones dropped;
- conditionals are resolved wherever both sides are decided, i.e. equal, or
  built only from names no enclosing input can instantiate;
- every bound name is renamed to a canonical fresh name `v'n`. Input binders
  are numbered by nesting level; the order of a scope's restricted names is
  the one giving the smallest printed state, found by a search that only
  branches between names the printed form cannot tell apart yet.

Replication is unfolded lazily by enumerate_redexes: every `!P` thread
contributes up to max_repl_unfold virtual copies of P, used in increasing
order, so canonical states stay finite. A `!Q` inside a copy is unfolded
the same way, and a `!P` whose copy holds ok counts as ok.

Usage:
    from joinbench.semantics import explore, observations

    graph = explore(parse("<a> | (x) >> ok"), FeatureVector.parse("L[A,M,D,NO,J]"), Bounds())
    observations(graph).may_succeed   # True
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Iterator, NamedTuple, Optional

from joinbench.config import DEFAULT_MAX_DEPTH, DEFAULT_MAX_REPL, DEFAULT_MAX_STATES
from joinbench.language import FeatureVector
from joinbench.matching import Substitution, apply_process, poly_match, union_disjoint
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
    names_in_order,
    par,
    par_components,
    parse,
    print_process,
    restrict,
)
from joinbench.terms import (
    Bind,
    Compound,
    Name,
    Origin,
    PCompound,
    Pattern,
    Protect,
    Term,
    binder_list,
    format_term,
    free_names as term_free_names,
)

CANONICAL_STEM = "v"
_PLACEHOLDER = "?"


@dataclass(frozen=True)
class Bounds:
    max_states: int = DEFAULT_MAX_STATES
    max_depth: int = DEFAULT_MAX_DEPTH
    max_repl_unfold: int = DEFAULT_MAX_REPL

    def __str__(self) -> str:
        return f"max_states={self.max_states} max_depth={self.max_depth} max_repl={self.max_repl_unfold}"


@dataclass(frozen=True)
class CanonicalState:
    restricted: tuple[Name, ...]
    threads: tuple[Process, ...]

    def to_process(self) -> Process:
        return restrict(self.restricted, par(*self.threads))

    def __str__(self) -> str:
        return print_process(self.to_process())

    @property
    def has_success(self) -> bool:
        return any(_offers_ok(t) for t in self.threads)


def _offers_ok(thread: Process) -> bool:
    """ok is a thread, or a component of one unfolding of a (nested) `!`."""
    match thread:
        case Ok():
            return True
        case Repl(body):
            while isinstance(body, Restrict):
                body = body.body
            return any(_offers_ok(t) for t in par_components(body))
    return False


# --- Canonical forms ---


def _key_fmt(name: Name) -> str:
    return _PLACEHOLDER if name.ident == _PLACEHOLDER else str(name)


def _key(p: Process) -> str:
    return print_process(p, _key_fmt)


def _rename_term(t: Term, env: dict[Name, Name]) -> Term:
    match t:
        case Name():
            return env.get(t, t)
        case Compound(left, right):
            return Compound(_rename_term(left, env), _rename_term(right, env))
    raise TypeError(f"not a term: {t!r}")


def _rename_pattern(p: Pattern, outer: dict[Name, Name], binders: dict[Name, Name]) -> Pattern:
    match p:
        case Bind(name):
            return Bind(binders[name])
        case Protect(name):
            return Protect(outer.get(name, name))
        case PCompound(left, right):
            return PCompound(_rename_pattern(left, outer, binders), _rename_pattern(right, outer, binders))
    raise TypeError(f"not a pattern: {p!r}")


class _Canonicaliser:
    def __init__(self, root: Process):
        self._taken = {
            n.counter
            for n in free_names(root)
            if n.origin is Origin.FRESH and n.ident == CANONICAL_STEM
        }
        self._levels: list[Name] = []
        self._temps = 0
        self._memo: dict = {}

    def level(self, i: int) -> Name:
        while len(self._levels) < i:
            counter = (self._levels[-1].counter if self._levels else 0) + 1
            while counter in self._taken:
                counter += 1
            self._levels.append(Name(CANONICAL_STEM, Origin.FRESH, counter))
        return self._levels[i - 1]

    def _temp(self) -> Name:
        self._temps += 1
        return Name("%t", Origin.FRESH, self._temps)

    def _flatten(self, p: Process, variables: frozenset, threads: list, restricted: list) -> None:
        match p:
            case Null():
                return
            case Par(left, right):
                self._flatten(left, variables, threads, restricted)
                self._flatten(right, variables, threads, restricted)
            case Restrict(name, body):
                temp = self._temp()
                restricted.append(temp)
                self._flatten(apply_process({name: temp}, body), variables, threads, restricted)
            case Cond(lhs, rhs, then, orelse):
                if lhs == rhs:
                    self._flatten(then, variables, threads, restricted)
                elif not ((term_free_names(lhs) | term_free_names(rhs)) & variables):
                    self._flatten(orelse, variables, threads, restricted)
                else:
                    threads.append(p)
            case _:
                threads.append(p)

    def body(self, p: Process, level: int, env: dict, variables: frozenset) -> Process:
        fn = free_names(p)
        memo_key = (
            p,
            level,
            tuple(sorted((k, v) for k, v in env.items() if k in fn)),
            variables & fn,
        )
        cached = self._memo.get(memo_key)
        if cached is not None:
            return cached

        threads: list[Process] = []
        restricted: list[Name] = []
        self._flatten(p, variables, threads, restricted)
        used = set().union(*(free_names(t) for t in threads)) if threads else set()
        restricted = [r for r in restricted if r in used]
        if restricted:
            restricted = self._visible(threads, restricted, level, env, variables)

        labels = self._search(threads, restricted, level, env, variables) if restricted else {}
        inner_env = dict(env)
        for name, label in labels.items():
            inner_env[name] = self.level(level + label)
        inner_level = level + len(restricted)
        canon = sorted(
            (self.thread(t, inner_level, inner_env, variables) for t in threads),
            key=_key,
        )
        result = restrict([self.level(level + i) for i in range(len(restricted))], par(*canon))
        self._memo[memo_key] = result
        return result

    def thread(self, t: Process, level: int, env: dict, variables: frozenset) -> Process:
        match t:
            case Ok() | Hole() | Null():
                return t
            case Output(subject, args, cont):
                return Output(
                    None if subject is None else _rename_term(subject, env),
                    tuple(_rename_term(a, env) for a in args),
                    None if cont is None else self.body(cont, level, env, variables),
                )
            case Join(atoms, body):
                binders: dict[Name, Name] = {}
                next_level = level
                for atom in atoms:
                    for pattern in atom.patterns:
                        for b in binder_list(pattern):
                            binders[b] = self.level(next_level)
                            next_level += 1
                new_atoms = tuple(
                    InputAtom(
                        None if a.subject is None else _rename_term(a.subject, env),
                        tuple(_rename_pattern(pat, env, binders) for pat in a.patterns),
                    )
                    for a in atoms
                )
                inner_env = {**env, **binders}
                return Join(new_atoms, self.body(body, next_level, inner_env, variables | set(binders)))
            case Repl(body):
                return Repl(self.body(body, level, env, variables))
            case Cond(lhs, rhs, then, orelse):
                return Cond(
                    _rename_term(lhs, env),
                    _rename_term(rhs, env),
                    self.body(then, level, env, variables),
                    self.body(orelse, level, env, variables),
                )
        raise TypeError(f"not a thread: {t!r}")

    def _visible(self, threads, restricted, level, env, variables) -> list[Name]:
        """Restricted names still present once nested conditionals are resolved."""
        scoped = dict(env)
        for i, r in enumerate(restricted):
            scoped[r] = Name(_PLACEHOLDER, Origin.FRESH, i)
        seen: set[Name] = set()
        for t in threads:
            seen.update(names_in_order(self.thread(t, level + len(restricted), scoped, variables)))
        return [r for r in restricted if scoped[r] in seen]

    def _search(self, threads, restricted, level, env, variables) -> dict[Name, int]:
        inner_level = level + len(restricted)
        placeholders = {r: Name(_PLACEHOLDER, Origin.FRESH, i) for i, r in enumerate(restricted)}
        owner = {ph: r for r, ph in placeholders.items()}
        best: list = []
        seen: set = set()

        def render(labels: dict) -> list[Process]:
            scoped = dict(env)
            for r in restricted:
                scoped[r] = self.level(level + labels[r]) if r in labels else placeholders[r]
            return [self.thread(t, inner_level, scoped, variables) for t in threads]

        def go(labels: dict) -> None:
            frozen = frozenset(labels.items())
            if frozen in seen:
                return
            seen.add(frozen)
            canon = render(labels)
            if len(labels) == len(restricted):
                result = tuple(sorted(_key(c) for c in canon))
                if not best or result < best[0]:
                    best[:] = [result, dict(labels)]
                return
            pending = []
            for c in canon:
                open_names = [owner[n] for n in names_in_order(c) if n in owner]
                if open_names:
                    pending.append((_key(c), open_names))
            least = min(k for k, _ in pending)
            candidates: list[Name] = []
            for k, open_names in pending:
                if k == least:
                    candidates.extend(n for n in open_names if n not in candidates)
            for candidate in candidates:
                go({**labels, candidate: len(labels)})

        go({})
        return best[1]


def canonical_process(p: Process) -> Process:
    return _Canonicaliser(p).body(p, 1, {}, frozenset())


def normalize(p: Process) -> CanonicalState:
    body = canonical_process(p)
    restricted = []
    while isinstance(body, Restrict):
        restricted.append(body.name)
        body = body.body
    threads = () if isinstance(body, Null) else tuple(par_components(body))
    return CanonicalState(tuple(restricted), threads)


def struct_eq(p: Process, q: Process) -> bool:
    return normalize(p) == normalize(q)


# --- Redexes ---


class ThreadRef(NamedTuple):
    """A thread of a state.

    `chain` walks into replicated threads, one (copy, part) pair per level of
    `!`: copy numbers start at 1 and part indexes the copy's parallel components.
    """

    index: int
    chain: tuple[tuple[int, int], ...] = ()

    def __str__(self) -> str:
        return str(self.index) + "".join(f"!{copy}.{part}" for copy, part in self.chain)


@dataclass(frozen=True)
class Redex:
    join_index: ThreadRef
    output_indices: tuple[ThreadRef, ...]
    substitution: Substitution
    degree: int

    def __str__(self) -> str:
        outs = ", ".join(str(r) for r in self.output_indices)
        return f"join {self.join_index} <- [{outs}] degree={self.degree} sigma={self.substitution}"


Site = tuple[int, tuple[tuple[int, int], ...]]


class _Copies:
    """Unfolded copies of the replicated threads of a state, nested ones included."""

    def __init__(self, state: CanonicalState):
        self.state = state
        self._cache: dict[tuple[Site, int], tuple[list[Name], list[Process]]] = {}

    def repl_at(self, site: Site) -> Repl:
        index, prefix = site
        if not prefix:
            return self.state.threads[index]
        copy, part = prefix[-1]
        return self.copy((index, prefix[:-1]), copy)[1][part]

    def copy(self, site: Site, copy: int) -> tuple[list[Name], list[Process]]:
        """Copy `copy` of the `!P` at site: its restricted names, renamed apart, and its threads."""
        key = (site, copy)
        if key not in self._cache:
            index, prefix = site
            tag = f"%u{index}" + "".join(f".{c}.{p}" for c, p in prefix) + f".{copy}"
            body = self.repl_at(site).body
            restricted: list[Name] = []
            while isinstance(body, Restrict):
                renamed = Name(tag, Origin.FRESH, len(restricted) + 1)
                body = apply_process({body.name: renamed}, body.body)
                restricted.append(renamed)
            self._cache[key] = restricted, [t for t in par_components(body) if not isinstance(t, Null)]
        return self._cache[key]

    def thread(self, ref: ThreadRef) -> Process:
        if not ref.chain:
            return self.state.threads[ref.index]
        copy, part = ref.chain[-1]
        return self.copy((ref.index, ref.chain[:-1]), copy)[1][part]


def _participants(state: CanonicalState, cap: int) -> list[tuple[ThreadRef, Process]]:
    copies = _Copies(state)
    pool = []

    def visit(site: Site):
        index, prefix = site
        for copy in range(1, cap + 1):
            for j, part in enumerate(copies.copy(site, copy)[1]):
                chain = prefix + ((copy, j),)
                if isinstance(part, (Output, Join)):
                    pool.append((ThreadRef(index, chain), part))
                elif isinstance(part, Repl):
                    visit((index, chain))

    for i, t in enumerate(state.threads):
        if isinstance(t, (Output, Join)):
            pool.append((ThreadRef(i), t))
        elif isinstance(t, Repl):
            visit((i, ()))
    return pool


def _sites(refs) -> set[tuple[Site, int]]:
    """Every (replicated site, copy) a set of thread references unfolds."""
    return {
        ((ref.index, ref.chain[:level]), copy)
        for ref in refs
        for level, (copy, _) in enumerate(ref.chain)
    }


def _copies_in_order(refs) -> bool:
    used: dict[Site, set[int]] = {}
    for site, copy in _sites(refs):
        used.setdefault(site, set()).add(copy)
    return all(copies == set(range(1, len(copies) + 1)) for copies in used.values())


def _assignments(join: Join, join_ref: ThreadRef, outputs) -> Iterator[tuple[tuple, Substitution]]:
    """Ordered choices of distinct outputs, one per atom, that match."""

    def go(i: int, chosen: list, sigma: Substitution):
        if i == len(join.atoms):
            yield tuple(chosen), sigma
            return
        atom = join.atoms[i]
        for ref, out in outputs:
            if ref == join_ref or ref in chosen or out.subject != atom.subject:
                continue
            matched = poly_match(out.args, atom.patterns)
            if matched is None:
                continue
            yield from go(i + 1, chosen + [ref], union_disjoint(sigma, matched))

    yield from go(0, [], Substitution())


def enumerate_redexes(
    state: CanonicalState, lang: FeatureVector, max_repl_unfold: int = DEFAULT_MAX_REPL
) -> list[Redex]:
    pool = _participants(state, max_repl_unfold)
    outputs = [(ref, t) for ref, t in pool if isinstance(t, Output)]
    contents = {ref: print_process(t) for ref, t in pool}
    found: dict = {}
    for join_ref, join in pool:
        if not isinstance(join, Join):
            continue
        if not lang.is_joining and len(join.atoms) != 1:
            continue
        for chosen, sigma in _assignments(join, join_ref, outputs):
            if not _copies_in_order((join_ref, *chosen)):
                continue
            key = (sigma, contents[join_ref], tuple(sorted(contents[r] for r in chosen)))
            if key not in found:
                found[key] = Redex(join_ref, chosen, sigma, len(chosen) + 1)
    return sorted(found.values(), key=lambda r: (r.degree, r.join_index, r.output_indices))


def step(state: CanonicalState, redex: Redex) -> CanonicalState:
    refs = (redex.join_index, *redex.output_indices)
    copies = _Copies(state)
    join = copies.thread(redex.join_index)
    outputs = [copies.thread(r) for r in redex.output_indices]
    consumed = set(refs)

    # a replicated thread, top-level or inside a copy, is never consumed: it stays beside its copies
    threads = [t for i, t in enumerate(state.threads) if ThreadRef(i) not in consumed]
    restricted = list(state.restricted)
    for (index, prefix), copy in sorted(_sites(refs)):
        names, parts = copies.copy((index, prefix), copy)
        restricted.extend(names)
        threads.extend(
            p for j, p in enumerate(parts) if ThreadRef(index, prefix + ((copy, j),)) not in consumed
        )
    threads.extend(o.cont for o in outputs if o.cont is not None)
    threads.append(apply_process(redex.substitution, join.body))
    return normalize(restrict(restricted, par(*threads)))


def successors(state: CanonicalState, lang: FeatureVector, max_repl_unfold: int = DEFAULT_MAX_REPL):
    return [(r, step(state, r)) for r in enumerate_redexes(state, lang, max_repl_unfold)]


# --- Exploration ---


@dataclass(frozen=True)
class Edge:
    source: int
    target: int
    redex: Redex


@dataclass
class StateGraph:
    language: FeatureVector
    bounds: Bounds
    states: list[CanonicalState] = field(default_factory=list)
    depths: list[int] = field(default_factory=list)
    redex_counts: list[Optional[int]] = field(default_factory=list)
    edges: list[Edge] = field(default_factory=list)
    truncated: bool = False
    depth_limited: bool = False
    index: dict[CanonicalState, int] = field(default_factory=dict)

    def add(self, state: CanonicalState, depth: int) -> int:
        self.index[state] = len(self.states)
        self.states.append(state)
        self.depths.append(depth)
        self.redex_counts.append(None)
        return self.index[state]

    @property
    def complete(self) -> bool:
        return not (self.truncated or self.depth_limited)

    @property
    def bound_hit(self) -> bool:
        return not self.complete

    def out_edges(self) -> list[list[Edge]]:
        out: list[list[Edge]] = [[] for _ in self.states]
        for e in self.edges:
            out[e.source].append(e)
        return out

    def path_to(self, target: int) -> list[int]:
        """Shortest path of state ids from the root to target."""
        parent: dict[int, int] = {}
        for e in self.edges:
            if e.target not in parent and e.target != 0 and self.depths[e.target] == self.depths[e.source] + 1:
                parent[e.target] = e.source
        path = [target]
        while path[-1] != 0:
            path.append(parent[path[-1]])
        return path[::-1]

    def trace_to(self, target: int) -> tuple[str, ...]:
        return tuple(str(self.states[i]) for i in self.path_to(target))


def explore(
    p: Process,
    lang: FeatureVector,
    bounds: Bounds = Bounds(),
    jobs: int = 1,
    progress: Optional[Callable[[str], None]] = None,
) -> StateGraph:
    """Breadth-first exploration over canonical states, identical for every `jobs`."""
    graph = StateGraph(lang, bounds)
    graph.add(normalize(p), 0)
    frontier = [0]
    depth = 0

    def expand(i: int):
        return successors(graph.states[i], lang, bounds.max_repl_unfold)

    executor = ThreadPoolExecutor(max_workers=jobs) if jobs > 1 else None
    try:
        while frontier:
            if depth >= bounds.max_depth:
                # stuck frontier states count as expanded; the others stay None
                for i in frontier:
                    if enumerate_redexes(graph.states[i], lang, bounds.max_repl_unfold):
                        graph.depth_limited = True
                    else:
                        graph.redex_counts[i] = 0
                break
            if executor is not None and len(frontier) > 1:
                expansions = list(executor.map(expand, frontier))
            else:
                expansions = [expand(i) for i in frontier]

            next_frontier = []
            for i, succs in zip(frontier, expansions):
                graph.redex_counts[i] = len(succs)
                for redex, succ in succs:
                    j = graph.index.get(succ)
                    if j is None:
                        if len(graph.states) >= bounds.max_states:
                            graph.truncated = True
                            continue
                        j = graph.add(succ, depth + 1)
                        next_frontier.append(j)
                    graph.edges.append(Edge(i, j, redex))
            if progress is not None:
                progress(f"depth {depth}: {len(frontier)} expanded, {len(graph.states)} states")
            if graph.truncated:
                break
            frontier = next_frontier
            depth += 1
    finally:
        if executor is not None:
            executor.shutdown()
    return graph


def dump_graph(graph: StateGraph) -> str:
    """Machine-readable dump: states, then one `src -> dst degree=k sigma={...}` line per edge."""
    lines = [f"# language {graph.language}", f"# bounds {graph.bounds}"]
    for i, state in enumerate(graph.states):
        lines.append(f"state {i} depth={graph.depths[i]}: {state}")
    for e in graph.edges:
        lines.append(f"{e.source} -> {e.target} degree={e.redex.degree} sigma={e.redex.substitution}")
    lines.append(f"# states={len(graph.states)} edges={len(graph.edges)} complete={graph.complete}")
    return "\n".join(lines) + "\n"


# --- Observations ---


def barbs(state: CanonicalState) -> frozenset[str]:
    """Output subjects visible from outside; `<k>` for dataspace outputs of arity k."""
    hidden = set(state.restricted)
    out = set()

    def visit(thread: Process, local: set):
        match thread:
            case Output(None, args, _):
                out.add(f"<{len(args)}>")
            case Output(subject, _, _):
                if not (term_free_names(subject) & local):
                    out.add(format_term(subject))
            case Repl(body):
                names = set(local)
                while isinstance(body, Restrict):
                    names.add(body.name)
                    body = body.body
                for t in par_components(body):
                    visit(t, names)

    for t in state.threads:
        visit(t, hidden)
    return frozenset(out)


@dataclass(frozen=True)
class StateBehaviour:
    """What can be observed from one state onwards; equality stands in for behavioural equivalence."""

    may_succeed: bool
    reaches_stuck_without_success: bool
    diverges: bool
    barbs: frozenset[str]


@dataclass(frozen=True)
class ObservationProfile:
    may_succeed: bool
    reaches_stuck_without_success: bool
    diverges_within_bound: bool
    proven_divergence: bool
    bound_hit: bool
    max_degree_seen: Optional[int]
    explored_states: int
    barbs: frozenset[str] = frozenset()

    @property
    def behaviour(self) -> StateBehaviour:
        return StateBehaviour(
            self.may_succeed, self.reaches_stuck_without_success, self.proven_divergence, self.barbs
        )

    def as_dict(self) -> dict:
        return {
            "may_succeed": self.may_succeed,
            "reaches_stuck_without_success": self.reaches_stuck_without_success,
            "diverges_within_bound": self.diverges_within_bound,
            "proven_divergence": self.proven_divergence,
            "bound_hit": self.bound_hit,
            "max_degree_seen": self.max_degree_seen,
            "explored_states": self.explored_states,
            "barbs": sorted(self.barbs),
        }


def _components(n: int, succ: list[list[int]]) -> list[int]:
    """Strongly connected components (iterative Tarjan); returns the component id per node.

    Component ids come out in reverse topological order: successors first.
    """
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    comp = [-1] * n
    stack: list[int] = []
    counter = 0
    ncomp = 0
    for root in range(n):
        if index[root] != -1:
            continue
        work = [(root, 0)]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        while work:
            v, pos = work[-1]
            if pos < len(succ[v]):
                work[-1] = (v, pos + 1)
                w = succ[v][pos]
                if index[w] == -1:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack[w] = True
                    work.append((w, 0))
                elif on_stack[w]:
                    low[v] = min(low[v], index[w])
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
            if low[v] == index[v]:
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp[w] = ncomp
                    if w == v:
                        break
                ncomp += 1
    return comp


def state_profiles(graph: StateGraph) -> list[StateBehaviour]:
    """Behaviour of every explored state, from what it can reach inside the graph."""
    n = len(graph.states)
    succ = [sorted({e.target for e in edges}) for edges in graph.out_edges()]
    comp = _components(n, succ)
    ncomp = max(comp) + 1 if comp else 0
    members: list[list[int]] = [[] for _ in range(ncomp)]
    for v, c in enumerate(comp):
        members[c].append(v)

    succeed = [False] * ncomp
    stuck = [False] * ncomp
    diverge = [False] * ncomp
    seen_barbs: list[frozenset[str]] = [frozenset()] * ncomp
    for c in range(ncomp):  # successors come first
        local_barbs = set()
        for v in members[c]:
            state = graph.states[v]
            local_barbs |= barbs(state)
            if state.has_success:
                succeed[c] = True
            elif graph.redex_counts[v] == 0:
                stuck[c] = True
            for w in succ[v]:
                d = comp[w]
                if d == c:
                    diverge[c] = True
                    continue
                succeed[c] |= succeed[d]
                stuck[c] |= stuck[d]
                diverge[c] |= diverge[d]
                local_barbs |= seen_barbs[d]
        seen_barbs[c] = frozenset(local_barbs)
    return [
        StateBehaviour(succeed[comp[v]], stuck[comp[v]], diverge[comp[v]], seen_barbs[comp[v]])
        for v in range(n)
    ]


def _success_free_bound_hit(graph: StateGraph) -> bool:
    """Is a state left unexpanded by the depth bound reachable along states without ok?"""
    if not graph.depth_limited:
        return False
    out = graph.out_edges()
    seen = {0}
    todo = [0]
    while todo:
        v = todo.pop()
        state = graph.states[v]
        if state.has_success:
            continue
        if graph.redex_counts[v] is None:
            return True
        for e in out[v]:
            if e.target not in seen:
                seen.add(e.target)
                todo.append(e.target)
    return False


def observations(graph: StateGraph) -> ObservationProfile:
    root = state_profiles(graph)[0]
    degrees = [e.redex.degree for e in graph.edges]
    return ObservationProfile(
        may_succeed=root.may_succeed,
        reaches_stuck_without_success=root.reaches_stuck_without_success,
        diverges_within_bound=root.diverges or _success_free_bound_hit(graph),
        proven_divergence=root.diverges,
        bound_hit=graph.bound_hit,
        max_degree_seen=max(degrees) if degrees else None,
        explored_states=len(graph.states),
        barbs=root.barbs,
    )


# --- Coordination degree ---


def coordination_degree_demo(k: int, lang: FeatureVector) -> list[Process]:
    """[S0, S1, ..., Sk]: a k-atom join guarding ok, and one matching output per atom."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if k > 1 and not lang.is_joining:
        raise ValueError(f"{lang} is binary; a {k}-participant join needs a joining language")
    cont = NULL if lang.is_sync else None
    atoms = []
    outputs = []
    for j in range(1, k + 1):
        channel = Name(f"c{j}") if lang.is_channel else None
        atoms.append(InputAtom(channel, (Bind(Name(f"x{j}")),)))
        outputs.append(Output(channel, (Name(f"a{j}"),), cont))
    return [Join(tuple(atoms), OK), *outputs]


def soup(family: list[Process], drop: Optional[int] = None) -> Process:
    """Parallel composition of a family, with member `drop` replaced by 0."""
    return par(*(NULL if i == drop else p for i, p in enumerate(family)))


def cycle_states(graph: StateGraph) -> list[int]:
    """Ids of states lying on a reduction cycle, ascending."""
    n = len(graph.states)
    succ = [sorted({e.target for e in edges}) for edges in graph.out_edges()]
    comp = _components(n, succ)
    sizes: dict[int, int] = {}
    for c in comp:
        sizes[c] = sizes.get(c, 0) + 1
    return [v for v in range(n) if sizes[comp[v]] > 1 or v in succ[v]]


def stuck_states(graph: StateGraph) -> list[int]:
    """Ids of expanded states with no redex and no ok, ascending."""
    return [
        i
        for i, state in enumerate(graph.states)
        if graph.redex_counts[i] == 0 and not state.has_success
    ]


def replays(trace, lang: FeatureVector, max_repl_unfold: int = DEFAULT_MAX_REPL) -> bool:
    """Does each printed state of the trace reduce in one step to the next?"""
    states = [normalize(parse(text)) for text in trace]
    for before, after in zip(states, states[1:]):
        if after not in {succ for _, succ in successors(before, lang, max_repl_unfold)}:
            return False
    return True
