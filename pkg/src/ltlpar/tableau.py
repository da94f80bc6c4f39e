"""One-pass tree tableau for LTL satisfiability.

The search is depth first over a single branch at a time.  Every vertex
carries a label (a set of NNF formulas).  Static rules decompose labels until
they are *poised* (only literals and X-formulas remain); a poised label then
either closes the branch by LOOP (success), PRUNE (failure), or takes a
temporal STEP to the next state.  No information is ever shared between
branches, which is what makes the partitioned search in :mod:`ltlpar.partition`
possible.

Internally formulas are interned into a :class:`Closure` and labels are
frozensets of integer ids.  Ids follow a structural total order (length, then
printed form), which fixes the rule-selection order and makes every run
reproducible.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .formula import (
    Always,
    And,
    Atom,
    Eventually,
    Formula,
    Next,
    Not,
    Or,
    Release,
    Until,
    is_nnf,
    length,
    parse,
    render,
    to_nnf,
)

__all__ = [
    "Closure",
    "Label",
    "Eventuality",
    "Children",
    "POISED",
    "BranchState",
    "LassoModel",
    "SearchStats",
    "Verdict",
    "SAT",
    "UNSAT",
    "Budget",
    "BudgetExceeded",
    "Cancelled",
    "Hook",
    "Tableau",
    "expand",
    "check_contradiction",
    "step",
    "check_loop",
    "check_prune",
    "eventualities",
    "solve",
    "check_witness",
    "format_witness",
    "parse_witness",
]

SAT = "Satisfiable"
UNSAT = "Unsatisfiable"

# node kinds
ATOM, NOT, AND, OR, NEXT, EVENTUALLY, ALWAYS, UNTIL, RELEASE = range(9)
_KIND = {Atom: ATOM, Not: NOT, And: AND, Or: OR, Next: NEXT, Eventually: EVENTUALLY,
         Always: ALWAYS, Until: UNTIL, Release: RELEASE}

# rule classes
_PLAIN, _ALPHA, _BETA = 0, 1, 2
_CLASS = {ATOM: _PLAIN, NOT: _PLAIN, NEXT: _PLAIN, AND: _ALPHA, ALWAYS: _ALPHA,
          RELEASE: _ALPHA, OR: _BETA, EVENTUALLY: _BETA, UNTIL: _BETA}


class BudgetExceeded(RuntimeError):
    """A configured vertex or wall-clock budget ran out before a verdict."""


class Cancelled(RuntimeError):
    """The search was stopped through its cancellation flag."""


@dataclass(frozen=True)
class Budget:
    max_vertices: Optional[int] = None
    max_seconds: Optional[float] = None


class Closure:
    """Interned NNF formulas with the derived formulas the rules introduce.

    For every ``G a``, ``F a``, ``a U b`` and ``a R b`` the closure also holds
    its X-unfolding, and for release the disjunction ``a | X(a R b)``.
    """

    def __init__(self, formulas: Iterable[Formula]):
        todo = list(formulas)
        seen: set = set()
        while todo:
            f = todo.pop()
            if f in seen:
                continue
            if not is_nnf(f):
                raise ValueError(f"formula is not in negation normal form: {render(f)}")
            seen.add(f)
            if isinstance(f, (Not, Next, Eventually, Always)):
                todo.append(f.operand)
                if not isinstance(f, (Not, Next)):
                    todo.append(Next(f))
            elif isinstance(f, (And, Or, Until, Release)):
                todo.extend((f.left, f.right))
                if isinstance(f, (Until, Release)):
                    todo.append(Next(f))
                if isinstance(f, Release):
                    todo.append(Or(f.left, Next(f)))
        ordered = sorted(seen, key=lambda g: (length(g), render(g)))
        self.formulas: list = ordered
        self.index = {f: i for i, f in enumerate(ordered)}
        n = len(ordered)
        self.kind = [0] * n
        self.left = [-1] * n
        self.right = [-1] * n
        self.name: list = [None] * n
        for i, f in enumerate(ordered):
            k = _KIND[type(f)]
            self.kind[i] = k
            if k == ATOM:
                self.name[i] = f.name
            elif k in (NOT, NEXT, EVENTUALLY, ALWAYS):
                self.left[i] = self.index[f.operand]
            else:
                self.left[i] = self.index[f.left]
                self.right[i] = self.index[f.right]
        idx = self.index
        self.rule_class = [_CLASS[k] for k in self.kind]
        # atom id of a negative literal, -1 otherwise
        self.negated_atom = [self.left[i] if self.kind[i] == NOT else -1 for i in range(n)]
        # id of X(f) for temporal f, -1 otherwise
        self.unfolding = [-1] * n
        self.release_step = [-1] * n
        for i, f in enumerate(ordered):
            if self.kind[i] in (EVENTUALLY, ALWAYS, UNTIL, RELEASE):
                self.unfolding[i] = idx[Next(f)]
            if self.kind[i] == RELEASE:
                self.release_step[i] = idx[Or(f.left, Next(f))]
        # for X-eventualities (XFa, X(b U a)) the id of the requested formula a
        self.request = [-1] * n
        for i in range(n):
            if self.kind[i] == NEXT:
                inner = self.left[i]
                if self.kind[inner] == EVENTUALLY:
                    self.request[i] = self.left[inner]
                elif self.kind[inner] == UNTIL:
                    self.request[i] = self.right[inner]
        self.is_request = [False] * n
        for r in self.request:
            if r >= 0:
                self.is_request[r] = True

    def __len__(self):
        return len(self.formulas)

    def ids(self, formulas: Iterable[Formula]) -> frozenset:
        return frozenset(self.index[f] for f in formulas)

    def formulas_of(self, ids: Iterable[int]) -> frozenset:
        return frozenset(self.formulas[i] for i in ids)

    # -- label level rules ----------------------------------------------------

    def select(self, label: frozenset) -> int:
        """Formula the next static rule applies to, or -1 when poised."""
        cls = self.rule_class
        best_alpha = best_beta = -1
        for f in label:
            c = cls[f]
            if c == _ALPHA:
                if best_alpha < 0 or f < best_alpha:
                    best_alpha = f
            elif c == _BETA:
                if best_beta < 0 or f < best_beta:
                    best_beta = f
        return best_alpha if best_alpha >= 0 else best_beta

    def children(self, label: frozenset, f: int) -> list:
        base = label - {f}
        k = self.kind[f]
        a, b = self.left[f], self.right[f]
        if k == AND:
            return [base | {a, b}]
        if k == ALWAYS:
            return [base | {a, self.unfolding[f]}]
        if k == RELEASE:
            return [base | {b, self.release_step[f]}]
        if k == OR:
            return [base | {a}, base | {b}]
        if k == EVENTUALLY:
            # cure-now child first
            return [base | {a}, base | {self.unfolding[f]}]
        if k == UNTIL:
            return [base | {b}, base | {a, self.unfolding[f]}]
        raise ValueError("no static rule applies")

    def contradictory(self, label: frozenset) -> bool:
        neg = self.negated_atom
        for f in label:
            a = neg[f]
            if a >= 0 and a in label:
                return True
        return False

    def step(self, label: frozenset) -> frozenset:
        kind, left = self.kind, self.left
        return frozenset(left[f] for f in label if kind[f] == NEXT)

    def requests(self, label: frozenset) -> tuple:
        """Sorted ids requested by the X-eventualities of a poised label."""
        req = self.request
        return tuple(sorted({req[f] for f in label if req[f] >= 0}))

    def state(self, label: frozenset) -> frozenset:
        kind, name = self.kind, self.name
        return frozenset(name[f] for f in label if kind[f] == ATOM)


# ---------------------------------------------------------------------------
# public, formula level view of the rules


@dataclass(frozen=True)
class Label:
    formulas: frozenset
    depth: int = 0
    step_index: int = 0

    @classmethod
    def of(cls, *formulas, depth: int = 0, step_index: int = 0) -> "Label":
        fs = frozenset(parse(f) if isinstance(f, str) else f for f in formulas)
        return cls(fs, depth, step_index)

    @property
    def poised(self) -> bool:
        return all(isinstance(f, (Atom, Next)) or isinstance(f, Not) and isinstance(f.operand, Atom)
                   for f in self.formulas)


@dataclass(frozen=True)
class Eventuality:
    request: Formula
    origin: Formula


@dataclass(frozen=True)
class Children:
    labels: tuple
    choice: bool


POISED = "poised"


def expand(label: Label):
    """Apply one static rule to ``label``; returns :class:`Children` or ``POISED``."""
    c = Closure(label.formulas)
    ids = c.ids(label.formulas)
    f = c.select(ids)
    if f < 0:
        return POISED
    kids = c.children(ids, f)
    return Children(
        tuple(Label(c.formulas_of(k), label.depth + 1, label.step_index) for k in kids),
        len(kids) > 1,
    )


def check_contradiction(label: Label) -> bool:
    fs = label.formulas
    return any(isinstance(f, Not) and isinstance(f.operand, Atom) and f.operand in fs for f in fs)


def step(label: Label) -> Label:
    """Temporal transition of a poised label.  An empty result ticks the branch."""
    return Label(frozenset(f.operand for f in label.formulas if isinstance(f, Next)),
                 label.depth + 1, label.step_index + 1)


def eventualities(label: Label) -> set:
    out = set()
    for f in label.formulas:
        if isinstance(f, Next):
            g = f.operand
            if isinstance(g, Eventually):
                out.add(Eventuality(g.operand, g))
            elif isinstance(g, Until):
                out.add(Eventuality(g.right, g))
    return out


class BranchState:
    """Labels along the current branch, with lookup structures for LOOP and PRUNE.

    ``last_seen[r]`` is the deepest position on the branch whose label holds
    the requested formula ``r``; pushing and popping keep it exact, so a cure
    inside the segment ``(u, w]`` is simply ``last_seen[r] > u``.
    """

    def __init__(self, closure: Closure):
        self.closure = closure
        self.labels: list = []
        self.poised: list = []
        self.last_seen = [-1] * len(closure)
        self._undo: list = []
        # poised label -> [(position, requests, last_seen snapshot)]
        self.occurrences: dict = {}

    @classmethod
    def from_labels(cls, labels: Sequence[Label], extra: Iterable[Formula] = ()) -> "BranchState":
        fs = set(extra)
        for lab in labels:
            fs |= lab.formulas
        branch = cls(Closure(fs))
        for lab in labels:
            branch.push(branch.closure.ids(lab.formulas))
            if lab.poised:
                branch.mark_poised()
        return branch

    def depth(self) -> int:
        return len(self.labels)

    def push(self, label: frozenset) -> None:
        pos = len(self.labels)
        self.labels.append(label)
        self.poised.append(False)
        is_request, last = self.closure.is_request, self.last_seen
        saved = []
        for f in label:
            if is_request[f]:
                saved.append((f, last[f]))
                last[f] = pos
        self._undo.append(saved)

    def pop(self) -> None:
        label = self.labels.pop()
        if self.poised.pop():
            occ = self.occurrences[label]
            occ.pop()
            if not occ:
                del self.occurrences[label]
        last = self.last_seen
        for f, old in self._undo.pop():
            last[f] = old

    def mark_poised(self) -> None:
        """Register the top label as a poised occurrence (after the checks)."""
        pos = len(self.labels) - 1
        label = self.labels[pos]
        req = self.closure.requests(label)
        snap = tuple(self.last_seen[r] for r in req)
        self.poised[pos] = True
        self.occurrences.setdefault(label, []).append((pos, req, snap))

    def _current(self, label: frozenset):
        req = self.closure.requests(label)
        return req, tuple(self.last_seen[r] for r in req)

    def loop_origin(self, label: frozenset) -> int:
        """Position of an earlier equal label with every request cured since, else -1."""
        occ = self.occurrences.get(label)
        if not occ:
            return -1
        _, snap = self._current(label)
        first = occ[0][0]
        # the earliest occurrence spans the longest segment
        if all(s > first for s in snap):
            return first
        return -1

    def prunable(self, label: frozenset) -> bool:
        """Fail the top label ``w`` when the branch since an earlier equal label made no progress.

        Either some earlier ``u`` has no request cured in ``(u, w]``, or two
        earlier ``u < v`` have nothing cured in ``(v, w]`` that ``(u, v]`` missed.
        """
        occ = self.occurrences.get(label)
        if not occ:
            return False
        _, snap_w = self._current(label)
        if snap_w and all(s <= occ[-1][0] for s in snap_w):
            return True
        for j in range(1, len(occ)):
            pv, _, snap_v = occ[j]
            new = [s > pv for s in snap_w]
            for i in range(j):
                pu = occ[i][0]
                if all(not n or s > pu for n, s in zip(new, snap_v)):
                    return True
        return False


def _known(branch: BranchState, label: Label):
    # a label mentioning formulas outside the branch closure cannot repeat anything on it
    try:
        return branch.closure.ids(label.formulas)
    except KeyError:
        return None


def check_loop(branch: BranchState, label: Label) -> bool:
    ids = _known(branch, label)
    return ids is not None and branch.loop_origin(ids) >= 0


def check_prune(branch: BranchState, label: Label) -> bool:
    ids = _known(branch, label)
    return ids is not None and branch.prunable(ids)


# ---------------------------------------------------------------------------
# models and verdicts


@dataclass(frozen=True)
class LassoModel:
    """The word ``prefix + loop + loop + ...``; states are sets of true atoms."""

    prefix: tuple
    loop: tuple

    def __post_init__(self):
        if not self.loop:
            raise ValueError("loop must be nonempty")


@dataclass
class SearchStats:
    vertices_expanded: int = 0
    max_depth: int = 0
    width_profile: list = field(default_factory=list)
    duration: float = 0.0
    contradictions: int = 0
    loops: int = 0
    prunes: int = 0
    ticks: int = 0
    declines: int = 0


@dataclass
class Verdict:
    outcome: str
    witness: Optional[LassoModel]
    stats: SearchStats

    @property
    def satisfiable(self) -> bool:
        return self.outcome == SAT


class Hook:
    """Per-vertex callback.

    ``on_vertex`` runs before a vertex is processed.  Returning ``None`` lets
    the search continue; returning an integer ``k`` fails the vertex and
    rolls back until the next vertex to visit lies strictly above depth ``k``.
    """

    def on_vertex(self, ordinal: int, depth: int) -> Optional[int]:
        return None

    def on_finish(self) -> None:
        pass


class Tableau:
    """Depth-first construction for one formula.  One instance, one thread."""

    def __init__(self, formula: Formula, *, hooks: Sequence[Hook] = (),
                 budget: Optional[Budget] = None, cancel=None):
        if isinstance(formula, str):
            formula = parse(formula)
        self.formula = formula
        self.root = to_nnf(formula)
        self.closure = Closure([self.root])
        self.hooks = list(hooks)
        self.budget = budget or Budget()
        self.cancel = cancel

    def solve(self) -> Verdict:
        c = self.closure
        branch = BranchState(c)
        stats = SearchStats()
        width = stats.width_profile
        alts: list = []  # untried children per branch position
        hooks = self.hooks
        cancel = self.cancel
        max_vertices = self.budget.max_vertices
        max_seconds = self.budget.max_seconds
        start = time.perf_counter()
        pending = frozenset([c.index[self.root]])
        witness = None
        outcome = None
        try:
            while True:
                depth = branch.depth()
                stats.vertices_expanded += 1
                n = stats.vertices_expanded
                if depth == len(width):
                    width.append(0)
                width[depth] += 1
                if depth > stats.max_depth:
                    stats.max_depth = depth
                if cancel is not None and cancel.is_set():
                    raise Cancelled("search cancelled")
                if max_vertices is not None and n > max_vertices:
                    raise BudgetExceeded(f"vertex budget {max_vertices} exhausted")
                if max_seconds is not None and n & 1023 == 0 and time.perf_counter() - start > max_seconds:
                    raise BudgetExceeded(f"time budget {max_seconds}s exhausted")
                limit = None
                for h in hooks:
                    r = h.on_vertex(n, depth)
                    if r is not None and (limit is None or r < limit):
                        limit = r

                label = pending
                branch.push(label)
                alts.append(None)
                success = False
                if limit is not None:
                    stats.declines += 1
                elif c.contradictory(label):
                    stats.contradictions += 1
                elif not label:
                    stats.ticks += 1
                    success = True
                    witness = self._empty_witness(branch)
                else:
                    f = c.select(label)
                    if f >= 0:
                        kids = c.children(label, f)
                        if len(kids) > 1:
                            alts[-1] = kids[1:]
                        pending = kids[0]
                        continue
                    origin = branch.loop_origin(label)
                    if origin >= 0:
                        stats.loops += 1
                        success = True
                        witness = self._loop_witness(branch, origin)
                    elif branch.prunable(label):
                        stats.prunes += 1
                    else:
                        branch.mark_poised()
                        pending = c.step(label)
                        continue
                if success:
                    outcome = SAT
                    break
                # failure: roll back to the latest choice (above ``limit`` on a decline)
                while alts:
                    rest = alts[-1]
                    resume_depth = len(alts)
                    if rest and (limit is None or resume_depth < limit):
                        pending = rest.pop(0)
                        break
                    alts.pop()
                    branch.pop()
                if not alts:
                    outcome = UNSAT
                    break
                # the branch above the resumed child keeps its frames
                while branch.depth() > len(alts):
                    branch.pop()
        finally:
            stats.duration = time.perf_counter() - start
            for h in hooks:
                h.on_finish()
        return Verdict(outcome, witness, stats)

    def _states(self, branch: BranchState, stop: int) -> list:
        c = self.closure
        return [c.state(branch.labels[i]) for i in range(stop) if branch.poised[i]]

    def _loop_witness(self, branch: BranchState, origin: int) -> LassoModel:
        c = self.closure
        prefix = [c.state(branch.labels[i]) for i in range(origin) if branch.poised[i]]
        loop = [c.state(branch.labels[origin])]
        top = branch.depth() - 1
        loop += [c.state(branch.labels[i]) for i in range(origin + 1, top) if branch.poised[i]]
        return LassoModel(tuple(prefix), tuple(loop))

    def _empty_witness(self, branch: BranchState) -> LassoModel:
        states = self._states(branch, branch.depth() - 1)
        # only literal obligations were left: repeat the last state forever
        return LassoModel(tuple(states[:-1]), (states[-1],) if states else (frozenset(),))


def solve(formula, hooks: Sequence[Hook] = (), budget: Optional[Budget] = None, cancel=None) -> Verdict:
    """Decide satisfiability of ``formula`` (a :class:`Formula` or surface text)."""
    return Tableau(formula, hooks=hooks, budget=budget, cancel=cancel).solve()


# ---------------------------------------------------------------------------
# witness checking


def check_witness(formula, model: LassoModel) -> bool:
    """Evaluate ``formula`` at position 0 of the lasso ``model``.

    Positions are ``prefix + loop`` with the last one looping back to the
    loop start.  Until/eventually are least fixpoints and release/always
    greatest fixpoints of their one-step unfoldings over that finite graph.
    """
    if isinstance(formula, str):
        formula = parse(formula)
    states = list(model.prefix) + list(model.loop)
    size = len(states)
    succ = list(range(1, size)) + [len(model.prefix)]
    cache: dict = {}

    def ev(f) -> list:
        if f in cache:
            return cache[f]
        if isinstance(f, Atom):
            val = [f.name in s for s in states]
        elif isinstance(f, Not):
            val = [not v for v in ev(f.operand)]
        elif isinstance(f, And):
            val = [a and b for a, b in zip(ev(f.left), ev(f.right))]
        elif isinstance(f, Or):
            val = [a or b for a, b in zip(ev(f.left), ev(f.right))]
        elif isinstance(f, Next):
            sub = ev(f.operand)
            val = [sub[succ[i]] for i in range(size)]
        elif isinstance(f, (Eventually, Until)):
            hold = [True] * size if isinstance(f, Eventually) else ev(f.left)
            goal = ev(f.operand if isinstance(f, Eventually) else f.right)
            val = _fixpoint(goal, hold, succ, least=True)
        elif isinstance(f, (Always, Release)):
            hold = [False] * size if isinstance(f, Always) else ev(f.left)
            goal = ev(f.operand if isinstance(f, Always) else f.right)
            val = _fixpoint(goal, hold, succ, least=False)
        else:
            raise TypeError(f"not a formula: {f!r}")
        cache[f] = val
        return val

    return bool(ev(formula)[0])


def _fixpoint(goal, hold, succ, least):
    # least:    v = goal | (hold & X v)     (until)
    # greatest: v = goal & (hold | X v)     (release)
    size = len(goal)
    val = [not least] * size
    for _ in range(size + 1):
        if least:
            new = [goal[i] or (hold[i] and val[succ[i]]) for i in range(size)]
        else:
            new = [goal[i] and (hold[i] or val[succ[i]]) for i in range(size)]
        if new == val:
            break
        val = new
    return val


def format_witness(model: LassoModel) -> str:
    def st(s):
        return "{" + ",".join(sorted(s)) + "}"

    return "prefix: " + ";".join(st(s) for s in model.prefix) + "\nloop: " + ";".join(st(s) for s in model.loop)


def parse_witness(text: str) -> LassoModel:
    parts = {}
    for line in text.splitlines():
        key, _, rest = line.partition(":")
        key = key.strip()
        if key in ("prefix", "loop"):
            states = []
            for chunk in rest.strip().split(";"):
                chunk = chunk.strip()
                if not chunk:
                    continue
                inner = chunk.strip("{}")
                states.append(frozenset(a for a in inner.split(",") if a))
            parts[key] = tuple(states)
    return LassoModel(parts.get("prefix", ()), parts.get("loop", ()))
