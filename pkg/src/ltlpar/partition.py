"""Static partitioning of the tableau search among independent jobs.

Crossings are the moments the depth-first search descends onto
``split_depth`` from above.  Crossing ``i`` (1-based, in visit order) belongs
to job ``to_job(i, n)``; every other job declines it, rolling back past all
of its siblings at or below ``split_depth``.  Everything above the split is
rebuilt by every job; nothing is ever communicated between jobs.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .gen import MINSTD_MODULUS, MINSTD_MULTIPLIER
from .tableau import Hook

__all__ = ["JobSpec", "DeclineState", "to_job", "minstd_first", "decline", "DeclineRule", "CrossingCounter"]


@dataclass(frozen=True)
class JobSpec:
    job_no: int
    number_of_jobs: int
    split_depth: int

    def __post_init__(self):
        if self.number_of_jobs < 1:
            raise ValueError("number_of_jobs must be at least 1")
        if self.split_depth < 1:
            raise ValueError("split_depth must be at least 1")
        if not 0 <= self.job_no <= self.number_of_jobs:
            raise ValueError(f"job_no {self.job_no} outside 0..{self.number_of_jobs}")

    def __str__(self):
        return f"{self.job_no}/{self.number_of_jobs}@{self.split_depth}"


@dataclass(frozen=True)
class DeclineState:
    last_depth: int = 0
    width: int = 0


def minstd_first(seed: int) -> int:
    """First MINSTD output after seeding with ``max(seed, 1)``."""
    return (MINSTD_MULTIPLIER * max(seed, 1)) % MINSTD_MODULUS


def to_job(i: int, number_of_jobs: int) -> int:
    """Job (1-based) owning the ``i``-th crossing.

    Indices come in blocks of ``number_of_jobs``; the first block is dealt
    round robin, later blocks start from a pseudo-random job.
    """
    if i < 1 or number_of_jobs < 1:
        raise ValueError("to_job needs i >= 1 and number_of_jobs >= 1")
    i -= 1
    m = i % number_of_jobs
    r = i // number_of_jobs
    if r > 0:
        return 1 + (minstd_first(r) + m) % number_of_jobs
    return 1 + m


def decline(state: DeclineState, current_depth: int, spec: JobSpec) -> tuple:
    """One Decline-rule step; returns ``(veto, new_state)``."""
    d = spec.split_depth
    if current_depth > d and spec.job_no == 0:
        raise AssertionError(f"job 0 reached depth {current_depth} below split depth {d}")
    veto = False
    width = state.width
    if current_depth == d and state.last_depth < d:
        width += 1
        veto = spec.job_no == 0 or to_job(width, spec.number_of_jobs) != spec.job_no
    return veto, DeclineState(current_depth, width)


@dataclass
class DeclineRule(Hook):
    """Tableau hook applying :func:`decline` at every vertex.

    ``crossings`` logs ``(index, kept)`` for each crossing seen, and
    ``below`` counts vertices visited inside kept crossings (not counting the
    crossing vertex itself).
    """

    spec: JobSpec
    state: DeclineState = field(default_factory=DeclineState)
    crossings: list = field(default_factory=list)
    below: int = 0

    def on_vertex(self, ordinal, depth):
        before = self.state.width
        veto, self.state = decline(self.state, depth, self.spec)
        if self.state.width != before:
            self.crossings.append((self.state.width, not veto))
        elif depth >= self.spec.split_depth:
            self.below += 1
        return self.spec.split_depth if veto else None

    @property
    def kept(self) -> list:
        return [i for i, k in self.crossings if k]


@dataclass
class CrossingCounter(Hook):
    """Serial-run instrumentation: crossings of ``split_depth`` and per-crossing vertex counts."""

    split_depth: int
    last_depth: int = 0
    width: int = 0
    above: int = 0
    per_crossing: list = field(default_factory=list)

    def on_vertex(self, ordinal, depth):
        d = self.split_depth
        if depth == d and self.last_depth < d:
            self.width += 1
            self.per_crossing.append(0)
            self.above += 1
        elif depth >= d:
            self.per_crossing[-1] += 1
        else:
            self.above += 1
        self.last_depth = depth
        return None

    @property
    def below(self) -> int:
        return sum(self.per_crossing)
