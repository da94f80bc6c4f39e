"""Vertex traces and the analyses built on them.

A trace has one line per tableau vertex::

    ordinal,depth,crossing_index|-,cost_ns

``crossing_index`` is the index of the split-depth crossing the vertex lies
in (the crossing vertex itself included), or ``-`` above the split.  A
trace recorded without a split depth has ``-`` everywhere; indices are then
recomputed from the depths for whatever split depth is analysed.

Accounting convention: crossing vertices are shared overhead (every job
visits them before deciding to keep or decline), like all vertices above the
split.  Only the remaining vertices of a crossing belong to its job.
"""

from __future__ import annotations

import csv
import io
import math
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Optional, Sequence

from .jobs import run_job
from .partition import JobSpec, to_job
from .tableau import Budget, Hook

__all__ = [
    "TraceRecord",
    "TraceError",
    "TraceRecorder",
    "record_trace",
    "write_trace",
    "read_trace",
    "crossing_indices",
    "width_profile",
    "format_width",
    "measure_overhead",
    "JobEstimate",
    "estimate_jobs",
    "sweep",
    "format_sweep",
    "format_estimate",
    "load_traces",
]


class TraceError(ValueError):
    pass


@dataclass(frozen=True)
class TraceRecord:
    vertex_ordinal: int
    depth: int
    crossing_index: Optional[int]
    cost: int  # nanoseconds


@dataclass
class TraceRecorder(Hook):
    """Tableau hook that logs every vertex; ``split_depth=None`` leaves crossings blank."""

    split_depth: Optional[int] = None
    records: list = field(default_factory=list)
    _last_depth: int = 0
    _index: int = 0
    _t: int = 0

    def on_vertex(self, ordinal, depth):
        now = time.perf_counter_ns()
        self._close_previous(now)
        idx = None
        d = self.split_depth
        if d is not None:
            if depth == d and self._last_depth < d:
                self._index += 1
            if depth >= d:
                idx = self._index
        self._last_depth = depth
        self.records.append([ordinal, depth, idx, 0])
        self._t = now
        return None

    def _close_previous(self, now):
        if self.records:
            self.records[-1][3] = now - self._t

    def on_finish(self):
        self._close_previous(time.perf_counter_ns())

    def trace(self) -> list:
        return [TraceRecord(*r) for r in self.records]


def record_trace(formula, split_depth: Optional[int] = None, budget: Optional[Budget] = None):
    """Serial solve with tracing; returns ``(verdict, trace)``."""
    rec = TraceRecorder(split_depth)
    out = run_job(formula, None, budget=budget, hooks=[rec])
    if out.verdict is None:
        raise TraceError(out.error)
    return out.verdict, rec.trace()


def write_trace(trace: Iterable[TraceRecord], path, split_depth: Optional[int] = None) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(f"# ordinal,depth,crossing_index,cost_ns split_depth={split_depth if split_depth else '-'}\n")
        for r in trace:
            idx = "-" if r.crossing_index is None else str(r.crossing_index)
            fh.write(f"{r.vertex_ordinal},{r.depth},{idx},{r.cost}\n")


def read_trace(path) -> list:
    out = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(",")
            try:
                if len(parts) != 4:
                    raise ValueError("expected 4 fields")
                idx = None if parts[2] == "-" else int(parts[2])
                rec = TraceRecord(int(parts[0]), int(parts[1]), idx, int(parts[3]))
                if rec.depth < 0 or rec.cost < 0:
                    raise ValueError("negative field")
            except ValueError as e:
                raise TraceError(f"line {lineno}: {e}: {line!r}") from None
            if out and rec.vertex_ordinal <= out[-1].vertex_ordinal:
                raise TraceError(f"line {lineno}: ordinals must increase")
            out.append(rec)
    return out


def crossing_indices(trace: Sequence[TraceRecord], split_depth: int) -> list:
    """Per record: ``(crossing index or None, is_crossing_vertex)`` at ``split_depth``."""
    out = []
    last = 0
    idx = 0
    for r in trace:
        crossing = r.depth == split_depth and last < split_depth
        if crossing:
            idx += 1
        out.append((idx if r.depth >= split_depth else None, crossing))
        last = r.depth
    return out


def width_profile(trace: Sequence[TraceRecord]) -> dict:
    """Number of vertices at each depth."""
    if not trace:
        raise TraceError("empty trace")
    counts: dict = {}
    for n, r in enumerate(trace, 1):
        if not isinstance(r.depth, int) or r.depth < 0:
            raise TraceError(f"row {n}: bad depth {r.depth!r}")
        counts[r.depth] = counts.get(r.depth, 0) + 1
    if counts.get(0) != 1:
        raise TraceError("trace must contain exactly one root vertex")
    return dict(sorted(counts.items()))


def format_width(profiles: dict) -> str:
    """CSV with one column per named profile: ``depth,<name>,...``."""
    names = list(profiles)
    depths = sorted({d for p in profiles.values() for d in p})
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["depth", *names])
    for d in depths:
        w.writerow([d, *(profiles[n].get(d, 0) for n in names)])
    return buf.getvalue()


def measure_overhead(formula, split_depth: int, budget: Optional[Budget] = None) -> tuple:
    """Cost of job 0, which visits everything above the split and declines every crossing.

    Returns ``(seconds, vertex_count)``.
    """
    out = run_job(formula, JobSpec(0, 1, split_depth), budget=budget)
    if out.verdict is None:
        raise TraceError(out.error)
    return out.stats.duration, out.stats.vertices_expanded


@dataclass
class JobEstimate:
    per_job_cost: dict
    shared_overhead: float
    makespan: float

    @property
    def total_below(self) -> float:
        return sum(self.per_job_cost.values())


def estimate_jobs(trace: Sequence[TraceRecord], jobs: int, split_depth: int,
                  weight: str = "count", recompute: bool = False) -> JobEstimate:
    """Predict per-job work had the serial run been split among ``jobs`` jobs.

    ``weight="count"`` charges one unit per vertex, ``"time"`` its recorded
    cost in seconds.  Recorded crossing indices must agree with the depths
    for ``split_depth`` unless ``recompute`` is set.
    """
    if jobs < 1 or split_depth < 1:
        raise ValueError("need jobs >= 1 and split_depth >= 1")
    if not trace:
        raise TraceError("empty trace")
    derived = crossing_indices(trace, split_depth)
    if not recompute and any(r.crossing_index is not None for r in trace):
        for n, (r, (idx, _)) in enumerate(zip(trace, derived), 1):
            if r.crossing_index != idx:
                raise TraceError(f"row {n}: crossing index {r.crossing_index} inconsistent with "
                                 f"depths at split depth {split_depth} (expected {idx})")
    per_job = {j: 0 for j in range(1, jobs + 1)}
    shared = 0
    owner_cache: dict = {}
    for r, (idx, crossing) in zip(trace, derived):
        w = 1 if weight == "count" else r.cost / 1e9
        if idx is None or crossing:
            shared += w
            continue
        owner = owner_cache.get(idx)
        if owner is None:
            owner = owner_cache[idx] = to_job(idx, jobs)
        per_job[owner] += w
    makespan = shared + max(per_job.values())
    return JobEstimate(per_job, shared, makespan)


def sweep(traces: dict, jobs_list: Sequence[int], depth_list: Sequence[int],
          weight: str = "count") -> dict:
    """Sum of estimated makespans over all traces for each ``(jobs, depth)`` cell.

    A cell whose estimate fails for any trace holds ``None``.
    """
    grid = {}
    for n in jobs_list:
        for d in depth_list:
            try:
                grid[n, d] = sum(estimate_jobs(t, n, d, weight, recompute=True).makespan
                                 for t in traces.values())
            except (TraceError, ValueError):
                grid[n, d] = None
    return grid


def format_sweep(grid: dict, jobs_list: Sequence[int], depth_list: Sequence[int]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["jobs", *(f"d={d}" for d in depth_list)])
    for n in jobs_list:
        row = []
        for d in depth_list:
            v = grid.get((n, d))
            row.append("invalid" if v is None or (isinstance(v, float) and math.isnan(v)) else _fmt(v))
        w.writerow([n, *row])
    return buf.getvalue()


def _fmt(v) -> str:
    return str(v) if isinstance(v, int) else f"{v:.6f}"


def format_estimate(est: JobEstimate) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["job", "cost"])
    for j, c in est.per_job_cost.items():
        w.writerow([j, _fmt(c)])
    w.writerow(["shared", _fmt(est.shared_overhead)])
    w.writerow(["makespan", _fmt(est.makespan)])
    return buf.getvalue()


def load_traces(paths: Iterable) -> dict:
    return {Path(p).stem: read_trace(p) for p in paths}
