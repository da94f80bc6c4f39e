"""Running partition jobs and voting on their results.

The orchestrator reports satisfiable as soon as any job finds a model and
unsatisfiable only once every job has voted unsatisfiable.  Jobs run as
isolated in-process engines by default; ``mode="process"`` launches one
operating-system process per job using the ``JOB_NO=<j>/<n>@<d>`` protocol
and reads the verdict from its exit status (0 unsat, 5 sat, 1 error).
"""

from __future__ import annotations

import logging
import os
import queue
import re
import subprocess
import sys
import threading
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional, TextIO

from .formula import Formula, parse, render
from .partition import DeclineRule, JobSpec
from .tableau import (
    SAT,
    UNSAT,
    Budget,
    BudgetExceeded,
    Cancelled,
    SearchStats,
    Verdict,
    parse_witness,
    solve,
)

__all__ = [
    "EXIT_UNSAT",
    "EXIT_SAT",
    "EXIT_ERROR",
    "SAT_LINE",
    "UNSAT_LINE",
    "JobEnvError",
    "JobError",
    "JobOutcome",
    "JobHandle",
    "parse_job_env",
    "run_job",
    "run_job_process",
    "Orchestrator",
    "orchestrate",
]

log = logging.getLogger(__name__)

EXIT_UNSAT = 0
EXIT_SAT = 5
EXIT_ERROR = 1

SAT_LINE = "VOTE: formula is satisfiable"
UNSAT_LINE = "VOTE: formula is unsatisfiable"

_JOB_ENV_RE = re.compile(r"(\d+)/(\d+)@(\d+)\Z")


class JobEnvError(ValueError):
    pass


class JobError(RuntimeError):
    """Unanimity could not be reached because a job failed."""


def parse_job_env(s: str) -> JobSpec:
    """Parse ``"<job>/<jobs>@<split_depth>"``, e.g. ``"1/8@18"``."""
    m = _JOB_ENV_RE.match(s.strip())
    if m is None:
        raise JobEnvError(f"malformed JOB_NO {s!r}; expected <j>/<n>@<d>")
    j, n, d = (int(g) for g in m.groups())
    if n < 1 or d < 1 or j > n:
        raise JobEnvError(f"JOB_NO {s!r} out of range")
    return JobSpec(j, n, d)


@dataclass
class JobOutcome:
    verdict: Optional[Verdict]
    exit_code: int
    stats: SearchStats
    error: Optional[str] = None
    decline: Optional[DeclineRule] = None

    @property
    def outcome(self) -> Optional[str]:
        return self.verdict.outcome if self.verdict else None


PENDING, RUNNING, FINISHED, CANCELLED = "pending", "running", "finished", "cancelled"


@dataclass
class JobHandle:
    spec: JobSpec
    status: str = PENDING
    result: Optional[JobOutcome] = None
    _order = {PENDING: 0, RUNNING: 1, FINISHED: 2, CANCELLED: 2}

    def advance(self, status: str, result: Optional[JobOutcome] = None) -> None:
        if self._order[status] <= self._order[self.status]:
            raise ValueError(f"job {self.spec}: {self.status} -> {status} is not allowed")
        self.status = status
        if result is not None:
            self.result = result


def run_job(formula, spec: Optional[JobSpec], budget: Optional[Budget] = None,
            cancel=None, hooks=()) -> JobOutcome:
    """Solve one partition (``spec=None`` is a plain serial run)."""
    rule = DeclineRule(spec) if spec is not None else None
    all_hooks = list(hooks) + ([rule] if rule else [])
    try:
        v = solve(formula, hooks=all_hooks, budget=budget, cancel=cancel)
    except BudgetExceeded as e:
        return JobOutcome(None, EXIT_ERROR, SearchStats(), str(e), rule)
    code = EXIT_SAT if v.outcome == SAT else EXIT_UNSAT
    return JobOutcome(v, code, v.stats, None, rule)


def run_job_process(formula, spec: JobSpec, budget: Optional[Budget] = None, cancel=None,
                    poll: float = 0.01) -> JobOutcome:
    """Run one job as ``python -m ltlpar solve`` with ``JOB_NO`` set."""
    text = formula if isinstance(formula, str) else render(formula)
    cmd = [sys.executable, "-m", "ltlpar", "solve", "-l", text]
    if budget and budget.max_vertices is not None:
        cmd += ["--max-vertices", str(budget.max_vertices)]
    if budget and budget.max_seconds is not None:
        cmd += ["--max-seconds", str(budget.max_seconds)]
    env = dict(os.environ, JOB_NO=str(spec))
    proc = subprocess.Popen(cmd, env=env, stdout=subprocess.PIPE, stderr=subprocess.PIPE, text=True)
    while proc.poll() is None:
        if cancel is not None and cancel.is_set():
            proc.kill()
            proc.wait()
            raise Cancelled(f"job {spec} cancelled")
        time.sleep(poll)
    out, err = proc.communicate()
    code = proc.returncode
    if code == EXIT_SAT:
        return JobOutcome(Verdict(SAT, parse_witness(out), SearchStats()), code, SearchStats())
    if code == EXIT_UNSAT:
        return JobOutcome(Verdict(UNSAT, None, SearchStats()), code, SearchStats())
    return JobOutcome(None, EXIT_ERROR, SearchStats(), (err or out).strip() or f"exit {code}")


JobFn = Callable[..., JobOutcome]


@dataclass
class Orchestrator:
    """Schedules jobs ``1..n`` over ``workers`` slots and applies the voting rule.

    ``job_fn(formula, spec, budget=..., cancel=...)`` runs one job; it must
    poll ``cancel.is_set()`` and raise :class:`Cancelled` when asked to stop.
    """

    formula: Formula
    jobs: int
    split_depth: int
    workers: Optional[int] = None
    budget: Optional[Budget] = None
    mode: str = "thread"
    job_fn: Optional[JobFn] = None
    report: Optional[TextIO] = None
    handles: list = field(default_factory=list)
    discarded: list = field(default_factory=list)

    def __post_init__(self):
        if isinstance(self.formula, str):
            self.formula = parse(self.formula)
        if self.jobs < 1 or self.split_depth < 1:
            raise ValueError("need jobs >= 1 and split_depth >= 1")
        if self.workers is None:
            self.workers = os.cpu_count() or 1
        if self.workers < 1:
            raise ValueError("need at least one worker slot")
        if self.job_fn is None:
            self.job_fn = run_job_process if self.mode == "process" else run_job

    def _emit(self, line: str) -> None:
        out = self.report if self.report is not None else sys.stdout
        print(line, file=out, flush=True)

    def run(self) -> Verdict:
        cancel = threading.Event()
        votes: queue.Queue = queue.Queue()
        self.handles = [JobHandle(JobSpec(j, self.jobs, self.split_depth)) for j in range(1, self.jobs + 1)]
        lock = threading.Lock()

        def work(handle: JobHandle):
            with lock:
                if cancel.is_set():
                    return
                handle.advance(RUNNING)
            try:
                res = self.job_fn(self.formula, handle.spec, budget=self.budget, cancel=cancel)
            except Cancelled:
                votes.put((handle, "cancelled", None))
                return
            except Exception as e:  # a crashed job is a failed vote, not a crashed run
                res = JobOutcome(None, EXIT_ERROR, SearchStats(), f"{type(e).__name__}: {e}")
            votes.put((handle, "done", res))

        pool = ThreadPoolExecutor(max_workers=self.workers)
        try:
            for h in self.handles:
                pool.submit(work, h)
            unsat = 0
            errors = []
            for _ in range(self.jobs):
                handle, kind, res = votes.get()
                if kind == "cancelled":
                    continue
                handle.advance(FINISHED, res)
                if res.exit_code == EXIT_SAT:
                    with lock:
                        cancel.set()
                    self._emit(SAT_LINE)
                    for h in self.handles:
                        if h.status in (PENDING, RUNNING):
                            h.advance(CANCELLED)
                    return res.verdict
                if res.exit_code == EXIT_UNSAT:
                    unsat += 1
                else:
                    errors.append((handle.spec, res.error))
            if errors:
                raise JobError("; ".join(f"job {s}: {e}" for s, e in errors))
            self._emit(UNSAT_LINE)
            stats = SearchStats()
            for h in self.handles:
                stats.vertices_expanded += h.result.stats.vertices_expanded
            return Verdict(UNSAT, None, stats)
        finally:
            pool.shutdown(wait=True)
            self._drain(votes)

    def _drain(self, votes: queue.Queue) -> None:
        # votes that arrive after the decision are logged and dropped
        while True:
            try:
                handle, kind, res = votes.get_nowait()
            except queue.Empty:
                return
            if kind == "done":
                log.info("discarding late vote from job %s (exit %d)", handle.spec, res.exit_code)
                self.discarded.append((handle.spec, res))


def orchestrate(formula, n: int, d: int, workers: Optional[int] = None, *, budget: Optional[Budget] = None,
                mode: str = "thread", job_fn: Optional[JobFn] = None, report: Optional[TextIO] = None) -> Verdict:
    """Run ``n`` jobs split at depth ``d`` and return the voted verdict.

    Raises :class:`JobError` when no job found a model and some job failed.
    """
    return Orchestrator(formula, n, d, workers, budget, mode, job_fn, report).run()

