"""Benchmark harness: corpus loading, difficulty classes, serial vs parallel runs.

Difficulty classes follow decades of serial solve time: class ``k`` covers
``[10**(k-1), 10**k)`` seconds for ``k = 0..3``; anything faster or slower is
out of range.  Classes are relative to the machine running the harness.
"""

from __future__ import annotations

import csv
import io
import logging
import math
import statistics
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Sequence

from .formula import Formula, ParseError, read_formula_file, render
from .jobs import JobError, Orchestrator
from .tableau import SAT, UNSAT, Budget, BudgetExceeded, solve

__all__ = [
    "BenchItem",
    "DifficultyClass",
    "OUT_OF_RANGE",
    "EmptySuiteError",
    "ingest",
    "classify",
    "Cell",
    "SuiteReport",
    "run_suite",
    "DEFAULT_UNSAT_SPLIT",
    "DEFAULT_SAT_SPLIT",
]

log = logging.getLogger(__name__)

DEFAULT_UNSAT_SPLIT = 18
DEFAULT_SAT_SPLIT = 64


class EmptySuiteError(ValueError):
    pass


@dataclass(frozen=True)
class BenchItem:
    name: str
    formula: Formula
    expected: Optional[str] = None


@dataclass(frozen=True)
class DifficultyClass:
    polarity: str  # "U" or "S"
    decade: int

    def __str__(self):
        return f"{self.polarity}{self.decade}"


OUT_OF_RANGE = "out-of-range"


def _expected_from_path(rel: Path) -> Optional[str]:
    parts = {p.lower() for p in rel.parts[:-1]}
    if "unsat" in parts:
        return UNSAT
    if "sat" in parts:
        return SAT
    return None


def ingest(directory) -> list:
    """Load every parseable formula file below ``directory`` (recursively).

    Names are paths relative to ``directory``.  Unreadable or unparseable
    files are logged and skipped.
    """
    root = Path(directory)
    if not root.is_dir():
        raise FileNotFoundError(f"no such directory: {root}")
    items = []
    for path in sorted(root.rglob("*")):
        if not path.is_file() or any(p.startswith(".") for p in path.relative_to(root).parts):
            continue
        rel = path.relative_to(root)
        try:
            f = read_formula_file(path)
        except (OSError, UnicodeDecodeError, ParseError, ValueError) as e:
            log.warning("skipping %s: %s", rel, e)
            continue
        items.append(BenchItem(rel.as_posix(), f, _expected_from_path(rel)))
    if not items:
        raise EmptySuiteError(f"no formula could be loaded from {root}")
    return items


def classify(serial_time: float, verdict: str):
    """Difficulty class of a solved item, or :data:`OUT_OF_RANGE`."""
    if serial_time < 0.1 or serial_time >= 1000:
        return OUT_OF_RANGE
    decade = min(3, max(0, math.floor(math.log10(serial_time)) + 1))
    # guard against log10 rounding at the band edges
    while decade > 0 and serial_time < 10 ** (decade - 1):
        decade -= 1
    while decade < 3 and serial_time >= 10 ** decade:
        decade += 1
    return DifficultyClass("S" if verdict == SAT else "U", decade)


@dataclass
class Cell:
    """One run of one item: ``outcome`` is a verdict, ``"timeout"`` or ``"error"``."""

    outcome: str
    seconds: float
    vertices: int = 0

    @property
    def solved(self) -> bool:
        return self.outcome in (SAT, UNSAT)


@dataclass
class SuiteReport:
    configs: list
    names: list = field(default_factory=list)
    serial: dict = field(default_factory=dict)
    parallel: dict = field(default_factory=dict)  # (name, jobs, depth) -> Cell
    classes: dict = field(default_factory=dict)

    def speedup(self, name: str, n: int, d: int):
        """``(ratio, is_lower_bound)``, or ``None`` when the serial run is unsolved too."""
        s = self.serial[name]
        p = self.parallel[name, n, d]
        if not p.solved:
            return None
        ratio = s.seconds / max(p.seconds, 1e-9)
        return ratio, not s.solved

    def inconsistent(self) -> list:
        """Items whose solved cells disagree on the verdict."""
        bad = []
        for name in self.names:
            seen = {c.outcome for c in self._cells(name) if c.solved}
            if len(seen) > 1:
                bad.append(name)
        return bad

    def _cells(self, name):
        yield self.serial[name]
        for n, d in self.configs:
            yield self.parallel[name, n, d]

    # -- tables -------------------------------------------------------------

    def items_table(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        head = ["name", "class", "serial_verdict", "serial_seconds", "serial_vertices"]
        for n, d in self.configs:
            head += [f"x{n}@{d}_verdict", f"x{n}@{d}_seconds", f"x{n}@{d}_speedup"]
        w.writerow(head)
        for name in self.names:
            s = self.serial[name]
            row = [name, str(self.classes[name]), s.outcome, f"{s.seconds:.4f}", s.vertices]
            for n, d in self.configs:
                p = self.parallel[name, n, d]
                sp = self.speedup(name, n, d)
                sp_txt = "" if sp is None else (">" if sp[1] else "") + f"{sp[0]:.2f}"
                row += [p.outcome, f"{p.seconds:.4f}", sp_txt]
            w.writerow(row)
        return buf.getvalue()

    def speedup_table(self) -> str:
        """Mean/median/min/max speedup per (configuration, difficulty class)."""
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["jobs", "split_depth", "set", "n", "mean", "median", "min", "max"])
        sets = sorted({str(c) for c in self.classes.values()})
        for n, d in self.configs:
            for cls in sets:
                vals = []
                for name in self.names:
                    if str(self.classes[name]) != cls:
                        continue
                    sp = self.speedup(name, n, d)
                    if sp is not None:
                        vals.append(sp[0])
                if vals:
                    w.writerow([n, d, cls, len(vals), f"{statistics.mean(vals):.2f}",
                                f"{statistics.median(vals):.2f}", f"{min(vals):.2f}", f"{max(vals):.2f}"])
        return buf.getvalue()

    def cumulative_sat(self, points: Optional[Sequence[float]] = None) -> str:
        """Satisfiable items shown satisfiable within ``x`` CPU-seconds (jobs x wall time)."""
        costs = {"serial": [c.seconds for c in self.serial.values() if c.outcome == SAT]}
        for n, d in self.configs:
            costs[f"x{n}@{d}"] = [n * self.parallel[name, n, d].seconds for name in self.names
                                  if self.parallel[name, n, d].outcome == SAT]
        if points is None:
            everything = sorted(v for vs in costs.values() for v in vs)
            points = sorted(set(everything)) or [0.0]
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["cpu_seconds", *costs])
        for x in points:
            w.writerow([f"{x:.6f}", *(sum(1 for v in vs if v <= x) for vs in costs.values())])
        return buf.getvalue()

    def summary(self) -> str:
        lines = [f"{len(self.names)} items, configurations: "
                 + ", ".join(f"{n} jobs @ depth {d}" for n, d in self.configs)]
        for name in self.names:
            s = self.serial[name]
            lines.append(f"{name}: {self.classes[name]} serial {s.outcome} in {s.seconds:.3f}s")
        bad = self.inconsistent()
        lines.append("verdicts consistent" if not bad else "INCONSISTENT: " + ", ".join(bad))
        return "\n".join(lines) + "\n"

    def write(self, out_dir) -> None:
        out = Path(out_dir)
        out.mkdir(parents=True, exist_ok=True)
        (out / "items.csv").write_text(self.items_table())
        (out / "speedups.csv").write_text(self.speedup_table())
        (out / "cumulative_sat.csv").write_text(self.cumulative_sat())
        (out / "summary.txt").write_text(self.summary())


def _timed_serial(f, budget: Budget) -> Cell:
    t = time.perf_counter()
    try:
        v = solve(f, budget=budget)
    except BudgetExceeded:
        return Cell("timeout", time.perf_counter() - t)
    return Cell(v.outcome, time.perf_counter() - t, v.stats.vertices_expanded)


def _timed_parallel(f, n: int, d: int, budget: Budget, workers) -> Cell:
    t = time.perf_counter()
    orch = Orchestrator(f, n, d, workers=workers, budget=budget, report=io.StringIO())
    try:
        v = orch.run()
    except JobError as e:
        outcome = "timeout" if "budget" in str(e) else "error"
        return Cell(outcome, time.perf_counter() - t)
    seconds = time.perf_counter() - t
    work = max((h.result.stats.vertices_expanded for h in orch.handles if h.result), default=0)
    return Cell(v.outcome, seconds, work)


def run_suite(items: Sequence[BenchItem], jobs_list: Sequence[int], depth_list: Sequence[int],
              budget: Budget, workers: Optional[int] = None) -> SuiteReport:
    """Run every item serially and under each (jobs, split_depth) configuration."""
    if not items:
        raise EmptySuiteError("empty suite")
    report = SuiteReport([(n, d) for n in jobs_list for d in depth_list])
    for item in items:
        log.info("bench %s: %s", item.name, render(item.formula))
        report.names.append(item.name)
        s = _timed_serial(item.formula, budget)
        report.serial[item.name] = s
        report.classes[item.name] = classify(s.seconds, s.outcome) if s.solved else OUT_OF_RANGE
        for n, d in report.configs:
            report.parallel[item.name, n, d] = _timed_parallel(item.formula, n, d, budget, workers)
    return report
