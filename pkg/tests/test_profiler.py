import math

import pytest

from ltlpar.formula import parse
from ltlpar.gen import GenConfig, gen
from ltlpar.jobs import run_job
from ltlpar.partition import CrossingCounter, JobSpec
from ltlpar.profiler import (
    TraceError, TraceRecord, estimate_jobs, format_estimate, format_sweep, format_width, measure_overhead,
    read_trace, record_trace, sweep, width_profile, write_trace,
)
from ltlpar.tableau import UNSAT, solve

F123 = gen(GenConfig(5 + 123 % 21, 123))
F218 = gen(GenConfig(5 + 218 % 21, 218))


def test_width_profile_small():
    v, tr = record_trace(parse("p"))
    prof = width_profile(tr)
    assert prof[0] == 1
    assert sum(prof.values()) == v.stats.vertices_expanded
    assert list(prof.values()) == v.stats.width_profile


def test_width_profile_errors():
    with pytest.raises(TraceError):
        width_profile([])
    with pytest.raises(TraceError):
        width_profile([TraceRecord(1, 0, None, 0), TraceRecord(2, 0, None, 0)])


def test_format_width():
    text = format_width({"a": {0: 1, 1: 2}, "b": {0: 1, 2: 5}})
    assert text == "depth,a,b\n0,1,1\n1,2,0\n2,0,5\n"


def test_trace_io_round_trip(tmp_path):
    _, tr = record_trace(F218, 4)
    path = tmp_path / "t.trace"
    write_trace(tr, path, 4)
    assert read_trace(path) == tr
    assert path.read_text().splitlines()[0].startswith("# ordinal,depth,crossing_index,cost_ns")


@pytest.mark.parametrize("body,msg", [
    ("1,0,-,5\n2,1,x,5\n", "line 2"),
    ("1,0,-,5\n1,1,-,5\n", "ordinals"),
    ("1,0,-\n", "4 fields"),
    ("1,-1,-,5\n", "negative"),
])
def test_trace_read_errors(tmp_path, body, msg):
    path = tmp_path / "bad.trace"
    path.write_text(body)
    with pytest.raises(TraceError, match=msg):
        read_trace(path)


def test_overhead_small_when_split_is_shallow():
    # the root and the one crossing vertex
    s, n = measure_overhead(F218, 1)
    assert n == 2 and s >= 0


def test_overhead_monotone_in_depth():
    counts = [measure_overhead(F123, d)[1] for d in range(4, 25)]
    assert counts == sorted(counts)


def test_overhead_equals_serial_above_split():
    for d in (3, 6, 9):
        cc = CrossingCounter(d)
        solve(F123, hooks=[cc])
        assert measure_overhead(F123, d)[1] == cc.above


def test_single_job_estimate_is_serial():
    v, tr = record_trace(F123)
    est = estimate_jobs(tr, 1, 10)
    assert est.makespan == v.stats.vertices_expanded == len(tr)
    cc = CrossingCounter(10)
    solve(F123, hooks=[cc])
    assert est.per_job_cost == {1: cc.below}


@pytest.mark.parametrize("n", [2, 4, 8])
@pytest.mark.parametrize("d", [4, 8, 14])
def test_estimator_exact(n, d):
    _, tr = record_trace(F123, d)
    est = estimate_jobs(tr, n, d)
    actual = {}
    for j in range(1, n + 1):
        out = run_job(F123, JobSpec(j, n, d))
        assert out.outcome == UNSAT
        actual[j] = out.decline.below
    assert est.per_job_cost == actual
    assert est.shared_overhead == measure_overhead(F123, d)[1]
    assert est.makespan >= est.shared_overhead + math.ceil(est.total_below / n)


def test_estimator_rejects_mismatched_indices():
    _, tr = record_trace(F123, 8)
    with pytest.raises(TraceError, match="inconsistent"):
        estimate_jobs(tr, 2, 10)
    assert estimate_jobs(tr, 2, 10, recompute=True).makespan > 0


def test_time_weighted_estimate():
    _, tr = record_trace(F123)
    est = estimate_jobs(tr, 4, 14, weight="time")
    total = sum(r.cost for r in tr) / 1e9
    assert math.isclose(est.shared_overhead + est.total_below, total, rel_tol=1e-9)


def test_balance_with_randomised_blocks():
    _, tr = record_trace(F123)
    est = estimate_jobs(tr, 8, 30)
    loads = list(est.per_job_cost.values())
    assert max(loads) / (sum(loads) / len(loads)) <= 1.5


def test_sweep_grid():
    _, a = record_trace(F123)
    _, b = record_trace(F218)
    grid = sweep({"a": a, "b": b}, [1, 2, 8], [4, 8, 16])
    # one job cannot split anything: the row is flat at the serial total
    assert {grid[1, d] for d in (4, 8, 16)} == {len(a) + len(b)}
    assert all(grid[8, d] <= grid[1, d] for d in (4, 8, 16))
    text = format_sweep(grid, [1, 2, 8], [4, 8, 16])
    assert text.splitlines()[0] == "jobs,d=4,d=8,d=16"
    assert sweep({"a": a}, [2], [0])[2, 0] is None


def test_sweep_chain_gains_nothing():
    # a single branch has one crossing at every depth, so no split helps
    tr = [TraceRecord(i + 1, i, None, 1) for i in range(20)]
    grid = sweep({"chain": tr}, [1, 4], list(range(2, 20, 3)))
    assert set(grid.values()) == {20}


def test_format_estimate():
    _, tr = record_trace(F218)
    text = format_estimate(estimate_jobs(tr, 2, 4))
    lines = text.splitlines()
    assert lines[0] == "job,cost" and lines[-1].startswith("makespan,")
