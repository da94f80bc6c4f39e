import pytest
from hypothesis import given, strategies as st


from ltlpar.gen import GenConfig, gen
from ltlpar.partition import CrossingCounter, DeclineRule, DeclineState, JobSpec, decline, minstd_first, to_job
from ltlpar.tableau import UNSAT, Budget, Hook, solve


def test_minstd_first_outputs():
    assert minstd_first(1) == 16807
    assert minstd_first(0) == 16807
    assert minstd_first(2) == 33614


def test_to_job_first_block_round_robin():
    assert [to_job(i, 4) for i in range(1, 5)] == [1, 2, 3, 4]


def test_to_job_5_of_4():
    # second block starts at 1 + (16807 mod 4)
    assert to_job(5, 4) == 4
    assert [to_job(i, 4) for i in range(5, 9)] == [4, 1, 2, 3]


def test_to_job_rejects_bad_input():
    with pytest.raises(ValueError):
        to_job(0, 4)
    with pytest.raises(ValueError):
        to_job(1, 0)


@given(st.integers(1, 64), st.integers(0, 99))
def test_blocks_are_bijections(n, block):
    assert sorted(to_job(block * n + k, n) for k in range(1, n + 1)) == list(range(1, n + 1))


@given(st.integers(1, 32), st.integers(1, 20))
def test_near_uniform_load(n, blocks):
    counts = [0] * (n + 1)
    for i in range(1, blocks * n + 1):
        counts[to_job(i, n)] += 1
    assert counts[1:] == [blocks] * n


def test_jobspec_validation():
    assert str(JobSpec(1, 8, 18)) == "1/8@18"
    for bad in [(9, 8, 18), (1, 0, 18), (1, 8, 0), (-1, 8, 18)]:
        with pytest.raises(ValueError):
            JobSpec(*bad)


def run_depths(depths, spec):
    state = DeclineState()
    vetoes = []
    for d in depths:
        veto, state = decline(state, d, spec)
        vetoes.append(veto)
    return vetoes, state


def test_decline_block_zero():
    # four separate crossings of depth 3
    vetoes, state = run_depths([2, 3, 2, 3, 2, 3, 2, 3], JobSpec(1, 2, 3))
    # block 1 starts at job 1 + (16807 mod 2) = 2
    assert [v for v, d in zip(vetoes, [2, 3] * 4) if d == 3] == [False, True, True, False]
    assert state.width == 4


def test_crossing_definition():
    vetoes, state = run_depths([1, 2, 3, 3, 2, 3], JobSpec(1, 1, 3))
    assert state.width == 2
    assert not any(vetoes)


def test_job_zero_declines_everything_and_stays_above():
    spec = JobSpec(0, 8, 5)
    vetoes, state = run_depths([1, 2, 3, 4, 5, 4, 5], spec)
    assert vetoes == [False] * 4 + [True, False, True]
    with pytest.raises(AssertionError):
        decline(DeclineState(5, 1), 6, spec)

    deepest = []

    class Watch(Hook):
        def on_vertex(self, ordinal, depth):
            deepest.append(depth)

    v = solve(gen(GenConfig(20, 97)), hooks=[Watch(), DeclineRule(spec)])
    assert v.outcome == UNSAT
    assert max(deepest) == 5


def _jobs(f, n, d):
    rules = []
    outs = []
    for j in range(1, n + 1):
        r = DeclineRule(JobSpec(j, n, d))
        outs.append(solve(f, hooks=[r]))
        rules.append(r)
    return outs, rules


@pytest.mark.parametrize("seed", [17, 97, 218, 265, 123])
@pytest.mark.parametrize("n,d", [(2, 3), (3, 5), (8, 8)])
def test_partition_and_conservation_unsat(seed, n, d):
    f = gen(GenConfig(5 + seed % 21, seed))
    cc = CrossingCounter(d)
    serial = solve(f, hooks=[cc], budget=Budget(10**6))
    assert serial.outcome == UNSAT
    outs, rules = _jobs(f, n, d)
    assert all(o.outcome == UNSAT for o in outs)
    kept = [set(r.kept) for r in rules]
    assert set().union(*kept) == set(range(1, cc.width + 1))
    assert sum(map(len, kept)) == cc.width
    assert all(r.state.width == cc.width for r in rules)
    assert sum(r.below for r in rules) == cc.below


def test_job_zero_dominance():
    f = gen(GenConfig(13, 218))
    for d in (2, 4, 6, 10):
        cc = CrossingCounter(d)
        assert solve(f, hooks=[cc]).outcome == UNSAT
        v0 = solve(f, hooks=[DeclineRule(JobSpec(0, 1, d))])
        assert v0.stats.vertices_expanded == cc.above
