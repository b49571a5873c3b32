import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import cycle, make
from corpus import atlas_corpus
from fapkit.connectivity import Mode
from fapkit.errors import BridgeInInput, DisconnectedInput, InfeasibleInput, TraceMismatch
from fapkit.graph import Solution
from fapkit.instances import GenParams, gen_random
from fapkit.oracle import feasible_by_definition, opt_exhaustive
from fapkit.solver import (
    Pop,
    Push,
    RDKept,
    RDRemoved,
    format_trace,
    replay,
    reverse_delete,
    solve,
    step1,
    step2,
    unit_minimal,
)

TRIANGLE_ZERO = make(3, [(0, 1, 0), (1, 2, 0), (0, 2, 1)])
C4_CHORD = make(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])
# the smallest generated instance whose run exercises the stack
STACK_CASE = gen_random(GenParams(6, 4, 0.0, seed=0))


def _min_feasible_size(inst, mode):
    pairs = [inst.endpoints(e) for e in range(inst.m)]
    for k in range(inst.n, inst.m + 1):
        for sub in itertools.combinations(range(inst.m), k):
            if feasible_by_definition(inst.n, [pairs[e] for e in sub], mode):
                return k
    return None


def test_reverse_delete_keeps_c4(c4):
    full = Solution.full(c4)
    assert reverse_delete(full, range(4), (), Mode.TWO_VC) == full


def test_reverse_delete_k4_to_hamiltonian_cycle(k4):
    out = reverse_delete(Solution.full(k4), range(6), (), Mode.TWO_VC)
    assert len(out.member) == 4 == _min_feasible_size(k4, Mode.TWO_VC)
    # ascending ids: (0,1) goes first, (2,3) last
    assert out.sorted_edges() == [1, 2, 3, 4]
    assert out.is_feasible(Mode.TWO_VC)


def test_reverse_delete_drops_chord():
    out = reverse_delete(Solution.full(C4_CHORD), [4], (), Mode.TWO_VC)
    assert out.sorted_edges() == [0, 1, 2, 3]


def test_reverse_delete_rejects_infeasible_start(c4):
    with pytest.raises(InfeasibleInput):
        reverse_delete(Solution(c4, {0, 1, 2}), [0], (), Mode.TWO_VC)


def test_reverse_delete_second_list_runs_after_first(k4):
    # edges (0,1) and (0,2) share vertex 0, so only the first one tried goes
    out = reverse_delete(Solution.full(k4), [1], [0], Mode.TWO_VC)
    assert out.sorted_edges() == [0, 2, 3, 4, 5]
    out = reverse_delete(Solution.full(k4), [0], [1], Mode.TWO_VC)
    assert out.sorted_edges() == [1, 2, 3, 4, 5]


def test_step1_examples(k4):
    assert step1(TRIANGLE_ZERO).member == frozenset({0, 1, 2})
    assert step1(TRIANGLE_ZERO).cost == 1
    assert step1(cycle(5)).cost == 5
    assert step1(k4).cost == 4


def test_step2_hamiltonian_start_is_unchanged():
    inst = cycle(6)
    f0 = step1(inst)
    sol, report = step2(inst, f0)
    assert sol == f0
    assert report.step2_events == []


def test_step2_with_empty_h(c4):
    sol, report = step2(c4, Solution.full(c4))
    assert sol.cost == 4 and report.step2_events == []


def test_six_vertex_stack_example():
    assert STACK_CASE.n == 6 and STACK_CASE.m == 10
    sol, report = solve(STACK_CASE, Mode.TWO_VC)
    assert report.step1_cost == 7
    assert report.step2_events == [
        Push(0, 1),
        Pop(0, 1, 0),
        RDRemoved((1, 4)),
        RDKept(0),
    ]
    assert sol.cost == 6 == opt_exhaustive(STACK_CASE, Mode.TWO_VC).opt_cost
    assert replay(STACK_CASE, format_trace(STACK_CASE, sol, report)) == sol


def test_chorded_hexagon_has_no_step2_work():
    # hexagon a..f with chords a-c and a-e, all unit; step 1 always ends on the hexagon
    inst = make(6, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (0, 2), (0, 4)])
    sol, report = solve(inst, Mode.TWO_VC)
    assert sol.cost == 6 and report.pushes == 0


def test_solve_examples(c4, k4):
    assert solve(TRIANGLE_ZERO)[0].cost == 1
    assert solve(c4)[0].cost == 4
    assert solve(k4)[0].cost == 4 == opt_exhaustive(k4).opt_cost


def test_solve_errors():
    with pytest.raises(DisconnectedInput):
        solve(make(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]))
    with pytest.raises(BridgeInInput):
        solve(make(6, [(0, 1), (1, 2), (0, 2), (2, 3), (3, 4), (4, 5), (3, 5)]))


def test_solve_bowtie_per_block(bowtie):
    sol, report = solve(bowtie, Mode.TWO_VC)
    assert len(report.blocks) == 2
    assert sol.cost == 6
    assert sol.is_feasible(Mode.TWO_EC)


def test_report_is_deterministic():
    inst = gen_random(GenParams(30, 40, 0.5, seed=11))
    for mode in Mode:
        a_sol, a_rep = solve(inst, mode)
        b_sol, b_rep = solve(inst, mode)
        assert a_sol == b_sol
        assert format_trace(inst, a_sol, a_rep) == format_trace(inst, b_sol, b_rep)
        assert a_rep == b_rep


def _random_instance(seed):
    rng = random.Random(seed)
    n = rng.randint(4, 14)
    extra = rng.randint(0, min(2 * n, n * (n - 3) // 2))
    return gen_random(GenParams(n, extra, rng.choice([0.0, 0.3, 0.7, 1.0]), seed))


@pytest.mark.parametrize("mode", list(Mode))
def test_algorithm_invariants_on_random_instances(mode, monkeypatch):
    monkeypatch.setenv("FAPKIT_DEBUG_ASSERT", "1")
    for seed in range(150):
        inst = _random_instance(seed)
        sol, report = solve(inst, mode)
        assert sol.is_feasible(mode)
        assert set(inst.zero_edges) <= sol.member
        assert sol.cost <= report.step1_cost
        assert report.max_pushes_per_edge <= 1
        f0 = step1(inst, mode)
        assert f0.cost == report.step1_cost
        assert unit_minimal(f0, mode)
        assert replay(inst, format_trace(inst, sol, report)) == sol


def test_block_costs_add_up(bowtie):
    sol, report = solve(bowtie, Mode.TWO_EC)
    assert sum(b.final_cost for b in report.blocks) == sol.cost == report.final_cost


def test_solution_never_below_optimum_on_atlas():
    for inst in atlas_corpus()[::7]:
        for mode in Mode:
            sol, _ = solve(inst, mode)
            assert sol.cost >= opt_exhaustive(inst, mode).opt_cost


# -- trace tampering ------------------------------------------------------------


def _trace(inst, mode=Mode.TWO_VC):
    sol, report = solve(inst, mode)
    return format_trace(inst, sol, report)


def test_trace_header():
    text = _trace(STACK_CASE)
    lines = text.splitlines()
    assert lines[0] == "fapkit-trace 1"
    assert lines[1].startswith(f"instance {STACK_CASE.fingerprint()} n=6 m=10")
    assert lines[2] == "mode 2vc"
    assert lines[-1].startswith("final cost=6 edges=")


@pytest.mark.parametrize(
    "mutate",
    [
        lambda t: t.replace("final cost=6", "final cost=5"),
        lambda t: t.replace("removed 1,4", "removed 1"),
        lambda t: t.replace("removed 1,4", "removed 1,4,5"),
        lambda t: t.replace("pop 0 side=1 far=0\n", ""),
        lambda t: t.replace("end-block cost=6", "end-block cost=7"),
        lambda t: t.replace("mode 2vc", "mode 3vc"),
        lambda t: t.replace("fapkit-trace 1", "trace"),
        lambda t: t + "bogus 1\n",
        lambda t: "\n".join(t.splitlines()[:-1]) + "\n",
        lambda t: t.replace("block 0", "block 1"),
    ],
)
def test_tampered_trace_rejected(mutate):
    text = _trace(STACK_CASE)
    bad = mutate(text)
    assert bad != text
    with pytest.raises(TraceMismatch):
        replay(STACK_CASE, bad)


def test_trace_for_other_instance_rejected(c4):
    with pytest.raises(TraceMismatch):
        replay(cycle(5), _trace(c4))


def test_deleting_needed_edge_rejected():
    text = _trace(STACK_CASE)
    # edge 0 is kept in the solution, deleting it as a step-1 move must fail or mismatch
    bad = text.replace("block 0 edges=0,1,2,3,4,5,6,7,8,9\n", "block 0 edges=0,1,2,3,4,5,6,7,8,9\ns1 5\ns1 6\n")
    assert bad != text
    with pytest.raises(TraceMismatch):
        replay(STACK_CASE, bad)


@given(st.integers(0, 10_000), st.sampled_from(list(Mode)))
@settings(max_examples=60, deadline=None)
def test_replay_roundtrip_property(seed, mode):
    inst = _random_instance(seed)
    sol, report = solve(inst, mode)
    assert replay(inst, format_trace(inst, sol, report)) == sol


def test_vertex_mode_can_exceed_three_halves():
    # found by the seeded ratio search: the algorithm stops at cost 5 with no
    # special segment left, while 3 unit edges suffice in either mode
    inst = gen_random(GenParams(12, 12, 0.6, seed=7012196))
    sol, report = solve(inst, Mode.TWO_VC)
    assert report.step1_cost == 5 and sol.cost == 5
    assert report.segment_census["special"] == 0
    assert opt_exhaustive(inst, Mode.TWO_VC).opt_cost == 3
    assert opt_exhaustive(inst, Mode.TWO_EC).opt_cost == 3
    assert solve(inst, Mode.TWO_EC)[0].cost == 3
