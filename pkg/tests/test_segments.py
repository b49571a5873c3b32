import random

import pytest

from conftest import complete, cycle, make
from corpus import atlas_corpus
from fapkit.connectivity import Mode, feasible_on
from fapkit.graph import Solution
from fapkit.segments import (
    Kind,
    census,
    classify,
    classified_segments,
    degrees,
    enumerate_segments,
    high_degree_vertices,
    special_segments,
)
from fapkit.solver import step1

# C4 on a=0, b=1, c=2, d=3 plus the chord a-c (edge 4)
C4_CHORD = make(4, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2)])


def full(inst):
    return Solution.full(inst)


def test_high_degree_examples(k4):
    assert high_degree_vertices(full(cycle(5))) == set()
    assert high_degree_vertices(full(k4)) == {0, 1, 2, 3}
    assert high_degree_vertices(full(C4_CHORD)) == {0, 2}


def test_enumerate_c4_with_chord():
    segs = enumerate_segments(full(C4_CHORD))
    assert [s.vertices for s in segs] == [(0, 1, 2), (0, 3, 2), (0, 2)]
    assert [s.length for s in segs] == [2, 2, 1]
    assert segs[2].trivial


def test_enumerate_cycle_is_empty():
    assert enumerate_segments(full(cycle(6))) == []


def test_enumerate_k4_gives_six_trivial(k4):
    segs = enumerate_segments(full(k4))
    assert len(segs) == 6 and all(s.trivial for s in segs)


def test_classify_c4_with_chord():
    sol = full(C4_CHORD)
    for mode in Mode:
        abc, adc, chord = classified_segments(sol, mode)
        assert abc.kind is Kind.STRONG and abc.special
        assert adc.kind is Kind.STRONG and adc.special
        assert chord.kind is Kind.STRONG and not chord.special


def test_theta_length_three_path_is_strong(theta_223):
    sol = full(theta_223)
    segs = classified_segments(sol, Mode.TWO_VC)
    long = [s for s in segs if s.length == 3]
    assert len(long) == 1
    assert long[0].kind is Kind.STRONG
    # the residual is the 4-cycle 0-2-1-3
    residual = sol.member.difference(long[0].edges)
    assert feasible_on(sol.instance, [0, 1, 2, 3], residual, Mode.TWO_VC)


def test_special_needs_a_unit_side_edge_and_zero_interior():
    # theta with paths 0-2-1 (unit, zero), 0-3-1 (zero, zero), 0-4-5-1 (unit, zero, unit)
    inst = make(6, [(0, 2, 1), (2, 1, 0), (0, 3, 0), (3, 1, 1), (0, 4, 1), (4, 5, 0), (5, 1, 1)])
    segs = {s.vertices: s for s in classified_segments(full(inst), Mode.TWO_VC)}
    assert segs[(0, 2, 1)].special
    assert segs[(0, 3, 1)].special
    assert segs[(0, 4, 5, 1)].special
    inst2 = make(6, [(0, 2, 0), (2, 1, 0), (0, 3, 1), (3, 1, 1), (0, 4, 1), (4, 5, 1), (5, 1, 1)])
    segs2 = {s.vertices: s for s in classified_segments(full(inst2), Mode.TWO_VC)}
    assert not segs2[(0, 2, 1)].special
    assert not segs2[(0, 4, 5, 1)].special  # unit interior edge
    assert segs2[(0, 3, 1)].special


def test_strong_and_weak_examples():
    # K4 minus edge (1,3): segments 0-1-2, 0-3-2 and the chord 0-2
    inst = make(4, [(0, 1), (1, 2), (0, 2), (0, 3), (3, 2)])
    sol = full(inst)
    for seg in classified_segments(sol, Mode.TWO_VC):
        assert seg.kind is Kind.STRONG
    # in a theta graph with three 2-paths, removing any one leaves a 4-cycle
    theta = make(5, [(0, 2), (2, 1), (0, 3), (3, 1), (0, 4), (4, 1)])
    assert all(s.kind is Kind.STRONG for s in classified_segments(full(theta), Mode.TWO_VC))
    # triangle 0-1-2 with a long detour 0-3-4-5-2
    weak = make(6, [(0, 1), (1, 2), (2, 0), (0, 3), (3, 4), (4, 5), (5, 2)])
    kinds = {s.vertices: s.kind for s in classified_segments(full(weak), Mode.TWO_VC)}
    assert kinds[(0, 3, 4, 5, 2)] is Kind.STRONG
    assert kinds[(0, 1, 2)] is Kind.STRONG
    assert kinds[(0, 2)] is Kind.STRONG
    # two triangles sharing 0, linked by 2-5-6-3: dropping the link leaves a cut vertex
    bowtie_path = make(7, [(0, 1), (1, 2), (0, 2), (0, 3), (3, 4), (4, 0), (2, 5), (5, 6), (6, 3)])
    kinds = {s.vertices: s.kind for s in classified_segments(full(bowtie_path), Mode.TWO_VC)}
    assert kinds[(2, 5, 6, 3)] is Kind.WEAK


def test_closed_segment_only_in_edge_mode(bowtie):
    segs = enumerate_segments(full(bowtie))
    assert [s.closed for s in segs] == [True, True]
    assert census(classified_segments(full(bowtie), Mode.TWO_EC))["closed"] == 2


def test_census_counts():
    counts = census(classified_segments(full(C4_CHORD), Mode.TWO_VC))
    assert counts == {"total": 3, "trivial": 1, "strong": 3, "weak": 0, "special": 2, "closed": 0}


def _solutions(limit=600):
    rng = random.Random(3)
    pool = list(atlas_corpus())
    rng.shuffle(pool)
    for inst in pool[:limit]:
        for mode in Mode:
            yield step1(inst, mode), mode
            yield full(inst), mode


@pytest.mark.parametrize("chunk", range(3))
def test_segment_invariants_over_corpus(chunk):
    seen = 0
    for i, (sol, mode) in enumerate(_solutions()):
        if i % 3 != chunk or not sol.is_feasible(mode):
            continue
        seen += 1
        deg = degrees(sol)
        segs = classified_segments(sol, mode)
        if high_degree_vertices(sol):
            edges = sorted(e for s in segs for e in s.edges)
            assert edges == sorted(sol.member)
        else:
            assert segs == []
        for s in segs:
            assert deg[s.vertices[0]] >= 3 and deg[s.vertices[-1]] >= 3
            assert all(deg[v] == 2 for v in s.internal_vertices)
            if mode is Mode.TWO_VC:
                assert not s.closed
            if s.special:
                assert s.kind is Kind.STRONG and s.length >= 2
            if s.length == 2:
                assert s.side_vertices[0] == s.side_vertices[1]
            assert classify(s, sol, mode) == s
        assert [s for s in segs if s.special] == special_segments(sol, mode)
        assert classified_segments(sol, mode) == segs
    assert seen > 100


def test_segments_canonical_order_by_smallest_edge():
    sol = full(complete(5))
    segs = enumerate_segments(sol)
    keys = [min(s.edges) for s in segs]
    assert keys == sorted(keys)
