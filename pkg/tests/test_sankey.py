import numpy as np
import pytest
from hypothesis import given, settings

from mcbif.core import Partition, PartitionSequence
from mcbif.measures import detect_triangle_zero_conflict, detect_zero_conflict, hilbert_grid, hilbert_grids
from mcbif.sankey import (
    LayerConflicts,
    Layout,
    WidthCapExceeded,
    build_sankey,
    classify_layer_conflicts,
    crossing_number,
    edge_list_rows,
    hf1_crossing_bound,
    layer_crossings,
    minimize_crossings_bruteforce,
    minimize_crossings_exact,
    minimize_crossings_heuristic,
)

from helpers import three_cycle, hierarchical_fixture, random_sequence, seq_from_blocks, sequences


def four_cycle():
    return seq_from_blocks(4, [[[1, 2], [3, 4]], [[1, 3], [2, 4]]])


def test_hierarchical_sequence_gives_a_merge_tree():
    d = build_sankey(hierarchical_fixture())
    for m in range(d.m - 1):
        out_deg = np.bincount([u for u, _ in d.edges[m]], minlength=d.widths[m])
        in_deg = np.bincount([v for _, v in d.edges[m]], minlength=d.widths[m + 1])
        assert (out_deg == 1).all() and (in_deg >= 1).all()


def test_three_cycle_diagram():
    d = build_sankey(three_cycle())
    assert d.widths == (3, 2, 2, 2, 1)
    # {12|3} -> {1|23}: 12 splits, 3 joins 2
    assert set(d.edges[1]) == {(0, 0), (0, 1), (1, 1)}
    assert d.weights[1] == {(0, 0): 1, (0, 1): 1, (1, 1): 1}
    assert sum(d.weights[0].values()) == 3


def test_constant_sequence_has_parallel_edges():
    p = Partition(5, [[0, 1], [2], [3, 4]])
    d = build_sankey(PartitionSequence([p, p, p]))
    assert all(set(e) == {(0, 0), (1, 1), (2, 2)} for e in d.edges)
    assert crossing_number(d, Layout.identity(d)) == 0


def test_single_inversion_and_shared_endpoints():
    assert layer_crossings([(0, 0), (1, 1)], (0, 1), (1, 0)) == 1
    assert layer_crossings([(0, 0), (0, 1)], (0,), (1, 0)) == 0
    assert layer_crossings([(0, 1), (1, 0), (2, 2)], (0, 1, 2), (0, 1, 2)) == 1


def test_four_cycle_cannot_be_untangled():
    d = build_sankey(four_cycle())
    for rankings in [((0, 1), (0, 1)), ((0, 1), (1, 0)), ((1, 0), (0, 1)), ((1, 0), (1, 0))]:
        assert crossing_number(d, Layout(rankings)) >= 1
    assert minimize_crossings_exact(d)[1] == 1
    assert minimize_crossings_bruteforce(d)[1] == 1


def test_four_cycle_bound_is_tight():
    seq = four_cycle()
    hf1 = hilbert_grid(seq, 1)
    assert hf1_crossing_bound(seq, hf1) == 1 == minimize_crossings_exact(build_sankey(seq))[1]


def test_trees_reach_zero():
    d = build_sankey(hierarchical_fixture())
    assert minimize_crossings_exact(d)[1] == 0
    assert minimize_crossings_heuristic(d)[1] == 0
    assert hf1_crossing_bound(hierarchical_fixture(), hilbert_grid(hierarchical_fixture(), 1)) == 0


def test_three_cycle_exact_equals_bruteforce():
    d = build_sankey(three_cycle())
    layout, best = minimize_crossings_exact(d)
    assert best == minimize_crossings_bruteforce(d)[1]
    assert crossing_number(d, layout) == best


def test_exact_solver_width_cap():
    seq = PartitionSequence([Partition.singletons(5), Partition.whole(5)])
    with pytest.raises(WidthCapExceeded) as info:
        minimize_crossings_exact(build_sankey(seq), max_width=4)
    assert info.value.layer == 0 and "layer 0" in str(info.value)


def test_dp_matches_bruteforce_on_small_diagrams():
    rng = np.random.default_rng(21)
    checked = 0
    while checked < 150:
        seq = random_sequence(rng, int(rng.integers(2, 8)), int(rng.integers(2, 5)), max_blocks=4)
        d = build_sankey(seq)
        if max(d.widths) > 4:
            continue
        layout, best = minimize_crossings_exact(d)
        assert crossing_number(d, layout) == best
        assert best == minimize_crossings_bruteforce(d)[1]
        checked += 1


@settings(max_examples=60, deadline=None)
@given(sequences(max_n=7, max_m=6))
def test_heuristic_bounds_and_idempotence(seq):
    d = build_sankey(seq)
    exact = minimize_crossings_exact(d)[1]
    layout, h = minimize_crossings_heuristic(d)
    assert h >= exact and crossing_number(d, layout) == h
    assert h <= crossing_number(d, Layout.identity(d))
    assert minimize_crossings_heuristic(d, initial=layout)[1] <= h
    assert hf1_crossing_bound(seq, hilbert_grid(seq, 1)) <= exact


def test_heuristic_rejects_bad_arguments():
    d = build_sankey(three_cycle())
    with pytest.raises(ValueError):
        minimize_crossings_heuristic(d, sweeps=0)
    with pytest.raises(ValueError):
        crossing_number(d, Layout(((0, 1),)))
    with pytest.raises(ValueError):
        Layout(((0, 0),))


def test_layer_conflict_classification():
    merge = build_sankey(seq_from_blocks(4, [[], [[1, 2], [3, 4]]]))
    assert classify_layer_conflicts(merge, 0) == LayerConflicts(False, False, False)
    # one cluster splits while another joins: chained triple, no cycle
    chain = build_sankey(seq_from_blocks(3, [[[1, 2]], [[2, 3]]]))
    c = classify_layer_conflicts(chain, 0)
    assert c.zero and c.triangle_zero and not c.one
    # a split and a separate merge: 0-conflict without a chained triple
    apart = build_sankey(seq_from_blocks(4, [[[1, 2]], [[3, 4]]]))
    a = classify_layer_conflicts(apart, 0)
    assert a.zero and not a.triangle_zero and not a.one
    cyc = classify_layer_conflicts(build_sankey(four_cycle()), 0)
    assert cyc.zero and cyc.triangle_zero and cyc.one
    with pytest.raises(IndexError):
        classify_layer_conflicts(merge, 1)


@settings(max_examples=60, deadline=None)
@given(sequences(max_n=7, max_m=4, min_m=2))
def test_layer_classification_matches_grids(seq):
    hf0, hf1 = hilbert_grids(seq)
    d = build_sankey(seq)
    for m in range(seq.m - 1):
        c = classify_layer_conflicts(d, m)
        assert c.zero == detect_zero_conflict(seq, m, m + 1, hf0)
        assert c.triangle_zero == detect_triangle_zero_conflict(seq, m, m + 1)
        assert c.one == (hf1[m, m + 1] > 0)


def test_edge_list_rows_are_one_based():
    d = build_sankey(three_cycle())
    rows = list(edge_list_rows(d, Layout.identity(d)))
    assert rows[0] == (1, 1, 1, 1)
    assert {r[0] for r in rows} == {1, 2, 3, 4}
    assert sum(r[3] for r in rows) == 3 * 4
