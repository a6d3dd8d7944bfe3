"""Fixtures and independent oracles shared by the test modules."""

from __future__ import annotations

from collections import deque
from itertools import combinations

import numpy as np
from hypothesis import strategies as st

from mcbif.core import Partition, PartitionSequence


def seq_from_blocks(n, layers, change_points=None):
    """Build a sequence from 1-based block lists, e.g. ``[[[1, 2], [3]], ...]``."""
    parts = []
    for blocks in layers:
        blocks = [[x - 1 for x in b] for b in blocks]
        covered = {x for b in blocks for x in b}
        blocks += [[x] for x in range(n) if x not in covered]
        parts.append(Partition(n, blocks))
    return PartitionSequence(parts, change_points)


def three_cycle():
    """Three elements: singletons, {12|3}, {1|23}, {13|2}, one block."""
    return seq_from_blocks(3, [[], [[1, 2]], [[2, 3]], [[1, 3]], [[1, 2, 3]]])


THREE_CYCLE_HF0 = np.array([
    [3, 2, 1, 1, 1],
    [0, 2, 1, 1, 1],
    [0, 0, 2, 1, 1],
    [0, 0, 0, 2, 1],
    [0, 0, 0, 0, 1],
])
THREE_CYCLE_HF1 = np.zeros((5, 5), dtype=int)
THREE_CYCLE_HF1[0, 3] = THREE_CYCLE_HF1[1, 3] = 1


def four_pairs():
    """Four elements: singletons, all six pairs in turn, then three triples."""
    return seq_from_blocks(4, [
        [],
        [[1, 2]], [[2, 3]], [[3, 4]], [[1, 3]], [[1, 4]], [[2, 4]],
        [[1, 2, 3]], [[2, 3, 4]], [[1, 3, 4]],
    ])


def twin_cyclic():
    return seq_from_blocks(4, [[[1, 2]], [[2, 3]], [[1, 3]]], [1, 2, 3])


def twin_acyclic():
    return seq_from_blocks(4, [[[1, 2]], [[2, 3]], [[3, 4]]], [1, 2, 3])


def hierarchical_fixture():
    return seq_from_blocks(6, [[], [[1, 2]], [[1, 2], [3, 4]], [[1, 2, 3, 4]], [[1, 2, 3, 4], [5, 6]], [[1, 2, 3, 4, 5, 6]]])


def random_sequence(rng, n, m, max_blocks=None):
    max_blocks = n if max_blocks is None else max_blocks
    cols = []
    for _ in range(m):
        k = int(rng.integers(1, max_blocks + 1))
        cols.append(rng.integers(0, k, size=n))
    return PartitionSequence.from_label_columns(cols)


@st.composite
def sequences(draw, max_n=7, max_m=6, min_m=1):
    n = draw(st.integers(1, max_n))
    m = draw(st.integers(min_m, max_m))
    cols = [draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n)) for _ in range(m)]
    gaps = draw(st.lists(st.floats(0.1, 5.0, allow_nan=False), min_size=m, max_size=m))
    return PartitionSequence.from_label_columns(cols, np.cumsum(gaps).tolist())


# --- independent homology oracle: dense boundary matrices, Gaussian elimination mod 2


def gf2_rank_dense(mat: np.ndarray) -> int:
    a = (np.array(mat, dtype=np.uint8) % 2).copy()
    rank = 0
    rows, cols = a.shape
    for c in range(cols):
        pivot = next((r for r in range(rank, rows) if a[r, c]), None)
        if pivot is None:
            continue
        a[[rank, pivot]] = a[[pivot, rank]]
        for r in range(rows):
            if r != rank and a[r, c]:
                a[r] ^= a[rank]
        rank += 1
    return rank


def bfs_components(vertices, edges) -> int:
    adj = {v: [] for v in vertices}
    for a, b in edges:
        adj[a].append(b)
        adj[b].append(a)
    seen, count = set(), 0
    for v in adj:
        if v in seen:
            continue
        count += 1
        queue = deque([v])
        seen.add(v)
        while queue:
            u = queue.popleft()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
    return count


def oracle_bettis(vertices, edges, triangles) -> tuple[int, int]:
    vertices = sorted(vertices, key=repr)
    edges = sorted({tuple(sorted(e, key=repr)) for e in edges}, key=repr)
    triangles = sorted({tuple(sorted(t, key=repr)) for t in triangles}, key=repr)
    vid = {v: k for k, v in enumerate(vertices)}
    eid = {e: k for k, e in enumerate(edges)}
    d1 = np.zeros((len(vertices), len(edges)), dtype=np.uint8)
    for k, (a, b) in enumerate(edges):
        d1[vid[a], k] = d1[vid[b], k] = 1
    d2 = np.zeros((len(edges), len(triangles)), dtype=np.uint8)
    for k, t in enumerate(triangles):
        for face in combinations(t, 2):
            d2[eid[face], k] = 1
    r1 = gf2_rank_dense(d1) if edges else 0
    r2 = gf2_rank_dense(d2) if triangles else 0
    b0 = len(vertices) - r1
    assert b0 == bfs_components(vertices, edges)
    return b0, len(edges) - r1 - r2


def element_window_simplices(seq, i, j):
    """Vertices, edges and triangles of the element complex, straight from the definition."""
    edges, tris = set(), set()
    for r in range(i, j + 1):
        for b in seq[r].blocks:
            s = sorted(b)
            edges.update(combinations(s, 2))
            tris.update(combinations(s, 3))
    return range(seq.n_elements), edges, tris


def oracle_grids(seq):
    """HF_0 / HF_1 from per-bigrade element complexes and dense linear algebra."""
    m = seq.m
    hf0 = np.zeros((m, m), dtype=np.int64)
    hf1 = np.zeros((m, m), dtype=np.int64)
    for i in range(m):
        for j in range(i, m):
            hf0[i, j], hf1[i, j] = oracle_bettis(*element_window_simplices(seq, i, j))
    return hf0, hf1
