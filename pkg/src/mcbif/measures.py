"""Hilbert-function grids, conflict detectors and the averaged conflict measures."""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .bifiltration import CONSTRUCTIONS, _check_cap
from .complex import DEFAULT_MAX_TRIANGLES, GF2Basis, UnionFind
from .core import BigradeGrid, PartitionSequence


class _RowHomology:
    """Betti numbers of a growing 2-complex, updated simplex by simplex.

    Edge bits are assigned in insertion order, so a new triangle's pivot is one of
    its newest edges and reductions stay short.
    """

    def __init__(self):
        self.uf = UnionFind()
        self.edge_bit: dict = {}
        self.triangles: set = set()
        self.basis = GF2Basis()

    def add_vertices(self, vs) -> None:
        for v in vs:
            self.uf.add(v)

    def add_edges(self, es) -> None:
        for a, b in es:
            if (a, b) in self.edge_bit:
                continue
            self.edge_bit[(a, b)] = len(self.edge_bit)
            self.uf.union(a, b)

    def add_triangles(self, ts) -> None:
        bit = self.edge_bit
        for t in ts:
            if t in self.triangles:
                continue
            self.triangles.add(t)
            a, b, c = t
            self.basis.add((1 << bit[(a, b)]) | (1 << bit[(a, c)]) | (1 << bit[(b, c)]))

    @property
    def betti0(self) -> int:
        return self.uf.n_components

    @property
    def betti1(self) -> int:
        return len(self.edge_bit) - len(self.uf.parent) + self.uf.n_components - self.basis.rank


def _fill_row(seq: PartitionSequence, i: int, construction: str, hf0: np.ndarray, hf1: np.ndarray) -> None:
    """Fill ``HF_0``/``HF_1`` for row ``i`` by growing one complex from ``(i, i)`` to ``(i, M - 1)``.

    Only cone triangles through the first vertex of every maximal simplex are fed to
    the boundary rank; they span the same boundary space as all of its triangles.
    A layer repeating a partition already in the window leaves the union complex
    unchanged, and a one-block partition makes it contractible.
    """
    m = seq.m
    row = _RowHomology()
    seen: set = set()
    if construction == "element":
        row.add_vertices(range(seq.n_elements))
    else:
        ids = np.zeros(seq.n_elements, dtype=np.int64)
        chains: list[list] = [[]]
    for j in range(i, m):
        part = seq.partitions[j]
        if len(part) == 1:
            hf0[i, j:] = 1
            hf1[i, j:] = 0
            return
        if part not in seen:
            seen.add(part)
            if construction == "element":
                edges, tris = [], []
                for b in part.blocks:
                    s = sorted(b)
                    edges.extend(combinations(s, 2))
                    apex = s[0]
                    tris.extend((apex, a, c) for a, c in combinations(s[1:], 2))
            else:
                labels = seq.label_matrix[j]
                row.add_vertices((j, c) for c in range(len(part)))
                keys, inverse = np.unique(ids * len(part) + labels, return_inverse=True)
                edges, tris = [], []
                new_chains = []
                for key in keys.tolist():
                    chain = chains[key // len(part)]
                    top = (j, key % len(part))
                    edges.extend((u, top) for u in chain)
                    if chain:
                        apex = chain[0]
                        tris.extend((apex, u, top) for u in chain[1:])
                    new_chains.append(chain + [top])
                ids = inverse.reshape(-1)
                chains = new_chains
            row.add_edges(edges)
            row.add_triangles(tris)
        hf0[i, j] = row.betti0
        hf1[i, j] = row.betti1


def hilbert_grids(seq: PartitionSequence, construction: str = "nerve",
                  max_triangles: int | None = DEFAULT_MAX_TRIANGLES) -> tuple[BigradeGrid, BigradeGrid]:
    """Both ``HF_0`` and ``HF_1`` over every bigrade, for either equivalent construction.

    Rows share nothing, and each is filled incrementally; the Betti numbers agree
    with those of the complexes returned by the ``build_*`` functions.
    """
    if construction not in CONSTRUCTIONS:
        raise ValueError(f"unknown construction {construction!r}")
    if construction == "element":
        _check_cap(seq, 0, seq.m - 1, max_triangles)
    m = seq.m
    hf0 = np.zeros((m, m), dtype=np.int64)
    hf1 = np.zeros((m, m), dtype=np.int64)
    for i in range(m):
        _fill_row(seq, i, construction, hf0, hf1)
    cps = seq.change_points
    return BigradeGrid(hf0, cps), BigradeGrid(hf1, cps)


def hilbert_grid(seq: PartitionSequence, dim: int, construction: str = "nerve",
                 max_triangles: int | None = DEFAULT_MAX_TRIANGLES) -> BigradeGrid:
    """``HF_dim(i, j)`` for every bigrade, ``dim`` in ``{0, 1}``."""
    if dim not in (0, 1):
        raise ValueError("only dimensions 0 and 1 are supported")
    return hilbert_grids(seq, construction, max_triangles)[dim]


def _check_grid(seq: PartitionSequence, grid: BigradeGrid) -> None:
    if grid.m != seq.m or grid.change_points != seq.change_points:
        raise ValueError("grid was not computed for this sequence")


def window_min_counts(seq: PartitionSequence) -> np.ndarray:
    """``min_{r in [i, j]} |theta(t_r)|`` for all bigrades (zero below the diagonal)."""
    m = seq.m
    counts = np.asarray(seq.block_counts, dtype=np.int64)
    out = np.zeros((m, m), dtype=np.int64)
    for i in range(m):
        out[i, i:] = np.minimum.accumulate(counts[i:])
    return out


def detect_zero_conflict(seq: PartitionSequence, i: int, j: int, hf0: BigradeGrid) -> bool:
    """0-conflict on window ``(i, j)``: ``HF_0`` strictly below the window's fewest blocks."""
    seq.check_window(i, j)
    _check_grid(seq, hf0)
    return hf0[i, j] < min(seq.block_counts[i:j + 1])


def _co_clustered_somewhere(labels: np.ndarray, xs: tuple[int, ...]) -> bool:
    # labels: window rows x elements
    first = labels[:, xs[0]]
    together = np.ones(labels.shape[0], dtype=bool)
    for x in xs[1:]:
        together &= labels[:, x] == first
    return bool(together.any())


def triangle_zero_conflict_witness(seq: PartitionSequence, i: int, j: int) -> tuple[int, int, int] | None:
    """A triple ``(x, y, z)`` with ``x ~ y`` and ``y ~ z`` in the window but never all three together.

    Walks every path of length two in the window's element 1-skeleton. Open wedges
    are found first; otherwise a closed graph triangle not filled by any single
    cluster (a cyclic conflict) is searched for.
    """
    seq.check_window(i, j)
    labels = np.asarray(seq.label_matrix[i:j + 1])
    n = seq.n_elements
    adj: list[set[int]] = [set() for _ in range(n)]
    for row in labels:
        groups: dict[int, list[int]] = {}
        for x, c in enumerate(row.tolist()):
            groups.setdefault(c, []).append(x)
        for g in groups.values():
            for x in g:
                adj[x].update(g)
    for x in range(n):
        adj[x].discard(x)
    cyclic = None
    for y in range(n):
        for x, z in combinations(sorted(adj[y]), 2):
            if z not in adj[x]:
                return x, y, z
            if cyclic is None and not _co_clustered_somewhere(labels, (x, y, z)):
                cyclic = (x, y, z)
    return cyclic


def detect_triangle_zero_conflict(seq: PartitionSequence, i: int, j: int) -> bool:
    return triangle_zero_conflict_witness(seq, i, j) is not None


def cell_weights(change_points) -> np.ndarray:
    """Area of the part of ``{s <= t}`` that maps to each bigrade cell.

    Piece ``m`` has length ``t_{m+1} - t_m``; the last piece gets the mean spacing
    ``(t_M - t_1) / (M - 1)`` (unit length when ``M = 1``). Off-diagonal cells are
    rectangles, diagonal cells half squares, and the weights sum to
    ``(T - t_1)^2 / 2``.
    """
    t = np.asarray(change_points, dtype=float)
    m = len(t)
    if m == 1:
        delta = np.array([1.0])
    else:
        delta = np.append(np.diff(t), (t[-1] - t[0]) / (m - 1))
    w = np.triu(np.outer(delta, delta), k=1)
    w[np.diag_indices(m)] = delta**2 / 2
    return w


def average_conflict0(seq: PartitionSequence, hf0: BigradeGrid) -> float:
    """Average 0-conflict: one minus the area-mean of ``HF_0 / min diagonal HF_0`` over the window."""
    _check_grid(seq, hf0)
    if seq.m == 1:
        return 0.0
    w = cell_weights(seq.change_points)
    diag = np.diagonal(hf0.values).astype(float)
    m = seq.m
    denom = np.ones((m, m))
    for i in range(m):
        denom[i, i:] = np.minimum.accumulate(diag[i:])
    ratio = np.triu(hf0.values / denom)
    val = 1.0 - float((w * ratio).sum() / w.sum())
    # exact zeros for conflict-free grids; guards against round-off
    if not (np.triu(hf0.values) < np.triu(denom)).any():
        return 0.0
    return min(max(val, 0.0), 1.0)


def average_conflict1(seq: PartitionSequence, hf1: BigradeGrid) -> float:
    """Average 1-conflict: area-mean of ``HF_1`` over all bigrades."""
    _check_grid(seq, hf1)
    if seq.m == 1:
        return 0.0
    w = cell_weights(seq.change_points)
    return float((w * hf1.values).sum() / w.sum())


def hilbert_distance(a: BigradeGrid, b: BigradeGrid) -> float:
    """Area-weighted L2 distance between two grids over the same change points."""
    if a.change_points != b.change_points:
        raise ValueError("grids must share their change points")
    w = cell_weights(a.change_points)
    diff = (a.values - b.values).astype(float)
    return math.sqrt(float((w * diff**2).sum()))


@dataclass(frozen=True)
class ConflictSummary:
    avg_conflict0: float
    avg_conflict1: float
    hf0: BigradeGrid
    hf1: BigradeGrid


def conflict_summary(seq: PartitionSequence, construction: str = "nerve") -> ConflictSummary:
    hf0, hf1 = hilbert_grids(seq, construction)
    return ConflictSummary(average_conflict0(seq, hf0), average_conflict1(seq, hf1), hf0, hf1)
